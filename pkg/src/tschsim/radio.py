"""Log-distance path loss with logistic frame reception.

Received power follows the standard log-distance model

    rssi(d) = tx_power - (pl0 + 10 * eta * log10(d / d0)) + X

with X ~ Normal(0, shadow_sigma^2) drawn independently per transmission.
A frame is accepted with probability 1 / (1 + exp(-(rssi - rssi_50) / width)),
subject to a hard range cutoff at max_range and a detection floor.

The shipped (pl0, eta, rssi_50) triple is not a physical measurement: it is
produced by `calibrate`, which pins the operating envelope so that a link at
the 130 m nominal separation is solid (>= 95% reception) while 450 m is the
edge of detectability (<= 5%). Run `tschsim calibrate-radio` to reproduce it.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

# Anchors used to calibrate the default parameter triple.
CAL_NEAR_M = 130.0
CAL_FAR_M = 450.0
CAL_P_NEAR = 0.95
CAL_P_FAR = 0.05
CAL_RSSI_50_TARGET_DBM = -91.0


class CalibrationError(ValueError):
    pass


@dataclass(frozen=True)
class RadioParams:
    tx_power_dbm: float = 0.0
    pl0_db: float = 7.6       # calibrated, see module docstring
    d0_m: float = 1.0
    eta: float = 3.5          # calibrated
    shadow_sigma_db: float = 3.0
    rssi_50_dbm: float = -91.0  # calibrated
    logistic_width_db: float = 3.0
    max_range_m: float = 450.0
    rssi_floor_dbm: float = -105.0

    def validate(self) -> None:
        if self.d0_m <= 0:
            raise ValueError("radio.d0_m must be > 0")
        if self.eta <= 0:
            raise ValueError("radio.eta must be > 0")
        if self.logistic_width_db <= 0:
            raise ValueError("radio.logistic_width_db must be > 0")
        if self.max_range_m <= 0:
            raise ValueError("radio.max_range_m must be > 0")
        if self.shadow_sigma_db < 0:
            raise ValueError("radio.shadow_sigma_db must be >= 0")
        if self.rssi_floor_dbm >= self.rssi_50_dbm:
            raise ValueError("radio.rssi_floor_dbm must be < radio.rssi_50_dbm")


def mean_rssi(params: RadioParams, distance_m: float) -> float:
    """Mean received power in dBm at the given distance.

    Distances below the reference distance clamp to it, so the model is
    defined (and flat) inside d0.
    """
    d = max(distance_m, params.d0_m)
    loss = params.pl0_db + 10.0 * params.eta * math.log10(d / params.d0_m)
    return params.tx_power_dbm - loss


def sample_rssi(params: RadioParams, distance_m: float, rng: np.random.Generator) -> float:
    """One shadowing realization: mean_rssi plus a zero-mean Gaussian in dB."""
    rssi = mean_rssi(params, distance_m)
    if params.shadow_sigma_db > 0.0:
        rssi += rng.normal(0.0, params.shadow_sigma_db)
    return rssi


def reception_probability(params: RadioParams, rssi_dbm: float, distance_m: float) -> float:
    """Probability that a frame with the given RSSI is decoded.

    Zero beyond max_range and below the detection floor; otherwise the
    logistic curve centred on rssi_50. Uses the numerically stable form so
    extreme RSSI values cannot overflow the exponential.
    """
    if distance_m > params.max_range_m or rssi_dbm < params.rssi_floor_dbm:
        return 0.0
    x = (rssi_dbm - params.rssi_50_dbm) / params.logistic_width_db
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def try_receive(params: RadioParams, distance_m: float, rng: np.random.Generator) -> float | None:
    """Attempt reception of a frame transmitted this slot.

    Returns the drawn RSSI (the value the receiver measures and feeds to its
    link estimator) on success, None on loss. Consumes exactly one shadowing
    draw (when shadow_sigma > 0) and one acceptance draw per attempt.
    """
    rssi = sample_rssi(params, distance_m, rng)
    p = reception_probability(params, rssi, distance_m)
    if rng.random() < p:
        return rssi
    return None


def calibrate(
    params: RadioParams,
    d_near_m: float = CAL_NEAR_M,
    d_far_m: float = CAL_FAR_M,
    p_near: float = CAL_P_NEAR,
    p_far: float = CAL_P_FAR,
    rssi_50_target_dbm: float = CAL_RSSI_50_TARGET_DBM,
) -> RadioParams:
    """Derive (pl0, eta, rssi_50) meeting the reception anchors.

    Procedure (deterministic, shadowing off):
      1. eta: smallest multiple of 0.5 whose RSSI span between the anchors
         covers the logistic margins needed for p_near / p_far.
      2. rssi_50: placed at rssi_50_target_dbm, chosen so the interesting
         threshold band (-95..-85 dBm) sits inside the viable envelope.
      3. pl0: positions the mid-point of the anchor band (in log-distance)
         at rssi_50, rounded to 0.1 dB.

    Raises CalibrationError if the result fails either anchor check.
    """
    if not 0.0 < p_far < p_near < 1.0:
        raise CalibrationError("need 0 < p_far < p_near < 1")
    w = params.logistic_width_db
    margin_near = w * math.log(p_near / (1.0 - p_near))
    margin_far = w * math.log((1.0 - p_far) / p_far)
    decades = 10.0 * math.log10(d_far_m / d_near_m)
    eta = math.ceil((margin_near + margin_far) / decades / 0.5) * 0.5

    mid_log = (math.log10(d_near_m / params.d0_m) + math.log10(d_far_m / params.d0_m)) / 2.0
    pl0 = round(params.tx_power_dbm - rssi_50_target_dbm - 10.0 * eta * mid_log, 1)

    out = replace(params, pl0_db=pl0, eta=eta, rssi_50_dbm=rssi_50_target_dbm)
    got_near = reception_probability(out, mean_rssi(out, d_near_m), d_near_m)
    got_far = reception_probability(out, mean_rssi(out, d_far_m), d_far_m)
    if got_near < p_near:
        raise CalibrationError(
            f"reception at {d_near_m} m is {got_near:.4f}, need >= {p_near}")
    if got_far > p_far:
        raise CalibrationError(
            f"reception at {d_far_m} m is {got_far:.4f}, need <= {p_far}")
    return out
