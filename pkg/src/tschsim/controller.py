"""Link-quality driven speed regulation for child nodes.

A child smooths the RSSI of every frame it hears from its parent with an
exponentially weighted moving average and runs a two-threshold hysteresis:
when the average sinks below t_min it starts regulating its speed to close
the gap; once the average recovers to t_max it restores its base speed.

Two regulation variants exist. The position-aware variant (AC) projects the
parent's offset onto its own heading: parent ahead means speed up, parent
behind means slow down. The blind variant (ACR) guesses the direction
uniformly at random and re-evaluates every acr_eval_window seconds: if the
average got worse since the decision, it flips to the opposite action.

Only children regulate. The root's speed is never touched in any mode.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .mobility import SpeedCommand, accelerate, decelerate, restore_base


class AcMode(Enum):
    OFF = "Off"
    AC = "AC"
    ACR = "ACR"


class Direction(Enum):
    SPEED_UP = "speed_up"
    SLOW_DOWN = "slow_down"


@dataclass(frozen=True)
class AcParams:
    alpha: float = 0.5
    t_min_dbm: float = -90.0
    t_max_dbm: float = -85.0
    v_min_mps: float = 0.0
    v_max_mps: float = 3.0
    acr_eval_window_s: float = 5.0
    # None regulates straight to the v_min / v_max extremes (the ramps
    # provide gradualism); a value requests base_speed +/- step instead.
    regulation_step_mps: float | None = None

    def validate(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("ac.alpha must be in (0, 1]")
        if self.t_min_dbm >= self.t_max_dbm:
            raise ValueError("ac.t_min_dbm must be < ac.t_max_dbm")
        if self.v_min_mps >= self.v_max_mps:
            raise ValueError("ac.v_min_mps must be < ac.v_max_mps")
        if self.acr_eval_window_s <= 0:
            raise ValueError("ac.acr_eval_window_s must be > 0")


@dataclass(slots=True)
class AcState:
    ewma_dbm: float | None = None
    direction: Direction | None = None  # None = idle, set = regulating
    ewma_at_decision_dbm: float = 0.0
    last_eval_s: float = 0.0

    @property
    def regulating(self) -> bool:
        return self.direction is not None


def ewma_update(state: AcState, rssi_dbm: float, alpha: float) -> float:
    """Fold one RSSI sample into the moving average and return it.

    The first sample initializes the average directly.
    """
    if state.ewma_dbm is None:
        state.ewma_dbm = rssi_dbm
    else:
        state.ewma_dbm = alpha * rssi_dbm + (1.0 - alpha) * state.ewma_dbm
    return state.ewma_dbm


def _targets(params: AcParams, base_speed_mps: float) -> tuple[float, float]:
    if params.regulation_step_mps is None:
        return params.v_max_mps, params.v_min_mps
    up = min(params.v_max_mps, base_speed_mps + params.regulation_step_mps)
    down = max(params.v_min_mps, base_speed_mps - params.regulation_step_mps)
    return up, down


def _command_for(direction: Direction, params: AcParams, base_speed_mps: float) -> SpeedCommand:
    up, down = _targets(params, base_speed_mps)
    if direction is Direction.SPEED_UP:
        return accelerate(up)
    return decelerate(down)


def ac_decide(
    state: AcState,
    params: AcParams,
    self_pos: tuple[float, float],
    peer_pos: tuple[float, float],
    heading: tuple[float, float],
    base_speed_mps: float,
) -> SpeedCommand | None:
    """Position-aware decision after an EWMA update.

    Entering regulation picks the direction that closes the range: speed up
    when the peer lies ahead along the current heading, slow down when it
    lies behind.
    """
    ewma = state.ewma_dbm
    if ewma is None:
        return None
    if not state.regulating and ewma < params.t_min_dbm:
        proj = ((peer_pos[0] - self_pos[0]) * heading[0]
                + (peer_pos[1] - self_pos[1]) * heading[1])
        state.direction = Direction.SPEED_UP if proj > 0.0 else Direction.SLOW_DOWN
        return _command_for(state.direction, params, base_speed_mps)
    if state.regulating and ewma >= params.t_max_dbm:
        state.direction = None
        return restore_base()
    return None


def acr_decide(
    state: AcState,
    params: AcParams,
    rng: np.random.Generator,
    now_s: float,
    base_speed_mps: float,
) -> SpeedCommand | None:
    """Blind decision after an EWMA update.

    The initial direction is a fair coin flip. While regulating, the choice
    is re-examined once per evaluation window: a worse average than at the
    last decision means the guess was wrong, so the action flips.
    """
    ewma = state.ewma_dbm
    if ewma is None:
        return None
    if not state.regulating:
        if ewma < params.t_min_dbm:
            state.direction = Direction.SPEED_UP if rng.integers(2) == 0 else Direction.SLOW_DOWN
            state.ewma_at_decision_dbm = ewma
            state.last_eval_s = now_s
            return _command_for(state.direction, params, base_speed_mps)
        return None
    if ewma >= params.t_max_dbm:
        state.direction = None
        return restore_base()
    if now_s - state.last_eval_s >= params.acr_eval_window_s:
        state.last_eval_s = now_s
        if ewma < state.ewma_at_decision_dbm:
            state.direction = (Direction.SLOW_DOWN if state.direction is Direction.SPEED_UP
                               else Direction.SPEED_UP)
            state.ewma_at_decision_dbm = ewma
            return _command_for(state.direction, params, base_speed_mps)
    return None


class ConnectivityController:
    """Wires the EWMA to the configured decision variant for one child node.

    Feed it the RSSI of every frame received from the parent; it returns at
    most one speed command per sample. With the mode off it is inert. While
    the node is disconnected no samples arrive, so the state simply freezes
    until the next reception.
    """

    def __init__(
        self,
        mode: AcMode,
        params: AcParams,
        base_speed_mps: float,
        rng: np.random.Generator | None = None,
    ) -> None:
        if mode is AcMode.ACR and rng is None:
            raise ValueError("ACR mode needs an rng for its guesses")
        self.mode = mode
        self.params = params
        self.base_speed_mps = base_speed_mps
        self.rng = rng
        self.state = AcState()

    def on_sample(
        self,
        rssi_dbm: float,
        now_s: float,
        self_pos: tuple[float, float],
        peer_pos: tuple[float, float],
        heading: tuple[float, float],
    ) -> SpeedCommand | None:
        if self.mode is AcMode.OFF:
            return None
        ewma_update(self.state, rssi_dbm, self.params.alpha)
        if self.mode is AcMode.AC:
            return ac_decide(self.state, self.params, self_pos, peer_pos,
                             heading, self.base_speed_mps)
        return acr_decide(self.state, self.params, self.rng, now_s, self.base_speed_mps)
