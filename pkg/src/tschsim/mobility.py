"""Node kinematics: straight-line motion with linear speed ramps.

A node carries a commanded target speed and converges to it linearly at its
acceleration / deceleration rate. Position integration is trapezoidal, which
is exact for the piecewise-linear speed profiles the ramps produce. Grid
boundaries reflect: the heading reverses and the overshoot folds back, with
speed and path length preserved.
"""

from dataclasses import dataclass
from enum import Enum


class CommandKind(Enum):
    ACCELERATE = "accelerate"
    DECELERATE = "decelerate"
    RESTORE_BASE = "restore_base"


@dataclass(frozen=True)
class SpeedCommand:
    kind: CommandKind
    target_mps: float | None = None


def accelerate(to_mps: float) -> SpeedCommand:
    return SpeedCommand(CommandKind.ACCELERATE, to_mps)


def decelerate(to_mps: float) -> SpeedCommand:
    return SpeedCommand(CommandKind.DECELERATE, to_mps)


def restore_base() -> SpeedCommand:
    return SpeedCommand(CommandKind.RESTORE_BASE)


@dataclass(slots=True)
class MotionState:
    x_m: float
    y_m: float
    heading_x: float  # unit vector; +/-x axis in the baseline scenario
    heading_y: float
    speed_mps: float
    target_mps: float
    base_speed_mps: float
    accel_mps2: float = 0.5
    decel_mps2: float = 0.5
    v_max_mps: float = 3.0
    odometer_m: float = 0.0


def step(state: MotionState, dt_s: float) -> None:
    """Advance one motion tick: ramp speed toward the target, then move.

    Displacement uses the average of the pre/post speed (trapezoid), and the
    odometer accumulates the absolute path length.
    """
    v0 = state.speed_mps
    target = state.target_mps
    if v0 < target:
        v1 = min(v0 + state.accel_mps2 * dt_s, target)
    elif v0 > target:
        v1 = max(v0 - state.decel_mps2 * dt_s, target)
    else:
        v1 = v0
    if v1 < 0.0:
        v1 = 0.0
    elif v1 > state.v_max_mps:
        v1 = state.v_max_mps
    disp = 0.5 * (v0 + v1) * dt_s
    state.x_m += state.heading_x * disp
    state.y_m += state.heading_y * disp
    state.odometer_m += disp
    state.speed_mps = v1


def bounce(state: MotionState, width_m: float, height_m: float) -> None:
    """Reflect at the grid boundary; call after each step.

    Speed magnitude and odometer are untouched: the overshoot distance was
    genuinely travelled, just folded back inside the grid.
    """
    while state.x_m < 0.0 or state.x_m > width_m:
        if state.x_m < 0.0:
            state.x_m = -state.x_m
        else:
            state.x_m = 2.0 * width_m - state.x_m
        state.heading_x = -state.heading_x
    while state.y_m < 0.0 or state.y_m > height_m:
        if state.y_m < 0.0:
            state.y_m = -state.y_m
        else:
            state.y_m = 2.0 * height_m - state.y_m
        state.heading_y = -state.heading_y


def command_speed(state: MotionState, command: SpeedCommand) -> None:
    """Set the target speed; the actual speed converges via step ramps."""
    if command.kind is CommandKind.RESTORE_BASE:
        target = state.base_speed_mps
    else:
        target = command.target_mps if command.target_mps is not None else state.base_speed_mps
    state.target_mps = min(max(target, 0.0), state.v_max_mps)
