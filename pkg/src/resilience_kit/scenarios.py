"""Built-in analysis scenarios: a fighter-jet linearization, a three-room
temperature control system, and small synthetic systems for property tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .resilience import ControlSplit, LinearSystem, split_system

# Linearized fighter-jet dynamics at Mach 0.3, altitude 2000 m; inputs are
# scaled so each actuator range is [-1, 1]. Stored to the two-decimal
# precision of the published tables.
_ADMIRE_A = np.array([
    [-0.02, -4.65,  0.37,  0.00, -0.30,  0.00, 0.0, -9.81, 0.00],
    [ 0.00, -0.78,  0.01,  0.00,  0.97,  0.00, 0.0,  0.00, 0.00],
    [ 0.00,  0.00, -0.19,  0.12,  0.00, -0.98, 0.0,  0.00, 0.10],
    [ 0.00,  0.00, -15.47, -1.50, 0.00,  0.54, 0.0,  0.00, 0.00],
    [ 0.00,  4.18, -0.01,  0.00, -0.78,  0.00, 0.0,  0.00, 0.00],
    [ 0.00,  0.00,  0.95, -0.09,  0.00, -0.34, 0.0,  0.00, 0.00],
    [ 0.00,  0.00,  0.00,  0.00,  0.00,  1.01, 0.0,  0.00, 0.00],
    [ 0.00,  0.00,  0.00,  0.00,  1.00,  0.00, 0.0,  0.00, 0.00],
    [ 0.00,  0.00,  0.00,  1.00,  0.00,  0.12, 0.0,  0.00, 0.00],
])

# Input matrix stored transposed (one row per actuator), as published.
_ADMIRE_BT = np.array([
    [-0.62,  0.00,  0.00,  0.37,  0.67, -0.19, 0.0, 0.0, 0.0],
    [-0.62,  0.00,  0.00, -0.37,  0.67,  0.19, 0.0, 0.0, 0.0],
    [-0.40, -0.02,  0.00, -2.27, -0.55, -0.10, 0.0, 0.0, 0.0],
    [-0.62, -0.04,  0.01, -1.96, -0.88, -0.22, 0.0, 0.0, 0.0],
    [-0.62, -0.04, -0.01,  1.96, -0.88,  0.22, 0.0, 0.0, 0.0],
    [-0.40, -0.02,  0.00,  2.27, -0.55,  0.10, 0.0, 0.0, 0.0],
    [-0.16,  0.00,  0.02,  1.59,  0.00, -0.96, 0.0, 0.0, 0.0],
    [ 0.08,  0.00,  0.00,  0.00, -0.02,  0.00, 0.0, 0.0, 0.0],
    [-0.53,  0.00,  0.11, -0.64,  0.01, -5.34, 0.0, 0.0, 0.0],
    [-1.78, -0.11,  0.00,  0.00, -6.63,  0.00, 0.0, 0.0, 0.0],
])

ADMIRE_ACTUATORS = [
    "right_canard", "left_canard", "right_outboard_elevon",
    "right_inboard_elevon", "left_inboard_elevon", "left_outboard_elevon",
    "rudder", "leading_edge_flaps", "yaw_thrust_vectoring",
    "pitch_thrust_vectoring",
]

ADMIRE_STATES = [
    "velocity [m/s]", "angle_of_attack [rad]", "sideslip_angle [rad]",
    "roll_rate [rad/s]", "pitch_rate [rad/s]", "yaw_rate [rad/s]",
    "heading_angle [rad]", "pitch_angle [rad]", "roll_angle [rad]",
]

# Three-room temperature model physical constants.
TEMP_WALL_AREA = 12.0          # m^2
TEMP_MCP = 42186.0             # J/K
TEMP_U_G1 = 6.27               # W/K, room 1 <-> gable
TEMP_U_12 = 5.08               # W/K, room 1 <-> room 2
TEMP_U_23 = 5.41               # W/K, room 2 <-> room 3
TEMP_U_3G = 6.27               # W/K, room 3 <-> gable
TEMP_Q_HAC = 350.0             # W, central heater/AC
TEMP_Q_DW = 300.0              # W, door/window per room
TEMP_Q_SL = 200.0              # W, solar/loss per room

TEMP_ACTUATORS = ["u_Sl_1", "u_Sl_2", "u_Sl_3", "u_dw_1", "u_dw_2", "u_dw_3", "u_hAC"]
TEMP_STATES = ["T1 [degC above target]", "T2 [degC above target]", "T3 [degC above target]"]


@dataclass
class Scenario:
    name: str
    system: LinearSystem
    default_splits: dict[str, ControlSplit] = field(default_factory=dict)
    default_x0: np.ndarray | None = None
    default_target: np.ndarray | None = None
    notes: str = ""


def _admire_system() -> LinearSystem:
    return LinearSystem(A=_ADMIRE_A.copy(), B_bar=_ADMIRE_BT.T.copy(),
                        actuator_labels=list(ADMIRE_ACTUATORS),
                        state_labels=list(ADMIRE_STATES), name="admire")


def temperature_matrix(scale: float = 1.0) -> np.ndarray:
    """Heat-exchange state matrix assembled from the wall conductances."""
    k = scale * TEMP_WALL_AREA / TEMP_MCP
    return k * np.array([
        [-(TEMP_U_G1 + TEMP_U_12), TEMP_U_12, 0.0],
        [TEMP_U_12, -(TEMP_U_12 + TEMP_U_23), TEMP_U_23],
        [0.0, TEMP_U_23, -(TEMP_U_23 + TEMP_U_3G)],
    ])


def _temperature_system() -> LinearSystem:
    A = temperature_matrix()
    I3 = np.eye(3)
    B_bar = (1.0 / TEMP_MCP) * np.hstack([
        TEMP_Q_SL * I3, TEMP_Q_DW * I3, TEMP_Q_HAC * np.ones((3, 1)),
    ])
    return LinearSystem(A=A, B_bar=B_bar, actuator_labels=list(TEMP_ACTUATORS),
                        state_labels=list(TEMP_STATES), name="temperature")


def _double_integrator() -> LinearSystem:
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    B_bar = np.array([[0.0, 0.0], [1.0, 0.5]])
    return LinearSystem(A=A, B_bar=B_bar,
                        actuator_labels=["u1", "u2"],
                        state_labels=["position", "velocity"],
                        name="double_integrator")


def _build_registry() -> dict[str, Scenario]:
    reg: dict[str, Scenario] = {}

    admire = _admire_system()
    reg["admire"] = Scenario(
        name="admire",
        system=admire,
        default_splits={"right_outboard_elevon": split_system(admire, [2])},
        default_x0=np.zeros(9),
        default_target=np.zeros(9),
        notes="fighter-jet linearization at Mach 0.3 / 2000 m, inputs scaled to [-1,1]",
    )

    temp = _temperature_system()
    reg["temperature"] = Scenario(
        name="temperature",
        system=temp,
        default_splits={
            "u_dw_1": split_system(temp, [3]),
            "u_hAC": split_system(temp, [6]),
        },
        default_x0=np.array([0.8, 0.7, 0.9]),
        default_target=np.zeros(3),
        notes="three-room building cooling overnight toward the target temperature",
    )

    di = _double_integrator()
    reg["double_integrator"] = Scenario(
        name="double_integrator",
        system=di,
        default_splits={"u2": split_system(di, [1])},
        default_x0=np.array([1.0, 0.0]),
        default_target=np.zeros(2),
        notes="synthetic canonical test system",
    )
    return reg


_REGISTRY = _build_registry()


def list_scenarios() -> list[str]:
    return sorted(_REGISTRY)


def load_scenario(name: str) -> Scenario:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; available: {', '.join(list_scenarios())}") from None


def register_scenario(scenario: Scenario) -> None:
    _REGISTRY[scenario.name] = scenario
