"""Qudit Wigner functions, mana and Wigner-positive state conversion.

Discrete Wigner representations of states and maps, mana, exact conversion
under Wigner-positivity-preserving quasi-operations, and the SDP for their
physical implementability.
"""

from .channels import MapClass, apply_choi, classify, map_from_wigner
from .implementability import SdpOutcome, build_sdp, physical_implementability, sampling_cost
from .phase_space import DimSpec, phase_point_operator, phase_point_operators, shift_boost, weyl_operator
from .states import named_state, read_state, write_state
from .transform import (
    TransformPlan,
    asymptotic_rate,
    can_transform,
    construct_stochastic_map,
    lp_feasibility_oracle,
    plan_transform,
)
from .wigner import Choi, apply_stochastic, mana, operator_from_wigner, wigner_of_map, wigner_of_operator

__version__ = "0.1.0"

__all__ = [
    "Choi",
    "DimSpec",
    "MapClass",
    "SdpOutcome",
    "TransformPlan",
    "apply_choi",
    "apply_stochastic",
    "asymptotic_rate",
    "build_sdp",
    "can_transform",
    "classify",
    "construct_stochastic_map",
    "lp_feasibility_oracle",
    "mana",
    "map_from_wigner",
    "named_state",
    "operator_from_wigner",
    "phase_point_operator",
    "phase_point_operators",
    "physical_implementability",
    "plan_transform",
    "read_state",
    "sampling_cost",
    "shift_boost",
    "weyl_operator",
    "wigner_of_map",
    "wigner_of_operator",
    "write_state",
]
