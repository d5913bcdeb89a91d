"""Exact entropy set functions, multicast network codes, and LP outer bounds."""

from .exactlog import LogScalar, log2_units
from .setfunc import (
    GroundSet,
    SetFunction,
    ViolationReport,
    check_ingleton,
    check_polymatroid,
    check_zhang_yeung,
)
from .groupchar import (
    SubgroupFamily,
    SubspaceFamily,
    coset_support,
    entropy_from_subgroups,
    entropy_from_subspaces,
    quasi_uniform_check,
)
from .netmodel import (
    Alphabet,
    ConnectionRequirement,
    Edge,
    Network,
    NetworkCode,
    RateCapacityTuple,
    check_admissible,
    evaluate_code,
    kernels_of_linear_code,
)
from .construct import build_gdagger, capacitated_network, rate_capacity
from .codegen import linear_code, quasi_uniform_code
from .lpbound import (
    build_witness,
    lp_feasible,
    shannon_implies,
    verify_connection_constraints,
)

__all__ = [
    "LogScalar",
    "log2_units",
    "GroundSet",
    "SetFunction",
    "ViolationReport",
    "check_ingleton",
    "check_polymatroid",
    "check_zhang_yeung",
    "SubgroupFamily",
    "SubspaceFamily",
    "coset_support",
    "entropy_from_subgroups",
    "entropy_from_subspaces",
    "quasi_uniform_check",
    "Alphabet",
    "ConnectionRequirement",
    "Edge",
    "Network",
    "NetworkCode",
    "RateCapacityTuple",
    "check_admissible",
    "evaluate_code",
    "kernels_of_linear_code",
    "build_gdagger",
    "capacitated_network",
    "rate_capacity",
    "linear_code",
    "quasi_uniform_code",
    "build_witness",
    "lp_feasible",
    "shannon_implies",
    "verify_connection_constraints",
]

__version__ = "0.1.0"
