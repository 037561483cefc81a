"""Exact-rational solvers for complex-demand knapsack problems."""
from .ckp import alg_a, alg_b, split_subset
from .core import (
    CapacitySpec,
    ComplexDemand,
    Instance,
    Item,
    Kind,
    Region,
    Solution,
    brute_force_opt,
    classify_region,
    is_feasible,
    make_instance,
    preprocess,
)
from .errors import (
    CkpError,
    ContractError,
    InputError,
    NeedsRationalMagnitude,
    OracleSizeError,
    ParseError,
    ResourceError,
)
from .gckp import alg_c, lp_relax_solve, ptas_3kp
from .generate import generate
from .hardness import decide_ckp_cardinality, equipartition_brute, reduce_equipartition
from .instance_io import parse_instance, serialize_instance
from .knapsack1d import FULL, OneDItem, dp_exact, fptas, monotone_fptas
from .mechanism import AgentType, critical_value, run_mechanism, verify_ic, verify_monotone

__version__ = "0.1.0"
