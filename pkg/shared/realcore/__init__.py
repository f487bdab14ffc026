from shared.realcore.constants import CONSTANT_IDS, constant_node, make_constant
from shared.realcore.creal import (
    CReal,
    Exact,
    Expr,
    Named,
    arith,
    current_precision_cap,
    decide,
    evaluate,
    nearest_int_distance,
    precision_cap,
    refine,
    settle_sign,
    working_prec,
)

__all__ = [
    "CONSTANT_IDS",
    "CReal",
    "Exact",
    "Expr",
    "Named",
    "arith",
    "constant_node",
    "current_precision_cap",
    "decide",
    "evaluate",
    "make_constant",
    "nearest_int_distance",
    "precision_cap",
    "refine",
    "settle_sign",
    "working_prec",
]
