"""The base algebra: expressions, jets and seminorm families."""
from .expr import (
    Const, DomainError, E, EvaluationError, Expr, ExprError, ExprSyntaxError, M, N, PI, Sym, X,
    cos, diff, evaluate, evaluate_mp, exp, free_symbols, log, parse_expr, sin, sqrt, substitute,
    to_source,
)
from .jet import MAX_ORDER, CapabilityError, Jet, jet_eval
from .seminorm import (
    AbsoluteValue, ExprFunction, FunctionElement, SeminormFamily, SobolevSupDerivatives,
    SupDerivatives, check_seminorm_monotone, seminorm_eval,
)

__all__ = [
    "AbsoluteValue", "CapabilityError", "Const", "DomainError", "E", "EvaluationError", "Expr",
    "ExprError", "ExprFunction", "ExprSyntaxError", "FunctionElement", "Jet", "M", "MAX_ORDER", "N",
    "PI", "SeminormFamily", "SobolevSupDerivatives", "SupDerivatives", "Sym", "X",
    "check_seminorm_monotone", "cos", "diff", "evaluate", "evaluate_mp", "exp", "free_symbols",
    "jet_eval", "log", "parse_expr", "seminorm_eval", "sin", "sqrt", "substitute", "to_source",
]
