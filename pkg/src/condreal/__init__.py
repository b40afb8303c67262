"""Exact computable real arithmetic through operator-transformed names.

A real number is *named* by three total functions on the naturals whose
combination approximates it within 1/(t+1) at every index t.  Real
functions become computable objects when fixed operators transform
argument names into value names -- either unconditionally (uniform) or
after searching for a certifying natural parameter (conditional).  The
package provides:

- the naming layer and exact validation (``naming``),
- a term language for operators, with evaluation, currying,
  diagonalization and continuity instrumentation (``terms``),
- the subrecursive base-function library: selectors, comparators,
  pairing and ball indicators (``gadgets``),
- uniform/conditional functions with composition, localization and
  compact gluing (``realfns``),
- registered elementary arithmetic, including the conditional
  reciprocal (``elementary``),
- effective metric spaces generalizing all of the above, with lossless
  translations to and from the real-number setting (``metric``),
- a CLI (``condreal``) for evaluation, listings and invariant suites.
"""

from .elementary import (
    Entry,
    FunctionRegistry,
    OutsideDomain,
    default_functions,
    register_builtins,
    registry_validate,
    uniform_from_rule,
)
from .gadgets import CORE, GadgetRegistry, decency_check, default_registry
from .naming import (
    NameTriple,
    NatFun,
    approx,
    format_rational,
    parse_rational,
    precision_index,
    rational_name,
    validate_name,
)
from .realfns import (
    Ball,
    BallCover,
    BudgetExhausted,
    ConditionalFn,
    Neighborhood,
    ProcOperator,
    TermOperator,
    UniformFn,
    apply_conditional,
    apply_conditional_at,
    apply_uniform,
    compose_conditional,
    dispatch_index,
    embed_uniform,
    find_parameter,
    glue_compact,
    identity_uniform,
    localize,
    patch_operator,
    separation_violations,
)
from .terms import (
    Apply,
    ArityMismatch,
    Base,
    BaseFunction,
    OperatorTerm,
    Proj,
    compose_terms,
    curry,
    diagonalize,
    eval_instrumented,
    eval_term,
    multi_curry,
    parse_term,
    print_term,
    representable_lift,
    support_bound,
    uncurry,
)

__version__ = "0.1.0"

__all__ = [
    "Apply",
    "ArityMismatch",
    "Ball",
    "BallCover",
    "Base",
    "BaseFunction",
    "BudgetExhausted",
    "CORE",
    "ConditionalFn",
    "Entry",
    "FunctionRegistry",
    "GadgetRegistry",
    "NameTriple",
    "NatFun",
    "Neighborhood",
    "OperatorTerm",
    "OutsideDomain",
    "ProcOperator",
    "Proj",
    "TermOperator",
    "UniformFn",
    "__version__",
    "apply_conditional",
    "apply_conditional_at",
    "apply_uniform",
    "approx",
    "compose_conditional",
    "compose_terms",
    "curry",
    "decency_check",
    "default_functions",
    "default_registry",
    "diagonalize",
    "dispatch_index",
    "embed_uniform",
    "eval_instrumented",
    "eval_term",
    "find_parameter",
    "format_rational",
    "glue_compact",
    "identity_uniform",
    "localize",
    "multi_curry",
    "parse_rational",
    "parse_term",
    "patch_operator",
    "precision_index",
    "print_term",
    "rational_name",
    "register_builtins",
    "registry_validate",
    "representable_lift",
    "separation_violations",
    "support_bound",
    "uncurry",
    "uniform_from_rule",
    "validate_name",
]
