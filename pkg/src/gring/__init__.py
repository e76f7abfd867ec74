"""Division, gcds and freeness tests in group rings of free groups."""
from .coefficients import GF, QQ, ZZ, Domain, parse_domain
from .division import DivisionResult, Relation, StepRecord, divide, division_step, verify_relation
from .errors import (
    BudgetExceeded,
    ClaimViolation,
    ConvergenceError,
    DomainError,
    GringError,
    ParseError,
    PreconditionError,
    WordError,
)
from .euclid import (
    EuclidResult,
    PairSpec,
    build_pair,
    euclid,
    exact_divide,
    generate_pair,
    relation_search,
    relation_search_vectors,
)
from .pair_modules import RankReport, analyze_field, analyze_integral
from .ring import RingElement, format_element, parse_element

__version__ = "0.1.0"
