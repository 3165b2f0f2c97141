"""Interaction nets in calculus form: parse, reduce, and check confluence."""
from .core import (
    Agent,
    AgentType,
    CanonicalizationLimitError,
    Configuration,
    Equation,
    InteractionSystem,
    InvalidSystemError,
    Name,
    Rule,
    Signature,
    ValidationReport,
    Violation,
    alpha_equivalent,
    canonicalize,
    net_equivalent,
    name_occurrences,
    rules_equivalent,
    validate_configuration,
)
from .parser import (
    Diagnostic,
    ParseError,
    SourceDocument,
    parse_configuration,
    parse_document,
    parse_system,
    render,
)
from .engine import (
    NormalizeResult,
    RedexReport,
    StepInfo,
    Strategy,
    apply_indirection,
    apply_interaction,
    detect_cycle,
    find_redexes,
    normalize,
    resolve_indirections,
    step,
)
from .combinators import (
    combinator_system,
    instantiate_duplication,
    instantiate_erasing,
)

__version__ = "0.1.0"
