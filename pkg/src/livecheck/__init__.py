"""livecheck: live compatibility and compliance checking for systems of
communicating objects."""

from .automata import (
    Cfsm,
    SystemModel,
    build_system,
    compile_object,
    debug_listing,
    dualize,
    retarget,
    validate_cfsm,
)
from .compat import CompatReport, check_compatibility
from .comply import PreconditionViolation, check_compliance, dual_cross_check
from .diagnostics import (
    Diagnostic,
    DiagnosticKind,
    Polarity,
    Stats,
    TraceEvent,
    pair_complementary,
    parse_report,
    render_json,
    render_text,
)
from .explorer import (
    Configuration,
    ReachGraph,
    StateSpaceOverflow,
    apply_step,
    debug_dump,
    enabled_steps,
    explore,
    initial_configuration,
    trace_to,
)
from .lexer import LexError, tokenize
from .parser import ParseError, parse
from .pipeline import PipelineResult, run_pipeline
from .source import Span
from .static_checks import check_static

__version__ = "0.1.0"

__all__ = [
    "Cfsm",
    "CompatReport",
    "Configuration",
    "Diagnostic",
    "DiagnosticKind",
    "LexError",
    "ParseError",
    "PipelineResult",
    "Polarity",
    "PreconditionViolation",
    "ReachGraph",
    "Span",
    "Stats",
    "StateSpaceOverflow",
    "SystemModel",
    "TraceEvent",
    "apply_step",
    "build_system",
    "check_compatibility",
    "check_compliance",
    "check_static",
    "compile_object",
    "debug_dump",
    "debug_listing",
    "dual_cross_check",
    "dualize",
    "enabled_steps",
    "explore",
    "initial_configuration",
    "pair_complementary",
    "parse",
    "parse_report",
    "render_json",
    "render_text",
    "retarget",
    "run_pipeline",
    "tokenize",
    "trace_to",
    "validate_cfsm",
]
