"""The check pipeline shared by the command line and the HTTP service.

Parses a set of named sources into one program namespace, runs the static
checks, and then checks every system (or a focused one): compatibility
always, compliance when the system declares a refinement. Lexer, parser
and static failures are returned as StaticError diagnostics, never raised
past this module.

Reported stats carry ``elapsed_ms`` as 0 so that identical inputs always
serialize to identical bytes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .automata import SystemModel, build_system
from .compat import check_compatibility
from .comply import check_compliance
from .diagnostics import (
    Diagnostic,
    DiagnosticKind,
    Polarity,
    Stats,
    make_diagnostic,
    sort_diagnostics,
)
from .explorer import StateSpaceOverflow
from .lexer import LexError
from .parser import ParseError, parse
from .static_checks import check_static
from .syntax import ProgramAst

DEFAULT_BOUND = 4
DEFAULT_CONFIG_CAP = 1_000_000


class UnknownFocus(ValueError):
    pass


@dataclass(slots=True)
class PipelineResult:
    diagnostics: list[Diagnostic]
    stats: Stats
    static_failure: bool = False
    program: ProgramAst | None = None

    @property
    def clean(self) -> bool:
        return not self.diagnostics


def parse_sources(
    sources: list[tuple[str, str]],
) -> tuple[ProgramAst | None, list[Diagnostic]]:
    """Parse every file and merge them into one program namespace. Returns
    the merged program (None if any file failed) plus parse diagnostics."""
    diags: list[Diagnostic] = []
    program = ProgramAst()
    failed = False
    for name, text in sources:
        try:
            program = program.merged(parse(text, name))
        except (LexError, ParseError) as err:
            failed = True
            diags.append(
                make_diagnostic(
                    DiagnosticKind.STATIC_ERROR,
                    Polarity.RED,
                    err.span,
                    "",
                    err.message
                    + (
                        f" (expected {' or '.join(err.expected)})"
                        if isinstance(err, ParseError) and err.expected
                        else ""
                    ),
                )
            )
    return (None if failed else program), diags


def run_pipeline(
    sources: list[tuple[str, str]],
    focus: str | None = None,
    bound: int = DEFAULT_BOUND,
    config_cap: int = DEFAULT_CONFIG_CAP,
    time_cap: float | None = None,
) -> PipelineResult:
    """Check all systems of the given sources (or only ``focus``)."""
    deadline = time.monotonic() + time_cap if time_cap is not None else None
    program, parse_diags = parse_sources(sources)
    if program is None:
        return PipelineResult(sort_diagnostics(parse_diags), Stats(bound=bound), True)

    static_diags = check_static(program)
    if static_diags:
        return PipelineResult(sort_diagnostics(static_diags), Stats(bound=bound), True, program)

    systems = list(program.systems)
    if focus is not None:
        systems = [decl for decl in systems if decl.name == focus]
        if not systems:
            raise UnknownFocus(f"no system named {focus}")

    diags: list[Diagnostic] = []
    configurations = 0
    for decl in systems:
        model = build_system(decl, program)
        try:
            report = check_compatibility(
                model, bound, config_cap=config_cap, deadline=deadline
            )
            diags.extend(report.diagnostics)
            configurations += report.stats.configurations
        except StateSpaceOverflow as overflow:
            configurations += overflow.configurations
            diags.append(_overflow_diagnostic(model, overflow))
        if decl.refines is not None:
            spec_decl = program.system(decl.refines)
            assert spec_decl is not None  # static checks resolved it
            report = check_compliance(model, build_system(spec_decl, program))
            diags.extend(report.diagnostics)
            configurations += report.stats.configurations

    return PipelineResult(
        sort_diagnostics(diags),
        Stats(configurations=configurations, bound=bound, elapsed_ms=0),
        False,
        program,
    )


def _overflow_diagnostic(model: SystemModel, overflow: StateSpaceOverflow) -> Diagnostic:
    return make_diagnostic(
        DiagnosticKind.BOUND_EXCEEDED,
        Polarity.WARNING,
        model.span,
        model.name,
        f"exploration of {model.name} stopped early: {overflow}"
        f" ({overflow.configurations} configurations reached)",
    )
