"""Shared fixtures: corpus loading, span location, and trace replay.

``find_span`` locates tokens by plain text search, independently of the
lexer, so golden span assertions do not trust the machinery under test.
"""

from __future__ import annotations

import re
from pathlib import Path

import pytest

from livecheck import build_system, parse
from livecheck.automata import SystemModel, assemble_system
from livecheck.diagnostics import Diagnostic, DiagnosticKind, TraceEvent
from livecheck.explorer import (
    BoundExceeded,
    Configuration,
    Deadlock,
    EnvReceiveStep,
    Orphan,
    ReceiveStep,
    SendStep,
    UnspecifiedReception,
    apply_step,
    enabled_steps,
    initial_configuration,
)
from livecheck.source import Span
from livecheck.syntax import Direction, ProgramAst

CORPUS = Path(__file__).parent.parent / "corpus"
CORPUS_FILES = [
    "conf.sys",
    "conf_prime.sys",
    "author.sys",
    "pingpong.sys",
    "double_send.sys",
]


@pytest.fixture(scope="session")
def corpus_sources() -> dict[str, str]:
    return {
        f"corpus/{name}": (CORPUS / name).read_text(encoding="utf-8")
        for name in CORPUS_FILES
    }


@pytest.fixture(scope="session")
def corpus_program(corpus_sources) -> ProgramAst:
    program = ProgramAst()
    for name, text in corpus_sources.items():
        program = program.merged(parse(text, name))
    return program


@pytest.fixture(scope="session")
def corpus_models(corpus_program) -> dict[str, SystemModel]:
    return {
        decl.name: build_system(decl, corpus_program)
        for decl in corpus_program.systems
    }


def neutral_model(model: SystemModel) -> SystemModel:
    """The same composition without a refinement clause, for checking a
    system against itself."""
    return assemble_system(
        model.name, model.span, model.cfsms, environment=model.environment_peers
    )


def find_span(text: str, file: str, word: str, occurrence: int = 1) -> Span:
    """Locate the n-th occurrence of ``word`` as a whole identifier (the
    identifier alphabet includes ``'``) by plain text search."""
    pattern = re.compile(
        rf"(?<![A-Za-z0-9_']){re.escape(word)}(?![A-Za-z0-9_'])"
    )
    count = 0
    for match in pattern.finditer(text):
        count += 1
        if count == occurrence:
            line = text.count("\n", 0, match.start()) + 1
            col = match.start() - (text.rfind("\n", 0, match.start()) + 1) + 1
            return Span(file, line, col, line, col + len(word))
    raise AssertionError(f"{word} occurrence {occurrence} not found in {file}")


_KIND_TO_CLASSIFICATION = {
    DiagnosticKind.UNSPECIFIED_RECEPTION: UnspecifiedReception,
    DiagnosticKind.DEADLOCK: Deadlock,
    DiagnosticKind.ORPHAN_MESSAGE: Orphan,
    DiagnosticKind.BOUND_EXCEEDED: BoundExceeded,
}


def replay_trace(
    sys: SystemModel, trace: tuple[TraceEvent, ...], bound: int = 4
) -> Configuration:
    """Re-run a reported trace step by step, checking each step was enabled,
    and return the configuration it reaches."""
    cfg = initial_configuration(sys)
    for event in trace:
        io = sys.cfsms[event.actor].io(cfg.state_of(event.actor))
        assert io is not None, f"{event} fired at a terminal state"
        branch = next(i for i, b in enumerate(io.branches) if b.label == event.label)
        if event.action == "send":
            assert io.direction is Direction.SEND
            step = SendStep(event.actor, event.peer, branch)
        elif event.peer in sys.cfsms:
            step = ReceiveStep(event.actor, event.peer, branch)
        else:
            step = EnvReceiveStep(event.actor, event.peer, branch)
        assert step in enabled_steps(sys, cfg, bound), f"{event} not enabled"
        cfg = apply_step(sys, cfg, step)
    return cfg


def assert_trace_reaches_classification(
    sys: SystemModel, diag: Diagnostic, bound: int = 4
) -> None:
    """Replaying the diagnostic's trace must land in a configuration whose
    classification matches the diagnostic's kind."""
    from livecheck.explorer import classify

    expected = _KIND_TO_CLASSIFICATION[diag.kind]
    cfg = replay_trace(sys, diag.trace, bound)
    steps = enabled_steps(sys, cfg, bound)
    cls = classify(sys, cfg, steps, bound)
    assert isinstance(cls, expected), f"{diag.kind} trace reaches {cls}"
