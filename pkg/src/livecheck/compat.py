"""Compatibility-checking: do the objects of a system compose safely?

Runs the explorer and converts each bad configuration into source
diagnostics: an unspecified reception blames the send occurrence (red) and
marks every receive branch the stuck object offered instead (blue), with
the two sides linked as complementary. Deadlocks, orphan messages and
bound overflows become red marks and warnings. Every diagnostic carries
the shortest trace reaching its configuration.
"""

from __future__ import annotations

import time

from .automata import SystemModel
from .diagnostics import (
    Diagnostic,
    DiagnosticKind,
    Polarity,
    Stats,
    TraceEvent,
    dedupe,
    make_diagnostic,
    pair_complementary,
    sort_diagnostics,
)
from .explorer import (
    BoundExceeded,
    Deadlock,
    Orphan,
    ReachGraph,
    SendStep,
    Step,
    UnspecifiedReception,
    explore,
    trace_to,
)


class CompatReport:
    def __init__(self, system_name: str, diagnostics: list[Diagnostic], stats: Stats):
        self.system_name = system_name
        self.diagnostics = diagnostics
        self.stats = stats


def _events(trace: list[tuple[Step, str, str, str]]) -> tuple[TraceEvent, ...]:
    return tuple(
        TraceEvent(actor, "send" if isinstance(step, SendStep) else "receive", peer, label)
        for step, actor, peer, label in trace
    )


def _offered_labels(offered) -> str:
    labels = [b.label for b in offered]
    if len(labels) == 1:
        return labels[0]
    return ", ".join(labels[:-1]) + " or " + labels[-1]


def diagnostics_from_graph(graph: ReachGraph, system_name: str) -> list[Diagnostic]:
    """Walk configurations in BFS order and build deduplicated diagnostics;
    the first configuration to exhibit an error site supplies its (shortest)
    trace."""
    diags: list[Diagnostic] = []
    seen_sites: set[tuple] = set()

    for cfg, node in graph.in_bfs_order():
        cls = node.classification
        if isinstance(cls, UnspecifiedReception):
            for rec in cls.records:
                site_key = (
                    "reception",
                    rec.message.origin_span.sort_key(),
                    tuple(b.span.sort_key() for b in rec.offered),
                )
                if site_key in seen_sites:
                    continue
                seen_sites.add(site_key)
                trace = _events(trace_to(graph, cfg))
                site = f"{system_name}/reception/{rec.message.origin_span}"
                offered_spans = [b.span for b in rec.offered]
                diags.append(
                    make_diagnostic(
                        DiagnosticKind.UNSPECIFIED_RECEPTION,
                        Polarity.RED,
                        rec.message.origin_span,
                        system_name,
                        f"{rec.message.sender} sends {rec.message.label} here, but"
                        f" {rec.receiver} can only receive {_offered_labels(rec.offered)}",
                        trace=trace,
                        site=site,
                        complement_spans=offered_spans,
                    )
                )
                for b in rec.offered:
                    diags.append(
                        make_diagnostic(
                            DiagnosticKind.UNSPECIFIED_RECEPTION,
                            Polarity.BLUE,
                            b.span,
                            system_name,
                            f"{rec.receiver} is ready to receive {b.label} here, but"
                            f" {rec.message.sender} sends {rec.message.label} instead",
                            trace=trace,
                            site=site,
                            complement_spans=[rec.message.origin_span],
                        )
                    )
        elif isinstance(cls, Deadlock):
            for rec in cls.records:
                site_key = ("deadlock", rec.state_span.sort_key())
                if site_key in seen_sites:
                    continue
                seen_sites.add(site_key)
                diags.append(
                    make_diagnostic(
                        DiagnosticKind.DEADLOCK,
                        Polarity.RED,
                        rec.state_span,
                        system_name,
                        f"{rec.name} waits to receive from {rec.peer} here,"
                        f" but no message can ever arrive",
                        trace=_events(trace_to(graph, cfg)),
                        site=f"{system_name}/deadlock/{rec.state_span}",
                    )
                )
        elif isinstance(cls, Orphan):
            for rec in cls.records:
                site_key = ("orphan", rec.message.origin_span.sort_key())
                if site_key in seen_sites:
                    continue
                seen_sites.add(site_key)
                diags.append(
                    make_diagnostic(
                        DiagnosticKind.ORPHAN_MESSAGE,
                        Polarity.RED,
                        rec.message.origin_span,
                        system_name,
                        f"this {rec.message.label} from {rec.message.sender} is still"
                        f" queued when {rec.receiver} stops; it is never received",
                        trace=_events(trace_to(graph, cfg)),
                        site=f"{system_name}/orphan/{rec.message.origin_span}",
                    )
                )
        elif isinstance(cls, BoundExceeded):
            for rec in cls.records:
                site_key = ("bound", rec.span.sort_key())
                if site_key in seen_sites:
                    continue
                seen_sites.add(site_key)
                diags.append(
                    make_diagnostic(
                        DiagnosticKind.BOUND_EXCEEDED,
                        Polarity.WARNING,
                        rec.span,
                        system_name,
                        f"sending {rec.label} to {rec.peer} is blocked by a full queue"
                        f" (bound {graph.bound}); the system may be unbounded",
                        trace=_events(trace_to(graph, cfg)),
                        site=f"{system_name}/bound/{rec.span}",
                    )
                )

    return sort_diagnostics(dedupe(pair_complementary(diags)))


def check_compatibility(
    sys: SystemModel,
    bound: int = 4,
    config_cap: int = 1_000_000,
    deadline: float | None = None,
) -> CompatReport:
    """Explore the system and report every unsafe configuration as source
    diagnostics. Propagates StateSpaceOverflow."""
    started = time.monotonic()
    graph = explore(sys, bound, config_cap=config_cap, deadline=deadline)
    diags = diagnostics_from_graph(graph, sys.name)
    elapsed_ms = int((time.monotonic() - started) * 1000)
    return CompatReport(
        sys.name,
        diags,
        Stats(configurations=len(graph.nodes), bound=bound, elapsed_ms=elapsed_ms),
    )
