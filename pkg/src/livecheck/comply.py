"""Compliance-checking: does one system refine the observable behaviour of
another?

Objects are matched by name and each pair is checked by a memoized
simulation over the two machines: where the specification sends, the
implementation must send a nonempty subset of its labels; where the
specification receives, the implementation must receive a superset; where
the specification is terminal, the implementation must be terminal.
Already-visited state pairs are assumed compliant, so recursion succeeds
coinductively.

``dual_cross_check`` is an independent oracle for single-peer objects: an
implementation complies with a specification exactly when it is compatible
with the specification's dual playing the role of the peer.
"""

from __future__ import annotations

import time

from .automata import Cfsm, SystemModel, dualize, retarget, assemble_system
from .compat import CompatReport
from .diagnostics import (
    Diagnostic,
    DiagnosticKind,
    Note,
    Polarity,
    Stats,
    dedupe,
    make_diagnostic,
    pair_complementary,
    sort_diagnostics,
)
from .explorer import (
    BoundExceeded,
    Deadlock,
    Orphan,
    UnspecifiedReception,
    explore,
)
from .source import Span
from .syntax import Direction


class PreconditionViolation(ValueError):
    pass


def _red(kind: DiagnosticKind, span: Span, system: str, message: str, **kw) -> Diagnostic:
    return make_diagnostic(kind, Polarity.RED, span, system, message, **kw)


def _simulate_pair(impl_m: Cfsm, spec_m: Cfsm, system: str) -> tuple[list[Diagnostic], int]:
    """Simulation from (initial, initial); returns diagnostics and the
    number of state pairs visited."""
    name = impl_m.object_name
    diags: list[Diagnostic] = []
    visited: set[tuple[int, int]] = set()
    work: list[tuple[int, int]] = [(impl_m.initial, spec_m.initial)]
    while work:
        i, s = work.pop()
        if (i, s) in visited:
            continue
        visited.add((i, s))
        sio = spec_m.io(s)
        iio = impl_m.io(i)

        if sio is None:
            if iio is not None:
                diags.append(
                    _red(
                        DiagnosticKind.EXTRA_REQUIREMENT,
                        impl_m.state_span[i],
                        system,
                        f"{name} requires an interaction with {iio.peer} here,"
                        f" but the specification is terminal",
                    )
                )
            continue
        verb = "sends to" if sio.direction is Direction.SEND else "receives from"
        if iio is None:
            diags.append(
                _red(
                    DiagnosticKind.DIRECTION_MISMATCH,
                    impl_m.state_span[i],
                    system,
                    f"{name} terminates here, but the specification still"
                    f" {verb} {sio.peer}",
                )
            )
            continue
        if iio.peer != sio.peer:
            diags.append(
                _red(
                    DiagnosticKind.PEER_MISMATCH,
                    impl_m.state_span[i],
                    system,
                    f"{name} communicates with {iio.peer} here, but the"
                    f" specification {verb} {sio.peer}",
                )
            )
            continue
        if iio.direction is not sio.direction:
            iverb = "sends to" if iio.direction is Direction.SEND else "receives from"
            diags.append(
                _red(
                    DiagnosticKind.DIRECTION_MISMATCH,
                    impl_m.state_span[i],
                    system,
                    f"{name} {iverb} {iio.peer} here, but the specification"
                    f" {verb} {sio.peer}",
                )
            )
            continue

        if sio.direction is Direction.SEND:
            # outputs: the implementation may send a nonempty subset
            spec_by_key = {b.key: b for b in sio.branches}
            for b in iio.branches:
                match = spec_by_key.get(b.key)
                if match is None:
                    diags.append(
                        _red(
                            DiagnosticKind.UNPERMITTED_SEND,
                            b.span,
                            system,
                            f"{name} sends {b.label} to {iio.peer} here, which the"
                            f" specification does not permit",
                        )
                    )
                else:
                    work.append((b.target, match.target))
        else:
            # inputs: the implementation must receive a superset
            impl_by_key = {b.key: b for b in iio.branches}
            for b in sio.branches:
                match = impl_by_key.get(b.key)
                if match is None:
                    diags.append(
                        make_diagnostic(
                            DiagnosticKind.MISSING_RECEIVE,
                            Polarity.BLUE,
                            b.span,
                            system,
                            f"the specification can receive {b.label} from"
                            f" {sio.peer} here, but {name} does not support it",
                            notes=(
                                Note(
                                    impl_m.state_span[i].file,
                                    impl_m.state_span[i],
                                    f"this receive choice lacks {b.label}",
                                ),
                            ),
                        )
                    )
                else:
                    work.append((match.target, b.target))
    return diags, len(visited)


def check_compliance(impl: SystemModel, spec: SystemModel) -> CompatReport:
    """Check that ``impl`` refines ``spec``, object by object (matched by
    name). All errors are collected, not just the first."""
    if impl.refines is not None and impl.refines != spec.name:
        raise PreconditionViolation(
            f"{impl.name} declares refinement of {impl.refines}, not {spec.name}"
        )
    started = time.monotonic()
    diags: list[Diagnostic] = []
    pairs_visited = 0
    for obj_name in sorted(spec.cfsms):
        impl_m = impl.cfsms.get(obj_name)
        if impl_m is None:
            diags.append(
                _red(
                    DiagnosticKind.STATIC_ERROR,
                    impl.span,
                    impl.name,
                    f"{impl.name} does not define object {obj_name},"
                    f" required by {spec.name}",
                )
            )
            continue
        obj_diags, visited = _simulate_pair(impl_m, spec.cfsms[obj_name], impl.name)
        diags.extend(obj_diags)
        pairs_visited += visited
    elapsed_ms = int((time.monotonic() - started) * 1000)
    return CompatReport(
        impl.name,
        sort_diagnostics(dedupe(pair_complementary(diags))),
        Stats(configurations=pairs_visited, bound=0, elapsed_ms=elapsed_ms),
    )


def dual_cross_check(impl_obj: Cfsm, spec_obj: Cfsm, bound: int = 4) -> CompatReport:
    """Check compliance of one object against a single-peer specification
    by running the compatibility checker against the specification's dual.

    The dual of the specification, renamed to the peer and retargeted at
    the implementation, plays the role of the environment the
    specification promises to satisfy. Fresh peers of the implementation
    are absent rather than permissive, so interactions with them surface
    as extra requirements. Error kinds are mapped to compliance kinds.
    """
    spec_peers = spec_obj.peers()
    if len(spec_peers) != 1:
        raise PreconditionViolation(
            f"specification {spec_obj.object_name} references"
            f" {len(spec_peers)} peers; the dual construction needs exactly one"
        )
    (peer,) = spec_peers
    impl_name = impl_obj.object_name
    if impl_name == peer:
        raise PreconditionViolation(
            f"implementation is named {peer}, which is the specification's peer"
        )
    partner = retarget(dualize(spec_obj), peer, {peer: impl_name})
    fresh = frozenset(impl_obj.peers() - {peer})
    system = assemble_system(
        impl_name,
        Span("<dual>", 1, 1, 1, 1),
        {impl_name: impl_obj, peer: partner},
        absent=fresh,
    )
    started = time.monotonic()
    graph = explore(system, bound)

    # branch span -> owning state, to anchor errors at the sending state
    branch_state: dict[tuple, int] = {}
    for state, io in impl_obj.transitions.items():
        for b in io.branches:
            branch_state[b.span.sort_key()] = state

    diags: list[Diagnostic] = []
    for cfg, node in graph.in_bfs_order():
        cls = node.classification
        if isinstance(cls, UnspecifiedReception):
            for rec in cls.records:
                if rec.message.sender == impl_name:
                    diags.append(
                        _red(
                            DiagnosticKind.UNPERMITTED_SEND,
                            rec.message.origin_span,
                            impl_name,
                            f"{impl_name} sends {rec.message.label} to {peer} here,"
                            f" which the specification does not permit",
                        )
                    )
                else:
                    diags.append(
                        make_diagnostic(
                            DiagnosticKind.MISSING_RECEIVE,
                            Polarity.BLUE,
                            rec.message.origin_span,
                            impl_name,
                            f"the specification can receive {rec.message.label} from"
                            f" {peer} here, but {impl_name} does not support it",
                            notes=(
                                Note(
                                    rec.receiver_state_span.file,
                                    rec.receiver_state_span,
                                    f"this receive choice lacks {rec.message.label}",
                                ),
                            ),
                        )
                    )
        elif isinstance(cls, Deadlock):
            for rec in cls.records:
                if rec.name == impl_name and rec.peer in fresh:
                    diags.append(
                        _red(
                            DiagnosticKind.EXTRA_REQUIREMENT,
                            rec.state_span,
                            impl_name,
                            f"{impl_name} requires an interaction with {rec.peer}"
                            f" here, but the specification is terminal",
                        )
                    )
                else:
                    span = (
                        rec.state_span
                        if rec.name == impl_name
                        else impl_obj.state_span[cfg.state_of(impl_name)]
                    )
                    diags.append(
                        _red(
                            DiagnosticKind.DIRECTION_MISMATCH,
                            span,
                            impl_name,
                            f"{impl_name} and the specification's dual block each"
                            f" other here",
                        )
                    )
        elif isinstance(cls, Orphan):
            for rec in cls.records:
                if rec.message.sender == peer:
                    # a specified message the implementation never consumes
                    diags.append(
                        _red(
                            DiagnosticKind.DIRECTION_MISMATCH,
                            rec.receiver_state_span,
                            impl_name,
                            f"{impl_name} stops here, but the specification still"
                            f" receives {rec.message.label} from {peer}",
                        )
                    )
                else:
                    state = branch_state[rec.message.origin_span.sort_key()]
                    diags.append(
                        _red(
                            DiagnosticKind.EXTRA_REQUIREMENT,
                            impl_obj.state_span[state],
                            impl_name,
                            f"{impl_name} sends {rec.message.label} here, beyond"
                            f" the specification's terminal point",
                        )
                    )
        elif isinstance(cls, BoundExceeded):
            # a throttled sender in the dual composition is a compliance
            # mismatch: one side keeps interacting while the other stopped
            for rec in cls.records:
                if rec.actor == impl_name:
                    diags.append(
                        _red(
                            DiagnosticKind.EXTRA_REQUIREMENT,
                            rec.sender_state_span,
                            impl_name,
                            f"{impl_name} keeps sending {rec.label} to {peer} here,"
                            f" beyond what the specification permits",
                        )
                    )
                else:
                    span = impl_obj.state_span[cfg.state_of(impl_name)]
                    diags.append(
                        _red(
                            DiagnosticKind.DIRECTION_MISMATCH,
                            span,
                            impl_name,
                            f"the specification still receives {rec.label} from"
                            f" {peer} here, but {impl_name} no longer accepts it",
                        )
                    )
    elapsed_ms = int((time.monotonic() - started) * 1000)
    return CompatReport(
        impl_name,
        sort_diagnostics(dedupe(pair_complementary(diags))),
        Stats(configurations=len(graph.nodes), bound=bound, elapsed_ms=elapsed_ms),
    )
