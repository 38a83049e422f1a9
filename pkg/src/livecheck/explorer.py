"""Exhaustive breadth-first exploration of a system's asynchronous
configuration space under a per-queue bound.

A configuration is each defined object's control state plus the contents
of every ordered-pair FIFO queue between defined objects. Undefined
(environment) peers accept any send instantly and may supply any message a
defined object offers to receive, so they contribute no queues. Absent
peers (used by the duality cross-check) enable nothing.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Union

from .automata import Branch, SystemModel
from .source import Span
from .syntax import Direction

QueueKey = tuple[str, str]  # (sender, receiver)


@dataclass(frozen=True, slots=True)
class MessageInst:
    """A message in flight; ``origin_span`` is the send occurrence that
    produced it, so errors blame the right source position."""

    label: str
    arity: int
    value: str | None
    origin_span: Span
    sender: str

    @property
    def key(self) -> tuple[str, int]:
        return (self.label, self.arity)


@dataclass(frozen=True, slots=True)
class Configuration:
    """Canonically ordered global state: control map entries sorted by
    object name, queue entries sorted by (sender, receiver). All ordered
    pairs of distinct defined objects appear, empty or not, so equal
    configurations have equal encodings."""

    control: tuple[tuple[str, int], ...]
    queues: tuple[tuple[QueueKey, tuple[MessageInst, ...]], ...]

    def state_of(self, name: str) -> int:
        for obj, state in self.control:
            if obj == name:
                return state
        raise KeyError(name)

    def queue(self, sender: str, receiver: str) -> tuple[MessageInst, ...]:
        for key, msgs in self.queues:
            if key == (sender, receiver):
                return msgs
        return ()

    def with_state(self, name: str, state: int) -> Configuration:
        control = tuple((o, state if o == name else s) for o, s in self.control)
        return Configuration(control, self.queues)

    def with_queue(self, key: QueueKey, msgs: tuple[MessageInst, ...]) -> Configuration:
        queues = tuple((k, msgs if k == key else q) for k, q in self.queues)
        return Configuration(self.control, queues)


@dataclass(frozen=True, slots=True)
class SendStep:
    actor: str
    peer: str
    branch: int


@dataclass(frozen=True, slots=True)
class ReceiveStep:
    actor: str
    peer: str
    branch: int


@dataclass(frozen=True, slots=True)
class EnvReceiveStep:
    actor: str
    peer: str
    branch: int


Step = Union[SendStep, ReceiveStep, EnvReceiveStep]


# ── classification ────────────────────────────────────────────────

@dataclass(frozen=True, slots=True)
class ReceptionFailure:
    """A receiver whose matching queue head fits none of its branches."""

    receiver: str
    receiver_state_span: Span
    message: MessageInst
    offered: tuple[Branch, ...]


@dataclass(frozen=True, slots=True)
class BlockedObject:
    name: str
    state_span: Span
    peer: str


@dataclass(frozen=True, slots=True)
class StrandedMessage:
    message: MessageInst
    receiver: str
    receiver_state_span: Span


@dataclass(frozen=True, slots=True)
class SuppressedSend:
    actor: str
    peer: str
    label: str
    span: Span
    sender_state_span: Span


@dataclass(frozen=True, slots=True)
class Ok:
    pass


@dataclass(frozen=True, slots=True)
class SuccessTerminal:
    pass


@dataclass(frozen=True, slots=True)
class UnspecifiedReception:
    records: tuple[ReceptionFailure, ...]


@dataclass(frozen=True, slots=True)
class Deadlock:
    records: tuple[BlockedObject, ...]


@dataclass(frozen=True, slots=True)
class Orphan:
    records: tuple[StrandedMessage, ...]


@dataclass(frozen=True, slots=True)
class BoundExceeded:
    records: tuple[SuppressedSend, ...]


Classification = Union[Ok, SuccessTerminal, UnspecifiedReception, Deadlock, Orphan, BoundExceeded]


class StateSpaceOverflow(Exception):
    def __init__(self, message: str, configurations: int) -> None:
        super().__init__(message)
        self.configurations = configurations


# ── operations ────────────────────────────────────────────────────

def initial_configuration(sys: SystemModel) -> Configuration:
    names = sorted(sys.cfsms)
    control = tuple((name, sys.cfsms[name].initial) for name in names)
    queues = tuple(
        ((s, r), ())
        for s in names
        for r in names
        if s != r
    )
    return Configuration(control, queues)


def enabled_steps(sys: SystemModel, cfg: Configuration, bound: int) -> list[Step]:
    """All steps firable at ``cfg``, ordered by actor name then branch index.

    Sends to a defined peer need queue room; sends to the environment are
    always enabled. A receive from a defined peer needs a matching queue
    head; a receive from the environment is enabled for every branch.
    Interactions with absent peers are never enabled.
    """
    steps: list[Step] = []
    for actor, state in cfg.control:
        io = sys.cfsms[actor].io(state)
        if io is None:
            continue
        if io.peer in sys.cfsms:
            if io.direction is Direction.SEND:
                if len(cfg.queue(actor, io.peer)) < bound:
                    steps.extend(
                        SendStep(actor, io.peer, i) for i in range(len(io.branches))
                    )
            else:
                q = cfg.queue(io.peer, actor)
                if q:
                    head = q[0]
                    for i, b in enumerate(io.branches):
                        if b.key == head.key:
                            steps.append(ReceiveStep(actor, io.peer, i))
        elif io.peer in sys.environment_peers:
            if io.direction is Direction.SEND:
                steps.extend(SendStep(actor, io.peer, i) for i in range(len(io.branches)))
            else:
                steps.extend(
                    EnvReceiveStep(actor, io.peer, i) for i in range(len(io.branches))
                )
        # absent peers: nothing enabled
    return steps


def apply_step(sys: SystemModel, cfg: Configuration, step: Step) -> Configuration:
    io = sys.cfsms[step.actor].io(cfg.state_of(step.actor))
    assert io is not None, "step applied at a terminal state"
    branch = io.branches[step.branch]
    nxt = cfg.with_state(step.actor, branch.target)
    if isinstance(step, SendStep) and step.peer in sys.cfsms:
        key = (step.actor, step.peer)
        msg = MessageInst(branch.label, branch.arity, branch.value, branch.span, step.actor)
        nxt = nxt.with_queue(key, cfg.queue(*key) + (msg,))
    elif isinstance(step, ReceiveStep):
        key = (step.peer, step.actor)
        nxt = nxt.with_queue(key, cfg.queue(*key)[1:])
    # sends to the environment and environment receives move no messages
    return nxt


def classify(
    sys: SystemModel, cfg: Configuration, steps: list[Step], bound: int
) -> Classification:
    """Classify one configuration from its own shape and enabled steps."""
    all_terminal = all(
        sys.cfsms[name].io(state) is None for name, state in cfg.control
    )
    queues_empty = all(not msgs for _, msgs in cfg.queues)
    if all_terminal and queues_empty:
        return SuccessTerminal()

    failures: list[ReceptionFailure] = []
    for actor, state in cfg.control:
        m = sys.cfsms[actor]
        io = m.io(state)
        if io is None or io.direction is not Direction.RECEIVE or io.peer not in sys.cfsms:
            continue
        q = cfg.queue(io.peer, actor)
        if q and all(b.key != q[0].key for b in io.branches):
            failures.append(
                ReceptionFailure(
                    receiver=actor,
                    receiver_state_span=m.state_span[state],
                    message=q[0],
                    offered=io.branches,
                )
            )
    if failures:
        return UnspecifiedReception(tuple(failures))

    # a send throttled by a full queue only matters when no receive on that
    # queue can drain it right now; otherwise it is merely delayed
    suppressed: list[SuppressedSend] = []
    for actor, state in cfg.control:
        m = sys.cfsms[actor]
        io = m.io(state)
        if io is None or io.direction is not Direction.SEND or io.peer not in sys.cfsms:
            continue
        if len(cfg.queue(actor, io.peer)) < bound:
            continue
        drainable = any(
            isinstance(s, ReceiveStep) and s.actor == io.peer and s.peer == actor
            for s in steps
        )
        if not drainable:
            suppressed.extend(
                SuppressedSend(actor, io.peer, b.label, b.span, m.state_span[state])
                for b in io.branches
            )
    if suppressed:
        return BoundExceeded(tuple(suppressed))
    if steps:
        return Ok()

    if not queues_empty:
        stranded = []
        for (sender, receiver), msgs in cfg.queues:
            for msg in msgs:
                state = cfg.state_of(receiver)
                stranded.append(
                    StrandedMessage(
                        message=msg,
                        receiver=receiver,
                        receiver_state_span=sys.cfsms[receiver].state_span[state],
                    )
                )
        return Orphan(tuple(stranded))

    blocked = []
    for actor, state in cfg.control:
        io = sys.cfsms[actor].io(state)
        if io is not None:
            blocked.append(
                BlockedObject(actor, sys.cfsms[actor].state_span[state], io.peer)
            )
    return Deadlock(tuple(blocked))


# ── the reachability graph ────────────────────────────────────────

@dataclass(slots=True)
class ConfigNode:
    index: int
    depth: int
    parent: Configuration | None
    parent_step: Step | None
    classification: Classification


@dataclass(slots=True)
class ReachGraph:
    system: SystemModel
    bound: int
    nodes: dict[Configuration, ConfigNode]
    order: list[Configuration]
    edges: list[tuple[Configuration, Step, Configuration]]

    @property
    def initial(self) -> Configuration:
        return self.order[0]

    def classification_of(self, cfg: Configuration) -> Classification:
        return self.nodes[cfg].classification

    def in_bfs_order(self) -> Iterator[tuple[Configuration, ConfigNode]]:
        for cfg in self.order:
            yield cfg, self.nodes[cfg]


def explore(
    sys: SystemModel,
    bound: int,
    config_cap: int = 1_000_000,
    deadline: float | None = None,
) -> ReachGraph:
    """Breadth-first exploration from the initial configuration; every
    reachable configuration is classified. Raises StateSpaceOverflow past
    ``config_cap`` configurations or the ``deadline`` (``time.monotonic``
    timestamp)."""
    if bound < 1:
        raise ValueError("queue bound must be at least 1")
    init = initial_configuration(sys)
    nodes = {init: ConfigNode(0, 0, None, None, Ok())}
    order = [init]
    edges: list[tuple[Configuration, Step, Configuration]] = []
    work: deque[Configuration] = deque([init])
    popped = 0
    while work:
        cfg = work.popleft()
        popped += 1
        if deadline is not None and popped % 512 == 0 and time.monotonic() > deadline:
            raise StateSpaceOverflow("time budget exceeded", len(nodes))
        node = nodes[cfg]
        steps = enabled_steps(sys, cfg, bound)
        node.classification = classify(sys, cfg, steps, bound)
        for step in steps:
            nxt = apply_step(sys, cfg, step)
            if nxt not in nodes:
                if len(nodes) >= config_cap:
                    raise StateSpaceOverflow(
                        f"more than {config_cap} configurations", len(nodes)
                    )
                nodes[nxt] = ConfigNode(len(order), node.depth + 1, cfg, step, Ok())
                order.append(nxt)
                work.append(nxt)
            edges.append((cfg, step, nxt))
    return ReachGraph(sys, bound, nodes, order, edges)


def trace_to(
    graph: ReachGraph, cfg: Configuration
) -> list[tuple[Step, str, str, str]]:
    """Shortest event sequence from the initial configuration to ``cfg``,
    as (step, actor, peer, label) tuples, via the BFS parent pointers."""
    if cfg not in graph.nodes:
        raise KeyError("configuration not in graph")
    rev: list[tuple[Step, str, str, str]] = []
    node = graph.nodes[cfg]
    while node.parent is not None:
        step = node.parent_step
        assert step is not None
        io = graph.system.cfsms[step.actor].io(node.parent.state_of(step.actor))
        assert io is not None
        label = io.branches[step.branch].label
        rev.append((step, step.actor, step.peer, label))
        node = graph.nodes[node.parent]
    return list(reversed(rev))


def debug_dump(graph: ReachGraph) -> str:
    """One line per configuration in canonical encoding plus its
    classification, in BFS order, for golden tests."""
    lines = []
    for cfg, node in graph.in_bfs_order():
        control = " ".join(f"{name}:{state}" for name, state in cfg.control)
        queues = " ".join(
            f"{s}->{r}=[{','.join(m.label for m in msgs)}]"
            for (s, r), msgs in cfg.queues
            if msgs
        )
        cls = type(node.classification).__name__
        lines.append(f"#{node.index} d{node.depth} {control} {queues} {cls}".rstrip())
    return "\n".join(lines) + "\n"
