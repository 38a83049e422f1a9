"""Communicating finite-state machines compiled from object declarations.

Each object becomes one machine: one state per distinct process position,
with behaviour definitions and references aliasing states rather than
creating them. Every non-terminal state addresses exactly one peer in one
direction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .source import Span
from .syntax import (
    BehaviourDef,
    BehaviourRef,
    Choice,
    Direction,
    ObjectDecl,
    Prefix,
    ProcessAst,
    ProgramAst,
    SystemDecl,
    Terminal,
)

StateId = int


@dataclass(frozen=True, slots=True)
class Branch:
    """One labelled transition out of a state. ``span`` is the label token;
    ``value`` keeps the payload's display text for diagnostics (label
    matching elsewhere uses only label and arity)."""

    label: str
    arity: int
    value: str | None
    span: Span
    target: StateId

    @property
    def key(self) -> tuple[str, int]:
        return (self.label, self.arity)


@dataclass(frozen=True, slots=True)
class StateIO:
    """The unique peer and direction of a non-terminal state, with its
    outgoing branches in source order."""

    peer: str
    direction: Direction
    branches: tuple[Branch, ...]


@dataclass(frozen=True, slots=True)
class Cfsm:
    object_name: str
    states: tuple[StateId, ...]
    initial: StateId
    terminal: frozenset[StateId]
    transitions: dict[StateId, StateIO]
    state_span: dict[StateId, Span]

    def peers(self) -> set[str]:
        return {io.peer for io in self.transitions.values()}

    def io(self, state: StateId) -> StateIO | None:
        return self.transitions.get(state)


class CompileError(Exception):
    """Raised when compiling an object that did not pass the static checks."""


def compile_object(obj: ObjectDecl) -> Cfsm:
    """Compile an object body to a machine.

    Behaviour definitions compile their body once; the definition point
    continues at its continuation and every reference aliases the body's
    state, so recursion becomes a cycle in the machine.
    """
    transitions: dict[StateId, StateIO] = {}
    state_span: dict[StateId, Span] = {}
    terminal: set[StateId] = set()
    memo: dict[int, StateId] = {}
    counter = iter(range(1 << 30))

    def resolve(proc: ProcessAst, env: dict, chain: set[int]) -> StateId:
        while True:
            if isinstance(proc, BehaviourDef):
                if id(proc) in chain:
                    raise CompileError(f"unguarded behaviour {proc.name}")
                chain = chain | {id(proc)}
                entry: list = [proc.body, None]
                env = {**env, proc.name: entry}
                entry[1] = env
                proc = proc.cont
            elif isinstance(proc, BehaviourRef):
                if proc.name not in env:
                    raise CompileError(f"unresolved behaviour {proc.name}")
                if id(proc) in chain:
                    raise CompileError(f"unguarded behaviour {proc.name}")
                chain = chain | {id(proc)}
                proc, env = env[proc.name]
            else:
                break
        if id(proc) in memo:
            return memo[id(proc)]
        state = next(counter)
        memo[id(proc)] = state
        if isinstance(proc, Terminal):
            terminal.add(state)
            state_span[state] = proc.span
            return state
        if isinstance(proc, Prefix):
            state_span[state] = proc.peer_span
            pairs = ((proc.msg, proc.cont),)
            peer, direction = proc.peer, proc.direction
        else:
            state_span[state] = proc.peer_span
            pairs = proc.branches
            peer, direction = proc.peer, proc.direction
        branches = tuple(
            Branch(
                label=msg.label,
                arity=msg.arity,
                value=msg.payload.display if msg.payload is not None else None,
                span=msg.span,
                target=resolve(cont, env, set()),
            )
            for msg, cont in pairs
        )
        transitions[state] = StateIO(peer, direction, branches)
        return state

    initial = resolve(obj.body, {}, set())
    states = tuple(sorted(set(transitions) | terminal))
    return Cfsm(
        object_name=obj.name,
        states=states,
        initial=initial,
        terminal=frozenset(terminal),
        transitions=transitions,
        state_span=state_span,
    )


def dualize(m: Cfsm) -> Cfsm:
    """Swap sends and receives; states, labels, targets and peers unchanged."""
    return replace(
        m,
        transitions={
            s: StateIO(io.peer, io.direction.flipped(), io.branches)
            for s, io in m.transitions.items()
        },
    )


def retarget(m: Cfsm, object_name: str, peer_renames: dict[str, str]) -> Cfsm:
    """Rename the machine and remap the peers its transitions address."""
    return replace(
        m,
        object_name=object_name,
        transitions={
            s: StateIO(peer_renames.get(io.peer, io.peer), io.direction, io.branches)
            for s, io in m.transitions.items()
        },
    )


def validate_cfsm(m: Cfsm) -> None:
    """Assert the machine invariants; used by tests on every compiled output."""
    for state in m.terminal:
        if state in m.transitions:
            raise AssertionError(f"terminal state {state} has transitions")
    for state, io in m.transitions.items():
        labels = [b.label for b in io.branches]
        if len(labels) != len(set(labels)):
            raise AssertionError(f"duplicate labels at state {state}")
        if not io.branches:
            raise AssertionError(f"state {state} has no branches")
    reached = {m.initial}
    frontier = [m.initial]
    while frontier:
        io = m.transitions.get(frontier.pop())
        if io is None:
            continue
        for b in io.branches:
            if b.target not in reached:
                reached.add(b.target)
                frontier.append(b.target)
    if reached != set(m.states):
        raise AssertionError(f"unreachable states: {set(m.states) - reached}")
    if set(m.transitions) | set(m.terminal) != set(m.states):
        raise AssertionError("states do not partition into terminal and transitioning")


def debug_listing(m: Cfsm) -> str:
    """Deterministic text form, one line per transition, for golden tests."""
    lines = [f"cfsm {m.object_name} initial={m.initial}"
             f" terminal={{{','.join(map(str, sorted(m.terminal)))}}}"]
    for state in sorted(m.transitions):
        io = m.transitions[state]
        for b in io.branches:
            lines.append(
                f"{state} {io.peer} {io.direction.value} {b.label}/{b.arity} -> {b.target}"
            )
    return "\n".join(lines) + "\n"


# ── system composition ────────────────────────────────────────────

class NameClash(Exception):
    pass


@dataclass(frozen=True, slots=True)
class SystemModel:
    """A named composition: compiled objects (after ``using`` resolution),
    the undefined peers treated as a maximally permissive environment, and
    optionally peers that are absent altogether (no environment behaviour;
    used by the duality cross-check)."""

    name: str
    span: Span
    cfsms: dict[str, Cfsm]
    environment_peers: frozenset[str]
    refines: str | None
    absent_peers: frozenset[str] = frozenset()

    def object_names(self) -> tuple[str, ...]:
        return tuple(sorted(self.cfsms))


def build_system(decl: SystemDecl, program: ProgramAst) -> SystemModel:
    """Compile the system's own objects plus all objects of each used
    system; peers referenced but not defined become environment peers."""
    cfsms: dict[str, Cfsm] = {}
    for obj in decl.objects:
        if obj.name in cfsms:
            raise NameClash(f"duplicate object {obj.name} in system {decl.name}")
        cfsms[obj.name] = compile_object(obj)
    for used_name, _ in decl.uses:
        used = program.system(used_name)
        if used is None:
            raise NameClash(f"unknown system {used_name} used by {decl.name}")
        for obj in used.objects:
            if obj.name in cfsms:
                raise NameClash(
                    f"using {used_name} brings object {obj.name}"
                    f" into {decl.name}, which already defines it"
                )
            cfsms[obj.name] = compile_object(obj)
    referenced = set()
    for m in cfsms.values():
        referenced |= m.peers()
    return SystemModel(
        name=decl.name,
        span=decl.name_span,
        cfsms=cfsms,
        environment_peers=frozenset(referenced - set(cfsms)),
        refines=decl.refines,
    )


def assemble_system(
    name: str,
    span: Span,
    machines: dict[str, Cfsm],
    *,
    environment: frozenset[str] = frozenset(),
    absent: frozenset[str] = frozenset(),
) -> SystemModel:
    """Build a model directly from machines (test and oracle plumbing)."""
    return SystemModel(
        name=name,
        span=span,
        cfsms=dict(machines),
        environment_peers=environment,
        refines=None,
        absent_peers=absent,
    )
