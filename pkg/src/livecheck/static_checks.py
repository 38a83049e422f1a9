"""Static well-formedness checks over a parsed program.

An empty result means the program is safe to compile: names resolve,
choices are unambiguous, recursion is guarded, and no object talks to
itself.
"""

from __future__ import annotations

from .diagnostics import Diagnostic, DiagnosticKind, Polarity, make_diagnostic
from .source import Span
from .syntax import (
    BehaviourDef,
    BehaviourRef,
    Choice,
    ObjectDecl,
    Prefix,
    ProcessAst,
    ProgramAst,
    SystemDecl,
    Terminal,
)


def _error(span: Span, system: str, message: str) -> Diagnostic:
    return make_diagnostic(
        DiagnosticKind.STATIC_ERROR, Polarity.RED, span, system, message
    )


def check_static(program: ProgramAst) -> list[Diagnostic]:
    """Report duplicate names, unresolved references, duplicate choice
    labels, self-communication, unknown systems in ``using``/``:`` clauses,
    import shadowing, and unguarded behaviour recursion."""
    diags: list[Diagnostic] = []
    system_names = {decl.name for decl in program.systems}

    seen_systems: set[str] = set()
    for decl in program.systems:
        if decl.name in seen_systems:
            diags.append(_error(decl.name_span, decl.name, f"duplicate system {decl.name}"))
        seen_systems.add(decl.name)
        diags.extend(_check_system(decl, system_names, program))

    return diags


def _check_system(
    decl: SystemDecl, system_names: set[str], program: ProgramAst
) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    if decl.refines is not None and decl.refines not in system_names:
        assert decl.refines_span is not None
        diags.append(
            _error(decl.refines_span, decl.name, f"unknown system {decl.refines}")
        )

    # local duplicates, then `using` imports shadowing anything already bound
    bound: dict[str, str] = {}
    for obj in decl.objects:
        if obj.name in bound:
            diags.append(
                _error(obj.name_span, decl.name, f"duplicate object {obj.name}")
            )
        bound[obj.name] = decl.name
    for used_name, used_span in decl.uses:
        used = program.system(used_name)
        if used is None:
            diags.append(_error(used_span, decl.name, f"unknown system {used_name}"))
            continue
        for obj in used.objects:
            if obj.name in bound:
                diags.append(
                    _error(
                        used_span,
                        decl.name,
                        f"using {used_name} shadows object {obj.name}"
                        f" (already defined in {bound[obj.name]})",
                    )
                )
            else:
                bound[obj.name] = used_name

    for obj in decl.objects:
        diags.extend(_check_object(obj, decl.name))
    return diags


def _check_object(obj: ObjectDecl, system: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def walk(proc: ProcessAst, scope: frozenset[str]) -> None:
        if isinstance(proc, Terminal):
            return
        if isinstance(proc, BehaviourRef):
            if proc.name not in scope:
                diags.append(
                    _error(proc.span, system, f"unresolved behaviour {proc.name}")
                )
            return
        if isinstance(proc, BehaviourDef):
            inner = scope | {proc.name}
            walk(proc.body, inner)
            walk(proc.cont, inner)
            return
        # Prefix or Choice
        if proc.peer == obj.name:
            diags.append(
                _error(proc.peer_span, system, f"object {obj.name} communicates with itself")
            )
        if isinstance(proc, Prefix):
            walk(proc.cont, scope)
        else:
            labels: set[str] = set()
            for msg, cont in proc.branches:
                if msg.label in labels:
                    diags.append(
                        _error(msg.span, system, f"duplicate label {msg.label} in choice")
                    )
                labels.add(msg.label)
                walk(cont, scope)

    walk(obj.body, frozenset())
    span = find_unguarded(obj.body)
    if span is not None:
        diags.append(
            _error(span, system, "unguarded behaviour recursion (names a state with no content)")
        )
    return diags


def find_unguarded(body: ProcessAst) -> Span | None:
    """Detect a behaviour that aliases back to itself without passing a
    communication or terminal state; such a definition names no state and
    cannot be compiled. Follows the compiler's lazy resolution, so a
    degenerate definition that is never referenced is not an error."""
    visited: set[int] = set()  # concrete nodes already explored

    def resolve(proc: ProcessAst, env: dict, chain: set[int]) -> Span | None:
        # follow definition/reference aliases until a concrete state
        while True:
            if isinstance(proc, BehaviourDef):
                if id(proc) in chain:
                    return proc.name_span
                chain = chain | {id(proc)}
                entry: list = [proc.body, None]
                env = {**env, proc.name: entry}
                entry[1] = env
                proc = proc.cont
            elif isinstance(proc, BehaviourRef):
                if proc.name not in env:
                    return None  # reported as unresolved elsewhere
                if id(proc) in chain:
                    return proc.span
                chain = chain | {id(proc)}
                proc, env = env[proc.name]
            else:
                break
        if id(proc) in visited:
            return None
        visited.add(id(proc))
        if isinstance(proc, Prefix):
            return resolve(proc.cont, env, set())
        if isinstance(proc, Choice):
            for _, cont in proc.branches:
                bad = resolve(cont, env, set())
                if bad is not None:
                    return bad
        return None

    return resolve(body, {}, set())
