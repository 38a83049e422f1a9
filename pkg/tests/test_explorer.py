"""Exploration of the asynchronous configuration space."""

from __future__ import annotations

import pytest

from livecheck import (
    apply_step,
    build_system,
    enabled_steps,
    explore,
    initial_configuration,
    parse,
    trace_to,
)
from livecheck.explorer import (
    Deadlock,
    EnvReceiveStep,
    Ok,
    Orphan,
    ReceiveStep,
    SendStep,
    StateSpaceOverflow,
    SuccessTerminal,
    UnspecifiedReception,
    debug_dump,
)


def model_of(text, name):
    prog = parse(text)
    return build_system(prog.system(name), prog)


# ── initial configurations ────────────────────────────────────────

def test_pingpong_initial(corpus_models):
    cfg = initial_configuration(corpus_models["pingpong"])
    assert cfg.control == (("A", 0), ("B", 0))
    assert cfg.queues == ((("A", "B"), ()), (("B", "A"), ()))


def test_author_initial(corpus_models):
    cfg = initial_configuration(corpus_models["author"])
    assert dict(cfg.control) == {"author": 0, "PC": 0}
    assert {key for key, _ in cfg.queues} == {("PC", "author"), ("author", "PC")}
    assert all(q == () for _, q in cfg.queues)


def test_empty_system_is_immediately_terminal():
    model = model_of("system s", "s")
    graph = explore(model, 4)
    assert len(graph.nodes) == 1
    assert isinstance(graph.classification_of(graph.initial), SuccessTerminal)


# ── enabled steps ─────────────────────────────────────────────────

def test_pingpong_initial_steps(corpus_models):
    model = corpus_models["pingpong"]
    assert enabled_steps(model, initial_configuration(model), 1) == [
        SendStep("A", "B", 0)
    ]


def test_conf_alone_initial_steps(corpus_models):
    model = corpus_models["conf"]
    assert enabled_steps(model, initial_configuration(model), 4) == [
        EnvReceiveStep("PC", "author", 0)
    ]


def test_terminal_configuration_has_no_steps():
    model = model_of("system s obj o .", "s")
    assert enabled_steps(model, initial_configuration(model), 4) == []


def test_receive_blocked_on_empty_queue(corpus_models):
    model = corpus_models["pingpong"]
    cfg = initial_configuration(model)
    assert not any(
        isinstance(s, ReceiveStep) for s in enabled_steps(model, cfg, 4)
    )


def test_send_blocked_by_full_queue(corpus_models):
    model = corpus_models["doublesend"]
    cfg = initial_configuration(model)
    cfg = apply_step(model, cfg, SendStep("A", "B", 0))
    # bound 1: A's second send is suppressed, only B's receive remains
    assert enabled_steps(model, cfg, 1) == [ReceiveStep("B", "A", 0)]


# ── step application ──────────────────────────────────────────────

def test_send_appends_and_advances(corpus_models):
    model = corpus_models["pingpong"]
    cfg = apply_step(model, initial_configuration(model), SendStep("A", "B", 0))
    (msg,) = cfg.queue("A", "B")
    assert (msg.label, msg.sender) == ("ping", "A")
    assert cfg.state_of("A") == model.cfsms["A"].io(0).branches[0].target


def test_receive_pops_head(corpus_models):
    model = corpus_models["pingpong"]
    cfg = initial_configuration(model)
    cfg = apply_step(model, cfg, SendStep("A", "B", 0))
    cfg = apply_step(model, cfg, ReceiveStep("B", "A", 0))
    assert cfg.queue("A", "B") == ()


def test_env_receive_leaves_queues_unchanged(corpus_models):
    model = corpus_models["conf"]
    before = initial_configuration(model)
    after = apply_step(model, before, EnvReceiveStep("PC", "author", 0))
    assert after.queues == before.queues
    assert after.state_of("PC") != before.state_of("PC")


def test_message_origin_span_is_senders_send_branch(corpus_models):
    model = corpus_models["author"]
    cfg = apply_step(model, initial_configuration(model), SendStep("author", "PC", 0))
    (msg,) = cfg.queue("author", "PC")
    sender_spans = {
        b.span for io in model.cfsms["author"].transitions.values() for b in io.branches
    }
    assert msg.origin_span in sender_spans


# ── exploration ───────────────────────────────────────────────────

def test_pingpong_exploration(corpus_models):
    graph = explore(corpus_models["pingpong"], 1)
    assert len(graph.nodes) == 5
    classes = [type(n.classification).__name__ for _, n in graph.in_bfs_order()]
    assert classes == ["Ok", "Ok", "Ok", "Ok", "SuccessTerminal"]


def test_conf_alone_has_no_error_configurations(corpus_models):
    graph = explore(corpus_models["conf"], 4)
    for _, node in graph.in_bfs_order():
        assert isinstance(node.classification, (Ok, SuccessTerminal))


def test_double_send_orphan(corpus_models):
    graph = explore(corpus_models["doublesend"], 4)
    orphans = [
        node.classification
        for _, node in graph.in_bfs_order()
        if isinstance(node.classification, Orphan)
    ]
    assert len(orphans) == 1
    (rec,) = orphans[0].records
    assert rec.message.label == "m"
    # the surviving message is the second send (FIFO: the first was consumed)
    assert rec.message.origin_span.start_line == 6


def test_author_system_errors_are_unspecified_receptions(corpus_models):
    graph = explore(corpus_models["author"], 4)
    bad = [
        node.classification
        for _, node in graph.in_bfs_order()
        if not isinstance(node.classification, (Ok, SuccessTerminal))
    ]
    assert bad
    assert all(isinstance(cls, UnspecifiedReception) for cls in bad)
    origins = {
        rec.message.label for cls in bad for rec in cls.records
    }
    assert origins == {"reject", "withdraw"}


def test_unspecified_reception_origin_is_sender_branch(corpus_models):
    model = corpus_models["author"]
    graph = explore(model, 4)
    for _, node in graph.in_bfs_order():
        if isinstance(node.classification, UnspecifiedReception):
            for rec in node.classification.records:
                sender_spans = {
                    b.span
                    for io in model.cfsms[rec.message.sender].transitions.values()
                    for b in io.branches
                }
                assert rec.message.origin_span in sender_spans


def test_deadlock_detection():
    # both objects start by receiving from the other: nobody ever sends
    model = model_of("system s obj A B?m. obj B A?m.", "s")
    graph = explore(model, 4)
    (cls,) = [n.classification for _, n in graph.in_bfs_order()]
    assert isinstance(cls, Deadlock)
    assert {r.name for r in cls.records} == {"A", "B"}


def test_fifo_receives_only_remove_heads(corpus_models):
    for name in ("pingpong", "doublesend", "author"):
        model = corpus_models[name]
        graph = explore(model, 4)
        for cfg, step, nxt in graph.edges:
            if isinstance(step, ReceiveStep):
                key = (step.peer, step.actor)
                assert nxt.queue(*key) == cfg.queue(*key)[1:]


def test_queue_lengths_respect_bound(corpus_models):
    for bound in (1, 2):
        graph = explore(corpus_models["doublesend"], bound)
        for cfg, _ in graph.in_bfs_order():
            assert all(len(q) <= bound for _, q in cfg.queues)


def test_exploration_deterministic(corpus_models):
    for name, model in corpus_models.items():
        assert debug_dump(explore(model, 4)) == debug_dump(explore(model, 4))


def test_overflow_cap():
    model = model_of("system s obj A behaviour L B!m L L obj B behaviour L A?m L L", "s")
    with pytest.raises(StateSpaceOverflow):
        explore(model, 4, config_cap=3)


def test_bound_must_be_positive(corpus_models):
    with pytest.raises(ValueError):
        explore(corpus_models["pingpong"], 0)


def test_unbounded_sender_reports_bound_exceeded():
    from livecheck.explorer import BoundExceeded

    model = model_of("system s obj A behaviour L B!m L L obj B A?m.", "s")
    graph = explore(model, 4)
    flagged = [
        n.classification
        for _, n in graph.in_bfs_order()
        if isinstance(n.classification, BoundExceeded)
    ]
    assert flagged
    assert flagged[0].records[0].label == "m"


# ── traces ────────────────────────────────────────────────────────

def test_pingpong_trace(corpus_models):
    graph = explore(corpus_models["pingpong"], 1)
    (terminal,) = [
        cfg
        for cfg, node in graph.in_bfs_order()
        if isinstance(node.classification, SuccessTerminal)
    ]
    trace = trace_to(graph, terminal)
    rendered = [
        f"{actor}{'!' if isinstance(step, SendStep) else '?'}{label}"
        for step, actor, _, label in trace
    ]
    assert rendered == ["A!ping", "B?ping", "B!pong", "A?pong"]


def test_trace_to_initial_is_empty(corpus_models):
    graph = explore(corpus_models["pingpong"], 1)
    assert trace_to(graph, graph.initial) == []


def test_reject_error_trace_is_shortest(corpus_models):
    """The first bad configuration of the committee/author composition,
    cross-checked by an independent breadth-first search over the edges."""
    graph = explore(corpus_models["author"], 4)
    reject_cfgs = [
        cfg
        for cfg, node in graph.in_bfs_order()
        if isinstance(node.classification, UnspecifiedReception)
        and any(r.message.label == "reject" for r in node.classification.records)
    ]
    target = reject_cfgs[0]
    trace = trace_to(graph, target)

    # independent shortest-path check over the recorded edges
    from collections import deque

    adjacency: dict = {}
    for src, _, dst in graph.edges:
        adjacency.setdefault(src, []).append(dst)
    dist = {graph.initial: 0}
    queue = deque([graph.initial])
    while queue:
        cur = queue.popleft()
        for dst in adjacency.get(cur, []):
            if dst not in dist:
                dist[dst] = dist[cur] + 1
                queue.append(dst)
    assert len(trace) == dist[target] == 9
    last_step, actor, peer, label = trace[-1]
    assert (actor, peer, label) == ("PC", "author", "reject")
    assert isinstance(last_step, SendStep)


def test_deadline_overflow():
    import time

    # three independent ten-step objects: enough interleavings to trip the
    # periodic deadline check
    chains = " ".join(
        f"obj {o} " + " ".join(f"env!{o}m{i}" for i in range(10)) + " ."
        for o in ("A", "B", "C")
    )
    model = model_of(f"system s {chains}", "s")
    with pytest.raises(StateSpaceOverflow):
        explore(model, 4, deadline=time.monotonic() - 1.0)


def test_debug_dump_golden(corpus_models):
    assert debug_dump(explore(corpus_models["pingpong"], 1)) == (
        "#0 d0 A:0 B:0  Ok\n"
        "#1 d1 A:1 B:0 A->B=[ping] Ok\n"
        "#2 d2 A:1 B:1  Ok\n"
        "#3 d3 A:1 B:2 B->A=[pong] Ok\n"
        "#4 d4 A:2 B:2  SuccessTerminal\n"
    )
