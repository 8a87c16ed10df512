"""Shared test utilities: corpora, a checked step-driver, and invariant asserts."""

from __future__ import annotations

import random

from tcpnsched import (
    EngineState,
    Policy,
    PriorityPair,
    ScheduleResult,
    Workload,
    advance_clock,
    build_net,
    compute_metrics,
    enabled,
    fire,
    random_workload,
)
from tcpnsched.sched import FINISHED, NEW_TASKS, PLACES, RUNNING, exists_arrived


def make_corpus(seed: int, count: int, **ranges) -> list[Workload]:
    """Seeded random workloads; case i is reproducible from (seed, i)."""
    return [
        random_workload(random.Random(seed * 100_000 + i), name=f"case-{seed}-{i}", **ranges)
        for i in range(count)
    ]


def run_checked(w: Workload, policy: Policy) -> EngineState:
    """Drive the scheduler net step by step, asserting marking invariants.

    Checks at every firing: the marking covers exactly the four places, the
    pi multiset over all places equals the workload's, Running holds at most
    one process, the clock never decreases, and Dispatch never fires while
    an arrived process sits in NewTasks.
    """
    sn = build_net(w, policy)
    state = sn.initial_state()
    expected_pis = sorted(p.pi for p in w.processes)

    def assert_marking() -> None:
        assert set(state.marking) == set(PLACES)
        pis = sorted(p.pi for name in PLACES for p in state.marking[name].value)
        assert pis == expected_pis, "pi multiset not conserved"
        assert len(state.marking[RUNNING].value) <= 1, "more than one process running"

    assert_marking()
    last_clock = state.clock
    while True:
        ts = enabled(sn.net, state)
        if not ts:
            if advance_clock(sn.net, state) is None:
                return state
            assert state.clock > last_clock
            last_clock = state.clock
            continue
        t = ts[0]
        if t.name == "Dispatch":
            assert not exists_arrived(state.marking[NEW_TASKS].value, state.clock), (
                "Dispatch fired while an arrived process sat in NewTasks"
            )
        fire(sn.net, state, t)
        assert state.clock == last_clock
        assert_marking()


def assert_schedule_invariants(w: Workload, policy: Policy, state: EngineState) -> ScheduleResult:
    """Result-level invariants of one completed run; returns the metrics."""
    result = compute_metrics(state, w, policy)
    n = len(w.processes)

    finished = state.marking[FINISHED].value
    assert [p.pi for p in result.finished] == [p.pi for p in finished]

    by_pi = {p.pi: p for p in w.processes}
    for p in result.finished:
        assert p.it == by_pi[p.pi].it and p.st == by_pi[p.pi].st
        assert p.wt == p.es - p.it, "waiting time must equal start minus arrival"
        if policy is Policy.HRRN:
            assert p.pr == PriorityPair((p.st + p.wt) * 100 // p.st, 0)

    # Non-preemption: execution intervals never overlap.
    intervals = sorted((p.es, p.es + p.st) for p in result.finished)
    for (s1, e1), (s2, e2) in zip(intervals, intervals[1:]):
        assert e1 <= s2, "execution intervals overlap"

    # Work conservation: nothing arrived sits across an idle gap.
    for gap_start, _gap_end in result.idle_intervals:
        for p in result.finished:
            if p.it <= gap_start:
                assert p.es + p.st <= gap_start, "idle while an arrived process was unfinished"

    if n:
        total_service = sum(p.st for p in result.finished)
        assert result.total_idle + total_service == result.makespan - result.lead_in

    # Halting bound: firings stay within 4n plus the idle ticks.
    idle_ticks = sum(1 for e in state.trace if e.transition == "Idle")
    assert len(state.trace) <= 4 * n + idle_ticks

    times = [e.time for e in state.trace]
    assert times == sorted(times), "trace firing times must be nondecreasing"
    return result
