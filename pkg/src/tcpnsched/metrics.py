"""Per-process and aggregate schedule metrics derived from a final marking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .kernel import EngineError, EngineState
from .sched import FINISHED
from .workload import Policy, PriorityPair, Process, Workload

if TYPE_CHECKING:
    from .oracle import OracleEvent


@dataclass(frozen=True)
class Aggregates:
    avg_waiting: float
    avg_turnaround: float
    total_idle: int
    utilization: float


@dataclass(frozen=True)
class GanttSegment:
    """One tile of the schedule: a run of one process, or an idle gap."""

    kind: str  # "run" | "idle"
    pi: int | None
    start: int
    finish: int


@dataclass(frozen=True)
class ScheduleResult:
    """Everything derivable from one completed schedule.

    Idle is measured from the first arrival (``lead_in``), not from time 0;
    the span before the first arrival is reported separately as lead_in.
    ``aggregates`` is None for an empty workload rather than 0/0.
    """

    policy: Policy
    finished: tuple[Process, ...]
    makespan: int
    lead_in: int
    idle_intervals: tuple[tuple[int, int], ...]
    per_process: dict[int, dict[str, int]]
    aggregates: Aggregates | None

    @property
    def total_idle(self) -> int:
        return sum(end - start for start, end in self.idle_intervals)


def result_from_processes(
    finished: Sequence[Process], w: Workload, policy: Policy
) -> ScheduleResult:
    """Build a ScheduleResult from completed process records.

    Each record must carry its stamped es/wt; start = es, finish = es + st,
    turnaround = wt + st. Idle intervals are the maximal gaps between
    consecutive execution intervals within [lead_in, makespan].
    """
    if sorted(p.pi for p in finished) != sorted(p.pi for p in w.processes):
        raise EngineError(
            f"finished set does not match the workload: "
            f"got {sorted(p.pi for p in finished)}, expected {sorted(p.pi for p in w.processes)}"
        )
    if not finished:
        return ScheduleResult(
            policy=policy,
            finished=(),
            makespan=0,
            lead_in=0,
            idle_intervals=(),
            per_process={},
            aggregates=None,
        )

    lead_in = min(p.it for p in w.processes)
    makespan = max(p.es + p.st for p in finished)

    idle: list[tuple[int, int]] = []
    cursor = lead_in
    for start, end in sorted((p.es, p.es + p.st) for p in finished):
        if start > cursor:
            idle.append((cursor, start))
        cursor = max(cursor, end)

    per_process = {
        p.pi: {
            "start": p.es,
            "finish": p.es + p.st,
            "waiting": p.wt,
            "turnaround": p.wt + p.st,
        }
        for p in finished
    }
    n = len(finished)
    total_service = sum(p.st for p in finished)
    aggregates = Aggregates(
        avg_waiting=sum(p.wt for p in finished) / n,
        avg_turnaround=sum(p.wt + p.st for p in finished) / n,
        total_idle=sum(end - start for start, end in idle),
        utilization=total_service / (makespan - lead_in),
    )
    return ScheduleResult(
        policy=policy,
        finished=tuple(finished),
        makespan=makespan,
        lead_in=lead_in,
        idle_intervals=tuple(idle),
        per_process=per_process,
        aggregates=aggregates,
    )


def compute_metrics(final: EngineState, w: Workload, policy: Policy) -> ScheduleResult:
    """Derive the schedule metrics from a completed engine run."""
    finished = final.marking[FINISHED].value
    return result_from_processes(finished, w, policy)


def result_from_events(
    events: Iterable["OracleEvent"], w: Workload, policy: Policy
) -> ScheduleResult:
    """Build a ScheduleResult from oracle dispatch events."""
    by_pi = {p.pi: p for p in w.processes}
    finished = []
    for e in events:
        if e.pi not in by_pi:
            raise EngineError(f"oracle event names unknown process {e.pi}")
        p = by_pi[e.pi]
        finished.append(
            Process(pi=p.pi, it=p.it, st=p.st, wt=e.waiting, es=e.dispatch, pr=PriorityPair(*e.pr))
        )
    return result_from_processes(finished, w, policy)


def extract_gantt(result: ScheduleResult) -> list[GanttSegment]:
    """Run and idle segments sorted by start, tiling [lead_in, makespan]."""
    segments = [
        GanttSegment(kind="run", pi=p.pi, start=p.es, finish=p.es + p.st)
        for p in result.finished
    ]
    segments.extend(
        GanttSegment(kind="idle", pi=None, start=s, finish=e)
        for s, e in result.idle_intervals
    )
    segments.sort(key=lambda seg: seg.start)
    return segments


def gantt_csv(result: ScheduleResult) -> str:
    """Gantt data as CSV with header ``kind,pi,start,finish``."""
    lines = ["kind,pi,start,finish"]
    for seg in extract_gantt(result):
        pi = "" if seg.pi is None else seg.pi
        lines.append(f"{seg.kind},{pi},{seg.start},{seg.finish}")
    return "\n".join(lines) + "\n"
