"""Process/policy data model plus workload parsing, validation and serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, IO, NamedTuple


class WorkloadError(ValueError):
    """Raised when a workload source is malformed or violates an invariant."""


class Policy(Enum):
    """Non-preemptive scheduling method."""

    FCFS = "fcfs"
    SJF = "sjf"
    PR = "pr"
    HRRN = "hrrn"

    @classmethod
    def from_name(cls, name: str) -> "Policy":
        """Look up a policy by name, case-insensitively."""
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise WorkloadError(f"unknown policy {name!r}; valid policies: {valid}") from None


class PriorityPair(NamedTuple):
    """Computed priority: major field decides, minor field breaks ties.

    Fractional priorities (HRRN response ratios) are stored pre-scaled by 100
    so both fields stay integers.
    """

    major: int
    minor: int


@dataclass(frozen=True, slots=True)
class Process:
    """One job record.

    pi: process index (unique, >= 1)
    it: arrival time
    st: service time (>= 1)
    wt: waiting time accumulated up to the current instant
    es: execution start time
    pr: current priority pair; in a fresh workload pr.major holds the static
        priority (only meaningful under the PR policy) and pr.minor is 0
    """

    pi: int
    it: int
    st: int
    wt: int = 0
    es: int = 0
    pr: PriorityPair = PriorityPair(0, 0)


@dataclass(frozen=True)
class Workload:
    """An ordered collection of processes; list order is preserved end-to-end."""

    processes: tuple[Process, ...]
    name: str = ""

    def __len__(self) -> int:
        return len(self.processes)


#: The built-in six-process case study selected with the ``paper-table1`` keyword.
_TABLE1 = (
    (1, 6, 4, 2),
    (2, 7, 3, 1),
    (3, 8, 2, 2),
    (4, 5, 2, 3),
    (5, 9, 3, 1),
    (6, 1, 3, 4),
)


def builtin_paper_workload() -> Workload:
    """Return the built-in six-process workload (``paper-table1``)."""
    procs = tuple(
        Process(pi=pi, it=it, st=st, wt=0, es=0, pr=PriorityPair(prio, 0))
        for pi, it, st, prio in _TABLE1
    )
    return Workload(processes=procs, name="paper-table1")


def validate_workload(w: Workload) -> list[str]:
    """Return the complete list of invariant violations; empty means ok."""
    violations: list[str] = []
    seen: set[int] = set()
    for p in w.processes:
        where = f"process {p.pi}"
        if p.pi < 1:
            violations.append(f"{where}: index must be >= 1")
        if p.pi in seen:
            violations.append(f"duplicate index {p.pi}")
        seen.add(p.pi)
        if p.it < 0:
            violations.append(f"{where}: negative arrival time {p.it}")
        if p.st < 1:
            violations.append(f"{where}: service time must be >= 1")
        if p.wt != 0:
            violations.append(f"{where}: fresh workload must have wt = 0")
        if p.es != 0:
            violations.append(f"{where}: fresh workload must have es = 0")
        if p.pr.minor != 0:
            violations.append(f"{where}: fresh workload must have minor priority 0")
    return violations


_JSON_FIELDS = ("pi", "it", "st", "priority")
_REQUIRED_FIELDS = ("pi", "it", "st")


def _as_int(value: Any, field: str, where: str) -> int:
    # bool is an int subclass; a true/false arrival time is a schema error.
    if isinstance(value, bool) or not isinstance(value, int):
        raise WorkloadError(f"{where}: field {field!r} must be an integer, got {value!r}")
    return value


def _process_from_fields(fields: dict[str, int]) -> Process:
    # wt/es are never trusted from input; a fresh workload always starts at 0.
    return Process(
        pi=fields["pi"],
        it=fields["it"],
        st=fields["st"],
        wt=0,
        es=0,
        pr=PriorityPair(fields.get("priority", 0), 0),
    )


def _parse_json(text: str) -> list[Process]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise WorkloadError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(data, list):
        raise WorkloadError("workload JSON must be an array of process objects")
    procs = []
    for i, entry in enumerate(data):
        where = f"entry {i}"
        if not isinstance(entry, dict):
            raise WorkloadError(f"{where}: expected an object, got {type(entry).__name__}")
        unknown = set(entry) - set(_JSON_FIELDS)
        if unknown:
            raise WorkloadError(f"{where}: unknown field {sorted(unknown)[0]!r}")
        missing = [f for f in _REQUIRED_FIELDS if f not in entry]
        if missing:
            raise WorkloadError(f"{where}: missing field {missing[0]!r}")
        fields = {k: _as_int(v, k, where) for k, v in entry.items()}
        procs.append(_process_from_fields(fields))
    return procs


def _parse_csv(text: str) -> list[Process]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise WorkloadError("line 1: missing CSV header 'pi,it,st,priority'") from None
    header = [h.strip() for h in header]
    unknown = [h for h in header if h not in _JSON_FIELDS]
    if unknown:
        raise WorkloadError(f"line 1: unknown column {unknown[0]!r}")
    missing = [f for f in _REQUIRED_FIELDS if f not in header]
    if missing:
        raise WorkloadError(f"line 1: missing column {missing[0]!r}")
    procs = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise WorkloadError(f"line {lineno}: expected {len(header)} cells, got {len(row)}")
        where = f"line {lineno}"
        fields: dict[str, int] = {}
        for name, cell in zip(header, row):
            cell = cell.strip()
            if name == "priority" and cell == "":
                continue
            try:
                fields[name] = int(cell)
            except ValueError:
                raise WorkloadError(f"{where}: field {name!r} must be an integer, got {cell!r}") from None
        procs.append(_process_from_fields(fields))
    return procs


def parse_workload(source: bytes | str | IO, fmt: str = "json", name: str = "") -> Workload:
    """Parse a workload from a JSON or CSV source.

    Rejects any input that violates a process invariant; values are never
    silently clamped. Missing static priority defaults to 0; wt/es are
    forced to 0 regardless of input.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            text = source.decode("utf-8")
        except UnicodeDecodeError as e:
            raise WorkloadError(f"workload source is not valid UTF-8: {e}") from None
    else:
        text = source

    if fmt == "json":
        procs = _parse_json(text)
    elif fmt == "csv":
        procs = _parse_csv(text)
    else:
        raise WorkloadError(f"unknown workload format {fmt!r}; valid formats: json, csv")

    w = Workload(processes=tuple(procs), name=name)
    violations = validate_workload(w)
    if violations:
        raise WorkloadError("; ".join(violations))
    return w


def serialize_workload(w: Workload, fmt: str = "json") -> str:
    """Serialize a workload so that parse_workload round-trips it."""
    rows = [{"pi": p.pi, "it": p.it, "st": p.st, "priority": p.pr.major} for p in w.processes]
    if fmt == "json":
        return json.dumps(rows)
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(_JSON_FIELDS)
        for row in rows:
            writer.writerow([row[f] for f in _JSON_FIELDS])
        return out.getvalue()
    raise WorkloadError(f"unknown workload format {fmt!r}; valid formats: json, csv")
