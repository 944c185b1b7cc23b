"""JSON and CSV formats: task descriptions, priority/arrival files, fronts, scenarios, cycle logs."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Sequence, TextIO

from .model import (
    APERIODIC,
    PERIODIC,
    ArrivalSequence,
    ModelError,
    PriorityAssignment,
    ScheduleScenario,
    Task,
    TaskSet,
    validate_taskset,
)


class FormatError(ValueError):
    """Malformed input file; the message names the file and the offending location."""


def load_json(path: str | Path) -> Any:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _dump_json(path: str | Path, doc: Any) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _check_keys(obj: Any, where: str, required: set[str], optional: set[str]) -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    missing = sorted(required - obj.keys())
    if missing:
        raise FormatError(f"{where}: missing required field {missing[0]!r}")
    unknown = sorted(obj.keys() - required - optional)
    if unknown:
        raise FormatError(f"{where}: unknown field {unknown[0]!r}")


def _int(obj: dict, key: str, where: str) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{where}.{key}: expected an integer number of ticks, got {v!r}")
    return v


_TASK_COMMON = {"id", "kind", "wcet", "deadline"}
_TASK_OPTIONAL = {"period", "offset", "pmin", "pmax", "deadline_class", "triggered"}


def taskset_from_dict(doc: Any, source: str = "<taskset>") -> TaskSet:
    _check_keys(doc, source, {"tasks"}, {"cores", "dependencies", "triggers", "tick_unit"})
    if not isinstance(doc["tasks"], list):
        raise FormatError(f"{source}.tasks: expected an array")
    tasks = []
    for i, raw in enumerate(doc["tasks"]):
        where = f"{source}.tasks[{i}]"
        _check_keys(raw, where, _TASK_COMMON, _TASK_OPTIONAL)
        kind = raw["kind"]
        if kind not in (PERIODIC, APERIODIC):
            raise FormatError(f"{where}.kind: expected 'periodic' or 'aperiodic', got {kind!r}")
        if kind == PERIODIC and "period" not in raw:
            raise FormatError(f"{where}: missing required field 'period'")
        if kind == APERIODIC:
            for key in ("pmin", "pmax"):
                if key not in raw:
                    raise FormatError(f"{where}: missing required field {key!r}")
        ints = {k: _int(raw, k, where) for k in ("id", "wcet", "deadline", "period", "offset", "pmin", "pmax") if k in raw}
        triggered = raw.get("triggered", False)
        if not isinstance(triggered, bool):
            raise FormatError(f"{where}.triggered: expected true or false")
        tasks.append(
            Task(
                id=ints["id"],
                kind=kind,
                wcet=ints["wcet"],
                deadline=ints["deadline"],
                period=ints.get("period"),
                offset=ints.get("offset", 0),
                pmin=ints.get("pmin"),
                pmax=ints.get("pmax"),
                deadline_class=raw.get("deadline_class", "hard"),
                triggered=triggered,
            )
        )

    def pairs(key: str) -> list[tuple[int, int]]:
        out = []
        for k, p in enumerate(doc.get(key, [])):
            if (
                not isinstance(p, list)
                or len(p) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in p)
            ):
                raise FormatError(f"{source}.{key}[{k}]: expected a pair of task ids")
            out.append((p[0], p[1]))
        return out

    cores = doc.get("cores", 1)
    if isinstance(cores, bool) or not isinstance(cores, int):
        raise FormatError(f"{source}.cores: expected an integer")
    deps = pairs("dependencies")
    for a, b in deps:
        if a == b:
            raise FormatError(f"{source}.dependencies: task {a} cannot depend on itself")
    ts = TaskSet(
        tuple(tasks),
        cores=cores,
        dependencies=frozenset(frozenset(p) for p in deps),
        triggers=frozenset(pairs("triggers")),
        tick_unit=str(doc.get("tick_unit", "1 ms")),
    )
    errors = validate_taskset(ts)
    if errors:
        raise ModelError(f"{source}: " + "; ".join(errors))
    return ts


def taskset_to_dict(ts: TaskSet) -> dict:
    tasks = []
    for t in ts.tasks:
        d: dict[str, Any] = {"id": t.id, "kind": t.kind, "wcet": t.wcet, "deadline": t.deadline}
        if t.is_periodic:
            d["period"] = t.period
            d["offset"] = t.offset
        else:
            d["pmin"] = t.pmin
            d["pmax"] = t.pmax
        d["deadline_class"] = t.deadline_class
        d["triggered"] = t.triggered
        tasks.append(d)
    return {
        "tick_unit": ts.tick_unit,
        "cores": ts.cores,
        "tasks": tasks,
        "dependencies": sorted(sorted(p) for p in ts.dependencies),
        "triggers": sorted([a, b] for a, b in ts.triggers),
    }


def read_taskset(path: str | Path) -> TaskSet:
    return taskset_from_dict(load_json(path), str(path))


def write_taskset(path: str | Path, ts: TaskSet) -> None:
    _dump_json(path, taskset_to_dict(ts))


# ---------------------------------------------------------------- priorities / arrivals


def read_priorities(path: str | Path, n: int | None = None) -> PriorityAssignment:
    """``{"priorities": [pr(task 0), pr(task 1), ...]}``; larger is higher priority."""
    doc = load_json(path)
    _check_keys(doc, str(path), {"priorities"}, set())
    values = doc["priorities"]
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise FormatError(f"{path}.priorities: expected an array of integers")
    P = PriorityAssignment(tuple(values))
    if not P.is_permutation() or (n is not None and len(P) != n):
        raise ModelError(f"{path}: priorities {values} are not a permutation of 1..{n or len(values)}")
    return P


def write_priorities(path: str | Path, P: PriorityAssignment) -> None:
    _dump_json(path, {"priorities": list(P.priority)})


def arrivals_to_dict(A: ArrivalSequence) -> dict:
    return {"horizon": A.horizon, "arrivals": [list(a) for a in A.arrivals]}


def arrivals_from_dict(doc: Any, source: str = "<arrivals>") -> ArrivalSequence:
    _check_keys(doc, source, {"horizon", "arrivals"}, set())
    horizon = _int(doc, "horizon", source)
    lists = doc["arrivals"]
    if not isinstance(lists, list) or not all(isinstance(x, list) for x in lists):
        raise FormatError(f"{source}.arrivals: expected an array of arrays")
    for j, lst in enumerate(lists):
        if not all(isinstance(a, int) and not isinstance(a, bool) for a in lst):
            raise FormatError(f"{source}.arrivals[{j}]: expected integer ticks")
    return ArrivalSequence(tuple(tuple(lst) for lst in lists), horizon)


def read_arrivals(path: str | Path) -> ArrivalSequence:
    return arrivals_from_dict(load_json(path), str(path))


def write_arrivals(path: str | Path, A: ArrivalSequence) -> None:
    _dump_json(path, arrivals_to_dict(A))


# ---------------------------------------------------------------- fronts


def front_to_dict(front, extra: dict | None = None) -> dict:
    doc = {
        "method": front.method,
        "objectives": ["fs", "fc"],
        "members": [
            {"priorities": list(m.assignment.priority), "fs": m.fs, "fc": m.fc}
            for m in front.members
        ],
    }
    if extra:
        doc.update(extra)
    return doc


def write_front(path: str | Path, front, extra: dict | None = None) -> None:
    _dump_json(path, front_to_dict(front, extra))


def read_front(path: str | Path):
    """Load a front file back into a :class:`~coevprio.coevolution.BestFront`."""
    from .coevolution import BestFront, FrontMember

    doc = load_json(path)
    if not isinstance(doc, dict) or "members" not in doc:
        raise FormatError(f"{path}: missing required field 'members'")
    members = []
    for i, m in enumerate(doc["members"]):
        where = f"{path}.members[{i}]"
        _check_keys(m, where, {"priorities", "fs", "fc"}, set())
        members.append(FrontMember(PriorityAssignment(tuple(m["priorities"])), float(m["fs"]), float(m["fc"])))
    return BestFront(members=members, method=doc.get("method", "unknown"), meta={
        k: v for k, v in doc.items() if k not in ("members", "method", "objectives")
    })


# ---------------------------------------------------------------- CSV outputs


SCENARIO_COLUMNS = ("task_id", "arrival", "end", "deadline_abs", "dist", "complete")


def write_scenario(stream: TextIO, scenario: ScheduleScenario) -> None:
    w = csv.writer(stream)
    w.writerow(SCENARIO_COLUMNS)
    for e in scenario:
        w.writerow([e.task, e.arrival, e.end, e.deadline_abs, e.dist, int(e.complete)])


def write_scenario_csv(path: str | Path, scenario: ScheduleScenario) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_scenario(fh, scenario)


def write_rows_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow(r)


CYCLE_COLUMNS = ("cycle", "best_fs", "best_fc", "front_size", "invocations", "wall_time")


def write_cycle_csv(path: str | Path, log: Sequence[dict]) -> None:
    write_rows_csv(path, CYCLE_COLUMNS, ([row[c] for c in CYCLE_COLUMNS] for row in log))


def write_history_csv(path: str | Path, history: Sequence[Sequence[tuple[float, float]]]) -> None:
    """One row per (cycle, front member): plot-ready best-front snapshots."""
    write_rows_csv(
        path,
        ("cycle", "fs", "fc"),
        ((c, fs, fc) for c, snap in enumerate(history) for fs, fc in snap),
    )
