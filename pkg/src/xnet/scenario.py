"""Scripted scenarios: deterministic replays of operator sessions.

A scenario file names a world, a timed command script, and assertions
over the resulting event log. The driver uses a virtual clock (script
times directly drive world ticks), so repeated runs produce identical
record sequences.

Assertion kinds, each a pattern over log records (a pattern is a dict
subset-matched against ``{"kind", "tick", **detail}``):

* ``occurs``: at least one record matches (``count`` pins an exact count)
* ``absent``: no record matches
* ``subsequence``: the patterns match strictly ordered records
* ``ordered-once``: each pattern matches exactly one record, in order
* ``final-position``: robot ends within ``tolerance`` of ``(x, y)``
* ``final-aspect``: the closing aspect equals ``value``
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from .commands import CommandParseError, CommandParser
from .eventlog import EventLog
from .solver import Solver, SolverConfig
from .world import load_world


@dataclass(frozen=True)
class ScriptEntry:
    at: float
    command: str


@dataclass(frozen=True)
class Scenario:
    name: str
    world_path: Path
    script: tuple[ScriptEntry, ...]
    assertions: tuple[dict, ...]
    horizon: float
    dt: float = 0.1

    def __post_init__(self):
        times = [entry.at for entry in self.script]
        if times != sorted(times):
            raise ValueError("script times must be non-decreasing")


@dataclass
class AssertionResult:
    assertion: dict
    passed: bool
    message: str
    matches: list[dict]


@dataclass
class ScenarioReport:
    scenario: Scenario
    results: list[AssertionResult]
    records: list[dict]
    final_snapshot: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            out.append(f"{status}: {describe_assertion(r.assertion)} -- {r.message}")
            for match in r.matches[:3]:
                out.append(f"    #{match['index']} [{match['tick']}] "
                           f"{match['kind']} {match['detail']}")
        verdict = "PASS" if self.passed else "FAIL"
        out.append(f"{verdict}: scenario {self.scenario.name!r} "
                   f"({sum(r.passed for r in self.results)}/{len(self.results)} assertions)")
        return out


def describe_assertion(assertion: dict) -> str:
    kind = assertion.get("kind", "?")
    if kind in ("occurs", "absent"):
        return f"{kind} {assertion.get('record')}"
    if kind in ("subsequence", "ordered-once"):
        return f"{kind} of {len(assertion.get('records', []))} records"
    if kind == "final-position":
        return f"final-position ({assertion.get('x')}, {assertion.get('y')})"
    if kind == "final-aspect":
        return f"final-aspect {assertion.get('value')}"
    return kind


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    data = yaml.safe_load(path.read_text())
    world_path = (path.parent / data["world"]).resolve()
    script = tuple(ScriptEntry(float(e["at"]), str(e["command"]))
                   for e in data.get("script", []))
    return Scenario(
        name=str(data.get("name", path.stem)),
        world_path=world_path,
        script=script,
        assertions=tuple(data.get("assertions", [])),
        horizon=float(data["horizon"]),
        dt=float(data.get("dt", 0.1)),
    )


def _flatten(record: dict) -> dict:
    flat = {"kind": record["kind"], "tick": record["tick"], "index": record["index"]}
    flat.update(record.get("detail") or {})
    return flat


def _matches(pattern: dict, record: dict) -> bool:
    flat = _flatten(record)
    for key, wanted in pattern.items():
        if key not in flat:
            return False
        value = flat[key]
        if isinstance(wanted, float) or isinstance(value, float):
            try:
                if abs(float(value) - float(wanted)) > 1e-9:
                    return False
            except (TypeError, ValueError):
                return False
        elif value != wanted:
            return False
    return True


def _check(assertion: dict, records: list[dict], snapshot: dict) -> AssertionResult:
    kind = assertion.get("kind")
    if kind == "occurs":
        matches = [r for r in records if _matches(assertion["record"], r)]
        expected = assertion.get("count")
        if expected is not None:
            ok = len(matches) == expected
            msg = f"matched {len(matches)} records (wanted exactly {expected})"
        else:
            ok = bool(matches)
            msg = f"matched {len(matches)} records"
        return AssertionResult(assertion, ok, msg, matches[:5])
    if kind == "absent":
        matches = [r for r in records if _matches(assertion["record"], r)]
        return AssertionResult(assertion, not matches,
                               f"matched {len(matches)} records (wanted none)", matches[:5])
    if kind == "subsequence":
        position = -1
        matched = []
        for pattern in assertion["records"]:
            found = next((r for r in records
                          if r["index"] > position and _matches(pattern, r)), None)
            if found is None:
                return AssertionResult(assertion, False,
                                       f"no match for {pattern} after index {position}",
                                       matched)
            matched.append(found)
            position = found["index"]
        return AssertionResult(assertion, True,
                               f"indices {[r['index'] for r in matched]}", matched)
    if kind == "ordered-once":
        matched = []
        for pattern in assertion["records"]:
            found = [r for r in records if _matches(pattern, r)]
            if len(found) != 1:
                return AssertionResult(assertion, False,
                                       f"{pattern} matched {len(found)} records "
                                       f"(wanted exactly 1)", found[:5])
            matched.append(found[0])
        indices = [r["index"] for r in matched]
        ok = indices == sorted(indices)
        return AssertionResult(assertion, ok, f"indices {indices}", matched)
    if kind == "final-position":
        x, y = snapshot["world"]["robot"]["position"]
        dx, dy = x - float(assertion["x"]), y - float(assertion["y"])
        distance = (dx * dx + dy * dy) ** 0.5
        tolerance = float(assertion.get("tolerance", 0.1))
        return AssertionResult(assertion, distance <= tolerance,
                               f"robot at ({x:.3f}, {y:.3f}), distance {distance:.3f} "
                               f"(tolerance {tolerance})", [])
    if kind == "final-aspect":
        actual = snapshot["aspect"]
        return AssertionResult(assertion, actual == assertion["value"],
                               f"final aspect {actual!r}", [])
    return AssertionResult(assertion, False, f"unknown assertion kind {kind!r}", [])


def run_scenario(scenario: Scenario | str | Path, log: EventLog | None = None,
                 config: SolverConfig | None = None) -> ScenarioReport:
    """Execute the script on a virtual clock and evaluate the assertions."""
    if not isinstance(scenario, Scenario):
        scenario = load_scenario(scenario)
    world = load_world(scenario.world_path)
    config = config or SolverConfig()
    config.dt = scenario.dt
    config.threaded = False
    log = log or EventLog()
    solver = Solver(world, config, log)
    parser = CommandParser()
    solver.start()

    pending = list(scenario.script)
    steps = round(scenario.horizon / scenario.dt)
    for step in range(steps):
        now = step * scenario.dt
        while pending and pending[0].at <= now + 1e-9:
            entry = pending.pop(0)
            try:
                spec = parser.parse(entry.command)
            except CommandParseError as exc:
                log.append("error", {"command": entry.command, "error": str(exc),
                                     "hint": exc.hint})
                continue
            solver.submit(spec)
        solver.advance(scenario.dt)
    snapshot = solver.snapshot()
    solver.shutdown()

    records = log.records()
    results = [_check(a, records, snapshot) for a in scenario.assertions]
    return ScenarioReport(scenario, results, records, snapshot)
