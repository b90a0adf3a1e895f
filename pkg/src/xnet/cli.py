"""Command-line entry point.

Modes (flags combine where noted):

* ``--world W``                      interactive console on a live world
* ``--world W --serve ADDR``         HTTP service (optionally also
  ``--scenario S`` to feed its script live)
* ``--scenario S``                   deterministic scripted run + report
* ``--emit-fixtures DIR``            write the canonical net documents

Exit codes: 0 success, 1 scenario assertion failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import threading
from pathlib import Path

from .actions import write_fixture_documents
from .commands import CommandParseError, CommandParser
from .eventlog import EventLog
from .scenario import load_scenario, run_scenario
from .service import ControlService
from .solver import Solver, SolverConfig
from .world import load_world

USAGE_ERROR = 2


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xnet-robot",
        description="Drive a simulated robot through executable action nets.")
    parser.add_argument("--world", metavar="FILE", help="world definition (YAML)")
    parser.add_argument("--scenario", metavar="FILE", help="scripted scenario (YAML)")
    parser.add_argument("--serve", metavar="ADDR", help="serve HTTP on host:port")
    parser.add_argument("--pace", type=float, default=50.0,
                        help="net scheduling steps per second in live modes (default 50)")
    parser.add_argument("--log", metavar="FILE", help="write the event log as JSON lines")
    parser.add_argument("--emit-fixtures", metavar="DIR",
                        help="write the canonical PNML documents and exit")
    parser.add_argument("--static", metavar="DIR",
                        help="static files for the operator console (with --serve)")
    return parser


def _make_log(args) -> tuple[EventLog, object]:
    sink_file = open(args.log, "w", encoding="utf-8") if args.log else None

    def sink(line: str) -> None:
        if sink_file is not None:
            sink_file.write(line + "\n")
            sink_file.flush()

    return EventLog(sink=sink if sink_file else None), sink_file


def run_interactive(args) -> int:
    log, sink_file = _make_log(args)
    try:
        world = load_world(args.world)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load world: {exc}", file=sys.stderr)
        return USAGE_ERROR
    config = SolverConfig(threaded=True, pace=args.pace)
    solver = Solver(world, config, log)
    parser = CommandParser()

    cursor = log.subscribe()
    stop_printer = threading.Event()

    def print_records():
        while not stop_printer.is_set():
            record = cursor.get(timeout=0.2)
            if record is not None:
                print(json.dumps(record, sort_keys=True))

    printer = threading.Thread(target=print_records, daemon=True)
    printer.start()
    solver.start()
    print("ready; one command per line (end with EOF)", file=sys.stderr)
    try:
        for line in sys.stdin:
            line = line.strip()
            if not line:
                continue
            try:
                spec = parser.parse(line)
            except CommandParseError as exc:
                print(f"parse error: {exc} | hint: {exc.hint}", file=sys.stderr)
                continue
            print(f"ok: {spec.to_json_str()}", file=sys.stderr)
            solver.submit(spec)
    except KeyboardInterrupt:
        pass
    finally:
        solver.shutdown()
        stop_printer.set()
        printer.join(timeout=1)
        if sink_file is not None:
            sink_file.close()
    return 0


def run_scripted(args) -> int:
    log, sink_file = _make_log(args)
    try:
        scenario = load_scenario(args.scenario)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load scenario: {exc}", file=sys.stderr)
        return USAGE_ERROR
    report = run_scenario(scenario, log=log)
    for line in report.lines():
        print(line)
    if sink_file is not None:
        sink_file.close()
    return 0 if report.passed else 1


def run_serve(args) -> int:
    log, sink_file = _make_log(args)
    try:
        world = load_world(args.world)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load world: {exc}", file=sys.stderr)
        return USAGE_ERROR
    config = SolverConfig(threaded=True, pace=args.pace)
    solver = Solver(world, config, log)
    parser = CommandParser()
    try:
        service = ControlService(solver, parser, log, bind=args.serve,
                                 static_dir=args.static)
        service.start()
    except OSError as exc:
        print(f"error: cannot bind {args.serve}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    solver.start()
    print(f"serving on {service.url}", file=sys.stderr)

    feeder = None
    if args.scenario:
        scenario = load_scenario(args.scenario)

        def feed():
            import time
            start = time.monotonic()
            for entry in scenario.script:
                delay = entry.at - (time.monotonic() - start)
                if delay > 0:
                    time.sleep(delay)
                try:
                    solver.submit(parser.parse(entry.command))
                except CommandParseError as exc:
                    log.append("error", {"command": entry.command, "error": str(exc)})

        feeder = threading.Thread(target=feed, daemon=True)
        feeder.start()

    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        pass
    finally:
        service.stop()
        solver.shutdown()
        if sink_file is not None:
            sink_file.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    if args.emit_fixtures:
        written = write_fixture_documents(Path(args.emit_fixtures))
        for path in written:
            print(path)
        return 0
    if args.serve:
        if not args.world:
            print("error: --serve requires --world", file=sys.stderr)
            return USAGE_ERROR
        return run_serve(args)
    if args.scenario:
        return run_scripted(args)
    if args.world:
        return run_interactive(args)
    print("error: nothing to do (need --world, --scenario or --emit-fixtures)",
          file=sys.stderr)
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
