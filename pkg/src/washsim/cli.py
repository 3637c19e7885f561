"""Command-line entry points.

    washsim run --config c.json --stimulus s.txt --cycles N --frames-dir out/
    washsim conformance --frames 3
    washsim serve --config c.json --port 8765

Exit codes: 0 success, 1 configuration/stimulus error, 2 conformance
failure.
"""

import argparse
import sys

from .capture import DesyncError, check_timing
from .config import ConfigError, RunConfig, load_config
from .runner import conformance_cycles, run
from .stimulus import StimulusError, parse_stimulus


def _load_cfg(path):
    return load_config(path) if path else RunConfig()


def cmd_run(args) -> int:
    try:
        cfg = _load_cfg(args.config)
        events = []
        if args.stimulus:
            with open(args.stimulus, "r", encoding="utf-8") as fh:
                events = parse_stimulus(fh.read(), cfg.rotary_gap_cycles)
        cycles = args.cycles if args.cycles is not None else cfg.run_cycles
        if cycles is None:
            print("error: no cycle count (use --cycles or run_cycles in config)",
                  file=sys.stderr)
            return 1
        frames_dir = args.frames_dir if args.frames_dir else cfg.frames_dir
    except (ConfigError, StimulusError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    try:
        result = run(cfg, events, cycles, frames_dir=frames_dir,
                     retain_frames=False)
    except DesyncError as e:
        print(f"error: capture desynchronized: {e}", file=sys.stderr)
        return 1
    print(f"ran {cycles} cycles, captured {result.frame_count} frame(s)")
    for cycle, state in result.transitions:
        print(f"@{cycle} {state.name}")
    final = result.status_trace[-1]
    print(f"final state {final[1]} load {final[2]}")
    return 0


def cmd_conformance(args) -> int:
    frames = args.frames
    result = run(RunConfig(), (), conformance_cycles(frames),
                 retain_frames=False, collect_sync=True)
    hs, vs, act = result.machine.sync_trace()
    report = check_timing(hs, vs, act, max_frames=frames)
    for name, value in report.measurements.items():
        print(f"{name}: {value}")
    if report.passed:
        print(f"PASS: {frames} frame(s) conform")
        return 0
    for kind, measured, expected in report.violations:
        print(f"VIOLATION: {kind} measured {measured}, expected {expected}")
    print("FAIL")
    return 2


def cmd_serve(args) -> int:
    try:
        cfg = _load_cfg(args.config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    port = args.port if args.port is not None else cfg.serve_port
    from .server import serve
    serve(cfg, host=args.host, port=port)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="washsim",
        description="Cycle-accurate washing-machine controller simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scripted stimulus run")
    p_run.add_argument("--config", help="JSON config file")
    p_run.add_argument("--stimulus", help="stimulus script file")
    p_run.add_argument("--cycles", type=int, help="master cycles to simulate")
    p_run.add_argument("--frames-dir", help="write captured frames here as PPM")
    p_run.set_defaults(func=cmd_run)

    p_conf = sub.add_parser("conformance",
                            help="measure VGA timing against the expected geometry")
    p_conf.add_argument("--frames", type=int, default=3,
                        help="complete frames to measure (default 3)")
    p_conf.set_defaults(func=cmd_conformance)

    p_serve = sub.add_parser("serve", help="serve the live front-panel socket")
    p_serve.add_argument("--config", help="JSON config file")
    p_serve.add_argument("--port", type=int, help="listen port")
    p_serve.add_argument("--host", default="localhost", help="bind host")
    p_serve.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
