"""Command-line entry point.

Subcommands: ``catalogue`` (list charts), ``render`` (one frame as text
art), ``replay`` (run a recorded session deterministically), ``serve``
(long-running session with the console bridge). Exit codes: 2 chart parse
error, 3 replay file syntax error, 4 bridge port busy.
"""

from __future__ import annotations

import argparse
import json
import sys
import threading
import time
from dataclasses import replace
from pathlib import Path

from . import replay as replay_mod
from .buttons import ButtonEvent
from .catalogue import load_entry, scan_catalogue
from .chart import load_chart, parse_spec
from .config import catalogue_root
from .errors import FeelgridError
from .renderer import render
from .session import Session
from .temporal import parse_temporal
from .touch import TouchFrame
from .viewport import ViewportState, initial_viewport


def _parse_window(text: str) -> tuple[float, float]:
    lo_text, _, hi_text = text.partition(":")
    if not hi_text:
        raise ValueError(f"window must be lo:hi, got {text!r}")

    def side(s: str) -> float:
        s = s.strip()
        try:
            return float(s)
        except ValueError:
            return float(parse_temporal(s).ordinal)

    return side(lo_text), side(hi_text)


def cmd_catalogue(args) -> int:
    catalogue = scan_catalogue(catalogue_root(args.catalogue))
    for entry in catalogue.entries:
        cols = ", ".join(f"{n}:{t}" for n, t in entry.schema)
        print(f"{entry.name}  mark={entry.spec.mark}  rows={entry.row_count}  [{cols}]")
    for skip in catalogue.skipped:
        print(f"skipped {skip.path}: {skip.reason}", file=sys.stderr)
    return 0


def cmd_render(args) -> int:
    try:
        if args.spec:
            path = Path(args.spec)
            spec = parse_spec(path.read_bytes(), name=path.stem, base=path.parent)
            chart = load_chart(spec)
        else:
            catalogue = scan_catalogue(catalogue_root(args.catalogue))
            chart = load_entry(catalogue, args.chart or "")
        viewport = initial_viewport(chart)
        if args.x_window:
            viewport = replace(viewport, x_window=_parse_window(args.x_window))
        if args.y_window:
            viewport = replace(viewport, y_window=_parse_window(args.y_window))
        frame = render(chart, viewport, frame_id=1)
    except (FeelgridError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(frame.render_text())
    return 0


def cmd_replay(args) -> int:
    source = args.replay or args.file
    if not source:
        print("error: no session file (pass a path or --replay)", file=sys.stderr)
        return 3
    try:
        events = replay_mod.load_session_file(source)
    except (replay_mod.ReplaySyntaxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    catalogue = scan_catalogue(catalogue_root(args.catalogue))
    session = Session(catalogue)
    log = replay_mod.replay(session, events)
    text = replay_mod.format_log(log)
    sys.stdout.write(text)
    print(f"digest: {session.state_digest()}")
    if args.assert_log:
        expected = Path(args.assert_log).read_text(encoding="utf-8")
        if expected.strip() != text.strip():
            print("assertion failed: log differs from expected", file=sys.stderr)
            return 1
    return 0


def cmd_serve(args) -> int:
    from .bridge import BridgeServer, catalogue_hello

    catalogue = scan_catalogue(catalogue_root(args.catalogue))
    session = Session(catalogue)
    if args.chart:
        session.load_chart_by_name(args.chart)
    try:
        bridge = BridgeServer(session.bus, port=args.port, hello=catalogue_hello(session))
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return 4
    bridge.start()
    print(f"listening on {bridge.port}", flush=True)

    # All inbound envelopes funnel through one queue so the session stays
    # single-owner.
    inbound = session.bus.subscribe("+/+")
    stop = threading.Event()

    def worker():
        while not stop.is_set():
            envelope = inbound.get(timeout=0.2)
            if envelope is None:
                continue
            try:
                if envelope.topic == "user/query":
                    session.submit_query(envelope.payload["text"], t=envelope.timestamp)
                elif envelope.topic == "session/event":
                    kind = envelope.payload.get("kind")
                    if kind == "touch":
                        p = envelope.payload
                        session.feed_touch(
                            TouchFrame(
                                timestamp=envelope.timestamp,
                                finger=p["finger"],
                                x=float(p["x"]),
                                y=float(p["y"]),
                                height=float(p["height"]),
                                confidence=float(p.get("confidence", 1.0)),
                            )
                        )
                    elif kind == "button":
                        p = envelope.payload
                        session.feed_button(
                            ButtonEvent(button=p["button"], edge=p["edge"],
                                        timestamp=envelope.timestamp)
                        )
                    elif kind == "load_chart":
                        session.load_chart_by_name(envelope.payload.get("name", ""),
                                                   t=envelope.timestamp)
            except (FeelgridError, KeyError, ValueError, TypeError) as exc:
                print(f"worker: {exc}", file=sys.stderr)

    worker_thread = threading.Thread(target=worker, daemon=True)
    worker_thread.start()
    try:
        while True:
            time.sleep(0.5)
    except KeyboardInterrupt:
        pass
    finally:
        stop.set()
        worker_thread.join(timeout=1.0)
        from .protocol import clear_packet

        session.device.apply(clear_packet(), t=session.now)
        bridge.stop()
        sys.stdout.write(replay_mod.format_log(session.log))
        sys.stdout.flush()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="feelgrid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_cat = sub.add_parser("catalogue", help="list charts under the catalogue root")
    p_cat.add_argument("--catalogue", help="catalogue directory (or FEELGRID_CATALOGUE)")
    p_cat.set_defaults(func=cmd_catalogue)

    p_render = sub.add_parser("render", help="render one chart to text art")
    p_render.add_argument("spec", nargs="?", help="path to a .vl.json spec")
    p_render.add_argument("--catalogue", help="catalogue directory")
    p_render.add_argument("--chart", help="chart name in the catalogue")
    p_render.add_argument("--x-window", help="x window as lo:hi (numbers or dates/quarters)")
    p_render.add_argument("--y-window", help="y window as lo:hi")
    p_render.set_defaults(func=cmd_render)

    p_replay = sub.add_parser("replay", help="replay a recorded session file")
    p_replay.add_argument("file", nargs="?", help="session file path")
    p_replay.add_argument("--replay", help="session file path (flag form)")
    p_replay.add_argument("--assert", dest="assert_log", help="expected log file; exit 1 on mismatch")
    p_replay.add_argument("--catalogue", help="catalogue directory")
    p_replay.set_defaults(func=cmd_replay)

    p_serve = sub.add_parser("serve", help="run a live session with the console bridge")
    p_serve.add_argument("--catalogue", help="catalogue directory")
    p_serve.add_argument("--chart", help="chart to load at startup")
    p_serve.add_argument("--port", type=int, default=8765, help="bridge TCP port (0 = ephemeral)")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def _join_window_flags(argv: list[str]) -> list[str]:
    """Fold `--y-window -1:4` into `--y-window=-1:4` so argparse does not
    mistake a negative bound for an option."""
    out = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg in ("--x-window", "--y-window") and i + 1 < len(argv):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_join_window_flags(list(argv)))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
