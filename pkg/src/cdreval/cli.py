"""Command-line client for the evaluation engine.

Verbs: validate, metrics, pareto, plot, simulate, serve. Each verb builds the
same request the HTTP service accepts and executes it in-process; pass
--server URL to send it to a running service instead. Exit codes: 0 success,
2 invalid input, 1 I/O fault.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Optional

from . import __version__, ops
from .errors import CdrError

EXIT_OK = 0
EXIT_FAULT = 1
EXIT_BAD_INPUT = 2


def _print_json(obj: dict) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _via_server(server: str, endpoint: str, payload: dict) -> dict:
    import httpx

    try:
        response = httpx.post(server.rstrip("/") + endpoint, json=payload, timeout=600.0)
    except httpx.TransportError as exc:
        raise OSError(f"service unreachable at {server}: {exc}") from exc
    if response.status_code == 422:
        body = response.json()
        raise CdrError(f"{body.get('error')}: {body.get('detail')}")
    if response.status_code >= 400:
        raise OSError(f"service error {response.status_code}: {response.text[:200]}")
    return response.json()


def _dispatch(server: Optional[str], endpoint: str, payload: dict, local: Callable[[], dict]) -> dict:
    if server:
        return _via_server(server, endpoint, payload)
    return local()


def cmd_validate(args: argparse.Namespace) -> int:
    payload = {"embeddings": args.embeddings, "verdicts": args.verdicts}
    result = _dispatch(
        args.server, "/validate", payload, lambda: ops.op_validate(args.embeddings, args.verdicts)
    )
    _print_json(result)
    return EXIT_OK if result["ok"] else EXIT_BAD_INPUT


def cmd_metrics(args: argparse.Namespace) -> int:
    axes = args.axes.split(",") if args.axes else None
    payload = {
        "embeddings": args.embeddings,
        "sweep": args.sweep,
        "out": args.out,
        "verdicts": args.verdicts,
        "axes": axes,
        "k": args.k,
        "group_by": args.group_by,
    }
    result = _dispatch(
        args.server,
        "/metrics",
        payload,
        lambda: ops.op_metrics(
            embeddings=args.embeddings,
            sweep=args.sweep,
            out=args.out,
            verdicts=args.verdicts,
            axes=axes,
            k=args.k,
            group_by=args.group_by,
        ),
    )
    print(f"wrote {result['files']['metrics.csv']} ({len(result['points'])} points)")
    return EXIT_OK


def cmd_pareto(args: argparse.Namespace) -> int:
    pairs = ops.parse_pairs(args.pairs.split(",") if args.pairs else None)
    payload = {
        "metrics": args.metrics,
        "out": args.out,
        "pairs": [list(p) for p in pairs] if pairs else None,
    }
    result = _dispatch(
        args.server, "/pareto", payload, lambda: ops.op_pareto(args.metrics, args.out, pairs)
    )
    print(f"wrote {result['files']['pareto.json']} ({len(result['pairs'])} axis sets)")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    payload = {
        "metrics": args.metrics,
        "pareto": args.pareto,
        "out": args.out,
        "width": args.width,
        "height": args.height,
    }
    result = _dispatch(
        args.server,
        "/plot",
        payload,
        lambda: ops.op_plot(args.metrics, args.pareto, args.out, args.width, args.height),
    )
    for path in result["files"]:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    payload = {
        "world": args.world,
        "sweep": args.sweep,
        "out": args.out,
        "seed": args.seed,
        "n_per_prompt": args.n_per_prompt,
        "n_real_per_prompt": args.n_real_per_prompt,
    }
    result = _dispatch(
        args.server,
        "/simulate",
        payload,
        lambda: ops.op_simulate(
            world=args.world,
            sweep=args.sweep,
            out=args.out,
            seed=args.seed,
            n_per_prompt=args.n_per_prompt,
            n_real_per_prompt=args.n_real_per_prompt,
        ),
    )
    print(
        f"wrote {result['files']['embeddings.cdre']}: "
        f"{result['rows_real']} real + {result['rows_generated']} generated rows, "
        f"{result['verdicts']} verdicts (seed {result['seed']})"
    )
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdreval",
        description="Consistency-diversity-realism evaluation: metrics, Pareto fronts, plots.",
    )
    parser.add_argument("--version", action="version", version=f"cdreval {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server(p: argparse.ArgumentParser) -> None:
        p.add_argument("--server", help="route the request to a running service, e.g. http://localhost:8000")

    p = sub.add_parser("validate", help="check a table pair (and optional verdicts) for violations")
    p.add_argument("--embeddings", required=True, help="path prefix of the .cdre/.meta.jsonl pair")
    p.add_argument("--verdicts", help="verdicts.jsonl to cross-check against the table")
    add_server(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("metrics", help="compute metric points for a sweep and write CSV/JSON")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--verdicts")
    p.add_argument("--sweep", required=True)
    p.add_argument("--axes", help="comma-separated axis names (default: all file-computable axes)")
    p.add_argument("--k", type=int, default=3, help="manifold neighborhood size (default 3)")
    p.add_argument("--out", required=True)
    p.add_argument("--group-by", choices=["group", "none"], default="group", dest="group_by")
    add_server(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("pareto", help="extract non-dominated fronts from metrics.json")
    p.add_argument("--metrics", required=True, help="metrics.json from the metrics verb")
    p.add_argument("--out", required=True)
    p.add_argument("--pairs", help="axis sets like 'a:b,a:b:c' (default: canonical three pairs + triple)")
    add_server(p)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("plot", help="render one SVG per bi-objective per group")
    p.add_argument("--metrics", required=True)
    p.add_argument("--pareto", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=480)
    add_server(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("simulate", help="emit a synthetic CDRE dataset from a world description")
    p.add_argument("--world", required=True, help="world JSON file")
    p.add_argument("--sweep", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, help="stream seed (default: the world's)")
    p.add_argument("--n-per-prompt", type=int, default=10, dest="n_per_prompt")
    p.add_argument("--n-real-per-prompt", type=int, dest="n_real_per_prompt")
    add_server(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CdrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"i/o fault: {exc}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
