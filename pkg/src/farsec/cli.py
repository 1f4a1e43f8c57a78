"""Command line front end: solve, gen, serve, bench."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import format_bench_csv, run_bench
from .generator import GenConfig, generate, write_instance
from .network import load_resources
from .sla import load_sla, requirement_resolver
from .solver import dump_mapping, load_requests, solve


def _cmd_solve(args: argparse.Namespace) -> int:
    network = load_resources(Path(args.resources).read_text())
    flows = load_requests(Path(args.requests).read_text())
    policy = load_sla(Path(args.sla).read_text())
    mapping = solve(network, flows, requirement_resolver(policy))
    text = dump_mapping(flows, mapping)
    if args.out:
        Path(args.out).write_text(text, newline="")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    cfg = GenConfig(size=args.size, seed=args.seed, flow_multiplier=args.flow_multiplier)
    paths = write_instance(generate(cfg), cfg, args.out_dir)
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app, empty_service, service_from_dir

    service = service_from_dir(args.load_dir) if args.load_dir else empty_service()
    uvicorn.run(create_app(service), host=args.host, port=args.port, log_level="warning")
    return 0


def _parse_sizes(spec: str) -> list[int]:
    if ".." in spec:
        low, high = spec.split("..", 1)
        return list(range(int(low), int(high) + 1))
    return [int(part) for part in spec.split(",")]


def _cmd_bench(args: argparse.Namespace) -> int:
    rows = run_bench(_parse_sizes(args.sizes), args.seed, args.flow_multiplier)
    text = format_bench_csv(rows)
    if args.out:
        Path(args.out).write_text(text, newline="")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="farsec")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="map flows from CSV inputs to paths")
    p_solve.add_argument("--resources", required=True)
    p_solve.add_argument("--requests", required=True)
    p_solve.add_argument("--sla", required=True)
    p_solve.add_argument("--out", default=None, help="mapping CSV (default: stdout)")
    p_solve.set_defaults(func=_cmd_solve)

    p_gen = sub.add_parser("gen", help="generate a benchmark instance")
    p_gen.add_argument("--size", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--flow-multiplier", type=int, default=64)
    p_gen.add_argument("--out-dir", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--load-dir", default=None)
    p_serve.set_defaults(func=_cmd_serve)

    p_bench = sub.add_parser("bench", help="time solves over generated instances")
    p_bench.add_argument("--sizes", default="2..50", help="range A..B or comma list")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--flow-multiplier", type=int, default=64)
    p_bench.add_argument("--out", default=None, help="results CSV (default: stdout)")
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
