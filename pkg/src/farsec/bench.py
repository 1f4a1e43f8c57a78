"""Runtime measurement over generated instances.

Each row times one full solve of a generated instance: classifying every
flow's header against the emitted SLA policy and mapping all flows onto the
prebuilt topology. Instance generation and file I/O are excluded from the
measured time. Sizes and flow counts are deterministic per seed; the
measured seconds of course are not.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter
from typing import Iterable, Sequence

from .generator import GenConfig, GeneratedInstance, generate
from .sla import requirement_resolver
from .solver import solve

BENCH_HEADER = "Size,Flows,Seconds"


@dataclass(frozen=True)
class BenchRow:
    size: int
    flows: int
    seconds: float


def _time_solve(instance: GeneratedInstance) -> float:
    resolve = requirement_resolver(instance.sla)
    start = perf_counter()
    solve(instance.network, instance.flows, resolve)
    return perf_counter() - start


def run_bench(sizes: Iterable[int], seed: int, flow_multiplier: int = 64) -> list[BenchRow]:
    """One generated instance per size, solved and timed."""
    rows = []
    for size in sizes:
        instance = generate(GenConfig(size=size, seed=seed, flow_multiplier=flow_multiplier))
        rows.append(BenchRow(size, len(instance.flows), _time_solve(instance)))
    return rows


def run_flow_scaling(
    size: int, seed: int, multipliers: Sequence[int], repeats: int = 3
) -> list[BenchRow]:
    """Vary the flow count at a fixed node count; keeps the best of ``repeats``.

    Used to check that solve time grows no worse than linearly in the number
    of flows once they dominate.
    """
    rows = []
    for multiplier in multipliers:
        instance = generate(GenConfig(size=size, seed=seed, flow_multiplier=multiplier))
        best = min(_time_solve(instance) for _ in range(repeats))
        rows.append(BenchRow(size, len(instance.flows), best))
    return rows


def format_bench_csv(rows: Iterable[BenchRow]) -> str:
    lines = [BENCH_HEADER]
    lines.extend(f"{r.size},{r.flows},{r.seconds:.6f}" for r in rows)
    return "\n".join(lines) + "\n"
