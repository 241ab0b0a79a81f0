"""Parameter sweeps over formulations and oracles, plus the three evaluation presets."""

from __future__ import annotations

import csv
import io
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .formulations import build_algo1, build_algo4, solve_lp, solve_rate
from .lpsolve import Tolerances
from .netmodel import Network, NetworkError
from .oracles import LineParams, ParallelPairParams, line_bound, parallel_pair_bound

PARAMS = ("delta", "delta_e")
EVALUATORS = ("1", "2", "3", "4", "5", "snc", "arq_only", "line_oracle", "parallel_oracle")


@dataclass(frozen=True)
class SweepSpec:
    edges: tuple[str, ...]
    param: str
    start: float
    stop: float
    step: float
    formulations: tuple[str, ...] = ("1",)
    wiretap_count: int = 1

    def __post_init__(self) -> None:
        if not self.edges:
            raise ValueError("sweep needs at least one edge")
        if self.param not in PARAMS:
            raise ValueError(f"param must be one of {PARAMS}")
        if not (0.0 <= self.start <= 1.0 and 0.0 <= self.stop <= 1.0):
            raise ValueError("sweep range must lie within [0, 1]")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.stop < self.start:
            raise ValueError("stop must not be below start")
        bad = [f for f in self.formulations if f not in EVALUATORS]
        if bad:
            raise ValueError(f"unknown formulation(s) {bad}; choose from {', '.join(EVALUATORS)}")

    def grid(self) -> list[float]:
        n = int(np.floor((self.stop - self.start) / self.step + 1e-9))
        return [round(self.start + i * self.step, 12) for i in range(n + 1)]


def line_hops(net: Network) -> list[tuple[float, float]]:
    """Hop parameters of a simple source-to-destination chain, in order."""
    hops = []
    u = net.source
    seen = 0
    while u != net.destination:
        outs = net.out_edges(u)
        if len(outs) != 1:
            raise NetworkError(f"not a line network: vertex {u} has {len(outs)} outgoing edges")
        e = net.edge(outs[0])
        hops.append((e.delta, e.delta_e))
        u = e.head
        seen += 1
    if seen != len(net.edges):
        raise NetworkError("not a line network: edges off the source-destination chain")
    return hops


def parallel_params(net: Network) -> ParallelPairParams:
    if len(net.edges) != 2 or any(e.tail != net.source or e.head != net.destination for e in net.edges):
        raise NetworkError("parallel oracle needs exactly two source-to-destination edges")
    a, b = net.edges
    return ParallelPairParams(a.delta, a.delta_e, b.delta, b.delta_e)


def evaluate(net: Network, name: str, tolerances: Tolerances | None = None, wiretap_count: int = 1) -> float:
    if name == "arq_only":
        return solve_lp(build_algo1(net, arq_only=True), tolerances).objective
    if name == "line_oracle":
        return line_bound(LineParams.of(line_hops(net)), tolerances)
    if name == "parallel_oracle":
        return parallel_pair_bound(parallel_params(net), tolerances)
    if name == "4":
        return solve_lp(build_algo4(net, wiretap_count), tolerances).objective
    return solve_rate(net, name, tolerances)  # type: ignore[arg-type]


def run_sweep(
    net: Network, spec: SweepSpec, tolerances: Tolerances | None = None, axis: str | None = None
) -> tuple[list[str], list[list[float]]]:
    for g in spec.edges:
        net.edge(g)
    header = [axis or spec.param, *(_column(f) for f in spec.formulations)]
    rows = []
    for x in spec.grid():
        inst = net
        for g in spec.edges:
            inst = inst.with_edge(g, **{spec.param: x})
        rows.append([x, *(evaluate(inst, f, tolerances, spec.wiretap_count) for f in spec.formulations)])
    return header, rows


def _column(name: str) -> str:
    return {"1": "algo1", "2": "algo2", "3": "algo3", "4": "algo4", "5": "algo5", "arq_only": "arq_only"}.get(
        name, name
    )


def two_hop_line(d1: float, d1e: float, d2: float, d2e: float) -> Network:
    return Network.build([("e1", "s", "a", d1, d1e), ("e2", "a", "d", d2, d2e)], "s", "d")


def parallel_channels(n: int, delta: float = 0.6, odd_e: float = 0.8, even_e: float = 0.9) -> Network:
    """``n`` parallel source-destination channels; channel ``i`` (1-based) gets ``odd_e`` or ``even_e``."""
    return Network.build(
        [(f"c{i}", "s", "d", delta, odd_e if i % 2 else even_e) for i in range(1, n + 1)], "s", "d"
    )


def preset_fig3(tolerances: Tolerances | None = None):
    """Two-hop line, delta = (0.2, 0.8), common delta_e swept; ARQ only against ARQ with MDS."""
    spec = SweepSpec(("e1", "e2"), "delta_e", 0.0, 1.0, 0.1, ("arq_only", "1"))
    header, rows = run_sweep(two_hop_line(0.2, 0.0, 0.8, 0.0), spec, tolerances)
    return ["delta_e", "arq_only", "arq_mds"], rows


def preset_fig4(tolerances: Tolerances | None = None):
    """Parallel channels, 2 to 10 of them; Algo 1 against channel coding plus secure network coding."""
    rows = []
    for n in range(2, 11):
        net = parallel_channels(n)
        rows.append([n, evaluate(net, "1", tolerances), evaluate(net, "snc", tolerances)])
    return ["channels", "algo1", "snc"], rows


def preset_fig5(tolerances: Tolerances | None = None):
    """Two-hop line with delta_e = (0.5, 1), delta_2 = 0.6 and delta_1 swept."""
    spec = SweepSpec(("e1",), "delta", 0.0, 1.0, 0.1, ("1", "2", "line_oracle"))
    header, rows = run_sweep(two_hop_line(0.0, 0.5, 0.6, 1.0), spec, tolerances)
    return ["delta1", *header[1:]], rows


PRESETS: dict[str, Callable] = {"fig3": preset_fig3, "fig4": preset_fig4, "fig5": preset_fig5}


def to_csv(header: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, int | str) else f"{v:.9g}" for v in row])
    return buf.getvalue()
