"""Secure-rate LPs over erasure networks and decoding of their solutions.

Per edge ``g`` the schemes use four rates, all in packets per slot:

* ``m`` encrypted message packets forwarded with ARQ,
* ``r`` random packets forwarded with ARQ,
* ``k`` random packets MDS-expanded by ``1/(1 - delta*delta_e)`` and sent once,
* ``s`` random packets delivered to the head, ``s = r + k(1-delta)/(1-delta*delta_e)``.

Builders:

=================  ==========================================================
``build_algo1``    end-to-end key, conservative estimate of Eve's knowledge
``build_algo2``    end-to-end plus link-by-link keys, path-flow accounting
``build_algo3``    end-to-end key with exact accounting through virtual flows
``build_algo4``    Eve on any ``V`` edges
``build_algo5``    several sources sharing one link-by-link key pool
``build_snc_baseline``  channel coding followed by secure network coding
=================  ==========================================================
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass
from typing import Literal

from .lpsolve import LinearProgram, LpError, LpSolution, Tolerances, check_feasibility, solve
from .netmodel import (
    DEFAULT_MAX_PATHS,
    EdgeChannel,
    Network,
    NetworkError,
    Path,
    edge_partial_order,
    enumerate_source_rooted_paths,
)

ALGOS = ("1", "2", "3", "4", "5", "snc")
DEFAULT_MAX_SUBSETS = 100_000
TIE_BREAK_SLACK = 1e-9

Algo = Literal["1", "2", "3", "4", "5", "snc"]


class FormulationError(LpError):
    pass


class SubsetLimitError(FormulationError):
    def __init__(self, count: int, limit: int) -> None:
        super().__init__(f"{count} wiretap subsets exceed the limit of {limit}")
        self.count = count
        self.limit = limit


class UnsolvedError(FormulationError):
    def __init__(self, status: str) -> None:
        super().__init__(f"LP is {status}")
        self.status = status


class SchemeInvariantError(FormulationError):
    def __init__(self, edge: str, what: str, residual: float) -> None:
        super().__init__(f"edge {edge}: {what} violated by {residual:.3g}")
        self.edge = edge
        self.residual = residual


@dataclass(frozen=True)
class FormulationConfig:
    algo: Algo = "1"
    wiretap_count: int = 1
    max_paths: int = DEFAULT_MAX_PATHS
    max_subsets: int = DEFAULT_MAX_SUBSETS
    arq_only: bool = False

    def __post_init__(self) -> None:
        if self.algo not in ALGOS:
            raise ValueError(f"unknown formulation {self.algo!r}; choose from {', '.join(ALGOS)}")
        if self.wiretap_count < 1:
            raise ValueError("wiretap_count must be at least 1")


@dataclass(frozen=True)
class EdgeCoeffs:
    """Per-edge constants shared by the builders."""

    dead: bool
    ts_r: float
    ts_k: float
    ts_m: float
    deliver_k: float  # fraction of MDS transmissions-worth delivered, (1-d)/(1-d*dE)
    eve_msg: float  # chance Eve hears an ARQ packet at least once, (1-dE)/(1-d*dE)
    eve_r: float
    eve_k: float
    link_key: float  # dE(1-d)/(1-d*dE), secret part of the edge's randomness
    eve_once: float  # 1 - dE


def edge_coeffs(e: EdgeChannel) -> EdgeCoeffs:
    d, de = e.delta, e.delta_e
    both = 1.0 - d * de
    if both <= 0.0:
        return EdgeCoeffs(True, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    p = (1.0 - de) / both
    K = (1.0 - d) / both
    if d >= 1.0:
        return EdgeCoeffs(True, 0.0, 0.0, 0.0, 0.0, p, p, 0.0, 0.0, 1.0 - de)
    return EdgeCoeffs(
        dead=False,
        ts_r=1.0 / (1.0 - d),
        ts_k=1.0 / both,
        ts_m=1.0 / (1.0 - d),
        deliver_k=K,
        eve_msg=p,
        eve_r=p,
        eve_k=(1.0 - de) * K,
        link_key=de * K,
        eve_once=1.0 - de,
    )


def _snc_coeffs(e: EdgeChannel) -> EdgeCoeffs:
    # a channel-coded edge is a lossless pipe of capacity 1-delta that Eve hears in full
    if e.delta >= 1.0:
        return EdgeCoeffs(True, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0)
    inv = 1.0 / (1.0 - e.delta)
    return EdgeCoeffs(False, inv, inv, inv, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0)


def _var(kind: str, *idx: str) -> tuple:
    return (kind, *idx)


def _core(
    lp: LinearProgram,
    net: Network,
    coeffs: Mapping[str, EdgeCoeffs],
    *,
    randomness: Literal["==", ">="],
    arq_only: bool,
    budget: Mapping[str, float] | None,
) -> None:
    """Variables, objective, conservation, delivery identity and time sharing."""
    for e in net.edges:
        lp.add_variables(_var(x, e.id) for x in "mkrs")
    lp.set_objective({_var("m", g): 1.0 for g in net.in_edges(net.destination)})

    for u in net.internal_vertices():
        ins, outs = net.in_edges(u), net.out_edges(u)
        row = {_var("m", g): 1.0 for g in ins}
        for g in outs:
            row[_var("m", g)] = row.get(_var("m", g), 0.0) - 1.0
        lp.add_constraint(row, "==", 0.0, f"message conservation at {u}")
        rnd: dict[Hashable, float] = {_var("s", g): 1.0 for g in ins}
        for g in outs:
            rnd[_var("k", g)] = -1.0
            rnd[_var("r", g)] = -1.0
        lp.add_constraint(rnd, randomness, 0.0, f"randomness conservation at {u}")

    for e in net.edges:
        c = coeffs[e.id]
        g = e.id
        if c.dead:
            for x in "mkrs":
                lp.fix_zero(_var(x, g), f"dead edge {g}")
            continue
        lp.add_constraint(
            {_var("s", g): 1.0, _var("r", g): -1.0, _var("k", g): -c.deliver_k},
            "==",
            0.0,
            f"delivered randomness on {g}",
        )
        rhs = 1.0 if budget is None else float(budget.get(g, 1.0))
        lp.add_constraint(
            {_var("r", g): c.ts_r, _var("k", g): c.ts_k, _var("m", g): c.ts_m},
            "<=",
            rhs,
            f"time sharing on {g}",
        )
        if arq_only:
            lp.fix_zero(_var("k", g), f"arq-only {g}")


def _delivered(net: Network, kind: str = "s") -> dict[Hashable, float]:
    return {_var(kind, j): 1.0 for j in net.in_edges(net.destination)}


def _end_to_end_security(lp: LinearProgram, net: Network, coeffs: Mapping[str, EdgeCoeffs]) -> None:
    for e in net.edges:
        c, g = coeffs[e.id], e.id
        row = {k: -v for k, v in _delivered(net).items()}
        for key, val in ((_var("m", g), c.eve_msg), (_var("r", g), c.eve_r), (_var("k", g), c.eve_k)):
            row[key] = row.get(key, 0.0) + val
        lp.add_constraint(row, "<=", 0.0, f"security on {g}")


def _meta(lp: LinearProgram, net: Network, algo: str, **extra) -> LinearProgram:
    lp.meta.update(network=net, algo=algo, **extra)
    return lp


def build_algo1(
    net: Network, *, arq_only: bool = False, budget: Mapping[str, float] | None = None
) -> LinearProgram:
    net.source  # single-source check
    coeffs = {e.id: edge_coeffs(e) for e in net.edges}
    lp = LinearProgram("algo1")
    _core(lp, net, coeffs, randomness="==", arq_only=arq_only, budget=budget)
    _end_to_end_security(lp, net, coeffs)
    return _meta(lp, net, "1")


def build_snc_baseline(net: Network, *, budget: Mapping[str, float] | None = None) -> LinearProgram:
    net.source
    coeffs = {e.id: _snc_coeffs(e) for e in net.edges}
    lp = LinearProgram("snc_baseline")
    _core(lp, net, coeffs, randomness="==", arq_only=False, budget=budget)
    _end_to_end_security(lp, net, coeffs)
    return _meta(lp, net, "snc")


def _path_flows(
    lp: LinearProgram,
    net: Network,
    coeffs: Mapping[str, EdgeCoeffs],
    paths: Sequence[Path],
    source: str,
    tag: tuple[str, ...] = (),
) -> list[tuple[Hashable, Path]]:
    """Path-flow variables, the coupling ``s_g = sum s_p`` and the Alice-Bob path list."""
    keys = []
    for i, p in enumerate(paths):
        if p.origin != source:
            raise NetworkError(f"path {p.label()} does not start at {source}")
        key = _var("sp", *tag, str(i))
        lp.add_variable(key)
        keys.append((key, p))
    for e in net.edges:
        row: dict[Hashable, float] = {_var("s", *tag, e.id): 1.0}
        for key, p in keys:
            if e.id in p:
                row[key] = -1.0
        lp.add_constraint(row, "==", 0.0, f"path coupling on {e.id}")
    return keys


def _link_security(
    lp: LinearProgram,
    net: Network,
    coeffs: Mapping[str, EdgeCoeffs],
    keys: Sequence[tuple[Hashable, Path]],
    tag: tuple[str, ...] = (),
    pooled: bool = False,
) -> None:
    for e in net.edges:
        c, g = coeffs[e.id], e.id
        row: dict[Hashable, float] = {_var("m", *tag, g): c.eve_msg}
        if pooled:
            row[_var("w", *tag, g)] = -1.0
        else:
            row[_var("k", *tag, g)] = -c.link_key
            row[_var("r", *tag, g)] = -c.link_key
        for key, p in keys:
            if p.terminus == net.destination and g not in p:
                row[key] = row.get(key, 0.0) - 1.0
        lp.add_constraint(row, "<=", 0.0, f"security on {g}" + (f" for {tag[0]}" if tag else ""))


def build_algo2(
    net: Network,
    paths: Sequence[Path] | None = None,
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
    arq_only: bool = False,
    budget: Mapping[str, float] | None = None,
) -> LinearProgram:
    src = net.source
    if paths is None:
        paths = enumerate_source_rooted_paths(net, src, max_paths)
    coeffs = {e.id: edge_coeffs(e) for e in net.edges}
    lp = LinearProgram("algo2")
    _core(lp, net, coeffs, randomness=">=", arq_only=arq_only, budget=budget)
    keys = _path_flows(lp, net, coeffs, paths, src)
    _link_security(lp, net, coeffs, keys)
    return _meta(lp, net, "2", paths=[p for _, p in keys], path_keys=keys)


def build_algo3(net: Network, *, arq_only: bool = False, budget: Mapping[str, float] | None = None) -> LinearProgram:
    """End-to-end key with Eve's knowledge tracked through virtual flows.

    ``("v", g, j)`` is the part of edge ``j``'s randomness that previously
    crossed edge ``g``; the diagonal ``s_gg`` is the ordinary ``("s", g)``.
    Eve's knowledge on ``g`` is ``c1*[A-K]^+ + c2*min(A, K)`` with ``A`` the
    tagged flow reaching the destination and ``K`` the MDS-delivered part;
    since ``c1 >= c2`` it equals ``c2*A + (c1-c2)*[A-K]^+`` and the positive
    part is carried by ``("t", g)`` with ``t >= A - K``, ``t >= 0``.
    """
    net.source
    coeffs = {e.id: edge_coeffs(e) for e in net.edges}
    lp = LinearProgram("algo3")
    _core(lp, net, coeffs, randomness="==", arq_only=arq_only, budget=budget)
    order = sorted(edge_partial_order(net))
    lp.add_variables(_var("v", g, j) for g, j in order)
    lp.add_variables(_var("t", e.id) for e in net.edges)
    pairs = set(order)

    def tagged(g: str, j: str) -> Hashable | None:
        if g == j:
            return _var("s", g)
        return _var("v", g, j) if (g, j) in pairs else None

    for g, j in order:
        lp.add_constraint({_var("v", g, j): 1.0, _var("s", j): -1.0}, "<=", 0.0, f"virtual cap {g}->{j}")

    for u in net.internal_vertices():
        ins, outs = net.in_edges(u), net.out_edges(u)
        for e in net.edges:
            g = e.id
            row: dict[Hashable, float] = {}
            for j in outs:
                key = tagged(g, j)
                if key is not None:
                    row[key] = row.get(key, 0.0) + 1.0
            for j in ins:
                key = tagged(g, j)
                if key is not None:
                    row[key] = row.get(key, 0.0) - 1.0
            if not row:
                continue
            for j in ins:
                row[_var("s", j)] = row.get(_var("s", j), 0.0) + 1.0
            for j in outs:
                row[_var("s", j)] = row.get(_var("s", j), 0.0) - 1.0
            lp.add_constraint(row, ">=", 0.0, f"tagged flow of {g} at {u}")

    into_d = net.in_edges(net.destination)
    for e in net.edges:
        c, g = coeffs[e.id], e.id
        reach = {key: 1.0 for j in into_d if (key := tagged(g, j)) is not None}
        # t >= A - K
        row = {_var("t", g): 1.0, _var("k", g): c.deliver_k}
        for key in reach:
            row[key] = row.get(key, 0.0) - 1.0
        lp.add_constraint(row, ">=", 0.0, f"positive part on {g}")
        sec: dict[Hashable, float] = {_var("m", g): c.eve_msg, _var("t", g): c.eve_msg - c.eve_once}
        for key in reach:
            sec[key] = sec.get(key, 0.0) + c.eve_once
        for j in into_d:
            sec[_var("s", j)] = sec.get(_var("s", j), 0.0) - 1.0
        lp.add_constraint(sec, "<=", 0.0, f"security on {g}")
    return _meta(lp, net, "3", pairs=order)


def build_algo4(
    net: Network,
    V: int,
    *,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    arq_only: bool = False,
    budget: Mapping[str, float] | None = None,
) -> LinearProgram:
    net.source
    n = len(net.edges)
    if not 1 <= V <= n:
        raise ValueError(f"wiretap count {V} must lie in [1, {n}]")
    count = math.comb(n, V)
    if count > max_subsets:
        raise SubsetLimitError(count, max_subsets)
    coeffs = {e.id: edge_coeffs(e) for e in net.edges}
    lp = LinearProgram(f"algo4[V={V}]")
    _core(lp, net, coeffs, randomness=">=", arq_only=arq_only, budget=budget)
    delivered = _delivered(net)
    for subset in itertools.combinations(net.edge_ids, V):
        heard: dict[Hashable, float] = {k: -v for k, v in delivered.items()}
        for h in subset:
            c = coeffs[h]
            for key, val in ((_var("r", h), c.eve_r), (_var("k", h), c.eve_k)):
                heard[key] = heard.get(key, 0.0) + val
        for g in subset:
            row = dict(heard)
            row[_var("m", g)] = row.get(_var("m", g), 0.0) + coeffs[g].eve_msg
            lp.add_constraint(row, "<=", 0.0, f"security on {g} within {{{','.join(subset)}}}")
    return _meta(lp, net, "4", wiretap_count=V)


def build_algo5(
    net: Network,
    paths: Mapping[str, Sequence[Path]] | None = None,
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
    budget: Mapping[str, float] | None = None,
) -> LinearProgram:
    """Several sources, one message each, to the common destination.

    Every source keeps its own end-to-end key; the randomness of all sources
    crossing an edge feeds one link-by-link key pool split by ``("w", l, g)``.
    Conservation for source ``l`` is imposed at every vertex except ``l`` and
    the destination, so other sources relay ``l``'s traffic like any node.
    """
    if paths is None:
        paths = {s: enumerate_source_rooted_paths(net, s, max_paths) for s in net.sources}
    coeffs = {e.id: edge_coeffs(e) for e in net.edges}
    lp = LinearProgram(f"algo5[L={len(net.sources)}]")
    d = net.destination
    for l in net.sources:
        for e in net.edges:
            lp.add_variables(_var(x, l, e.id) for x in "mkrsw")
    lp.set_objective({_var("m", l, g): 1.0 for l in net.sources for g in net.in_edges(d)})

    for l in net.sources:
        for u in net.internal_vertices(exempt=(l, d)):
            ins, outs = net.in_edges(u), net.out_edges(u)
            row = {_var("m", l, g): 1.0 for g in ins}
            for g in outs:
                row[_var("m", l, g)] = row.get(_var("m", l, g), 0.0) - 1.0
            lp.add_constraint(row, "==", 0.0, f"message conservation at {u} for {l}")
            rnd: dict[Hashable, float] = {_var("s", l, g): 1.0 for g in ins}
            for g in outs:
                rnd[_var("k", l, g)] = -1.0
                rnd[_var("r", l, g)] = -1.0
            lp.add_constraint(rnd, ">=", 0.0, f"randomness conservation at {u} for {l}")

    for e in net.edges:
        c, g = coeffs[e.id], e.id
        if c.dead:
            for l in net.sources:
                for x in "mkrsw":
                    lp.fix_zero(_var(x, l, g), f"dead edge {g}")
            continue
        ts: dict[Hashable, float] = {}
        pool: dict[Hashable, float] = {}
        for l in net.sources:
            ts.update({_var("r", l, g): c.ts_r, _var("k", l, g): c.ts_k, _var("m", l, g): c.ts_m})
            pool.update({_var("w", l, g): 1.0, _var("r", l, g): -c.link_key, _var("k", l, g): -c.link_key})
            lp.add_constraint(
                {_var("s", l, g): 1.0, _var("r", l, g): -1.0, _var("k", l, g): -c.deliver_k},
                "==",
                0.0,
                f"delivered randomness on {g} for {l}",
            )
        rhs = 1.0 if budget is None else float(budget.get(g, 1.0))
        lp.add_constraint(ts, "<=", rhs, f"time sharing on {g}")
        lp.add_constraint(pool, "<=", 0.0, f"link key pool on {g}")

    all_keys: list[tuple[Hashable, Path]] = []
    for l in net.sources:
        keys = _path_flows(lp, net, coeffs, paths[l], l, tag=(l,))
        _link_security(lp, net, coeffs, keys, tag=(l,), pooled=True)
        all_keys += keys
    return _meta(lp, net, "5", paths=[p for _, p in all_keys], path_keys=all_keys)


def build(net: Network, config: FormulationConfig) -> LinearProgram:
    a = config.algo
    if a == "1":
        return build_algo1(net, arq_only=config.arq_only)
    if a == "2":
        return build_algo2(net, max_paths=config.max_paths, arq_only=config.arq_only)
    if a == "3":
        return build_algo3(net, arq_only=config.arq_only)
    if a == "4":
        return build_algo4(net, config.wiretap_count, max_subsets=config.max_subsets, arq_only=config.arq_only)
    if a == "5":
        return build_algo5(net, max_paths=config.max_paths)
    return build_snc_baseline(net)


@dataclass(frozen=True)
class EdgeRates:
    m: float  # padded message packets per slot
    k: float  # random packets sent MDS-expanded
    r: float  # random packets sent by ARQ
    s: float  # shared randomness delivered to the head


@dataclass(frozen=True)
class SourceEdgeRates:
    m: float
    k: float
    r: float
    s: float
    w: float  # this source's draw on the edge's pooled link key


@dataclass
class SchemeSolution:
    rate: float
    per_edge: dict[str, EdgeRates]
    algo: str = "1"
    per_path: dict[Path, float] | None = None
    virtual_flows: dict[tuple[str, str], float] | None = None
    per_source: dict[tuple[str, str], SourceEdgeRates] | None = None
    auxiliary: dict[str, float] | None = None
    values: dict[Hashable, float] | None = None

    def source_rate(self, source: str, net: Network) -> float:
        if self.per_source is None:
            raise ValueError("single-source scheme")
        return sum(self.per_source[(source, g)].m for g in net.in_edges(net.destination))


def _randomness_keys(lp: LinearProgram) -> list[Hashable]:
    return [k for k in lp.variables if isinstance(k, tuple) and k[0] in ("k", "r", "s", "sp", "v", "w", "t")]


def tie_break(lp: LinearProgram, sol: LpSolution, tolerances: Tolerances | None = None) -> LpSolution:
    """Among optimal solutions prefer the one carrying the least randomness."""
    lp2 = lp.copy()
    lp2.add_constraint(lp.objective, ">=", sol.objective - TIE_BREAK_SLACK, "keep optimum")
    lp2.set_objective({k: -1.0 for k in _randomness_keys(lp)})
    sol2 = solve(lp2, tolerances)
    if sol2.status != "optimal":
        return sol
    obj = sum(v * sol2.values[k] for k, v in lp.objective.items())
    return LpSolution("optimal", obj, sol2.values, sol.iterations + sol2.iterations)


def extract_scheme(
    lp: LinearProgram,
    sol: LpSolution,
    config: FormulationConfig | None = None,
    *,
    rate: float | None = None,
    feas_tol: float = 1e-7,
) -> SchemeSolution:
    if sol.status != "optimal":
        raise UnsolvedError(sol.status)
    net: Network = lp.meta["network"]
    algo = lp.meta.get("algo", config.algo if config else "1")

    vals: dict[Hashable, float] = {}
    for k, v in sol.values.items():
        if v < -feas_tol:
            raise SchemeInvariantError(_edge_of(k), f"nonnegativity of {k}", -v)
        vals[k] = max(v, 0.0)

    per_source = None
    if algo == "5":
        per_source = {}
        for l in net.sources:
            for e in net.edges:
                per_source[(l, e.id)] = SourceEdgeRates(*(vals[(x, l, e.id)] for x in "mkrsw"))
        per_edge = {
            e.id: EdgeRates(*(sum(getattr(per_source[(l, e.id)], x) for l in net.sources) for x in "mkrs"))
            for e in net.edges
        }
    else:
        per_edge = {e.id: EdgeRates(*(vals[(x, e.id)] for x in "mkrs")) for e in net.edges}

    per_path = None
    if "path_keys" in lp.meta:
        per_path = {p: vals[key] for key, p in lp.meta["path_keys"]}
    virtual = aux = None
    if algo == "3":
        virtual = {(g, j): vals[("v", g, j)] for g, j in lp.meta["pairs"]}
        virtual.update({(g, g): per_edge[g].s for g in net.edge_ids})
        aux = {g: vals[("t", g)] for g in net.edge_ids}

    for e in net.edges:
        er = per_edge[e.id]
        if e.delta * e.delta_e >= 1.0 and er.k > feas_tol:
            raise SchemeInvariantError(e.id, "k = 0 on a fully erased edge", er.k)
        if algo != "snc":
            c = edge_coeffs(e)
            gap = abs(er.s - er.r - er.k * c.deliver_k)
            if gap > feas_tol * max(1.0, er.s):
                raise SchemeInvariantError(e.id, "delivered randomness identity", gap)

    if rate is None:
        rate = sum(v * vals[k] for k, v in lp.objective.items())
    return SchemeSolution(
        rate=float(rate),
        per_edge=per_edge,
        algo=algo,
        per_path=per_path,
        virtual_flows=virtual,
        per_source=per_source,
        auxiliary=aux,
        values=vals,
    )


def _edge_of(key: Hashable) -> str:
    return str(key[-1]) if isinstance(key, tuple) else str(key)


def solve_lp(lp: LinearProgram, tolerances: Tolerances | None = None) -> LpSolution:
    sol = solve(lp, tolerances)
    if sol.status != "optimal":
        raise UnsolvedError(sol.status)
    return sol


def solve_scheme(
    net: Network,
    config: FormulationConfig | None = None,
    tolerances: Tolerances | None = None,
    *,
    lp: LinearProgram | None = None,
) -> SchemeSolution:
    """Build, solve, break ties toward minimal randomness and decode."""
    config = config or FormulationConfig()
    lp = lp if lp is not None else build(net, config)
    sol = solve_lp(lp, tolerances)
    best = tie_break(lp, sol, tolerances)
    tol = (tolerances or Tolerances()).feas_tol
    return extract_scheme(lp, best, config, rate=sol.objective, feas_tol=tol)


def solve_rate(net: Network, algo: Algo = "1", tolerances: Tolerances | None = None, **options) -> float:
    """Optimal objective of one formulation, without tie breaking."""
    builders = {
        "1": build_algo1,
        "2": build_algo2,
        "3": build_algo3,
        "4": build_algo4,
        "5": build_algo5,
        "snc": build_snc_baseline,
    }
    if algo == "4":
        lp = build_algo4(net, options.pop("wiretap_count", 1), **options)
    else:
        lp = builders[algo](net, **options)
    return solve_lp(lp, tolerances).objective


def algo3_exact_residual(net: Network, scheme: SchemeSolution) -> float:
    """Worst violation of the min / positive-part security rows of Algo 3, evaluated directly."""
    if scheme.virtual_flows is None:
        raise ValueError("scheme carries no virtual flows")
    into_d = net.in_edges(net.destination)
    delivered = sum(scheme.per_edge[j].s for j in into_d)
    worst = 0.0
    for e in net.edges:
        c, g = edge_coeffs(e), e.id
        er = scheme.per_edge[g]
        A = sum(scheme.virtual_flows.get((g, j), 0.0) for j in into_d)
        K = er.k * c.deliver_k
        knows = max(A - K, 0.0) * c.eve_msg + min(A, K) * c.eve_once
        worst = max(worst, er.m * c.eve_msg - (delivered - knows))
    return worst


def scheme_residual(lp: LinearProgram, scheme: SchemeSolution) -> float:
    assert scheme.values is not None
    return check_feasibility(lp, scheme.values)
