"""Reference outer-bound LPs for two small topologies.

Both are solved with the same simplex as the formulations, but they are
written directly in their own variables so a mismatch against the general
builders points at a builder bug rather than a shared one.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .lpsolve import LinearProgram, Tolerances, solve


def _check_prob(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name}={x} is not a probability")
    return x


@dataclass(frozen=True)
class ParallelPairParams:
    delta1: float
    delta1e: float
    delta2: float
    delta2e: float

    def __post_init__(self) -> None:
        for name in ("delta1", "delta1e", "delta2", "delta2e"):
            _check_prob(name, getattr(self, name))


@dataclass(frozen=True)
class LineParams:
    hops: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.hops:
            raise ValueError("a line needs at least one hop")
        hops = tuple((_check_prob("delta", d), _check_prob("delta_e", de)) for d, de in self.hops)
        object.__setattr__(self, "hops", hops)

    @classmethod
    def of(cls, hops: Sequence[Sequence[float]]) -> LineParams:
        return cls(tuple((h[0], h[1]) for h in hops))


def _optimum(lp: LinearProgram, tolerances: Tolerances | None) -> float:
    sol = solve(lp, tolerances)
    if sol.status != "optimal":
        raise ArithmeticError(f"{lp.name}: {sol.status}")
    return sol.objective


def parallel_pair_bound(p: ParallelPairParams, tolerances: Tolerances | None = None) -> float:
    """Two parallel channels; ``M_i`` is message time share and ``C_i`` key time share on channel i."""
    ds = (p.delta1, p.delta2)
    des = (p.delta1e, p.delta2e)
    lp = LinearProgram("parallel pair")
    lp.add_variables(["M1", "M2", "C1", "C2"])
    M, C = ("M1", "M2"), ("C1", "C2")
    lp.set_objective({M[i]: 1.0 - ds[i] for i in range(2)})
    for i in range(2):
        o = 1 - i
        lp.add_constraint({C[i]: 1.0, M[i]: 1.0}, "<=", 1.0, f"time on {i + 1}")
        both = 1.0 - ds[i] * des[i]
        if both <= 0.0:
            lp.fix_zero(M[i])
            continue
        lp.add_constraint(
            {
                M[i]: (1.0 - des[i]) * (1.0 - ds[i]) / both,
                C[o]: -(1.0 - ds[o]),
                C[i]: -(1.0 - ds[i]) * des[i],
            },
            "<=",
            0.0,
            f"secrecy on {i + 1}",
        )
    return _optimum(lp, tolerances)


def line_bound(p: LineParams, tolerances: Tolerances | None = None) -> float:
    """Chain of hops; ``k_j`` is the key available against hop j, ``d_j`` the randomness reaching past it."""
    lp = LinearProgram("line")
    lp.add_variable("m")
    n = len(p.hops)
    for j in range(1, n + 1):
        lp.add_variables([("k", j), ("d", j)])
    lp.set_objective({"m": 1.0})
    for j, (d, de) in enumerate(p.hops, start=1):
        k, dj = ("k", j), ("d", j)
        both = 1.0 - d * de
        if d >= 1.0:
            lp.fix_zero("m", f"hop {j} never delivers")
            continue
        lp.add_constraint({"m": (1.0 - de) / both, k: -1.0}, "<=", 0.0, f"key on {j}")
        # k/((1-d)de) + m/(1-d) <= 1, scaled by (1-d)de; at de = 0 it reads k <= 0
        lp.add_constraint({k: 1.0, "m": de}, "<=", (1.0 - d) * de, f"time on {j}")
        link = de * (1.0 - d) / both
        if j == 1:
            # the source's private randomness is unlimited
            if link == 0.0:
                lp.fix_zero(k, "no secret share on hop 1")
        else:
            lp.add_constraint({k: 1.0, ("d", j - 1): -link}, "<=", 0.0, f"secret share on {j}")
            lp.add_constraint({dj: 1.0, ("d", j - 1): -1.0}, "<=", 0.0, f"randomness decay at {j}")
        lp.add_constraint({dj: 1.0, "m": 1.0}, "<=", 1.0 - d, f"capacity of {j}")
    return _optimum(lp, tolerances)
