"""Dense two-phase primal simplex for small maximisation LPs.

Variables are nonnegative and addressed by arbitrary hashable keys; the
formulation builders use tuples such as ``("m", "e1")``. Constraints are
``<=`` or ``==`` rows (``>=`` is accepted and stored negated).

The pivot rule is Dantzig's largest coefficient with the smallest-index tie
break, switching to Bland's rule once a phase has run ``2 * (rows + cols)``
iterations, so degenerate instances terminate.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

FEAS_TOL = 1e-7
PIVOT_TOL = 1e-9
MAX_ITERATIONS = 100_000
ZERO_TOL = 1e-12
RATIO_SLACK = 1e-12

Relation = Literal["<=", "=="]
Status = Literal["optimal", "infeasible", "unbounded"]


class LpError(Exception):
    pass


class IterationLimitError(LpError):
    def __init__(self, iterations: int) -> None:
        super().__init__(f"simplex iteration limit reached after {iterations} pivots")
        self.iterations = iterations


@dataclass(frozen=True)
class Tolerances:
    feas_tol: float = FEAS_TOL
    pivot_tol: float = PIVOT_TOL
    max_iterations: int = MAX_ITERATIONS


@dataclass
class Constraint:
    coeffs: dict[Hashable, float]
    relation: Relation
    rhs: float
    label: str = ""


def _fmt_key(key: Hashable) -> str:
    if isinstance(key, tuple) and key:
        head, *rest = key
        return f"{head}[{','.join(map(str, rest))}]" if rest else str(head)
    return str(key)


@dataclass
class LinearProgram:
    """``max c.x`` subject to linear rows and ``x >= 0``."""

    name: str = ""
    variables: list[Hashable] = field(default_factory=list)
    objective: dict[Hashable, float] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    meta: dict = field(default_factory=dict, repr=False)
    _index: dict[Hashable, int] = field(default_factory=dict, repr=False)

    def add_variable(self, key: Hashable) -> Hashable:
        if key in self._index:
            raise ValueError(f"variable {_fmt_key(key)} declared twice")
        self._index[key] = len(self.variables)
        self.variables.append(key)
        return key

    def add_variables(self, keys: Iterable[Hashable]) -> None:
        for k in keys:
            self.add_variable(k)

    def has_variable(self, key: Hashable) -> bool:
        return key in self._index

    def index(self, key: Hashable) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"unknown variable {_fmt_key(key)}") from None

    def set_objective(self, coeffs: Mapping[Hashable, float]) -> None:
        for k in coeffs:
            self.index(k)
        self.objective = dict(coeffs)

    def add_constraint(
        self,
        coeffs: Mapping[Hashable, float],
        relation: str,
        rhs: float = 0.0,
        label: str = "",
    ) -> None:
        merged: dict[Hashable, float] = {}
        for k, v in coeffs.items():
            self.index(k)
            merged[k] = merged.get(k, 0.0) + float(v)
        rhs = float(rhs)
        if not np.isfinite(rhs):
            raise ValueError(f"constraint {label!r}: rhs must be finite")
        if relation == ">=":
            merged = {k: -v for k, v in merged.items()}
            rhs = -rhs
            relation = "<="
        if relation not in ("<=", "=="):
            raise ValueError(f"unsupported relation {relation!r}")
        self.constraints.append(Constraint(merged, relation, rhs, label))  # type: ignore[arg-type]

    def fix_zero(self, key: Hashable, label: str = "") -> None:
        self.add_constraint({key: 1.0}, "<=", 0.0, label or f"pin {_fmt_key(key)}")

    def copy(self) -> LinearProgram:
        return LinearProgram(
            self.name,
            list(self.variables),
            dict(self.objective),
            [Constraint(dict(c.coeffs), c.relation, c.rhs, c.label) for c in self.constraints],
            dict(self.meta),
            dict(self._index),
        )

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[str]]:
        n = len(self.variables)
        c = np.zeros(n)
        for k, v in self.objective.items():
            c[self._index[k]] = v
        A = np.zeros((len(self.constraints), n))
        b = np.zeros(len(self.constraints))
        rel = []
        for i, con in enumerate(self.constraints):
            for k, v in con.coeffs.items():
                A[i, self._index[k]] = v
            b[i] = con.rhs
            rel.append(con.relation)
        return c, A, b, rel

    def dump(self) -> str:
        """Human-readable listing, one row per line."""

        def expr(coeffs: Mapping[Hashable, float]) -> str:
            terms = [f"{v:+.6g} {_fmt_key(k)}" for k, v in coeffs.items() if v != 0.0]
            return " ".join(terms) if terms else "0"

        out = [f"# {self.name}" if self.name else "# lp", f"max {expr(self.objective)}", "s.t."]
        for con in self.constraints:
            tag = f"  [{con.label}]" if con.label else ""
            out.append(f"  {expr(con.coeffs)} {con.relation} {con.rhs:.6g}{tag}")
        out.append(f"  all {len(self.variables)} variables >= 0")
        return "\n".join(out) + "\n"


@dataclass
class LpSolution:
    status: Status
    objective: float
    values: dict[Hashable, float]
    iterations: int

    def __getitem__(self, key: Hashable) -> float:
        return self.values[key]


def check_feasibility(lp: LinearProgram, values: Mapping[Hashable, float]) -> float:
    """Largest bound or row violation of ``values``; 0.0 means feasible."""
    x = np.zeros(len(lp.variables))
    for k, v in values.items():
        x[lp.index(k)] = v
    missing = [k for k in lp.variables if k not in values]
    if missing:
        raise KeyError(f"no value for variable {_fmt_key(missing[0])}")
    worst = max(0.0, float(-x.min())) if x.size else 0.0
    for con in lp.constraints:
        lhs = sum(v * x[lp._index[k]] for k, v in con.coeffs.items())
        gap = lhs - con.rhs
        worst = max(worst, abs(gap) if con.relation == "==" else gap)
    return worst


class _Tableau:
    """Row-major tableau ``[A | b]`` with the reduced-cost row last."""

    def __init__(self, T: np.ndarray, basis: list[int], tol: Tolerances) -> None:
        self.T = T
        self.basis = basis
        self.tol = tol
        self.iterations = 0

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] /= T[row, col]
        colvals = T[:, col].copy()
        colvals[row] = 0.0
        nz = np.nonzero(colvals)[0]
        if nz.size:
            sub = T[nz] - np.outer(colvals[nz], T[row])
            sub[np.abs(sub) < ZERO_TOL] = 0.0
            T[nz] = sub
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col
        rhs = T[:-1, -1]
        rhs[(rhs < 0.0) & (rhs > -RATIO_SLACK)] = 0.0

    def dual_cleanup(self, allowed: int, budget: int) -> bool:
        """Dual simplex pivots until no basic value is negative; True if any pivot was made."""
        T = self.T
        ptol = self.tol.pivot_tol
        moved = False
        while True:
            rhs = T[:-1, -1]
            row = int(np.argmin(rhs)) if rhs.size else 0
            if not rhs.size or rhs[row] >= -RATIO_SLACK:
                rhs[rhs < 0.0] = 0.0
                return moved
            line = T[row, :allowed]
            cand = np.nonzero(line < -ptol)[0]
            if cand.size == 0:
                return moved
            ratios = np.maximum(T[-1, cand], 0.0) / -line[cand]
            ties = cand[ratios <= ratios.min() + RATIO_SLACK]
            col = int(ties[np.argmax(-line[ties])])
            if self.iterations >= budget:
                raise IterationLimitError(self.iterations)
            self.pivot(row, col)
            self.iterations += 1
            moved = True

    def run(self, allowed: int, budget: int) -> Literal["optimal", "unbounded"]:
        """Maximise over the first ``allowed`` columns."""
        T = self.T
        m = T.shape[0] - 1
        switch = 2 * (m + allowed)
        phase_iters = 0
        ptol = self.tol.pivot_tol
        while True:
            costs = T[-1, :allowed]
            bland = phase_iters >= switch
            if bland:
                cand = np.nonzero(costs < -ptol)[0]
                if cand.size == 0:
                    return "optimal"
                col = int(cand[0])
            else:
                col = int(np.argmin(costs))
                if costs[col] >= -ptol:
                    return "optimal"
            colv = T[:m, col]
            rows = np.nonzero(colv > ptol)[0]
            if rows.size == 0:
                return "unbounded"
            rhs = np.maximum(T[rows, -1], 0.0)
            ratios = rhs / colv[rows]
            # Harris-style window: any tie may dip at most RATIO_SLACK below zero
            cap = ((rhs + RATIO_SLACK) / colv[rows]).min()
            ties = rows[ratios <= cap]
            if bland:
                row = int(min(ties, key=lambda r: self.basis[r]))
            else:
                row = int(ties[np.argmax(colv[ties])])
            if self.iterations >= budget:
                raise IterationLimitError(self.iterations)
            self.pivot(row, col)
            self.iterations += 1
            phase_iters += 1


def _refactor(tab: _Tableau, A: np.ndarray, b: np.ndarray, c: np.ndarray, n: int) -> bool:
    B = A[:, tab.basis]
    try:
        body = np.linalg.solve(B, np.column_stack([A, b]))
    except np.linalg.LinAlgError:
        return False
    if not np.all(np.isfinite(body)):
        return False
    T = tab.T
    T[:-1] = body
    T[:-1, tab.basis] = np.eye(len(tab.basis))
    T[:-1][np.abs(T[:-1]) < ZERO_TOL] = 0.0
    cost = np.zeros(T.shape[1])
    cost[:n] = -c
    cb = cost[tab.basis]
    T[-1] = cost - cb @ T[:-1]
    T[-1, tab.basis] = 0.0
    return True


def solve(lp: LinearProgram, tolerances: Tolerances | None = None) -> LpSolution:
    tol = tolerances or Tolerances()
    c, A, b, rel = lp.arrays()
    m, n = A.shape

    # equilibrate: rows then columns to unit max-magnitude; x = x_scaled / col_scale
    row_scale = np.abs(A).max(axis=1, initial=0.0)
    row_scale[row_scale == 0.0] = 1.0
    A /= row_scale[:, None]
    b /= row_scale
    col_scale = np.abs(A).max(axis=0, initial=0.0)
    col_scale[col_scale == 0.0] = 1.0
    A /= col_scale
    c_scaled = c / col_scale

    # normalise to b >= 0; a flipped '<=' row becomes '>='
    sense = np.array([0 if r == "<=" else 1 for r in rel], dtype=int)  # 0: <=, 1: ==, 2: >=
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    sense[neg & (sense == 0)] = 2

    n_slack = int(np.count_nonzero(sense != 1))
    n_art = int(np.count_nonzero(sense != 0))
    width = n + n_slack + n_art
    T = np.zeros((m + 1, width + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    basis = [-1] * m
    si, ai = n, n + n_slack
    for i in range(m):
        if sense[i] == 0:
            T[i, si] = 1.0
            basis[i] = si
            si += 1
        elif sense[i] == 2:
            T[i, si] = -1.0
            si += 1
        if sense[i] != 0:
            T[i, ai] = 1.0
            basis[i] = ai
            ai += 1

    tab = _Tableau(T, basis, tol)
    art_cols = range(n + n_slack, width)
    A_full = T[:m, : n + n_slack].copy()
    b_full = b.copy()
    keep = list(range(m))

    if n_art:
        # phase I: maximise -sum(artificials)
        T[-1, :] = 0.0
        for i in range(m):
            if basis[i] >= n + n_slack:
                T[-1, :] -= T[i, :]
        T[-1, list(art_cols)] = 0.0
        tab.run(width, tol.max_iterations)
        if -T[-1, -1] > tol.feas_tol * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpSolution("infeasible", float("nan"), {}, tab.iterations)
        # drive zero-level artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(m):
            if basis[i] < n + n_slack:
                keep.append(i)
                continue
            row = T[i, : n + n_slack]
            cand = np.nonzero(np.abs(row) > tol.pivot_tol)[0]
            if cand.size:
                tab.pivot(i, int(cand[0]))
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        T = np.delete(T, list(art_cols), axis=1)
        tab.T = T
        tab.basis = [basis[i] for i in keep]
        m = len(keep)

    total = n + n_slack
    T = tab.T
    T[-1, :] = 0.0
    T[-1, :n] = -c_scaled
    for i, j in enumerate(tab.basis):
        if T[-1, j] != 0.0:
            T[-1, :] -= T[-1, j] * T[i, :]
    status = tab.run(total, tol.max_iterations)
    if status == "unbounded":
        return LpSolution("unbounded", float("inf"), {}, tab.iterations)

    # rebuild the tableau from the original data for the final basis, then let dual
    # simplex repair any small primal infeasibility left by accumulated round-off
    for _ in range(3):
        if not _refactor(tab, A_full[keep], b_full[keep], c_scaled, n):
            break
        if not tab.dual_cleanup(total, tol.max_iterations):
            break
        if tab.run(total, tol.max_iterations) == "unbounded":
            return LpSolution("unbounded", float("inf"), {}, tab.iterations)
    T = tab.T
    x = np.zeros(total)
    for i, j in enumerate(tab.basis):
        x[j] = T[i, -1]
    x = x[:n] / col_scale
    x[(x < 0.0) & (x > -tol.feas_tol)] = 0.0
    values = {k: float(x[i]) for i, k in enumerate(lp.variables)}
    return LpSolution("optimal", float(c @ x), values, tab.iterations)
