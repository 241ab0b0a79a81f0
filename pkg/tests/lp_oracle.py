"""Brute-force LP optimum by enumerating basic feasible solutions."""

import itertools

import numpy as np


def random_lp(rng: np.random.Generator, max_vars=6):
    """max c.x s.t. A x <= b (plus optional equalities), x >= 0; bounded by a sum row."""
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(1, 5))
    A = np.round(rng.uniform(-1, 2, size=(m, n)), 3)
    b = np.round(rng.uniform(0.5, 3, size=m), 3)
    A = np.vstack([A, np.ones(n)])
    b = np.append(b, 5.0)
    c = np.round(rng.uniform(-1, 2, size=n), 3)
    n_eq = int(rng.integers(0, 2)) if n > 1 else 0
    Aeq = np.round(rng.uniform(0, 1, size=(n_eq, n)), 3)
    beq = np.round(Aeq.sum(axis=1) * rng.uniform(0.1, 0.5), 3)
    return c, A, b, Aeq, beq


def bfs_optimum(c, A, b, Aeq, beq, tol=1e-9):
    n = len(c)
    rows = np.vstack([A, -np.eye(n)])
    rhs = np.concatenate([b, np.zeros(n)])
    best = None
    k = n - len(Aeq)
    for active in itertools.combinations(range(len(rows)), k):
        M = np.vstack([Aeq, rows[list(active)]])
        r = np.concatenate([beq, rhs[list(active)]])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, r)
        if np.all(rows @ x <= rhs + tol) and np.allclose(Aeq @ x, beq, atol=tol):
            val = float(c @ x)
            best = val if best is None else max(best, val)
    return best
