"""Compiled GF(2^m) inner loops. Arrays are int64; ``exp`` has length ``2*order``."""

import numba as nb
import numpy as np


@nb.njit(cache=True)
def gf_matmul(A, B, exp, log):
    n, k = A.shape
    p = B.shape[1]
    # row-compressed B so sparse (e.g. unit-vector) rows cost only their nonzeros
    indptr = np.zeros(k + 1, dtype=np.int64)
    for t in range(k):
        c = 0
        for j in range(p):
            if B[t, j] != 0:
                c += 1
        indptr[t + 1] = indptr[t] + c
    cols = np.empty(indptr[k], dtype=np.int64)
    logs = np.empty(indptr[k], dtype=np.int64)
    for t in range(k):
        q = indptr[t]
        for j in range(p):
            if B[t, j] != 0:
                cols[q] = j
                logs[q] = log[B[t, j]]
                q += 1
    C = np.zeros((n, p), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            a = A[i, t]
            if a == 0:
                continue
            la = log[a]
            for q in range(indptr[t], indptr[t + 1]):
                C[i, cols[q]] ^= exp[la + logs[q]]
    return C


@nb.njit(cache=True)
def rank_checkpoints(M, checkpoints, exp, log, order):
    """Incremental elimination; returns the rank after each prefix length in ``checkpoints``."""
    rows, ncols = M.shape
    # pivot rows stored as logs, -1 for zero entries
    piv = np.full((min(rows, ncols), ncols), -1, dtype=np.int64)
    pcol = np.empty(min(rows, ncols), dtype=np.int64)
    rank = 0
    out = np.zeros(checkpoints.shape[0], dtype=np.int64)
    ci = 0
    row = np.empty(ncols, dtype=np.int64)
    for i in range(rows):
        while ci < checkpoints.shape[0] and checkpoints[ci] <= i:
            out[ci] = rank
            ci += 1
        if rank == ncols:
            break
        for j in range(ncols):
            row[j] = M[i, j]
        for r in range(rank):
            c = row[pcol[r]]
            if c == 0:
                continue
            lc = log[c]
            for j in range(ncols):
                lv = piv[r, j]
                if lv >= 0:
                    row[j] ^= exp[lc + lv]
        lead = -1
        for j in range(ncols):
            if row[j] != 0:
                lead = j
                break
        if lead < 0:
            continue
        linv = (order - 1) - log[row[lead]]
        for j in range(ncols):
            v = row[j]
            if v != 0:
                piv[rank, j] = (log[v] + linv) % (order - 1)
        pcol[rank] = lead
        rank += 1
    while ci < checkpoints.shape[0]:
        out[ci] = rank
        ci += 1
    return out
