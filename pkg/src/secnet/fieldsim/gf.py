"""Binary extension fields GF(2^m) backed by exp/log tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels

AES_POLY = 0x11B

# default reduction polynomials; 8 is the AES one, the rest are primitive
DEFAULT_POLYS = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: AES_POLY,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def _clmul_mod(a: int, b: int, poly: int, m: int) -> int:
    out = 0
    top = 1 << m
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= poly
    return out


class GF:
    """GF(2^m) with vectorised array arithmetic; elements are ints in ``[0, 2^m)``."""

    def __init__(self, m: int = 8, poly: int | None = None) -> None:
        if m not in DEFAULT_POLYS:
            raise ValueError(f"GF(2^{m}) not supported; m must be in 2..16")
        poly = DEFAULT_POLYS[m] if poly is None else poly
        if poly >> m != 1:
            raise ValueError(f"polynomial {poly:#x} does not have degree {m}")
        self.m = m
        self.poly = poly
        self.order = 1 << m
        self.exp, self.log, self.generator = self._tables()

    def _tables(self) -> tuple[np.ndarray, np.ndarray, int]:
        n = self.order - 1
        for g in range(2, self.order):
            exp = np.zeros(2 * self.order, dtype=np.int64)
            x = 1
            seen = 0
            log = np.zeros(self.order, dtype=np.int64)
            ok = True
            for i in range(n):
                if x == 1 and i > 0:
                    ok = False
                    break
                exp[i] = x
                log[x] = i
                seen += 1
                x = _clmul_mod(x, g, self.poly, self.m)
            if ok and seen == n and x == 1:
                exp[n : 2 * n] = exp[:n]
                return exp, log, g
            if g > 64:
                break
        raise ValueError(f"{self.poly:#x} is not irreducible over GF(2)")

    def __repr__(self) -> str:
        return f"GF(2^{self.m}, poly={self.poly:#x})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self) -> int:
        return hash((self.m, self.poly))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value), self)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.exp[(self.order - 1) - self.log[a]]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e > 0 else 1
        return int(self.exp[(int(self.log[a]) * e) % (self.order - 1)])

    def random(self, shape, rng: np.random.Generator, nonzero: bool = False) -> np.ndarray:
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.order, size=shape, dtype=np.int64)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.ascontiguousarray(A, dtype=np.int64)
        B = np.ascontiguousarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        return kernels.gf_matmul(A, B, self.exp, self.log)

    def rank(self, A: np.ndarray) -> int:
        A = np.asarray(A, dtype=np.int64)
        return int(self.rank_profile(A, [A.shape[0]])[-1])

    def rank_profile(self, A: np.ndarray, checkpoints) -> np.ndarray:
        """Rank of ``A[:c]`` for every ``c`` in ``checkpoints`` (nondecreasing)."""
        A = np.ascontiguousarray(A, dtype=np.int64)
        if A.ndim != 2:
            raise ValueError("rank needs a matrix")
        cps = np.asarray(checkpoints, dtype=np.int64)
        if A.shape[0] == 0 or A.shape[1] == 0:
            return np.zeros(len(cps), dtype=np.int64)
        return kernels.rank_checkpoints(A, cps, self.exp, self.log, self.order)


@lru_cache(maxsize=None)
def field(m: int = 8) -> GF:
    return GF(m)


@dataclass(frozen=True)
class FieldElement:
    value: int
    gf: GF

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.gf.order:
            raise ValueError(f"{self.value} is not an element of {self.gf}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.gf != self.gf:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return FieldElement(other, self.gf).value
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FieldElement(self.value ^ v, self.gf)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> FieldElement:
        return self

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(int(self.gf.mul(self.value, v)), self.gf)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return FieldElement(int(self.gf.inv(self.value)), self.gf)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * FieldElement(v, self.gf).inverse()

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.gf.power(self.value, e), self.gf)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value:#x}@GF(2^{self.gf.m})"
