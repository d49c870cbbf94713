"""Table-driven GF(2^8) / GF(2^16) arithmetic on numpy integer arrays."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# x^8+x^4+x^3+x^2+1 and x^16+x^12+x^3+x+1, both primitive with generator x
PRIMITIVE_POLYS = {256: 0x11D, 65536: 0x1100B}


class GaloisField:
    def __init__(self, order: int = 256):
        if order not in PRIMITIVE_POLYS:
            raise ValueError(f"unsupported field order {order}; use 256 or 65536")
        self.order = order
        poly = PRIMITIVE_POLYS[order]
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.zeros(order, dtype=np.int64)
        x = 1
        for i in range(order - 1):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & order:
                x ^= poly
        exp[order - 1: 2 * (order - 1)] = exp[: order - 1]
        self.exp = exp
        self.log = log

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        return self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)]

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for t in range(A.shape[1]):
            out ^= self.mul(A[:, t:t + 1], B[t:t + 1, :])
        return out

    def random(self, rng: np.random.Generator, shape):
        return rng.integers(0, self.order, size=shape, dtype=np.int64)

    def rank(self, M) -> int:
        R = np.array(M, dtype=np.int64, copy=True)
        if R.ndim != 2 or R.size == 0:
            return 0
        rows, cols = R.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            p = r + nz[0]
            if p != r:
                R[[r, p]] = R[[p, r]]
            R[r] = self.mul(R[r], self.inv(R[r, c]))
            below = R[r + 1:, c]
            hit = np.nonzero(below)[0] + r + 1
            if hit.size:
                R[hit] ^= self.mul(R[hit, c][:, None], R[r][None, :])
            r += 1
        return r


@lru_cache(maxsize=None)
def field(order: int = 256) -> GaloisField:
    return GaloisField(order)
