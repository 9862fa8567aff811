"""Radix-2 number-theoretic transform over F_p, as an op-count baseline.

Iterative decimation-in-time Cooley-Tukey with bit-reversed input ordering.
All arithmetic goes through the field object so the transform is instrumented
by the same operation counters as the elliptic butterflies.
"""

from __future__ import annotations

from typing import List, Sequence

from .fields import PrimeField


def _bit_reverse_permute(a: List) -> None:
    n = len(a)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]


def primitive_root_of_unity(K: PrimeField, n: int) -> int:
    """A primitive n-th root of unity in F_p (requires n | p - 1).

    Deterministic: derived from the least primitive-looking base g = 2, 3, ...
    whose (p-1)/n power has exact order n.
    """
    p = K.p
    if (p - 1) % n != 0:
        raise ValueError(f"p = {p} does not admit an order-{n} root (n must divide p-1)")
    if n == 1:
        return 1
    if n & (n - 1):
        raise ValueError("transform length must be a power of two")
    for g in range(2, p):
        w = pow(g, (p - 1) // n, p)
        if pow(w, n // 2, p) != 1:
            return w
    raise RuntimeError("no primitive root found")


class NttCtx:
    """Precomputed twiddle factors for length-n transforms over F_p."""

    def __init__(self, K: PrimeField, n: int, omega: int = None):
        if n < 1 or n & (n - 1):
            raise ValueError("transform length must be a power of two")
        self.K = K
        self.n = n
        self.logn = n.bit_length() - 1
        if omega is None:
            omega = primitive_root_of_unity(K, n) if n > 1 else 1
        if pow(omega, n, K.p) != 1 or (n > 1 and pow(omega, n // 2, K.p) == 1):
            raise ValueError("omega is not a primitive n-th root of unity")
        self.omega = omega
        self.ninv = K.inv(K.embed(n))
        # twiddles[s][j] = omega^(j * n / 2^(s+1)) for stage s
        self.twiddles = []
        for s in range(self.logn):
            m = 1 << (s + 1)
            wm = pow(omega, n // m, K.p)
            row, w = [], 1
            for _ in range(m // 2):
                row.append(w)
                w = w * wm % K.p
            self.twiddles.append(row)
        self.inv_twiddles = [[K.inv(w) for w in row] for row in self.twiddles]

    def _transform(self, a: Sequence, twiddles) -> List:
        K = self.K
        out = list(a)
        _bit_reverse_permute(out)
        for s in range(self.logn):
            row = twiddles[s]
            half = 1 << s
            m = half << 1
            for start in range(0, self.n, m):
                for j in range(half):
                    u = out[start + j]
                    v = K.mul(row[j], out[start + j + half])
                    out[start + j] = K.add(u, v)
                    out[start + j + half] = K.sub(u, v)
        return out

    def forward(self, a: Sequence) -> List:
        """DFT: out[k] = sum_j a[j] omega^(jk)."""
        if len(a) != self.n:
            raise ValueError("length mismatch")
        return self._transform(a, self.twiddles)

    def inverse(self, a: Sequence) -> List:
        if len(a) != self.n:
            raise ValueError("length mismatch")
        K = self.K
        return [K.mul(self.ninv, x) for x in self._transform(a, self.inv_twiddles)]

    def convolve(self, a: Sequence, b: Sequence) -> List:
        """Cyclic convolution of length n."""
        K = self.K
        fa, fb = self.forward(a), self.forward(b)
        return self.inverse([K.mul(x, y) for x, y in zip(fa, fb)])


def naive_dft(K: PrimeField, a: Sequence, omega: int) -> List:
    """Quadratic reference DFT."""
    n = len(a)
    out = []
    for k in range(n):
        acc = K.zero
        for j, aj in enumerate(a):
            acc = K.add(acc, K.mul(aj, pow(omega, j * k % n, K.p)))
        out.append(acc)
    return out


def naive_cyclic_convolve(K: PrimeField, a: Sequence, b: Sequence) -> List:
    n = len(a)
    out = [K.zero] * n
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[(i + j) % n] = K.add(out[(i + j) % n], K.mul(ai, bj))
    return out
