"""Bases of the Riemann-Roch space L(<t>) attached to a point t of order d.

Three coordinate systems for functions with at most simple poles along the
cyclic subgroup <t>:

  * u-basis: u_l = u_{lt,(l+1)t} + (1-a)/d, each with poles at lt, (l+1)t;
    the u_l sum to the constant 1.
  * v-basis: v_0 = 1, v_l = u_{O,lt} for l >= 1.
  * x-"basis": x_l = x((.) - lt), translates of the x-coordinate; these span
    functions with double poles along <t> and are only used as reduction input.

A BasisCtx precomputes the multiples of t, the constant a, and the vector
a_l relating the two bases (v_l = u_0 + ... + u_{l-1} + a_l), and provides
pointwise evaluation of basis functions plus the O(d) base changes.

The oracle_* functions are quadratic/cubic brute-force references: direct
pointwise evaluation, dense interpolation (Gaussian elimination), and
reduction of x-coordinate combinations to L(<t>).
"""

from __future__ import annotations

from typing import List, Sequence

from .curves import Curve, PoleError, Point


class BasisCtx:
    """Precomputed data for the u/v bases of L(<t>) with d = order of t."""

    def __init__(self, E: Curve, t: Point, d: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.E = E
        self.K = E.K
        self.t = t
        self.d = d
        K = E.K
        if d == 1:
            # L(O) is the constants; u_0 = v_0 = 1
            self.mults = [None]
            self.a_const = K.one
            self.avec = [K.one]
            self.u_offset = K.zero
            return
        mults = [None]
        P = None
        for _ in range(d):
            P = E.add(P, t)
            mults.append(P)
        if mults[d] is not None:
            raise ValueError("t does not have order dividing d")
        if d >= 2 and mults[d // 2] is None:
            raise ValueError("t has order smaller than d")
        self.mults = mults  # mults[l] = l*t for 0 <= l <= d
        # Gamma(O, (l-1)t, lt) for l = 2..d-1
        gammas = [E.gamma(None, mults[l - 1], mults[l]) for l in range(2, d)]
        a = K.neg(E.a1)
        for g in gammas:
            a = K.add(a, g)
        self.a_const = a
        dinv = K.inv(K.embed(d))
        self.u_offset = K.mul(K.sub(K.one, a), dinv)
        # a_0 = 1; a_l = l (a-1)/d - sum_{k=2..l} Gamma(O,(k-1)t,kt)
        step = K.mul(K.sub(a, K.one), dinv)
        avec = [K.one]
        acc = K.zero
        run = K.zero
        for l in range(1, d):
            acc = K.add(acc, step)
            if l >= 2:
                run = K.add(run, gammas[l - 2])
            avec.append(K.sub(acc, run))
        self.avec = avec

    # --- pointwise evaluation -------------------------------------------
    def u_val(self, l: int, P: Point):
        """u_l(P); raises PoleError for P in {lt, (l+1)t}."""
        K = self.K
        if self.d == 1:
            return K.one
        l %= self.d
        A = self.mults[l]
        B = self.mults[(l + 1) % self.d]
        return K.add(self.E.u_func(A, B, P), self.u_offset)

    def v_val(self, l: int, P: Point):
        """v_l(P); raises PoleError for P in {O, lt} (l >= 1)."""
        K = self.K
        l %= self.d
        if l == 0:
            return K.one
        return self.E.u_func(None, self.mults[l], P)

    def x_val(self, l: int, P: Point):
        """x_l(P) = x(P - lt); raises PoleError at P = lt."""
        if self.d == 1:
            Q = P
        else:
            Q = self.E.sub(P, self.mults[l % self.d])
        if Q is None:
            raise PoleError("x_l has a pole at P = lt")
        return Q[0]

    def basis_val(self, basis: str, l: int, P: Point):
        if basis == "u":
            return self.u_val(l, P)
        if basis == "v":
            return self.v_val(l, P)
        if basis == "x":
            return self.x_val(l, P)
        raise ValueError(f"unknown basis {basis!r}")

    # --- base change -----------------------------------------------------
    def v_to_u(self, g: Sequence) -> List:
        return v_to_u(self.K, self.avec, g)

    def u_to_v(self, f: Sequence) -> List:
        return u_to_v(self.K, self.avec, f)


def v_to_u(K, avec: Sequence, g: Sequence) -> List:
    """u-coordinates of sum g_l v_l: f_m = sum_{l>m} g_l + <g, a>."""
    d = len(avec)
    if len(g) != d:
        raise ValueError("coordinate length mismatch")
    c = K.zero
    for gl, al in zip(g, avec):
        c = K.add(c, K.mul(gl, al))
    out = [K.zero] * d
    suffix = K.zero
    for m in range(d - 1, -1, -1):
        out[m] = K.add(suffix, c)
        suffix = K.add(suffix, g[m])
    return out


def u_to_v(K, avec: Sequence, f: Sequence) -> List:
    """v-coordinates of sum f_m u_m: g_l = f_{l-1} - f_l, g_0 via <g, a>."""
    d = len(avec)
    if len(f) != d:
        raise ValueError("coordinate length mismatch")
    g = [K.zero] * d
    acc = K.zero
    for l in range(1, d):
        g[l] = K.sub(f[l - 1], f[l])
        acc = K.add(acc, K.mul(g[l], avec[l]))
    g[0] = K.sub(f[d - 1], acc)
    return g


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

def coset(E: Curve, b: Point, t: Point, d: int) -> List[Point]:
    """The points b, b+t, ..., b+(d-1)t."""
    out = [b]
    P = b
    for _ in range(d - 1):
        P = E.add(P, t)
        out.append(P)
    return out


def oracle_evaluate(ctx: BasisCtx, coeffs: Sequence, points: Sequence[Point], basis: str = "u") -> List:
    """Pointwise evaluation of sum coeffs[l] * basis_l at the given points."""
    K = ctx.K
    out = []
    for P in points:
        acc = K.zero
        for l, c in enumerate(coeffs):
            acc = K.add(acc, K.mul(c, ctx.basis_val(basis, l, P)))
        out.append(acc)
    return out


def evaluation_matrix(ctx: BasisCtx, points: Sequence[Point], basis: str = "u") -> List[List]:
    return [[ctx.basis_val(basis, l, P) for l in range(ctx.d)] for P in points]


def solve_dense(K, M: Sequence[Sequence], rhs: Sequence) -> List:
    """Solve M x = rhs over the field K by Gaussian elimination."""
    n = len(rhs)
    A = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not K.is_zero(A[r][col])), None)
        if piv is None:
            raise ValueError("singular evaluation matrix")
        A[col], A[piv] = A[piv], A[col]
        pinv = K.inv(A[col][col])
        A[col] = [K.mul(pinv, v) for v in A[col]]
        for r in range(n):
            if r != col and not K.is_zero(A[r][col]):
                f = A[r][col]
                A[r] = [K.sub(A[r][j], K.mul(f, A[col][j])) for j in range(n + 1)]
    return [A[i][n] for i in range(n)]


def oracle_interpolate(ctx: BasisCtx, values: Sequence, points: Sequence[Point], basis: str = "u") -> List:
    """Coefficients in the given basis of the unique element of L(<t>) taking
    the given values on the d interpolation points (dense solve)."""
    if len(values) != ctx.d or len(points) != ctx.d:
        raise ValueError("need exactly d values and d points")
    M = evaluation_matrix(ctx, points, basis)
    return solve_dense(ctx.K, M, values)


def oracle_reduce(ctx: BasisCtx, coeffs: Sequence, points: Sequence[Point], basis: str = "u") -> List:
    """Coefficients in `basis` of the reduction mod the points' divisor of
    F = sum coeffs[l] x_l: evaluate F pointwise, then interpolate."""
    values = oracle_evaluate(ctx, coeffs, points, basis="x")
    return oracle_interpolate(ctx, values, points, basis)
