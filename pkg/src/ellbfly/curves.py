"""Elliptic curves in long Weierstrass form over a finite field.

Points are affine pairs (x, y) of field elements; the point at infinity is
None.  A Curve is generic over its coefficient field (PrimeField or ExtField),
so the same group law serves base-field and extension-field computations.

Besides the group law this module provides the slope functions u_{A,B}, the
three-point slope Gamma, the odd half-theta function attached to a 2-torsion
point, degree-2 Velu isogenies, point order computation (baby-step/giant-step
in the Hasse interval), and the random search for a curve with a rational
point of 2-power order.
"""

from __future__ import annotations

import math
import random
from typing import Optional, Tuple

from .fields import ExtField, PrimeField

Point = Optional[Tuple[object, object]]  # None is the point at infinity


class PoleError(ArithmeticError):
    """Raised when a slope function is evaluated at one of its poles."""


class Curve:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 over a field K."""

    def __init__(self, K, a1, a2, a3, a4, a6):
        self.K = K
        e = K.embed
        self.a1, self.a2, self.a3 = e(a1), e(a2), e(a3)
        self.a4, self.a6 = e(a4), e(a6)
        self._compute_b_invariants()
        if K.is_zero(self.disc):
            raise ValueError("curve is singular (discriminant zero)")

    def _compute_b_invariants(self):
        K = self.K
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        two = K.embed(2)
        self.b2 = K.add(K.mul(a1, a1), K.mul(K.embed(4), a2))
        self.b4 = K.add(K.mul(a1, a3), K.mul(two, a4))
        self.b6 = K.add(K.mul(a3, a3), K.mul(K.embed(4), a6))
        b8 = K.sub(
            K.add(
                K.add(K.mul(K.mul(a1, a1), a6), K.mul(K.mul(K.embed(4), a2), a6)),
                K.mul(a2, K.mul(a3, a3)),
            ),
            K.add(K.mul(a1, K.mul(a3, a4)), K.mul(a4, a4)),
        )
        self.b8 = b8
        b2, b4, b6 = self.b2, self.b4, self.b6
        t1 = K.neg(K.mul(K.mul(b2, b2), b8))
        t2 = K.neg(K.mul(K.embed(8), K.mul(b4, K.mul(b4, b4))))
        t3 = K.neg(K.mul(K.embed(27), K.mul(b6, b6)))
        t4 = K.mul(K.embed(9), K.mul(b2, K.mul(b4, b6)))
        self.disc = K.add(K.add(t1, t2), K.add(t3, t4))

    def __repr__(self):
        return f"Curve({self.K!r}, a=({self.a1},{self.a2},{self.a3},{self.a4},{self.a6}))"

    def coeffs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_short(self) -> bool:
        K = self.K
        return K.is_zero(self.a1) and K.is_zero(self.a2) and K.is_zero(self.a3)

    # --- point predicates and group law ----------------------------------
    def is_on(self, P: Point) -> bool:
        if P is None:
            return True
        K = self.K
        x, y = P
        lhs = K.add(K.mul(y, y), K.add(K.mul(self.a1, K.mul(x, y)), K.mul(self.a3, y)))
        rhs = K.add(
            K.mul(x, K.mul(x, x)),
            K.add(K.mul(self.a2, K.mul(x, x)), K.add(K.mul(self.a4, x), self.a6)),
        )
        return lhs == rhs

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        K = self.K
        x, y = P
        return (x, K.neg(K.add(y, K.add(K.mul(self.a1, x), self.a3))))

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        K = self.K
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2 and y1 != y2:
            return None
        if P == Q:
            den = K.add(K.add(y1, y1), K.add(K.mul(self.a1, x1), self.a3))
            if K.is_zero(den):
                return None  # 2-torsion
            num = K.add(
                K.add(K.mul(K.embed(3), K.mul(x1, x1)), K.mul(K.add(self.a2, self.a2), x1)),
                K.sub(self.a4, K.mul(self.a1, y1)),
            )
            lam = K.div(num, den)
        else:
            lam = K.div(K.sub(y2, y1), K.sub(x2, x1))
        x3 = K.sub(
            K.sub(K.add(K.mul(lam, lam), K.mul(self.a1, lam)), self.a2), K.add(x1, x2)
        )
        y3 = K.sub(
            K.mul(lam, K.sub(x1, x3)), K.add(y1, K.add(K.mul(self.a1, x3), self.a3))
        )
        return (x3, y3)

    def sub(self, P: Point, Q: Point) -> Point:
        return self.add(P, self.neg(Q))

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R: Point = None
        while n > 0:
            if n & 1:
                R = self.add(R, P)
            P = self.add(P, P)
            n >>= 1
        return R

    # --- slope functions -------------------------------------------------
    def chord_slope(self, P: Point, Q: Point):
        """Slope of the line through P and Q (tangent if P == Q).

        Raises PoleError if the line is vertical or a point is at infinity.
        """
        if P is None or Q is None:
            raise PoleError("slope through the point at infinity")
        K = self.K
        x1, y1 = P
        x2, y2 = Q
        if P == Q:
            den = K.add(K.add(y1, y1), K.add(K.mul(self.a1, x1), self.a3))
            if K.is_zero(den):
                raise PoleError("vertical tangent")
            num = K.add(
                K.add(K.mul(K.embed(3), K.mul(x1, x1)), K.mul(K.add(self.a2, self.a2), x1)),
                K.sub(self.a4, K.mul(self.a1, y1)),
            )
            return K.div(num, den)
        if x1 == x2:
            raise PoleError("vertical chord")
        return K.div(K.sub(y2, y1), K.sub(x2, x1))

    def u_func(self, A: Point, B: Point, P: Point):
        """u_{A,B}(P): slope of the line through P-A and A-B.

        Degree-2 function with poles exactly at P in {A, B}; requires A != B.
        """
        if A == B:
            raise ValueError("u_{A,B} requires A != B")
        PA = self.sub(P, A)
        AB = self.sub(A, B)
        if PA is None:
            raise PoleError("u_{A,B} has a pole at P = A")
        try:
            return self.chord_slope(PA, AB)
        except PoleError:
            raise PoleError("u_{A,B} has a pole at P = B")

    def gamma(self, A: Point, B: Point, C: Point):
        """Gamma(A,B,C) = u_{A,B}(C), symmetric in its three arguments."""
        for (X, Y, Z) in ((A, B, C), (B, C, A), (C, A, B)):
            if X != Y and Z != X and Z != Y:
                return self.u_func(X, Y, Z)
        raise ValueError("Gamma needs at least two distinct points, none repeated twice")

    def theta(self, T: Point, P: Point):
        """theta(P) = u_{O,T}(P) + a1/2 for a 2-torsion point T.

        Odd with respect to translation by T: theta(P+T) = -theta(P).
        Poles at P in {O, T}; zeros at the two halves of T outside <T>.
        """
        if T is None or self.add(T, T) is not None:
            raise ValueError("theta requires a 2-torsion point T")
        K = self.K
        s = self.u_func(None, T, P)
        return K.add(s, K.div(self.a1, K.embed(2)))

    # --- two-torsion -----------------------------------------------------
    def two_torsion_quadratic(self, T: Point):
        """Coefficients (c1, c0) with x^2 + c1 x + c0 vanishing on the other
        two-torsion x-coordinates, given the known 2-torsion point T.

        Obtained by deflating 4x^3 + b2 x^2 + 2 b4 x + b6 by (x - x(T)).
        """
        K = self.K
        xT = T[0]
        four_inv = K.inv(K.embed(4))
        # monic cubic x^3 + (b2/4) x^2 + (b4/2) x + b6/4
        c2 = K.mul(self.b2, four_inv)
        c1 = K.div(self.b4, K.embed(2))
        c0 = K.mul(self.b6, four_inv)
        q1 = K.add(c2, xT)
        q0 = K.add(c1, K.mul(xT, q1))
        # remainder must vanish
        assert K.is_zero(K.add(c0, K.mul(xT, q0))), "x(T) is not a root of the 2-division cubic"
        return (q1, q0)

    def two_torsion_y(self, x):
        """y-coordinate of the 2-torsion point with the given x."""
        K = self.K
        return K.neg(K.div(K.add(K.mul(self.a1, x), self.a3), K.embed(2)))

    # --- field extension -------------------------------------------------
    def base_extend(self, K2) -> "Curve":
        """The same curve viewed over an extension field K2 of K."""
        e = K2.embed
        return Curve(K2, e(self.a1), e(self.a2), e(self.a3), e(self.a4), e(self.a6))

    def lift_point(self, K2, P: Point) -> Point:
        if P is None:
            return None
        return (K2.embed(P[0]), K2.embed(P[1]))


class Isogeny2:
    """Degree-2 Velu isogeny E -> E/<T> with kernel generated by 2-torsion T."""

    def __init__(self, E: Curve, T: Point):
        if T is None or E.add(T, T) is not None:
            raise ValueError("kernel generator must be a nontrivial 2-torsion point")
        if not E.is_on(T):
            raise ValueError("kernel generator is not on the curve")
        K = E.K
        xT, yT = T
        a1, a2, a3, a4, a6 = E.coeffs()
        w4 = K.sub(
            K.add(K.mul(K.embed(3), K.mul(xT, xT)), K.mul(K.add(a2, a2), xT)),
            K.sub(K.mul(a1, yT), a4),
        )
        # w6 = 7 x^3 + (2 a2 + b2) x^2 + (a4 + 2 b4 - a1 y) x + b6
        t3 = K.mul(K.embed(7), K.mul(xT, K.mul(xT, xT)))
        t2 = K.mul(K.add(K.add(a2, a2), E.b2), K.mul(xT, xT))
        t1 = K.mul(K.sub(K.add(a4, K.add(E.b4, E.b4)), K.mul(a1, yT)), xT)
        w6 = K.add(K.add(t3, t2), K.add(t1, E.b6))
        A4 = K.sub(a4, K.mul(K.embed(5), w4))
        A6 = K.sub(K.sub(a6, K.mul(E.b2, w4)), K.mul(K.embed(7), w6))
        self.domain = E
        self.T = T
        self.w4, self.w6 = w4, w6
        self.codomain = Curve(K, a1, a2, a3, A4, A6)

    def map(self, P: Point) -> Point:
        """Image of P: (x(P) + x(P+T) - x(T), y(P) + y(P+T) - y(T))."""
        E, K, T = self.domain, self.domain.K, self.T
        if P is None or P == T:
            return None
        PT = E.add(P, T)
        x = K.sub(K.add(P[0], PT[0]), T[0])
        y = K.sub(K.add(P[1], PT[1]), T[1])
        return (x, y)

    def map_lifted(self, E_ext: Curve, T_ext: Point, P: Point) -> Point:
        """Image of an extension-field point P, using the lifted curve."""
        K = E_ext.K
        if P is None or P == T_ext:
            return None
        PT = E_ext.add(P, T_ext)
        x = K.sub(K.add(P[0], PT[0]), T_ext[0])
        y = K.sub(K.add(P[1], PT[1]), T_ext[1])
        return (x, y)


# ---------------------------------------------------------------------------
# Point orders and curve search
# ---------------------------------------------------------------------------

def random_point(E: Curve, rng: random.Random) -> Point:
    """A uniformly-ish random affine point on a short-Weierstrass curve."""
    K = E.K
    if not E.is_short():
        raise ValueError("random_point requires a short Weierstrass model")
    while True:
        x = K.rand(rng)
        rhs = K.add(K.mul(x, K.mul(x, x)), K.add(K.mul(E.a4, x), E.a6))
        if not K.is_square(rhs):
            continue
        y = K.sqrt(rhs)
        if rng.randrange(2):
            y = K.neg(y)
        if K.is_zero(y) and K.is_zero(rhs):
            pass  # 2-torsion point; fine
        return (x, y)


def _factorize(n: int):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def point_order(E: Curve, P: Point) -> int:
    """Exact order of P via BSGS over the Hasse interval (O(p^(1/4)))."""
    if P is None:
        return 1
    p = E.K.order
    s = math.isqrt(p) + 1
    lo = p + 1 - 2 * s
    width = 4 * s + 1
    m = math.isqrt(width) + 1
    # baby steps: j*P for j in [0, m)
    table = {}
    Q: Point = None
    multiple = None
    for j in range(m):
        if Q is None and j > 0:
            multiple = j
            break
        if Q is not None:
            table.setdefault(Q, j)
        Q = E.add(Q, P)
    if multiple is None:
        S = E.neg(E.mul(lo, P))  # want k*P = S with k in [0, width)
        G = E.mul(m, P)
        R: Point = None
        for i in range(width // m + 2):
            # R = i*m*P ; check S - R in table  <=>  (i*m + j)*P = S
            D = E.sub(S, R)
            if D is None:
                multiple = lo + i * m
                break
            j = table.get(D)
            if j is not None:
                multiple = lo + i * m + j
                break
            R = E.add(R, G)
        else:
            raise RuntimeError("BSGS failed to find the point order")
    if multiple == 0:
        raise RuntimeError("BSGS found trivial multiple")
    # strip primes to get the exact order
    n = multiple
    for q, e in _factorize(multiple).items():
        for _ in range(e):
            if E.mul(n // q, P) is None:
                n //= q
            else:
                break
    assert E.mul(n, P) is None
    return n


def find_torsion_curve(p: int, delta: int, seed: int = 0, max_tries: int = 200000):
    """Search for (E, t, R): short Weierstrass E/F_p with a point t of order
    2^delta and an auxiliary rational point R with (2^delta) R != O.

    Raises ValueError if the Hasse interval cannot contain a multiple of
    2^delta, and RuntimeError if the random search exhausts max_tries.
    """
    d = 1 << delta
    if 4 * math.isqrt(p) + 2 < d:
        raise ValueError(
            f"p={p} too small: Hasse interval narrower than 2^{delta}; "
            f"need roughly p >= {d * d // 16}"
        )
    K = PrimeField(p)
    rng = random.Random(seed)
    for _ in range(max_tries):
        a4, a6 = K.rand(rng), K.rand(rng)
        try:
            E = Curve(K, 0, 0, 0, a4, a6)
        except ValueError:
            continue
        P = random_point(E, rng)
        try:
            n = point_order(E, P)
        except RuntimeError:
            continue
        if n % d != 0:
            continue
        t = E.mul(n // d, P)
        assert point_order(E, t) == d
        # auxiliary point outside <t> (equivalently with d*R != O)
        for _ in range(64):
            R = random_point(E, rng)
            if E.mul(d, R) is not None:
                return E, t, R
    raise RuntimeError(
        f"no curve with a point of order 2^{delta} found over F_{p} "
        f"after {max_tries} tries"
    )
