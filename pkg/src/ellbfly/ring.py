"""Multiplication in the residue ring at a coset B = b + <t>, and fast
normal bases for degree-2^delta extensions of F_q.

The residue ring R_B = L(<t>) mod B has the basis Theta with theta_l = u_l
mod B.  Products are computed with six butterflies (Chudnovsky-style): the
double-pole part C = sum (f_l - f_{l-1})(g_l - g_{l-1}) x_l of the product is
reduced modulo both B and the rational evaluation coset R + <t>, and the
remaining simple-pole part D is recovered by evaluation/interpolation at
R + <t>.  When b = R the law degenerates to pointwise multiplication of
values (evaluate, multiply, interpolate).

Normal bases: for a degree-d extension of F_q (d = 2^delta, 4d^4 <= q),
  * if v_2(q - 1) >= delta + 1 (Kummer case) the basis is the Frobenius orbit
    of theta = 1 + Y + ... + Y^(d-1) in F_q[Y]/(Y^d - a), and coordinate
    changes to the power basis are order-d NTTs;
  * otherwise (elliptic case) B is chosen Galois-stable and irreducible with
    Frob(b) = b + t, so Theta is the Frobenius orbit of theta_0 and the
    Frobenius acts on coordinates as a cyclic shift.

The elliptic coset point b is found by pulling a random rational point of
E/<t> back through the chain of delta two-isogenies (each fiber is a
quadratic; all the square roots exist in F_{q^d}), then adjusting t by the
odd multiplier k with Frob(b) = b + k t.
"""

from __future__ import annotations

import random
from typing import List, Sequence

from .bases import BasisCtx
from .curves import Curve, Isogeny2, Point, find_torsion_curve, random_point
from .fields import ExtField, PrimeField, find_irreducible
from .ntt import NttCtx
from .tower import Tower, build_tower
from .butterfly import (
    butterfly_evaluate,
    butterfly_interpolate,
    butterfly_reduce,
)


class RingCtx:
    """Multiplication in R_B, with evaluation support on the rational coset
    of tower_R.  tower_b carries the reduction constants for B itself."""

    def __init__(self, tower_b: Tower, tower_R: Tower):
        if tower_b.base_field is not tower_R.base_field:
            raise ValueError("towers must share the base field")
        if tower_b.delta != tower_R.delta:
            raise ValueError("towers must have the same height")
        Eb, ER = tower_b.levels[tower_b.delta].E, tower_R.levels[tower_R.delta].E
        if Eb.coeffs() != ER.coeffs() or tower_b.levels[tower_b.delta].t != tower_R.levels[tower_R.delta].t:
            raise ValueError("towers must be built from the same (E, t)")
        if tower_R.lift is not None:
            raise ValueError("the evaluation coset R must be rational")
        self.tower_b = tower_b
        self.tower_R = tower_R
        self.K = tower_R.base_field
        self.d = tower_R.d
        self.diagonal = tower_b is tower_R

    def one(self) -> List:
        """Theta-coordinates of 1 (the u_l sum to the constant 1)."""
        return [self.K.one] * self.d

    def multiply(self, f: Sequence, g: Sequence, general: bool = False) -> List:
        """Theta-coordinates of (sum f_l theta_l)(sum g_l theta_l)."""
        K, d = self.K, self.d
        if len(f) != d or len(g) != d:
            raise ValueError("coordinate length mismatch")
        if self.diagonal and not general:
            alpha = butterfly_evaluate(self.tower_R, f)
            beta = butterfly_evaluate(self.tower_R, g)
            return butterfly_interpolate(
                self.tower_R, [K.mul(a, c) for a, c in zip(alpha, beta)]
            )
        alpha = butterfly_evaluate(self.tower_R, f)
        beta = butterfly_evaluate(self.tower_R, g)
        H = [
            K.mul(K.sub(f[l], f[l - 1]), K.sub(g[l], g[l - 1]))
            for l in range(d)
        ]
        h = butterfly_reduce(self.tower_R, H)
        gamma = butterfly_evaluate(self.tower_R, h)
        delta = [K.sub(K.mul(a, c), gm) for a, c, gm in zip(alpha, beta, gamma)]
        kvec = butterfly_interpolate(self.tower_R, delta)
        hB = butterfly_reduce(self.tower_b, H)
        return [K.add(x, y) for x, y in zip(hB, kvec)]


# ---------------------------------------------------------------------------
# Normal bases
# ---------------------------------------------------------------------------

def _two_valuation(n: int) -> int:
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


class KummerNormalBasis:
    """Normal basis of F_q[Y]/(Y^d - a), Theta_j = Frob^j(1 + Y + ... + Y^(d-1)).

    Theta <-> power-basis coordinate changes are order-d NTTs with root
    zeta = a^((q-1)/d); products in the power basis use a length-2d NTT."""

    kind = "kummer"

    def __init__(self, K: PrimeField, delta: int):
        q = K.p
        d = 1 << delta
        nu = _two_valuation(q - 1)
        if nu < delta + 1:
            raise ValueError(f"q = {q} has 2-valuation {nu} < delta+1; use the elliptic case")
        self.K, self.q, self.d, self.delta = K, q, d, delta
        # a of exact order 2^nu (a generator of the 2-Sylow of K*)
        for g in range(2, q):
            a = pow(g, (q - 1) >> nu, q)
            if pow(a, 1 << (nu - 1), q) != 1:
                break
        else:
            raise RuntimeError("no 2-Sylow generator found")
        self.a = a
        self.zeta = pow(a, (q - 1) // d, q)  # primitive d-th root of unity
        self.ntt = NttCtx(K, d, omega=self.zeta)
        w2d = pow(a, 1 << (nu - delta - 1), q)  # order 2d
        self.ntt2 = NttCtx(K, 2 * d, omega=w2d)
        # the extension itself, for brute-force cross-checks
        self.ext = ExtField(K, [(-a) % q] + [0] * (d - 1) + [1])

    def theta_to_power(self, c: Sequence) -> List:
        """Power-basis coordinates: m_k = sum_j c_j zeta^(jk)."""
        return self.ntt.forward(c)

    def power_to_theta(self, m: Sequence) -> List:
        return self.ntt.inverse(m)

    def one(self) -> List:
        return self.power_to_theta([self.K.one] + [self.K.zero] * (self.d - 1))

    def multiply(self, c1: Sequence, c2: Sequence) -> List:
        K, d = self.K, self.d
        m1 = self.theta_to_power(c1) + [K.zero] * d
        m2 = self.theta_to_power(c2) + [K.zero] * d
        h = self.ntt2.convolve(m1, m2)
        folded = [K.add(h[k], K.mul(K.embed(self.a), h[k + d])) for k in range(d)]
        return self.power_to_theta(folded)

    def frobenius(self, c: Sequence) -> List:
        """Coordinates of x^q: Theta_j -> Theta_{j+1}, a cyclic shift."""
        return [c[-1]] + list(c[:-1])

    # brute-force references
    def oracle_multiply(self, c1: Sequence, c2: Sequence) -> List:
        m1 = tuple(self.theta_to_power(c1))
        m2 = tuple(self.theta_to_power(c2))
        return self.power_to_theta(list(self.ext.mul(m1, m2)))

    def oracle_frobenius(self, c: Sequence) -> List:
        m = tuple(self.theta_to_power(c))
        return self.power_to_theta(list(self.ext.frob(m)))


class EllipticNormalBasis:
    """Normal basis from an irreducible Galois-stable coset B = b + <t> on an
    elliptic curve, with Frob(b) = b + t; Theta_l = u_l mod B."""

    kind = "elliptic"

    def __init__(self, E: Curve, t: Point, b: Point, R: Point, delta: int,
                 ext: ExtField):
        self.E, self.t, self.b, self.R = E, t, b, R
        self.delta = delta
        self.d = 1 << delta
        self.K = E.K
        self.q = E.K.p
        self.ext = ext
        self.tower_b = build_tower(E, t, b, delta, coset_field=ext)
        self.tower_R = build_tower(E, t, R, delta)
        self.ring = RingCtx(self.tower_b, self.tower_R)
        self._ext_basis = None

    def one(self) -> List:
        return self.ring.one()

    def multiply(self, c1: Sequence, c2: Sequence) -> List:
        return self.ring.multiply(c1, c2)

    def frobenius(self, c: Sequence) -> List:
        """Coordinates of x^q.

        Frob(b) = b + t pulls u_l back to u_{l-1}, so the coordinate vector
        shifts cyclically: (c_0, ..., c_{d-1}) -> (c_1, ..., c_{d-1}, c_0).
        """
        return list(c[1:]) + [c[0]]

    # --- the explicit isomorphism with F_{q^d}, for cross-checks ---------
    def _ext_basis_ctx(self) -> BasisCtx:
        if self._ext_basis is None:
            Ex = self.E.base_extend(self.ext)
            tx = self.E.lift_point(self.ext, self.t)
            self._ext_basis = BasisCtx(Ex, tx, self.d)
        return self._ext_basis

    def to_ext(self, c: Sequence):
        """The image of sum c_l theta_l under the residue map L -> F_{q^d},
        i.e. the value sum c_l u_l(b) computed in the extension."""
        ctx = self._ext_basis_ctx()
        F = self.ext
        acc = F.zero
        for l, cl in enumerate(c):
            acc = F.add(acc, F.mul(F.embed(cl), ctx.u_val(l, self.b)))
        return acc


def find_normal_coset_point(E: Curve, t: Point, delta: int, ext: ExtField,
                            rng: random.Random, max_tries: int = 256):
    """A point b over F_{q^d} with Frob(b) = b + k t for some odd k.

    Pulls a random rational point of C = E/<t> back through the chain of
    delta two-isogenies; every fiber is a quadratic whose discriminant lives
    in a proper subfield, so the square roots exist in F_{q^d}.  Returns
    (b, k); the caller should replace t by k t.
    """
    if not E.is_short():
        raise ValueError("short Weierstrass model required")
    d = 1 << delta
    # quotient chain E -> E/<t>
    steps = []
    G, tt = E, t
    for j in range(delta):
        T = G.mul(1 << (delta - j - 1), tt)
        iso = Isogeny2(G, T)
        steps.append((G.a4, T[0]))
        G, tt = iso.codomain, iso.map(tt)
    C = G
    F = ext
    K = E.K
    Ex = E.base_extend(F)
    tx = E.lift_point(F, t)
    inv2 = F.inv(F.embed(2))
    for _ in range(max_tries):
        c = random_point(C, rng)
        x = F.embed(c[0])
        ok = True
        for a4, x0 in reversed(steps):
            # fiber of x' under x -> x + w4/(x - x0):  roots of
            # x^2 - (x0 + x')x + (w4 + x0 x') with w4 = 3 x0^2 + a4
            w4 = F.embed((3 * x0 * x0 + a4) % K.p)
            x0e = F.embed(x0)
            s = F.add(x0e, x)
            prod = F.add(w4, F.mul(x0e, x))
            disc = F.sub(F.mul(s, s), F.mul(F.embed(4), prod))
            try:
                r = F.sqrt(disc)
            except ValueError:
                ok = False
                break
            x = F.mul(F.add(s, r), inv2)
        if not ok:
            continue
        rhs = F.add(F.mul(x, F.mul(x, x)), F.add(F.mul(Ex.a4, x), Ex.a6))
        if not F.is_square(rhs):
            continue
        b = (x, F.sqrt(rhs))
        assert Ex.is_on(b)
        if Ex.mul(d, b) is None:
            continue
        frob_b = (F.frob(b[0]), F.frob(b[1]))
        D = Ex.sub(frob_b, b)
        P, k = None, None
        for j in range(d):
            if D == P or (D is None and P is None):
                k = j
                break
            P = Ex.add(P, tx)
        if k is None or k % 2 == 0:
            continue
        return b, k
    raise RuntimeError("no suitable coset point found (increase max_tries)")


def build_normal_basis_field(q: int, delta: int, seed: int = 0,
                             allow_small_q: bool = False):
    """A normal basis of F_{q^d}/F_q (d = 2^delta) with O(d log d) products.

    Dispatches on nu = v_2(q-1): the Kummer construction when nu >= delta+1,
    the elliptic-coset construction otherwise.  The hypothesis 4d^4 <= q
    guarantees the elliptic construction exists; pass allow_small_q to try
    anyway with a smaller q.
    """
    d = 1 << delta
    if 4 * d ** 4 > q and not allow_small_q:
        raise ValueError(f"need 4*d^4 = {4 * d ** 4} <= q = {q} (or allow_small_q)")
    K = PrimeField(q)
    if _two_valuation(q - 1) >= delta + 1:
        return KummerNormalBasis(K, delta)
    E, t, R = find_torsion_curve(q, delta, seed=seed)
    ext = ExtField(K, find_irreducible(q, d))
    rng = random.Random(seed ^ 0x5EED)
    b, k = find_normal_coset_point(E, t, delta, ext, rng)
    t_star = E.mul(k, t)
    return EllipticNormalBasis(E, t_star, b, R, delta, ext)
