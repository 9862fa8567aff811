"""Towers of 2-isogenies and the precomputed butterfly constants.

A Tower is built from (E, t, b) where t has order d = 2^delta and the coset
B = b + <t> avoids <t> (equivalently d*b != O).  Level k (1 <= k <= delta)
lives on the curve E_k obtained from E = E_delta by quotienting delta - k
times by the 2-torsion point halfway along the remaining cyclic group; its
data describes one butterfly layer of size 2^k.

The per-level constants are the ones consumed by butterfly.py:

  closed forms:  b_l = -theta(lt), c_l = theta(lt)  (b_0 = c_0 = 1),
                 e_l = x(lt) - x(lt+T), f_0 = a1/2, f_l = theta(lt),
                 i_l = 1/theta(lt), t_l = theta(b+lt),
                 x_l = x'(b'+lt') - x'(U'), v_l = v'_l(U'),
                 m = b*v, n_l = m_l + c_{l+1} v_{l+1}, p_l, p_*
  derived:       dvec  (the corrector xi_b, via one size-d/2 reduction),
                 hvec  (reduction of y' mod B', via one size-d/2 interpolation),
                 lvec  (the function (1 - xi_b o phi)/theta in the v-basis,
                        via one size-d interpolation)

so the whole precompute is itself O(d log^2 d).

The coset base point b may live in an extension field (normal-basis towers);
every constant that provably descends to the base field is stored there, while
t/x (the only coset-dependent evaluation constants) stay in the coset field.

Sub-towers come for free: a tower of height delta serves all sizes 2^k for
k <= delta via the optional level argument of the butterflies.
"""

from __future__ import annotations

import hashlib
import json
from typing import List, Optional

from .bases import BasisCtx, u_to_v, v_to_u
from .curves import Curve, Isogeny2, Point
from .fields import ExtField, PrimeField


class LevelCtx:
    """Constants for one butterfly layer; see the module docstring."""

    __slots__ = (
        "k", "d", "dp", "E", "t", "T", "xT", "Eq", "tq", "Uprime", "xU", "yU",
        "b", "bq", "half", "avec", "qavec", "bvec", "cvec", "binv", "wvec",
        "bcinv", "tvec", "tinv", "xvec", "vvec", "mvec", "nvec", "dvec",
        "evec", "fvec", "ivec", "pvec", "pstar", "hvec", "lvec",
    )


class Tower:
    """Precomputed butterfly constants for (E, t, b) with t of order 2^delta."""

    def __init__(self, base_field, coset_field, delta: int):
        self.base_field = base_field
        self.coset_field = coset_field
        self.lift = None if coset_field is base_field else coset_field.embed
        self.delta = delta
        self.levels: List[Optional[LevelCtx]] = [None] * (delta + 1)
        self.E0: Optional[Curve] = None
        self.b0: Optional[Point] = None
        self.x_b0 = None
        self._basis_cache = {}

    # --- convenient accessors -------------------------------------------
    @property
    def d(self) -> int:
        return 1 << self.delta

    def curve_at(self, k: int) -> Curve:
        return self.levels[k].E if k >= 1 else self.E0

    def t_at(self, k: int) -> Point:
        return self.levels[k].t if k >= 1 else None

    def b_at(self, k: int) -> Point:
        return self.levels[k].b if k >= 1 else self.b0

    def basis_at(self, k: int) -> BasisCtx:
        """A BasisCtx for level k (cached; used by oracles and applications)."""
        if k not in self._basis_cache:
            self._basis_cache[k] = BasisCtx(self.curve_at(k), self.t_at(k), 1 << k)
        return self._basis_cache[k]


def build_tower(E: Curve, t: Point, b: Point, delta: int,
                coset_field=None) -> Tower:
    """Build the butterfly tower for (E, t, b); t must have order 2^delta and
    d*b must be nonzero (B = b + <t> disjoint from <t>).

    If b lies in an extension, pass the extension as coset_field; E and t stay
    over the base field and all descending constants are stored there.
    """
    K = E.K
    F = coset_field if coset_field is not None else K
    d = 1 << delta
    tw = Tower(K, F, delta)
    lift = tw.lift

    def liftE(curve: Curve) -> Curve:
        return curve.base_extend(F) if lift else curve

    def liftP(P: Point) -> Point:
        if not lift or P is None:
            return P
        return (F.embed(P[0]), F.embed(P[1]))

    # --- geometry chain, top-down ---------------------------------------
    Ek, tk, bk = E, t, b
    if E.mul(d, t) is not None or (d >= 2 and E.mul(d // 2, t) is None):
        raise ValueError(f"t must have exact order 2^{delta}")
    for k in range(delta, 0, -1):
        L = LevelCtx()
        L.k, L.d, L.dp = k, 1 << k, 1 << (k - 1)
        L.E, L.t, L.b = Ek, tk, bk
        EkF = liftE(Ek)
        if EkF.mul(L.d, bk) is None:
            raise ValueError(f"coset base point hits <t> at level {k} (d*b = O)")
        T = Ek.mul(L.dp, tk)
        L.T, L.xT = T, T[0]
        iso = Isogeny2(Ek, T)
        L.Eq = iso.codomain
        L.tq = iso.map(tk)
        L.Uprime = _find_u_prime(Ek, T, iso)
        L.xU, L.yU = L.Uprime
        if lift:
            bq = iso.map_lifted(EkF, liftP(T), bk)
        else:
            bq = iso.map(bk)
        L.bq = bq
        tw.levels[k] = L
        Ek, tk, bk = L.Eq, L.tq, bq
    tw.E0, tw.b0 = Ek, bk
    x0 = bk[0]
    tw.x_b0 = F.descend(x0) if lift else x0

    # --- constants, bottom-up -------------------------------------------
    for k in range(1, delta + 1):
        _fill_level(tw, k, liftE, liftP)
    return tw


def _find_u_prime(E: Curve, T: Point, iso: Isogeny2) -> Point:
    """U' = phi(U) for a 2-torsion point U of E outside <T>.

    Both candidates U and U+T have the same image, so U' is canonical.  When
    the other 2-torsion points are irrational, U is taken over the quadratic
    extension and U' descends back to the base field.
    """
    K = E.K
    q1, q0 = E.two_torsion_quadratic(T)
    disc = K.sub(K.mul(q1, q1), K.mul(K.embed(4), q0))
    if K.is_square(disc):
        s = K.sqrt(disc)
        x = K.div(K.sub(s, q1), K.embed(2))
        U = (x, E.two_torsion_y(x))
        Up = iso.map(U)
    else:
        if not isinstance(K, PrimeField):
            raise NotImplementedError("irrational 2-torsion over an extension base")
        K2 = ExtField(K, [(-disc) % K.p, 0, 1])  # X^2 - disc
        E2 = E.base_extend(K2)
        s = K2.gen  # a square root of disc
        x = K2.div(K2.sub(s, K2.embed(q1)), K2.embed(2))
        U = (x, E2.two_torsion_y(x))
        T2 = (K2.embed(T[0]), K2.embed(T[1]))
        Up2 = iso.map_lifted(E2, T2, U)
        Up = (K2.descend(Up2[0]), K2.descend(Up2[1]))
    assert iso.codomain.is_on(Up) and iso.codomain.add(Up, Up) is None
    return Up


def _walk(curve: Curve, start: Point, step: Point, n: int) -> List[Point]:
    out = [start]
    P = start
    for _ in range(n - 1):
        P = curve.add(P, step)
        out.append(P)
    return out


def _fill_level(tw: Tower, k: int, liftE, liftP) -> None:
    from .butterfly import butterfly_interpolate, butterfly_reduce, solve_row

    K = tw.base_field
    F = tw.coset_field
    lift = tw.lift
    L = tw.levels[k]
    dp = L.dp
    E, t, T = L.E, L.t, L.T

    L.half = K.inv(K.embed(2))
    basis = tw.basis_at(k)
    L.avec = basis.avec
    L.qavec = tw.basis_at(k - 1).avec if k >= 2 else [K.one]
    mults = basis.mults  # l*t for 0 <= l <= d

    theta_lt = [None] + [E.theta(T, mults[l]) for l in range(1, dp)]
    L.bvec = [K.one] + [K.neg(theta_lt[l]) for l in range(1, dp)]
    L.cvec = [K.one] + [theta_lt[l] for l in range(1, dp)]
    L.binv = [K.inv(x) for x in L.bvec]
    if dp >= 2:
        L.wvec = solve_row(K, L.bvec, L.cvec)
        L.bcinv = None
    else:
        L.wvec = None
        L.bcinv = K.inv(K.add(L.bvec[0], L.cvec[0]))

    # quotient-side geometry walks
    qb = tw.basis_at(k - 1)
    Uwalk = _walk(L.Eq, L.Uprime, L.tq, dp) if dp >= 1 else []
    L.vvec = [qb.v_val(l, L.Uprime) for l in range(dp)]
    L.mvec = [K.mul(L.bvec[l], L.vvec[l]) for l in range(dp)]
    L.nvec = [
        K.add(L.mvec[l], K.mul(L.cvec[(l + 1) % dp], L.vvec[(l + 1) % dp]))
        for l in range(dp)
    ]

    a1half = K.div(E.a1, K.embed(2))
    L.evec = [K.zero] + [K.sub(mults[l][0], mults[l + dp][0]) for l in range(1, dp)]
    L.fvec = [a1half] + [theta_lt[l] for l in range(1, dp)]
    L.ivec = [K.zero] + [K.inv(theta_lt[l]) for l in range(1, dp)]
    L.pvec = [
        K.add(K.mul(L.evec[l], L.vvec[l]), K.mul(L.fvec[l], Uwalk[l][0]))
        for l in range(dp)
    ]
    L.pstar = K.sub(K.sub(L.pvec[0], K.mul(L.fvec[0], L.xU)), L.yU)

    # coset walks (possibly over the extension)
    EF, TF = liftE(E), liftP(T)
    EqF, tqF = liftE(L.Eq), liftP(L.tq)
    bwalk = _walk(EF, L.b, liftP(t), dp)
    bqwalk = _walk(EqF, L.bq, tqF, dp)
    L.tvec = [EF.theta(TF, P) for P in bwalk]
    L.tinv = [F.inv(x) for x in L.tvec]
    xUF = F.embed(L.xU) if lift else L.xU
    L.xvec = [F.sub(P[0], xUF) for P in bqwalk]

    # dvec: the corrector xi_b = 1 + d_*(x' - x'(U')) + sum d_l (v'_l - v'_l(U'))
    # vanishing on B'.  Reduce x' mod B' at the quotient level, then normalise.
    e0 = [K.one] + [K.zero] * (dp - 1)
    rv = u_to_v(K, L.qavec, butterfly_reduce(tw, e0, k=k - 1))
    acc = K.zero
    for l in range(dp):
        acc = K.add(acc, K.mul(rv[l], L.vvec[l]))
    dstar = K.inv(K.sub(L.xU, acc))
    L.dvec = [dstar] + [K.neg(K.mul(dstar, rv[l])) for l in range(1, dp)]

    # hvec: v'-coordinates of the reduction of y' modulo B'
    ys = [P[1] for P in bqwalk]
    hu = butterfly_interpolate(tw, ys, k=k - 1)
    hv = u_to_v(F, [F.embed(a) for a in L.qavec], hu) if lift else u_to_v(K, L.qavec, hu)
    L.hvec = [F.descend(x) for x in hv] if lift else hv

    # lvec: v-coordinates (size d) of (1 - xi_b o phi) / theta, interpolated
    # from its values 1/theta(b+lt) on B itself (xi_b o phi vanishes on B).
    w = list(L.tinv) + [F.neg(x) for x in L.tinv]
    lu = butterfly_interpolate(tw, w, k=k)
    lv = u_to_v(F, [F.embed(a) for a in L.avec], lu) if lift else u_to_v(K, L.avec, lu)
    L.lvec = [F.descend(x) for x in lv] if lift else lv


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_LEVEL_SCALARS = ("xT", "xU", "yU", "half", "pstar", "bcinv")
_LEVEL_VECTORS = ("avec", "qavec", "bvec", "cvec", "binv", "wvec", "vvec",
                  "mvec", "nvec", "dvec", "evec", "fvec", "ivec", "pvec",
                  "hvec", "lvec", "tvec", "tinv", "xvec")


def _enc(x):
    if x is None:
        return None
    if isinstance(x, tuple):
        return list(x)
    return x


def _dec(x):
    if isinstance(x, list):
        return tuple(x)
    return x


def tower_to_dict(tw: Tower) -> dict:
    top = tw.levels[tw.delta]
    E = top.E
    doc = {
        "format": "ellbfly-tower",
        "version": 1,
        "p": tw.base_field.p,
        "ext_modpoly": list(tw.coset_field.modpoly) if tw.lift else None,
        "delta": tw.delta,
        "curve": [_enc(c) for c in E.coeffs()],
        "t": [_enc(top.t[0]), _enc(top.t[1])],
        "b": [_enc(top.b[0]), _enc(top.b[1])],
        "x_b0": _enc(tw.x_b0),
        "levels": [],
    }
    for k in range(1, tw.delta + 1):
        L = tw.levels[k]
        entry = {
            "k": k,
            "curve": [_enc(c) for c in L.E.coeffs()],
            "qcurve": [_enc(c) for c in L.Eq.coeffs()],
            "t": [_enc(L.t[0]), _enc(L.t[1])],
            "tq": [_enc(L.tq[0]), _enc(L.tq[1])] if L.tq is not None else None,
            "T": [_enc(L.T[0]), _enc(L.T[1])],
            "b": [_enc(L.b[0]), _enc(L.b[1])],
            "bq": [_enc(L.bq[0]), _enc(L.bq[1])] if L.bq is not None else None,
            "Uprime": [_enc(L.Uprime[0]), _enc(L.Uprime[1])],
        }
        for name in _LEVEL_SCALARS:
            entry[name] = _enc(getattr(L, name))
        for name in _LEVEL_VECTORS:
            v = getattr(L, name)
            entry[name] = None if v is None else [_enc(x) for x in v]
        doc["levels"].append(entry)
    doc["digest"] = tower_digest(doc)
    return doc


def tower_digest(doc: dict) -> str:
    body = {key: val for key, val in doc.items() if key != "digest"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def tower_from_dict(doc: dict) -> Tower:
    if doc.get("format") != "ellbfly-tower":
        raise ValueError("not a tower file")
    if doc.get("digest") != tower_digest(doc):
        raise ValueError("tower file digest mismatch (corrupted or edited)")
    K = PrimeField(doc["p"])
    F = ExtField(K, doc["ext_modpoly"]) if doc["ext_modpoly"] else K
    tw = Tower(K, F, doc["delta"])
    for entry in doc["levels"]:
        L = LevelCtx()
        k = entry["k"]
        L.k, L.d, L.dp = k, 1 << k, 1 << (k - 1)
        L.E = Curve(K, *[_dec(c) for c in entry["curve"]])
        L.Eq = Curve(K, *[_dec(c) for c in entry["qcurve"]])
        L.t = (_dec(entry["t"][0]), _dec(entry["t"][1]))
        L.tq = None if entry["tq"] is None else (_dec(entry["tq"][0]), _dec(entry["tq"][1]))
        L.T = (_dec(entry["T"][0]), _dec(entry["T"][1]))
        L.b = (_dec(entry["b"][0]), _dec(entry["b"][1]))
        L.bq = None if entry["bq"] is None else (_dec(entry["bq"][0]), _dec(entry["bq"][1]))
        L.Uprime = (_dec(entry["Uprime"][0]), _dec(entry["Uprime"][1]))
        for name in _LEVEL_SCALARS:
            setattr(L, name, _dec(entry[name]))
        for name in _LEVEL_VECTORS:
            v = entry[name]
            setattr(L, name, None if v is None else [_dec(x) for x in v])
        tw.levels[k] = L
    bottom = tw.levels[1]
    iso = Isogeny2(bottom.E, bottom.T)
    tw.E0 = iso.codomain
    tw.b0 = bottom.bq
    tw.x_b0 = _dec(doc["x_b0"])
    return tw


def save_tower(tw: Tower, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(tower_to_dict(tw), fh)
        fh.write("\n")


def load_tower(path: str) -> Tower:
    with open(path) as fh:
        return tower_from_dict(json.load(fh))
