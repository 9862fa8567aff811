"""The three elliptic butterfly straight-line programs.

Given a tower of precomputed constants (see tower.py) attached to a point t
of order d = 2^delta and a coset B = b + <t>, these run in O(d log d) field
operations:

  * butterfly_evaluate:    u-coordinates  ->  values on B
  * butterfly_interpolate: values on B    ->  u-coordinates
  * butterfly_reduce:      x-combination F = sum F_l x_l  ->  u-coordinates
                           of the reduction of F modulo B

Each level halves the problem through the degree-2 isogeny E -> E/<T>: the
even part of the input descends directly to the quotient, while the odd part
is twisted by the T-odd function theta and rebalanced with the precomputed
bidiagonal/base-change constants.

Cyclic bidiagonal systems (diagonal b, subdiagonal c, corner c_0) are solved
here as well; the tower stores the inverse diagonal and the precomputed last-
row solution vector so the online programs are division-free.
"""

from __future__ import annotations

from typing import List, Sequence

from .bases import u_to_v, v_to_u


# ---------------------------------------------------------------------------
# Cyclic bidiagonal matrices
# ---------------------------------------------------------------------------

def bidiagonal_apply(K, b: Sequence, c: Sequence, s: Sequence) -> List:
    """(M s) for the cyclic bidiagonal M with diagonal b, subdiagonal c and
    corner entry M[0][d-1] = c_0."""
    d = len(b)
    if len(c) != d or len(s) != d:
        raise ValueError("length mismatch")
    if d == 1:
        return [K.mul(K.add(b[0], c[0]), s[0])]
    out = [K.zero] * d
    out[0] = K.add(K.mul(b[0], s[0]), K.mul(c[0], s[d - 1]))
    for l in range(1, d):
        out[l] = K.add(K.mul(b[l], s[l]), K.mul(c[l], s[l - 1]))
    return out


def bidiagonal_det(K, b: Sequence, c: Sequence):
    """det M = prod b - (-1)^d prod c (d >= 2); for d = 1, M = (b_0 + c_0)."""
    d = len(b)
    if d == 1:
        return K.add(b[0], c[0])
    pb, pc = K.one, K.one
    for x in b:
        pb = K.mul(pb, x)
    for x in c:
        pc = K.mul(pc, x)
    if d % 2 == 0:
        return K.sub(pb, pc)
    return K.add(pb, pc)


def solve_row(K, b: Sequence, c: Sequence) -> List:
    """Row vector w with t_{d-1} = <w, s> for the solution of M t = s:
    w_k = det^{-1} (-1)^(d-1-k) (b_0..b_{k-1}) (c_{k+1}..c_{d-1})."""
    d = len(b)
    det = bidiagonal_det(K, b, c)
    detinv = K.inv(det)
    pre = [K.one]
    for l in range(d - 1):
        pre.append(K.mul(pre[-1], b[l]))
    suf = [K.one] * d
    for l in range(d - 2, -1, -1):
        suf[l] = K.mul(suf[l + 1], c[l + 1])
    w = []
    for k in range(d):
        v = K.mul(detinv, K.mul(pre[k], suf[k]))
        w.append(v if (d - 1 - k) % 2 == 0 else K.neg(v))
    return w


def bidiagonal_solve(K, b: Sequence, c: Sequence, s: Sequence) -> List:
    """Solve M t = s.  O(d); raises ZeroDivisionError if M is singular."""
    d = len(b)
    if d == 1:
        return [K.div(s[0], K.add(b[0], c[0]))]
    w = solve_row(K, b, c)
    binv = [K.inv(x) for x in b]
    return _solve_precomp(K, binv, c, w, s)


def _solve_precomp(K, binv: Sequence, c: Sequence, w: Sequence, s: Sequence) -> List:
    d = len(binv)
    tlast = K.zero
    for wk, sk in zip(w, s):
        tlast = K.add(tlast, K.mul(wk, sk))
    t = [K.zero] * d
    t[d - 1] = tlast
    t[0] = K.mul(binv[0], K.sub(s[0], K.mul(c[0], tlast)))
    for l in range(1, d - 1):
        t[l] = K.mul(binv[l], K.sub(s[l], K.mul(c[l], t[l - 1])))
    return t


# ---------------------------------------------------------------------------
# Butterflies
# ---------------------------------------------------------------------------

def _coerce(tw, f: Sequence) -> List:
    F = tw.coset_field
    if tw.lift is None:
        return list(f)
    return [F.embed(x) for x in f]


def butterfly_evaluate(tw, f: Sequence, k: int = None) -> List:
    """Values on the coset b_k + <t_k> of the function with u-coordinates f.

    k selects the tower level (d = 2^k); defaults to the full tower.
    """
    if k is None:
        k = tw.delta
    if len(f) != 1 << k:
        raise ValueError(f"expected {1 << k} coordinates, got {len(f)}")
    return _eval(tw, k, _coerce(tw, f))


def _eval(tw, k: int, f: List) -> List:
    if k == 0:
        return f
    F = tw.coset_field
    L = tw.levels[k]
    dp = L.dp
    lift = tw.lift
    half = F.embed(L.half) if lift else L.half
    fp = [F.mul(F.add(f[l], f[l + dp]), half) for l in range(dp)]
    fm = [F.mul(F.sub(f[l], f[l + dp]), half) for l in range(dp)]
    ap = _eval(tw, k - 1, fp)
    if lift:
        bvec = [F.embed(x) for x in L.bvec]
        cvec = [F.embed(x) for x in L.cvec]
        mvec = [F.embed(x) for x in L.mvec]
        nvec = [F.embed(x) for x in L.nvec]
        qavec = [F.embed(x) for x in L.qavec]
    else:
        bvec, cvec, mvec, nvec, qavec = L.bvec, L.cvec, L.mvec, L.nvec, L.qavec
    r = F.add(F.mul(bvec[0], fm[0]), F.mul(cvec[0], fm[dp - 1]))
    tcorr = F.zero
    if dp > 1:
        tcorr = F.add(
            F.mul(mvec[0], fm[0]),
            F.mul(F.sub(nvec[dp - 1], mvec[dp - 1]), fm[dp - 1]),
        )
        for l in range(dp):
            tcorr = F.sub(tcorr, F.mul(nvec[l], fm[l]))
    s = bidiagonal_apply(F, bvec, cvec, fm)
    s[0] = tcorr
    s = v_to_u(F, qavec, s)
    am = _eval(tw, k - 1, s)
    out = [None] * (2 * dp)
    for l in range(dp):
        v = F.mul(F.add(am[l], F.mul(r, L.xvec[l])), L.tinv[l])
        out[l] = F.add(ap[l], v)
        out[l + dp] = F.sub(ap[l], v)
    return out


def butterfly_interpolate(tw, values: Sequence, k: int = None) -> List:
    """u-coordinates of the unique element of L(<t_k>) with the given values
    on the coset b_k + <t_k>."""
    if k is None:
        k = tw.delta
    if len(values) != 1 << k:
        raise ValueError(f"expected {1 << k} values, got {len(values)}")
    return _interp(tw, k, _coerce(tw, values))


def _interp(tw, k: int, alpha: List) -> List:
    if k == 0:
        return alpha
    F = tw.coset_field
    L = tw.levels[k]
    dp = L.dp
    lift = tw.lift
    half = F.embed(L.half) if lift else L.half
    ap = [F.mul(F.add(alpha[l], alpha[l + dp]), half) for l in range(dp)]
    am = [F.mul(F.sub(alpha[l], alpha[l + dp]), half) for l in range(dp)]
    fp = _interp(tw, k - 1, ap)
    fm = _interp(tw, k - 1, [F.mul(L.tvec[l], am[l]) for l in range(dp)])
    if lift:
        qavec = [F.embed(x) for x in L.qavec]
        vvec = [F.embed(x) for x in L.vvec]
        dvec = [F.embed(x) for x in L.dvec]
        cvec = [F.embed(x) for x in L.cvec]
        binv = [F.embed(x) for x in L.binv]
        wvec = [F.embed(x) for x in L.wvec] if L.wvec is not None else None
        bcinv = F.embed(L.bcinv) if L.bcinv is not None else None
    else:
        qavec, vvec, dvec = L.qavec, L.vvec, L.dvec
        cvec, binv, wvec, bcinv = L.cvec, L.binv, L.wvec, L.bcinv
    fm = u_to_v(F, qavec, fm)
    fstar = F.zero
    for l in range(dp):
        fstar = F.add(fstar, F.mul(vvec[l], fm[l]))
    for l in range(1, dp):
        fm[l] = F.sub(fm[l], F.mul(fstar, dvec[l]))
    fm[0] = F.neg(F.mul(dvec[0], fstar))
    if dp == 1:
        fm = [F.mul(fm[0], bcinv)]
    else:
        fm = _solve_precomp(F, binv, cvec, wvec, fm)
    out = [None] * (2 * dp)
    for l in range(dp):
        out[l] = F.add(fp[l], fm[l])
        out[l + dp] = F.sub(fp[l], fm[l])
    return out


def butterfly_reduce(tw, coeffs: Sequence, k: int = None) -> List:
    """u-coordinates of the reduction modulo the coset b_k + <t_k> of the
    double-pole combination F = sum coeffs[l] x_l.

    Runs entirely over the base field (all reduction constants descend)."""
    if k is None:
        k = tw.delta
    if len(coeffs) != 1 << k:
        raise ValueError(f"expected {1 << k} coefficients, got {len(coeffs)}")
    return _reduce(tw, k, list(coeffs))


def _reduce(tw, k: int, Fc: List) -> List:
    K = tw.base_field
    if k == 0:
        return [K.mul(tw.x_b0, Fc[0])]
    L = tw.levels[k]
    dp = L.dp
    half = L.half
    Fp = [K.mul(K.add(Fc[l], Fc[l + dp]), half) for l in range(dp)]
    Fm = [K.mul(K.sub(Fc[l], Fc[l + dp]), half) for l in range(dp)]
    Fstar = K.zero
    for x in Fp:
        Fstar = K.add(Fstar, x)
    Fstar = K.mul(L.xT, Fstar)
    fp = [K.add(Fstar, x) for x in _reduce(tw, k - 1, Fp)]
    f1 = _reduce(tw, k - 1, [K.mul(L.fvec[l], Fm[l]) for l in range(dp)])
    f1 = u_to_v(K, L.qavec, f1)
    for l in range(dp):
        f1[l] = K.add(f1[l], K.add(K.mul(L.evec[l], Fm[l]), K.mul(Fm[0], L.hvec[l])))
    corr = K.mul(L.pstar, Fm[0])
    for l in range(dp):
        corr = K.sub(corr, K.mul(L.pvec[l], Fm[l]))
    f1[0] = K.add(f1[0], corr)
    fstarU = K.zero
    for l in range(dp):
        fstarU = K.add(fstarU, K.mul(L.vvec[l], f1[l]))
    d = 2 * dp
    n = [K.mul(fstarU, L.lvec[j]) for j in range(d)]
    for l in range(1, dp):
        n[0] = K.add(n[0], f1[l])
        w = K.mul(f1[l], L.ivec[l])
        n[l] = K.add(n[l], w)
        n[dp + l] = K.sub(n[dp + l], w)
    h = v_to_u(K, L.avec, n)
    out = [None] * d
    for l in range(dp):
        out[l] = K.add(fp[l], h[l])
        out[l + dp] = K.sub(fp[l], h[l])
    return out
