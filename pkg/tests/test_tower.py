import json
import random

import pytest

from conftest import make_curve
from ellbfly.bases import coset
from ellbfly.butterfly import butterfly_evaluate, butterfly_interpolate
from ellbfly.curves import Isogeny2, PoleError, random_point
from ellbfly.tower import (
    build_tower,
    load_tower,
    save_tower,
    tower_digest,
    tower_from_dict,
    tower_to_dict,
)


def test_build_rejects_bad_inputs():
    E, t, R, delta = make_curve("p10007d6")
    with pytest.raises(ValueError):
        build_tower(E, E.mul(2, t), R, delta)  # wrong order
    with pytest.raises(ValueError):
        build_tower(E, t, t, delta)  # coset base point inside <t>


def test_level_geometry(tower10007):
    tw = tower10007
    for k in range(tw.delta, 0, -1):
        L = tw.levels[k]
        E = L.E
        # T = (d/2) t is 2-torsion and the isogeny chain is consistent
        assert E.add(L.T, L.T) is None
        assert E.mul(L.d, L.t) is None and E.mul(L.dp, L.t) is not None
        iso = Isogeny2(E, L.T)
        assert iso.codomain.coeffs() == L.Eq.coeffs()
        assert iso.map(L.t) == L.tq
        assert iso.map(L.b) == L.bq
        # U' is 2-torsion on the quotient
        assert L.Eq.is_on(L.Uprime) and L.Eq.add(L.Uprime, L.Uprime) is None


def test_theta_level_constants(tower10007):
    # t_l = theta(b + lt) and its stored inverse
    tw = tower10007
    F = tw.coset_field
    for k in range(1, tw.delta + 1):
        L = tw.levels[k]
        pts = coset(L.E, L.b, L.t, L.dp)
        for l, P in enumerate(pts):
            assert L.tvec[l] == L.E.theta(L.T, P)
            assert F.mul(L.tvec[l], L.tinv[l]) == F.one


def test_u_pairing_identity(tower10007):
    # u_l + u_{l+d'} = u'_l o phi at random points (the halving step)
    tw = tower10007
    K = tw.base_field
    rng = random.Random(31)
    for k in range(2, tw.delta + 1):
        L = tw.levels[k]
        ctx = tw.basis_at(k)
        qctx = tw.basis_at(k - 1)
        iso = Isogeny2(L.E, L.T)
        hits = 0
        while hits < 5:
            P = random_point(L.E, rng)
            try:
                for l in range(L.dp):
                    lhs = K.add(ctx.u_val(l, P), ctx.u_val(l + L.dp, P))
                    assert lhs == qctx.u_val(l, iso.map(P))
            except PoleError:
                continue
            hits += 1


def test_xi_b_vanishes_on_image_coset(tower10007):
    # the corrector xi_b = 1 + d_*(x'-x'(U')) + sum_{l>=1} d_l (v'_l - v'_l(U'))
    # vanishes on B' and takes the value 1 at U'
    tw = tower10007
    K = tw.base_field
    for k in range(1, tw.delta + 1):
        L = tw.levels[k]
        qctx = tw.basis_at(k - 1)

        def xi(P):
            acc = K.add(K.one, K.mul(L.dvec[0], K.sub(P[0], L.xU)))
            for l in range(1, L.dp):
                diff = K.sub(qctx.v_val(l, P), L.vvec[l])
                acc = K.add(acc, K.mul(L.dvec[l], diff))
            return acc

        for P in coset(L.Eq, L.bq, L.tq, L.dp):
            assert xi(P) == K.zero
        assert xi(L.Uprime) == K.one


def test_serialization_roundtrip(tower10007, rng, tmp_path):
    tw = tower10007
    path = tmp_path / "tower.json"
    save_tower(tw, str(path))
    tw2 = load_tower(str(path))
    K = tw.base_field
    for k in (1, 3, tw.delta):
        f = [K.rand(rng) for _ in range(1 << k)]
        assert butterfly_evaluate(tw2, f, k=k) == butterfly_evaluate(tw, f, k=k)
        assert butterfly_interpolate(tw2, f, k=k) == butterfly_interpolate(tw, f, k=k)


def test_digest_detects_tampering(tower10007):
    doc = tower_to_dict(tower10007)
    assert doc["digest"] == tower_digest(doc)
    doc["levels"][0]["bvec"][0] = (doc["levels"][0]["bvec"][0] + 1) % doc["p"]
    with pytest.raises(ValueError):
        tower_from_dict(doc)


def test_digest_rejects_wrong_format(tower10007):
    doc = tower_to_dict(tower10007)
    doc["format"] = "something-else"
    with pytest.raises(ValueError):
        tower_from_dict(doc)


def test_subtower_equals_fresh_tower(tower10007, rng):
    # level k of a tall tower behaves exactly like a freshly built tower of
    # height k rooted at the same data
    tw = tower10007
    k = 4
    L = tw.levels[k]
    fresh = build_tower(L.E, L.t, L.b, k)
    K = tw.base_field
    f = [K.rand(rng) for _ in range(1 << k)]
    assert butterfly_evaluate(fresh, f) == butterfly_evaluate(tw, f, k=k)
    assert butterfly_interpolate(fresh, f) == butterfly_interpolate(tw, f, k=k)


def test_serialized_file_is_json(tower10007, tmp_path):
    path = tmp_path / "t.json"
    save_tower(tower10007, str(path))
    with open(path) as fh:
        doc = json.load(fh)
    assert doc["format"] == "ellbfly-tower"
    assert doc["p"] == 10007 and doc["delta"] == 6
