import random

import pytest

from ellbfly.fields import (
    ExtField,
    PrimeField,
    find_irreducible,
    is_irreducible,
    is_probable_prime,
)


def test_primality():
    assert is_probable_prime(2) and is_probable_prime(10007)
    assert not is_probable_prime(1) and not is_probable_prime(10006)
    with pytest.raises(ValueError):
        PrimeField(10006)
    with pytest.raises(ValueError):
        PrimeField(2)  # odd primes only


def test_prime_field_arithmetic():
    K = PrimeField(10007)
    assert K.add(10000, 10) == 3
    assert K.sub(3, 10) == 10000
    assert K.mul(K.inv(1234), 1234) == 1
    assert K.neg(0) == 0
    assert K.div(6, 3) == 2
    assert K.pow_(5, -1) == K.inv(5)
    with pytest.raises(ZeroDivisionError):
        K.inv(0)


def test_prime_field_sqrt():
    K = PrimeField(10007)
    rng = random.Random(1)
    for _ in range(50):
        a = K.rand(rng)
        sq = K.mul(a, a)
        r = K.sqrt(sq)
        assert K.mul(r, r) == sq
    # non-residue raises
    nr = next(a for a in range(2, 100) if not K.is_square(a))
    with pytest.raises(ValueError):
        K.sqrt(nr)


def test_op_counters():
    K = PrimeField(101)
    K.reset_op_counts()
    K.add(1, 2)
    K.mul(3, 4)
    K.inv(5)
    c = K.op_counts()
    assert (c.adds, c.muls, c.total) == (1, 2, 3)


def test_irreducibility():
    # x^2 + 1 over F_7: -1 is a non-residue mod 7, so irreducible
    assert is_irreducible([1, 0, 1], 7)
    # x^2 - 2 over F_7: 2 = 3^2 mod 7, reducible
    assert not is_irreducible([5, 0, 1], 7)
    m = find_irreducible(67, 4)
    assert len(m) == 5 and m[-1] == 1 and is_irreducible(m, 67)


def test_ext_field_arithmetic():
    K = PrimeField(67)
    F = ExtField(K, find_irreducible(67, 3))
    rng = random.Random(2)
    for _ in range(30):
        a, b = F.rand_nonzero(rng), F.rand_nonzero(rng)
        assert F.mul(a, F.inv(a)) == F.one
        assert F.add(F.mul(a, b), F.neg(F.mul(b, a))) == F.zero
        assert F.sub(a, a) == F.zero
    # Frobenius is the identity on the prime subfield and has order 3
    a = F.rand(rng)
    assert F.frob(F.embed(5)) == F.embed(5)
    assert F.frob(F.frob(F.frob(a))) == a


def test_ext_field_sqrt_and_descent():
    K = PrimeField(67)
    F = ExtField(K, find_irreducible(67, 2))
    rng = random.Random(3)
    for _ in range(20):
        a = F.rand(rng)
        r = F.sqrt(F.mul(a, a))
        assert F.mul(r, r) == F.mul(a, a)
    assert F.is_base_elt(F.embed(12))
    assert F.descend(F.embed(12)) == 12
    with pytest.raises(ValueError):
        F.descend(F.gen)


def test_ext_field_rejects_reducible_modulus():
    with pytest.raises(ValueError):
        ExtField(PrimeField(7), [5, 0, 1])  # x^2 - 2 splits mod 7
