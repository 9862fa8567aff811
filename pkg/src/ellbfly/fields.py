"""Finite field arithmetic: prime fields F_p and extensions F_p[X]/(m).

Elements of a prime field are plain Python ints in [0, p); elements of an
extension of degree k are tuples of k ints (coefficients of 1, X, ..., X^(k-1)).
A field object carries the modulus and counts additions/multiplications, so
straight-line programs built on top can be instrumented.

Both field classes expose the same duck-typed interface (zero, one, add, sub,
neg, mul, inv, div, pow_, sqrt, rand, embed, ...), so curve and butterfly code
is generic over the coefficient field.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple


@dataclass
class OpCounter:
    """Snapshot of field operation counts (additions and multiplications)."""

    adds: int = 0
    muls: int = 0

    @property
    def total(self) -> int:
        return self.adds + self.muls

    def __sub__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(self.adds - other.adds, self.muls - other.muls)


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed witness set)."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The prime field F_p, p an odd prime.  Elements are ints in [0, p)."""

    def __init__(self, p: int):
        if p < 3 or not is_probable_prime(p):
            raise ValueError(f"modulus {p} is not an odd prime")
        self.p = p
        self.char = p
        self.order = p
        self.degree = 1
        self.zero = 0
        self.one = 1
        self.adds = 0
        self.muls = 0

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    # --- op counting -----------------------------------------------------
    def op_counts(self) -> OpCounter:
        return OpCounter(self.adds, self.muls)

    def reset_op_counts(self) -> None:
        self.adds = 0
        self.muls = 0

    # --- arithmetic ------------------------------------------------------
    def embed(self, n: int) -> int:
        return n % self.p

    def add(self, a: int, b: int) -> int:
        self.adds += 1
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        self.adds += 1
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        self.muls += 1
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        self.muls += 1
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_(self, a: int, n: int) -> int:
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def rand(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def rand_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.p)

    # --- square roots ----------------------------------------------------
    def is_square(self, a: int) -> bool:
        a %= self.p
        return a == 0 or pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a: int) -> int:
        """A square root of a, or raise ValueError if a is not a square."""
        r = _tonelli_shanks(self, a)
        if r is None:
            raise ValueError(f"{a} is not a square mod {self.p}")
        return r

    # --- descent (trivial for the prime field itself) --------------------
    def is_base_elt(self, a: int) -> bool:
        return True

    def descend(self, a: int) -> int:
        return a % self.p


# ---------------------------------------------------------------------------
# Polynomial helpers over F_p (coefficient lists, ascending degree).
# Used for extension field internals and irreducibility search.
# ---------------------------------------------------------------------------

def _ptrim(a: List[int]) -> List[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    """a*b mod (m, p); m monic of degree k, inputs of degree < k."""
    k = len(m) - 1
    c = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                c[i + j] += ai * bj
    for i in range(len(c) - 1, k - 1, -1):
        ci = c[i] % p
        if ci:
            for j in range(k):
                c[i - k + j] -= ci * m[j]
        c[i] = 0
    return [x % p for x in c[:k]] + [0] * (k - len(c))


def poly_powmod(a: Sequence[int], n: int, m: Sequence[int], p: int) -> List[int]:
    result = [1] + [0] * (len(m) - 2)
    base = list(a)
    while n > 0:
        if n & 1:
            result = poly_mulmod(result, base, m, p)
        base = poly_mulmod(base, base, m, p)
        n >>= 1
    return result


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b != [0]:
        # a mod b
        a = list(a)
        db, da = len(b) - 1, len(a) - 1
        binv = pow(b[-1], -1, p)
        while da >= db and a != [0]:
            q = a[-1] * binv % p
            for j in range(db + 1):
                a[da - db + j] = (a[da - db + j] - q * b[j]) % p
            a = _ptrim(a)
            da = len(a) - 1
        a, b = b, a
    return a


def is_irreducible(m: Sequence[int], p: int) -> bool:
    """Irreducibility of monic m over F_p (Rabin's test)."""
    k = len(m) - 1
    if k < 1 or m[-1] != 1:
        raise ValueError("m must be monic of degree >= 1")
    if k == 1:
        return True
    x = [0, 1]
    # x^(p^k) == x mod m
    xp = poly_powmod(x, p ** k, m, p)
    if _ptrim(list(xp)) != _ptrim([0, 1]):
        return False
    # gcd(x^(p^(k/q)) - x, m) == 1 for each prime q | k
    kk, primes = k, []
    q = 2
    while q * q <= kk:
        if kk % q == 0:
            primes.append(q)
            while kk % q == 0:
                kk //= q
        q += 1
    if kk > 1:
        primes.append(kk)
    for q in primes:
        xp = poly_powmod(x, p ** (k // q), m, p)
        diff = _ptrim([(xp[i] - (1 if i == 1 else 0)) % p for i in range(max(len(xp), 2))])
        g = poly_gcd(diff, m, p)
        if len(g) - 1 > 0:
            return False
    return True


def find_irreducible(p: int, k: int, seed: int = 0) -> List[int]:
    """Lexicographically first monic irreducible of degree k over F_p.

    Deterministic: candidates X^k + a_{k-1}X^{k-1} + ... + a_0 are enumerated
    in ascending order of the base-p integer (a_{k-1}, ..., a_1, a_0); the
    seed argument is accepted for interface stability but unused.
    """
    if k < 1:
        raise ValueError("degree must be >= 1")
    for n in range(p ** k):
        digits = []
        t = n
        for _ in range(k):
            digits.append(t % p)
            t //= p
        m = digits + [1]  # ascending: a_0..a_{k-1}, 1
        if is_irreducible(m, p):
            return m
    raise RuntimeError("unreachable: irreducible polynomial always exists")


class ExtField:
    """F_p[X]/(m): extension of degree k.  Elements are k-tuples of ints."""

    def __init__(self, base: PrimeField, modpoly: Sequence[int]):
        if modpoly[-1] != 1:
            raise ValueError("modulus polynomial must be monic")
        self.base = base
        self.p = base.p
        self.char = base.p
        self.modpoly = [c % base.p for c in modpoly]
        self.degree = len(modpoly) - 1
        if self.degree < 1:
            raise ValueError("modulus polynomial must have degree >= 1")
        if not is_irreducible(self.modpoly, self.p):
            raise ValueError("modulus polynomial is reducible")
        self.order = self.p ** self.degree
        self.zero = (0,) * self.degree
        self.one = tuple([1] + [0] * (self.degree - 1))
        self.gen = tuple([0, 1] + [0] * (self.degree - 2)) if self.degree >= 2 else (0,)
        self.adds = 0
        self.muls = 0

    def __repr__(self) -> str:
        return f"ExtField(p={self.p}, deg={self.degree})"

    def op_counts(self) -> OpCounter:
        return OpCounter(self.adds, self.muls)

    def reset_op_counts(self) -> None:
        self.adds = 0
        self.muls = 0

    # --- arithmetic ------------------------------------------------------
    def embed(self, a) -> Tuple[int, ...]:
        """Embed an int (or base field element) as a constant."""
        if isinstance(a, tuple):
            return a
        return tuple([a % self.p] + [0] * (self.degree - 1))

    def add(self, a, b):
        self.adds += 1
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        self.adds += 1
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        self.muls += 1
        return tuple(poly_mulmod(a, b, self.modpoly, self.p))

    def inv(self, a):
        if all(c % self.p == 0 for c in a):
            raise ZeroDivisionError("inverse of zero")
        self.muls += 1
        # extended Euclid on (a, modpoly)
        p = self.p
        r0, r1 = _ptrim([c % p for c in a]), list(self.modpoly)
        s0, s1 = [1], [0]
        while _ptrim(list(r1)) != [0]:
            q, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _ptrim(_psub(s0, _pmul(q, s1, p), p))
        lead_inv = pow(r0[-1], -1, p)
        s0 = [c * lead_inv % p for c in s0]
        s0 = (s0 + [0] * self.degree)[: self.degree]
        return tuple(s0)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        base = a
        while n > 0:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def frob(self, a):
        """The p-power Frobenius a -> a^p."""
        return self.pow_(a, self.p)

    def is_zero(self, a) -> bool:
        return all(c % self.p == 0 for c in a)

    def rand(self, rng: random.Random):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def rand_nonzero(self, rng: random.Random):
        while True:
            a = self.rand(rng)
            if not self.is_zero(a):
                return a

    def is_square(self, a) -> bool:
        if self.is_zero(a):
            return True
        return self.pow_(a, (self.order - 1) // 2) == self.one

    def sqrt(self, a):
        r = _tonelli_shanks(self, a)
        if r is None:
            raise ValueError("element is not a square")
        return r

    # --- descent ---------------------------------------------------------
    def is_base_elt(self, a) -> bool:
        return all(c % self.p == 0 for c in a[1:])

    def descend(self, a) -> int:
        if not self.is_base_elt(a):
            raise ValueError(f"element {a} does not lie in the prime field")
        return a[0] % self.p


def _pmul(a, b, p):
    c = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                c[i + j] = (c[i + j] + ai * bj) % p
    return c


def _psub(a, b, p):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]


def _pdivmod(a, b, p):
    a = _ptrim([c % p for c in a])
    b = _ptrim([c % p for c in b])
    if b == [0]:
        raise ZeroDivisionError
    q = [0] * max(1, len(a) - len(b) + 1)
    binv = pow(b[-1], -1, p)
    r = list(a)
    while len(r) >= len(b) and _ptrim(list(r)) != [0]:
        d = len(r) - len(b)
        c = r[-1] * binv % p
        if c == 0:
            r.pop()
            continue
        q[d] = c
        for j in range(len(b)):
            r[d + j] = (r[d + j] - c * b[j]) % p
        r = _ptrim(r)
        if len(r) == 1 and r[0] == 0:
            break
    return _ptrim(q), _ptrim(r)


def _tonelli_shanks(F, a):
    """Square root in any finite field F of odd order, or None.

    Deterministic: the quadratic non-residue is searched over a fixed
    pseudo-random sequence seeded from the field order.
    """
    if F.is_zero(a):
        return F.zero
    q = F.order
    if F.pow_(a, (q - 1) // 2) != F.one:
        return None
    # q - 1 = s * 2^e
    s, e = q - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    if e == 1:
        return F.pow_(a, (q + 1) // 4)
    rng = random.Random(q)
    while True:
        n = F.rand_nonzero(rng)
        if F.pow_(n, (q - 1) // 2) != F.one:
            break
    z = F.pow_(n, s)
    x = F.pow_(a, (s + 1) // 2)
    b = F.pow_(a, s)
    r = e
    while b != F.one:
        # find least m with b^(2^m) == 1
        m, t = 0, b
        while t != F.one:
            t = F.mul(t, t)
            m += 1
        c = F.pow_(z, 1 << (r - m - 1))
        x = F.mul(x, c)
        z = F.mul(c, c)
        b = F.mul(b, z)
        r = m
    return x
