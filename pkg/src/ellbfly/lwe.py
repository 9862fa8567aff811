"""Toy Elliptic-LWE public-key encryption.

The scheme is Regev-style over the diagonal residue ring at R + <t>: the
endomorphism phi_a(x) = a (x) x (elliptic multiplication by a fixed public
vector a) replaces the random matrix of plain LWE.  Applying phi_a costs
three butterflies (O(d log d)); its transpose is realised as an explicit
d x d matrix built from the evaluation matrix E of the butterflies,
phi_a = E^-1 diag(E a) E.

Single-bit encryption follows the Regev variant exactly; the multi-bit
variant packs beta-bit chunks into ell x ell inner products (Frodo style)
with scale Delta = floor(q / 2^beta), so beta = 1, ell = 1 reproduces the
single-bit scheme.

This is a toy instantiation for correctness experiments: parameters are
chosen for desk-scale Monte Carlo runs, not for security.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .butterfly import butterfly_evaluate, butterfly_interpolate
from .curves import find_torsion_curve
from .ring import RingCtx
from .tower import build_tower


# ---------------------------------------------------------------------------
# Error distributions
# ---------------------------------------------------------------------------

def sample_chi(chi: Tuple, shape, rng: np.random.Generator) -> np.ndarray:
    """Sample the error distribution chi over Z (as int64).

    chi is ("zero",), ("cbd", eta) for the centered binomial, or
    ("dgauss", sigma) for a truncated discrete Gaussian.
    """
    kind = chi[0]
    if kind == "zero":
        return np.zeros(shape, dtype=np.int64)
    if kind == "cbd":
        eta = chi[1]
        a = rng.integers(0, 2, size=(*shape, eta), dtype=np.int64).sum(axis=-1)
        b = rng.integers(0, 2, size=(*shape, eta), dtype=np.int64).sum(axis=-1)
        return a - b
    if kind == "dgauss":
        sigma = chi[1]
        cut = max(1, math.ceil(6 * sigma))
        ks = np.arange(-cut, cut + 1)
        probs = np.exp(-(ks.astype(float) ** 2) / (2 * sigma * sigma))
        probs /= probs.sum()
        return rng.choice(ks, size=shape, p=probs).astype(np.int64)
    raise ValueError(f"unknown error distribution {chi!r}")


# ---------------------------------------------------------------------------
# Modular linear algebra helpers
# ---------------------------------------------------------------------------

def mat_inv_mod(M: np.ndarray, q: int) -> np.ndarray:
    """Inverse of M modulo prime q (Gauss-Jordan with vectorized row ops)."""
    n = M.shape[0]
    A = np.concatenate([M % q, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        nz = np.nonzero(A[col:, col])[0]
        if nz.size == 0:
            raise ValueError("matrix is singular mod q")
        piv = col + int(nz[0])
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
        A[col] = A[col] * pow(int(A[col, col]), -1, q) % q
        factors = A[:, col].copy()
        factors[col] = 0
        A = (A - factors[:, None] * A[col][None, :]) % q
    return A[:, n:]


# ---------------------------------------------------------------------------
# The scheme
# ---------------------------------------------------------------------------

@dataclass
class LweKeyPair:
    a: np.ndarray            # public multiplier
    w: np.ndarray            # public key, d x ell
    s: np.ndarray            # secret key, d x ell


@dataclass
class LweCiphertext:
    c1: np.ndarray           # d x ell
    c2: np.ndarray           # ell x ell


class LweScheme:
    """Elliptic-LWE over a diagonal ring context (b = R)."""

    def __init__(self, ring: RingCtx, chi: Tuple = ("cbd", 2),
                 beta: int = 1, ell: int = 1):
        if not ring.diagonal:
            raise ValueError("LWE needs the diagonal ring (b = R)")
        self.ring = ring
        self.K = ring.K
        self.q = ring.K.p
        self.d = ring.d
        self.chi = chi
        self.beta = beta
        self.ell = ell
        if beta < 1 or self.q >> beta == 0:
            raise ValueError("beta too large for q")
        self.delta_scale = self.q >> beta  # floor(q / 2^beta)
        # evaluation matrix of the butterflies and its inverse
        d = self.d
        cols = []
        for l in range(d):
            e = [0] * d
            e[l] = 1
            cols.append(butterfly_evaluate(ring.tower_R, e))
        self.Emat = np.array(cols, dtype=np.int64).T % self.q
        self.Einv = mat_inv_mod(self.Emat, self.q)
        self.last_op_profile = {}
        self._phi_cache = {}

    # --- the endomorphism and its transpose ------------------------------
    def phi_apply(self, a, x) -> list:
        """phi_a(x) via three butterflies (O(d log d) field operations)."""
        K, tw = self.K, self.ring.tower_R
        alpha = butterfly_evaluate(tw, [int(v) % self.q for v in a])
        xi = butterfly_evaluate(tw, [int(v) % self.q for v in x])
        return butterfly_interpolate(tw, [K.mul(u, v) for u, v in zip(alpha, xi)])

    def phi_matrix(self, a) -> np.ndarray:
        """The matrix of phi_a: E^-1 diag(E a) E mod q (cached per a)."""
        a = np.asarray(a, dtype=np.int64) % self.q
        key = a.tobytes()
        if key not in self._phi_cache:
            alpha = self.Emat @ a % self.q
            self._phi_cache[key] = self.Einv @ (self.Emat * alpha[:, None] % self.q) % self.q
        return self._phi_cache[key]

    # --- key generation / encryption / decryption ------------------------
    def keygen(self, rng: np.random.Generator) -> LweKeyPair:
        q, d, ell = self.q, self.d, self.ell
        a = rng.integers(0, q, size=d, dtype=np.int64)
        s = sample_chi(self.chi, (d, ell), rng)
        e = sample_chi(self.chi, (d, ell), rng)
        w = np.empty((d, ell), dtype=np.int64)
        for j in range(ell):
            w[:, j] = np.array(self.phi_apply(a, s[:, j] % q), dtype=np.int64)
        w = (w + e) % q
        return LweKeyPair(a=a, w=w, s=s)

    def encrypt(self, pk_a: np.ndarray, pk_w: np.ndarray, msg: np.ndarray,
                rng: np.random.Generator) -> LweCiphertext:
        """Encrypt an ell x ell array of beta-bit chunks."""
        q, d, ell = self.q, self.d, self.ell
        msg = np.asarray(msg, dtype=np.int64)
        if msg.shape != (ell, ell) or msg.min() < 0 or msg.max() >= (1 << self.beta):
            raise ValueError(f"message must be {ell}x{ell} chunks of {self.beta} bits")
        phi_t = self.phi_matrix(pk_a).T
        r = sample_chi(self.chi, (d, ell), rng)
        e1 = sample_chi(self.chi, (d, ell), rng)
        e2 = sample_chi(self.chi, (ell, ell), rng)
        c1 = (phi_t @ (r % q) + e1) % q
        c2 = (r.T @ pk_w + e2 + self.delta_scale * msg) % q
        self.last_op_profile = {
            "phi_applications": ell,
            "inner_products": ell * ell,
            "scalar_muls": ell * d * d + ell * ell * d,
        }
        return LweCiphertext(c1=c1, c2=c2)

    def decrypt(self, sk: np.ndarray, ct: LweCiphertext) -> np.ndarray:
        """Recover the chunk array by rounding p / Delta."""
        q = self.q
        p = (ct.c2 - ct.c1.T @ (sk % q)) % q
        chunks = np.rint(p.astype(float) / self.delta_scale).astype(np.int64)
        return chunks % (1 << self.beta)

    # --- single-bit convenience (beta = ell = 1) -------------------------
    def encrypt_bit(self, pk_a, pk_w, bit: int, rng: np.random.Generator) -> LweCiphertext:
        if self.beta != 1 or self.ell != 1:
            raise ValueError("encrypt_bit needs beta = ell = 1")
        return self.encrypt(pk_a, pk_w, np.array([[bit]]), rng)

    def decrypt_bit(self, sk, ct: LweCiphertext) -> int:
        """Threshold rule: 0 if p is closer to 0 than to round(q/2) mod q."""
        q = self.q
        p = int(((ct.c2 - ct.c1.T @ (sk % q)) % q).item()) % q
        h = (q + 1) // 2
        dist0 = min(p, q - p)
        dist1 = min((p - h) % q, (h - p) % q)
        return 0 if dist0 <= dist1 else 1


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

@dataclass
class LwePreset:
    name: str
    q: int
    delta: int
    chi: Tuple
    beta: int = 1
    ell: int = 1
    curve_seed: int = 1
    note: str = ""


PRESETS = {
    # q ~ 2^15, d = 256, centered binomial noise: decryption failure < 1%
    "toy": LwePreset(name="toy", q=32749, delta=8, chi=("cbd", 2)),
    # Frodo-style packing: 4-bit chunks in an 8 x 8 grid (256-bit messages)
    "toy-multibit": LwePreset(name="toy-multibit", q=32749, delta=8,
                              chi=("cbd", 2), beta=4, ell=8),
    # the asymptotic guideline q = O(d), sigma = O(sqrt d) cannot hold
    # exactly here: a rational point of order d needs q >= ~d^2/16 (Hasse),
    # so this scales d down and is labelled experimental
    "guideline": LwePreset(name="guideline", q=12289, delta=6,
                           chi=("dgauss", 2.0), note="experimental"),
}


def make_scheme(preset, seed: int = 0) -> LweScheme:
    """Build an LweScheme from a preset (name or LwePreset)."""
    if isinstance(preset, str):
        preset = PRESETS[preset]
    E, t, R = find_torsion_curve(preset.q, preset.delta, seed=preset.curve_seed)
    tw = build_tower(E, t, R, preset.delta)
    ring = RingCtx(tw, tw)
    return LweScheme(ring, chi=preset.chi, beta=preset.beta, ell=preset.ell)
