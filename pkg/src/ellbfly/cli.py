"""Command-line front end.

Subcommands: search, precompute, eval, interp, reduce, mul, goppa, lwe,
bench, selftest.  Configuration comes from key=value files (--config) with
command-line flags taking precedence; vectors travel on stdin/stdout as
whitespace-separated decimals (or fixed-width little-endian binary with
--binary).  Exit codes: 0 ok, 1 usage, 2 math/config error, 3 selftest
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import List, Optional

import numpy as np

from .bases import coset, oracle_evaluate, oracle_interpolate, oracle_reduce
from .butterfly import (
    bidiagonal_apply,
    bidiagonal_solve,
    butterfly_evaluate,
    butterfly_interpolate,
    butterfly_reduce,
)
from .curves import Curve, find_torsion_curve, point_order, random_point
from .fields import PrimeField
from .goppa import GoppaCode
from .lwe import PRESETS, LweCiphertext, LweScheme, make_scheme
from .ntt import NttCtx
from .ring import RingCtx
from .tower import build_tower, load_tower, save_tower

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_SELFTEST = 0, 1, 2, 3


class CliError(Exception):
    """A math/config error: exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# Config and I/O helpers
# ---------------------------------------------------------------------------

def load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def merged(args, config_keys: List[str]) -> dict:
    """Config file values with command-line flags taking precedence."""
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key in config_keys:
        flag_val = getattr(args, key, None)
        out[key] = flag_val if flag_val is not None else cfg.get(key)
    return out


def parse_point(s: str):
    parts = s.replace("(", "").replace(")", "").split(",")
    if len(parts) != 2:
        raise CliError(f"point must be 'x,y', got {s!r}")
    return (int(parts[0]), int(parts[1]))


def read_vector(stream, binary: bool, width: int, count: Optional[int] = None) -> List[int]:
    if binary:
        raw = stream.buffer.read() if hasattr(stream, "buffer") else stream.read()
        if len(raw) % width:
            raise CliError("binary input is not a multiple of the frame width")
        return [int.from_bytes(raw[i:i + width], "little") for i in range(0, len(raw), width)]
    toks = stream.read().split()
    vals = [int(t) for t in toks]
    if count is not None and len(vals) != count:
        raise CliError(f"expected {count} values, got {len(vals)}")
    return vals


def write_vector(stream, vals, binary: bool, width: int) -> None:
    if binary:
        buf = b"".join(int(v).to_bytes(width, "little") for v in vals)
        (stream.buffer if hasattr(stream, "buffer") else stream).write(buf)
    else:
        stream.write(" ".join(str(int(v)) for v in vals) + "\n")


def frame_width(p: int) -> int:
    return (p.bit_length() + 7) // 8


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_search(args) -> int:
    cfg = merged(args, ["p", "delta", "seed"])
    if cfg["p"] is None or cfg["delta"] is None:
        raise CliError("search needs p and delta")
    p, delta = int(cfg["p"]), int(cfg["delta"])
    seed = int(cfg["seed"] or 0)
    E, t, R = find_torsion_curve(p, delta, seed=seed)
    print(f"p = {p}")
    print(f"delta = {delta}")
    print(f"a4 = {E.a4}")
    print(f"a6 = {E.a6}")
    print(f"t = {t[0]},{t[1]}")
    print(f"R = {R[0]},{R[1]}")
    return EXIT_OK


def _tower_from_args(args):
    if getattr(args, "tower", None):
        return load_tower(args.tower)
    cfg = merged(args, ["p", "a4", "a6", "t", "b", "delta"])
    missing = [k for k, v in cfg.items() if v is None]
    if missing:
        raise CliError(f"need --tower or config values for: {', '.join(missing)}")
    K = PrimeField(int(cfg["p"]))
    E = Curve(K, 0, 0, 0, int(cfg["a4"]), int(cfg["a6"]))
    t = parse_point(cfg["t"])
    b = parse_point(cfg["b"])
    return build_tower(E, t, b, int(cfg["delta"]))


def cmd_precompute(args) -> int:
    tw = _tower_from_args(args)
    from .tower import tower_to_dict
    doc = tower_to_dict(tw)
    if args.out:
        save_tower(tw, args.out)
    print(f"digest = {doc['digest']}")
    return EXIT_OK


def _run_linear(args, fn) -> int:
    tw = load_tower(args.tower)
    width = frame_width(tw.base_field.p)
    vec = read_vector(sys.stdin, args.binary, width, count=tw.d)
    out = fn(tw, vec)
    write_vector(sys.stdout, out, args.binary, width)
    return EXIT_OK


def cmd_eval(args) -> int:
    return _run_linear(args, butterfly_evaluate)


def cmd_interp(args) -> int:
    return _run_linear(args, butterfly_interpolate)


def cmd_reduce(args) -> int:
    return _run_linear(args, butterfly_reduce)


def cmd_mul(args) -> int:
    tw_R = load_tower(args.tower)
    tw_b = load_tower(args.tower_b) if args.tower_b else tw_R
    ring = RingCtx(tw_b, tw_R)
    width = frame_width(tw_R.base_field.p)
    vals = read_vector(sys.stdin, args.binary, width, count=2 * ring.d)
    out = ring.multiply(vals[: ring.d], vals[ring.d:])
    write_vector(sys.stdout, out, args.binary, width)
    return EXIT_OK


def cmd_goppa(args) -> int:
    tw = load_tower(args.tower)
    code = GoppaCode(tw)
    width = frame_width(tw.base_field.p)
    if args.action == "encode":
        msg = read_vector(sys.stdin, args.binary, width, count=code.dp)
        write_vector(sys.stdout, code.encode(msg), args.binary, width)
        return EXIT_OK
    word = read_vector(sys.stdin, args.binary, width, count=code.d)
    msg = code.check(word)
    if msg is None:
        print("invalid", file=sys.stderr)
        return EXIT_MATH
    write_vector(sys.stdout, msg, args.binary, width)
    return EXIT_OK


def _lwe_scheme(args) -> LweScheme:
    if args.preset not in PRESETS:
        raise CliError(f"unknown preset {args.preset!r}; have {sorted(PRESETS)}")
    return make_scheme(args.preset, seed=int(args.seed or 0))


def cmd_lwe(args) -> int:
    rng = np.random.default_rng(int(args.seed or 0))
    scheme = _lwe_scheme(args)
    if args.action == "keygen":
        kp = scheme.keygen(rng)
        with open(args.public_key, "w") as fh:
            json.dump({"a": kp.a.tolist(), "w": kp.w.tolist()}, fh)
        with open(args.secret_key, "w") as fh:
            json.dump({"s": kp.s.tolist()}, fh)
        print(f"wrote {args.public_key} and {args.secret_key}")
        return EXIT_OK
    if args.action == "enc":
        with open(args.public_key) as fh:
            pk = json.load(fh)
        msg = np.array(json.loads(args.message), dtype=np.int64)
        if msg.ndim == 0:
            msg = msg.reshape(1, 1)
        ct = scheme.encrypt(np.array(pk["a"]), np.array(pk["w"]), msg, rng)
        json.dump({"c1": ct.c1.tolist(), "c2": ct.c2.tolist()}, sys.stdout)
        print()
        return EXIT_OK
    with open(args.secret_key) as fh:
        sk = json.load(fh)
    ct_doc = json.load(sys.stdin)
    ct = LweCiphertext(c1=np.array(ct_doc["c1"]), c2=np.array(ct_doc["c2"]))
    out = scheme.decrypt(np.array(sk["s"]), ct)
    print(json.dumps(out.tolist()))
    return EXIT_OK


def cmd_bench(args) -> int:
    import random as _random
    p = int(args.p or 167772161)
    seed = int(args.seed or 1)
    dmin, dmax = int(args.delta_min or 8), int(args.delta_max or 16)
    tower_delta = min(dmax, int(args.tower_delta or 12))
    rng = _random.Random(seed)
    try:
        E, t, R = find_torsion_curve(p, tower_delta, seed=seed)
        tw = build_tower(E, t, R, tower_delta)
        K = tw.base_field  # the instrumented field shared by all algorithms
    except (ValueError, RuntimeError) as exc:
        print(f"warning: no elliptic tower over p={p}: {exc}", file=sys.stderr)
        tw = None
        K = PrimeField(p)
    ring = RingCtx(tw, tw) if tw is not None else None
    out = csv.writer(sys.stdout if not args.out else open(args.out, "w", newline=""))
    out.writerow(["d", "algorithm", "wall_time", "op_count"])

    def row(d, name, fn, *vecs):
        K.reset_op_counts()
        t0 = time.perf_counter()
        fn(*vecs)
        wall = time.perf_counter() - t0
        out.writerow([d, name, f"{wall:.6f}", K.op_counts().total])

    for delta in range(dmin, dmax + 1):
        d = 1 << delta
        vec = [rng.randrange(p) for _ in range(d)]
        vec2 = [rng.randrange(p) for _ in range(d)]
        if (p - 1) % d == 0:
            ctx = NttCtx(K, d)
            fwd = ctx.forward(vec)
            row(d, "ntt_eval", ctx.forward, vec)
            row(d, "ntt_interp", ctx.inverse, fwd)
        else:
            print(f"warning: skipping ntt rows at d={d} (d does not divide p-1)",
                  file=sys.stderr)
        if tw is not None and delta <= tw.delta:
            vals = butterfly_evaluate(tw, vec, k=delta)
            row(d, "ell_eval", butterfly_evaluate, tw, vec, delta)
            row(d, "ell_interp", butterfly_interpolate, tw, vals, delta)
            row(d, "ell_reduce", butterfly_reduce, tw, vec, delta)
            if delta == tw.delta:
                row(d, "ring_mul", ring.multiply, vec, vec2)
        else:
            print(f"warning: skipping elliptic rows at d={d} (tower height "
                  f"{tw.delta if tw else 'none'})", file=sys.stderr)
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    import random as _random
    seed = int(args.seed or 0)
    rng = _random.Random(seed)
    failures = []

    def check(name, ok):
        print(f"  {name}: {'pass' if ok else 'FAIL'}")
        if not ok:
            failures.append(name)

    print("selftest: oracle cross-checks at d <= 64")
    for p in (10007, 12289):
        E, t, R = find_torsion_curve(p, 6, seed=seed + p)
        K = E.K
        tw = build_tower(E, t, R, 6)
        for k in range(1, 7):
            d = 1 << k
            ctx = tw.basis_at(k)
            pts = coset(tw.curve_at(k), tw.b_at(k), tw.t_at(k), d)
            f = [K.rand(rng) for _ in range(d)]
            vals = butterfly_evaluate(tw, f, k=k)
            ok = vals == oracle_evaluate(ctx, f, pts)
            ok = ok and butterfly_interpolate(tw, vals, k=k) == f
            Fc = [K.rand(rng) for _ in range(d)]
            ok = ok and butterfly_reduce(tw, Fc, k=k) == oracle_reduce(ctx, Fc, pts)
            check(f"p={p} d={d} oracle agreement", ok)
    print("selftest: roundtrips at d <= 4096")
    E, t, R = find_torsion_curve(167772161, 12, seed=seed + 1)
    K = E.K
    tw = build_tower(E, t, R, 12)
    for k in (8, 10, 12):
        d = 1 << k
        f = [K.rand(rng) for _ in range(d)]
        ok = butterfly_interpolate(tw, butterfly_evaluate(tw, f, k=k), k=k) == f
        check(f"d={d} roundtrip", ok)
    print("selftest: bidiagonal solver")
    for d in (2, 8, 64):
        b = [K.rand_nonzero(rng) for _ in range(d)]
        c = [K.rand_nonzero(rng) for _ in range(d)]
        s = [K.rand(rng) for _ in range(d)]
        try:
            ok = bidiagonal_apply(K, b, c, bidiagonal_solve(K, b, c, s)) == s
        except ZeroDivisionError:
            ok = True  # singular instance; skip
        check(f"bidiagonal d={d}", ok)
    if failures:
        print(f"selftest FAILED: {failures}")
        return EXIT_SELFTEST
    print("selftest passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    ap = _Parser(prog="ellbfly",
                 description="Elliptic butterflies: O(d log d) evaluation, "
                             "interpolation and reduction in L(<t>), with "
                             "residue-ring, Goppa and LWE applications.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, tower=False, binary=False):
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--seed", help="deterministic seed")
        if tower:
            sp.add_argument("--tower", help="tower cache file (from precompute)")
        if binary:
            sp.add_argument("--binary", action="store_true",
                            help="fixed-width little-endian binary I/O")

    sp = sub.add_parser("search", help="find a curve with a point of order 2^delta")
    common(sp)
    sp.add_argument("--p")
    sp.add_argument("--delta")
    sp.set_defaults(fn=cmd_search)

    sp = sub.add_parser("precompute", help="build a butterfly tower and cache it")
    common(sp, tower=True)
    for flag in ("--p", "--a4", "--a6", "--t", "--b", "--delta"):
        sp.add_argument(flag)
    sp.add_argument("--out", help="tower cache output file")
    sp.set_defaults(fn=cmd_precompute)

    for name, fn, hlp in (("eval", cmd_eval, "evaluate u-coordinates on the coset"),
                          ("interp", cmd_interp, "interpolate values to u-coordinates"),
                          ("reduce", cmd_reduce, "reduce an x-combination modulo the coset")):
        sp = sub.add_parser(name, help=hlp)
        common(sp, tower=True, binary=True)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("mul", help="residue-ring multiplication (two vectors on stdin)")
    common(sp, tower=True, binary=True)
    sp.add_argument("--tower-b", help="reduction tower for B != R")
    sp.set_defaults(fn=cmd_mul)

    sp = sub.add_parser("goppa", help="MDS code encode/check")
    sp.add_argument("action", choices=["encode", "check"])
    common(sp, tower=True, binary=True)
    sp.set_defaults(fn=cmd_goppa)

    sp = sub.add_parser("lwe", help="toy Elliptic-LWE demo")
    sp.add_argument("action", choices=["keygen", "enc", "dec"])
    common(sp)
    sp.add_argument("--preset", default="toy")
    sp.add_argument("--public-key", default="lwe_pk.json")
    sp.add_argument("--secret-key", default="lwe_sk.json")
    sp.add_argument("--message", help="chunk array as JSON (enc)")
    sp.set_defaults(fn=cmd_lwe)

    sp = sub.add_parser("bench", help="op-count/wall-time CSV (elliptic vs NTT)")
    common(sp)
    sp.add_argument("--p")
    sp.add_argument("--delta-min")
    sp.add_argument("--delta-max")
    sp.add_argument("--tower-delta", help="height of the elliptic tower to search")
    sp.add_argument("--out", help="CSV output file (default stdout)")
    sp.set_defaults(fn=cmd_bench)

    sp = sub.add_parser("selftest", help="oracle cross-checks and roundtrips")
    common(sp)
    sp.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, ValueError, ZeroDivisionError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
