"""Command-line front end.

Subcommands: hash, bench, quality, stream-distinct, stream-jaccard,
dump-tables, conformance. Every CSV output records the library version, the
full configuration, and the master seed in comment headers, so identical
invocations produce identical files (timing values excepted).

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from importlib import resources

import numpy as np

from . import __version__
from .errors import HashlabError
from .hashers import SCHEMES, SchemeDescriptor, build, dump_tables
from .lab import (
    Workload,
    cdf,
    run_quality,
    run_timing,
    write_cdf_csv,
    write_quality_csv,
    write_timing_csv,
)
from .streams import estimate_distinct_median, jaccard, sketch_of, stream_distinct

SCHEME_CHOICES = [s for s in SCHEMES if s != "poly"] + ["poly2", "poly100"]
_DEFAULT_BENCH = [
    "simpletab", "tabperm", "tab1perm", "twisted", "mixed",
    "multishift", "poly2", "poly100",
]


def _seed_arg(text: str) -> int:
    t = text.lower()
    if t.startswith("0x"):
        t = t[2:]
    try:
        value = int(t, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be hex, got {text!r}")
    if not 0 <= value < (1 << 256):
        raise argparse.ArgumentTypeError("seed must fit in 256 bits")
    return value


def _env_seed() -> int:
    raw = os.environ.get("HASHLAB_SEED")
    if raw is None:
        return 0
    return _seed_arg(raw)


def _add_scheme_flags(p, default_scheme=None):
    p.add_argument("--scheme", choices=SCHEME_CHOICES, default=default_scheme,
                   required=default_scheme is None)
    p.add_argument("--bits", type=int, choices=(32, 64), default=64)
    p.add_argument("--charbits", type=int, choices=(8, 16), default=None)
    p.add_argument("--seed", type=_seed_arg, default=None,
                   help="master seed as hex; HASHLAB_SEED is the fallback")


def _descriptor(args) -> SchemeDescriptor:
    scheme = args.scheme
    k = None
    if scheme.startswith("poly"):
        k = int(scheme[4:])
        scheme = "poly"
    return SchemeDescriptor(
        scheme,
        key_bits=args.bits,
        char_bits=args.charbits,
        k=k,
        seed=args.seed,
    )


def _read_keys(path: str, fmt: str, key_bits: int) -> np.ndarray:
    """Newline-delimited hex keys, or raw little-endian fixed-width binary."""
    if fmt == "bin":
        data = open(path, "rb").read()
        width = key_bits // 8
        if len(data) % width:
            raise ValueError(f"binary key file is not a multiple of {width} bytes")
        dtype = "<u4" if key_bits == 32 else "<u8"
        return np.frombuffer(data, dtype=dtype).astype(np.uint64)
    keys = []
    limit = 1 << key_bits
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            value = int(text, 16)
            if not 0 <= value < limit:
                raise ValueError(f"{path}:{lineno}: key wider than {key_bits} bits")
            keys.append(value)
    return np.array(keys, dtype=np.uint64)


def _out_stream(args):
    return open(args.out, "w", newline="") if args.out else sys.stdout


def _cmd_hash(args) -> int:
    hf = build(_descriptor(args))
    if args.key is not None:
        keys = np.array([int(args.key, 16)], dtype=np.uint64)
    else:
        keys = _read_keys(args.keys_file, args.format, args.bits)
    values = hf.hash_array(keys) if len(keys) else []
    width = (hf.out_bits + 3) // 4
    lines = [f"0x{int(v):0{width}x}" for v in values]
    out = _out_stream(args)
    out.write("\n".join(lines) + ("\n" if lines else ""))
    if args.out:
        out.close()
    return 0


def _cmd_bench(args) -> int:
    schemes = args.schemes.split(",") if args.schemes else list(_DEFAULT_BENCH)
    if args.bits == 32 and not args.schemes:
        schemes.insert(5, "doubletab")
    rows = run_timing(schemes, args.bits, args.n, seed=args.seed,
                      repeats=args.repeats)
    config = f"bench bits={args.bits} n={args.n} repeats={args.repeats}"
    write_timing_csv(_out_stream(args), rows, config, args.seed)
    return 0


def _workload_from_args(args) -> Workload:
    kind = args.workload
    if kind == "random":
        return Workload("random", key_bits=args.bits, size=args.n)
    if kind == "progression":
        return Workload("progression", key_bits=args.bits, size=args.n, a=args.a)
    if kind == "cube":
        return Workload("cube", key_bits=args.bits, b1_dims=args.b1_dims,
                        tail_bits=args.tail_bits)
    return Workload("collapse", key_bits=args.bits, k=args.collapse_k,
                    c=args.collapse_c)


def _cmd_quality(args) -> int:
    w = _workload_from_args(args)
    results = run_quality(args.scheme, w, args.bins, args.trials,
                          seed=args.seed, jobs=args.jobs)
    config = (
        f"quality scheme={args.scheme} workload={w.label()} m={args.bins}"
        f" trials={args.trials} jobs={args.jobs}"
    )
    write_quality_csv(_out_stream(args), results, config, args.seed)
    if args.cdf_out:
        write_cdf_csv(args.cdf_out, cdf(results), config, args.seed)
    return 0


def _cmd_stream_distinct(args) -> int:
    keys = _read_keys(args.keys_file, args.format, args.bits)
    if args.eps is not None or args.delta is not None:
        if args.eps is None or args.delta is None:
            raise ValueError("median estimation needs both --eps and --delta")
        est = estimate_distinct_median(keys, eps=args.eps, delta=args.delta,
                                       scheme=args.scheme, key_bits=args.bits,
                                       seed=args.seed)
    else:
        est = stream_distinct(keys, args.k, scheme=args.scheme,
                              key_bits=args.bits, seed=args.seed)
    print(f"{est:.6f}")
    return 0


def _cmd_stream_jaccard(args) -> int:
    hf = build(_descriptor(args))
    a = sketch_of(hf, _read_keys(args.keys_a, args.format, args.bits), args.k)
    b = sketch_of(hf, _read_keys(args.keys_b, args.format, args.bits), args.k)
    print(f"{jaccard(a, b):.6f}")
    return 0


def _cmd_dump_tables(args) -> int:
    blob = dump_tables(build(_descriptor(args)))
    with open(args.out, "wb") as fh:
        fh.write(blob)
    return 0


def _cmd_conformance(args) -> int:
    if args.vectors:
        rows = open(args.vectors).read().splitlines()
    else:
        rows = (
            resources.files("hashlab")
            .joinpath("data/vectors.tsv")
            .read_text()
            .splitlines()
        )
    cache: dict[SchemeDescriptor, object] = {}
    checked = 0
    failures = []
    header_seen = False
    for lineno, line in enumerate(rows, 1):
        if not line.strip() or line.startswith("#"):
            continue
        if not header_seen:
            header_seen = True  # column names
            continue
        f = line.split("\t")
        if len(f) != 8:
            failures.append(f"line {lineno}: expected 8 fields, got {len(f)}")
            continue
        scheme, kb, cb, d, k, seed, key, want = f
        desc = SchemeDescriptor(
            scheme,
            key_bits=int(kb),
            char_bits=int(cb),
            d=int(d) if scheme not in ("multishift", "poly") else None,
            k=int(k) if scheme == "poly" else None,
            seed=int(seed, 16),
        )
        hf = cache.get(desc)
        if hf is None:
            hf = cache[desc] = build(desc)
        got = hf(int(key, 16))
        checked += 1
        if got != int(want, 16):
            failures.append(
                f"line {lineno}: {desc.canonical()} key={key}"
                f" got=0x{got:x} want={want}"
            )
    for msg in failures:
        print(msg, file=sys.stderr)
    print(f"checked {checked} vectors, {len(failures)} mismatches")
    return 1 if failures or checked == 0 else 0


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hashlab",
        description="Tabulation-family hashing: evaluation, experiments, sketches.",
    )
    ap.add_argument("--version", action="version", version=f"hashlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hash", help="hash one key or a key file")
    _add_scheme_flags(p)
    p.add_argument("--key", help="single key as hex")
    p.add_argument("--keys-file", help="file of keys")
    p.add_argument("--format", choices=("hex", "bin"), default="hex")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_hash)

    p = sub.add_parser("bench", help="timing harness over pre-generated keys")
    p.add_argument("--schemes", help="comma-separated list; default: all feasible")
    p.add_argument("--bits", type=int, choices=(32, 64), default=64)
    p.add_argument("--n", type=int, default=10_000_000)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=_seed_arg, default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("quality", help="bin-count distribution experiments")
    p.add_argument("workload", choices=("random", "progression", "cube", "collapse"))
    _add_scheme_flags(p)
    p.add_argument("--bins", type=int, default=2)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--n", type=int, default=50000, help="random/progression size")
    p.add_argument("--a", type=int, default=None, help="fixed progression step")
    p.add_argument("--b1-dims", type=int, default=7)
    p.add_argument("--tail-bits", type=int, default=6)
    p.add_argument("--collapse-k", type=int, default=2)
    p.add_argument("--collapse-c", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--cdf-out", help="also write the focal-count CDF here")
    p.set_defaults(func=_cmd_quality)

    p = sub.add_parser("stream-distinct", help="bottom-k distinct count estimate")
    p.add_argument("--keys-file", required=True)
    p.add_argument("--format", choices=("hex", "bin"), default="hex")
    p.add_argument("--k", type=int, default=256)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--scheme", choices=SCHEME_CHOICES, default="tab1perm")
    p.add_argument("--bits", type=int, choices=(32, 64), default=64)
    p.add_argument("--seed", type=_seed_arg, default=None)
    p.set_defaults(func=_cmd_stream_distinct)

    p = sub.add_parser("stream-jaccard", help="bottom-k similarity of two key files")
    _add_scheme_flags(p, default_scheme="tab1perm")
    p.add_argument("--keys-a", required=True)
    p.add_argument("--keys-b", required=True)
    p.add_argument("--format", choices=("hex", "bin"), default="hex")
    p.add_argument("--k", type=int, default=256)
    p.set_defaults(func=_cmd_stream_jaccard)

    p = sub.add_parser("dump-tables", help="write the canonical binary table dump")
    _add_scheme_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_dump_tables)

    p = sub.add_parser("conformance", help="check (descriptor, key, hash) vectors")
    p.add_argument("--vectors", help="TSV path; default: packaged vectors")
    p.set_defaults(func=_cmd_conformance)

    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if getattr(args, "seed", None) is None:
        try:
            args.seed = _env_seed()
        except argparse.ArgumentTypeError as exc:
            print(f"usage error: HASHLAB_SEED: {exc}", file=sys.stderr)
            return 2
    if args.command == "hash" and not args.key and not args.keys_file:
        print("error: hash needs --key or --keys-file", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (HashlabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
