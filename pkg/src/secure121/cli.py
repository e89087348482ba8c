"""Command-line front end: ``secure121 {analyze,simulate,diamond,check-lemma,gen-diamond}``.

Output is plain ``key: value`` lines so runs can be diffed byte for byte.
All randomness derives from ``--seed`` (default 0).

Exit codes: 0 ok, 1 decode failure, 2 input error, 3 scheme error,
4 secrecy violation, 5 lemma-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .adversary import AdversaryError, verify_all_subsets
from .bounds import NonUnitCapacity, capacity_report
from .coding import SchemeError, build_scheme, decode, dump_schedule, encode
from .diamond import (
    DiamondError,
    diamond_capacity,
    diamond_schedule,
    equal_split_rate,
    equalization_heuristic,
)
from .entropy import PMF_KINDS, EntropyError, LemmaViolation, random_pmf, verify_subset_lemma
from .field import FieldError, gf
from .netmodel import NetworkError, parse_network, unit_diamond, serialize_network

EXIT_OK, EXIT_DECODE, EXIT_INPUT, EXIT_SCHEME, EXIT_SECRECY, EXIT_LEMMA = 0, 1, 2, 3, 4, 5


class InputError(Exception):
    pass


@dataclass
class RunManifest:
    command: str
    network_digest: str | None
    parameters: dict = field(default_factory=dict)
    tool_version: str = __version__


def _fmt(x: Fraction) -> str:
    return str(Fraction(x))


def _parse_field(text: str | None):
    if text is None:
        return None
    try:
        if "^" in text:
            base, m = text.split("^")
            if int(base) != 2:
                raise ValueError
            return gf(int(m))
        q = int(text)
        return gf(q.bit_length() - 1) if q > 1 and q & (q - 1) == 0 else gf(-1)
    except (ValueError, FieldError):
        raise InputError(f"bad --field {text!r}; use 2^m with m in 1, 4, 8, 16") from None


def _parse_caps(text: str) -> list[Fraction]:
    caps = []
    for tok in text.split(","):
        try:
            c = Fraction(tok.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad capacity {tok!r}") from None
        if c <= 0:
            raise InputError(f"capacity {tok!r} must be positive")
        caps.append(c)
    return caps


def _load_network(path: str):
    try:
        return parse_network(Path(path).read_bytes())
    except OSError as exc:
        raise InputError(str(exc)) from None


def _write_manifest(args, manifest: RunManifest):
    if getattr(args, "manifest", None):
        Path(args.manifest).write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n")


def cmd_analyze(args, out) -> int:
    net = _load_network(args.network)
    report = capacity_report(net, args.wiretap)
    for line in report.lines():
        print(line, file=out)
    _write_manifest(args, RunManifest("analyze", net.digest(), {"K": args.wiretap, "M": net.beams}))
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    net = _load_network(args.network)
    field = _parse_field(args.field)
    try:
        scheme = build_scheme(net, args.wiretap, field, args.packet_len)
    except (SchemeError, NonUnitCapacity) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SCHEME
    seeds = np.random.SeedSequence(args.seed).spawn(args.trials)
    ok = 0
    for i, ss in enumerate(seeds):
        rng = np.random.default_rng(ss)
        w = scheme.field.random(rng, (scheme.num_messages, scheme.packet_len))
        schedule, _ = encode(scheme, w, rng)
        if i == 0 and args.dump:
            Path(args.dump).write_text(dump_schedule(schedule, scheme.field))
        try:
            ok += bool(np.array_equal(decode(scheme, schedule), w))
        except SchemeError:
            pass
    try:
        verdict = verify_all_subsets(scheme, args.wiretap)
    except AdversaryError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SCHEME
    print(f"scheme: {scheme.mode.value}", file=out)
    print(f"field: GF(2^{scheme.field.m})", file=out)
    print(f"period: {scheme.period}", file=out)
    print(f"keys: {scheme.num_keys}", file=out)
    print(f"messages: {scheme.num_messages}", file=out)
    print(f"rate: {_fmt(scheme.rate)}", file=out)
    print(f"decode_ok: {ok}/{args.trials}", file=out)
    if verdict.secure:
        print("secrecy: perfect", file=out)
    else:
        w_edges = ",".join(map(str, verdict.witness.edges))
        print(f"secrecy: VIOLATED {w_edges}", file=out)
    params = {"K": args.wiretap, "M": net.beams, "field": scheme.field.m,
              "packet_len": args.packet_len, "seed": args.seed, "trials": args.trials}
    _write_manifest(args, RunManifest("simulate", net.digest(), params))
    if not verdict.secure:
        return EXIT_SECRECY
    if ok != args.trials:
        return EXIT_DECODE
    return EXIT_OK


def cmd_diamond(args, out) -> int:
    caps = _parse_caps(args.caps)
    k = args.wiretap
    try:
        alloc = diamond_capacity(caps, k)
    except DiamondError as exc:
        raise InputError(str(exc)) from None
    print(f"capacity: {_fmt(alloc.value)}", file=out)
    print("allocation: " + ",".join(_fmt(f) for f in alloc.fractions), file=out)
    print(f"equal_split: {_fmt(equal_split_rate(caps, k))}", file=out)
    if k < len(caps):
        print(f"heuristic: {_fmt(equalization_heuristic(caps, k).value)}", file=out)
    code = EXIT_OK
    if args.schedule:
        field = _parse_field(args.field)
        try:
            scheme = diamond_schedule(caps, k, alloc, field, args.packet_len, verify=False)
            verdict = verify_all_subsets(scheme, k)
        except (SchemeError, AdversaryError) as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_SCHEME
        print(f"period: {scheme.period}", file=out)
        print("slots: " + ",".join(map(str, scheme.info["slots_per_path"])), file=out)
        print("loads: " + ",".join(map(str, scheme.info["loads"])), file=out)
        print(f"coded: {scheme.num_coded}", file=out)
        print(f"keys: {scheme.num_keys}", file=out)
        print(f"messages: {scheme.num_messages}", file=out)
        print(f"rate: {_fmt(scheme.rate)}", file=out)
        if verdict.secure:
            print("secrecy: perfect", file=out)
        else:
            print("secrecy: VIOLATED " + ",".join(map(str, verdict.witness.edges)), file=out)
            code = EXIT_SECRECY
    params = {"K": k, "caps": [_fmt(c) for c in caps], "schedule": bool(args.schedule)}
    _write_manifest(args, RunManifest("diamond", None, params))
    return code


def cmd_check_lemma(args, out) -> int:
    n, m = args.vars, args.subset
    if n < 1 or not 0 <= m <= n:
        raise InputError(f"need L >= 1 and 0 <= m <= L, got L={n}, m={m}")
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    sizes = (args.alphabet,) * n
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    min_margin = None
    try:
        for i in range(args.trials):
            pmf = random_pmf(rng, sizes, PMF_KINDS[i % len(PMF_KINDS)])
            _, margin = verify_subset_lemma(pmf, m)
            min_margin = margin if min_margin is None else min(min_margin, margin)
    except LemmaViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"trials: {i + 1}", file=out)
        print("lemma_holds: no", file=out)
        return EXIT_LEMMA
    except EntropyError as exc:
        raise InputError(str(exc)) from None
    print(f"trials: {args.trials}", file=out)
    print(f"vars: {n}", file=out)
    print(f"subset: {m}", file=out)
    print(f"min_margin: {min_margin + 0.0:.12g}", file=out)
    print("lemma_holds: yes", file=out)
    params = {"L": n, "m": m, "trials": args.trials, "seed": args.seed, "alphabet": args.alphabet}
    _write_manifest(args, RunManifest("check-lemma", None, params))
    return EXIT_OK


def cmd_gen_diamond(args, out) -> int:
    if args.relays < 1:
        raise InputError("need at least one relay")
    print(f"# unit diamond, N = {args.relays}", file=out)
    out.write(serialize_network(unit_diamond(args.relays, args.beams)))
    return EXIT_OK


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secure121", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--manifest", help="write a JSON run manifest to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="capacity bounds for a unit-capacity network")
    p.add_argument("network")
    p.add_argument("--wiretap", "-K", type=_nonneg, default=0)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="build the secure scheme, round-trip it, verify secrecy")
    p.add_argument("network")
    p.add_argument("--wiretap", "-K", type=_nonneg, default=0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", help="2^m, m in {1,4,8,16}; default: smallest that fits")
    p.add_argument("--packet-len", type=int, default=64)
    p.add_argument("--dump", help="write the first trial's schedule here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("diamond", help="secure capacity of a diamond with per-path capacities")
    p.add_argument("--caps", required=True, help="comma-separated positive rationals, e.g. 3,2,2,1")
    p.add_argument("--wiretap", "-K", type=_nonneg, default=0)
    p.add_argument("--schedule", action="store_true")
    p.add_argument("--field")
    p.add_argument("--packet-len", type=int, default=64)
    p.set_defaults(func=cmd_diamond)

    p = sub.add_parser("check-lemma", help="brute-force the subset-entropy inequality on random pmfs")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--subset", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", type=int, default=3)
    p.set_defaults(func=cmd_check_lemma)

    p = sub.add_parser("gen-diamond", help="print the .net file of an N-relay unit diamond")
    p.add_argument("relays", type=int)
    p.add_argument("--beams", type=int, default=1)
    p.set_defaults(func=cmd_gen_diamond)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, NetworkError, NonUnitCapacity, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
