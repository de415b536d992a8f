"""Command-line entry point: ``infocluster <subcommand> [flags]``.

Exit status: 0 when the run passes, 1 on a verification failure (the JSON
report then carries a counterexample), 2 on usage or I/O errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import daisy, triple
from .clusters import distance_matrix
from .formats import dump_json, member_to_json, read_stream, set_member_parser, to_plain
from .models import DescriptionSystem, SetModel
from .ncd import CompressorError, CompressorHandle, read_corpus
from .pipeline import cluster_matrix, run_pipeline
from .verify import DEFAULT_SEED, SUITES, run_verify_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# Largest universe each exhaustive suite accepts through --universe.
VERIFY_UNIVERSE_LIMITS = {"chain": 12, "nonshannon": 4, "triple": 5, "daisy": 7}
# Set-model matrices list every subset, so keep them printable.
MATRIX_UNIVERSE_LIMIT = 10


class UsageError(Exception):
    pass


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return int(value) if value.is_integer() else value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infocluster", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def model_flags(p, backends=("set", "table")):
        p.add_argument("--backend", choices=backends, default=backends[0])
        p.add_argument("--universe", type=_nonnegative_int, default=4, help="set-model universe size (default 4)")
        p.add_argument("--model", type=Path, help="description-system JSON (table backend)")

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES), help="repeatable; default: all suites")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for randomized suites (default {DEFAULT_SEED})")
    p.add_argument("--exhaustive-points", type=_nonnegative_int, default=10)
    p.add_argument("--universe", type=_nonnegative_int, help="universe for the exhaustive set-model suites")
    p.add_argument("--registry", type=Path, help="also check a stored registry JSON")
    p.add_argument("--out", type=Path, help="directory for verify.json")

    p = sub.add_parser("matrix", help="write a pairwise distance matrix")
    model_flags(p, ("set", "table", "ncd"))
    p.add_argument("--input", type=Path, help="corpus directory (ncd backend)")
    p.add_argument("--compressor", default="builtin", help="builtin | cmd:TEMPLATE")
    p.add_argument("--workers", type=_nonnegative_int, default=1)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("clusters", help="mine (m, l)-clusters and draw a dendrogram")
    model_flags(p, ("ncd", "set", "table"))
    p.add_argument("--input", type=Path, help="corpus directory (ncd backend)")
    p.add_argument("--compressor", default="builtin", help="builtin | cmd:TEMPLATE")
    p.add_argument("--workers", type=_nonnegative_int, default=1)
    p.add_argument("--m", type=_nonnegative_float, help="diameter bound in bits (default: widest linkage gap)")
    p.add_argument("--l", type=_nonnegative_int, default=0)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("daisy", help="members and diameter of a daisy around a core")
    model_flags(p)
    p.add_argument("--core", required=True, help="string id, or comma-separated positions for the set backend")
    p.add_argument("--m", type=_nonnegative_int, required=True)
    p.add_argument("--d", type=_nonnegative_int, required=True)
    p.add_argument("--out", type=Path)

    for name, text in (("referential", "filter a cluster stream into a referential registry"),
                       ("certify", "certify the core of one stream cluster")):
        p = sub.add_parser(name, help=text)
        model_flags(p)
        p.add_argument("--stream", type=Path, required=True, help='JSON lines of {"members": [...]}')
        p.add_argument("--m", type=_nonnegative_int, required=True)
        p.add_argument("--d", type=_nonnegative_int, required=True)
        p.add_argument("--dprime", type=_nonnegative_int, help="default 2d+2")
        p.add_argument("--out", type=Path)
        if name == "referential":
            p.add_argument("--no-validate", action="store_true", help="skip the per-cluster diameter check")
        else:
            p.add_argument("--target", type=_nonnegative_int, default=0, help="stream position of S (default 0)")

    p = sub.add_parser("triple", help="triple-information report for three set-model strings")
    p.add_argument("--universe", type=_nonnegative_int, required=True)
    for flag in ("--x", "--y", "--z"):
        p.add_argument(flag, required=True, help="comma-separated positions")
    p.add_argument("--delta", type=_nonnegative_int, help="also check the clone cluster at this tolerance")
    p.add_argument("--out", type=Path)
    return parser


def _model(args):
    if args.backend == "table":
        if args.model is None:
            raise UsageError("--model FILE is required for the table backend")
        return DescriptionSystem.load(args.model), (lambda x: x)
    if not 1 <= args.universe <= MATRIX_UNIVERSE_LIMIT:
        raise UsageError(f"--universe must be in 1..{MATRIX_UNIVERSE_LIMIT}")
    return SetModel(args.universe), set_member_parser(args.universe)


def _emit(args, filename: str, payload: dict) -> None:
    text = json.dumps(payload, indent=1)
    if getattr(args, "out", None) is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        dump_json(args.out / filename, payload)
    print(text)


def cmd_verify(args) -> int:
    names = args.suite or list(SUITES)
    if args.universe is not None:
        for name in names:
            limit = VERIFY_UNIVERSE_LIMITS.get(name)
            if limit is not None and not 1 <= args.universe <= limit:
                raise UsageError(f"--universe {args.universe} is too large for suite {name!r} (limit {limit})")
    if args.exhaustive_points > 12:
        raise UsageError("--exhaustive-points is limited to 12")
    registry = None
    if args.registry is not None:
        registry = daisy.ReferentialRegistry.from_json(json.loads(args.registry.read_text()))
    report = run_verify_suite(names, args.seed, args.exhaustive_points, args.universe, registry)
    for s in report.suites:
        print(f"{'PASS' if s.passed else 'FAIL'} {s.name}: {s.instances} instances in {s.seconds:.2f}s", file=sys.stderr)
    payload = report.to_json()
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        dump_json(args.out / "verify.json", payload)
    print(json.dumps({"passed": report.passed, "failed": [s.name for s in report.suites if not s.passed]}))
    return EXIT_OK if report.passed else EXIT_FAIL


def _ncd_compressor(args) -> CompressorHandle:
    try:
        return CompressorHandle.parse(args.compressor)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_matrix(args) -> int:
    if args.backend == "ncd":
        if args.input is None:
            raise UsageError("--input DIR is required for the ncd backend")
        corpus = read_corpus(args.input)
        if not corpus:
            raise FileNotFoundError(f"no regular files under {args.input}")
        matrix = distance_matrix(corpus, _ncd_compressor(args), workers=max(args.workers, 1))
    else:
        model, _ = _model(args)
        matrix = distance_matrix(list(model.strings), model)
    args.out.mkdir(parents=True, exist_ok=True)
    matrix.write_csv(args.out / "matrix.csv")
    print(json.dumps({"items": len(matrix.ids), "units": matrix.units, "path": str(args.out / "matrix.csv")}))
    return EXIT_OK


def cmd_clusters(args) -> int:
    if args.backend == "ncd":
        if args.input is None:
            raise UsageError("--input DIR is required for the ncd backend")
        result = run_pipeline(args.input, args.out, args.m, args.l, _ncd_compressor(args), workers=max(args.workers, 1))
    else:
        model, _ = _model(args)
        result = cluster_matrix(distance_matrix(list(model.strings), model), args.out, args.m, args.l)
    print(json.dumps({"items": len(result.matrix.ids), "m": result.m, "l": result.l,
                      "clusters": [len(c) for c in result.clusters]}))
    return EXIT_OK


def cmd_daisy(args) -> int:
    model, parse = _model(args)
    core = parse(args.core)
    if core not in model:
        raise UsageError(f"core {args.core!r} is not a string of the model")
    check = daisy.daisy_cluster_check(core, args.m, args.d, model)
    members = sorted(daisy.daisy_members(core, args.m, args.d, model), key=str)
    payload = {"core": member_to_json(core), "m": args.m, "d": args.d,
               "members": [member_to_json(x) for x in members],
               "diameter": _finite(check.diameter), "bound": check.bound, "passed": check.passed}
    _emit(args, "daisy.json", payload)
    return EXIT_OK if check.passed else EXIT_FAIL


def _finite(v):
    return "inf" if v == float("inf") else v


def _stream_and_registry(args, validate: bool):
    model, parse = _model(args)
    dprime = 2 * args.d + 2 if args.dprime is None else args.dprime
    if args.d > args.m:
        raise UsageError("--d must not exceed --m")
    stream = read_stream(args.stream, parse)
    for pos, cluster in enumerate(stream):
        unknown = [x for x in cluster if x not in model]
        if unknown:
            raise UsageError(f"stream element {pos} names unknown strings {unknown[:3]}")
    registry = daisy.referential_filter(stream, args.m, args.d, dprime, model if validate else None)
    return model, stream, registry


def cmd_referential(args) -> int:
    model, stream, registry = _stream_and_registry(args, not args.no_validate)
    payload = {"registry": registry.to_json(), "violations": registry.violations()}
    ok = not payload["violations"]
    if registry.dprime > 2 * registry.d + 1:
        try:
            check = daisy.multiplicity_check(registry, model)
        except ValueError as exc:
            payload["multiplicity"] = {"skipped": str(exc)}
        else:
            payload["multiplicity"] = {"max": check.max_multiplicity, "bound": check.bound,
                                       "passed": check.passed, "witness": check.witness}
            ok = ok and check.passed
    payload["passed"] = ok
    _emit(args, "registry.json", _plain(payload))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_certify(args) -> int:
    model, stream, registry = _stream_and_registry(args, True)
    if args.target >= len(stream):
        raise UsageError(f"--target {args.target} is beyond the stream of {len(stream)} clusters")
    S = stream[args.target]
    cert = daisy.certify_core(S, registry, model)
    decoded = daisy.decode_members(cert, registry, model)
    cores = all(daisy.decode_core(cert, registry, model, x) == cert.ordinal for x in S)
    ok = cert.passed and decoded == set(S) and cores
    payload = {"certificate": cert.to_json(), "round_trip": decoded == set(S), "core_recovered": cores, "passed": ok}
    _emit(args, "certificate.json", _plain(payload))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_triple(args) -> int:
    if not 1 <= args.universe <= 20:
        raise UsageError("--universe must be in 1..20 for triple reports")
    parse = set_member_parser(args.universe)
    x, y, z = parse(args.x), parse(args.y), parse(args.z)
    report = triple.extract_triple_core(x, y, z)
    payload = report.to_json()
    ok = report.w_complexity == report.triple_info and tuple(report.residuals) == (0, 0, 0)
    if args.delta is not None:
        check = triple.clone_cluster_check(x, y, z, args.delta)
        payload["clones"] = _plain(check.__dict__)
        ok = ok and check.passed
    payload["passed"] = ok
    _emit(args, "triple.json", _plain(payload))
    return EXIT_OK if ok else EXIT_FAIL


def _plain(obj):
    return json.loads(json.dumps(to_plain(obj), default=str))


COMMANDS = {
    "verify": cmd_verify,
    "matrix": cmd_matrix,
    "clusters": cmd_clusters,
    "daisy": cmd_daisy,
    "referential": cmd_referential,
    "certify": cmd_certify,
    "triple": cmd_triple,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"infocluster {args.command}: {exc}", file=sys.stderr)
    except (OSError, ValueError, KeyError, LookupError, CompressorError, json.JSONDecodeError) as exc:
        print(f"infocluster {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
