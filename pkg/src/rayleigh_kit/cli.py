"""Command-line front end.

Subcommands: verify, delta, certificate, tables, enumerate, sample.  Matroid
arguments name either a JSON file (basis or geometry form) or a catalog
instance such as ``K4``, ``fig2.III`` or ``U_2_5``.  Exit codes: 0 success /
everything verified, 1 a verification failure was found, 2 usage or input
errors.  Output is byte-deterministic for a fixed invocation and seed.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

from .catalog import catalog_names, enumerate_simple_rank3, named
from .certificate import REPORT_SCHEMA, certify, table_coefficients
from .matroid import Matroid, loads_matroid, matroid_to_json_dict
from .poly import GGHH, GGHI, GHIJ, format_polynomial
from .rayleigh import PairContext, negative_correlation_sample, rayleigh_difference

_FAMILY_SHAPES = {
    GGHH: "y_g^2 y_h^2",
    GGHI: "y_g^2 y_h y_i",
    GHIJ: "y_g y_h y_i y_j",
}


class CliError(Exception):
    """Usage or input problem; maps to exit code 2."""


def _load_matroid(token: str) -> tuple[Matroid, list[str]]:
    """Interpret the MATROID argument as a file path or a catalog name."""
    if os.path.exists(token):
        try:
            with open(token, "r", encoding="utf-8") as fh:
                m = loads_matroid(fh.read())
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot load matroid file {token!r}: {exc}") from exc
    else:
        try:
            m = named(token)
        except (KeyError, ValueError) as exc:
            raise CliError(
                f"{token!r} is neither a file nor a catalog name "
                f"(catalog: {', '.join(catalog_names())}, or U_r_m)"
            ) from exc
    notes = []
    loops = m.loops()
    if loops:
        # Loops never lie in a basis, so removing them changes no check.
        m = m.delete(loops)
        notes.append(f"removed loops: {', '.join(loops)}")
    return m, notes


def _parse_pairs(m: Matroid, args: argparse.Namespace) -> list[tuple[str, str]]:
    if getattr(args, "pairs", None):
        out = []
        for token in args.pairs:
            pieces = [p.strip() for p in token.split(",")]
            if len(pieces) != 2:
                raise CliError(f"--pairs expects 'e,f', got {token!r}")
            e, f = pieces
            for el in (e, f):
                if el not in m.elements:
                    raise CliError(f"element {el!r} not in the ground set")
            if e == f:
                raise CliError("pair elements must be distinct")
            out.append((e, f))
        return out
    return list(itertools.combinations(m.elements, 2))


def _jobs(args: argparse.Namespace) -> int:
    if getattr(args, "jobs", None) is not None:
        value = args.jobs
    else:
        raw = os.environ.get("RAYLEIGH_KIT_JOBS", "1")
        try:
            value = int(raw)
        except ValueError as exc:
            raise CliError(f"RAYLEIGH_KIT_JOBS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise CliError("--jobs must be at least 1")
    return value


def _map_ordered(fn: Callable, items: Iterable, jobs: int) -> list:
    """Apply fn over items, optionally in a thread pool, preserving order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _emit_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _format_point(m: Matroid, point: dict) -> str:
    return ", ".join(f"{el}={point[el]}" for el in m.elements if el in point)


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args: argparse.Namespace) -> int:
    m, notes = _load_matroid(args.matroid)
    pairs = _parse_pairs(m, args)
    if m.rank > 3:
        return _verify_sampled(args, m, notes, pairs)
    reports = _map_ordered(lambda p: certify(m, p[0], p[1]), pairs, _jobs(args))
    all_ok = all(r.verdict for r in reports)
    if args.format == "json":
        _emit_json(
            {
                "schema": REPORT_SCHEMA,
                "kind": "verify",
                "input": args.matroid,
                "notes": notes,
                "rank": m.rank,
                "reports": [r.to_json_dict() for r in reports],
                "all_verified": all_ok,
            }
        )
    else:
        for note in notes:
            print(f"note: {note}")
        for rep in reports:
            e, f = rep.pair
            if rep.verdict:
                detail = f"mode={rep.mode}"
                if rep.reduction_chain:
                    detail += f", deleted [{', '.join(rep.reduction_chain)}]"
                print(f"pair {{{e},{f}}}: certified ({detail})")
            else:
                print(
                    f"pair {{{e},{f}}}: NOT CERTIFIED (mode={rep.mode}; "
                    "dominance fails, which does not itself exhibit a "
                    "negative point)"
                )
        print(f"{sum(r.verdict for r in reports)}/{len(reports)} pairs certified")
    return 0 if all_ok else 1


def _verify_sampled(
    args: argparse.Namespace, m: Matroid, notes: list[str],
    pairs: list[tuple[str, str]],
) -> int:
    result = negative_correlation_sample(
        m, pairs=pairs, samples=args.samples, seed=args.seed
    )
    by_pair = {v.pair: v for v in result.violations}
    unverified = f"unverified (rank > 3): no negative point found in {args.samples} samples"
    if args.format == "json":
        _emit_json(
            {
                "schema": REPORT_SCHEMA,
                "kind": "verify",
                "input": args.matroid,
                "notes": notes,
                "rank": m.rank,
                "mode": "sampled",
                "samples": args.samples,
                "seed": args.seed,
                "reports": [
                    {
                        "pair": list(pair),
                        "status": "violation" if pair in by_pair else "unverified",
                        "violation_point": (
                            {el: str(w) for el, w in by_pair[pair].point.items()}
                            if pair in by_pair
                            else None
                        ),
                    }
                    for pair in pairs
                ],
                "all_verified": False,
                "violations": len(result.violations),
            }
        )
    else:
        for note in notes:
            print(f"note: {note}")
        for pair in pairs:
            e, f = pair
            if pair in by_pair:
                point = _format_point(m, by_pair[pair].point)
                print(f"pair {{{e},{f}}}: VIOLATION at y = {point}")
            else:
                print(f"pair {{{e},{f}}}: {unverified}")
    return 1 if result.violations else 0


# ---------------------------------------------------------------------------
# delta


def cmd_delta(args: argparse.Namespace) -> int:
    m, notes = _load_matroid(args.matroid)
    if args.e is not None or args.f is not None:
        if args.e is None or args.f is None:
            raise CliError("give both elements: delta MATROID E F")
        if args.pairs:
            raise CliError("use either positional E F or --pairs, not both")
        pairs = _parse_pairs(m, argparse.Namespace(pairs=[f"{args.e},{args.f}"]))
    else:
        pairs = _parse_pairs(m, args)
    deltas = [
        (pair, rayleigh_difference(PairContext(m, pair[0], pair[1])))
        for pair in pairs
    ]
    if args.format == "json":
        _emit_json(
            {
                "schema": REPORT_SCHEMA,
                "kind": "delta",
                "input": args.matroid,
                "notes": notes,
                "pairs": [
                    {"pair": list(pair), "delta": format_polynomial(d)}
                    for pair, d in deltas
                ],
            }
        )
    elif args.e is not None:
        # Single explicit pair: print the bare polynomial.
        print(format_polynomial(deltas[0][1]))
    else:
        for note in notes:
            print(f"note: {note}")
        for (e, f), d in deltas:
            print(f"delta {{{e},{f}}}: {format_polynomial(d)}")
    return 0


# ---------------------------------------------------------------------------
# certificate


def cmd_certificate(args: argparse.Namespace) -> int:
    m, notes = _load_matroid(args.matroid)
    pairs = _parse_pairs(m, args)
    try:
        reports = _map_ordered(lambda p: certify(m, p[0], p[1]), pairs, _jobs(args))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if args.format == "text":
        for note in notes:
            print(f"note: {note}")
        for rep in reports:
            e, f = rep.pair
            verdict = "certified" if rep.verdict else "NOT CERTIFIED"
            print(f"pair {{{e},{f}}}: {verdict} (mode={rep.mode})")
            if rep.reduction_chain:
                print(f"  deleted: {', '.join(rep.reduction_chain)}")
            print(f"  delta    = {format_polynomial(rep.delta)}")
            print(f"  ansatz   = {format_polynomial(rep.P)}")
            print(f"  residual = {format_polynomial(rep.residual)}")
            for a, root in rep.square_terms:
                print(f"  square[{a}] = {format_polynomial(root)}")
    else:
        _emit_json(
            {
                "schema": REPORT_SCHEMA,
                "kind": "certificate-set",
                "input": args.matroid,
                "notes": notes,
                "reports": [r.to_json_dict() for r in reports],
                "all_verified": all(r.verdict for r in reports),
            }
        )
    return 0 if all(r.verdict for r in reports) else 1


# ---------------------------------------------------------------------------
# tables


def _family_choices(value: str) -> list[str]:
    if value == "all":
        return [GGHH, GGHI, GHIJ]
    return [value]


def cmd_tables(args: argparse.Namespace) -> int:
    families = _family_choices(args.family)
    reports = [table_coefficients(fam) for fam in families]
    if args.format == "json":
        _emit_json(
            {
                "schema": REPORT_SCHEMA,
                "kind": "tables",
                "families": [
                    {
                        "family": rep.family,
                        "shape": _FAMILY_SHAPES[rep.family],
                        "rows": [
                            {
                                "label": chk.row.label,
                                "instance": chk.row.instance,
                                "expected": {
                                    "positive": chk.row.positive,
                                    "negative": chk.row.negative,
                                    "delta": chk.row.delta,
                                    "ansatz_allowed": [str(v) for v in chk.row.p_allowed],
                                    "note": chk.row.note,
                                },
                                "computed": {
                                    "positive": chk.positive,
                                    "negative": chk.negative,
                                    "delta": chk.delta,
                                    "ansatz": str(chk.p_value),
                                },
                                "match": chk.ok,
                            }
                            for chk in rep.checks
                        ],
                        "scan": {
                            "occurrences": rep.scan_occurrences,
                            "rows": [
                                {
                                    "label": usage.label,
                                    "occurrences": usage.occurrences,
                                    "ansatz_observed": [str(v) for v in usage.p_observed],
                                }
                                for usage in rep.scan_rows
                            ],
                            "unmatched": list(rep.unmatched),
                            "mismatches": list(rep.mismatches),
                            "uncovered": list(rep.uncovered),
                        },
                        "all_match": rep.all_match,
                    }
                    for rep in reports
                ],
                "all_match": all(rep.all_match for rep in reports),
            }
        )
    else:
        for rep in reports:
            print(f"monomial shape {_FAMILY_SHAPES[rep.family]}")
            header = (
                f"  {'row':<12} {'expected':<10} {'computed':<10} "
                f"{'ansatz allowed':<16} {'ansatz':<8} result"
            )
            print(header)
            for chk in rep.checks:
                expected = f"{chk.row.positive}-{chk.row.negative}={chk.row.delta}"
                computed = f"{chk.positive}-{chk.negative}={chk.delta}"
                allowed = ",".join(str(v) for v in chk.row.p_allowed)
                result = "MATCH" if chk.ok else "MISMATCH"
                print(
                    f"  {chk.row.label:<12} {expected:<10} {computed:<10} "
                    f"{allowed:<16} {str(chk.p_value):<8} {result}"
                )
            scan_state = (
                "complete"
                if not (rep.unmatched or rep.mismatches or rep.uncovered)
                else "INCOMPLETE"
            )
            print(
                f"  scan: {rep.scan_occurrences} monomial occurrences over the "
                f"n<=6 catalog and bowtie7; classification {scan_state}"
            )
            for line in rep.unmatched + rep.mismatches + rep.uncovered:
                print(f"    problem: {line}")
            print()
        overall = all(rep.all_match for rep in reports)
        print(f"tables: {'all rows MATCH' if overall else 'MISMATCHES FOUND'}")
    return 0 if all(rep.all_match for rep in reports) else 1


# ---------------------------------------------------------------------------
# enumerate


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.out is None:
        raise CliError("enumerate requires --out DIR")
    try:
        result = enumerate_simple_rank3(args.n)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    os.makedirs(args.out, exist_ok=True)
    filenames = []
    for idx, m in enumerate(result.classes):
        fname = f"simple_rank3_n{result.n}_class{idx:03d}.json"
        path = os.path.join(args.out, fname)
        doc = matroid_to_json_dict(m, form="geometry")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        filenames.append(fname)
    if args.format == "json":
        _emit_json(
            {
                "schema": REPORT_SCHEMA,
                "kind": "enumerate",
                "n": result.n,
                "count": result.count,
                "files": filenames,
            }
        )
    else:
        print(f"n={result.n}: {result.count} isomorphism classes")
        for fname in filenames:
            print(f"  {fname}")
    return 0


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args: argparse.Namespace) -> int:
    m, notes = _load_matroid(args.matroid)
    pairs = _parse_pairs(m, args)
    result = negative_correlation_sample(
        m, pairs=pairs, samples=args.samples, seed=args.seed
    )
    ok = result.checks - len(result.violations)
    rate = 100.0 * ok / result.checks if result.checks else 100.0
    if args.format == "json":
        _emit_json(
            {
                "schema": REPORT_SCHEMA,
                "kind": "sample",
                "input": args.matroid,
                "notes": notes,
                "seed": args.seed,
                "samples": result.samples,
                "pairs": [list(p) for p in result.pairs],
                "checks": result.checks,
                "cross_checks": result.cross_checks,
                "violations": [
                    {
                        "pair": list(v.pair),
                        "sample_index": v.sample_index,
                        "point": {el: str(w) for el, w in v.point.items()},
                    }
                    for v in result.violations
                ],
                "pass_rate": f"{rate:.2f}",
            }
        )
    else:
        for note in notes:
            print(f"note: {note}")
        print(
            f"checked {len(result.pairs)} pairs x {result.samples} samples "
            f"= {result.checks} exact comparisons (seed {args.seed})"
        )
        for v in result.violations:
            e, f = v.pair
            print(
                f"VIOLATION pair {{{e},{f}}} sample #{v.sample_index}: "
                f"y = {_format_point(m, v.point)}"
            )
        print(
            f"violations: {len(result.violations)}; "
            f"{result.cross_checks} samples cross-checked against "
            f"polynomial evaluation"
        )
        print(f"pass rate: {rate:.2f}%")
    return 1 if result.violations else 0


# ---------------------------------------------------------------------------
# parser


def _add_common(sub: argparse.ArgumentParser, *, pairs: bool = True) -> None:
    if pairs:
        group = sub.add_mutually_exclusive_group()
        group.add_argument(
            "--pairs",
            action="append",
            metavar="e,f",
            help="check this pair (repeatable); default is all pairs",
        )
        group.add_argument(
            "--all-pairs",
            action="store_true",
            help="check every unordered pair (the default)",
        )
    sub.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    sub.add_argument(
        "--samples", type=int, default=1000,
        help="random weight vectors to draw (default 1000)",
    )
    sub.add_argument(
        "--jobs", type=int, default=None,
        help="worker threads (default: RAYLEIGH_KIT_JOBS or 1)",
    )
    sub.add_argument(
        "--format", choices=("text", "json"), default="text",
        help="output format (default text)",
    )
    sub.add_argument("--out", metavar="DIR", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rayleigh-kit",
        description=(
            "Exact Rayleigh-difference computations, sum-of-squares "
            "certificates and negative-correlation checks for small matroids."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="certify every selected pair")
    p.add_argument("matroid", metavar="MATROID", help="JSON file or catalog name")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("delta", help="print Rayleigh differences")
    p.add_argument("matroid", metavar="MATROID")
    p.add_argument("e", nargs="?", default=None, help="first element")
    p.add_argument("f", nargs="?", default=None, help="second element")
    _add_common(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("certificate", help="emit certificate reports")
    p.add_argument("matroid", metavar="MATROID")
    _add_common(p)
    p.set_defaults(func=cmd_certificate, format="json")

    p = sub.add_parser("tables", help="reproduce the coefficient tables")
    p.add_argument(
        "--family", choices=(GGHH, GGHI, GHIJ, "all"), default="all",
        help="which monomial shape to check (default all)",
    )
    _add_common(p, pairs=False)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("enumerate", help="write all simple rank-3 classes on n points")
    p.add_argument("n", type=int, help="ground set size (3..8)")
    _add_common(p, pairs=False)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sample", help="randomized exact negative-correlation checks")
    p.add_argument("matroid", metavar="MATROID")
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "out", None) and args.command != "enumerate":
            # --out DIR also drops a copy of the report into DIR
            buffer = io.StringIO()
            with contextlib.redirect_stdout(buffer):
                code = args.func(args)
            text = buffer.getvalue()
            sys.stdout.write(text)
            os.makedirs(args.out, exist_ok=True)
            ext = "json" if args.format == "json" else "txt"
            path = os.path.join(args.out, f"{args.command}.{ext}")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
            return code
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
