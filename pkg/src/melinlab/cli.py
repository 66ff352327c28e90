"""Command-line interface.

Subcommands: traceplus | localize | sweep | phase | star.

Exit codes: 0 success / verification pass, 2 invalid input, 3 hypothesis
failure, 4 verification failure.  MELIN_LAB_WORKERS sets the default
worker count for sweeps; row order and file bytes do not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .errors import MelinLabError, ModelFileError, PositivityError
from .invariants import QuadraticData, fundamental_matrix, melin_quantity, trace_plus
from .localize import hypothesis_check, localize
from .modelfile import load_model_file, sweep_spec_from_model
from .sweep import emit_report, lambda_sweep, melin_phase_diagram, render_report
from .symbols import PolynomialSymbol, moyal_star

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_HYPOTHESIS = 3
EXIT_VERIFICATION = 4


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_INVALID


def _resolve_workers(value: int | None) -> int:
    if value is not None:
        if value < 1:
            raise MelinLabError(f"--workers must be >= 1, got {value}")
        return value
    raw = os.environ.get("MELIN_LAB_WORKERS")
    if raw is None:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise MelinLabError(f"MELIN_LAB_WORKERS must be a positive integer, got {raw!r}")
    if workers < 1:
        raise MelinLabError(f"MELIN_LAB_WORKERS must be a positive integer, got {raw!r}")
    return workers


def _parse_matrix(text: str) -> np.ndarray:
    rows = [r.strip() for r in text.split(";") if r.strip()]
    try:
        mat = np.array([[float(v) for v in r.split()] for r in rows])
    except ValueError as exc:
        raise MelinLabError(f"cannot parse matrix {text!r}: {exc}")
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise MelinLabError(f"matrix must be square, got shape {mat.shape}")
    if mat.shape[0] % 2:
        raise MelinLabError(f"matrix size must be even (2d x 2d), got {mat.shape[0]}")
    return mat


def _parse_poly(text: str) -> PolynomialSymbol:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MelinLabError(f"symbol is not valid JSON: {exc}")
    if not isinstance(data, dict) or set(data) != {"d", "terms"}:
        raise MelinLabError('symbol literal must be {"d": ..., "terms": [...]}')
    for term in data["terms"]:
        if not isinstance(term, dict) or set(term) != {"c", "y", "eta"}:
            raise MelinLabError('each term must be {"c": [re, im], "y": [...], "eta": [...]}')
        if len(term["y"]) != data["d"] or len(term["eta"]) != data["d"]:
            raise MelinLabError(f"exponent lists must have length d={data['d']}")
    try:
        return PolynomialSymbol.from_dict(data)
    except (MelinLabError, ValueError, TypeError, KeyError) as exc:
        raise MelinLabError(f"bad symbol literal: {exc}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_traceplus(args: argparse.Namespace) -> int:
    if args.h_file:
        try:
            with open(args.h_file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            return _fail(str(exc))
        stripped = text.strip()
        if stripped.startswith("["):
            hessian = np.array(json.loads(stripped), dtype=float)
            if hessian.ndim != 2 or hessian.shape[0] != hessian.shape[1] or hessian.shape[0] % 2:
                return _fail(f"matrix in {args.h_file} must be square of even size")
        else:
            hessian = _parse_matrix(stripped.replace("\n", ";"))
    else:
        hessian = _parse_matrix(args.h)
    d = hessian.shape[0] // 2
    try:
        q = QuadraticData(d=d, hessian=hessian, subprincipal=args.s)
        f = fundamental_matrix(q)
        tplus = trace_plus(q)
        melin = melin_quantity(q)
    except PositivityError as exc:
        print(f"hypothesis violated: the quadratic form must be >= 0 ({exc})", file=sys.stderr)
        return EXIT_INVALID
    if args.json:
        print(json.dumps({
            "d": d,
            "F": f.tolist(),
            "trace_plus": tplus,
            "melin": melin,
        }, indent=2))
    else:
        print("F =")
        print(np.array2string(f))
        print(f"trace_plus = {tplus:.12g}")
        print(f"melin = {melin:.12g}")
    return EXIT_OK


def cmd_localize(args: argparse.Namespace) -> int:
    symbol, _, _ = load_model_file(args.model)
    diagnosis = hypothesis_check(symbol)
    op = localize(symbol, strict=False)
    if args.dump_matrix:
        with open(args.dump_matrix, "w", encoding="utf-8") as fh:
            json.dump({
                "d": op.matrix.d,
                "n": op.matrix.n,
                "hbar": op.matrix.hbar,
                "re": op.matrix.entries.real.tolist(),
                "im": op.matrix.entries.imag.tolist(),
            }, fh, indent=2)
            fh.write("\n")
    if args.json:
        print(json.dumps({
            "symbol": op.symbol.to_dict(),
            "k": op.k,
            "lambda_min": op.lambda_min,
            "truncations": list(op.sweep.truncations),
            "sweep_values": list(op.sweep.values),
            "diagnosis": {
                "vanishing_ok": diagnosis.vanishing_ok,
                "vanishing_violations": {
                    str(j): v for j, v in diagnosis.vanishing_violations.items()
                },
                "ellipticity_ok": diagnosis.ellipticity_ok,
                "ellipticity_min": diagnosis.ellipticity_min,
                "positivity_ok": diagnosis.positivity_ok,
                "ok": diagnosis.ok,
            },
        }, indent=2))
    else:
        print(f"localized symbol (hbar = 1): {op.symbol}")
        print(f"k = {op.k}, d = {op.symbol.d}")
        ladder = ", ".join(
            f"N={n}: {v:.12g}" for n, v in zip(op.sweep.truncations, op.sweep.values)
        )
        print(f"truncation sweep: {ladder} (last gap {op.sweep.last_gap:.3g})")
        print(f"lambda_min = {op.lambda_min:.12g}")
        print("hypothesis diagnosis:")
        for line in diagnosis.summary_lines():
            print("  " + line)
    return EXIT_OK if diagnosis.ok else EXIT_HYPOTHESIS


def cmd_sweep(args: argparse.Namespace) -> int:
    symbol, sweep_section, _ = load_model_file(args.model)
    if sweep_section is None:
        raise ModelFileError(f"model file {args.model} has no \"sweep\" section")
    spec = sweep_spec_from_model(symbol, sweep_section)
    workers = _resolve_workers(args.workers)
    report = lambda_sweep(spec, workers=workers)
    emit_report(report, args.format, args.out)
    if args.json:
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        for r in report.rows:
            print(
                f"lambda={r.lam:g} n_used={r.n_used} lambda_min={r.lambda_min:.9g} "
                f"scaled={r.scaled:.9g} reference={r.reference:.9g}"
            )
        print(f"slope = {report.slope:.4f} (target {-report.k})")
        for note in report.notes:
            print(f"note: {note}")
        for reason in report.reasons:
            print(f"reason: {reason}")
        print(f"verdict: {report.verdict}")
        print(f"wrote {args.out}")
    return EXIT_OK if report.verdict == "pass" else EXIT_VERIFICATION


def cmd_phase(args: argparse.Namespace) -> int:
    symbol, _, phase_section = load_model_file(args.model)
    if phase_section is None:
        raise ModelFileError(f"model file {args.model} has no \"phase\" section")
    del symbol  # the phase grid is defined by its own section
    rng = {}
    for key in ("alpha", "beta", "gamma", "s"):
        lo, hi, count = phase_section[key]
        if int(count) < 1:
            raise ModelFileError(f"phase range {key} needs a positive count")
        rng[key] = np.linspace(lo, hi, int(count))
    workers = _resolve_workers(args.workers)
    report = melin_phase_diagram(
        rng["alpha"], rng["beta"], rng["gamma"], rng["s"],
        truncation=phase_section.get("truncation", 64),
        workers=workers,
    )
    if args.out:
        if args.format == "json":
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(report.to_json_dict(), fh, indent=2)
                fh.write("\n")
        else:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["alpha", "beta", "gamma", "s", "melin", "lambda_min", "error"])
                for p in report.points:
                    writer.writerow([format(v, ".17g") for v in
                                     (p.alpha, p.beta, p.gamma, p.s, p.melin, p.lambda_min, p.error)])
    if args.json:
        print(json.dumps({
            "points": len(report.points),
            "skipped": len(report.skipped),
            "max_error": report.max_error,
        }, indent=2))
    else:
        print(f"phase diagram: {len(report.points)} points, {len(report.skipped)} skipped")
        if report.points:
            worst = max(report.points, key=lambda p: p.error)
            print(
                f"max |lambda_min - melin| = {report.max_error:.3e} at "
                f"(alpha={worst.alpha:g}, beta={worst.beta:g}, gamma={worst.gamma:g}, s={worst.s:g})"
            )
        if args.out:
            print(f"wrote {args.out}")
    return EXIT_OK


def cmd_star(args: argparse.Namespace) -> int:
    a = _parse_poly(args.a)
    b = _parse_poly(args.b)
    if args.hbar < 0:
        raise MelinLabError(f"--hbar must be >= 0, got {args.hbar}")
    result = moyal_star(a, b, args.hbar)
    if args.json:
        print(json.dumps(result.to_dict(), indent=2))
    else:
        print(f"a # b = {result}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="melinlab",
        description="Weyl calculus for graded model operators: invariants, "
                    "localization, and scaling-law verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("traceplus", help="fundamental matrix, plus-trace, and Melin quantity")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--h", help='Hessian, rows separated by ";" (e.g. "2 0; 0 2")')
    group.add_argument("--h-file", help="file containing the Hessian (rows or a JSON array)")
    p.add_argument("--s", type=float, default=0.0, help="subprincipal constant (default 0)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_traceplus)

    p = sub.add_parser("localize", help="localized operator and hypothesis diagnosis")
    p.add_argument("model", help="model file (JSON)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--dump-matrix", metavar="PATH",
                   help="write the localized matrix entries as JSON for debugging")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("sweep", help="run the Lambda scaling sweep of a model")
    p.add_argument("model", help="model file (JSON) with a \"sweep\" section")
    p.add_argument("--out", required=True, help="report output path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel rows (default: MELIN_LAB_WORKERS or 1)")
    p.add_argument("--json", action="store_true", help="machine-readable console summary")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("phase", help="quadratic-model phase diagram vs the Melin quantity")
    p.add_argument("model", help="model file (JSON) with a \"phase\" section")
    p.add_argument("--out", help="optional table output path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel grid columns (default: MELIN_LAB_WORKERS or 1)")
    p.add_argument("--json", action="store_true", help="machine-readable console summary")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("star", help="Moyal star product of two polynomial symbols")
    p.add_argument("--a", required=True, help="left symbol as a JSON literal")
    p.add_argument("--b", required=True, help="right symbol as a JSON literal")
    p.add_argument("--hbar", type=float, required=True, help="star parameter")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_star)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelFileError as exc:
        return _fail(str(exc))
    except MelinLabError as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
