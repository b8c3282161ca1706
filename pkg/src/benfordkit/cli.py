"""Command-line interface: ``benfordkit {analyze,spectrum,sample,verify}``.

Exit codes: 0 success, 1 verdict failure (``analyze --strict``, ``verify``),
2 usage error, 3 I/O error or no usable rows.
"""
import argparse
import csv
import json
import math
import re
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__, harness
from .conformance import analyze, digit_histogram
from .distributions import (
    FejerVariate, LatticeVariate, UniformExponentVariate, analytic_benford_spectrum, parse_family,
)
from .modmath import Base
from .spectrum import N_MAX_SCAN, scan_spectrum, spectrum_upper_bound

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

#: values outside [MIN_VALUE, MAX_VALUE] are dropped as non-representable
MIN_VALUE, MAX_VALUE = 1e-300, 1e300
_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_NONZERO_DIGIT = re.compile(r"[1-9]")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass
class IngestionSummary:
    column: str
    rows_read: int = 0
    rows_used: int = 0
    rows_dropped_nonpositive: int = 0
    rows_dropped_unparseable: int = 0
    rows_dropped_out_of_range: int = 0
    header: bool = False

    def to_json(self):
        return asdict(self)


def _classify(text):
    """Return (value, reason); reason is None for a usable value."""
    s = text.strip()
    if not _NUMBER.match(s):
        return None, "unparseable"
    v = float(s)
    mantissa = s.lower().split("e")[0]
    if v == 0.0 and _NONZERO_DIGIT.search(mantissa):
        # nonzero literal that underflowed
        return None, "nonpositive" if s.startswith("-") else "out_of_range"
    if v <= 0:
        return None, "nonpositive"
    if v < MIN_VALUE or v > MAX_VALUE:
        return None, "out_of_range"
    return v, None


def _is_number(text):
    return bool(_NUMBER.match(text.strip()))


def read_column(path, column=None):
    """Read one numeric column from a comma-separated file (``-`` for stdin).

    The first row is a header when none of its fields is numeric. ``column``
    is a header name or a 0-based index; the default is the first column.
    """
    try:
        if str(path) == "-":
            rows = list(csv.reader(sys.stdin))
        else:
            with open(path, newline="", encoding="utf-8") as fh:
                rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    rows = [r for r in rows if r and any(f.strip() for f in r)]
    header = bool(rows) and not any(_is_number(f) for f in rows[0])
    names = [f.strip() for f in rows[0]] if header else []
    if header:
        rows = rows[1:]
    if column is None:
        idx, label = 0, names[0] if names else "0"
    elif column in names:
        idx, label = names.index(column), column
    elif re.fullmatch(r"\d+", str(column)):
        idx, label = int(column), str(column)
        if names and idx >= len(names):
            raise UsageError(f"column index {idx} out of range for header {names}")
    else:
        raise UsageError(f"no column named {column!r}" + (f" (header: {names})" if names else ""))
    summary = IngestionSummary(column=label, header=header)
    values = []
    for row in rows:
        summary.rows_read += 1
        if idx >= len(row):
            summary.rows_dropped_unparseable += 1
            continue
        v, reason = _classify(row[idx])
        if reason is None:
            values.append(v)
            summary.rows_used += 1
        else:
            key = f"rows_dropped_{reason}"
            setattr(summary, key, getattr(summary, key) + 1)
    return np.asarray(values, dtype=np.float64), summary


def _warn(msg):
    print(f"benfordkit: warning: {msg}", file=sys.stderr)


def _warn_drops(s):
    for reason in ("nonpositive", "unparseable", "out_of_range"):
        n = getattr(s, f"rows_dropped_{reason}")
        if n:
            _warn(f"dropped {n} {reason.replace('_', '-')} row(s) from column {s.column!r}")


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, allow_nan=False)
    if out:
        _write_text(out, text + "\n")
    else:
        print(text)


def _write_text(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from None


def _base(value):
    try:
        return Base(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


# --- commands -------------------------------------------------------------------

def cmd_analyze(args):
    b = _base(10.0 if args.base is None else args.base)
    data, summary = read_column(args.input, args.column)
    _warn_drops(summary)
    if summary.rows_used == 0:
        raise InputError(f"column {summary.column!r} has no usable positive values")
    if args.hist_tsv and not float(b).is_integer():
        raise UsageError("--hist-tsv needs an integer base")
    report = analyze(data, b, n_max=args.nmax)
    if args.base is None:
        report.notes.append("base 10 used by default; the choice of base is arbitrary")
    out = report.to_json()
    out["ingestion"] = summary.to_json()
    if args.hist_tsv:
        lines = [f"# base={float(b):g} m={report.m} column={summary.column}"]
        lines += [f"{d}\t{f:.10g}\t{bf:.10g}" for d, f, bf in digit_histogram(data, b)]
        _write_text(args.hist_tsv, "\n".join(lines) + "\n")
    _emit(out, args.output)
    if args.strict and report.verdict != "benford":
        return EXIT_FAIL
    return EXIT_OK


def _family_model(spec):
    try:
        return parse_family(spec)
    except ValueError as exc:
        raise UsageError(f"bad family spec {spec!r}: {exc}") from None


def cmd_spectrum(args):
    lo, hi = args.range
    if not (1.0 < lo < hi) or not math.isfinite(hi):
        raise UsageError(f"--range needs 1 < b_lo < b_hi, got {lo} {hi}")
    if args.steps < 2 or args.nmax < 1:
        raise UsageError("--steps must be >= 2 and --nmax >= 1")
    if (args.family is None) == (args.input is None):
        raise UsageError("give exactly one of INPUT or --family")
    if args.family is not None:
        model = _family_model(args.family)
        if isinstance(model, LatticeVariate) and np.any(model.values <= 0):
            raise UsageError("a lattice with an atom at 0 has no logarithm")
        source = model
    else:
        data, summary = read_column(args.input, args.column)
        _warn_drops(summary)
        if summary.rows_used == 0:
            raise InputError(f"column {summary.column!r} has no usable positive values")
        source = np.log(data)
    est = scan_spectrum(source, lo, hi, steps=args.steps, n_max=args.nmax, tol=args.tol)
    if args.tsv:
        _write_text(args.tsv, est.to_tsv())
    _emit(est.to_json(), args.output)
    return EXIT_OK


def _format_exp(z):
    """Text for exp(z) as ``<mantissa>e<exponent>``; valid far beyond double range."""
    e10 = np.floor(z / math.log(10.0))
    mant = np.exp(z - e10 * math.log(10.0))
    fix = mant >= 10.0
    mant[fix] /= 10.0
    e10[fix] += 1
    return [f"{mv:.15f}e{int(ev)}" for mv, ev in zip(mant, e10)]


def cmd_sample(args):
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    model = _family_model(args.family)
    side = {"family": args.family, "n": args.n, "seed": args.seed, "rank": None}
    if isinstance(model, UniformExponentVariate):
        lines = [repr(float(v)) for v in model.sample(args.n, args.seed)]
        side["params"] = {"beta": float(model.beta), "c": model.c, "d": model.d}
        side["spectrum"] = {"kind": "discrete",
                            "bases": analytic_benford_spectrum(model, 8),
                            "upper_bound": spectrum_upper_bound(model)}
    elif isinstance(model, FejerVariate):
        lines = _format_exp(model.sample(args.n, args.seed))
        side["params"] = {"beta": model.beta, "a": model.a}
        side["spectrum"] = {"kind": "interval", "interval": [1.0, model.beta],
                            "upper_bound": model.beta}
    else:
        lines = [repr(float(v)) for v in model.sample(args.n, args.seed)]
        side["params"] = {"atoms": [{"value": str(v), "prob": p} for v, p in model.atoms]}
        side["rank"] = model.rank
        side["spectrum"] = {"kind": "empty", "bases": []}
    _write_text(args.output, "\n".join(lines) + "\n")
    sidecar = Path(args.output).with_suffix(".json")
    if sidecar == Path(args.output):
        sidecar = Path(str(args.output) + ".json")
    _write_text(sidecar, json.dumps(side, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args):
    if args.m is not None and args.m < 2:
        raise UsageError("--m must be >= 2")
    results = harness.run_suite(args.suite, seed=args.seed, m=args.m)
    _emit([r.to_json() for r in results], args.output)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name} {r.params} worst_ratio={r.statistics['worst_ratio']:.3g}",
              file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# --- parser ---------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="benfordkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="conformance report for one CSV column")
    a.add_argument("input", help="CSV file, or - for stdin")
    a.add_argument("--column", help="header name or 0-based index (default: first column)")
    a.add_argument("--base", type=float, help="significand base > 1 (default 10)")
    a.add_argument("--nmax", type=int, default=64, help="Fourier coefficients for period detection")
    a.add_argument("--hist-tsv", help="write first-digit histogram rows (digit, freq, benford_freq)")
    a.add_argument("--strict", action="store_true", help="exit 1 unless the verdict is benford")
    a.add_argument("-o", "--output", help="write JSON here instead of stdout")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("spectrum", help="scan the set of bases for which data are Benford")
    s.add_argument("input", nargs="?", help="CSV file of positive values")
    s.add_argument("--family", help="analytic family: uexp:beta:c:d | fejer:beta | lattice:p/q:w,...")
    s.add_argument("--column")
    s.add_argument("--range", nargs=2, type=float, required=True, metavar=("B_LO", "B_HI"))
    s.add_argument("--steps", type=int, default=2000)
    s.add_argument("--nmax", type=int, default=N_MAX_SCAN)
    s.add_argument("--tol", type=float, help="detection tolerance (default 1e-9 analytic, 4/sqrt(m) data)")
    s.add_argument("--tsv", help="write (base, residual) rows here")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_spectrum)

    g = sub.add_parser("sample", help="draw a seeded sample from a family")
    g.add_argument("--family", required=True)
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("-o", "--output", required=True, help="CSV path; a .json sidecar is written next to it")
    g.set_defaults(func=cmd_sample)

    v = sub.add_parser("verify", help="run the seeded experiment suite")
    v.add_argument("--suite", default="all", choices=harness.suite_names())
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--m", type=int, help="sample size override")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"benfordkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"benfordkit: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
