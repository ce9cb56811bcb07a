"""Command line front end.

Exit codes: 0 success, 2 usage or domain error, 3 degenerate configuration,
4 invariant violation.  Every error is a single line starting with
``error:`` on stderr.
"""

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .duality import (
    CSV_COLUMNS,
    FIGURE_PRESETS,
    Axis,
    SweepSpec,
    report,
    sweep,
    verify_bound,
)
from .errors import (
    DegenerateConfigurationError,
    DomainError,
    DualityLabError,
    IndistinguishableStatesError,
    InvariantViolationError,
)
from .interferometer import ApparatusConfig, BeamSplitter, BlochVector, DetectorModel

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_VIOLATION = 4

_GRID_NAMES = {"sx": "s_x", "s_x": "s_x", "beta": "beta", "overlap": "overlap_c",
               "overlap_c": "overlap_c", "c": "overlap_c"}


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message.replace("\n", " "))


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_safe(v) for v in obj]
    return obj


def _dump_json(doc):
    return json.dumps(_json_safe(doc), indent=2, sort_keys=True) + "\n"


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in rows:
        d = rep.as_dict()
        writer.writerow([_fmt(d[col]) for col in CSV_COLUMNS])
    return buf.getvalue()


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_range(flag, value, lo, hi, hi_open=False):
    if not math.isfinite(value) or value < lo or value > hi or (hi_open and value >= hi):
        bracket = ")" if hi_open else "]"
        raise CliError(f"{flag}={value!r} outside [{lo:g}, {hi:g}{bracket}")


def _bloch_from_flags(args):
    s = (args.sx, args.sy, args.sz)
    if sum(v * v for v in s) > 1.0 + 1e-12:
        raise CliError(f"--sx/--sy/--sz: Bloch vector norm {math.sqrt(sum(v * v for v in s)):.17g} exceeds 1")
    return BlochVector(*s)


def _detector_from_flags(args):
    if args.detector_file:
        try:
            with open(args.detector_file, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"--detector-file: {exc}") from exc
        try:
            return DetectorModel.from_json(doc)
        except DualityLabError as exc:
            raise CliError(f"--detector-file: {exc}") from exc
    if args.overlap is None:
        raise CliError("one of --overlap or --detector-file is required")
    _check_range("--overlap", args.overlap, 0.0, 1.0, hi_open=True)
    return DetectorModel.canonical(args.overlap)


def cmd_report(args):
    _check_range("--beta", args.beta, 0.0, math.pi)
    cfg = ApparatusConfig(_bloch_from_flags(args), BeamSplitter(args.beta),
                          _detector_from_flags(args), phase=args.phase)
    try:
        rep = report(cfg)
    except IndistinguishableStatesError as exc:
        raise CliError(f"--detector-file: {exc}") from exc
    doc = rep.as_dict()
    doc["version"] = __version__
    _emit(_dump_json(doc), args.output)
    return EXIT_OK


def parse_grid(text):
    """Parse ``name=start:stop:points`` into an :class:`Axis`."""
    try:
        name, rng = text.split("=", 1)
        start, stop, points = rng.split(":")
        key = _GRID_NAMES[name.strip().lower()]
        return Axis(key, float(start), float(stop), int(points))
    except (ValueError, KeyError):
        raise CliError(f"--grid: malformed axis {text!r}; expected NAME=START:STOP:POINTS "
                       f"with NAME in sx, beta, overlap") from None


def _write_rows(rows, args):
    if args.format == "json":
        _emit(_dump_json([r.as_dict() for r in rows]), args.output)
    else:
        _emit(rows_to_csv(rows), args.output)
    return EXIT_OK


def cmd_sweep(args):
    if not args.grid or len(args.grid) != 2:
        raise CliError("--grid must be given exactly twice")
    axes = tuple(parse_grid(g) for g in args.grid)
    fixed = {"s_x": args.sx, "s_y": args.sy, "beta": args.beta, "overlap_c": args.overlap}
    if args.sz is not None:
        fixed["s_z"] = args.sz
    fixed = {k: v for k, v in fixed.items() if v is not None}
    spec = SweepSpec(axes=axes, fixed=fixed, pure=args.sz is None)
    try:
        rows = sweep(spec)
    except DomainError as exc:
        raise CliError(str(exc)) from exc
    return _write_rows(rows, args)


def cmd_figure(args):
    if args.name not in FIGURE_PRESETS:
        raise CliError(f"unknown figure {args.name!r}; valid names: {', '.join(sorted(FIGURE_PRESETS))}")
    return _write_rows(sweep(FIGURE_PRESETS[args.name]), args)


def cmd_verify(args):
    if args.samples < 1:
        raise CliError("--samples must be >= 1")
    summary = verify_bound(args.samples, args.seed, ridge=args.ridge)
    doc = summary.as_dict()
    doc["version"] = __version__
    _emit(_dump_json(doc), args.output)
    if not summary.ok:
        sys.stderr.write(f"error: complementarity bound violated at {json.dumps(_json_safe(summary.worst_config), sort_keys=True)}\n")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_validate(args):
    from .validation import run_all

    results = run_all(seed=args.seed)
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} suites passed")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if passed == len(results) else EXIT_VIOLATION


def build_parser():
    parser = _Parser(prog="duality-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common_output(p, formats=("csv", "json"), default="csv"):
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        p.add_argument("--format", choices=formats, default=default)

    p = sub.add_parser("report", help="visibility and which-path information at one point")
    p.add_argument("--sx", type=float, required=True)
    p.add_argument("--sy", type=float, default=0.0)
    p.add_argument("--sz", type=float, default=0.0)
    p.add_argument("--beta", type=float, required=True, help="BS2 angle in radians, [0, pi]")
    p.add_argument("--phase", type=float, default=0.0, help="phase shifter setting (radians)")
    p.add_argument("--overlap", type=float, help="detector overlap C in [0, 1)")
    p.add_argument("--detector-file", help="JSON detector description")
    common_output(p, formats=("json",), default="json")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("sweep", help="two-axis parameter grid")
    p.add_argument("--grid", action="append", help="NAME=START:STOP:POINTS (twice)")
    p.add_argument("--sx", type=float)
    p.add_argument("--sy", type=float)
    p.add_argument("--sz", type=float, help="fix S_z (otherwise states are pure)")
    p.add_argument("--beta", type=float)
    p.add_argument("--overlap", type=float)
    common_output(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="preset sweep behind one of the figures")
    p.add_argument("name", help=", ".join(sorted(FIGURE_PRESETS)))
    common_output(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="random check of V + I_path <= 1")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ridge", action="store_true", help="sample only the equality ridge")
    common_output(p, formats=("json",), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("validate", help="run the invariant suites")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        code, msg = exc.code, str(exc)
    except DegenerateConfigurationError as exc:
        code, msg = EXIT_DEGENERATE, str(exc)
    except InvariantViolationError as exc:
        code, msg = EXIT_VIOLATION, str(exc)
    except DomainError as exc:
        code, msg = EXIT_USAGE, str(exc)
    sys.stderr.write(f"error: {msg}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
