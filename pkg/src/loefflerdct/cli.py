"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 data error.  Errors are written to
stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .codec import RETAIN_ORDERS, InvalidRetention, compress, read_pgm, write_pgm
from .core.loeffler import (
    TRIVIAL_SET,
    NotOrthonormalizable,
    ParamVector,
    build_T,
    deviation_closed_form,
    inverse_T,
)
from .core.matrix import ShapeMismatch, SingularMatrix
from .fast import InvalidSize, scaled_forward, scaled_transform, sfg_forward
from .metrics import evaluate
from .search import CONSTRAINT_II, PRECISIONS, UnsupportedFormat, projections, report, sweep
from .transforms import EFFICIENT, EQUIVALENT, UnknownTransform, published_name, resolve

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3


class UsageError(Exception):
    pass


class IOFailure(OSError):
    pass


def _emit_error(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "exit_code": code, "message": message}), file=sys.stderr)
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# helpers

def _parse_alpha(text: str, unchecked: bool = False) -> ParamVector:
    try:
        alpha = ParamVector.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse parameter vector {text!r}: {exc}") from exc
    if unchecked:
        if not alpha.is_dyadic():
            raise UsageError(f"alpha = ({alpha}) has non-dyadic entries")
    elif not alpha.is_trivial():
        raise UsageError(f"alpha = ({alpha}) is outside {{0, +-1/2, +-1, +-2}}; pass --unchecked")
    return alpha


def _name_to_alpha(name: str, unchecked: bool = False) -> ParamVector:
    if name.upper() in EFFICIENT:
        return EFFICIENT[name.upper()]
    key = name[len("custom"):].strip(" :=") if name.lower().startswith("custom") else name
    return _parse_alpha(key, unchecked)


def _resolve_checked(name: str, method: str, unchecked: bool):
    low = name.strip().lower()
    if low in ("dct", "loeffler-exact", "avc", "hevc") or name.strip().upper() in EFFICIENT:
        return resolve(name, method)
    if not (low.startswith("custom") or any(ch.isdigit() for ch in low)):
        raise UnknownTransform(name)
    _name_to_alpha(name, unchecked)
    return resolve(name, method)


def _parse_vector(text: str) -> list[Fraction]:
    try:
        return [Fraction(t) for t in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse input vector {text!r}") from exc


def _parse_counts(text: str) -> list[int]:
    """``"1..64"``, ``"1-64"`` or ``"1,5,10"``."""
    try:
        for sep in ("..", "-"):
            if sep in text:
                lo, hi = (int(t) for t in text.split(sep, 1))
                return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse retention counts {text!r}") from exc


def _write(path: Path, text: str | bytes):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(text, bytes):
            path.write_bytes(text)
        else:
            path.write_text(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


# --------------------------------------------------------------------------
# subcommands

def cmd_search(args) -> int:
    result = sweep(args.constraint_ii, args.precision, args.jobs)
    out = Path(args.out_dir)
    _write(out / "efficient_set.csv", report(result.front, "csv"))
    _write(out / "efficient_set.json", report(result.front, "json"))
    for metric, text in projections(result.front.members, include_literature=True).items():
        _write(out / f"frontier_{metric}.csv", text)
    print(f"candidates={result.total} invertible={result.invertible} "
          f"feasible={len(result.feasible)} efficient={len(result.front.members)}")
    for c in result.front.members:
        tag = published_name(c.alpha) or "extra"
        print(f"{tag}\t{c.alpha}")
    return EXIT_OK


def cmd_eval(args) -> int:
    name = " ".join(args.name)
    t = _resolve_checked(name, args.method, args.unchecked)
    rec = evaluate(t.forward, t.inverse, alpha=t.alpha if t.alpha is not None and t.alpha.is_trivial() else None)
    print(f"transform: {t.name}")
    if t.alpha is not None:
        print(f"alpha: {t.alpha}")
    print(f"epsilon: {rec.epsilon:.2f}")
    print(f"mse: {rec.mse:.3f}")
    print(f"cg_db: {rec.cg_db:.2f}")
    print(f"eta: {rec.eta:.2f}")
    print(f"adds: {'-' if rec.adds is None else rec.adds}")
    print(f"shifts: {'-' if rec.shifts is None else rec.shifts}")
    if t.alpha is not None:
        print(f"delta: {float(deviation_closed_form(t.alpha)):.2f}")
    print(f"classification: {t.classification()}")
    label = published_name(t.alpha) if t.alpha is not None else None
    if label in EQUIVALENT:
        print(f"equivalent: {EQUIVALENT[label]}")
    elif label in EQUIVALENT.values():
        print("equivalent: " + ",".join(k for k, v in EQUIVALENT.items() if v == label))
    return EXIT_OK


def _transform_inputs(args) -> list[list[Fraction]]:
    if args.vec:
        return [_parse_vector(args.vec)]
    if args.random:
        rng = np.random.default_rng(args.seed)
        return [[Fraction(int(v)) for v in row]
                for row in rng.integers(-255, 256, size=(args.random, args.size))]
    try:
        text = Path(args.input).read_text() if args.input and args.input != "-" else sys.stdin.read()
    except OSError as exc:
        raise IOFailure(f"cannot read {args.input}: {exc}") from exc
    return [_parse_vector(line) for line in text.splitlines() if line.strip()]


def cmd_transform(args) -> int:
    alpha = _name_to_alpha(args.alpha, args.unchecked)
    for x in _transform_inputs(args):
        n = len(x)
        if args.inverse:
            if n != 8:
                raise InvalidSize("the inverse is available for 8-point vectors only")
            y = inverse_T(alpha) @ x
        elif n == 8 and alpha.is_trivial() and all(v.denominator == 1 for v in x):
            y = sfg_forward(alpha, [int(v) for v in x])
            if args.random and y != build_T(alpha) @ x:
                raise ArithmeticError(f"graph and dense product disagree on {x}")
        elif n == 8:
            y = build_T(alpha) @ x
        elif alpha.is_trivial() and all(v.denominator == 1 for v in x):
            y = scaled_forward(alpha, [int(v) for v in x])
        else:
            y = scaled_transform(alpha, n).matrix @ x
        print(" ".join(str(v) for v in y))
    return EXIT_OK


def cmd_compress(args) -> int:
    t = _resolve_checked(args.transform, args.method, args.unchecked)
    try:
        image = read_pgm(Path(args.input).read_bytes())
    except OSError as exc:
        raise IOFailure(f"cannot read {args.input}: {exc}") from exc
    counts = _parse_counts(args.sweep) if args.sweep else [args.retain]
    lines = ["r,rate_percent,psnr_db,ssim"]
    last = None
    for r in counts:
        last = compress(image, t.forward, t.inverse, r, args.retain_order)
        lines.append(f"{r},{last.rate_percent!r},{last.psnr_db!r},{last.ssim!r}")
    text = "\n".join(lines) + "\n"
    if args.csv:
        _write(Path(args.csv), text)
    if args.out:
        _write(Path(args.out), write_pgm(last.reconstructed))
    sys.stdout.write(text)
    return EXIT_OK


def cmd_scale(args) -> int:
    st = scaled_transform(_name_to_alpha(args.base, args.unchecked), args.size)
    print(f"size={st.size} adds={st.adds} shifts={st.shifts}")
    if args.matrix:
        print(st.matrix.to_text())
    return EXIT_OK


def cmd_info(args) -> int:
    print(f"loefflerdct {__version__}")
    print("trivial multipliers: " + ", ".join(str(v) for v in TRIVIAL_SET))
    for name, alpha in EFFICIENT.items():
        extra = f" (equivalent to {EQUIVALENT[name]})" if name in EQUIVALENT else ""
        print(f"{name}: {alpha}{extra}")
    print("named transforms: dct, loeffler-exact, C1..C6, avc, hevc, custom <alpha>")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser, config

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="loefflerdct", description="Multiplierless Loeffler-based DCT approximations.")
    p.add_argument("--config", help="key=value file; keys mirror long flags")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized helpers")
    p.add_argument("--version", action="version", version=__version__)
    # --seed is also accepted after the subcommand name
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("search", parents=[common], help="exhaustive sweep and efficient set")
    s.add_argument("--constraint-ii", choices=CONSTRAINT_II, default="b")
    s.add_argument("--precision", choices=PRECISIONS, default="published")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out-dir", default="search-out")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("eval", parents=[common], help="figures of merit for a named transform")
    e.add_argument("name", nargs="+", help="dct, loeffler-exact, C1..C6, avc, hevc or custom <alpha>")
    e.add_argument("--method", choices=("polar", "diagonal"), default="polar")
    e.add_argument("--unchecked", action="store_true")
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("transform", parents=[common], help="apply T(alpha) exactly")
    t.add_argument("input", nargs="?", help="file with one vector per line ('-' or omitted: stdin)")
    t.add_argument("--alpha", required=True)
    t.add_argument("--vec")
    t.add_argument("--inverse", action="store_true")
    t.add_argument("--random", type=int, default=0, help="N random integer vectors (uses --seed)")
    t.add_argument("--size", type=int, default=8, choices=(8, 16, 32))
    t.add_argument("--unchecked", action="store_true")
    t.set_defaults(func=cmd_transform)

    c = sub.add_parser("compress", parents=[common], help="JPEG-like fixed-rate compression of a PGM")
    c.add_argument("input")
    c.add_argument("--transform", default="dct")
    c.add_argument("--retain", type=int, default=5)
    c.add_argument("--sweep", help="retention counts, e.g. 1..64")
    c.add_argument("--retain-order", choices=tuple(RETAIN_ORDERS), default="zigzag")
    c.add_argument("--out")
    c.add_argument("--csv")
    c.add_argument("--method", choices=("polar", "diagonal"), default="polar")
    c.add_argument("--unchecked", action="store_true")
    c.set_defaults(func=cmd_compress)

    k = sub.add_parser("scale", parents=[common], help="16/32-point scaled transform costs")
    k.add_argument("--base", required=True)
    k.add_argument("--size", type=int, choices=(8, 16, 32), required=True)
    k.add_argument("--matrix", action="store_true")
    k.add_argument("--unchecked", action="store_true")
    k.set_defaults(func=cmd_scale)

    i = sub.add_parser("info", parents=[common], help="version and named transforms")
    i.set_defaults(func=cmd_info)
    return p


def read_config(path: str) -> dict[str, str]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise IOFailure(f"cannot read config {path}: {exc}") from exc
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _config_argv(command: str, config: dict[str, str], parser: argparse.ArgumentParser) -> list[str]:
    """Turn config entries into flags placed before the explicit ones."""
    sub = parser._subparsers._group_actions[0].choices[command]
    known = {a.dest: a for a in sub._actions if a.option_strings}
    argv = []
    for key, value in config.items():
        if key not in known:
            raise UsageError(f"unknown config key {key!r} for {command}")
        action = known[key]
        flag = action.option_strings[-1]
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(flag)
        else:
            argv += [flag, value]
    return argv


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            config = read_config(args.config)
            idx = argv.index(args.command)
            argv = argv[: idx + 1] + _config_argv(args.command, config, parser) + argv[idx + 1:]
            args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _emit_error(EXIT_USAGE, "UsageError", str(exc))
    except IOFailure as exc:
        return _emit_error(EXIT_DATA, "IOFailure", str(exc))
    except (UnknownTransform, NotOrthonormalizable, SingularMatrix, ShapeMismatch, InvalidSize,
            InvalidRetention, UnsupportedFormat, ValueError, ArithmeticError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return _emit_error(EXIT_DATA, type(exc).__name__, str(msg))
    except OSError as exc:
        return _emit_error(EXIT_DATA, "IOFailure", str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
