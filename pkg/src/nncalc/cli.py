"""Batch command line front end emitting CSV/JSON data files.

Every command is a thin wrapper over the library modules; output is data,
never rendered plots, and is byte-identical for identical (config, seed).
Angles are radians unless suffixed with ``deg``.  Exit codes: 0 success,
2 validation failure, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bell, entropy, fubini, lln, probability
from .arithmetic import ArithmeticContext, arith
from .errors import NncalcError, QuadratureError
from .generator import ExtendedGenerator, eval_iterate, load_generator

_FLOAT_FMT = "%.17g"


def _fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise QuadratureError("non-finite value in output", estimate=x)
    return _FLOAT_FMT % x


def _parse_angle(text: str) -> float:
    text = text.strip()
    if text.endswith("deg"):
        return math.radians(float(text[:-3]))
    return float(text)


def _parse_levels(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from exc


def _parse_probs(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad probability list {text!r}") from exc


def _write(out_path, text: str) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    try:
        return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"
    except ValueError as exc:
        raise QuadratureError(f"non-finite value in output: {exc}", estimate=math.nan) from exc


def _egen(args) -> ExtendedGenerator:
    spec = getattr(args, "generator", None) or "sine"
    return ExtendedGenerator(load_generator(spec))


def _require_sine(args, command: str) -> None:
    """Closed-form commands are specific to the sine bijection."""
    spec = getattr(args, "generator", None) or "sine"
    if load_generator(spec).name != "sine":
        raise NncalcError(f"{command} uses sine closed forms; --generator must be 'sine'")


def _cmd_iterate(args) -> str:
    if args.grid < 2:
        raise NncalcError("grid must have at least 2 points")
    egen = _egen(args)
    ps = np.linspace(0.0, 1.0, args.grid)
    columns = [eval_iterate(egen, k, ps) for k in args.levels]
    header = ["p"] + [f"g{k}" for k in args.levels]
    rows = ([float(p)] + [float(col[i]) for col in columns] for i, p in enumerate(ps))
    return _csv(header, rows)


def _cmd_alpha_theta(args) -> str:
    if args.grid < 2:
        raise NncalcError("grid must have at least 2 points")
    _require_sine(args, "alpha-theta")
    thetas = np.linspace(0.0, math.pi, args.grid)
    alphas = probability.alpha_of_theta(thetas)
    return _csv(["theta", "alpha"],
                ([float(t), float(a)] for t, a in zip(thetas, alphas)))


def _cmd_bell_scan(args) -> str:
    report = bell.ch_scan(args.resolution, egen=_egen(args))
    return _json_text(report.to_json_dict())


def _cmd_lln(args) -> str:
    if args.n_min > args.n_max:
        raise NncalcError("--n-min must not exceed --n-max")
    rows = lln.fig3_table(args.levels, range(args.n_min, args.n_max + 1), args.eps,
                          egen=_egen(args))
    return _csv(["level", "N", "bound"],
                ([l, n, float(b)] for l, n, b in rows))


def _cmd_lln_sim(args) -> str:
    dist = lln.LevelBinomial(N=args.N, p=args.p, k=args.k, l=args.l, egen=_egen(args))
    report = lln.simulate(dist, eps=args.eps, trials=args.trials, seed=args.seed)
    return _json_text(report.to_json_dict())


def _cmd_singlet(args) -> str:
    _require_sine(args, "singlet")
    table = probability.singlet_table(args.theta)
    rows = [[a, b, float(table[a][b])] for a in (0, 1) for b in (0, 1)]
    return _csv(["a", "b", "p"], rows)


def _cmd_entropy(args) -> str:
    dist = entropy.Distribution(args.probs)
    return _json_text({
        "alpha": args.alpha,
        "probs": list(dist.probs),
        "renyi_kn": entropy.renyi_kn(dist, args.alpha),
        "renyi_closed": entropy.renyi_closed(dist, args.alpha),
    })


def _load_state(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    comps = obj["components"] if isinstance(obj, dict) else obj
    vec = []
    for c in comps:
        if isinstance(c, (int, float)):
            vec.append(complex(c, 0.0))
        else:
            vec.append(complex(float(c[0]), float(c[1])))
    return np.asarray(vec, dtype=complex)


def _cmd_fubini(args) -> str:
    a = _load_state(args.state_a)
    b = _load_state(args.state_b)
    theta = fubini.geodesic_distance(a, b)
    p = fubini.hidden_prob(theta)
    big_p = math.cos(theta) ** 2
    levels = list(range(-3, 4))
    rungs = fubini.ladder(big_p, -3, 3, egen=_egen(args))
    return _json_text({
        "theta": theta,
        "hidden_p": p,
        "ladder_levels": levels,
        "ladder": [float(v) for v in rungs],
    })


def _cmd_arith(args) -> str:
    ctx = ArithmeticContext(_egen(args), args.level)
    return _fmt(arith(ctx, args.op, args.x, args.y)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nncalc",
        description="Data files for the hierarchy of arithmetics, its calculus, "
                    "and the associated probability experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=0,
                       help="RNG seed; only stochastic commands consume it")
        p.add_argument("--generator", default="sine",
                       help="builtin name or JSON config path")
        return p

    p = add("iterate", _cmd_iterate, "columns p, g^k(p) on a uniform grid")
    p.add_argument("--levels", type=_parse_levels, required=True)
    p.add_argument("--grid", type=int, default=1001)

    p = add("alpha-theta", _cmd_alpha_theta, "the angle map between two hierarchy levels")
    p.add_argument("--grid", type=int, default=1001)

    p = add("bell-scan", _cmd_bell_scan, "grid extrema of both Clauser-Horne values")
    p.add_argument("--resolution", type=_parse_angle, required=True)

    p = add("lln", _cmd_lln, "symmetric-coin deviation bounds per level and N")
    p.add_argument("--levels", type=_parse_levels, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)

    p = add("lln-sim", _cmd_lln_sim, "Monte Carlo deviation rate vs the level-0 bound")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)

    p = add("singlet", _cmd_singlet, "the 2x2 joint probability table at angle theta")
    p.add_argument("--theta", type=_parse_angle, required=True)

    p = add("entropy", _cmd_entropy, "Renyi entropy of a finite distribution")
    p.add_argument("--probs", type=_parse_probs, required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = add("fubini", _cmd_fubini, "geodesic angle, hidden probability, and ladder")
    p.add_argument("--state-a", required=True)
    p.add_argument("--state-b", required=True)

    p = add("arith", _cmd_arith, "one transported operation (debugging aid)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--op", choices=["add", "sub", "mul", "div"], required=True)
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.fn(args)
    except QuadratureError as exc:
        print(f"nncalc: numeric failure: {exc}", file=sys.stderr)
        return 3
    except (NncalcError, ValueError, OSError, KeyError, IndexError) as exc:
        print(f"nncalc: {exc}", file=sys.stderr)
        return 2
    _write(args.out, text)
    return 0


def main() -> None:  # console entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
