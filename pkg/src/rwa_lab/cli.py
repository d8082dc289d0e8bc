"""Batch command-line front end.

Every capability is exposed as a file-emitting subcommand; outputs are CSV
(fixed column order, 17 significant digits, LF endings) or JSON, and every
file written gets a sibling ``<name>.manifest.json`` recording the command,
its full parameter map, the seed and the tool version, so a run can be
reproduced byte for byte.

Exit codes: 0 ok, 2 usage/parse error, 3 numeric error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .atoms import WeightScheme, normalize, parse_atoms
from .dists import parse_dist, parse_marginals
from .errors import ParseError, RwaLabError
from .kernel import mixture_cdf_grid, weisberg_cdf_grid
from .limits import convergence_experiment, max_spacing_stats
from .mc import RngState, sample_rwa
from .stieltjes import remark1_residual, theorem1_residual
from .variance import variance_curve

DEFAULT_SEED = 12345


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _emit_table(columns, rows, args):
    """Write rows (list of dicts) as CSV or JSON to --out or stdout."""
    if args.format == "json":
        text = json.dumps([{c: r[c] for c in columns} for r in rows], indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_fmt(r[c]) for c in columns) for r in rows]
        text = "\n".join(lines) + "\n"
    _write_output(text, args)


def _write_output(text, args, extra_sidecars=()):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        for path, payload in extra_sidecars:
            with open(path, "w", newline="") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        _write_manifest(args)
    else:
        sys.stdout.write(text)


def _write_manifest(args):
    params = {k: v for k, v in vars(args).items() if k not in ("func",)}
    manifest = {
        "command": args.command,
        "params": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "outputs": [args.out],
    }
    with open(args.out + ".manifest.json", "w", newline="") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_grid(text: str) -> np.ndarray:
    """Either ``lo:hi:steps`` or an explicit comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParseError(f"grid {text!r} is not lo:hi:steps")
        try:
            lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"grid {text!r} has non-numeric fields") from None
        if steps < 1:
            raise ParseError(f"grid {text!r} needs >= 1 step")
        return np.linspace(lo, hi, steps)
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ParseError(f"grid {text!r} has non-numeric entries") from None


def _parse_scheme(text: str) -> WeightScheme:
    try:
        return WeightScheme(tuple(int(v) for v in text.split(",")))
    except ValueError as exc:
        raise ParseError(f"bad scheme {text!r}: {exc}") from None


def _parse_int_list(text: str):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ParseError(f"bad integer list {text!r}") from None


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("RWA_LAB_THREADS", "").strip()
    return max(1, int(env)) if env else 1


# ---------------------------------------------------------------- commands

def cmd_kernel_cdf(args):
    values, mults = parse_atoms(args.atoms)
    cfg = normalize(values, WeightScheme(tuple(mults)))
    if cfg.n < len(values):
        merged = ",".join(f"{x:g}:{m}" for x, m in zip(cfg.atoms, cfg.scheme.multiplicities))
        print(f"warning: tied atoms merged to {merged}", file=sys.stderr)
    zs = _parse_grid(args.grid)
    cdf = weisberg_cdf_grid(cfg, zs)
    _emit_table(["z", "cdf"], [{"z": float(z), "cdf": float(c)} for z, c in zip(zs, cdf)], args)
    return 0


def cmd_mixture_cdf(args):
    scheme = _parse_scheme(args.scheme)
    marginals = parse_marginals(args.marginals)
    zs = _parse_grid(args.grid)
    values, se = mixture_cdf_grid(scheme, marginals, zs, method=args.method,
                                  budget=args.budget, rng=RngState(args.seed))
    if se is None:
        cols = ["z", "cdf"]
        rows = [{"z": float(z), "cdf": float(v)} for z, v in zip(zs, values)]
    else:
        cols = ["z", "cdf", "stderr"]
        rows = [{"z": float(z), "cdf": float(v), "stderr": float(s)}
                for z, v, s in zip(zs, values, se)]
    _emit_table(cols, rows, args)
    return 0


def cmd_sample(args):
    scheme = _parse_scheme(args.scheme)
    marginals = parse_marginals(args.marginals)
    state = RngState(args.seed, args.stream)
    values = sample_rwa(scheme, marginals, args.count, state, threads=_threads(args))
    text = "value\n" + "".join(_fmt(float(v)) + "\n" for v in values)
    sidecars = []
    if args.out:
        sidecars.append((args.out + ".meta.json", {
            "scheme": list(scheme.multiplicities),
            "marginals": [d.name for d in marginals],
            "seed": args.seed,
            "stream": args.stream,
            "count": args.count,
        }))
    _write_output(text, args, extra_sidecars=sidecars)
    return 0


def _mixture_from_config(cfg_json, scheme, marginals, seed):
    mix = cfg_json.get("mixture", {"kind": "empirical", "count": 100_000})
    kind = mix.get("kind")
    if kind == "analytic":
        return parse_dist(mix["dist"])
    if kind == "empirical":
        count = int(mix.get("count", 100_000))
        return sample_rwa(scheme, marginals, count, RngState(seed))
    raise ParseError(f"mixture kind {kind!r} must be analytic or empirical")


def _z_points(raw):
    pts = []
    for item in raw:
        if isinstance(item, (list, tuple)):
            re, im = (float(item[0]), float(item[1])) if len(item) == 2 else (float(item[0]), 0.0)
            pts.append(complex(re, im))
        else:
            pts.append(complex(float(item), 0.0))
    if not pts:
        raise ParseError("config has no z_points")
    return pts


def cmd_check_stieltjes(args):
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"config {args.config!r} is not valid JSON: {exc}") from None
    identity = cfg.get("identity", "theorem1")
    seed = int(cfg.get("seed", args.seed))
    zs = _z_points(cfg.get("z_points", []))
    if identity == "theorem1":
        scheme = WeightScheme(tuple(int(m) for m in cfg["scheme"]))
        marginals = [parse_dist(t) for t in cfg["marginals"]]
        mixture = _mixture_from_config(cfg, scheme, marginals, seed)
        report = theorem1_residual(scheme, marginals, mixture, zs)
    elif identity == "remark1":
        n1, n2 = int(cfg["n1"]), int(cfg["n2"])
        fx1, fx2 = parse_dist(cfg["fx1"]), parse_dist(cfg["fx2"])
        fz_spec = cfg.get("fz", cfg.get("mixture"))
        if isinstance(fz_spec, str):
            fz = parse_dist(fz_spec)
        else:
            scheme = WeightScheme((n1, n2))
            fz = _mixture_from_config({"mixture": fz_spec}, scheme, [fx1, fx2], seed)
        report = remark1_residual(n1, n2, fx1, fx2, fz, zs)
    else:
        raise ParseError(f"identity {identity!r} must be theorem1 or remark1")
    text = json.dumps(report.to_json_dict(), indent=2) + "\n"
    _write_output(text, args)
    tolerance = cfg.get("tolerance")
    if tolerance is not None and report.max_rel > float(tolerance):
        print(f"residual {report.max_rel:.3g} exceeds tolerance {tolerance:g}",
              file=sys.stderr)
        return 3
    return 0


def _curve_rows(ns, thetas, sigma2):
    rows = []
    for n in ns:
        curve = variance_curve(n, thetas, sigma2)
        rows += [
            {"n": n, "theta": float(t), "esq_sum": float(e), "variance": float(v)}
            for t, e, v in zip(curve.thetas, curve.esq_sums, curve.values)
        ]
    return rows


def cmd_variance_curve(args):
    ns = _parse_int_list(args.n)
    thetas = _parse_grid(args.theta)
    _emit_table(["n", "theta", "esq_sum", "variance"],
                _curve_rows(ns, thetas, args.sigma2), args)
    return 0


def cmd_fig1(args):
    thetas = np.linspace(1.0, 5.0, 81)  # step 0.05
    _emit_table(["n", "theta", "esq_sum", "variance"],
                _curve_rows([10, 20, 40], thetas, 1.0), args)
    return 0


def cmd_converge(args):
    marginal = parse_dist(args.marginal)
    table = convergence_experiment(marginal, args.mu, _parse_int_list(args.n_grid),
                                   args.eps, args.replicates,
                                   RngState(args.seed, args.stream))
    rows = [{
        "n": r.n, "prob_exceed": r.prob_exceed, "eps": table.epsilon,
        "max_spacing_mean": r.max_spacing_mean, "max_spacing_p95": r.max_spacing_p95,
        "replicates": table.replicates, "seed": table.seed,
    } for r in table.rows]
    _emit_table(["n", "prob_exceed", "eps", "max_spacing_mean", "max_spacing_p95",
                 "replicates", "seed"], rows, args)
    return 0


def cmd_max_spacing(args):
    rows = []
    for i, n in enumerate(_parse_int_list(args.n)):
        s = max_spacing_stats(n, args.replicates, RngState(args.seed, args.stream + i))
        rows.append({
            "n": s.n, "max_spacing_mean": s.mean, "max_spacing_p50": s.p50,
            "max_spacing_p95": s.p95, "replicates": s.replicates, "seed": args.seed,
        })
    _emit_table(["n", "max_spacing_mean", "max_spacing_p50", "max_spacing_p95",
                 "replicates", "seed"], rows, args)
    return 0


# ---------------------------------------------------------------- wiring

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="base RNG seed (default %(default)s)")
    common.add_argument("--stream", type=int, default=0,
                        help="RNG stream id (default %(default)s)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads; falls back to RWA_LAB_THREADS, then 1")
    common.add_argument("--out", "-o", default=None,
                        help="output file (stdout if omitted); a sibling manifest is written")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = argparse.ArgumentParser(prog="rwa-lab",
                                description="Randomly weighted averages: kernels, "
                                            "transforms, spacing variances, limits.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("kernel-cdf", parents=[common],
                        help="conditional CDF given an atom configuration")
    sp.add_argument("--atoms", required=True, help="x:m pairs, e.g. 3:1,2:1,1:1")
    sp.add_argument("--grid", required=True, help="z grid: lo:hi:steps or comma list")
    sp.set_defaults(func=cmd_kernel_cdf)

    sp = sub.add_parser("mixture-cdf", parents=[common],
                        help="unconditional CDF of the weighted average")
    sp.add_argument("--scheme", required=True, help="multiplicities, e.g. 1,1,1")
    sp.add_argument("--marginals", required=True, help="comma-separated distribution tokens")
    sp.add_argument("--grid", required=True)
    sp.add_argument("--method", choices=("quadrature", "montecarlo"), default="quadrature")
    sp.add_argument("--budget", type=int, default=48,
                    help="nodes per axis (quadrature) or draws (montecarlo)")
    sp.set_defaults(func=cmd_mixture_cdf)

    sp = sub.add_parser("sample", parents=[common], help="draw weighted-average samples")
    sp.add_argument("--scheme", required=True)
    sp.add_argument("--marginals", required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("check-stieltjes", parents=[common],
                        help="evaluate a transform identity from a JSON config")
    sp.add_argument("config", help="JSON config file")
    sp.set_defaults(func=cmd_check_stieltjes)

    sp = sub.add_parser("variance-curve", parents=[common],
                        help="spacing-weight variance bracket over a theta grid")
    sp.add_argument("--n", required=True, help="comma-separated atom counts")
    sp.add_argument("--theta", required=True, help="theta grid: lo:hi:steps or comma list")
    sp.add_argument("--sigma2", type=float, default=1.0)
    sp.set_defaults(func=cmd_variance_curve)

    sp = sub.add_parser("fig1", parents=[common],
                        help="variance curves for n=10,20,40 over theta in [1,5]")
    sp.set_defaults(func=cmd_fig1)

    sp = sub.add_parser("converge", parents=[common],
                        help="law-of-large-numbers experiment over an n grid")
    sp.add_argument("--marginal", required=True)
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--n-grid", required=True, dest="n_grid")
    sp.add_argument("--eps", type=float, default=0.05)
    sp.add_argument("--replicates", type=int, default=2000)
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("max-spacing", parents=[common],
                        help="maximum-spacing summaries over replicates")
    sp.add_argument("--n", required=True, help="comma-separated sample sizes")
    sp.add_argument("--replicates", type=int, default=10_000)
    sp.set_defaults(func=cmd_max_spacing)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except RwaLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
