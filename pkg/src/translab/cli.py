"""Command line entry point: ``translab <subcommand> [options]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import besov, calculus, families, interp, transfer
from . import measure as msr
from .config import ConfigError, ExperimentConfig, load_config, parse_exponent
from .errors import TranslabError
from .experiments import EXPERIMENTS, apply_function
from .gridfn import GridFunction, GridSpec, from_csv
from .groups import MatrixGroup
from .harness import DEFAULT_CALIBRATION, rows_to_csv, run_experiment, suite_all, suite_configs


def parse_measure(text: str) -> msr.Measure:
    """``gaussian[:var]``, ``dirac[:a]``, ``exponential[:rate]`` or a measure text file."""
    name, _, arg = text.partition(":")
    if name == "gaussian":
        return msr.gaussian(float(arg or 1.0))
    if name == "dirac":
        return msr.dirac(float(arg or 0.0))
    if name == "exponential":
        return msr.two_sided_exponential(float(arg or 1.0))
    path = Path(text)
    if not path.exists():
        raise ConfigError(f"measure {text!r} is neither a builtin nor a readable file")
    return msr.from_text(path.read_text())


def parse_function(text: str) -> calculus.StripFunction:
    name, _, arg = text.partition(":")
    table = {
        "tau": lambda: calculus.tau(float(arg or 16)),
        "gauss": lambda: calculus.gauss(),
        "inv": lambda: calculus.inv_shift(complex(arg.replace("i", "j")) if arg else 2j),
        "const": lambda: calculus.const(complex(arg or 1)),
    }
    if name not in table:
        raise ConfigError(f"unknown function {text!r}; use tau[:k], gauss, inv[:lam], const[:c]")
    return table[name]()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _table(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in row)
              for row in rows]
    return "\n".join(lines) + "\n"


def _grid(args) -> GridSpec:
    spec = GridSpec(args.half_length, args.samples)
    for _ in range(args.refine):
        spec = spec.refined()
    return spec


# -- subcommands ---------------------------------------------------------------


def cmd_fourier(args) -> int:
    mu = parse_measure(args.measure)
    z = np.linspace(args.lo, args.hi, args.points)
    vals = msr.fourier(mu, z)
    _emit(_table(("z", "re", "im"), [(float(a), float(v.real), float(v.imag)) for a, v in zip(z, vals)]), args.out)
    return 0


def cmd_besov(args) -> int:
    if args.function:
        f = from_csv(Path(args.function).read_text())
    else:
        spec = _grid(args)
        packet = families.random_packet(np.random.default_rng(args.seed), 0.5 * spec.nyquist)
        f = GridFunction(spec, packet(spec.t)[:, None])
    val = besov.besov_norm(f, args.r, args.p, args.q)
    _emit(_table(("r", "p", "q", "besov_norm"), [(args.r, args.p, args.q, val)]), args.out)
    return 0


def parse_symbol(text: str) -> besov.MultiplierSymbol:
    """Closed-form transform for the builtin measures, quadrature for measure files."""
    name, _, arg = text.partition(":")
    if name == "gaussian":
        return families.Mixture(gaussians=((0.0, float(arg or 1.0), 1.0),)).symbol()
    if name == "dirac":
        return families.Mixture(atoms=((float(arg or 0.0), 1.0),)).symbol()
    if name == "exponential":
        return families.Mixture(exponentials=((float(arg or 1.0), 1.0),)).symbol()
    return besov.MultiplierSymbol.of_measure(parse_measure(text))


def cmd_mikhlin(args) -> int:
    sym = parse_symbol(args.measure)
    _emit(_table(("measure", "mikhlin_norm"), [(args.measure, besov.mikhlin_norm(sym))]), args.out)
    return 0


def cmd_gw(args) -> int:
    sym = parse_symbol(args.measure)
    spec = _grid(args)
    infima = besov.block_infima(sym, spec)
    rows = [(k, float(v)) for k, v in enumerate(infima)] + [("max", float(np.max(infima)))]
    _emit(_table(("block", "infimum"), rows), args.out)
    return 0


def cmd_kfunctional(args) -> int:
    rng = np.random.default_rng(args.seed)
    a = rng.uniform(-args.spread, args.spread, args.dim)
    g = MatrixGroup(np.diag(a), p=args.p)
    z = rng.standard_normal(args.dim) + 1j * rng.standard_normal(args.dim)
    c = g.couple()
    ts = np.geomspace(args.tmin, args.tmax, args.points)
    rows = [(float(t), interp.k_functional(c, z, float(t))) for t in ts]
    rows.append(("interp_norm", interp.interp_norm(c, z, args.theta, args.q)))
    _emit(_table(("t", "K"), rows), args.out)
    return 0


def cmd_transfer(args) -> int:
    rng = np.random.default_rng(args.seed)
    c_cal = 1.0
    if args.calibration:
        from .config import read_calibration
        c_cal = read_calibration(args.calibration).get("transfer-check", 1.0)
    if args.mode == "bounded":
        spec = GridSpec(4.0, 64)
        g = families.multiplication_group(spec)
        k = transfer.build_kernels_bounded(2.0, spec=GridSpec(16.0, 1024))
        mix = families.bounded_mixture(rng, 2.0)
        mu, symbol = families.truncated(mix, 2.0), mix.symbol()
    else:
        g = families.nonnormal_group(rng, 6, 3.0, 0.3, growth=0.25)
        k = transfer.build_kernels_unbounded(0.5)
        mix = families.random_mixture(rng, atoms=1, gaussians=1, exponentials=1)
        mu, symbol = mix.measure(0.01), mix.weighted_symbol(0.5)
    rep = transfer.transference_check(k, g, mu, args.theta, args.q, args.p, probes=args.probes,
                                      seed=args.seed, c_cal=c_cal, raise_on_failure=False, symbol=symbol)
    rows = [(i, a, b, r) for i, (a, b, r) in enumerate(zip(rep.lhs, rep.rhs, rep.ratios))]
    _emit(_table(("probe_id", "lhs", "rhs", "ratio"), rows), args.out)
    print(f"# ||L|| lower {rep.convolution_norm_lower:.6g}, Girardi-Weis {rep.girardi_weis:.6g}, "
          f"bound {rep.bound:.6g}", file=sys.stderr)
    return 0 if rep.passed else 1


def cmd_calculus(args) -> int:
    f = parse_function(args.function)
    rng = np.random.default_rng(args.seed)
    g = families.jordan_group(rng)
    c = g.couple()
    norm = calculus.hinf1_norm(f, args.omega)
    rows = []
    for i in range(args.probes):
        x = rng.standard_normal(g.dim) + 1j * rng.standard_normal(g.dim)
        lhs = interp.interp_norm(c, apply_function(g, f, x, args.refine), args.theta, args.q)
        rhs = float(norm) * interp.interp_norm(c, x, args.theta, args.q)
        rows.append((i, lhs, rhs, lhs / rhs))
    _emit(_table(("probe_id", "lhs", "rhs", "ratio"), rows), args.out)
    return 0


def _run_configs(cfgs, args) -> int:
    rows = []
    for cfg in cfgs:
        rows += run_experiment(cfg)
    _emit(rows_to_csv(rows), args.out)
    if getattr(args, "summary", False):
        from .harness import Summary
        print(Summary(rows).table(), file=sys.stderr)
    return 0 if all(r.passed for r in rows) else 1


def cmd_pv(args) -> int:
    return _run_configs([ExperimentConfig("pv", seed=args.seed, refine=args.refine)], args)


def cmd_suite(args) -> int:
    if args.config:
        cfgs = load_config(args.config, set(EXPERIMENTS))
    else:
        cfgs = suite_configs(args.seed, args.calibration)
    if args.only:
        cfgs = [c for c in cfgs if c.experiment in args.only]
    if args.single:
        return _run_configs([c.with_(refine=args.refine) for c in cfgs], args)
    summary = suite_all(configs=cfgs, out=args.out, workers=args.workers, echo=args.summary or not args.out)
    return 0 if summary.passed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with one section per experiment run")
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (default 0)")
    common.add_argument("--out", help="CSV output path (standard output when omitted)")
    common.add_argument("--refine", type=int, choices=(0, 1), default=None, help="grid refinement level (default 0)")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--half-length", type=float, default=16.0)
    grid.add_argument("--samples", type=int, default=256)

    interp_opts = argparse.ArgumentParser(add_help=False)
    interp_opts.add_argument("--theta", type=float, default=0.5)
    interp_opts.add_argument("--q", type=parse_exponent, default=2.0)
    interp_opts.add_argument("--p", type=parse_exponent, default=2.0)

    ap = argparse.ArgumentParser(prog="translab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fourier", parents=[common], help="Fourier transform of a measure on a real grid")
    s.add_argument("--measure", default="gaussian:1")
    s.add_argument("--lo", type=float, default=-10.0)
    s.add_argument("--hi", type=float, default=10.0)
    s.add_argument("--points", type=int, default=201)
    s.set_defaults(run=cmd_fourier)

    s = sub.add_parser("besov-norm", parents=[common, grid], help="Besov norm of a gridded function")
    s.add_argument("--function", help="grid function CSV; a random wave packet when omitted")
    s.add_argument("--r", type=float, default=0.5)
    s.add_argument("--p", type=parse_exponent, default=2.0)
    s.add_argument("--q", type=parse_exponent, default=2.0)
    s.set_defaults(run=cmd_besov)

    s = sub.add_parser("mikhlin-norm", parents=[common], help="Mikhlin norm of a measure's Fourier transform")
    s.add_argument("--measure", default="gaussian:1")
    s.set_defaults(run=cmd_mikhlin)

    s = sub.add_parser("gw-bound", parents=[common, grid], help="dilation-infimum Besov functional per block")
    s.add_argument("--measure", default="gaussian:1")
    s.set_defaults(run=cmd_gw)

    s = sub.add_parser("kfunctional", parents=[common, interp_opts], help="K-functional of an l^p diagonal couple")
    s.add_argument("--dim", type=int, default=8)
    s.add_argument("--spread", type=float, default=5.0)
    s.add_argument("--tmin", type=float, default=1e-3)
    s.add_argument("--tmax", type=float, default=10.0)
    s.add_argument("--points", type=int, default=25)
    s.set_defaults(run=cmd_kfunctional)

    s = sub.add_parser("transfer-check", parents=[common, interp_opts], help="transference inequality per probe")
    s.add_argument("--mode", choices=("bounded", "unbounded"), default="bounded")
    s.add_argument("--probes", type=int, default=4)
    s.add_argument("--calibration")
    s.set_defaults(run=cmd_transfer)

    s = sub.add_parser("calculus-bound", parents=[common, interp_opts], help="f(A) bound on a Jordan block")
    s.add_argument("--function", default="tau:16")
    s.add_argument("--omega", type=float, default=0.5)
    s.add_argument("--probes", type=int, default=4)
    s.set_defaults(run=cmd_calculus)

    s = sub.add_parser("pv-check", parents=[common], help="principal value integral on the shift group")
    s.add_argument("--summary", action="store_true")
    s.set_defaults(run=cmd_pv)

    s = sub.add_parser("suite", parents=[common], help="all acceptance experiments")
    s.add_argument("--summary", action="store_true", help="print an aligned table")
    s.add_argument("--only", nargs="*", choices=list(EXPERIMENTS))
    s.add_argument("--single", action="store_true", help="run only the --refine level, no stability rows")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--calibration", help=f"calibration file (default {DEFAULT_CALIBRATION.name})")
    s.set_defaults(run=cmd_suite)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in (("seed", args.seed), ("refine", args.refine)) if v is not None}
    args.seed = args.seed or 0
    args.refine = args.refine or 0
    try:
        if args.config and args.command != "suite":
            cfgs = load_config(args.config, set(EXPERIMENTS))
            return _run_configs([c.with_(**overrides) for c in cfgs], args)
        return args.run(args)
    except TranslabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
