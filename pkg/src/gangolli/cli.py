"""Command-line frontend: ``gangolli <command> --config FILE [--out DIR] [--seed N] [--threads N]``.

Every command reads one YAML job file, writes CSV files with ``#`` metadata
headers into the output directory and exits with 0 when every check in the
job passes, 1 when a check fails and 2 on configuration errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from . import __version__
from .config import ConfigError, JobConfig, load_config
from .errors import FirstMomentViolation, InfiniteActivity, InvalidMeasure
from .io import write_csv
from .levy import (LevyKernel, ZonalLevyMeasure, build_symbol_table, constant_field, diffusion_field,
                   growth_bound_check, multiplier_field, sugiura_zeta)
from .operators import (GangolliCoefficients, courrege_apply, gangolli_apply_direct,
                        gangolli_apply_spectral, make_evaluator, pmp_check,
                        shift_to_nonnegative_max, validate_invariance)
from .semigroup import LevyProcessParams, lk_verify, simulate_path
from .spectral import ZonalFunction, random_band_limited, synthesis

log = logging.getLogger("gangolli")

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class Job:
    """A validated config together with the provenance written into every output."""

    def __init__(self, command, cfg: JobConfig, digest: str, args):
        self.command = command
        self.cfg = cfg
        self.seed = cfg.seed if args.seed is None else args.seed
        self.out = Path(args.out if args.out is not None else cfg.out)
        self.threads = max(1, args.threads)
        # --out and --threads do not change results and are left out of the header
        cmdline = f"gangolli {command} --config {args.config} --seed {self.seed}"
        if getattr(args, "which", None):
            cmdline += "".join(f" --which {w}" for w in args.which)
        self.meta = [f"gangolli {__version__}", f"command: {cmdline}", f"config_sha256: {digest}"]

    def write(self, name, columns, rows, extra=()):
        path = write_csv(self.out / name, columns, rows, [*self.meta, *extra])
        log.info("wrote %s", path)
        return path


# ---------------------------------------------------------------------------
# building library objects from the config

def build_measure(cfg: JobConfig) -> ZonalLevyMeasure:
    ms = cfg.measure
    atoms = tuple(tuple(a) for a in ms.atoms)
    if ms.density_scale == 0.0:
        return ZonalLevyMeasure(atoms=atoms, label="atoms")
    if ms.density_alpha is None:
        scale = ms.density_scale

        def rho(theta):
            return np.full(np.shape(theta), scale)

        return ZonalLevyMeasure(atoms=atoms, density=rho, label=f"uniform({scale:g})")
    return ZonalLevyMeasure.power_law(ms.density_scale, ms.density_alpha, atoms=atoms)


def build_coefficients(cfg: JobConfig) -> GangolliCoefficients:
    cs = cfg.coefficients
    nu = build_measure(cfg)
    kernel = None if nu.is_zero else LevyKernel(nu, multiplier_field(cs.m0, cs.m1))
    drift = diffusion = None
    if cs.drift is not None:
        b = np.array(cs.drift, dtype=float)
        drift = lambda g: b  # noqa: E731
    if cs.diffusion_matrix is not None:
        A = np.array(cs.diffusion_matrix, dtype=float)
        diffusion = lambda g: A  # noqa: E731
    return GangolliCoefficients(a=diffusion_field(cs.a0, cs.a1), kernel=kernel,
                                killing=constant_field(cs.killing) if cs.killing else None,
                                drift=drift, diffusion_matrix=diffusion)


def build_function(cfg: JobConfig, seed: int) -> ZonalFunction:
    fs, L = cfg.function, cfg.band_limit
    if fs.kind == "random":
        rng = np.random.default_rng(seed if fs.seed is None else fs.seed)
        return random_band_limited(rng, L, decay=fs.decay)
    if fs.kind == "legendre":
        return ZonalFunction.spherical(fs.degree, max(L, fs.degree))
    if fs.kind == "coeffs":
        c = np.zeros(max(L + 1, len(fs.coeffs)))
        c[: len(fs.coeffs)] = fs.coeffs
        return ZonalFunction(c)
    if fs.kind == "constant":
        return ZonalFunction.constant(fs.value, L)
    width = fs.width
    return ZonalFunction.from_callable(lambda th: np.exp(-(th / width) ** 2), L)


# ---------------------------------------------------------------------------
# commands

def cmd_transform(job: Job) -> bool:
    cfg = job.cfg
    f = build_function(cfg, job.seed)
    L = f.band_limit
    F = ZonalFunction(samples=f.samples, rule=f.rule, band_limit=L)
    back = synthesis(F.coeffs, L)
    err = np.abs(back.eval_cos(F.rule.nodes) - f.samples)
    max_err = float(err.max())
    ok = max_err <= cfg.tolerances.round_trip
    job.write("coefficients.csv", ["l", "coeff"], list(enumerate(F.coeffs)),
              ["view: coefficients"])
    job.write("samples.csv", ["theta", "value", "resynthesized", "abs_err"],
              zip(f.grid_colatitudes, f.samples, back.eval_cos(F.rule.nodes), err),
              ["view: samples", f"band_limit: {L}"])
    _report("transform round trip", ok, f"max error {max_err:.3e} (tol {cfg.tolerances.round_trip:g})")
    return ok


def cmd_symbol(job: Job) -> bool:
    cfg = job.cfg
    co = build_coefficients(cfg)
    grid = np.linspace(0.0, np.pi, cfg.symbol.n_colatitudes)
    sym = build_symbol_table(co.a, co.kernel, grid, cfg.symbol.L)
    job.write("symbol.csv", ["s", "l", "eta"], sym.rows())
    rep = growth_bound_check(sym, cfg.symbol.growth_window, slope_tol=cfg.tolerances.growth_slope)
    job.write("growth.csv", ["l", "ratio"], enumerate(rep.ratios),
              [f"window: {rep.window[0]} {rep.window[1]}", f"slope: {rep.slope!r}"])
    _report("growth bound", rep.passed,
            f"slope {rep.slope:.4f} over {rep.window} (tol {cfg.tolerances.growth_slope:g})")
    return rep.passed


def cmd_apply(job: Job) -> bool:
    cfg = job.cfg
    co = build_coefficients(cfg)
    if co.kernel is not None:
        co.kernel.validate()
    f = build_function(cfg, job.seed)
    s = cfg.evaluation_points()
    L = min(cfg.symbol.L, f.band_limit)
    try:
        direct = np.asarray(gangolli_apply_direct(co, f, s), dtype=float)
        method = "direct"
    except FirstMomentViolation:
        direct = np.array([courrege_apply(co, f, si) for si in s])
        method = "courrege"
    if co.drift is not None or co.diffusion_matrix is not None:
        direct = np.array([courrege_apply(co, f, si) for si in s])
        method = "courrege"
    rep = gangolli_apply_spectral(co, f, s, L, report=True)
    diff = np.abs(direct - rep.values)
    bound = max(cfg.tolerances.apply, rep.error_estimate)
    ok = bool(np.all(diff <= bound))
    job.write("apply.csv", ["s", "Af_direct", "Af_spectral", "abs_diff", "tail_bound"],
              ((si, d, sp, e, rep.error_estimate) for si, d, sp, e in zip(s, direct, rep.values, diff)),
              [f"direct_method: {method}", f"spectral_L: {L}"])
    _report("direct vs spectral", ok, f"max |diff| {diff.max():.3e} (bound {bound:.3e})")
    return ok


def _verify_pmp(job: Job) -> bool:
    cfg = job.cfg
    co = build_coefficients(cfg)
    evaluate = make_evaluator(co, "courrege")
    rng = np.random.default_rng(job.seed)
    rows, worst = [], -np.inf
    for trial in range(cfg.verify.pmp_trials):
        f = shift_to_nonnegative_max(random_band_limited(rng, cfg.band_limit))
        r = pmp_check(evaluate, f, cfg.tolerances.pmp)
        rows.append((trial, r.argmax, r.f_max, r.value, int(r.passed)))
        worst = max(worst, r.value)
    ok = all(r[-1] for r in rows)
    job.write("pmp.csv", ["trial", "argmax", "f_max", "Af_at_max", "passed"], rows)
    _report("positive maximum principle", ok, f"worst Af(argmax) {worst:.3e} (tol {cfg.tolerances.pmp:g})")
    return ok


def _verify_invariance(job: Job) -> bool:
    cfg = job.cfg
    co = build_coefficients(cfg)
    rep = validate_invariance(co, n_samples=cfg.verify.invariance_samples,
                              tol=cfg.tolerances.invariance, rng=np.random.default_rng(job.seed))
    rows = []
    for name, c in rep.conditions.items():
        g, k, kp = c.witness if c.witness is not None else (None, None, None)
        q = g.q if g is not None else [np.nan] * 4
        rows.append((name, int(c.applicable), int(c.passed), c.worst, *q,
                     k.q[3] if k is not None else np.nan, k.q[0] if k is not None else np.nan))
    job.write("invariance.csv", ["condition", "applicable", "passed", "worst_residual",
                                 "g_w", "g_x", "g_y", "g_z", "k_z", "k_w"], rows)
    failed = rep.failed()
    _report("invariance (I)-(VIII)", rep.passed, "all conditions hold" if not failed
            else "failed: " + ", ".join(failed))
    return rep.passed


def _verify_bounds(job: Job) -> bool:
    cfg = job.cfg
    co = build_coefficients(cfg)
    L = max(cfg.symbol.L, 2)
    grid = np.linspace(0.0, np.pi, cfg.symbol.n_colatitudes)
    sym = build_symbol_table(co.a, co.kernel, grid, L)
    rep = growth_bound_check(sym, cfg.symbol.growth_window, slope_tol=cfg.tolerances.growth_slope)
    job.write("bounds.csv", ["l", "ratio"], enumerate(rep.ratios),
              [f"window: {rep.window[0]} {rep.window[1]}", f"slope: {rep.slope!r}",
               f"C_fit: {rep.C_fit!r}"])
    _report("growth bound", rep.passed, f"slope {rep.slope:.4f}, C {rep.C_fit:.4g}")
    return rep.passed


def _verify_zeta(job: Job) -> bool:
    cfg = job.cfg
    s, n = cfg.verify.zeta_s, cfg.verify.zeta_cutoff
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        partial, tail = sugiura_zeta(s, n)
    exact = float(hurwitz_zeta(2.0 * s, 1.0)) if 2.0 * s > 1.0 else np.inf
    err = exact - partial
    ok = bool(np.isfinite(tail) and 0.0 <= err <= tail + 1e-15 and err <= cfg.tolerances.zeta)
    job.write("zeta.csv", ["s", "cutoff", "partial_sum", "tail_bound", "reference", "error"],
              [(s, n, partial, tail, exact, err)])
    _report("zeta partial sum", ok, f"error {err:.3e}, tail bound {tail:.3e}")
    return ok


VERIFIERS = {"pmp": _verify_pmp, "invariance": _verify_invariance,
             "bounds": _verify_bounds, "zeta": _verify_zeta}


def cmd_verify(job: Job, which=None) -> bool:
    checks = which or job.cfg.verify.checks
    results = [VERIFIERS[name](job) for name in dict.fromkeys(checks)]
    return all(results)


def cmd_simulate(job: Job) -> bool:
    cfg = job.cfg
    cs, sim = cfg.coefficients, cfg.simulation
    if cs.a1 != 0.0 or cs.m1 != 0.0:
        raise ConfigError("coefficients.a1 and coefficients.m1 must be 0 for simulation "
                          "(only constant coefficients have a closed-form semigroup)")
    if cs.killing or cs.drift is not None or cs.diffusion_matrix is not None:
        raise ConfigError("coefficients.killing, drift and diffusion_matrix are not supported by simulate")
    nu = build_measure(cfg)
    nu = nu if nu.is_zero else nu.scaled(cs.m0)
    params = LevyProcessParams(a=cs.a0, nu=nu, t_grid=tuple(sim.t), dt=sim.dt,
                               n_paths=sim.paths, seed=job.seed)
    samples = simulate_path(params, threads=job.threads)
    for sample in samples:
        pts = sample.points
        job.write(f"endpoints_t{sample.t!r}.csv", ["path_id", "x", "y", "z", "colatitude"],
                  ((i, *p, c) for i, (p, c) in enumerate(zip(pts, sample.colatitudes))),
                  [f"t: {sample.t!r}", f"dt: {sim.dt!r}", f"steps: {sample.n_steps}"])
    rep = lk_verify(params, sim.l_max, samples=samples, z_max=cfg.tolerances.z_max)
    job.write("lk.csv", ["l", "t", "estimate", "stderr", "predicted", "z"],
              ((r.l, r.t, r.estimate, r.stderr, r.predicted, r.z) for r in rep.rows))
    ok = rep.fraction_within >= sim.min_fraction
    _report("Levy-Khintchine moments", ok,
            f"{rep.n_within}/{len(rep.rows)} cells with |z| <= {cfg.tolerances.z_max:g}")
    return ok


COMMANDS = {"transform": cmd_transform, "symbol": cmd_symbol, "apply": cmd_apply,
            "verify": cmd_verify, "simulate": cmd_simulate}


def _report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gangolli", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gangolli {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("-v", "--verbose", action="store_true")
        if name == "verify":
            sp.add_argument("--which", action="append", choices=sorted(VERIFIERS))
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg, digest = load_config(args.config)
        job = Job(args.command, cfg, digest, args)
        if args.command == "verify":
            ok = cmd_verify(job, args.which)
        else:
            ok = COMMANDS[args.command](job)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvalidMeasure, InfiniteActivity, FirstMomentViolation) as exc:
        print(f"FAIL  {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
