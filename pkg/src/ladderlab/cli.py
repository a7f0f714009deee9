"""Command-line campaigns with CSV or JSON reports.

Every subcommand produces a list of flat rows, each carrying a ``pass``
flag.  The process exits 0 iff every row passes, 1 if any check fails,
2 on invalid configuration (no output written) and 3 when a budget or
height cap cut the campaign short (partial rows written, flagged).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

from .errors import ConfigError, LadderLabError, RangeCapError, ResourceError
from .quadrature import DEFAULT_T_CAP, HL_TOL, get_integrator, ingham_main_term, warm_cache
from .reports import TheoremReport

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2, 3


@dataclass
class CampaignReport:
    command: str
    config: dict
    rows: list[dict] = field(default_factory=list)
    partial: bool = False
    note: str = ""
    evals: int = 0
    cache_hit_rate: float | None = None
    wall_time: float | None = None

    @property
    def passed(self) -> bool:
        return bool(self.rows) and not self.partial and all(r["pass"] for r in self.rows)

    @property
    def exit_code(self) -> int:
        if self.partial:
            return EXIT_PARTIAL
        return EXIT_OK if self.passed else EXIT_FAIL


# -- argument parsing ---------------------------------------------------------

def _floats(field_name: str):
    def parse(text: str) -> tuple[float, ...]:
        items = [s for s in text.replace(";", ",").split(",") if s.strip()]
        if not items:
            raise ConfigError(field_name, "grid is empty")
        try:
            values = tuple(float(s) for s in items)
        except ValueError as exc:
            raise ConfigError(field_name, str(exc)) from None
        if not all(math.isfinite(v) for v in values):
            raise ConfigError(field_name, "values must be finite")
        return values
    return parse


def _ints(field_name: str):
    def parse(text: str) -> tuple[int, ...]:
        values = _floats(field_name)(text)
        if any(v != int(v) for v in values):
            raise ConfigError(field_name, "values must be integers")
        return tuple(int(v) for v in values)
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ladderlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol):
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--out", default=None, help="report path (stdout if omitted)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--cache-dir", default=None, help="sample cache; LADDERLAB_CACHE overrides")
        p.add_argument("--t-cap", type=float, default=DEFAULT_T_CAP)
        p.add_argument("--stats", action="store_true",
                       help="add wall time, evaluation count and cache hit rate to JSON provenance")
        return p

    p = common(sub.add_parser("zeta-eval", help="Z(t), theta(t) and |zeta|^2 on a grid"), 1e-8)
    p.add_argument("--T", required=True, help="comma-separated heights")

    p = common(sub.add_parser("hl-integral", help="J(T) against the Ingham main term"), HL_TOL)
    p.add_argument("--T", required=True)
    p.add_argument("--envelope", type=float, default=5.0, help="C in |J - main| <= C sqrt(T)")

    p = common(sub.add_parser("ladder", help="reverse iterates and their increments"), 1e-9)
    p.add_argument("--T", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--method", choices=("mainterm-invert", "increment-solve"), default="mainterm-invert")
    p.add_argument("--T0", type=float, default=1e3)
    p.add_argument("--bound", type=float, default=0.05, help="bound on |increment/((1-c)T) - 1|")

    p = common(sub.add_parser("selberg", help="S_1 moment identities along a chain"), 1e-4)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--s", type=int, default=3)
    p.add_argument("--kappa", type=float, default=10.0)

    p = common(sub.add_parser("functional", help="F1, F2 or F3 along a tau grid"), 0.05)
    p.add_argument("--kind", choices=("F1", "F2", "F3"), required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tau-grid", required=True)
    p.add_argument("--method", choices=("mainterm-invert", "increment-solve"), default="mainterm-invert")

    p = common(sub.add_parser("fermat", help="Fermat rational against a functional estimate"), 0.04)
    p.add_argument("--triple", required=True, help="x,y,z,n")
    p.add_argument("--variant", type=int, choices=(1, 2, 3, 4), default=1)
    p.add_argument("--tau-grid", default="10000")

    p = common(sub.add_parser("ortho", help="Gram matrix of a generated Legendre system"), 1e-3)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--p-list", default="1")
    p.add_argument("--n-max", type=int, default=4)

    p = common(sub.add_parser("cache-warm", help="persist base-panel samples of Z"), HL_TOL)
    p.add_argument("--t-start", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    return parser


# -- campaigns ------------------------------------------------------------------

def _report_row(rep: TheoremReport) -> dict:
    d = rep.as_dict()
    return {k: d[k] for k in ("theorem_id", "lhs", "rhs", "residual", "envelope", "pass")}


def _integrator(args):
    return get_integrator(HL_TOL, cache_dir=args.cache_dir, t_cap=args.t_cap)


def run_zeta_eval(args, report):
    from .zeta import hardy_z, theta, zeta_mod_sq
    ts = np.array(_floats("T")(args.T))
    if np.any(ts < 1) or np.any(ts > args.t_cap):
        raise ConfigError("T", f"heights must lie in [1, {args.t_cap:g}]")
    z, th, m = hardy_z(ts), theta(ts), zeta_mod_sq(ts)
    for t, zi, ti, mi in zip(ts, np.atleast_1d(z), np.atleast_1d(th), np.atleast_1d(m)):
        report.rows.append({"t": float(t), "theta": float(ti), "Z": float(zi), "mod_sq": float(mi),
                            "pass": bool(math.isfinite(zi))})


def run_hl_integral(args, report):
    Ts = _floats("T")(args.T)
    if any(T < 0 for T in Ts):
        raise ConfigError("T", "heights must be nonnegative")
    integ = _integrator(args)
    for T in Ts:
        J = float(integ.J(T))
        main = float(ingham_main_term(T)) if T > 0 else 0.0
        env = args.envelope * math.sqrt(T)
        report.rows.append({"T": T, "J": J, "main_term": main, "remainder": J - main, "envelope": env,
                            "pass": abs(J - main) <= env})
    report.evals = integ.evals


def run_ladder(args, report):
    from .ladder import JacobLadder, LadderConfig
    Ts = _floats("T")(args.T)
    if args.k < 1:
        raise ConfigError("k", "must be >= 1")
    cfg = LadderConfig(T0=args.T0, k_max=max(8, args.k), tol=args.tol, t_cap=args.t_cap)
    if any(T < cfg.T0 for T in Ts):
        raise ConfigError("T", f"every T must be >= T0 = {cfg.T0:g}")
    integ = _integrator(args)
    ladder = JacobLadder(cfg, integ)
    for T in Ts:
        chain = ladder.build_chain(T, args.k, args.method)
        for r, (inc, scaled) in enumerate(zip(chain.increments, chain.scaled_increments()), 1):
            report.rows.append({"T": T, "r": r, "T_rm1": chain.level(r - 1), "T_r": chain.level(r),
                                "gap": chain.gaps[r - 1], "increment": inc.value,
                                "increment_over_1mc_T": scaled, "pass": abs(scaled - 1.0) <= args.bound})
    report.evals = integ.evals


def run_selberg(args, report):
    from . import selberg
    from .ladder import JacobLadder, LadderConfig
    from .phase import build_phase_track
    if not 1 <= args.r <= args.s - 1 <= args.k - 1:
        raise ConfigError("r", f"need 1 <= r <= s-1 <= k-1, got r={args.r}, s={args.s}, k={args.k}")
    if args.l < 1:
        raise ConfigError("l", "must be a positive integer")
    cfg = LadderConfig(k_max=max(8, args.k), t_cap=args.t_cap)
    if args.T < cfg.T0:
        raise ConfigError("T", f"must be >= T0 = {cfg.T0:g}")
    integ = _integrator(args)
    chain = JacobLadder(cfg, integ).build_chain(args.T, args.k)
    track = build_phase_track(10.0, max(2.0 * args.T, chain.points[-1]) + 1.0)
    l, tol, kappa = args.l, args.tol, args.kappa
    est = selberg.estimate_d(l, args.T, track, tol)
    est2 = selberg.estimate_d(l, 2.0 * args.T, track, tol)
    d = est.d_hat
    drift = abs(est2.d_hat - d)
    report.rows.append({"theorem_id": "d-hat", "lhs": est2.d_hat, "rhs": d, "residual": drift,
                        "envelope": 5.0 / math.log(args.T), "pass": d > 0 and drift <= 5.0 / math.log(args.T)})
    reps = [selberg.segment_moment_check(chain, l, d, track, r, kappa, tol) for r in range(1, args.k + 1)]
    reps.append(selberg.telescoped_check(chain, args.r, args.s, l, d, track, kappa, tol))
    reps.append(selberg.lift_check(chain, args.r, args.s, l, d, track, kappa, tol))
    reps += [selberg.mixed_mean_check(chain, r, l, d, track, kappa, tol) for r in range(1, args.k + 1)]
    reps += [selberg.complementary_check(chain, r, l, d, track, kappa, tol) for r in range(1, args.k + 1)]
    report.rows += [_report_row(rep) for rep in reps]
    report.evals = integ.evals + track.evals


def _functionals(args, method="mainterm-invert"):
    from .functionals import Functionals, default_config
    from .ladder import JacobLadder
    from dataclasses import replace
    cfg = replace(default_config(), t_cap=args.t_cap)
    return Functionals(JacobLadder(cfg, _integrator(args)), method=method)


def run_functional(args, report):
    grid = _floats("tau_grid")(args.tau_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("tau_grid", "must be strictly increasing")
    if not args.x > 0:
        raise ConfigError("x", "must be positive")
    fn = _functionals(args, args.method)
    limit = {"F1": fn.f1_limit, "F2": fn.f2_limit, "F3": fn.f3_limit}[args.kind]
    try:
        est = limit(args.x, grid, args.tol)
    except RangeCapError as exc:
        raise ResourceError(str(exc)) from exc
    ok = est.converged
    for tau, raw, corr, res in zip(est.tau_grid, est.raw, est.corrected, est.residuals):
        report.rows.append({"kind": est.kind, "x": est.x, "tau": tau, "raw": raw, "corrected": corr,
                            "target": est.target, "residual": res, "pass": ok})
    report.evals = fn.ladder.integrator.evals


def run_fermat(args, report):
    from .functionals import FermatTriple
    triple_vals = _ints("triple")(args.triple)
    if len(triple_vals) != 4:
        raise ConfigError("triple", "expects four integers x,y,z,n")
    try:
        triple = FermatTriple(*triple_vals)
    except LadderLabError as exc:
        raise ConfigError("triple", str(exc)) from None
    grid = _floats("tau_grid")(args.tau_grid)
    fn = _functionals(args)
    rep = fn.fermat_zeta_test(triple, args.variant, grid, args.tol)
    report.rows.append({"x": triple.x, "y": triple.y, "z": triple.z, "n": triple.n, "variant": args.variant,
                        "tau": grid[-1], "rational": rep.details["rational"], "estimate": rep.details["estimate"],
                        "distance": rep.details["distance"], "residual": rep.residual,
                        "envelope": rep.expected_envelope, "pass": rep.passed})
    report.evals = fn.ladder.integrator.evals


def run_ortho(args, report):
    from .ladder import JacobLadder, LadderConfig
    from .ortho import GenerationSpec, gram_matrix
    p_list = _ints("p_list")(args.p_list)
    cfg = LadderConfig(t_cap=args.t_cap)
    spec = GenerationSpec(args.T, p_list, args.n_max, cfg)
    integ = _integrator(args)
    gram = gram_matrix(spec, JacobLadder(cfg, integ))
    bound = args.tol if len(p_list) == 1 else max(args.tol, 1e-2)
    ok = gram.max_offdiag_rel <= bound and gram.converged
    for n in range(args.n_max + 1):
        for m in range(args.n_max + 1):
            value = float(gram.matrix[n, m])
            if n == m:
                rel, row_ok = 0.0, True
            else:
                rel = abs(value) / math.sqrt(gram.matrix[n, n] * gram.matrix[m, m])
                row_ok = rel <= bound
            report.rows.append({"n": n, "m": m, "G": value, "relative": rel,
                                "normalized_diagonal": float(gram.normalized_diagonal[n]) if n == m else 0.0,
                                "expected_scale": gram.expected_scale, "pass": bool(row_ok and ok)})
    report.evals = integ.evals


def run_cache_warm(args, report):
    from .cache import resolve_cache_dir
    directory = resolve_cache_dir(args.cache_dir)
    if directory is None:
        raise ConfigError("cache_dir", "needs --cache-dir or LADDERLAB_CACHE")
    if not 0 <= args.t_start <= args.t_end <= args.t_cap:
        raise ConfigError("t_start", f"need 0 <= t_start <= t_end <= {args.t_cap:g}")
    written = warm_cache(args.t_start, args.t_end, args.tol, directory)
    report.rows.append({"t_start": args.t_start, "t_end": args.t_end, "written": written, "pass": True})


CAMPAIGNS = {
    "zeta-eval": run_zeta_eval,
    "hl-integral": run_hl_integral,
    "ladder": run_ladder,
    "selberg": run_selberg,
    "functional": run_functional,
    "fermat": run_fermat,
    "ortho": run_ortho,
    "cache-warm": run_cache_warm,
}


# -- output -----------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def render_csv(report: CampaignReport) -> str:
    buf = io.StringIO()
    if report.rows:
        header = list(report.rows[0])
        if report.partial:
            header.append("partial")
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(header)
        for row in report.rows:
            values = [_fmt(row.get(h, "")) for h in header if h != "partial"]
            w.writerow(values + (["true"] if report.partial else []))
    return buf.getvalue()


def _versions() -> dict:
    out = {}
    for pkg in ("artifact", "numpy", "scipy", "numba"):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = None
    return out


def render_json(report: CampaignReport) -> str:
    prov = {"config": report.config, "versions": _versions()}
    # run statistics depend on cache state and timing, so they are opt-in
    if report.wall_time is not None:
        prov["stats"] = {"wall_time": report.wall_time, "evaluations": report.evals,
                         "cache_hit_rate": report.cache_hit_rate}
    doc = {"schema": SCHEMA, "command": report.command, "pass": report.passed, "partial": report.partial,
           "rows": report.rows, "provenance": prov}
    if report.note:
        doc["note"] = report.note
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=True) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write UTF-8 text through a temporary file in the target directory and rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def run(args: argparse.Namespace) -> CampaignReport:
    """Run one campaign; config errors propagate, budget exhaustion yields a partial report."""
    if not args.tol > 0:
        raise ConfigError("tol", "must be positive")
    if not args.t_cap > 0:
        raise ConfigError("t_cap", "must be positive")
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "stats")}
    report = CampaignReport(args.command, config)
    start = time.perf_counter()
    try:
        CAMPAIGNS[args.command](args, report)
    except (ResourceError, RangeCapError) as exc:
        if not report.rows:
            raise
        report.partial, report.note = True, str(exc)
    if args.command != "cache-warm":
        cache = _integrator(args).cache
        if cache is not None and cache.hits + cache.misses:
            report.cache_hit_rate = cache.hit_rate
    if args.stats:
        report.wall_time = time.perf_counter() - start
    return report


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except (ConfigError, ValueError) as exc:
        print(f"ladderlab: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LadderLabError as exc:
        print(f"ladderlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = render_json(report) if args.format == "json" else render_csv(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
