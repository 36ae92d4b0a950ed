"""Command-line front end: ``hingedmems <command> [--config FILE] [flags]``.

Exit status: 0 on success, 2 when a computed result violates an expected
invariant, 1 on usage, configuration or I/O errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import RadialGrid
from .model import Params, validate
from .output import fmt, read_profile, write_csv, write_json

log = logging.getLogger("hingedmems")

COMMANDS = ("stationary", "sweep", "eigen", "stability", "evolve", "smallgap", "energy", "mms", "verify")

PARAM_KEYS = ("beta", "tau", "sigma", "eps", "lambda", "kappa")
# key -> (parser, default)
OPTIONS = {
    "nr": (int, 32),
    "neta": (int, 16),
    "tol": (float, 1e-10),
    "max_iter": (int, 0),  # 0: solver default
    "method": (str, "newton"),
    "theta": (float, 1.0),
    "dlambda": (float, 0.5),
    "dt": (float, 1e-3),
    "t_final": (float, 0.0),  # 0: 10 / decay rate estimate
    "perturb": (float, 0.05),
    "start": (str, "perturbed"),
    "rho": (float, 0.1),
    "input": (str, ""),
    "seed": (int, 0),
    "directions": (int, 5),
    "step": (float, 1e-4),
    "levels": (str, "32,64,128"),
    "eps_list": (str, ""),
    "jobs": (int, 1),
    "stride": (int, 1),
    "out_dir": (str, "out"),
}


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


@dataclass
class RunConfig:
    params: Params
    options: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["options"][name]
        except KeyError:
            raise AttributeError(name) from None

    def lines(self) -> list[str]:
        p = self.params
        vals = {"beta": p.beta, "tau": p.tau, "sigma": p.sigma, "eps": p.eps, "lambda": p.lam,
                "kappa": p.kappa}
        vals.update(self.options)
        return [f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in sorted(vals.items())]


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in PARAM_KEYS and key not in OPTIONS:
            raise UsageError(f"{source}:{lineno}: unknown key {key!r}")
        out[key] = val
    return out


def build_config(raw: dict[str, str], command: str) -> RunConfig:
    pvals = {}
    for key in PARAM_KEYS:
        if key in raw:
            try:
                pvals["lam" if key == "lambda" else key] = float(raw[key])
            except ValueError:
                raise UsageError(f"{key}: not a number: {raw[key]!r}") from None
    p = Params(**pvals)
    problems = validate(p)
    # the Navier endpoint sigma = 1 is kept for the linear eigenvalue oracle
    if command == "eigen" and p.sigma == 1.0:
        problems = [s for s in problems if not s.startswith("sigma")]
    if problems:
        raise UsageError("invalid parameters: " + ", ".join(problems))
    opts = {}
    for key, (typ, default) in OPTIONS.items():
        if key in raw:
            try:
                opts[key] = typ(raw[key])
            except ValueError:
                raise UsageError(f"{key}: cannot parse {raw[key]!r}") from None
        else:
            opts[key] = default
    if opts["nr"] < 16 or opts["neta"] < 16:
        raise UsageError("grid sizes nr and neta must be >= 16")
    if not 0 < opts["tol"] <= 1e-4:
        raise UsageError("tol must lie in (0, 1e-4]")
    if opts["method"] not in ("picard", "newton"):
        raise UsageError("method must be picard or newton")
    if opts["jobs"] < 1:
        raise UsageError("jobs must be >= 1")
    return RunConfig(p, opts)


# ---------------------------------------------------------------- commands

def _problem(cfg, p=None):
    from .stationary import Problem
    return Problem(cfg.params if p is None else p, cfg.nr, cfg.neta)


def _max_iter(cfg):
    return cfg.max_iter or None


def _solve(cfg, prob, u0=None):
    from .stationary import solve_stationary
    return solve_stationary(prob, u0, method=cfg.method, tol=cfg.tol, max_iter=_max_iter(cfg),
                            theta=cfg.theta)


def _mu1(p, n):
    from .spectrum import principal_eigenpair
    return principal_eigenpair(p, RadialGrid(n))


def _invariant_dict(inv) -> dict:
    return {"u_max": inv.max_u, "u_min": inv.min_u, "laplacian_min": inv.min_laplacian,
            "force_min": inv.min_force, "dz_psi_min": inv.min_dz_psi,
            "psi_excess_max": inv.sup_psi_minus_M, "rim_value": inv.rim_value}


def cmd_stationary(cfg, out: Path) -> int:
    from .stationary import membership, stationary_invariants
    prob = _problem(cfg)
    rep = _solve(cfg, prob)
    r = prob.radial.r
    write_csv(out / "u.csv", ["r", "u"], zip(r, rep.solution))
    summary = {"lambda": cfg.params.lam, "converged": rep.converged, "iterations": rep.iterations,
               "residual": rep.residual}
    status = 0
    if rep.converged:
        inv = stationary_invariants(prob, rep.solution)
        mem = membership(prob.radial, rep.solution, cfg.rho)
        summary.update(_invariant_dict(inv))
        summary.update({"rho": mem.rho, "w23_norm": mem.w23_norm, "min_gap": mem.min_gap,
                        "in_S": mem.in_S, "invariants_ok": inv.ok()})
        if not inv.ok():
            status = 2
    else:
        summary["message"] = rep.message
        status = 2
    write_json(out / "summary.json", summary)
    return status


def _sweep_one(args):
    p, nr, neta, dlambda, method, tol = args
    from .stationary import Problem, continue_in_lambda
    return continue_in_lambda(Problem(p, nr, neta), dlambda, method=method, tol=tol)


def _write_sweep(out: Path, trace, mu1) -> int:
    from .stationary import trace_csv, trace_summary
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(trace_csv(trace), newline="\n")
    write_json(out / "summary.json", trace_summary(trace, mu1))
    return 0 if trace.lambda_star < mu1 else 2


def cmd_sweep(cfg, out: Path) -> int:
    p = cfg.params
    mu1 = _mu1(p, cfg.nr).mu1
    if not cfg.eps_list:
        return _write_sweep(out, _sweep_one((p, cfg.nr, cfg.neta, cfg.dlambda, cfg.method, cfg.tol)), mu1)
    try:
        eps_values = [float(s) for s in cfg.eps_list.split(",")]
    except ValueError:
        raise UsageError(f"eps_list: cannot parse {cfg.eps_list!r}") from None
    jobs = [(p.with_(eps=e), cfg.nr, cfg.neta, cfg.dlambda, cfg.method, cfg.tol) for e in eps_values]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            traces = list(ex.map(_sweep_one, jobs))
    else:
        traces = [_sweep_one(j) for j in jobs]
    status, rows = 0, []
    for e, tr in zip(eps_values, traces):
        status = max(status, _write_sweep(out / f"eps_{fmt(e)}", tr, mu1))
        rows.append((e, tr.lambda_star, tr.bracket[0], tr.bracket[1]))
    write_csv(out / "scan.csv", ["eps", "lambda_star", "bracket_lo", "bracket_hi"], rows)
    return status


def cmd_eigen(cfg, out: Path) -> int:
    from .spectrum import second_eigenvalue
    g = RadialGrid(cfg.nr)
    pair = _mu1(cfg.params, cfg.nr)
    mu2 = second_eigenvalue(cfg.params, g, pair)
    write_csv(out / "phi1.csv", ["r", "phi"], zip(g.r, pair.phi1))
    slope = pair.boundary_slope(g)
    write_json(out / "summary.json", {"mu1": pair.mu1, "residual": pair.residual,
                                      "iterations": pair.iterations, "converged": pair.converged,
                                      "mu2": mu2, "boundary_slope": slope})
    positive = bool(np.all(pair.phi1[:-1] > 0)) and slope < 0
    return 0 if positive and pair.mu1 > 0 and mu2 > pair.mu1 else 2


def cmd_stability(cfg, out: Path) -> int:
    from .spectrum import linearized_spectral_bound
    from .stationary import continue_in_lambda
    prob = _problem(cfg)
    tr = continue_in_lambda(prob, cfg.dlambda, method=cfg.method, tol=cfg.tol)
    lams = sorted(tr.solutions)[:: max(1, cfg.stride)]
    rows = []
    for lam in lams:
        rep = linearized_spectral_bound(prob.with_lambda(lam), tr.solutions[lam])
        rows.append((lam, rep.min_real_part, rep.stable))
    write_csv(out / "stability.csv", ["lambda", "min_real_part", "stable"], rows)
    last = rows[-1]
    write_json(out / "summary.json", {"lambda_star": tr.lambda_star, "lambda": last[0],
                                      "min_real_part": last[1], "stable": last[2],
                                      "min_real_part_at_zero": rows[0][1]})
    return 0


def cmd_evolve(cfg, out: Path) -> int:
    from .evolution import evolve
    from .spectrum import linearized_spectral_bound
    p = cfg.params
    prob = _problem(cfg)
    r = prob.radial.r
    target, rate = None, None
    if cfg.start == "zero":
        u0 = np.zeros(cfg.nr + 1)
    elif cfg.start == "perturbed":
        rep = _solve(cfg, prob)
        if not rep.converged:
            raise InvariantViolation(f"no stationary state to perturb at lambda={p.lam}: {rep.message}")
        target = rep.solution
        u0 = target + cfg.perturb * (1.0 - r**2)
        rate = linearized_spectral_bound(prob, target).min_real_part
    else:
        raise UsageError("start must be zero or perturbed")
    T = cfg.t_final or (10.0 / rate if rate else 1.0)
    tr = evolve(p, u0, T, cfg.dt, target, neta=cfg.neta)
    (out / "evolution.csv").write_text(tr.to_csv(), newline="\n")
    write_csv(out / "u.csv", ["r", "u"], zip(r, tr.final))
    summary = tr.summary()
    if rate is not None:
        summary["min_real_part"] = rate
    write_json(out / "summary.json", summary)
    return 0


def cmd_smallgap(cfg, out: Path) -> int:
    from .smallgap import SmallGapProblem, smallgap_fold, solve_smallgap
    from .stationary import trace_csv, trace_summary
    pb = SmallGapProblem.create(cfg.params.with_(eps=0.0), cfg.nr)
    rep = solve_smallgap(pb, cfg.params.lam, method=cfg.method, tol=cfg.tol, max_iter=_max_iter(cfg))
    write_csv(out / "u.csv", ["r", "u"], zip(pb.grid.r, rep.solution))
    tr = smallgap_fold(pb, cfg.dlambda, method=cfg.method, tol=cfg.tol)
    (out / "sweep.csv").write_text(trace_csv(tr), newline="\n")
    mu1 = _mu1(pb.params, cfg.nr).mu1
    summary = trace_summary(tr, mu1)
    summary.update({"lambda": cfg.params.lam, "converged": rep.converged, "u_center": rep.solution[0]})
    write_json(out / "summary.json", summary)
    return 0 if rep.converged and tr.lambda_star < mu1 else 2


def cmd_energy(cfg, out: Path) -> int:
    from .energy import (energy_at, scheme_energy_derivative, variation_test_elec,
                         variation_test_mech)
    from .grid import l2_norm
    prob = _problem(cfg)
    p = cfg.params
    r = prob.radial.r
    u = np.zeros(cfg.nr + 1)
    if p.lam > 0:
        rep = _solve(cfg, prob)
        if not rep.converged:
            raise InvariantViolation(f"stationary solve failed: {rep.message}")
        u = rep.solution
    e = energy_at(prob.cylinder, u, p)
    rng = np.random.default_rng(cfg.seed)
    mech, elec, deriv = [], [], []
    for _ in range(cfg.directions):
        # smooth probe pair: w in S(0.2) and a direction, both vanishing at the rim
        a, b = rng.uniform(-1.0, 1.0, size=(2, 3))
        w = 0.25 * (1.0 - r**2) * (a[0] + a[1] * r**2 + a[2] * r**4)
        v = (1.0 - r**2) * (b[0] + b[1] * r**2 + b[2] * r**4)
        mech.append(variation_test_mech(prob.radial, w, v, p, cfg.step))
        elec.append(variation_test_elec(prob.cylinder, w, v, p, cfg.step))
        deriv.append(abs(scheme_energy_derivative(prob.plate, prob.cylinder, u, v, p, cfg.step))
                     / l2_norm(prob.radial, v))
    summary = {"e_mech": e.e_mech, "e_elec": e.e_elec, "e_total": e.e_total,
               "bending_lower_bound": e.bending_lower_bound,
               "defect_mech_max": max(mech, default=0.0), "defect_elec_max": max(elec, default=0.0),
               "stationary_derivative_max": max(deriv, default=0.0)}
    write_json(out / "summary.json", summary)
    bad = max(mech + elec, default=0.0) > 1e-3 or e.e_mech < e.bending_lower_bound - 1e-12
    return 2 if bad else 0


def cmd_mms(cfg, out: Path) -> int:
    from .potential import mms_convergence
    try:
        levels = [int(s) for s in cfg.levels.split(",")]
    except ValueError:
        raise UsageError(f"levels: cannot parse {cfg.levels!r}") from None
    if len(levels) < 2:
        raise UsageError("levels needs at least two grid sizes")
    eps = cfg.params.eps or 1.0
    errs, orders = mms_convergence(eps, levels, cfg.neta / cfg.nr)
    rows = [(n, e, orders[i - 1] if i else float("nan")) for i, (n, e) in enumerate(zip(levels, errs))]
    write_csv(out / "mms.csv", ["n", "error", "order"], rows)
    write_json(out / "summary.json", {"eps": eps, "order_min": min(orders), "order_max": max(orders)})
    return 0 if all(1.8 <= o <= 2.2 for o in orders) else 2


def cmd_verify(cfg, out: Path) -> int:
    from .plate import check_hinged_bc
    from .stationary import stationary_invariants
    if not cfg.input:
        raise UsageError("verify needs input=<u.csv>")
    try:
        r, u = read_profile(cfg.input)
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.input}: {exc}") from None
    g = RadialGrid(len(r) - 1)
    if not np.allclose(r, g.r, atol=1e-12):
        raise UsageError("input radii are not a uniform grid on [0, 1]")
    prob = _problem(cfg.__class__(cfg.params, {**cfg.options, "nr": g.n}))
    inv = stationary_invariants(prob, u)
    rim, steklov = check_hinged_bc(g, u, cfg.params)
    fp = float(np.max(np.abs(u - prob.picard_map(u)))) if min(u) > -1 else float("inf")
    summary = _invariant_dict(inv)
    summary.update({"rim_abs": rim, "steklov_residual": steklov, "fixed_point_residual": fp,
                    "invariants_ok": inv.ok()})
    write_json(out / "summary.json", summary)
    return 0 if inv.ok() else 2


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# ---------------------------------------------------------------- entry point

def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hingedmems", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key=value file")
    ap.add_argument("--out", dest="out_dir", help="output directory")
    for key in PARAM_KEYS:
        ap.add_argument(f"--{key}", dest=key, default=None)
    for key in OPTIONS:
        if key == "out_dir":
            continue
        ap.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        raw = {}
        if args.config:
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                raise UsageError(f"cannot read config {args.config}: {exc}") from None
            raw.update(parse_config_text(text, args.config))
        for key in (*PARAM_KEYS, *OPTIONS):
            val = getattr(args, key, None)
            if val is not None:
                raw[key] = val
        cfg = build_config(raw, args.command)
        out = Path(cfg.out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
            (out / "effective_config.txt").write_text("\n".join(cfg.lines()) + "\n", newline="\n")
        except OSError as exc:
            raise UsageError(f"cannot write to {out}: {exc}") from None
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    handler = logging.FileHandler(out / "run.log", mode="w")
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.addHandler(handler)
    root.setLevel(logging.INFO)
    try:
        log.info("command %s, config %s", args.command, "; ".join(cfg.lines()))
        status = HANDLERS[args.command](cfg, out)
        log.info("finished with status %d", status)
        if status == 2:
            print(f"{args.command}: invariant check failed (see {out / 'summary.json'})", file=sys.stderr)
        return status
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        log.error("%s", exc)
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        log.error("%s", exc)
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 1
    finally:
        root.removeHandler(handler)
        handler.close()


if __name__ == "__main__":
    sys.exit(main())
