"""Command-line front end.

    anharmonic simulate --config run.json --out run.csv [--format csv|json]
                        [--engine closed|ode] [--with-q]
    anharmonic figure fig1 --out figdir/
    anharmonic compare --config run.json --out cmp.csv [--second-n 200]
    anharmonic report --config run.json

Config files are JSON. Exactly one of ``model`` (scaled) or ``physical``
(frequency units) must be given; ``compare`` needs ``physical``.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from .cumulants import KERNELS, closed_trajectory, integrate_semiclassical, linear_reference
from .figures import FIGURES, figure_curves
from .model import ModelParams, NumericalError, PhysicalParams, scale_parameters
from .numerics import n_steps_for
from .observables import fano_closed, fano_from_cumulants, principal_squeezing
from .oracle import fock_evolve_lossless, lindblad_evolve
from .tables import write_csv, write_json
from .validity import breaking_report

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

SIM_COLUMNS = ("tau", "re_z", "im_z", "re_C", "im_C", "B", "S", "F",
               "re_zcl", "im_zcl", "abs_Q", "abs_z1", "R")


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


_MODEL_FIELDS = {"l", "Gamma", "delta_bar", "n_d", "N", "g_l"}
_PHYS_FIELDS = {"l", "lam", "N", "Delta", "gamma", "n_d"}
_TOP_FIELDS = {"model", "physical", "z0", "tau_max", "dt", "kernel",
               "n_out", "oracle_dt", "n_max"}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    model: ModelParams | None
    physical: PhysicalParams | None
    z0: complex = 1.0 + 0j
    tau_max: float | None = None
    dt: float = 1e-3
    kernel: str = "exact"
    n_out: int = 11
    oracle_dt: float = 1e-3
    n_max: int | None = None

    def scaled(self) -> ModelParams:
        if self.model is not None:
            return self.model
        return scale_parameters(self.physical)

    def describe(self) -> list[str]:
        lines = []
        if self.physical is not None:
            p = self.physical
            lines.append(f"physical: l={p.l} lam={p.lam!r} N={p.N!r} Delta={p.Delta!r} "
                         f"gamma={p.gamma!r} n_d={p.n_d!r}")
        if self.physical is None or self.physical.lam > 0:
            m = self.scaled()
            lines.append(f"model: l={m.l} Gamma={m.Gamma!r} delta_bar={m.delta_bar!r} "
                         f"n_d={m.n_d!r} N={m.N!r} g_l={m.g_l!r}")
        lines.append(f"z0=[{self.z0.real!r}, {self.z0.imag!r}] tau_max={self.tau_max!r} "
                     f"dt={self.dt!r} kernel={self.kernel}")
        return lines


def _number(v, name, *, integer=False, positive=False, nonneg=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {v!r}")
    if integer and int(v) != v:
        raise ConfigError(f"{name}: expected an integer, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(f"{name}: must be finite")
    if positive and not v > 0:
        raise ConfigError(f"{name}: must be > 0, got {v!r}")
    if nonneg and v < 0:
        raise ConfigError(f"{name}: must be >= 0, got {v!r}")
    return int(v) if integer else float(v)


def _block(raw, name, allowed, cls):
    if not isinstance(raw, dict):
        raise ConfigError(f"{name}: expected an object")
    extra = set(raw) - allowed
    if extra:
        raise ConfigError(f"{name}.{sorted(extra)[0]}: unknown field")
    if "l" not in raw:
        raise ConfigError(f"{name}.l: required")
    kw = {}
    for k, v in raw.items():
        kw[k] = _number(v, f"{name}.{k}", integer=(k == "l"))
    try:
        return cls(**kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {exc}") from None


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded JSON config and build a :class:`RunConfig`."""
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be an object")
    extra = set(raw) - _TOP_FIELDS
    if extra:
        raise ConfigError(f"{sorted(extra)[0]}: unknown field")
    if ("model" in raw) == ("physical" in raw):
        raise ConfigError("model/physical: give exactly one of the two blocks")
    model = _block(raw["model"], "model", _MODEL_FIELDS, ModelParams) if "model" in raw else None
    phys = (_block(raw["physical"], "physical", _PHYS_FIELDS, PhysicalParams)
            if "physical" in raw else None)
    kw = {}
    if "z0" in raw:
        z = raw["z0"]
        if isinstance(z, list):
            if len(z) != 2:
                raise ConfigError("z0: expected [re, im]")
            kw["z0"] = complex(_number(z[0], "z0[0]"), _number(z[1], "z0[1]"))
        else:
            kw["z0"] = complex(_number(z, "z0"))
    if "tau_max" in raw:
        kw["tau_max"] = _number(raw["tau_max"], "tau_max", nonneg=True)
    if "dt" in raw:
        kw["dt"] = _number(raw["dt"], "dt", positive=True)
    if "kernel" in raw:
        if raw["kernel"] not in KERNELS:
            raise ConfigError(f"kernel: expected one of {KERNELS}, got {raw['kernel']!r}")
        kw["kernel"] = raw["kernel"]
    if "n_out" in raw:
        kw["n_out"] = _number(raw["n_out"], "n_out", integer=True, positive=True)
    if "oracle_dt" in raw:
        kw["oracle_dt"] = _number(raw["oracle_dt"], "oracle_dt", positive=True)
    if "n_max" in raw:
        kw["n_max"] = _number(raw["n_max"], "n_max", integer=True, positive=True)
    return RunConfig(model=model, physical=phys, **kw)


def load_config(path) -> RunConfig:
    text = Path(path).read_text(encoding="utf-8")  # OSError -> exit 4
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: not valid JSON ({exc})") from None
    return parse_config(raw)


def _require_tau_max(cfg: RunConfig) -> float:
    if cfg.tau_max is None:
        raise ConfigError("tau_max: required for this command")
    return cfg.tau_max


def _steps(tau_max, dt, what="dt"):
    try:
        return n_steps_for(tau_max, dt)
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from None


def run_simulate(cfg: RunConfig, engine: str = "closed", with_q: bool = False):
    """Return ``(columns, comments)`` for one trajectory."""
    tau_max = _require_tau_max(cfg)
    if cfg.physical is not None and cfg.physical.lam == 0:
        raise ConfigError("physical.lam: simulate needs lam > 0")
    m = cfg.scaled()
    n = _steps(tau_max, cfg.dt)
    if engine == "closed":
        if with_q:
            raise ConfigError("--with-q: only meaningful with --engine ode")
        grid = np.arange(n + 1) * cfg.dt
        tr = closed_trajectory(m, cfg.z0, grid, kernel=cfg.kernel)
        F = np.atleast_1d(fano_closed(m, grid))
        label = "engine=closed (closed-form cumulants, closed-form Fano factor)"
    elif engine == "ode":
        tr = integrate_semiclassical(m, cfg.z0, tau_max, dt=cfg.dt, include_Q=with_q,
                                     kernel=cfg.kernel)
        F = np.atleast_1d(fano_from_cumulants(tr.z, tr.C, tr.B))
        label = f"engine=ode (RK4, include_Q={with_q}, richardson_error={tr.error_estimate!r})"
    else:
        raise ConfigError(f"--engine: unknown engine {engine!r}")
    S = np.atleast_1d(principal_squeezing(tr.C, tr.B))
    cols = dict(zip(SIM_COLUMNS, (tr.grid, tr.z.real, tr.z.imag, tr.C.real, tr.C.imag, tr.B,
                                  S, F, tr.z_cl.real, tr.z_cl.imag, np.abs(tr.Q),
                                  np.abs(tr.z1), tr.R)))
    return cols, [label] + cfg.describe()


def _output_grid(cfg: RunConfig, tau_max: float, dt: float):
    """``n_out`` equally spaced output times, each an integer number of ``dt`` steps."""
    n_total = _steps(tau_max, dt, "oracle_dt")
    if cfg.n_out == 1 or n_total == 0:
        return np.array([0], dtype=int)
    if n_total % (cfg.n_out - 1):
        raise ConfigError(f"n_out: {cfg.n_out - 1} intervals do not divide {n_total} oracle steps")
    return np.arange(cfg.n_out) * (n_total // (cfg.n_out - 1))


def _compare_one(cfg: RunConfig, p: PhysicalParams, tau_max: float):
    """Semiclassical and oracle ``S, F, |z|`` on the output grid for one ``N``."""
    linear = p.lam == 0
    g = 1.0 if linear else p.lam * p.N ** p.l
    steps = _output_grid(cfg, tau_max, cfg.oracle_dt)
    tau = steps * cfg.oracle_dt
    t = tau / g
    beta = cfg.z0 * math.sqrt(p.N)
    if linear:
        z, C, B = linear_reference(p.Delta, p.gamma, p.n_d, cfg.z0, t)
        S_sc = principal_squeezing(C, B)
        F_sc = fano_from_cumulants(z, C, B)
        z_sc = z
    else:
        m = scale_parameters(p)
        stride = _steps(cfg.oracle_dt, cfg.dt, "dt")
        # zero-order run for the fluctuations, Q-corrected run for the mean
        tr0 = integrate_semiclassical(m, cfg.z0, tau_max, dt=cfg.dt, richardson=False)
        tr1 = integrate_semiclassical(m, cfg.z0, tau_max, dt=cfg.dt, include_Q=True,
                                      richardson=False)
        idx = steps * stride
        S_sc = principal_squeezing(tr0.C[idx], tr0.B[idx])
        F_sc = fano_from_cumulants(tr0.z[idx], tr0.C[idx], tr0.B[idx])
        z_sc = tr1.z[idx]
    if p.gamma == 0:
        obs = fock_evolve_lossless(p, beta, t, n_max=cfg.n_max)
    else:
        obs = lindblad_evolve(p, beta, t_max=tau_max / g, dt=cfg.oracle_dt / g,
                              n_max=cfg.n_max, t_out=t)
    S_or = np.array([o.S for o in obs])
    F_or = np.array([o.F for o in obs])
    z_or = np.array([abs(o.z) for o in obs])
    return {"tau": tau, "t": t,
            "S_sc": np.atleast_1d(S_sc), "S_or": S_or,
            "dS": np.abs(np.atleast_1d(S_sc) - S_or),
            "F_sc": np.atleast_1d(F_sc), "F_or": F_or,
            "dF": np.abs(np.atleast_1d(F_sc) - F_or),
            "absz_sc": np.abs(np.atleast_1d(z_sc)), "absz_or": z_or,
            "dabsz": np.abs(np.abs(np.atleast_1d(z_sc)) - z_or)}


def _verdict(e1: float, e2: float, n_ratio: float) -> str:
    """Observed convergence order ``p`` in ``error ~ N^-p`` from two runs."""
    if not (e1 > 1e-9 and e2 > 1e-9) or n_ratio == 1:
        return "verdict=errors at round-off level, no scaling"
    p = math.log(e1 / e2) / math.log(n_ratio)
    if abs(p - 1) < 0.25:
        tag = "first-order in 1/N"
    elif abs(p - 2) < 0.25:
        tag = "second-order in 1/N"
    else:
        tag = "no clean power law"
    return f"ratio={e1 / e2:.6g} order={p:.4g} verdict={tag}"


def run_compare(cfg: RunConfig, second_n: float | None = None):
    """Return ``(columns, comments)`` comparing the semiclassical engine with the oracle."""
    if cfg.physical is None:
        raise ConfigError("physical: compare needs physical parameters")
    tau_max = _require_tau_max(cfg)
    p = cfg.physical
    comments = cfg.describe()
    if p.lam == 0:
        comments.append("lam=0: linear oscillator, time columns are physical time")
    comments.append("semiclassical S, F from the zero-order cumulants; |z| from the "
                    "Q-corrected mean")
    comments.append("oracle: " + ("exact number-basis phases" if p.gamma == 0
                                  else "thermal Lindblad master equation (RK4)"))
    cols = _compare_one(cfg, p, tau_max)
    if second_n is not None:
        if not (math.isfinite(second_n) and second_n >= 1):
            raise ConfigError(f"--second-n: must be a finite number >= 1, got {second_n!r}")
        if p.lam == 0:
            p2 = dataclasses.replace(p, N=second_n)
        else:
            m2 = dataclasses.replace(scale_parameters(p), N=second_n)
            p2 = m2.to_physical()
        c2 = _compare_one(cfg, p2, tau_max)
        comments.append(f"second N={second_n!r}; ratio columns are error(N)/error(N2)")
        with np.errstate(divide="ignore", invalid="ignore"):
            for k in ("dS", "dF", "dabsz"):
                cols[f"{k}_N2"] = c2[k]
                cols[f"ratio_{k[1:]}"] = cols[k] / c2[k]
        expect = second_n / p.N
        for k in ("dS", "dF", "dabsz"):
            e1, e2 = float(np.max(cols[k])), float(np.max(c2[k]))
            comments.append(f"error_scaling {k[1:]}: max(N)={e1:.6e} max(N2)={e2:.6e} "
                            + _verdict(e1, e2, expect))
    return cols, comments


def run_figure(which: str, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for c in figure_curves(which):
        path = out / c.filename
        write_csv(path, c.columns, c.comments())
        paths.append(path)
    return paths


def run_report(cfg: RunConfig) -> dict:
    return breaking_report(cfg.scaled(), cfg.z0).to_dict()


def _emit(path, fmt, cols, comments):
    if fmt == "json":
        write_json(path, cols, {"comments": comments})
    else:
        write_csv(path, cols, comments)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="anharmonic",
                                 description="1/N cumulant dynamics of damped anharmonic oscillators")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("simulate", help="integrate one trajectory")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--engine", choices=("closed", "ode"), default="closed")
    s.add_argument("--with-q", action="store_true",
                   help="feed the quantum correction back into the mean (ode engine)")
    f = sub.add_parser("figure", help="write the curve data of a figure")
    f.add_argument("which", choices=FIGURES)
    f.add_argument("--out", required=True)
    c = sub.add_parser("compare", help="compare against the exact quantum oracle")
    c.add_argument("--config", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--second-n", type=float, default=None)
    r = sub.add_parser("report", help="print breaking-time estimates as JSON")
    r.add_argument("--config", required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figure":
            for path in run_figure(args.which, args.out):
                print(path)
            return EXIT_OK
        cfg = load_config(args.config)
        if args.command == "simulate":
            cols, comments = run_simulate(cfg, args.engine, args.with_q)
            _emit(args.out, args.format, cols, comments)
        elif args.command == "compare":
            cols, comments = run_compare(cfg, args.second_n)
            _emit(args.out, args.format, cols, comments)
        else:
            print(json.dumps(run_report(cfg), indent=1))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # parameter validation deeper in the library
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK
