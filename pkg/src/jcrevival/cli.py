"""Command-line front end: CSV time series and consistency reports.

Subcommands
-----------
series      inversion from the Fock-space series (plus the envelope on
            resonance)
integrals   the sum-to-integral representations: J1/J2 on resonance,
            I1/I2 off resonance, with cancellation diagnostics
thermal     low-temperature corrections P1, P2 and the corrected P_g
check       identity and residual self-tests; exits nonzero on failure

Outputs are CSV with a `# key=value` comment block recording the full run
configuration, so a figure can be regenerated from its data file alone.
Identical configurations produce byte-identical files.

Exit codes: 0 ok, 1 check failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import math
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import jcm
from .errors import IntegrandError, PrecisionLossError
from .quadrature import QuadratureSpec

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_CONFIG_KEYS = ("alpha", "delta_omega", "kappa", "gamma_tilde", "theta",
                "beta_epsilon", "n_max", "x_max", "dx", "y_max", "dy",
                "rule", "precision", "t_start", "t_end", "t_steps", "jobs",
                "mode")


@dataclass
class RunConfig:
    command: str
    alpha: float = 4.0
    delta_omega: float = 0.0
    kappa: float = 1.0
    gamma_tilde: float = 1.0
    theta: float = 0.025
    beta_epsilon: float | None = None
    n_max: int = 100
    x_max: float = 100.0
    dx: float = 1e-3
    y_max: float = 100.0
    dy: float = 1e-3
    rule: str = "simpson"
    precision: str = "auto"
    t_start: float = 0.0
    t_end: float = 8.0 * math.pi
    t_steps: int = 4000
    mode: str = "series"
    out: str | None = None
    jobs: int = 0  # 0 means all available cores

    def jcm_config(self) -> jcm.JcmConfig:
        return jcm.JcmConfig(alpha=self.alpha, kappa=self.kappa,
                             delta_omega=self.delta_omega)

    def thermal_config(self) -> jcm.ThermalConfig:
        if self.beta_epsilon is not None:
            return jcm.ThermalConfig.from_beta_epsilon(
                self.beta_epsilon, self.gamma_tilde)
        return jcm.ThermalConfig(theta=self.theta, gamma_tilde=self.gamma_tilde)

    def series_spec(self) -> jcm.SeriesSpec:
        return jcm.SeriesSpec(n_max=self.n_max)

    def x_spec(self, kind: str) -> QuadratureSpec:
        return QuadratureSpec(rule=self.rule, upper_limit=self.x_max,
                              step=self.dx, precision_kind=kind)

    def y_spec(self, kind: str) -> QuadratureSpec:
        return QuadratureSpec(rule="bode", upper_limit=self.y_max,
                              step=self.dy, precision_kind=kind)

    def time_grid(self) -> np.ndarray:
        if self.t_steps < 1:
            raise ValueError("t_steps must be >= 1")
        if self.t_start > self.t_end:
            raise ValueError("t_start must not exceed t_end")
        if self.t_start == self.t_end:
            return np.asarray([self.t_start])
        return np.linspace(self.t_start, self.t_end, self.t_steps + 1)

    def precision_plan(self) -> tuple[str, str]:
        """(scalar kind to compute with, escalation policy)."""
        if self.precision == "extended":
            return "extended", "ignore"
        if self.precision == "standard":
            return "standard", "ignore"
        if self.precision == "auto":
            return "standard", "escalate"
        raise ValueError(f"unknown precision policy {self.precision!r}")


def _parse_scalar(text: str):
    low = text.strip()
    if low.lower() in ("true", "false"):
        return low.lower() == "true"
    for cast in (int, float):
        try:
            return cast(low)
        except ValueError:
            continue
    return low.strip("\"'")


def _read_config_file(path: str) -> dict:
    """Flat `key = value` lines; # starts a comment."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _parse_scalar(value)
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcrevival",
        description="Collapse and revival of Rabi oscillations: series, "
                    "envelope and integral representations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (("series", "Fock-space series inversion"),
                        ("integrals", "integral representations"),
                        ("thermal", "low-temperature corrections"),
                        ("check", "identity and residual self-tests")):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--delta-omega", type=float, default=None)
        p.add_argument("--kappa", type=float, default=None)
        p.add_argument("--gamma-tilde", type=float, default=None)
        p.add_argument("--theta", type=float, default=None)
        p.add_argument("--beta-epsilon", type=float, default=None)
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--x-max", type=float, default=None)
        p.add_argument("--dx", type=float, default=None)
        p.add_argument("--y-max", type=float, default=None)
        p.add_argument("--dy", type=float, default=None)
        p.add_argument("--rule", choices=("simpson", "bode"), default=None)
        p.add_argument("--precision", choices=("standard", "extended", "auto"),
                       default=None)
        p.add_argument("--t-start", type=float, default=None)
        p.add_argument("--t-end", type=float, default=None)
        p.add_argument("--t-steps", type=int, default=None)
        p.add_argument("--mode", choices=("series", "integral"), default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--jobs", type=int, default=None)
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.config:
        for key, value in _read_config_file(args.config).items():
            setattr(cfg, key, value)
    for key in (*_CONFIG_KEYS, "out"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(cfg: RunConfig, t: np.ndarray, columns: dict[str, np.ndarray]):
    lines = []
    for key in ("command", *_CONFIG_KEYS):
        if key == "jobs":
            continue  # parallelism degree never changes the numbers
        value = getattr(cfg, key)
        if value is not None:
            lines.append(f"# {key}={value}")
    lines.append("t," + ",".join(columns))
    cols = list(columns.values())
    for i in range(t.size):
        lines.append(",".join([repr(float(t[i]))] +
                              [_format(col[i]) for col in cols]))
    text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _effective_jobs(cfg: RunConfig, n_samples: int) -> int:
    jobs = cfg.jobs if cfg.jobs > 0 else (os.cpu_count() or 1)
    return max(1, min(jobs, n_samples))


def _parallel_rows(worker, payloads: list, jobs: int) -> list:
    if jobs <= 1 or len(payloads) <= 1:
        return [worker(p) for p in payloads]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, payloads))


def _chunk_payloads(cfg: RunConfig, t: np.ndarray, jobs: int) -> list:
    bounds = np.linspace(0, t.size, jobs + 1).astype(int)
    return [{"cfg": dataclasses.asdict(cfg), "t": t[a:b].tolist()}
            for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _integrals_chunk(payload: dict) -> dict:
    cfg = RunConfig(**payload["cfg"])
    ts = np.asarray(payload["t"])
    kind, escalation = cfg.precision_plan()
    if cfg.delta_omega == 0.0:
        prof = jcm.resonant_profile(ts, cfg.jcm_config(),
                                    cfg.x_spec(kind), cfg.y_spec(kind),
                                    escalation=escalation)
    else:
        prof = jcm.detuned_profile(ts, cfg.jcm_config(), 0,
                                   cfg.x_spec(kind), cfg.y_spec(kind),
                                   escalation=escalation)
    return prof


def _thermal_chunk(payload: dict) -> dict:
    cfg = RunConfig(**payload["cfg"])
    ts = np.asarray(payload["t"])
    kind, escalation = cfg.precision_plan()
    jcfg = cfg.jcm_config()
    thermal = cfg.thermal_config()
    kwargs = dict(mode=cfg.mode, series_spec=cfg.series_spec(),
                  x_spec=cfg.x_spec(kind), y_spec=cfg.y_spec(kind),
                  escalation=escalation)
    with warnings.catch_warnings():
        # the parent process reports the regime warning once, up front
        warnings.simplefilter("ignore", jcm.PerturbativeRegimeWarning)
        p1 = np.atleast_1d(jcm.p1_correction(ts, jcfg, thermal, **kwargs))
        p2 = np.atleast_1d(jcm.p2_correction(ts, jcfg, thermal, **kwargs))
        pth = np.atleast_1d(jcm.pg_thermal(ts, jcfg, thermal, **kwargs))
    return {"P1": p1, "P2": p2, "pg_thermal": pth,
            "sigma_z_thermal": 1.0 - 2.0 * pth}


def _ensure_finite(columns: dict[str, np.ndarray]) -> str | None:
    for name, col in columns.items():
        if not np.all(np.isfinite(col)):
            return name
    return None


def cmd_series(cfg: RunConfig) -> int:
    t = cfg.time_grid()
    jcfg = cfg.jcm_config()
    sigma = np.atleast_1d(jcm.sigma_z_series(t, jcfg, cfg.series_spec()))
    columns = {"sigma_z_series": sigma}
    if cfg.delta_omega == 0.0 and cfg.alpha != 0.0:
        columns["envelope"] = np.atleast_1d(jcm.envelope_approximation(t, jcfg))
    bad = _ensure_finite(columns)
    if bad is not None:
        print(f"numerical failure: column {bad} contains non-finite values",
              file=sys.stderr)
        return EXIT_NUMERICAL
    snapshot = dataclasses.asdict(cfg)
    jcm.TimeSeries(t=t, columns={"sigma_z_series": sigma},
                   provenance="series", config=snapshot)
    if "envelope" in columns:
        jcm.TimeSeries(t=t, columns={"envelope": columns["envelope"]},
                       provenance="envelope", config=snapshot)
    _write_csv(cfg, t, columns)
    return EXIT_OK


def cmd_integrals(cfg: RunConfig) -> int:
    t = cfg.time_grid()
    jobs = _effective_jobs(cfg, t.size)
    chunks = _parallel_rows(_integrals_chunk, _chunk_payloads(cfg, t, jobs), jobs)
    prof = {key: np.concatenate([c[key] for c in chunks]) for key in chunks[0]}
    over = prof.pop("over_budget")
    escalated = prof.pop("escalated")
    # status: 0 ok, 1 escalated to extended, 2 precision loss (unrecoverable)
    prof["status"] = np.where(over, 2, np.where(escalated, 1, 0))
    value_cols = {k: v for k, v in prof.items()
                  if k in ("J1", "J2", "I1", "I2", "sigma_z")}
    bad = _ensure_finite(value_cols)
    if bad is not None:
        print(f"numerical failure: column {bad} contains non-finite values",
              file=sys.stderr)
        return EXIT_NUMERICAL
    jcm.TimeSeries(t=t, columns=value_cols,
                   provenance="integral_J" if cfg.delta_omega == 0.0 else "integral_I",
                   config=dataclasses.asdict(cfg))
    _write_csv(cfg, t, prof)
    if over.any():
        print(f"precision loss on {int(over.sum())} of {t.size} rows "
              "(status column = 2)", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_thermal(cfg: RunConfig) -> int:
    t = cfg.time_grid()
    thermal = cfg.thermal_config()
    jcfg = cfg.jcm_config()
    strength = jcm.perturbative_strength(jcfg, thermal)
    if strength > 0.5:
        print(f"warning: perturbative strength {strength:.3g} > 0.5; the "
              "second-order expansion is marginal here", file=sys.stderr)
    jobs = _effective_jobs(cfg, t.size)
    chunks = _parallel_rows(_thermal_chunk, _chunk_payloads(cfg, t, jobs), jobs)
    columns = {key: np.concatenate([c[key] for c in chunks]) for key in chunks[0]}
    bad = _ensure_finite(columns)
    if bad is not None:
        print(f"numerical failure: column {bad} contains non-finite values",
              file=sys.stderr)
        return EXIT_NUMERICAL
    snapshot = dataclasses.asdict(cfg)
    jcm.TimeSeries(t=t, columns={"P1": columns["P1"]},
                   provenance="thermal_1", config=snapshot)
    jcm.TimeSeries(t=t, columns={"P2": columns["P2"],
                                 "pg_thermal": columns["pg_thermal"]},
                   provenance="thermal_2", config=snapshot)
    _write_csv(cfg, t, columns)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    """Identity and residual self-tests; prints PASS/FAIL per item."""
    kind, escalation = cfg.precision_plan()
    x_spec = cfg.x_spec("standard")
    y_spec = cfg.y_spec("standard")
    failures = 0

    def report(name: str, measured: float, bound: float):
        nonlocal failures
        ok = measured <= bound
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'}  {name}: measured {measured:.4e} "
              f"(bound {bound:.1e})")

    for alpha in (1.0, 2.0, 3.0, 4.0):
        lhs, rhs = jcm.abel_plana_identity(alpha, x_spec, y_spec)
        report(f"sum-to-integral identity alpha={alpha:g}",
               abs(lhs - rhs) / abs(rhs), 1e-6)

    jcfg = cfg.jcm_config()
    if jcfg.delta_omega == 0.0 and jcfg.alpha != 0.0:
        ts = np.linspace(0.0, 4.0 * math.pi, 201)
        spec = cfg.series_spec()
        sigma = np.atleast_1d(jcm.sigma_z_series(ts, jcfg, spec))
        prof = jcm.resonant_profile(ts, jcfg, x_spec, y_spec,
                                    escalation=escalation)
        report("collapse-window residual |sigma_series - J1|, t in [0, 4pi]",
               float(np.abs(sigma - prof["J1"]).max()), 1.0e-3)

    worst = 0.0
    for c_val in (0.0, 1.0, 4.0):
        for l in (0, 1, 2):
            for t in (0.5, 1.0, 2.0):
                probe = jcm.JcmConfig(alpha=jcfg.alpha if jcfg.alpha else 4.0,
                                      delta_omega=2.0 * math.sqrt(c_val))
                worst = max(worst, _origin_limit_residual(probe, l, t))
    report("correction integrand y->0 limits vs Richardson", worst, 1e-6)

    t_probe = 1.3
    q0 = jcm.q_g(0, t_probe, jcfg, "series", cfg.series_spec())
    pg = jcm.pg_series(t_probe, jcfg, cfg.series_spec())
    report("Q^(0) equals P_g (series)", abs(q0 - pg), 1e-12)
    if jcfg.alpha != 0.0:
        q0i = jcm.q_g(0, t_probe, jcfg, "integral", cfg.series_spec(),
                      x_spec, y_spec, escalation=escalation)
        report("Q^(0) equals P_g (integral)", abs(q0i - pg), 1e-5)

    print(f"{'ALL CHECKS PASSED' if failures == 0 else f'{failures} CHECK(S) FAILED'}")
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def _origin_limit_residual(cfg: jcm.JcmConfig, l: int, t: float) -> float:
    """Relative gap between the analytic y->0 limit and Richardson
    extrapolation of the directly sampled correction integrand."""
    analytic = jcm.correction_origin(cfg, l, abs(cfg.kappa) * t)
    h = 1e-4
    f1, f2, f3 = (jcm.correction_integrand_probe(cfg, l, t, y)
                  for y in (h, h / 2.0, h / 4.0))
    extrapolated = (f1 - 6.0 * f2 + 8.0 * f3) / 3.0
    return abs(extrapolated - analytic) / max(abs(analytic), 1e-30)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        handler = {"series": cmd_series, "integrals": cmd_integrals,
                   "thermal": cmd_thermal, "check": cmd_check}[cfg.command]
        return handler(cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionLossError, IntegrandError, OverflowError,
            FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
