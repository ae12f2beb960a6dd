"""Atomic population inversion of the Jaynes-Cummings model.

A two-level atom starts in its ground state, the cavity mode in a coherent
state of real amplitude alpha (mean photon number alpha^2).  The ground-state
probability P_g(t) is a Poisson-weighted trigonometric series; the inversion
is <sigma_z>(t) = 1 - 2 P_g(t).  This module provides that series, the
large-alpha envelope approximation, and integral representations obtained by
trading the sum for a real-axis integral plus a correction integral along
the imaginary direction:

* general detuning: families I1^(l), I2^(l) and the assembled inversion,
* resonance: J1 (carries the initial collapse) and J2 (carries the revival),
* the long-time plateau constant of the detuned collapse,
* low-temperature corrections for a thermal coherent state, expanded to
  second order in the small parameter theta with tanh(theta) = e^{-be/2}.

Times are measured in units of 1/|kappa|.  The correction integrands
oscillate with an envelope that grows like exp(t^2/(3 pi)); every integral
therefore reports a cancellation diagnostic, and operations escalate to the
extended (double-double) scalar kind or signal once the standard budget of
~1e12 is exhausted.  The revival window t in [4 pi, 8 pi] at alpha = 4 needs
the extended kind; beyond roughly 8 pi even that is insufficient and the
computation refuses rather than returning noise.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import gammaln

from . import ddmath, quadrature, special
from .ddmath import CDD, DD
from .errors import PrecisionLossError
from .quadrature import IntegralResult, QuadratureSpec

EULER_GAMMA = special.EULER_GAMMA

# prefix-sum growth beyond which a kind's digits are exhausted (value rounds
# to noise); standard doubles hold ~16 digits, double-double ~32
CANCELLATION_BUDGET = {"standard": 1e12, "extended": 1e25}

Mode = Literal["series", "integral"]
Escalation = Literal["raise", "escalate", "ignore"]

DEFAULT_X_SPEC = QuadratureSpec(rule="simpson", upper_limit=100.0, step=1e-3)
DEFAULT_Y_SPEC = QuadratureSpec(rule="bode", upper_limit=100.0, step=1e-3)


class PerturbativeRegimeWarning(UserWarning):
    """The thermal expansion parameters sit outside the perturbative regime."""


@dataclass(frozen=True)
class JcmConfig:
    """Physical parameters: coupling kappa, detuning, coherent amplitude."""

    alpha: float
    kappa: float = 1.0
    delta_omega: float = 0.0

    def __post_init__(self):
        if self.kappa == 0.0:
            raise ValueError("kappa must be nonzero")
        for name in ("alpha", "kappa", "delta_omega"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def c(self) -> float:
        """Dimensionless squared detuning (delta_omega / 2 kappa)^2."""
        return (self.delta_omega / (2.0 * self.kappa)) ** 2


@dataclass(frozen=True)
class ThermalConfig:
    """Low-temperature parameters: expansion parameter theta and the
    tilde-mode amplitude gamma_tilde."""

    theta: float
    gamma_tilde: float
    beta_epsilon: float | None = None

    def __post_init__(self):
        if not (0.0 <= self.theta < 1.0):
            raise ValueError("theta must lie in [0, 1)")

    @classmethod
    def from_beta_epsilon(cls, beta_epsilon: float, gamma_tilde: float,
                          exact: bool = True) -> "ThermalConfig":
        th = theta_of_beta(beta_epsilon)
        return cls(theta=th.exact if exact else th.approximate,
                   gamma_tilde=gamma_tilde, beta_epsilon=beta_epsilon)


def perturbative_strength(cfg: JcmConfig, thermal: ThermalConfig) -> float:
    """theta^2 (4 gamma_tilde^2 + 1) alpha^2; above ~0.5 the second-order
    truncation is no longer trustworthy."""
    return thermal.theta ** 2 * (4.0 * thermal.gamma_tilde ** 2 + 1.0) * cfg.alpha ** 2


@dataclass(frozen=True)
class SeriesSpec:
    """Truncation of the photon-number sums."""

    n_max: int = 100
    override_tail_guard: bool = False

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")


DEFAULT_SERIES_SPEC = SeriesSpec()


@dataclass
class ThetaResult:
    exact: float
    approximate: float


def theta_of_beta(beta_epsilon: float) -> ThetaResult:
    """theta from tanh(theta) = e^{-beta epsilon / 2}.

    Returns both the exact inversion and the leading-order approximation
    theta ~ e^{-beta epsilon / 2} (they differ at O(theta^3)).
    """
    if not beta_epsilon > 0.0:
        raise ValueError("beta_epsilon must be positive (low-temperature regime)")
    x = math.exp(-beta_epsilon / 2.0)
    return ThetaResult(exact=math.atanh(x), approximate=x)


@dataclass
class TimeSeries:
    """Sampled t -> values with a record of which representation made them."""

    t: np.ndarray
    columns: dict[str, np.ndarray]
    provenance: Literal["series", "envelope", "integral_J", "integral_I",
                        "thermal_1", "thermal_2"]
    config: dict

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        if self.t.ndim != 1:
            raise ValueError("t must be one-dimensional")
        if self.t.size > 1 and not np.all(np.diff(self.t) > 0.0):
            raise ValueError("t must be strictly increasing")
        for name, col in self.columns.items():
            col = np.asarray(col)
            if col.shape != self.t.shape:
                raise ValueError(f"column {name!r} does not match the t grid")
            if not np.all(np.isfinite(col)):
                raise ValueError(f"column {name!r} contains non-finite values")


# ---------------------------------------------------------------------------
# series representation
# ---------------------------------------------------------------------------

def _poisson_weights(alpha: float, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    if alpha == 0.0:
        w = np.zeros(n_max + 1)
        w[0] = 1.0
        return w
    # 2 n log|alpha| rather than n log(alpha^2): alpha^2 can underflow
    return np.exp(2.0 * n * math.log(abs(alpha)) - gammaln(n + 1.0)
                  - alpha * alpha)


def _check_series_spec(cfg: JcmConfig, spec: SeriesSpec):
    need = cfg.alpha ** 2 + 10.0 * math.sqrt(cfg.alpha ** 2 + 1.0)
    if spec.n_max < need and not spec.override_tail_guard:
        raise ValueError(
            f"n_max = {spec.n_max} does not cover the Poisson tail for "
            f"alpha = {cfg.alpha} (need >= {need:.1f}); raise n_max or set "
            "override_tail_guard")


def pg_series(t, cfg: JcmConfig, spec: SeriesSpec = DEFAULT_SERIES_SPEC):
    """Ground-state probability P_g(t) by direct Fock-space summation.

    Vectorized over t; scalar in, scalar out.  Values are confined to
    [0, 1] up to roundoff; a violation beyond 1e-9 raises.
    """
    _require_nonnegative_time(t)
    t_arr, scalar = _time_grid(t)
    _check_series_spec(cfg, spec)
    w = _poisson_weights(cfg.alpha, spec.n_max)
    n = np.arange(spec.n_max + 1)
    half = 0.5 * cfg.delta_omega
    disc = half * half + n * cfg.kappa ** 2
    ratio = np.divide(half * half, disc, out=np.zeros_like(disc),
                      where=disc > 0.0)
    root = np.sqrt(disc)
    phase = root[None, :] * t_arr[:, None]
    s2 = np.sin(phase) ** 2
    bracket = (1.0 - s2) + ratio[None, :] * s2   # cos^2 + ratio sin^2
    vals = bracket @ w
    if np.any(vals < -1e-9) or np.any(vals > 1.0 + 1e-9):
        raise FloatingPointError("P_g left [0, 1] beyond roundoff tolerance")
    vals = np.clip(vals, 0.0, 1.0 + 1e-12)
    return float(vals[0]) if scalar else vals


def sigma_z_series(t, cfg: JcmConfig, spec: SeriesSpec = DEFAULT_SERIES_SPEC):
    """Population inversion 1 - 2 P_g(t); -1 is the ground state."""
    _require_nonnegative_time(t)
    return 1.0 - 2.0 * pg_series(t, cfg, spec)


def sigma_z_series_resonant(t, cfg: JcmConfig,
                            spec: SeriesSpec = DEFAULT_SERIES_SPEC):
    """Resonant form -e^{-a^2} sum w_n cos(2 sqrt(n) |kappa| t).

    Equals sigma_z_series when delta_omega = 0 (cross-checked in tests to
    1e-12); kept as an independent implementation of the same observable.
    """
    if cfg.delta_omega != 0.0:
        raise ValueError("the resonant series form requires delta_omega = 0")
    _require_nonnegative_time(t)
    t_arr, scalar = _time_grid(t)
    _check_series_spec(cfg, spec)
    w = _poisson_weights(cfg.alpha, spec.n_max)
    n = np.arange(spec.n_max + 1)
    phase = 2.0 * np.sqrt(n)[None, :] * (abs(cfg.kappa) * t_arr[:, None])
    vals = -(np.cos(phase) @ w)
    return float(vals[0]) if scalar else vals


def envelope_approximation(t, cfg: JcmConfig):
    """Large-alpha resonant approximation of the inversion.

    -exp[a^2 (cos(T/|a|) - 1)] cos(|a| T + a^2 sin(T/|a|)) with T = |kappa| t.
    The exponential factor is the beat envelope: it collapses on a time
    scale of order one and recurs with period 2 pi |alpha|.
    """
    if cfg.delta_omega != 0.0:
        raise ValueError("the envelope approximation is derived on resonance only")
    if cfg.alpha == 0.0:
        raise ValueError("the envelope approximation requires alpha != 0")
    _require_nonnegative_time(t)
    t_arr, scalar = _time_grid(t)
    a = abs(cfg.alpha)
    big_t = abs(cfg.kappa) * t_arr
    envelope = np.exp(cfg.alpha ** 2 * (np.cos(big_t / a) - 1.0))
    vals = -envelope * np.cos(a * big_t + cfg.alpha ** 2 * np.sin(big_t / a))
    return float(vals[0]) if scalar else vals


def envelope_factor(t, cfg: JcmConfig):
    """Just the beat envelope exp[a^2 (cos(T/|a|) - 1)]."""
    if cfg.alpha == 0.0:
        raise ValueError("the envelope factor requires alpha != 0")
    t_arr, scalar = _time_grid(t)
    big_t = abs(cfg.kappa) * t_arr
    vals = np.exp(cfg.alpha ** 2 * (np.cos(big_t / abs(cfg.alpha)) - 1.0))
    return float(vals[0]) if scalar else vals


def _time_grid(t):
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    return arr, np.ndim(t) == 0


def _require_nonnegative_time(t):
    if np.any(np.asarray(t) < 0.0):
        raise ValueError("t must be nonnegative")


# ---------------------------------------------------------------------------
# integrand families
# ---------------------------------------------------------------------------

def _require_positive_alpha(cfg: JcmConfig):
    if cfg.alpha == 0.0:
        raise ValueError(
            "the integral representation needs alpha != 0 "
            "(|alpha|^{2x} is ill-defined at alpha = 0); use the series form")


class _LineFamily:
    """Integrals of |a|^{2x}/Gamma(x+1) times a trigonometric bracket.

    The weight and the square-root arguments do not depend on t, so one
    family instance amortizes them over a whole time sweep.  j_form selects
    the plain cos(2 sqrt(x) T) bracket of the resonant decomposition;
    otherwise the bracket is cos^2 + (c/(x+c+l)) sin^2 at shifted index l.
    """

    def __init__(self, cfg: JcmConfig, l: int, spec: QuadratureSpec,
                 j_form: bool = False, time_average: bool = False):
        _require_positive_alpha(cfg)
        self.kind = spec.precision_kind
        self.grid = quadrature.build_grid(0.0, spec.upper_limit, spec)
        ext = self.kind == "extended"
        x = self.grid.x
        ln_alpha = math.log(abs(cfg.alpha))
        if ext:
            lw = x * DD(2.0 * ln_alpha) - special.log_gamma(x + 1.0)
            # 2*ln_alpha as a double is exact enough: the weight is smooth
            # and shared by every representation being compared
            w = ddmath.exp(lw)
            s0 = DD(cfg.c + float(l))
            self.sqrt_arg = ddmath.sqrt(x + s0)
            ratio = (DD(cfg.c) / (x + s0)) if cfg.c > 0.0 else DD(np.zeros_like(x.hi))
        else:
            w = np.exp(2.0 * ln_alpha * x - special.log_gamma(x + 1.0))
            s0 = cfg.c + float(l)
            self.sqrt_arg = np.sqrt(x + s0)
            ratio = cfg.c / (x + s0) if cfg.c > 0.0 else np.zeros_like(x)
        if j_form:
            self.a0 = w * 0.0
            self.a1 = w
        elif time_average:
            # cos^2 and sin^2 replaced by their mean 1/2
            self.a0 = w * (1.0 + ratio) * 0.5
            self.a1 = w * 0.0
        else:
            self.a0 = w * (1.0 + ratio) * 0.5
            self.a1 = w * (1.0 - ratio) * 0.5

    def integral(self, big_t: float) -> IntegralResult:
        if big_t == 0.0:
            samples = self.a0 + self.a1
        else:
            phase = self.sqrt_arg * (2.0 * big_t)
            cs = ddmath.cos(phase) if self.kind == "extended" else np.cos(phase)
            samples = self.a0 + self.a1 * cs
        return quadrature.assemble(samples, self.grid)


class _CorrectionFamily:
    """Correction integrals along the imaginary direction.

    The integrand is Im{ A(y) * B(iy) } / (e^{2 pi y} - 1) with
    A = |a|^{2iy}/Gamma(1+iy).  The Bose factor is folded into the complex
    cosine's exponentials, keeping every intermediate below
    ~exp(T^2/(3 pi)) instead of cosh's exp(T sqrt(2 y)); that is what makes
    the revival window reachable at all.  j_form selects B = cos(2 sqrt(iy) T),
    otherwise B = cos^2(sqrt(c+l+iy) T) + c/(c+l+iy) sin^2(...).
    """

    def __init__(self, cfg: JcmConfig, l: int, spec: QuadratureSpec,
                 j_form: bool = False):
        _require_positive_alpha(cfg)
        self.kind = spec.precision_kind
        self.cfg = cfg
        self.l = int(l)
        self.j_form = j_form
        self.grid = quadrature.build_grid(0.0, spec.upper_limit, spec)
        ext = self.kind == "extended"
        y = self.grid.x
        with np.errstate(all="ignore"):
            if ext:
                ones = DD(np.ones_like(y.hi))
                ln_alpha = ddmath.log(DD(abs(cfg.alpha)))
                arg = CDD(DD(np.zeros_like(y.hi)), y * ln_alpha.scale_pow2(1))
                a_fac = ddmath.cexp(arg - special.log_gamma(CDD(ones, y)))
                self.a_re, self.a_im = a_fac.re, a_fac.im
                two_pi_y = y * DD.from_pair(ddmath.TWO_PI)
                self.em2piy = ddmath.exp(-two_pi_y)
                self.inv1m = ones / (ones - self.em2piy)
                self.two_pi_y = two_pi_y
                s0 = CDD(DD(np.full_like(y.hi, cfg.c + float(l))), y)
                root = ddmath.csqrt(s0)
                self.p, self.q = root.re, root.im
                if j_form:
                    self.b0 = CDD(DD(np.zeros_like(y.hi)))
                    self.b1 = CDD(ones)
                else:
                    ratio = CDD(DD(np.full_like(y.hi, cfg.c))) / s0 if cfg.c > 0.0 \
                        else CDD(DD(np.zeros_like(y.hi)))
                    self.b0 = (ratio + 1.0) * 0.5
                    self.b1 = (1.0 - ratio) * 0.5
            else:
                a_fac = np.exp(2j * y * math.log(abs(cfg.alpha))
                               - special.log_gamma(1.0 + 1j * y))
                self.a_re, self.a_im = a_fac.real, a_fac.imag
                self.two_pi_y = 2.0 * np.pi * y
                self.em2piy = np.exp(-self.two_pi_y)
                self.inv1m = 1.0 / (1.0 - self.em2piy)
                root = np.sqrt(cfg.c + float(l) + 1j * y)
                self.p, self.q = root.real, root.imag
                if j_form:
                    self.b0 = np.zeros_like(a_fac)
                    self.b1 = np.ones_like(a_fac)
                else:
                    ratio = (cfg.c / (cfg.c + float(l) + 1j * y)) if cfg.c > 0.0 \
                        else np.zeros_like(a_fac)
                    self.b0 = (1.0 + ratio) * 0.5
                    self.b1 = (1.0 - ratio) * 0.5

    def origin_value(self, big_t: float) -> float:
        return correction_origin(self.cfg, self.l, big_t, j_form=self.j_form)

    def integral(self, big_t: float) -> IntegralResult:
        ext = self.kind == "extended"
        with np.errstate(all="ignore"):
            if big_t == 0.0:
                # B(iy) = b0 + b1 exactly; no oscillatory factor
                bt = (self.b0 + self.b1) if not self.j_form else (
                    CDD(DD(np.ones_like(self.grid.x.hi))) if ext else self.b1)
                b_re, b_im = (bt.re, bt.im) if ext else (bt.real, bt.imag)
                samples = (self.a_re * b_im + self.a_im * b_re) * \
                    (self.em2piy * self.inv1m)
                return quadrature.assemble(samples, self.grid,
                                           origin_value=self.origin_value(0.0))
            two_t = 2.0 * big_t
            if ext:
                su, cu = ddmath.sincos(self.p * DD(two_t))
                ep = ddmath.exp(self.q * DD(two_t) - self.two_pi_y)
                em = ddmath.exp(-(self.q * DD(two_t)) - self.two_pi_y)
            else:
                su, cu = np.sin(two_t * self.p), np.cos(two_t * self.p)
                ep = np.exp(two_t * self.q - self.two_pi_y)
                em = np.exp(-two_t * self.q - self.two_pi_y)
            ch = (ep + em) * 0.5
            sh = (ep - em) * 0.5
            # cos(2 T z) e^{-2 pi y} for z = p + iq, in parts
            ct_re = cu * ch
            ct_im = -(su * sh)
            if ext:
                b_re = self.b0.re * self.em2piy + self.b1.re * ct_re - self.b1.im * ct_im
                b_im = self.b0.im * self.em2piy + self.b1.re * ct_im + self.b1.im * ct_re
            else:
                b_re = self.b0.real * self.em2piy + self.b1.real * ct_re - self.b1.imag * ct_im
                b_im = self.b0.imag * self.em2piy + self.b1.real * ct_im + self.b1.imag * ct_re
            samples = (self.a_re * b_im + self.a_im * b_re) * self.inv1m
        return quadrature.assemble(samples, self.grid,
                                   origin_value=self.origin_value(big_t))


def correction_integrand_probe(cfg: JcmConfig, l: int, t: float, y: float,
                               j_form: bool = False) -> float:
    """Direct, unfolded evaluation of the correction integrand at one y > 0.

    Deliberately independent of the folded assembly used by the integral
    families: the tests Richardson-extrapolate these samples toward y = 0
    and compare against :func:`correction_origin`.
    """
    if y <= 0.0:
        raise ValueError("the probe needs y > 0; use correction_origin at 0")
    big_t = abs(cfg.kappa) * float(t)
    a = np.exp(2j * y * math.log(abs(cfg.alpha))
               - special.log_gamma(1.0 + 1j * y))
    s0 = cfg.c + float(l)
    root = np.sqrt(s0 + 1j * y)
    if j_form:
        bracket = np.cos(2.0 * big_t * root)
    else:
        ratio = cfg.c / (s0 + 1j * y) if cfg.c > 0.0 else 0.0
        bracket = np.cos(big_t * root) ** 2 + ratio * np.sin(big_t * root) ** 2
    return float((a * bracket).imag / math.expm1(2.0 * math.pi * y))


def correction_origin(cfg: JcmConfig, l: int, big_t: float,
                      j_form: bool = False) -> float:
    """y -> 0 limit of the correction integrand.

    The 0/0 at the origin resolves to (B(0) (2 ln|a| + gamma) + B'(0))/(2 pi)
    where B is the trigonometric bracket continued in iy; the three shapes
    below cover the resonant cos form, the degenerate c = l = 0 bracket and
    the general shifted bracket.  Cross-validated against Richardson
    extrapolation of the sampled integrand in the tests.
    """
    base = 2.0 * math.log(abs(cfg.alpha)) + EULER_GAMMA
    if j_form:
        return (base - 2.0 * big_t * big_t) / (2.0 * math.pi)
    s0 = cfg.c + float(l)
    if s0 == 0.0:
        return (base - big_t * big_t) / (2.0 * math.pi)
    rt = math.sqrt(s0)
    sin_sq = math.sin(rt * big_t) ** 2
    sin_two = math.sin(2.0 * rt * big_t)
    b_zero = math.cos(rt * big_t) ** 2 + (cfg.c / s0) * sin_sq
    b_prime = ((cfg.c / s0 - 1.0) * (big_t / (2.0 * rt)) * sin_two
               - (cfg.c / (s0 * s0)) * sin_sq)
    return (b_zero * base + b_prime) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# escalation policy
# ---------------------------------------------------------------------------

def _budget_check(result: IntegralResult, kind: str, escalation: Escalation,
                  rebuild_extended):
    """Apply the cancellation budget; optionally retry in the extended kind."""
    if result.cancellation_magnitude <= CANCELLATION_BUDGET[kind]:
        return result
    if escalation == "ignore":
        return result
    if escalation == "escalate" and kind == "standard":
        result = rebuild_extended()
        if result.cancellation_magnitude <= CANCELLATION_BUDGET["extended"]:
            return result
        kind = "extended"
    raise PrecisionLossError(
        f"cancellation magnitude {result.cancellation_magnitude:.3g} exceeds "
        f"the {kind} precision budget {CANCELLATION_BUDGET[kind]:.1g}; the "
        "correction integral would be noise at this time",
        cancellation_magnitude=result.cancellation_magnitude)


def _peak_aware(spec: QuadratureSpec, big_t: float) -> QuadratureSpec:
    """Widen the y-truncation to cover the integrand's exponential peak.

    The folded envelope exp(2 T q - (3/2) pi y) peaks near y* = 2 T^2/(9 pi^2);
    four times that keeps the truncated tail negligible.
    """
    need = 4.0 * 2.0 * big_t * big_t / (9.0 * math.pi ** 2)
    if need <= spec.upper_limit:
        return spec
    n_steps = math.ceil(need / spec.step)
    return dataclasses.replace(spec, upper_limit=n_steps * spec.step)


# ---------------------------------------------------------------------------
# integral representations (scalar operations)
# ---------------------------------------------------------------------------

def i1_integral(l: int, t: float, cfg: JcmConfig,
                spec: QuadratureSpec = DEFAULT_X_SPEC) -> float:
    """Line integral I1^(l)(t) of the shifted-bracket family."""
    _require_nonnegative_time(t)
    fam = _LineFamily(cfg, l, spec)
    return fam.integral(abs(cfg.kappa) * float(t)).value


def i2_integral(l: int, t: float, cfg: JcmConfig,
                spec: QuadratureSpec = DEFAULT_Y_SPEC,
                escalation: Escalation = "raise") -> float:
    """Correction integral I2^(l)(t); may escalate per the policy."""
    _require_nonnegative_time(t)
    big_t = abs(cfg.kappa) * float(t)
    eff = _peak_aware(spec, big_t)
    fam = _CorrectionFamily(cfg, l, eff)

    def rebuild():
        xfam = _CorrectionFamily(
            cfg, l, dataclasses.replace(eff, precision_kind="extended"))
        return xfam.integral(big_t)

    return _budget_check(fam.integral(big_t), eff.precision_kind,
                         escalation, rebuild).value


def j1_integral(t: float, cfg: JcmConfig,
                spec: QuadratureSpec = DEFAULT_X_SPEC) -> float:
    """Collapse integral J1(t) = -e^{-a^2} integral of w(x) cos(2 sqrt(x) T).

    Resonant only; tracks the initial collapse and stays near zero through
    the revival window.
    """
    _require_resonant(cfg)
    _require_nonnegative_time(t)
    fam = _LineFamily(cfg, 0, spec, j_form=True)
    return -math.exp(-cfg.alpha ** 2) * fam.integral(abs(cfg.kappa) * float(t)).value


def j2_integral(t: float, cfg: JcmConfig,
                spec: QuadratureSpec = DEFAULT_Y_SPEC,
                escalation: Escalation = "raise") -> float:
    """Revival integral J2(t) = 2 e^{-a^2} x (correction integral).

    Resonant only; negligible during the collapse and carries the revival.
    The required cancellation grows like exp(t^2/(3 pi)): standard precision
    is exhausted near t ~ 6 pi, the extended kind near t ~ 8 pi.
    """
    _require_resonant(cfg)
    _require_nonnegative_time(t)
    big_t = abs(cfg.kappa) * float(t)
    eff = _peak_aware(spec, big_t)
    fam = _CorrectionFamily(cfg, 0, eff, j_form=True)

    def rebuild():
        xfam = _CorrectionFamily(
            cfg, 0, dataclasses.replace(eff, precision_kind="extended"),
            j_form=True)
        return xfam.integral(big_t)

    res = _budget_check(fam.integral(big_t), eff.precision_kind, escalation, rebuild)
    return 2.0 * math.exp(-cfg.alpha ** 2) * res.value


def _require_resonant(cfg: JcmConfig):
    if cfg.delta_omega != 0.0:
        raise ValueError("the J decomposition is defined on resonance "
                         "(delta_omega = 0) only")


def sigma_z_integral(t: float, cfg: JcmConfig,
                     x_spec: QuadratureSpec = DEFAULT_X_SPEC,
                     y_spec: QuadratureSpec = DEFAULT_Y_SPEC,
                     escalation: Escalation = "raise") -> float:
    """Inversion from the general integral representation
    1 - e^{-a^2} [1 + 2 I1^(0) - 4 I2^(0)]."""
    i1 = i1_integral(0, t, cfg, x_spec)
    i2 = i2_integral(0, t, cfg, y_spec, escalation)
    return 1.0 - math.exp(-cfg.alpha ** 2) * (1.0 + 2.0 * i1 - 4.0 * i2)


def sigma_z_resonant_integral(t: float, cfg: JcmConfig,
                              x_spec: QuadratureSpec = DEFAULT_X_SPEC,
                              y_spec: QuadratureSpec = DEFAULT_Y_SPEC,
                              escalation: Escalation = "raise") -> float:
    """Resonant assembly -e^{-a^2}/2 + J1(t) + J2(t)."""
    return (-0.5 * math.exp(-cfg.alpha ** 2)
            + j1_integral(t, cfg, x_spec)
            + j2_integral(t, cfg, y_spec, escalation))


def const_plateau(cfg: JcmConfig,
                  spec: QuadratureSpec = DEFAULT_X_SPEC) -> float:
    """Long-time plateau of the detuned collapse.

    Replaces the squared trigonometric functions in I1^(0) by their time
    average 1/2: Const = 1 - e^{-a^2} integral of w(x) (1 + c/(c+x)) dx.
    """
    fam = _LineFamily(cfg, 0, spec, time_average=True)
    return 1.0 - 2.0 * math.exp(-cfg.alpha ** 2) * fam.integral(0.0).value


def abel_plana_identity(alpha: float,
                        x_spec: QuadratureSpec = DEFAULT_X_SPEC,
                        y_spec: QuadratureSpec = DEFAULT_Y_SPEC) -> tuple[float, float]:
    """The closed-form check behind the resonant decomposition.

    Computes lhs = (1/2) integral of |a|^{2x}/Gamma(x+1)
                 - integral of Im{|a|^{2iy}/Gamma(1+iy)}/(e^{2 pi y} - 1)
    and returns (lhs, rhs) with rhs = -1/4 + e^{a^2}/2 exact.
    """
    cfg = JcmConfig(alpha=alpha)
    line = _LineFamily(cfg, 0, x_spec, j_form=True).integral(0.0)
    corr = _CorrectionFamily(cfg, 0, y_spec, j_form=True).integral(0.0)
    lhs = 0.5 * line.value - corr.value
    rhs = -0.25 + 0.5 * math.exp(alpha * alpha)
    return lhs, rhs


# ---------------------------------------------------------------------------
# profiles over a time grid (amortized families)
# ---------------------------------------------------------------------------

def resonant_profile(ts, cfg: JcmConfig,
                     x_spec: QuadratureSpec = DEFAULT_X_SPEC,
                     y_spec: QuadratureSpec = DEFAULT_Y_SPEC,
                     escalation: Escalation = "raise") -> dict[str, np.ndarray]:
    """J1, J2 and the assembled inversion over a time grid.

    Returns arrays J1, J2, sigma_z, cancellation (of the J2 correction),
    escalated and over_budget row markers.  With escalation="ignore",
    over-budget rows hold whatever the requested kind produced; callers
    decide whether that is acceptable.
    """
    _require_resonant(cfg)
    _require_nonnegative_time(ts)
    ts = np.asarray(ts, dtype=float)
    pref = math.exp(-cfg.alpha ** 2)
    big_ts = abs(cfg.kappa) * ts
    eff = _peak_aware(y_spec, float(big_ts.max(initial=0.0)))
    line = _LineFamily(cfg, 0, x_spec, j_form=True)
    corr = _CorrectionFamily(cfg, 0, eff, j_form=True)
    corr_ext = None
    j1 = np.empty_like(ts)
    j2 = np.empty_like(ts)
    cancel = np.empty_like(ts)
    escalated = np.zeros(ts.shape, dtype=bool)
    over = np.zeros(ts.shape, dtype=bool)
    for i, big_t in enumerate(big_ts):
        j1[i] = -pref * line.integral(big_t).value
        res = corr.integral(big_t)
        if res.cancellation_magnitude > CANCELLATION_BUDGET[eff.precision_kind]:
            if escalation == "raise":
                _budget_check(res, eff.precision_kind, "raise", None)
            if escalation == "escalate" and eff.precision_kind == "standard":
                if corr_ext is None:
                    corr_ext = _CorrectionFamily(
                        cfg, 0, dataclasses.replace(eff, precision_kind="extended"),
                        j_form=True)
                res = corr_ext.integral(big_t)
                escalated[i] = True
                over[i] = res.cancellation_magnitude > CANCELLATION_BUDGET["extended"]
            else:
                over[i] = True
        j2[i] = 2.0 * pref * res.value
        cancel[i] = res.cancellation_magnitude
    sigma = -0.5 * pref + j1 + j2
    return {"J1": j1, "J2": j2, "sigma_z": sigma, "cancellation": cancel,
            "escalated": escalated, "over_budget": over}


def detuned_profile(ts, cfg: JcmConfig, l: int = 0,
                    x_spec: QuadratureSpec = DEFAULT_X_SPEC,
                    y_spec: QuadratureSpec = DEFAULT_Y_SPEC,
                    escalation: Escalation = "raise") -> dict[str, np.ndarray]:
    """I1^(l), I2^(l) and the (l = 0) assembled inversion over a time grid."""
    _require_nonnegative_time(ts)
    ts = np.asarray(ts, dtype=float)
    pref = math.exp(-cfg.alpha ** 2)
    big_ts = abs(cfg.kappa) * ts
    eff = _peak_aware(y_spec, float(big_ts.max(initial=0.0)))
    line = _LineFamily(cfg, l, x_spec)
    corr = _CorrectionFamily(cfg, l, eff)
    corr_ext = None
    i1 = np.empty_like(ts)
    i2 = np.empty_like(ts)
    cancel = np.empty_like(ts)
    escalated = np.zeros(ts.shape, dtype=bool)
    over = np.zeros(ts.shape, dtype=bool)
    for i, big_t in enumerate(big_ts):
        i1[i] = line.integral(big_t).value
        res = corr.integral(big_t)
        if res.cancellation_magnitude > CANCELLATION_BUDGET[eff.precision_kind]:
            if escalation == "raise":
                _budget_check(res, eff.precision_kind, "raise", None)
            if escalation == "escalate" and eff.precision_kind == "standard":
                if corr_ext is None:
                    corr_ext = _CorrectionFamily(
                        cfg, l, dataclasses.replace(eff, precision_kind="extended"))
                res = corr_ext.integral(big_t)
                escalated[i] = True
                over[i] = res.cancellation_magnitude > CANCELLATION_BUDGET["extended"]
            else:
                over[i] = True
        i2[i] = res.value
        cancel[i] = res.cancellation_magnitude
    sigma = 1.0 - pref * (1.0 + 2.0 * i1 - 4.0 * i2)
    return {"I1": i1, "I2": i2, "sigma_z": sigma, "cancellation": cancel,
            "escalated": escalated, "over_budget": over}


# ---------------------------------------------------------------------------
# thermal coherent state, second-order low-temperature corrections
# ---------------------------------------------------------------------------

def q_g(l: int, t, cfg: JcmConfig, mode: Mode = "series",
        series_spec: SeriesSpec = DEFAULT_SERIES_SPEC,
        x_spec: QuadratureSpec = DEFAULT_X_SPEC,
        y_spec: QuadratureSpec = DEFAULT_Y_SPEC,
        escalation: Escalation = "raise"):
    """Shifted-index ground-state weight Q_g^(l)(t); Q^(0) is P_g itself.

    series mode sums e^{-a^2} w_n [cos^2 + c/(c+n+l) sin^2] at index n+l;
    integral mode assembles e^{-a^2} [boundary/2 + I1^(l) - 2 I2^(l)].
    """
    _require_nonnegative_time(t)
    if mode == "series":
        t_arr, scalar = _time_grid(t)
        _check_series_spec(cfg, series_spec)
        w = _poisson_weights(cfg.alpha, series_spec.n_max)
        n = np.arange(series_spec.n_max + 1)
        s = cfg.c + n + float(l)
        ratio = np.divide(cfg.c, s, out=np.zeros_like(s), where=s > 0.0)
        phase = np.sqrt(s)[None, :] * (abs(cfg.kappa) * t_arr[:, None])
        s2 = np.sin(phase) ** 2
        vals = ((1.0 - s2) + ratio[None, :] * s2) @ w
        return float(vals[0]) if scalar else vals
    if mode != "integral":
        raise ValueError(f"unknown mode {mode!r}")
    t_arr, scalar = _time_grid(t)
    pref = math.exp(-cfg.alpha ** 2)
    s0 = cfg.c + float(l)
    out = np.empty_like(t_arr)
    line = _LineFamily(cfg, l, x_spec)
    big_max = abs(cfg.kappa) * float(t_arr.max(initial=0.0))
    eff = _peak_aware(y_spec, big_max)
    corr = _CorrectionFamily(cfg, l, eff)
    for i, t_i in enumerate(t_arr):
        big_t = abs(cfg.kappa) * float(t_i)
        if s0 > 0.0:
            boundary = (math.cos(big_t * math.sqrt(s0)) ** 2
                        + (cfg.c / s0) * math.sin(big_t * math.sqrt(s0)) ** 2)
        else:
            boundary = 1.0
        i1 = line.integral(big_t).value

        def rebuild(big_t=big_t):
            fam = _CorrectionFamily(
                cfg, l, dataclasses.replace(eff, precision_kind="extended"))
            return fam.integral(big_t)

        res = _budget_check(corr.integral(big_t), eff.precision_kind,
                            escalation, rebuild)
        out[i] = pref * (0.5 * boundary + i1 - 2.0 * res.value)
    return float(out[0]) if scalar else out


def p1_correction(t, cfg: JcmConfig, thermal: ThermalConfig,
                  mode: Mode = "series",
                  series_spec: SeriesSpec = DEFAULT_SERIES_SPEC,
                  x_spec: QuadratureSpec = DEFAULT_X_SPEC,
                  y_spec: QuadratureSpec = DEFAULT_Y_SPEC,
                  escalation: Escalation = "raise"):
    """First-order thermal correction 2 a g~ [P_g - Q^(1)].

    The expansion parameter theta is applied at assembly (pg_thermal), not
    here.
    """
    if thermal.gamma_tilde == 0.0:
        t_arr, scalar = _time_grid(t)
        return 0.0 if scalar else np.zeros_like(t_arr)
    pg = q_g(0, t, cfg, mode, series_spec, x_spec, y_spec, escalation)
    q1 = q_g(1, t, cfg, mode, series_spec, x_spec, y_spec, escalation)
    return 2.0 * cfg.alpha * thermal.gamma_tilde * (pg - q1)


def p2_correction(t, cfg: JcmConfig, thermal: ThermalConfig,
                  mode: Mode = "series",
                  series_spec: SeriesSpec = DEFAULT_SERIES_SPEC,
                  x_spec: QuadratureSpec = DEFAULT_X_SPEC,
                  y_spec: QuadratureSpec = DEFAULT_Y_SPEC,
                  escalation: Escalation = "raise",
                  keep_inner_theta_factor: bool = False):
    """Second-order thermal correction.

    2 (2 a^2 g~^2 - g~^2 - 1) P_g - 2 a^2 (4 g~^2 + 1) Q^(1) + 4 a^2 g~^2 Q^(2),
    defined so that P_g(beta;t) = P_g + theta P1 + (theta^2/2) P2 holds with
    the weights applied once, at assembly.  keep_inner_theta_factor=True
    additionally multiplies by theta^2/2 here, for comparison with the
    reading in which that factor is part of the correction itself (assembly
    would then effectively carry theta^4).
    """
    a2 = cfg.alpha ** 2
    g2 = thermal.gamma_tilde ** 2
    pg = q_g(0, t, cfg, mode, series_spec, x_spec, y_spec, escalation)
    q1 = q_g(1, t, cfg, mode, series_spec, x_spec, y_spec, escalation)
    if thermal.gamma_tilde == 0.0:
        val = -2.0 * pg - 2.0 * a2 * q1
    else:
        q2 = q_g(2, t, cfg, mode, series_spec, x_spec, y_spec, escalation)
        val = (2.0 * (2.0 * a2 * g2 - g2 - 1.0) * pg
               - 2.0 * a2 * (4.0 * g2 + 1.0) * q1
               + 4.0 * a2 * g2 * q2)
    if keep_inner_theta_factor:
        val = 0.5 * thermal.theta ** 2 * val
    return val


def pg_thermal(t, cfg: JcmConfig, thermal: ThermalConfig,
               mode: Mode = "series",
               series_spec: SeriesSpec = DEFAULT_SERIES_SPEC,
               x_spec: QuadratureSpec = DEFAULT_X_SPEC,
               y_spec: QuadratureSpec = DEFAULT_Y_SPEC,
               escalation: Escalation = "raise"):
    """Thermal ground-state probability to second order in theta.

    P_g + theta P1 + (theta^2/2) P2.  Warns (but still returns) when the
    result leaves [0, 1] or the parameters sit outside the perturbative
    regime: that signals expansion breakdown, not a numerical bug.
    """
    if perturbative_strength(cfg, thermal) > 0.5:
        warnings.warn(
            "theta^2 (4 gamma_tilde^2 + 1) alpha^2 > 0.5: outside the "
            "reliable second-order regime", PerturbativeRegimeWarning,
            stacklevel=2)
    pg = q_g(0, t, cfg, mode, series_spec, x_spec, y_spec, escalation)
    if thermal.theta == 0.0:
        return pg
    p1 = p1_correction(t, cfg, thermal, mode, series_spec, x_spec, y_spec,
                       escalation)
    p2 = p2_correction(t, cfg, thermal, mode, series_spec, x_spec, y_spec,
                       escalation)
    out = pg + thermal.theta * p1 + 0.5 * thermal.theta ** 2 * p2
    if np.any(np.asarray(out) < -1e-9) or np.any(np.asarray(out) > 1.0 + 1e-9):
        warnings.warn("thermal P_g left [0, 1]: perturbative breakdown",
                      PerturbativeRegimeWarning, stacklevel=2)
    return out
