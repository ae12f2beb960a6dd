"""Composite Newton-Cotes quadrature on fixed grids.

Simpson and Bode (Boole) rules over finite intervals, a truncated
semi-infinite wrapper, and Romberg extrapolation.  Accumulation is
compensated and runs in a fixed order, so two runs with the same spec are
bit-identical.  Integrands are called once with the whole abscissa grid:
an ndarray for the standard kind, a ``ddmath.DD`` array for the extended
kind; they may return real, complex, DD or CDD samples of the same length.

Every result carries a cancellation diagnostic (largest intermediate
partial sum over the final value); callers that integrate violently
oscillatory integrands use it to decide when standard precision has run
out of digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from . import ddmath
from .ddmath import CDD, DD
from .errors import ConvergenceError, IntegrandError

PrecisionKind = Literal["standard", "extended"]

# composite Bode weights follow the classical pattern
#   (7, 32, 12, 32, 14, 32, 12, 32, 14, ..., 32, 7) * 2h/45
# with 14 at interior panel joints (7 + 7 from the two adjacent panels)
_RULE_DIVISOR = {"simpson": 2, "bode": 4}


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid and rule selection for one integral family."""

    rule: Literal["simpson", "bode"] = "simpson"
    upper_limit: float = 100.0
    step: float = 1e-3
    precision_kind: PrecisionKind = "standard"

    def __post_init__(self):
        if self.rule not in _RULE_DIVISOR:
            raise ValueError(f"unknown rule {self.rule!r}")
        if not (self.step > 0.0):
            raise ValueError("step must be positive")
        if not (self.upper_limit > 0.0):
            raise ValueError("upper_limit must be positive")
        if self.precision_kind not in ("standard", "extended"):
            raise ValueError(f"unknown precision kind {self.precision_kind!r}")


@dataclass
class IntegralResult:
    value: float | complex
    evaluations: int
    cancellation_magnitude: float
    step_used: float
    tail_estimate: float | None = None
    converged: bool = True


def _interval_count(a: float, b: float, step: float, divisor: int) -> int:
    n_exact = (b - a) / step
    n = int(round(n_exact))
    if abs(n - n_exact) > 0.25:
        # step does not tile [a, b]; shrink to the next compatible count
        n = int(math.ceil(n_exact))
    n = max(n, divisor)
    n += (-n) % divisor
    step_used = (b - a) / n
    if step_used < 0.45 * step:
        raise ValueError(
            f"step {step:g} is incompatible with [{a:g}, {b:g}] for this rule; "
            f"adjusting would shrink it to {step_used:g}")
    return n


def _weight_pattern(rule: str, n: int) -> np.ndarray:
    w = np.empty(n + 1)
    if rule == "simpson":
        w[:] = 2.0
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return w / 3.0
    w[0::4] = 14.0
    w[1::4] = 32.0
    w[2::4] = 12.0
    w[3::4] = 32.0
    w[0] = w[-1] = 7.0
    return w * (2.0 / 45.0)


def _fsum_ordered(terms: np.ndarray):
    if np.iscomplexobj(terms):
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    return math.fsum(terms)


def _cancellation(prefix_abs: np.ndarray, total_abs: float) -> float:
    peak = float(prefix_abs.max()) if prefix_abs.size else 0.0
    if total_abs == 0.0:
        return 1.0 if peak == 0.0 else math.inf
    return max(1.0, peak / total_abs)


@dataclass
class Grid:
    """A realized quadrature grid: abscissae plus composite weights."""

    x: object            # ndarray (standard) or DD array (extended)
    pattern: np.ndarray  # rule weights, step factor excluded
    h: object            # float or DD
    step_used: float
    n: int
    precision_kind: PrecisionKind

    @property
    def abscissae(self) -> np.ndarray:
        return self.x.hi if isinstance(self.x, DD) else self.x


def build_grid(a: float, b: float, spec: QuadratureSpec) -> Grid:
    """Lay out the composite grid for [a, b] under spec.

    The interval count is padded up to the rule's divisibility requirement
    by shrinking the step slightly; the step actually used is reported.
    """
    if not b > a:
        raise ValueError("integration requires a < b")
    n = _interval_count(a, b, spec.step, _RULE_DIVISOR[spec.rule])
    step_used = (b - a) / n
    pattern = _weight_pattern(spec.rule, n)
    if spec.precision_kind == "extended":
        h = (DD(b) - DD(a)) / DD(float(n))
        x = DD(np.arange(n + 1, dtype=np.float64)) * h + DD(a)
    else:
        h = step_used
        x = np.linspace(a, b, n + 1)
    return Grid(x=x, pattern=pattern, h=h, step_used=step_used, n=n,
                precision_kind=spec.precision_kind)


def assemble(samples, grid: Grid, origin_value=None) -> IntegralResult:
    """Turn integrand samples on a grid into a weighted, compensated sum.

    origin_value, when given, replaces the sample at the left endpoint
    (used where the integrand is a removable 0/0 whose limit is known
    analytically).  Raises IntegrandError if any retained sample is
    non-finite.
    """
    if grid.precision_kind == "extended":
        return _assemble_extended(samples, grid, origin_value)
    samples = np.asarray(samples)
    if origin_value is not None:
        wide = complex if (np.iscomplexobj(samples) or
                           isinstance(origin_value, complex)) else float
        samples = samples.astype(wide)
        samples[0] = origin_value
    finite = np.isfinite(samples) if not np.iscomplexobj(samples) else (
        np.isfinite(samples.real) & np.isfinite(samples.imag))
    if not finite.all():
        bad = int(np.argmin(finite))
        raise IntegrandError(
            f"integrand is not finite at x = {grid.x[bad]!r}",
            abscissa=float(grid.x[bad]))
    terms = grid.pattern * samples * grid.step_used
    total = _fsum_ordered(terms)
    cancel = _cancellation(np.abs(np.cumsum(terms)), abs(total))
    return IntegralResult(value=total, evaluations=grid.n + 1,
                          cancellation_magnitude=cancel, step_used=grid.step_used)


def _assemble_extended(samples, grid: Grid, origin_value=None) -> IntegralResult:
    if isinstance(samples, CDD):
        ov = None if origin_value is None else (
            origin_value if isinstance(origin_value, CDD) else CDD(DD(complex(origin_value).real),
                                                                   DD(complex(origin_value).imag)))
        re = _assemble_extended(samples.re, grid, None if ov is None else ov.re)
        im = _assemble_extended(samples.im, grid, None if ov is None else ov.im)
        return IntegralResult(
            value=complex(re.value, im.value), evaluations=grid.n + 1,
            cancellation_magnitude=max(re.cancellation_magnitude,
                                       im.cancellation_magnitude),
            step_used=grid.step_used)
    if not isinstance(samples, DD):
        samples = DD(np.asarray(samples, dtype=np.float64))
    if origin_value is not None:
        ov = origin_value if isinstance(origin_value, DD) else DD(float(origin_value))
        first = np.zeros(grid.n + 1, dtype=bool)
        first[0] = True
        samples = ddmath.where(first, ov, samples)
    if not np.all(np.isfinite(samples.hi)):
        bad = int(np.argmin(np.isfinite(samples.hi)))
        raise IntegrandError(
            f"integrand is not finite at x = {float(grid.x.hi[bad])!r}",
            abscissa=float(grid.x.hi[bad]))
    terms = samples * DD(grid.pattern) * grid.h
    total = ddmath.dd_sum(terms)
    cancel = _cancellation(np.abs(np.cumsum(terms.hi)), abs(float(total.to_float())))
    return IntegralResult(value=float(total.to_float()), evaluations=grid.n + 1,
                          cancellation_magnitude=cancel, step_used=grid.step_used)


def integrate(f: Callable, a: float, b: float, spec: QuadratureSpec,
              origin_value=None) -> IntegralResult:
    """Integrate f over [a, b] with the composite rule given by spec.

    Parameters
    ----------
    f : callable
        Receives the full abscissa grid (ndarray, or DD array for the
        extended kind) and returns samples of matching length.
    a, b : float
        Integration bounds, a < b.
    spec : QuadratureSpec
        Rule, step and scalar kind.
    origin_value : optional
        Analytic replacement for the sample at x = a.  Used where the
        integrand is a removable 0/0 at the origin and its limit is known.

    Raises
    ------
    IntegrandError
        If any sample (other than a replaced origin) is non-finite.
    """
    grid = build_grid(a, b, spec)
    return assemble(f(grid.x), grid, origin_value=origin_value)


def integrate_semi_infinite(f: Callable, spec: QuadratureSpec,
                            origin_value=None) -> IntegralResult:
    """Integrate f over [0, inf), truncated at spec.upper_limit.

    The caller asserts decay beyond the truncation point; |f(upper_limit)|
    is reported as the tail diagnostic.
    """
    result = integrate(f, 0.0, spec.upper_limit, spec, origin_value=origin_value)
    if spec.precision_kind == "extended":
        tail = f(DD(np.asarray([spec.upper_limit])))
        tail_mag = (abs(complex(tail.re.hi[0], tail.im.hi[0])) if isinstance(tail, CDD)
                    else abs(float(np.atleast_1d(tail.hi)[0])))
    else:
        tail_mag = float(np.max(np.abs(np.asarray(f(np.asarray([spec.upper_limit]))))))
    result.tail_estimate = tail_mag
    return result


def integrate_romberg(f: Callable, a: float, b: float, max_levels: int = 20,
                      tol: float = 1e-8, origin_value=None) -> IntegralResult:
    """Romberg integration: trapezoid refinement with Richardson extrapolation.

    Converges when successive diagonal entries agree within tol (absolute);
    otherwise raises ConvergenceError carrying the last two diagonal values.
    Standard precision only.
    """
    if not b > a:
        raise ValueError("integration requires a < b")
    diag_prev = None
    rows: list[list] = []
    evaluations = 0
    for level in range(max_levels):
        n = 2 ** level
        x = np.linspace(a, b, n + 1)
        samples = np.asarray(f(x))
        if origin_value is not None and a == 0.0:
            wide = complex if (np.iscomplexobj(samples) or
                               isinstance(origin_value, complex)) else float
            samples = samples.astype(wide)
            samples[0] = origin_value
        finite = np.isfinite(samples) if not np.iscomplexobj(samples) else (
            np.isfinite(samples.real) & np.isfinite(samples.imag))
        if not finite.all():
            bad = int(np.argmin(finite))
            raise IntegrandError(
                f"integrand is not finite at x = {x[bad]!r}", abscissa=float(x[bad]))
        evaluations += n + 1
        h = (b - a) / n
        weights = np.full(n + 1, h)
        weights[0] = weights[-1] = h / 2.0
        trap = _fsum_ordered(weights * samples)
        row = [trap]
        if rows:
            prev_row = rows[-1]
            for k in range(1, level + 1):
                factor = 4.0 ** k
                row.append((factor * row[k - 1] - prev_row[k - 1]) / (factor - 1.0))
        rows.append(row)
        diag = row[-1]
        if diag_prev is not None and abs(diag - diag_prev) < tol:
            terms = weights * samples
            cancel = _cancellation(np.abs(np.cumsum(terms)), abs(diag))
            return IntegralResult(value=diag, evaluations=evaluations,
                                  cancellation_magnitude=cancel,
                                  step_used=h, converged=True)
        diag_prev = diag
    raise ConvergenceError(
        f"Romberg did not converge within {max_levels} levels "
        f"(last diagonals {rows[-2][-1]!r}, {rows[-1][-1]!r})",
        last_estimates=(rows[-2][-1], rows[-1][-1]))
