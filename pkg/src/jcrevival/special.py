"""Complex special functions: the Lanczos gamma kit and branch-safe helpers.

Every integrand in this package is built from ``1/Gamma(z)``, principal
square roots and trigonometric functions of complex arguments.  Two scalar
kinds are supported throughout:

* standard - float64 / complex128 (plain numbers or numpy arrays),
* extended - double-double pairs (`ddmath.DD` real, `ddmath.CDD` complex),
  roughly 32 significant digits.

Mixing kinds promotes to extended: ``CDD`` and ``DD`` operands absorb floats
and complexes.  All functions accept either kind and return the same kind
they were given.
"""

from __future__ import annotations

import numpy as np

from . import ddmath
from .ddmath import CDD, DD

# Lanczos approximation of ln Gamma for Re(z) > 0, g = 5, seven coefficients.
# The series error bound is |eps| < 2e-10 relative; the extended kind removes
# arithmetic roundoff but not this inherent series error.
LANCZOS_G = 5.0
LANCZOS_COEFFS = (
    1.000000000190015,
    76.18009172947146,
    -86.50532032941677,
    24.01409824083091,
    -1.231739572450155,
    0.1208650973866179e-2,
    -0.5395239384953e-5,
)
# the same coefficients rounded to double-double pairs
_LANCZOS_DD = (
    (1.000000000190015, 1.0729079953307518e-16),
    (76.18009172947146, 3.4258257737383245e-15),
    (-86.50532032941678, 5.848585530184209e-15),
    (24.01409824083091, -1.3793620781507343e-15),
    (-1.231739572450155, -2.6362618227722122e-17),
    (0.001208650973866179, -2.0865807558493542e-20),
    (-5.395239384953e-06, 3.2754456442951606e-22),
)

EULER_GAMMA = 0.5772156649015329
PI = np.pi

# Im(z) ceiling for complex cos/sin in either kind: cosh(700) is still
# representable, anything larger is treated as overflow rather than inf.
COS_OVERFLOW_IM = 700.0


def is_extended(x) -> bool:
    """True if x carries the extended (double-double) kind."""
    return isinstance(x, (DD, CDD))


def to_extended(z) -> CDD:
    """Promote a standard complex value to the extended kind."""
    if isinstance(z, CDD):
        return z
    if isinstance(z, DD):
        return CDD(z)
    z = np.asarray(z, dtype=np.complex128)
    return CDD(DD(z.real.copy()), DD(z.imag.copy()))


def _real_part(z):
    if isinstance(z, CDD):
        return z.re.hi
    if isinstance(z, DD):
        return z.hi
    return np.asarray(z).real


def _imag_part(z):
    if isinstance(z, CDD):
        return z.im.hi
    if isinstance(z, DD):
        return np.zeros_like(z.hi)
    return np.asarray(z).imag


def _log(z):
    if isinstance(z, CDD):
        return ddmath.clog(z)
    if isinstance(z, DD):
        return ddmath.log(z)
    return np.log(z)


def _exp(z):
    if isinstance(z, CDD):
        return ddmath.cexp(z)
    if isinstance(z, DD):
        return ddmath.exp(z)
    return np.exp(z)


def log_gamma(z):
    """ln Gamma(z) for Re(z) > 0 by the 7-coefficient, g=5 Lanczos formula.

    Accepts standard (complex, float, ndarray) or extended (DD/CDD) input
    and returns the matching kind.  Raises ValueError off the right
    half-plane; use :func:`reciprocal_gamma` there instead.
    """
    re = _real_part(z)
    if not np.all(re > 0.0):
        raise ValueError("log_gamma requires Re(z) > 0; use reciprocal_gamma "
                         "for the rest of the plane")
    if isinstance(z, (DD, CDD)):
        coeffs = [DD.from_pair(c) for c in _LANCZOS_DD]
        ln_sqrt_2pi = DD.from_pair(ddmath.LN_SQRT_2PI)
    else:
        coeffs = LANCZOS_COEFFS
        ln_sqrt_2pi = ddmath.LN_SQRT_2PI[0]
    series = coeffs[0] + 0.0 * z
    den = z
    for c in coeffs[1:]:
        den = den + 1.0
        series = series + c / den
    y = z + (LANCZOS_G + 0.5)
    return (z + 0.5) * _log(y) - y + ln_sqrt_2pi + _log(series) - _log(z)


def _sinpi(z):
    """sin(pi z) reduced about the nearest integer; exact zeros at integers."""
    if isinstance(z, (DD, CDD)):
        zc = z if isinstance(z, CDD) else CDD(z)
        n = np.round(zc.re.hi)
        w = CDD(zc.re - DD(n), zc.im)
        pw = CDD(w.re * DD.from_pair(ddmath.PI), w.im * DD.from_pair(ddmath.PI))
        s = ddmath.csin(pw)
        sign = np.where(np.mod(n, 2.0) == 0, 1.0, -1.0)
        return CDD(s.re * DD(sign), s.im * DD(sign))
    z = np.asarray(z, dtype=np.complex128)
    n = np.round(z.real)
    w = z - n
    return np.where(np.mod(n, 2.0) == 0, 1.0, -1.0) * np.sin(np.pi * w)


def reciprocal_gamma(z):
    """1/Gamma(z), entire in z.

    Uses exp(-log_gamma) on the right half-plane and the reflection
    1/Gamma(z) = Gamma(1-z) sin(pi z)/pi elsewhere, which gives exact zeros
    at z = 0, -1, -2, ...
    """
    if isinstance(z, (DD, CDD)):
        zc = z if isinstance(z, CDD) else CDD(z)
        neg = zc.re.hi <= 0.0
        if not np.any(neg):
            out = _exp(-log_gamma(zc))
        else:
            safe_right = CDD(ddmath.where(neg, DD(1.0), zc.re), zc.im)
            direct = _exp(-log_gamma(safe_right))
            one_minus = CDD(ddmath.where(neg, DD(1.0) - zc.re, DD(1.0)), -zc.im)
            refl = _exp(log_gamma(one_minus)) * _sinpi(zc) * (1.0 / np.pi)
            out = CDD(ddmath.where(neg, refl.re, direct.re),
                      ddmath.where(neg, refl.im, direct.im))
        if not (np.all(np.isfinite(out.re.hi)) and np.all(np.isfinite(out.im.hi))):
            raise OverflowError("reciprocal_gamma overflowed; argument too large")
        return out
    scalar_in = np.isscalar(z) or (isinstance(z, np.ndarray) and z.ndim == 0)
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.empty_like(zz)
    neg = zz.real <= 0.0
    if (~neg).any():
        out[~neg] = np.exp(-log_gamma(zz[~neg]))
    if neg.any():
        zn = zz[neg]
        out[neg] = np.exp(log_gamma(1.0 - zn)) * _sinpi(zn) / np.pi
    if not np.all(np.isfinite(out)):
        raise OverflowError("reciprocal_gamma overflowed; argument too large")
    return out[0] if scalar_in else out.reshape(np.shape(z))


def principal_sqrt(z):
    """Principal square root: branch cut on the negative real axis, Re >= 0."""
    if isinstance(z, (DD, CDD)):
        return ddmath.csqrt(z if isinstance(z, CDD) else CDD(z))
    out = np.sqrt(np.asarray(z, dtype=np.complex128))
    return complex(out) if out.ndim == 0 else out


def _check_im_range(z):
    im = np.abs(_imag_part(z))
    if np.any(im > COS_OVERFLOW_IM):
        raise OverflowError(
            f"|Im z| = {float(np.max(im)):.3g} exceeds {COS_OVERFLOW_IM:g}; "
            "cosh would overflow the scalar range")


def complex_cos(z):
    """cos(z) by analytic continuation; signals instead of overflowing."""
    _check_im_range(z)
    if isinstance(z, (DD, CDD)):
        return ddmath.ccos(z if isinstance(z, CDD) else CDD(z))
    return np.cos(z)


def complex_sin(z):
    """sin(z) by analytic continuation; signals instead of overflowing."""
    _check_im_range(z)
    if isinstance(z, (DD, CDD)):
        return ddmath.csin(z if isinstance(z, CDD) else CDD(z))
    return np.sin(z)
