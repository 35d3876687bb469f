"""Bessel-family special functions of real order.

Real-argument J, Y, K and Gamma are thin, domain-checked wrappers around
``scipy.special`` (Cephes/AMOS).  The complex-argument Hankel function used
on the steepest-descent contour is evaluated by its large-argument
asymptotic series, with an explicit truncation estimate.

All functions accept scalars or arrays and broadcast like numpy ufuncs.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sc

from .errors import AccuracyError, DomainError, PoleError, SpecialFunctionOverflow

Z_MIN = 20.0
HANKEL_TOL = 1e-12
MAX_TERMS = 30
_EPS = 2.0 ** -56


def _finite_or_raise(out, name):
    if not np.all(np.isfinite(out)):
        raise SpecialFunctionOverflow(f"{name}: result not finite", stage="specfun")
    return out[()] if isinstance(out, np.ndarray) and out.ndim == 0 else out


def _check_order(nu):
    nu = np.asarray(nu, dtype=float)
    if not np.all(np.isfinite(nu)):
        raise DomainError("order must be finite", stage="specfun")
    return nu


def bessel_j(nu, x):
    """J_nu(x) for x >= 0 (x = 0 only for nu >= 0)."""
    nu = _check_order(nu)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("bessel_j: x must be >= 0", stage="specfun")
    if np.any((x == 0) & (nu < 0)):
        raise DomainError("bessel_j: x = 0 requires nu >= 0", stage="specfun")
    return _finite_or_raise(sc.jv(nu, x), "bessel_j")


def bessel_y(nu, x):
    """Y_nu(x) for x > 0."""
    nu = _check_order(nu)
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("bessel_y: x must be > 0", stage="specfun")
    return _finite_or_raise(sc.yv(nu, x), "bessel_y")


def hankel1(nu, x):
    """H1_nu(x) = J_nu(x) + i Y_nu(x) for real x > 0.

    Built from the two real parts so that ``hankel1(nu, x).real`` is
    bit-identical to ``bessel_j(nu, x)``.
    """
    return bessel_j(nu, x) + 1j * bessel_y(nu, x)


def bessel_k(nu, x):
    """K_nu(x) for x > 0; accurate down to x ~ 1e-300."""
    nu = _check_order(nu)
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("bessel_k: x must be > 0", stage="specfun")
    return _finite_or_raise(sc.kv(nu, x), "bessel_k")


def gamma_fn(x):
    """Gamma(x) for real x > -170, not a nonpositive integer."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= -170) or np.any(np.isnan(x)):
        raise DomainError("gamma_fn: x must be > -170", stage="specfun")
    if np.any((x <= 0) & (x == np.round(x))):
        raise PoleError("gamma_fn: pole at nonpositive integer", stage="specfun")
    return _finite_or_raise(sc.gamma(x), "gamma_fn")


def hankel_asymptotic(nu, z, *, max_terms=MAX_TERMS):
    """Scaled Hankel series ``H1_nu(z) * exp(-i z)`` for large |z|.

    Returns ``(value, estimate)`` where ``estimate`` is the relative size of
    the first omitted term.  Summation runs to machine precision or until the
    terms start to grow.
    """
    nu = float(nu)
    z = np.asarray(z, dtype=complex)
    mu = 4.0 * nu * nu
    total = np.ones_like(z)
    term = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    estimate = np.zeros(z.shape)
    last = np.full(z.shape, np.inf)
    for m in range(1, max_terms + 1):
        term = term * (1j * (mu - (2 * m - 1) ** 2) / (8.0 * m)) / z
        size = np.abs(term)
        growing = active & (size > last)
        # divergent tail: stop before the terms grow
        estimate = np.where(growing, last / np.abs(total), estimate)
        active &= ~growing
        total = np.where(active, total + term, total)
        small = active & (size <= _EPS * np.abs(total))
        estimate = np.where(small, size / np.abs(total), estimate)
        active &= ~small
        last = np.where(active, size, last)
        if not active.any():
            break
    # still converging after max_terms
    estimate = np.where(active, last / np.abs(total), estimate)
    phase = np.exp(-1j * (0.5 * nu * math.pi + 0.25 * math.pi))
    value = np.sqrt(2.0 / (math.pi * z)) * phase * total
    if value.ndim == 0:
        return value[()], float(estimate)
    return value, estimate


def hankel1_complex(nu, z, *, z_min=Z_MIN, tol=HANKEL_TOL, scaled=False):
    """H1_nu(z) for complex z with Re z >= z_min, Im z >= 0.

    With ``scaled=True`` returns ``H1_nu(z) * exp(-i z)``, which stays O(|z|^-1/2)
    in the upper half plane where the unscaled value decays exponentially.

    Raises AccuracyError when the series cannot reach ``tol``; callers fall
    back to :func:`hankel1_scaled`.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.real < z_min) or np.any(z.imag < 0):
        raise AccuracyError(
            f"hankel1_complex: need Re z >= {z_min} and Im z >= 0", stage="specfun"
        )
    value, est = hankel_asymptotic(nu, z)
    worst = float(np.max(est))
    if worst > tol:
        raise AccuracyError(
            f"hankel1_complex: truncation estimate {worst:.2e} > {tol:.0e}",
            stage="specfun",
            estimate=worst,
        )
    if not scaled:
        value = value * np.exp(1j * z)
    return value[()] if isinstance(value, np.ndarray) and value.ndim == 0 else value


def hankel1_scaled(nu, z, *, z_min=Z_MIN):
    """``H1_nu(z) * exp(-i z)`` anywhere in the closed upper half plane, z != 0.

    Uses the asymptotic series where it is certified and AMOS
    (``scipy.special.hankel1e``) elsewhere.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    far = z.real >= z_min
    if far.any():
        val, est = hankel_asymptotic(nu, z[far])
        good = est <= 1e-16
        tmp = np.where(good, val, sc.hankel1e(nu, z[far]))
        out[far] = tmp
    if (~far).any():
        out[~far] = sc.hankel1e(nu, z[~far])
    return _finite_or_raise(out, "hankel1_scaled")
