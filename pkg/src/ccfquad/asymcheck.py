"""Scaled-magnitude and scaled-error sweeps for checking asymptotic orders.

For a sweep over omega (k fixed), over k (omega fixed) or along omega = 2k,
the integral behaves like x^-(1 + tau) and the CCF error like
x^-(s + 2 + tau), with

    tau1 = min(alpha, beta)              (omega and omega = 2k sweeps)
    tau2 = min(alpha - |nu|, beta)       (k sweep, nu != 0)

and for the k sweep with nu = 0 an extra factor 1 + ln k when alpha <= beta.
Multiplying by x^exponent (and dividing by the log factor) should give a
series that stays within a bounded band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ccf import MethodConfig, ccf_integrate
from .errors import DomainError
from .params import ProblemParams
from .startmom import starting_integral

SWEEPS = ("omega", "k", "omega_eq_2k")
QUANTITIES = ("integral_magnitude", "ccf_error")

REFERENCE_EXTRA_N = 12
REFERENCE_EXTRA_S = 2


def theorem_exponent(p: ProblemParams, sweep: str, s: int | None = None) -> tuple[float, bool]:
    """(exponent, log_factor) for the integral (s=None) or the CCF error with s."""
    if sweep not in SWEEPS:
        raise DomainError(f"unknown sweep {sweep!r}", stage="asymcheck")
    log_factor = False
    if sweep == "k":
        if p.nu == 0:
            tau = min(p.alpha, p.beta)
            log_factor = p.alpha <= p.beta
        else:
            tau = p.tau2
    else:
        tau = p.tau1
    base = 1.0 if s is None else s + 2.0
    return base + tau, log_factor


@dataclass(frozen=True)
class ScalingSpec:
    sweep_variable: str
    exponent: float
    range: tuple
    fixed_params: ProblemParams
    log_factor: bool = False

    def __post_init__(self):
        if self.sweep_variable not in SWEEPS:
            raise DomainError(f"unknown sweep {self.sweep_variable!r}", stage="asymcheck")
        lo, hi, step = self.range
        if not (lo >= 1 and hi >= lo and step > 0):
            raise DomainError("range must satisfy 1 <= lo <= hi, step > 0", stage="asymcheck")

    def points(self) -> np.ndarray:
        lo, hi, step = self.range
        return np.arange(lo, hi + 0.5 * step, step, dtype=float)

    def params_at(self, x: float) -> ProblemParams:
        if self.sweep_variable == "omega":
            return self.fixed_params.with_(omega=x)
        if self.sweep_variable == "k":
            return self.fixed_params.with_(k=x)
        return self.fixed_params.with_(omega=x, k=x / 2)


def scaled_series(spec: ScalingSpec, quantity: str, *, f=None, N: int = 4, s: int = 0, reference=None):
    """Rows (x, raw, scaled).

    integral_magnitude: raw = |I(0)| from the contour quadrature.
    ccf_error: raw = |I - Q_{N,s}[f]| with I from ``reference(p)`` when given,
    otherwise a CCF run at (N + 12, s + 2).
    """
    if quantity not in QUANTITIES:
        raise DomainError(f"unknown quantity {quantity!r}", stage="asymcheck")
    if quantity == "ccf_error" and f is None:
        raise DomainError("ccf_error needs an integrand", stage="asymcheck")
    rows = []
    for x in spec.points():
        p = spec.params_at(x)
        if quantity == "integral_magnitude":
            raw = abs(starting_integral(p, 0))
        else:
            q = ccf_integrate(f, p, MethodConfig(N, s)).value
            if reference is not None:
                ref = reference(p)
            else:
                ref = ccf_integrate(f, p, MethodConfig(N + REFERENCE_EXTRA_N, s + REFERENCE_EXTRA_S)).value
            raw = abs(ref - q)
        scaled = raw * x ** spec.exponent
        if spec.log_factor:
            scaled /= 1 + math.log(x)
        rows.append((float(x), float(raw), float(scaled)))
    return rows


def band_ratio(rows, upper_half: bool = False) -> float:
    """max/min of the scaled column, optionally over the upper half of the sweep."""
    v = np.array([r[2] for r in rows])
    if upper_half:
        v = v[v.size // 2:]
    return float(v.max() / v.min())


def decade_means(values) -> tuple[float, float]:
    """Means over the first and last tenth (at least one point) of a series."""
    v = np.asarray(values, dtype=float)
    m = max(1, int(math.ceil(v.size / 10)))
    return float(v[:m].mean()), float(v[-m:].mean())
