"""Clenshaw-Curtis-Filon rule Q = sum_{n=0}^{N+2s} a_n M(n).

a_n are the shifted-Chebyshev coefficients of the Hermite interpolant of f
at the Clenshaw-Curtis points (values at all nodes, derivatives up to order s
at both ends); M(n) are the modified moments of the weight
x^a (1-x)^b e^{2ikx} H1_nu(wx).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .cheb import ChebSeries, Integrand, hermite_correct, interp_coeffs
from .errors import ConvergenceError, DomainError
from .moments import BVP, FORWARD, ORACLE, MomentTable, forward_recursion, moment_table, stable_limit
from .oracle import OracleConfig, reference_moments
from .params import ProblemParams
from .startmom import starting_moments

log = logging.getLogger(__name__)

__all__ = ["MethodConfig", "QuadResult", "ccf_coefficients", "ccf_sum", "ccf_integrate",
           "moments_for", "convergence_table"]

FALLBACKS = ("oracle", "raise", "accept")


@dataclass(frozen=True)
class MethodConfig:
    N: int
    s: int = 0
    bvp_tol: float = 1e-12
    forward_safety: float = 0.9
    # what to do when the boundary-value solve does not settle:
    # "oracle" computes the remaining moments by direct quadrature,
    # "raise" propagates the error, "accept" keeps the unsettled BVP values
    moment_fallback: str = "oracle"

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError("N must be an integer >= 2", stage="ccf")
        if int(self.s) != self.s or self.s < 0:
            raise DomainError("s must be a nonnegative integer", stage="ccf")
        if not 0 < self.forward_safety <= 1:
            raise DomainError("forward_safety must lie in (0, 1]", stage="ccf")
        if not self.bvp_tol > 0:
            raise DomainError("bvp_tol must be positive", stage="ccf")
        if self.moment_fallback not in FALLBACKS:
            raise DomainError(f"moment_fallback must be one of {FALLBACKS}", stage="ccf")

    @property
    def degree(self) -> int:
        return self.N + 2 * self.s


@dataclass(frozen=True)
class QuadResult:
    value: complex
    n_moments_forward: int
    n_moments_bvp: int
    est_error: float
    timings: dict = field(default_factory=dict)
    n_moments_oracle: int = 0


def _as_integrand(f) -> Integrand:
    return f if isinstance(f, Integrand) else Integrand(f)


def ccf_coefficients(f, N: int, s: int) -> ChebSeries:
    """a_0..a_{N+2s} of the Hermite interpolant."""
    f = _as_integrand(f)
    return hermite_correct(interp_coeffs(f.value, N), f, N, s)


def ccf_sum(series: ChebSeries, table: MomentTable) -> complex:
    n = series.degree
    if table.offset != 0 or table.n_max < n:
        raise DomainError(f"moment table must cover 0..{n}", stage="ccf")
    return complex(np.dot(series.coeffs, table.values[: n + 1]))


def moments_for(p: ProblemParams, n_max: int, cfg: MethodConfig | None = None, *, start=None) -> MomentTable:
    """M(0..n_max) through the starting-moment, forward and BVP stages.

    When the boundary-value solve does not settle, ``cfg.moment_fallback``
    decides; the default computes the moments past the forward range by
    direct quadrature (tagged "oracle").
    """
    cfg = cfg or MethodConfig(2)
    if start is None:
        start = starting_moments(p)
    strict = cfg.moment_fallback != "accept"
    try:
        return moment_table(p, start, n_max, safety=cfg.forward_safety, tol=cfg.bvp_tol, strict=strict)
    except ConvergenceError as exc:
        if cfg.moment_fallback != "oracle":
            raise
        log.info("%s; computing the remaining moments by direct quadrature", exc)
    n_fwd = min(n_max, max(4, stable_limit(p, cfg.forward_safety)))
    fwd = forward_recursion(p, start, n_fwd)
    ocfg = OracleConfig()
    rest = reference_moments(p, range(n_fwd + 1, n_max + 1), ocfg)
    return MomentTable(
        p,
        np.concatenate([fwd.values, rest]),
        fwd.regime + (ORACLE,) * rest.size,
        max(fwd.est_accuracy, ocfg.rel_tol),
    )


def ccf_integrate(f, p: ProblemParams, cfg: MethodConfig, *, moments: MomentTable | None = None) -> QuadResult:
    """Q^CCF_{N,s}[f].

    ``moments`` may carry a precomputed table covering 0..N+2s.  est_error is
    |sum of the last three terms| plus the moment accuracy estimate carried
    through the sum; it is a diagnostic, not a bound.
    """
    timings = {}
    t = time.perf_counter()
    series = ccf_coefficients(f, cfg.N, cfg.s)
    timings["coefficients"] = time.perf_counter() - t

    if moments is None:
        t = time.perf_counter()
        start = starting_moments(p)
        timings["starting"] = time.perf_counter() - t
        t = time.perf_counter()
        moments = moments_for(p, cfg.degree, cfg, start=start)
        timings["moments"] = time.perf_counter() - t
    elif moments.params != p:
        raise DomainError("moment table was computed for other parameters", stage="ccf")

    t = time.perf_counter()
    value = ccf_sum(series, moments)
    timings["summation"] = time.perf_counter() - t

    n = cfg.degree
    terms = series.coeffs * moments.values[: n + 1]
    est = abs(terms[-3:].sum()) + moments.est_accuracy * float(np.abs(terms).sum())
    regime = moments.regime[: n + 1]
    log.debug("CCF N=%d s=%d value=%r est=%.1e", cfg.N, cfg.s, value, est)
    return QuadResult(value, regime.count(FORWARD), regime.count(BVP), float(est), timings,
                      regime.count(ORACLE))


def convergence_table(f, p: ProblemParams, Ns, ss, reference: complex, *, base: MethodConfig | None = None):
    """Relative errors |Q_{N,s} - ref| / |ref|; rows follow ``ss``, columns ``Ns``."""
    reference = complex(reference)
    if not np.isfinite(reference) or reference == 0:
        raise DomainError("reference must be finite and nonzero", stage="ccf")
    Ns, ss = list(Ns), list(ss)
    kw = {}
    if base is not None:
        kw = dict(bvp_tol=base.bvp_tol, forward_safety=base.forward_safety,
                  moment_fallback=base.moment_fallback)
    cfg_max = MethodConfig(max(Ns), max(ss), **kw)
    table = moments_for(p, cfg_max.degree, cfg_max)
    out = np.empty((len(ss), len(Ns)))
    for i, s in enumerate(ss):
        for j, N in enumerate(Ns):
            r = ccf_integrate(f, p, MethodConfig(N, s, **kw), moments=table)
            out[i, j] = abs(r.value - reference) / abs(reference)
    return out
