"""Slow reference integrator for I[g] = int_0^1 g(x) x^a (1-x)^b e^{2ikx} H1_nu(wx) dx.

Composite Gauss rules on a mesh that is geometrically graded towards x = 0
(where the Hankel kernel has its x^-|nu| / log singularity) and uniform
elsewhere with panels narrower than a fixed fraction of the local
wavelength.  The end panels carry Gauss-Jacobi weights for the algebraic
endpoint factors.  Every result is computed twice, with n and 2n points per
panel, and the two must agree.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .cheb import Integrand
from .errors import AccuracyError, DomainError, OracleCapExceeded
from .params import ProblemParams
from .quadrules import jacobi_left, jacobi_right, legendre_panels
from .specfun import hankel1

__all__ = ["OracleConfig", "reference_integral", "reference_moment", "reference_moments"]


@dataclass(frozen=True)
class OracleConfig:
    panels_per_wavelength: int = 6
    grading_ratio: float = 0.15
    points_per_panel: int = 20
    abs_floor: float = 1e-16
    rel_tol: float = 1e-11
    cap: float = 400.0
    strict_cap: bool = False

    def __post_init__(self):
        if self.panels_per_wavelength <= 0 or self.points_per_panel <= 0:
            raise DomainError("oracle panel counts must be positive", stage="oracle")
        if not 0 < self.grading_ratio < 1:
            raise DomainError("grading_ratio must lie in (0, 1)", stage="oracle")
        if self.abs_floor <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive", stage="oracle")


def _mesh(p: ProblemParams, cfg: OracleConfig, degree: int = 0):
    """Returns (t0, edges): [0, t0] is the singular end panel, edges cover [t0, 1].

    ``degree`` is the largest T*_n degree in the integrand; it tightens the
    panel width and grades the mesh towards x = 1 as well, where T*_n
    oscillates on a scale of 1/n^2.
    """
    c = 2 * p.k + p.omega + 2 * degree
    width = min(0.25, math.pi / (cfg.panels_per_wavelength * c))
    expo = p.alpha - abs(p.nu)
    r = cfg.grading_ratio
    # the innermost panel is treated with the weight x^(a-|nu|) only; the rest
    # of the integrand is not smooth there, so make it negligible
    t0 = max(10.0 ** (-22.0 / (1.0 + expo)), 1e-300)
    levels = max(1, int(math.ceil(math.log(t0 / width) / math.log(r))))
    left = width * r ** np.arange(levels, -1, -1, dtype=float)
    left[0] = t0
    right = np.array([1.0])
    if p.beta < 0 or degree > 0:
        t1 = min(width, 0.05 / max(degree, 1) ** 2)
        levels = max(1, int(math.ceil(math.log(t1 / width) / math.log(r)))) if t1 < width else 1
        right = 1.0 - width * r ** np.arange(0, levels + 1, dtype=float)
        right = np.append(right, 1.0)
    n_osc = max(1, int(math.ceil((right[0] - width) / width)))
    uniform = np.linspace(width, right[0], n_osc + 1)
    return t0, np.concatenate([left, uniform[1:-1], right])


def _rule(p: ProblemParams, cfg: OracleConfig, n: int, degree: int = 0):
    """Nodes and weights; weights include x^a (1-x)^b (and x^|nu| is divided
    out of the kernel on the first panel)."""
    t0, edges = _mesh(p, cfg, degree)
    expo = p.alpha - abs(p.nu)
    # left end: weight x^(a-|nu|), remaining factor x^|nu| (1-x)^b
    x0, w0 = jacobi_left(n, expo, 0.0, t0)
    w0 = w0 * x0 ** abs(p.nu) * (1 - x0) ** p.beta
    # right end: weight (1-x)^b
    x1, w1 = jacobi_right(n, p.beta, edges[-2], 1.0)
    w1 = w1 * x1 ** p.alpha
    xm, wm = legendre_panels(edges[:-1], n)
    wm = wm * xm ** p.alpha * (1 - xm) ** p.beta
    return np.concatenate([x0, xm, x1]), np.concatenate([w0, wm, w1])


def _kernel(p: ProblemParams, x):
    return np.exp(2j * p.k * x) * hankel1(p.nu, p.omega * x)


def _check_cap(p: ProblemParams, cfg: OracleConfig):
    if p.k + p.omega > cfg.cap:
        msg = f"oracle: k + omega = {p.k + p.omega:g} exceeds the tractability cap {cfg.cap:g}"
        if cfg.strict_cap:
            raise OracleCapExceeded(msg, stage="oracle")
        warnings.warn(msg, RuntimeWarning, stacklevel=3)


def _integrate_many(gs, p, cfg, use_kernel, degree=0):
    _check_cap(p, cfg)
    results = []
    for n in (cfg.points_per_panel, 2 * cfg.points_per_panel):
        x, w = _rule(p, cfg, n, degree)
        kw = w * _kernel(p, x) if use_kernel else w.astype(complex)
        results.append(np.array([np.sum(kw * np.asarray(g(x))) for g in gs]))
    coarse, fine = results
    scale = np.maximum(np.abs(fine), cfg.abs_floor)
    change = np.abs(fine - coarse) / scale
    worst = float(change.max())
    if worst > cfg.rel_tol:
        raise AccuracyError(
            f"oracle: point doubling changed the result by {worst:.1e}",
            stage="oracle",
            estimate=worst,
        )
    return fine


def reference_integral(g, p: ProblemParams, cfg: OracleConfig | None = None, *, kernel: bool = True) -> complex:
    """I[g] to roughly 1e-12 relative.

    ``kernel=False`` replaces e^{2ikx} H1_nu(wx) by 1, which leaves the plain
    Jacobi-weight integral (used to test the mesh against Beta functions).
    """
    cfg = cfg or OracleConfig()
    fn = g.value if isinstance(g, Integrand) else g
    return complex(_integrate_many([fn], p, cfg, kernel)[0])


def _tstar(n):
    return lambda x: np.cos(n * np.arccos(np.clip(2 * x - 1, -1.0, 1.0)))


def reference_moment(p: ProblemParams, n: int, cfg: OracleConfig | None = None) -> complex:
    """M(n) = int_0^1 x^a (1-x)^b T*_n(x) e^{2ikx} H1_nu(wx) dx."""
    return complex(reference_moments(p, [n], cfg)[0])


def reference_moments(p: ProblemParams, ns, cfg: OracleConfig | None = None) -> np.ndarray:
    """Several moments sharing one mesh; T*_|n| is used so M(-n) = M(n)."""
    cfg = cfg or OracleConfig()
    ns = [abs(int(n)) for n in ns]
    return _integrate_many([_tstar(n) for n in ns], p, cfg, True, max(ns))
