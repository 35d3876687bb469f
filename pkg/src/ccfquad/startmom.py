"""Starting integrals I(j) = int_0^1 x^(a+j) (1-x)^b e^{2ikx} H1_nu(wx) dx.

The path [0, 1] is replaced by the two steepest-descent rays x = iy and
x = 1 + iy, on which the phase e^{i(2k+w)x} turns into exponential decay:

    I = L0 - L1,

    L0 = 2 i^a / (pi i^nu) int_0^inf g(iy) y^a (1-iy)^b e^{-2ky} K_nu(wy) dy,
    L1 = i (-i)^b e^{i(2k+w)} c^{-1-b}
         int_0^inf x^b e^{-x} g(1 + ix/c) (1 + ix/c)^a Hs_nu(w + iwx/c) dx,

with c = 2k + w, Hs(z) = H1(z) e^{-iz} the exponentially scaled Hankel
function and g the polynomial factor (x^j for I(j), T*_n for M(n)).

L1 is smooth apart from x^b and goes to generalized Gauss-Laguerre.  The
L0 integrand carries the log / power singularity of K_nu at the origin, so
it gets a geometrically graded composite rule instead.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np

from .cheb import cheb_eval_complex
from .errors import AccuracyError, DomainError
from .params import ProblemParams
from .quadrules import ContourRule, gauss_laguerre_general, jacobi_left, legendre_panels
from .specfun import bessel_k, hankel1_scaled

log = logging.getLogger(__name__)

__all__ = [
    "ContourRule",
    "gauss_laguerre_general",
    "starting_integral",
    "starting_integrals",
    "starting_moments",
    "contour_integrals",
    "combine_starting",
]

# rows: T*_0..T*_4 in the monomial basis
TSTAR_MONOMIAL = np.array(
    [
        [1, 0, 0, 0, 0],
        [-1, 2, 0, 0, 0],
        [1, -8, 8, 0, 0],
        [-1, 18, -48, 32, 0],
        [1, -32, 160, -256, 128],
    ],
    dtype=float,
)

L1_POINTS = 10
L1_MAX_POINTS = 320
L1_TOL = 1e-13

_GRADING = 0.15
_PANEL_POINTS = 24
_TAIL_END = 60.0


@lru_cache(maxsize=64)
def _ray_rule(alpha: float, nu: float):
    """Composite rule on t in [0, _TAIL_END] for t^alpha * (smooth, K-type
    singular at 0) * e^{-t}.  Weights include t^alpha."""
    # innermost panel carries t^(alpha - |nu|) exactly; beyond it the
    # neglected piece is O(t0^(1 + alpha - |nu|))
    expo = alpha - abs(nu)
    t0 = max(10.0 ** (-20.0 / (1.0 + expo)), 1e-290)
    levels = int(math.ceil(math.log(t0) / math.log(_GRADING)))
    graded = _GRADING ** np.arange(levels, -1, -1)
    graded[0] = t0
    edges = np.concatenate([graded, np.arange(2.0, _TAIL_END + 1, 2.0)])
    x, w = legendre_panels(edges, _PANEL_POINTS)
    w = w * x ** alpha
    xi, wi = jacobi_left(_PANEL_POINTS, expo, 0.0, t0)
    wi = wi * xi ** abs(nu)
    x = np.concatenate([xi, x])
    w = np.concatenate([wi, w])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _l0_parts(p: ProblemParams):
    """Nodes z = i y on the ray from 0 and the weighted kernel values there,
    scaled so that L0 = sum(kernel * g(z))."""
    c = 2 * p.k + p.omega
    t, w = _ray_rule(p.alpha, p.nu)
    y = t / c
    kern = w * (1 - 1j * y) ** p.beta * np.exp(-2 * p.k * y) * bessel_k(p.nu, p.omega * y)
    pref = 2 * (1j) ** p.alpha / ((1j) ** p.nu * math.pi) * c ** (-1 - p.alpha)
    return 1j * y, pref * kern


def _l1_parts(p: ProblemParams, n_points: int):
    c = 2 * p.k + p.omega
    rule = gauss_laguerre_general(p.beta, n_points)
    x = rule.nodes
    z = 1 + 1j * x / c
    hs = hankel1_scaled(p.nu, p.omega + 1j * p.omega * x / c)
    pref = 1j * (-1j) ** p.beta * np.exp(1j * (2 * p.k + p.omega)) * c ** (-1 - p.beta)
    return z, pref * rule.weights * z ** p.alpha * hs


def contour_integrals(p: ProblemParams, factors, *, n_points: int | None = None, tol: float = L1_TOL):
    """L0 - L1 for each polynomial factor g in ``factors`` (callables of complex z).

    The Laguerre rule for L1 starts at 10 points and doubles until two
    consecutive sizes agree to ``tol`` relative to the result.  With
    ``n_points`` given, that single size is used.

    Returns (values, info) where info records the L1 rule size and the last
    observed change.
    """
    z0, k0 = _l0_parts(p)
    l0 = np.array([np.sum(k0 * g(z0)) for g in factors])

    def l1(n):
        z1, k1 = _l1_parts(p, n)
        return np.array([np.sum(k1 * g(z1)) for g in factors])

    if n_points is not None:
        return l0 - l1(n_points), {"l1_points": n_points, "change": math.nan}
    n = L1_POINTS
    prev = l1(n)
    change = math.inf
    while True:
        if 2 * n > L1_MAX_POINTS:
            raise AccuracyError(
                f"contour rule did not settle (last change {change:.1e})",
                stage="startmom",
                estimate=change,
            )
        cur = l1(2 * n)
        scale = np.abs(l0 - cur).max()
        change = float(np.abs(cur - prev).max() / scale)
        n *= 2
        prev = cur
        if change < tol:
            break
    log.debug("L1 rule settled at %d points (change %.1e)", n, change)
    return l0 - prev, {"l1_points": n, "change": change}


def _power(j):
    return lambda z: z ** j


def starting_integrals(p: ProblemParams, **kw) -> np.ndarray:
    """I(0), ..., I(4)."""
    vals, _ = contour_integrals(p, [_power(j) for j in range(5)], **kw)
    return vals


def starting_integral(p: ProblemParams, j: int, **kw) -> complex:
    """I(j) = int_0^1 x^(alpha+j) (1-x)^beta e^{2ikx} H1_nu(omega x) dx."""
    if int(j) != j or j < 0:
        raise DomainError("j must be a nonnegative integer", stage="startmom")
    vals, _ = contour_integrals(p, [_power(int(j))], **kw)
    return complex(vals[0])


def combine_starting(I) -> np.ndarray:
    """M(0..4) from I(0..4) through the monomial expansions of T*_0..T*_4."""
    I = np.asarray(I, dtype=complex)
    if I.shape != (5,):
        raise DomainError("need I(0..4)", stage="startmom")
    return TSTAR_MONOMIAL @ I


def _tstar(n):
    e = np.zeros(n + 1)
    e[n] = 1.0
    return lambda z: cheb_eval_complex(e, z)


def starting_moments(p: ProblemParams, *, direct: bool = True, **kw) -> np.ndarray:
    """M(0), ..., M(4).

    With ``direct=False`` this is the monomial combination of I(0..4).
    The default evaluates T*_n on the contour by Clenshaw instead, which
    computes the same quantities but avoids the cancellation in the
    combination (coefficients up to 256 summing to 1 near x = 1).
    """
    if not direct:
        return combine_starting(starting_integrals(p, **kw))
    vals, _ = contour_integrals(p, [_tstar(n) for n in range(5)], **kw)
    return vals
