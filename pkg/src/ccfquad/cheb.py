"""Shifted Chebyshev machinery on [0, 1].

T*_n(x) = T_n(2x - 1).  The interpolant of f at the Clenshaw-Curtis points
x_j = (1 + cos(j pi / N)) / 2 is obtained with one DCT-I, then corrected by a
multiple of the node polynomial so that it also matches f^(l) at both
endpoints for l = 1..s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.fft

from .errors import DomainError, SingularSystem


def _frozen(a) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ChebSeries:
    """Coefficients a_0..a_M of sum_n a_n T*_n(x)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a nonempty 1-d array")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        return cheb_eval(self, x)


@dataclass(frozen=True)
class NodeSet:
    N: int
    nodes: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class Integrand:
    """A smooth function on [0, 1] plus access to its endpoint derivatives.

    ``value`` must accept numpy arrays.  ``derivative(ell, x)`` returns
    f^(ell)(x) at a scalar endpoint; when omitted, derivatives are estimated
    from a local Chebyshev interpolant (roughly 1e-11, 1e-9 and 1e-7
    relative for ell = 1, 2, 3 on analytic f; worse near complex
    singularities).
    """

    value: Callable
    derivative: Callable[[int, float], complex] | None = None

    def __call__(self, x):
        return self.value(x)

    def endpoint_derivatives(self, ell: int) -> tuple[complex, complex]:
        if ell == 0:
            v = np.asarray(self.value(np.array([0.0, 1.0])))
            return v[0], v[1]
        if self.derivative is not None:
            return self.derivative(ell, 0.0), self.derivative(ell, 1.0)
        return _fd_derivative(self.value, ell, 0.0), _fd_derivative(self.value, ell, 1.0)


_FD_WIDTH = 0.2
_FD_DEGREE = 14


def _fd_derivative(fn, ell, e):
    # one-sided: Chebyshev interpolant on [e, e +- h], differentiated ell times
    h = _FD_WIDTH if e == 0.0 else -_FD_WIDTH
    theta = np.pi * np.arange(_FD_DEGREE + 1) / _FD_DEGREE
    t = np.cos(theta)
    xs = e + h * (1 - t) / 2
    vals = np.asarray(fn(xs), dtype=complex)
    c = scipy.fft.dct(vals, type=1) / _FD_DEGREE
    c[0] /= 2
    c[-1] /= 2
    # local variable t = 1 - 2 (x - e) / h, so x = e  <->  t = 1
    d = _derivs_at_plus_one(c.size, ell) @ c
    d *= (-2.0 / h) ** ell
    return d.real if np.isrealobj(fn(np.array([e]))) else d


def _derivs_at_plus_one(size, ell):
    """T_n^(ell)(1) for n = 0..size-1 (unshifted)."""
    n2 = np.arange(size, dtype=float) ** 2
    out = np.ones(size)
    for m in range(ell):
        out *= (n2 - m * m) / (2 * m + 1)
    return out


def cc_nodes(N: int) -> NodeSet:
    """Clenshaw-Curtis points on [0, 1], descending, endpoints set exactly."""
    if int(N) != N or N < 2:
        raise DomainError("cc_nodes: N must be an integer >= 2", stage="cheb")
    N = int(N)
    x = (1.0 + np.cos(np.pi * np.arange(N + 1) / N)) / 2.0
    x[0], x[-1] = 1.0, 0.0
    if N % 2 == 0:
        x[N // 2] = 0.5
    return NodeSet(N, _frozen(x))


def interp_coeffs(f, N: int) -> ChebSeries:
    """Coefficients of the degree-N interpolant at ``cc_nodes(N)`` via DCT-I."""
    nodes = cc_nodes(N).nodes
    vals = np.asarray(f(nodes))
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape)
    if not np.all(np.isfinite(vals)):
        raise DomainError("interp_coeffs: non-finite sample of f", stage="cheb")
    b = scipy.fft.dct(vals, type=1) / N
    b[0] /= 2
    b[-1] /= 2
    return ChebSeries(b)


def interp_coeffs_direct(f, N: int) -> ChebSeries:
    """O(N^2) cosine sum; reference for :func:`interp_coeffs`."""
    nodes = cc_nodes(N).nodes
    vals = np.broadcast_to(np.asarray(f(nodes)), nodes.shape).astype(complex)
    w = np.ones(N + 1)
    w[0] = w[-1] = 0.5
    j = np.arange(N + 1)
    C = np.cos(np.pi * np.outer(j, j) / N)
    b = (2.0 / N) * (C @ (w * vals))
    b[0] /= 2
    b[-1] /= 2
    if np.isrealobj(f(nodes)):
        b = b.real
    return ChebSeries(b)


def _clenshaw(c, t):
    b1 = np.zeros_like(t, dtype=np.result_type(c, t))
    b2 = np.zeros_like(b1)
    for a in c[:0:-1]:
        b1, b2 = a + 2 * t * b1 - b2, b1
    return c[0] + t * b1 - b2


def cheb_eval(series: ChebSeries, x):
    """Evaluate a shifted Chebyshev series at x in [0, 1] (Clenshaw)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > 1) or np.any(np.isnan(x)):
        raise DomainError("cheb_eval: x outside [0, 1]", stage="cheb")
    out = _clenshaw(series.coeffs, 2 * x - 1)
    return out[()] if out.ndim == 0 else out


def cheb_eval_complex(coeffs, z):
    """Shifted series at complex z; used on the steepest-descent contours."""
    z = np.asarray(z, dtype=complex)
    return _clenshaw(np.asarray(coeffs), 2 * z - 1)


def _endpoint_factors(size, ell):
    """Rows (at x=0, at x=1) of d^ell/dx^ell T*_n for n < size."""
    at1 = _derivs_at_plus_one(size, ell) * 2.0 ** ell
    sign = np.where((np.arange(size) + ell) % 2 == 0, 1.0, -1.0)
    return sign * at1, at1


def cheb_derivative_at_endpoints(series: ChebSeries, ell: int):
    """(P^(ell)(0), P^(ell)(1)) from the closed form of T_n^(ell)(+-1)."""
    if ell < 0:
        raise DomainError("ell must be >= 0", stage="cheb")
    if ell > series.degree:
        return 0.0 * series.coeffs[0], 0.0 * series.coeffs[0]
    r0, r1 = _endpoint_factors(series.coeffs.size, ell)
    return r0 @ series.coeffs, r1 @ series.coeffs


def _times_node_poly(d, N):
    """Coefficients of (T*_{N+1} - T*_{N-1}) * sum_m d_m T*_m."""
    out = np.zeros(N + 1 + d.size, dtype=np.result_type(d, float))
    for m, dm in enumerate(d):
        # T_a T_b = (T_{a+b} + T_{|a-b|}) / 2
        out[N + 1 + m] += dm / 2
        out[abs(N + 1 - m)] += dm / 2
        out[N - 1 + m] -= dm / 2
        out[abs(N - 1 - m)] -= dm / 2
    return out


def hermite_correct(base: ChebSeries, f: Integrand, N: int, s: int) -> ChebSeries:
    """Raise the degree-N interpolant to degree N+2s, adding the endpoint
    derivative conditions P^(l)(e) = f^(l)(e), e in {0, 1}, l = 1..s.

    The correction is (T*_{N+1} - T*_{N-1}) q(x), which vanishes at every node;
    q has degree 2s-1 and solves a 2s x 2s system.
    """
    if s < 0:
        raise DomainError("s must be >= 0", stage="cheb")
    if base.degree != N:
        raise DomainError("base must have degree N", stage="cheb")
    if s == 0:
        return base
    if not isinstance(f, Integrand):
        f = Integrand(f)

    width = 2 * s
    # column m = endpoint derivatives of node_poly * T*_m
    cols = [_times_node_poly(np.eye(width)[m], N) for m in range(width)]
    size = N + 1 + width
    A = np.empty((width, width))
    rhs = np.empty(width, dtype=complex)
    padded = np.zeros(size, dtype=base.coeffs.dtype)
    padded[: N + 1] = base.coeffs
    for ell in range(1, s + 1):
        r0, r1 = _endpoint_factors(size, ell)
        f0, f1 = f.endpoint_derivatives(ell)
        i0, i1 = 2 * (ell - 1), 2 * (ell - 1) + 1
        A[i0] = [r0 @ c for c in cols]
        A[i1] = [r1 @ c for c in cols]
        rhs[i0] = f0 - r0 @ padded
        rhs[i1] = f1 - r1 @ padded
    scale = np.abs(A).max(axis=1)
    A = A / scale[:, None]
    rhs = rhs / scale
    if np.linalg.cond(A) > 1e14:
        raise SingularSystem("hermite_correct: singular correction system", stage="cheb")
    d = np.linalg.solve(A, rhs)
    if np.all(d.imag == 0) and np.isrealobj(base.coeffs):
        d = d.real
    out = padded + _times_node_poly(d, N)
    return ChebSeries(out[: N + 2 * s + 1])
