"""Gauss rules from the Golub-Welsch eigenvalue method.

Rules are cached per parameter set; cached arrays are read-only so the
cache can be shared between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class ContourRule:
    """Nodes/weights for int_0^inf x^gamma e^{-x} p(x) dx."""

    gamma: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.nodes.size


def _golub_welsch(diag, off, mu0):
    try:
        x, V = eigh_tridiagonal(diag, off)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue solver failed: {exc}", stage="quadrules") from exc
    w = mu0 * V[0, :] ** 2
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=256)
def gauss_laguerre_general(gamma: float, n: int = 10) -> ContourRule:
    """n-point rule for the weight x^gamma e^{-x} on (0, inf)."""
    if not gamma > -1:
        raise DomainError("gamma must be > -1", stage="quadrules")
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer", stage="quadrules")
    m = np.arange(n, dtype=float)
    diag = 2 * m + gamma + 1
    off = np.sqrt(m[1:] * (m[1:] + gamma))
    x, w = _golub_welsch(diag, off, math.exp(math.lgamma(gamma + 1)))
    return ContourRule(float(gamma), x, w)


@lru_cache(maxsize=256)
def gauss_jacobi(n: int, a: float, b: float):
    """Nodes/weights on [-1, 1] for the weight (1-t)^a (1+t)^b."""
    if not (a > -1 and b > -1):
        raise DomainError("Jacobi exponents must exceed -1", stage="quadrules")
    i = np.arange(n, dtype=float)
    s = 2 * i + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (s * (s + 2))
    diag[0] = (b - a) / (a + b + 2)
    j = np.arange(1, n, dtype=float)
    s = 2 * j + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4 * j * (j + a) * (j + b) * (j + a + b) / (s * s * (s + 1) * (s - 1))
    if n > 1:
        off2[0] = 4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
    mu0 = math.exp((a + b + 1) * math.log(2) + gammaln(a + 1) + gammaln(b + 1) - gammaln(a + b + 2))
    return _golub_welsch(diag, np.sqrt(off2), mu0)


@lru_cache(maxsize=64)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def jacobi_left(n: int, gamma: float, a: float, b: float):
    """Rule for int_a^b (x - a)^gamma g(x) dx; returns nodes and weights
    that already include the weight factor."""
    t, w = gauss_jacobi(n, 0.0, gamma)
    h = (b - a) / 2
    return a + h * (t + 1), w * h ** (gamma + 1)


def jacobi_right(n: int, gamma: float, a: float, b: float):
    """Rule for int_a^b (b - x)^gamma g(x) dx."""
    t, w = gauss_jacobi(n, gamma, 0.0)
    h = (b - a) / 2
    return a + h * (t + 1), w * h ** (gamma + 1)


def legendre_panels(edges, n: int):
    """Composite Gauss-Legendre nodes/weights over consecutive edges."""
    t, w = gauss_legendre(n)
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1, None], edges[1:, None]
    h = (hi - lo) / 2
    return (lo + h * (t + 1)).ravel(), (h * w).ravel()
