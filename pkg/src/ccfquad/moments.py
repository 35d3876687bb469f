"""Modified moments M(n) = int_0^1 x^a (1-x)^b T*_n(x) e^{2ikx} H1_nu(wx) dx.

The moments obey a nine-term linear recurrence

    sum_{j=-4}^{4} c_j(n) M(n+j) = 0,      M(-n) = M(n),

valid for every integer n.  Below n ~ k + w/2 it is run forwards; above, it
is solved as a banded boundary-value problem with five known values at the
low end and zero tail values at a trial endpoint that is pushed out until
the requested entries settle (Lozier's variant of Olver's algorithm).

The log-weighted moments int ln(x) ... , int ln(1-x) ... and their product
are the alpha-, beta- and mixed derivatives of M(n); they satisfy the same
recurrence with an inhomogeneous right-hand side built from the derivatives
of the coefficients.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import solve_banded

from .errors import (
    ConvergenceError,
    DegeneratePivot,
    DomainError,
    MissingDependency,
    SingularSystem,
    ThresholdExceeded,
)
from .params import ProblemParams

log = logging.getLogger(__name__)

STARTING, FORWARD, BVP, ORACLE = "starting", "forward", "bvp", "oracle"
OFFSETS = np.arange(-4, 5)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Coefficients of M(n-4), ..., M(n+4) in the recurrence at index n."""

    n: int
    values: tuple

    def __getitem__(self, j: int) -> complex:
        if not -4 <= j <= 4:
            raise IndexError(j)
        return self.values[j + 4]

    @property
    def as_array(self) -> np.ndarray:
        return np.array(self.values)


def _f1(p, n):
    return 1j * p.k * (p.alpha + p.beta + n + 4) - 0.5j * p.k


def _f2(p, n):
    a, b, k = p.alpha, p.beta, p.k
    return (
        9 + 6 * (a + b + n) + k * k + n * n + a * a + b * b
        - p.omega ** 2 / 4 - p.nu ** 2
        + 2 * (a * b + a * n + b * n) + 1j * k * (1 - 2 * a + 2 * b)
    )


def _f3(p, n):
    a, b, k = p.alpha, p.beta, p.k
    return (
        2 * n - 8 * a + 12 * b
        + 4 * (1 - 1j * a * k - 1j * b * k + p.nu ** 2 + b * n - a * n)
        - 15.5j * k + 3j * k * (a + b - n + 4) + 4 * (b * b - a * a)
    )


def _f4(p, n):
    a, b, k = p.alpha, p.beta, p.k
    return (
        6 + 4 * a + 12 * b - 4 * a * b - 2j * k + 4j * k * (a - b)
        + 0.375 * p.omega ** 2 - 1.5 * k * k + 6 * (a * a + b * b - p.nu ** 2)
        - 2 * n * n
    )


def _outer(p):
    return p.omega ** 2 / 16 - p.k ** 2 / 4 + 0j


def coeff_rows(p: ProblemParams, n) -> np.ndarray:
    """Array of shape (len(n), 9); column j+4 multiplies M(n+j)."""
    n = np.atleast_1d(np.asarray(n, dtype=float))
    c4 = np.full(n.shape, 0j if p.degenerate else _outer(p))
    return np.stack(
        [c4, _f1(p, -n), _f2(p, -n), _f3(p, -n), _f4(p, n),
         _f3(p, n), _f2(p, n), _f1(p, n), c4],
        axis=1,
    ).astype(complex)


def recurrence_coeffs(p: ProblemParams, n: int) -> RecurrenceCoeffs:
    return RecurrenceCoeffs(int(n), tuple(complex(v) for v in coeff_rows(p, n)[0]))


def coeff_derivative_rows(p: ProblemParams, n, wrt: str) -> np.ndarray:
    """d/d(alpha), d/d(beta) or d2/d(alpha)d(beta) of :func:`coeff_rows`."""
    n = np.atleast_1d(np.asarray(n, dtype=float))
    a, b, ik = p.alpha, p.beta, 1j * p.k
    z = np.zeros(n.shape, dtype=complex)
    if wrt == "alpha":
        d3 = ik + z
        d2 = lambda m: 6 + 2 * a + 2 * b + 2 * m - 2 * ik
        d1 = lambda m: -(8 + ik + 4 * m + 8 * a)
        d0 = 4 - 4 * b + 4 * ik + 12 * a + z
    elif wrt == "beta":
        d3 = ik + z
        d2 = lambda m: 6 + 2 * a + 2 * b + 2 * m + 2 * ik
        d1 = lambda m: 12 - ik + 4 * m + 8 * b
        d0 = 12 - 4 * a - 4 * ik + 12 * b + z
    elif wrt == "alphabeta":
        d3 = z
        d2 = lambda m: 2 + 0 * m
        d1 = lambda m: 0 * m
        d0 = -4 + z
    else:
        raise ValueError(f"unknown derivative {wrt!r}")
    return np.stack(
        [z, d3, d2(-n) + z, d1(-n) + z, d0, d1(n) + z, d2(n) + z, d3, z], axis=1
    ).astype(complex)


@dataclass(frozen=True)
class MomentTable:
    """M(offset), ..., M(offset + len(values) - 1) with provenance tags."""

    params: ProblemParams
    values: np.ndarray
    regime: tuple
    est_accuracy: float = 0.0
    offset: int = 0
    kind: int = 0

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if not np.all(np.isfinite(v)):
            raise DomainError("moment table has non-finite entries", stage="moments")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if len(self.regime) != v.size:
            raise ValueError("regime tags must match values")

    @property
    def n_max(self) -> int:
        return self.offset + self.values.size - 1

    def __len__(self):
        return self.values.size

    def at(self, n):
        """Value(s) at index n, folding negative indices by M(-n) = M(n)."""
        idx = np.abs(np.asarray(n)) - self.offset
        if np.any(idx < 0) or np.any(idx >= self.values.size):
            raise MissingDependency(
                f"moment index outside table [{self.offset}, {self.n_max}]", stage="moments"
            )
        return self.values[idx]

    def counts(self) -> dict:
        return {tag: self.regime.count(tag) for tag in (STARTING, FORWARD, BVP, ORACLE)}


def stable_limit(p: ProblemParams, safety: float = 1.0) -> int:
    return int(math.floor(safety * p.threshold + 1e-12))


def _forward(p, start, n_target, rhs: Callable | None):
    """Core of forward recursion; ``start`` holds M(0..4)."""
    vals = np.zeros(max(n_target, 4) + 1, dtype=complex)
    vals[:5] = start
    if n_target <= 4:
        return vals[: n_target + 1]
    if p.degenerate:
        lead, first = 3, 2  # seven-term: row n yields M(n+3)
    else:
        lead, first = 4, 1
    rows = np.arange(first, n_target - lead + 1)
    C = coeff_rows(p, rows)
    R = rhs(rows) if rhs is not None else np.zeros(rows.size, dtype=complex)
    for i, n in enumerate(rows):
        c = C[i]
        pivot = c[lead + 4]
        scale = np.abs(c).max()
        if abs(pivot) < 1e-14 * scale:
            raise DegeneratePivot(
                f"leading coefficient {abs(pivot):.2e} too small at n={n}", stage="moments"
            )
        idx = np.abs(n + np.arange(-lead, lead))
        acc = np.dot(c[4 - lead : 4 + lead], vals[idx])
        vals[n + lead] = (R[i] - acc) / pivot
    return vals


FOLD_TOL = 1e-10


def _check_folded_row(p, start, rhs):
    """Row n = 0 with M(-j) = M(j) involves M(0..4) only; a large residual
    means the starting values (or the folded form of the recurrence) are off."""
    c = coeff_rows(p, 0)[0]
    terms = c * start[np.abs(OFFSETS)]
    r = terms.sum() - (rhs(np.array([0]))[0] if rhs is not None else 0.0)
    scale = np.abs(terms).max()
    if scale > 0 and abs(r) > FOLD_TOL * scale:
        log.warning("folded recurrence row n=0 has relative residual %.1e", abs(r) / scale)
    return abs(r) / scale if scale > 0 else 0.0


def forward_recursion(
    p: ProblemParams,
    start: Sequence[complex],
    n_target: int,
    *,
    rhs: Callable | None = None,
    kind: int = 0,
) -> MomentTable:
    """Run the recurrence upwards from M(0..4) to M(n_target).

    Raises ThresholdExceeded past floor(k + w/2), where the recursion is
    known to lose digits.  On the w = 2k line the seven-term form is solved
    for M(n+3).
    """
    start = np.asarray(start, dtype=complex)
    if start.shape != (5,):
        raise DomainError("need exactly five starting moments", stage="moments")
    if n_target > max(4, stable_limit(p)):
        raise ThresholdExceeded(
            f"n_target={n_target} beyond stable range {stable_limit(p)}", stage="moments"
        )
    _check_folded_row(p, start, rhs)
    vals = _forward(p, start, n_target, rhs)
    regime = tuple([STARTING] * min(5, vals.size) + [FORWARD] * max(0, vals.size - 5))
    return MomentTable(p, vals, regime, 0.0, 0, kind)


def _bvp_once(p, known, m, n_max, end, rhs, tail=None):
    """Solve for M(m+5..end) with M(end+1..end+3) = tail (zero by default);
    return M(m+5..n_max)."""
    rows = np.arange(m + 4, end)
    size = rows.size  # unknowns m+5..end
    C = coeff_rows(p, rows)
    lower, upper = 5, 3
    ab = np.zeros((lower + upper + 1, size), dtype=complex)
    b = rhs(rows).astype(complex) if rhs is not None else np.zeros(size, dtype=complex)
    r = np.arange(size)
    for jj, j in enumerate(OFFSETS):
        col = r + j - 1
        ok = (col >= 0) & (col < size)
        ab[upper + r[ok] - col[ok], col[ok]] = C[ok, jj]
        low = col < 0  # index n+j falls on a known value
        if low.any():
            b[low] -= C[low, jj] * known[rows[low] + j - m]
        high = col >= size  # index n+j lies in the tail
        if tail is not None and high.any():
            b[high] -= C[high, jj] * tail[rows[high] + j - end - 1]
    try:
        sol = solve_banded((lower, upper), ab, b, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"banded solve failed: {exc}", stage="moments") from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("banded solve produced non-finite values", stage="moments")
    return sol[: n_max - m - 4]


def bvp_solve(
    p: ProblemParams,
    start: Sequence[complex],
    n_max: int,
    *,
    m: int = 0,
    tol: float = 1e-12,
    end: int | None = None,
    max_end: int | None = None,
    rhs: Callable | None = None,
    end_limit: int | None = None,
    kind: int = 0,
    tail: Sequence[complex] | None = None,
    strict: bool = True,
) -> MomentTable:
    """Moments M(m..n_max) from M(m..m+4) by the zero-tail boundary-value method.

    The endpoint starts at ``end`` (default n_max + 20 + n_max // 4) and the
    gap ``end - n_max`` is doubled until the solution over [m+5, n_max]
    changes by less than ``tol`` relative to its largest entry.  Returns a
    table with ``offset = m`` and ``est_accuracy`` set to that last change.
    If the cap is reached first, ConvergenceError is raised, or with
    ``strict=False`` the last iterate is returned with its observed change.

    Passing ``tail`` (the values M(end+1..end+3)) together with ``end``
    gives Olver's variant: one solve with the supplied end values.

    Caveat: the J- and Y-kernel moments satisfy the same recurrence and decay
    at the same algebraic rate as M(n), so zero end values do not single out
    M(n) and the endpoint doubling typically stalls near 1e-3.
    """
    known = np.asarray(start, dtype=complex)
    if known.shape != (5,):
        raise DomainError("need exactly five starting moments", stage="moments")
    if tol <= 0:
        raise DomainError("tol must be positive", stage="moments")
    if n_max <= m + 4:
        vals = known[: n_max - m + 1]
        return MomentTable(p, vals, (STARTING,) * vals.size, 0.0, m, kind)
    if tail is not None:
        tail = np.asarray(tail, dtype=complex)
        if tail.shape != (3,) or end is None:
            raise DomainError("end values need end= and exactly three entries", stage="moments")
        if end <= n_max:
            raise DomainError("end must exceed n_max", stage="moments")
        sol = _bvp_once(p, known, m, n_max, end, rhs, tail)
        regime = (STARTING,) * 5 + (BVP,) * sol.size
        return MomentTable(p, np.concatenate([known, sol]), regime, 0.0, m, kind)
    cap = max_end or 16 * int(n_max + p.k + p.omega + 1)
    if end_limit is not None:
        cap = min(cap, end_limit)
    end = end or n_max + 20 + n_max // 4
    end = min(end, cap)
    if end <= n_max:
        raise MissingDependency("no room for a tail beyond n_max", stage="moments")
    prev = _bvp_once(p, known, m, n_max, end, rhs)
    change = math.inf
    while True:
        new_end = n_max + 2 * (end - n_max)
        if new_end > cap:
            break
        cur = _bvp_once(p, known, m, n_max, new_end, rhs)
        scale = max(np.abs(cur).max(), np.abs(known).max())
        change = float(np.abs(cur - prev).max() / scale)
        log.debug("bvp end=%d change=%.3e", new_end, change)
        prev, end = cur, new_end
        if change < tol:
            break
    if not change < tol:
        msg = (
            f"boundary-value solve did not settle below {tol:.1e} "
            f"(last change {change:.1e}, endpoint cap {cap})"
        )
        if strict:
            raise ConvergenceError(msg, stage="moments")
        log.warning(msg)
    vals = np.concatenate([known, prev])
    regime = (STARTING,) * 5 + (BVP,) * prev.size
    return MomentTable(p, vals, regime, change, m, kind)


def _merge(p, parts: list[MomentTable], kind=0) -> MomentTable:
    vals, regime = [], []
    acc = 0.0
    nxt = 0
    for t in parts:
        skip = nxt - t.offset
        vals.append(t.values[skip:])
        regime.extend(t.regime[skip:])
        acc = max(acc, t.est_accuracy)
        nxt = t.n_max + 1
    return MomentTable(p, np.concatenate(vals), tuple(regime), acc, 0, kind)


def moment_table(
    p: ProblemParams,
    start: Sequence[complex],
    n_max: int,
    *,
    safety: float = 0.9,
    tol: float = 1e-12,
    rhs: Callable | None = None,
    end_limit: int | None = None,
    kind: int = 0,
    strict: bool = True,
) -> MomentTable:
    """M(0..n_max): forward up to safety*(k + w/2), boundary-value beyond."""
    if not 0 < safety <= 1:
        raise DomainError("safety must lie in (0, 1]", stage="moments")
    n_fwd = min(n_max, max(4, stable_limit(p, safety)))
    fwd = forward_recursion(p, start, n_fwd, rhs=rhs, kind=kind)
    if n_max <= n_fwd:
        return fwd
    m = max(0, n_fwd - 4)
    tail = bvp_solve(
        p, fwd.values[m : m + 5], n_max, m=m, tol=tol, rhs=rhs, end_limit=end_limit,
        kind=kind, strict=strict,
    )
    return _merge(p, [fwd, tail], kind)


def log_rhs(p: ProblemParams, kind: int, base: MomentTable, logs: dict | None = None):
    """Right-hand side r_n for the log-weighted recurrences, as a function of n.

    kind 1: ln(x) weight, kind 2: ln(1-x), kind 3: both.  Kind 3 needs the
    kind-1 and kind-2 tables in ``logs``.
    """
    if kind in (1, 2):
        wrt = "alpha" if kind == 1 else "beta"

        def rhs(rows):
            D = coeff_derivative_rows(p, rows, wrt)
            M = base.at(rows[:, None] + OFFSETS[None, :])
            return -(D * M).sum(axis=1)

        return rhs
    if kind == 3:
        if not logs or 1 not in logs or 2 not in logs:
            raise MissingDependency("kind 3 needs kind-1 and kind-2 tables", stage="moments")
        t1, t2 = logs[1], logs[2]

        def rhs(rows):
            idx = rows[:, None] + OFFSETS[None, :]
            Da = coeff_derivative_rows(p, rows, "alpha")
            Db = coeff_derivative_rows(p, rows, "beta")
            Dab = coeff_derivative_rows(p, rows, "alphabeta")
            return -(Da * t2.at(idx) + Db * t1.at(idx) + Dab * base.at(idx)).sum(axis=1)

        return rhs
    raise DomainError(f"kind must be 1, 2 or 3, got {kind}", stage="moments")


def log_moment_solve(
    p: ProblemParams,
    kind: int,
    start: Sequence[complex],
    base: MomentTable,
    n_max: int,
    *,
    logs: dict | None = None,
    safety: float = 0.9,
    tol: float = 1e-12,
) -> MomentTable:
    """Log-weighted moments of the given kind for n = 0..n_max.

    ``base`` (and for kind 3 the tables in ``logs``) must reach three
    indices past every row used, which caps the boundary-value endpoint.
    """
    rhs = log_rhs(p, kind, base, logs)
    limit = base.n_max - 4
    if kind == 3:
        limit = min(limit, logs[1].n_max - 4, logs[2].n_max - 4)
    if n_max > limit:
        raise MissingDependency(
            f"base tables reach {limit + 4}; need more than n_max + 4", stage="moments"
        )
    return moment_table(
        p, start, n_max, safety=safety, tol=tol, rhs=rhs, end_limit=limit + 1, kind=kind
    )
