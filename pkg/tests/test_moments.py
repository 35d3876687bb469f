import numpy as np
import pytest

from ccfquad.errors import ConvergenceError, DomainError, MissingDependency, ThresholdExceeded
from ccfquad.moments import (
    BVP,
    FORWARD,
    STARTING,
    OFFSETS,
    bvp_solve,
    coeff_derivative_rows,
    coeff_rows,
    forward_recursion,
    log_moment_solve,
    log_rhs,
    moment_table,
    recurrence_coeffs,
    stable_limit,
)
from ccfquad.oracle import reference_integral, reference_moments
from ccfquad.params import ProblemParams
from ccfquad.startmom import starting_moments


def tstar(n):
    return lambda x: np.cos(n * np.arccos(np.clip(2 * x - 1, -1, 1)))


def random_sets(count, seed=11):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        nu = rng.uniform(0, 1.5)
        alpha = rng.uniform(abs(nu) - 0.8, abs(nu) + 1.0)
        beta = rng.uniform(-0.8, 1.0)
        omega = rng.uniform(5, 40)
        k = rng.uniform(0, 60 - omega)
        out.append(ProblemParams(alpha, beta, nu, k, omega))
    return out


def test_coefficient_structure():
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 50.0)
    c = recurrence_coeffs(p, 7)
    assert c[4] == c[-4] == pytest.approx(50 ** 2 / 16 - 100 / 4)
    assert c[3] == pytest.approx(1j * 10 * (-0.9 + 7 + 4) - 5j)
    with pytest.raises(IndexError):
        c[5]


def test_k_zero_kills_f1():
    c = recurrence_coeffs(ProblemParams(0.2, 0.1, 0.3, 0.0, 7.0), 5)
    assert c[3] == 0 and c[-3] == 0


def test_degenerate_outer_terms_vanish():
    c = recurrence_coeffs(ProblemParams(-0.2, -0.3, 0.3, 12.5, 25.0), 6)
    assert c[4] == 0 and c[-4] == 0


@pytest.mark.parametrize("p", random_sets(5))
def test_residual_with_oracle_moments(p):
    M = reference_moments(p, range(17))
    for n in range(4, 13):
        terms = coeff_rows(p, n)[0] * M[n + OFFSETS]
        assert abs(terms.sum()) <= 1e-9 * np.abs(terms).max()


def test_residual_folded_rows():
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 10.0)
    M = reference_moments(p, range(9))
    for n in range(0, 4):
        terms = coeff_rows(p, n)[0] * M[np.abs(n + OFFSETS)]
        assert abs(terms.sum()) <= 1e-10 * np.abs(terms).max()


def test_forward_against_oracle():
    p = ProblemParams(-0.6, -0.3, 0.0, 50.0, 100.0)
    t = forward_recursion(p, starting_moments(p), 40)
    ref = reference_moments(p, range(5, 41))
    rel = np.abs(t.values[5:] - ref) / np.abs(ref)
    assert rel.max() <= 1e-8
    assert t.regime[:5] == (STARTING,) * 5 and set(t.regime[5:]) == {FORWARD}


def test_forward_short_and_threshold():
    p = ProblemParams(0.0, -0.3, 0.6, 5.0, 10.0)
    start = starting_moments(p)
    t = forward_recursion(p, start, 3)
    np.testing.assert_array_equal(t.values, start[:4])
    assert stable_limit(p) == 10
    with pytest.raises(ThresholdExceeded):
        forward_recursion(p, start, 11)
    with pytest.raises(DomainError):
        forward_recursion(p, start[:4], 8)


def test_symmetry_refold():
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 10.0)
    t = forward_recursion(p, starting_moments(p), 12)
    np.testing.assert_array_equal(t.at([-3, -1]), t.at([3, 1]))
    # rows n = -3..0 only involve M(-7..4); solve each for its M(-n-4)
    for n in range(-3, 1):
        c = coeff_rows(p, n)[0]
        rest = sum(c[j + 4] * t.at(n + j) for j in range(-3, 5))
        assert abs(-rest / c[0] - t.at(n - 4)) <= 1e-11 * abs(t.at(n - 4))


def test_degenerate_seven_term_path():
    p = ProblemParams(-0.2, -0.3, 0.3, 25.0, 50.0)
    t = forward_recursion(p, starting_moments(p), 40)
    # the nine-term residual with c(+-4) = 0 vanishes on the seven-term output
    for n in range(4, 37):
        terms = coeff_rows(p, n)[0] * t.at(n + OFFSETS)
        assert abs(terms.sum()) <= 1e-13 * np.abs(terms).max()
    ref = reference_moments(p, range(30, 41))
    assert np.max(np.abs(t.values[30:] - ref) / np.abs(ref)) <= 1e-8


def test_olver_variant_with_exact_tail():
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 10.0)
    M = reference_moments(p, range(0, 64))
    t = bvp_solve(p, M[15:20], 50, m=15, end=60, tail=M[61:64])
    assert t.offset == 15 and t.n_max == 50
    rel = np.abs(t.values - M[15:51]) / np.abs(M[15:51])
    assert rel.max() <= 1e-10
    assert set(t.regime[5:]) == {BVP}


def test_zero_tail_does_not_settle():
    # moments with J and Y kernels solve the same recurrence and decay at the
    # same rate, so zero end values never pin M(n) down
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 10.0)
    start = forward_recursion(p, starting_moments(p), 15).values[11:16]
    with pytest.raises(ConvergenceError):
        bvp_solve(p, start, 60, m=11)


def test_non_strict_returns_decaying_tail():
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 10.0)
    t = moment_table(p, starting_moments(p), 200, strict=False)
    assert t.counts()[BVP] > 0 and t.est_accuracy > 0
    mags = np.abs(t.values[stable_limit(p, 0.9):])
    head, tail = mags[: mags.size // 10], mags[-(mags.size // 10):]
    assert tail.max() < head.max()


def test_bvp_argument_errors():
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 10.0)
    s = starting_moments(p)
    with pytest.raises(DomainError):
        bvp_solve(p, s, 30, tol=0)
    with pytest.raises(DomainError):
        bvp_solve(p, s, 30, tail=[0, 0, 0])
    t = bvp_solve(p, s, 3)
    assert t.n_max == 3


def test_table_at_out_of_range():
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 10.0)
    t = forward_recursion(p, starting_moments(p), 8)
    with pytest.raises(MissingDependency):
        t.at(9)


def _log_start(p, kind):
    if kind == 1:
        return np.array([reference_integral(lambda x, n=n: np.log(x) * tstar(n)(x), p) for n in range(5)])
    # the oracle's end panel assumes a smooth factor next to (1-x)^b, which
    # ln(1-x) is not; differentiate in beta instead
    h = 1e-5
    up = reference_moments(p.with_(beta=p.beta + h), range(5))
    dn = reference_moments(p.with_(beta=p.beta - h), range(5))
    return (up - dn) / (2 * h)


@pytest.mark.parametrize("kind,name", [(1, "alpha"), (2, "beta")])
def test_log_moments_against_finite_difference(kind, name):
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 20.0)
    base = forward_recursion(p, starting_moments(p), 19)
    t = log_moment_solve(p, kind, _log_start(p, kind), base, 15)
    h = 1e-5
    ns = range(5, 16)
    up = reference_moments(p.with_(**{name: getattr(p, name) + h}), ns)
    dn = reference_moments(p.with_(**{name: getattr(p, name) - h}), ns)
    fd = (up - dn) / (2 * h)
    assert np.max(np.abs(t.values[5:] - fd) / np.abs(fd)) <= 1e-5


def test_log_rhs_k_zero_is_real_combination():
    p = ProblemParams(0.3, 0.2, 0.0, 0.0, 8.0)
    D = coeff_derivative_rows(p, np.arange(4, 9), "alpha")
    assert np.all(D.imag == 0)


def test_log_kind3_assembly():
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 20.0)
    base = forward_recursion(p, starting_moments(p), 12)
    rng = np.random.default_rng(2)
    t1 = base.__class__(p, rng.normal(size=13) + 0j, base.regime, 0.0, 0, 1)
    t2 = base.__class__(p, rng.normal(size=13) + 0j, base.regime, 0.0, 0, 2)
    r = log_rhs(p, 3, base, {1: t1, 2: t2})(np.array([5]))[0]
    idx = 5 + OFFSETS
    expect = -(
        coeff_derivative_rows(p, 5, "alpha")[0] @ t2.at(idx)
        + coeff_derivative_rows(p, 5, "beta")[0] @ t1.at(idx)
        + coeff_derivative_rows(p, 5, "alphabeta")[0] @ base.at(idx)
    )
    assert r == pytest.approx(expect, rel=1e-14)
    with pytest.raises(MissingDependency):
        log_rhs(p, 3, base, {1: t1})
    with pytest.raises(DomainError):
        log_rhs(p, 4, base)


def test_folded_row_check_warns(caplog):
    p = ProblemParams(-0.6, -0.3, 0.0, 10.0, 10.0)
    start = starting_moments(p)
    with caplog.at_level("WARNING", logger="ccfquad.moments"):
        forward_recursion(p, start, 12)
        assert not caplog.records
        forward_recursion(p, start * np.array([1, 1, 1, 1, 1.001]), 12)
    assert "folded recurrence row" in caplog.text
