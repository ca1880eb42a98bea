import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import poisson_pmf_mp, poisson_quantile_mp
from sdpkit.distributions import (EmpiricalDiscrete, PoissonDiscrete, point_mass, quantile,
                                  truncate)
from sdpkit.errors import ModelError

COIN = EmpiricalDiscrete([(1, 0.5), (2, 0.5)])


def test_empirical_pmf():
    assert COIN.pmf(1) == 0.5
    assert COIN.pmf(3) == 0.0


def test_poisson_pmf_negative_outcome():
    assert PoissonDiscrete(10).pmf(-1) == 0.0


def test_poisson_pmf_at_mean():
    # e^-10 10^10 / 10! from a 50-digit series evaluation
    assert PoissonDiscrete(10).pmf(10) == pytest.approx(0.12511003572113329898, rel=1e-13)


@pytest.mark.parametrize("lam", [10, 15, 20])
def test_poisson_pmf_matches_series(lam):
    d = PoissonDiscrete(lam)
    for k in range(61):
        exact = float(poisson_pmf_mp(lam, k))
        assert abs(d.pmf(k) - exact) <= 1e-12 * exact


def test_empirical_quantiles():
    assert COIN.quantile(0.5) == 1
    assert COIN.quantile(0.999) == 2


@pytest.mark.parametrize("lam,q,expected", [
    (10, 0.999, 21), (10, 0.001, 2), (15, 0.999, 28), (15, 0.001, 5),
    (20, 0.999, 35), (20, 0.001, 8), (20, 0.5, 20),
])
def test_poisson_quantile(lam, q, expected):
    assert poisson_quantile_mp(lam, q) == expected
    assert PoissonDiscrete(lam).quantile(q) == expected


@pytest.mark.parametrize("q", [0.0, 1.0, -0.1, 1.5])
def test_quantile_domain(q):
    with pytest.raises(ValueError):
        quantile(COIN, q)


@given(lam=st.sampled_from([1.5, 10, 15, 20]), q=st.floats(0.0005, 0.9995))
def test_quantile_is_generalized_inverse(lam, q):
    d = PoissonDiscrete(lam)
    k = d.quantile(q)
    assert d.cdf(k) >= q
    assert d.cdf(k - 1) < q


def test_truncate_keeps_coin():
    t = truncate(COIN, 0.999)
    assert t.outcomes == (1.0, 2.0)
    assert t.masses == (0.5, 0.5)
    assert (t.lower, t.upper) == (1.0, 2.0)


def test_truncate_poisson_bounds():
    t = truncate(PoissonDiscrete(10), 0.999)
    assert t.outcomes == tuple(float(k) for k in range(2, 22))
    assert math.fsum(t.masses) == pytest.approx(1.0, abs=1e-12)
    assert t.pmf(10) > PoissonDiscrete(10).pmf(10)


@pytest.mark.parametrize("lam", [0.3, 1, 5, 10, 15, 20, 37.5])
@pytest.mark.parametrize("q", [0.6, 0.9, 0.99, 0.999, 0.9999])
def test_truncated_masses_sum_to_one(lam, q):
    t = truncate(PoissonDiscrete(lam), q)
    assert abs(math.fsum(t.masses) - 1.0) <= 1e-12
    assert all(t.lower <= k <= t.upper for k in t.outcomes)


@given(st.lists(st.integers(1, 50), min_size=1, max_size=25), st.floats(0.51, 0.9999))
def test_truncated_empirical_renormalizes(weights, q):
    total = sum(weights)
    d = EmpiricalDiscrete([(i, w / total) for i, w in enumerate(weights)]) \
        if abs(math.fsum(w / total for w in weights) - 1) <= 1e-12 else None
    if d is None:
        return
    t = truncate(d, q)
    assert abs(math.fsum(t.masses) - 1.0) <= 1e-12
    assert t.lower == d.quantile(1 - q) and t.upper == d.quantile(q)


@pytest.mark.parametrize("lam", [
    10,
    pytest.param(15, marks=pytest.mark.xfail(
        strict=True, reason="symmetric cut at q=0.99 ([7, 25]) balances the tails better "
                            "than q=0.999 ([5, 28]): gaps 0.0021 vs 0.0032")),
    20,
])
def test_truncated_mean_monotone(lam):
    gaps = [abs(truncate(PoissonDiscrete(lam), q).mean() - lam) for q in (0.9, 0.99, 0.999)]
    assert gaps[0] >= gaps[1] >= gaps[2]


@pytest.mark.parametrize("lam", [10, 15, 20])
def test_truncated_mean_converges(lam):
    gaps = [abs(truncate(PoissonDiscrete(lam), q).mean() - lam) for q in (0.9, 0.999, 0.9999)]
    assert gaps[0] > max(gaps[1:])
    assert gaps[1] < 0.005 and gaps[2] < 0.002


def test_truncate_rejects_low_quantile():
    with pytest.raises(ValueError):
        truncate(COIN, 0.4)


@pytest.mark.parametrize("support", [
    [],
    [(2, 0.5), (1, 0.5)],
    [(1, 0.5), (1, 0.5)],
    [(1, 0.0), (2, 1.0)],
    [(1, 0.5), (2, 0.4)],
])
def test_empirical_invariants(support):
    with pytest.raises(ModelError):
        EmpiricalDiscrete(support)


def test_poisson_mean_positive():
    with pytest.raises(ModelError):
        PoissonDiscrete(0)


def test_restrict_renormalizes():
    t = truncate(PoissonDiscrete(20), 0.999).restrict([10, 20, 30])
    assert t.outcomes == (10.0, 20.0, 30.0)
    assert math.fsum(t.masses) == pytest.approx(1.0, abs=1e-12)
    p = PoissonDiscrete(20)
    assert t.masses[0] / t.masses[1] == pytest.approx(p.pmf(10) / p.pmf(20), rel=1e-12)


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_draws_stay_in_support(seed):
    t = truncate(PoissonDiscrete(15), 0.999)
    x = t.draw(np.random.default_rng(seed), 200)
    assert set(x.tolist()) <= set(t.outcomes)


def test_point_mass():
    d = point_mass(3)
    assert d.support() == [(3.0, 1.0)]
