import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sdpkit.distributions import EmpiricalDiscrete, PoissonDiscrete, truncate
from sdpkit.model import State
from sdpkit.recursion import backward_recursion, forward_recursion
from sdpkit.sampling import SamplingPlan, Scheme, sample_support, stage_sample_size

# ceil(100 / r**(t-1)) evaluated by hand for t = 1..6
WANING = {
    1.0: [100, 100, 100, 100, 100, 100],
    1.5: [100, 67, 45, 30, 20, 14],
    2.0: [100, 50, 25, 13, 7, 4],
}

THIRTY = truncate(EmpiricalDiscrete([(k, 1 / 32) for k in range(30)] + [(30, 2 / 32)]), 0.999)


def test_waning_examples():
    assert stage_sample_size(SamplingPlan(Scheme.SIMPLE_RANDOM, 100, 1), 5) == 100
    assert stage_sample_size(SamplingPlan(Scheme.SIMPLE_RANDOM, 100, 2), 1) == 100
    assert stage_sample_size(SamplingPlan(Scheme.SIMPLE_RANDOM, 100, 2), 4) == 13


@pytest.mark.parametrize("r", sorted(WANING))
def test_waning_table(r):
    plan = SamplingPlan(Scheme.SIMPLE_RANDOM, 100, r)
    assert [stage_sample_size(plan, t) for t in range(1, 7)] == WANING[r]


@given(st.integers(1, 500), st.floats(1.0, 5.0))
def test_waning_monotone(max_samples, r):
    plan = SamplingPlan(Scheme.SIMPLE_RANDOM, max_samples, r)
    sizes = [stage_sample_size(plan, t) for t in range(1, 12)]
    assert all(b <= a for a, b in zip(sizes, sizes[1:]))
    assert min(sizes) >= 1


@pytest.mark.parametrize("bad", [dict(max_samples=0), dict(reduction_factor=0.5)])
def test_plan_invariants(bad):
    with pytest.raises(ValueError):
        SamplingPlan(Scheme.SIMPLE_RANDOM, **bad)


def test_exhaustive_is_identity():
    d = truncate(PoissonDiscrete(20), 0.999)
    assert sample_support(SamplingPlan(Scheme.EXHAUSTIVE, 1), d, 3) is d


def test_large_sample_keeps_support():
    d = truncate(PoissonDiscrete(20), 0.999)
    assert sample_support(SamplingPlan(Scheme.SIMPLE_RANDOM, len(d)), d, 1) is d


def test_sampled_support_properties():
    assert len(THIRTY) == 31
    for seed in range(1000):
        s = sample_support(SamplingPlan(Scheme.SIMPLE_RANDOM, 5, seed=seed), THIRTY, 1)
        assert len(s) == 5
        assert len(set(s.outcomes)) == 5
        assert set(s.outcomes) <= set(THIRTY.outcomes)
        assert abs(math.fsum(s.masses) - 1.0) <= 1e-12


def test_sampling_favours_heavy_outcomes():
    # outcome 30 carries twice the mass of the others
    hits = sum(30.0 in sample_support(SamplingPlan(Scheme.SIMPLE_RANDOM, 1, seed=i), THIRTY, 1).outcomes
               for i in range(4000))
    assert 0.045 < hits / 4000 < 0.085


@given(seed=st.integers(0, 2**63), stage=st.integers(1, 6))
def test_sampling_deterministic(seed, stage):
    d = truncate(PoissonDiscrete(15), 0.999)
    plan = SamplingPlan(Scheme.SIMPLE_RANDOM, 7, 1.2, seed)
    assert sample_support(plan, d, stage) == sample_support(plan, d, stage)


def test_stages_draw_independently():
    d = truncate(PoissonDiscrete(15), 0.999)
    plan = SamplingPlan(Scheme.SIMPLE_RANDOM, 7, 1.0, 11)
    assert sample_support(plan, d, 1) != sample_support(plan, d, 2)


def test_degenerate_sampling_matches_exhaustive_toy(toy):
    plan = SamplingPlan(Scheme.SIMPLE_RANDOM, 2, 1.0, 5)
    a = backward_recursion(toy)
    b = backward_recursion(toy, plan)
    assert a.values == b.values and a.policy == b.policy
    f = forward_recursion(toy, plan, State(1, 1))
    assert f.report.expected_total_value == 16.25


def test_sampled_solve_reproducible(small_scarf):
    plan = SamplingPlan(Scheme.SIMPLE_RANDOM, 6, 1.5, 123)
    a = backward_recursion(small_scarf, plan, State(1, 0))
    b = backward_recursion(small_scarf, plan, State(1, 0))
    assert a.values == b.values and a.policy == b.policy
    c = backward_recursion(small_scarf, SamplingPlan(Scheme.SIMPLE_RANDOM, 6, 1.5, 124), State(1, 0))
    assert c.values != a.values
