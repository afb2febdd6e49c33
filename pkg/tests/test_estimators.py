import math
import random

import pytest

from ivdesign import (
    CapExceededError,
    Estimate,
    EstimatorConfig,
    InputValidationError,
    PDAG,
    chernoff_sample_size,
    default_estimator_kind,
    enumerate_members,
    essential_of,
    estimate,
    estimate_fast,
    estimate_unbiased,
    exact_objective,
    greedy_accuracy_params,
    sample_fast_member,
)
from conftest import k3_ess, p3_ess


def test_chernoff_examples():
    assert chernoff_sample_size(10, 0.1, 0.05) == 7747
    assert chernoff_sample_size(1, 0.5, 0.5) == 14


def test_chernoff_strictly_above_bound():
    n = chernoff_sample_size(7, 0.3, 0.2)
    bound = 7 * 2.3 / 0.09 * math.log(10)
    assert n == math.floor(bound) + 1
    assert n > bound


def test_chernoff_validation():
    with pytest.raises(InputValidationError):
        chernoff_sample_size(0, 0.2, 0.1)
    with pytest.raises(InputValidationError):
        chernoff_sample_size(5, 1.5, 0.1)
    with pytest.raises(InputValidationError):
        chernoff_sample_size(5, 0.2, 0.0)


def test_greedy_accuracy_params():
    eps, delta = greedy_accuracy_params(0.2, 0.1, 5)
    assert eps == pytest.approx(0.2 / 20)
    assert delta == pytest.approx(0.1 / 100)
    with pytest.raises(InputValidationError):
        greedy_accuracy_params(0.2, 0.1, 0)


def test_config_validation():
    with pytest.raises(InputValidationError):
        EstimatorConfig(kind="magic")
    with pytest.raises(InputValidationError):
        EstimatorConfig(sample_count=0)
    cfg = EstimatorConfig(epsilon=0.2, delta=0.1)
    assert cfg.resolve_sample_count(10) == chernoff_sample_size(10, 0.2, 0.1)
    assert EstimatorConfig(sample_count=77).resolve_sample_count(10) == 77


def test_exact_objective_p3():
    ess = p3_ess()
    assert exact_objective(ess, [1]).value == pytest.approx(2.0)
    assert exact_objective(ess, [0]).value == pytest.approx(4 / 3)
    assert exact_objective(ess, []).value == 0.0


def test_exact_objective_all_targets_resolves_everything():
    ess = k3_ess()
    est = exact_objective(ess, [0, 1, 2])
    assert est.value == pytest.approx(3.0)


def test_unbiased_converges_to_exact():
    ess = p3_ess()
    cfg = EstimatorConfig(kind="unbiased", sample_count=20_000, master_seed=11)
    est = estimate_unbiased(ess, [0], cfg)
    assert est.sample_count == 20_000
    assert est.value == pytest.approx(4 / 3, abs=0.03)
    assert est.standard_error > 0


def test_unbiased_deterministic_given_seed():
    ess = k3_ess()
    cfg = EstimatorConfig(kind="unbiased", sample_count=500, master_seed=3)
    assert estimate_unbiased(ess, [1], cfg) == estimate_unbiased(ess, [1], cfg)


def test_unbiased_fully_directed_is_zero():
    ess = essential_of(PDAG.from_edges(3, directed=[(0, 1), (2, 1)]))
    cfg = EstimatorConfig(kind="unbiased", sample_count=10)
    assert estimate_unbiased(ess, [0], cfg).value == 0.0


def test_fast_close_to_exact():
    ess = p3_ess()
    cfg = EstimatorConfig(kind="fast", sample_count=20_000, master_seed=11)
    est = estimate_fast(ess, [0], cfg)
    assert est.value == pytest.approx(4 / 3, abs=0.05)


def test_estimate_dispatch():
    ess = p3_ess()
    assert estimate(ess, [1], EstimatorConfig(kind="exact")).value == 2.0
    got = estimate(ess, [1], EstimatorConfig(kind="unbiased", sample_count=50))
    assert isinstance(got, Estimate)


def test_fast_sampler_membership(small_essentials):
    rng = random.Random(5)
    for ess in small_essentials[:12]:
        members = set(enumerate_members(ess, validate=False))
        for _ in range(25):
            s = sample_fast_member(ess, rng, validate=False)
            assert s.provenance == "fast"
            assert s.dag in members


def test_fast_sampler_single_edge():
    ess = PDAG.from_edges(2, undirected=[(0, 1)])
    seen = set()
    for seed in range(20):
        seen.add(sample_fast_member(ess, random.Random(seed)).dag)
    assert len(seen) == 2


def test_fast_sampler_restart_cap_positive():
    with pytest.raises(InputValidationError):
        EstimatorConfig(kind="fast", fast_restart_cap=0)


def test_default_estimator_kind(small_essentials):
    assert default_estimator_kind(p3_ess()) == "exact"
    for ess in small_essentials[:5]:
        assert default_estimator_kind(ess) in ("exact", "unbiased", "fast")


def test_intervention_set_validation():
    ess = p3_ess()
    with pytest.raises(InputValidationError):
        exact_objective(ess, [0, 0])
    with pytest.raises(InputValidationError):
        estimate_unbiased(ess, [7], EstimatorConfig(sample_count=5))
