import numpy as np
import pytest

from nandtree import EnsembleResult, ProbeSpec, build_tree, run_ensemble, shift_scaling
from nandtree.ensemble import SHIFT_GRID_POINTS, trial_seed
from nandtree.model import DisorderSpec, StructureError


def test_trial_seed_mixing():
    seeds = {trial_seed(5, i) for i in range(100)}
    assert len(seeds) == 100
    assert trial_seed(5, 3) == trial_seed(5, 3)
    assert trial_seed(5, 3) != trial_seed(6, 3)


def test_run_ensemble_disorder_free():
    probe = ProbeSpec()
    for depth in (2, 4, 6):
        tree = build_tree(depth, [0] * 2**depth)
        result = run_ensemble(
            tree, DisorderSpec(0.0, 0.0, 0), probe, trials=5, base_seed=1
        )
        assert result.success_rate == 1.0
        assert result.failure_rate == 0.0
        assert result.ambiguous_rate == 0.0


def test_run_ensemble_rates_sum_to_one():
    tree = build_tree(5, [0] * 32)
    result = run_ensemble(
        tree, DisorderSpec(0.1, 0.1, 0), ProbeSpec(), trials=50, base_seed=3
    )
    total = result.success_rate + result.failure_rate + result.ambiguous_rate
    assert total == pytest.approx(1.0, abs=1e-12)
    assert result.trials == 50


def test_run_ensemble_reproducible():
    tree = build_tree(4, [0] * 16)
    spec = DisorderSpec(0.05, 0.05, 0)
    a = run_ensemble(tree, spec, ProbeSpec(), trials=20, base_seed=9)
    b = run_ensemble(tree, spec, ProbeSpec(), trials=20, base_seed=9)
    assert a == b
    assert isinstance(a, EnsembleResult)


def test_run_ensemble_validates_trials():
    tree = build_tree(2, (0, 0, 0, 0))
    with pytest.raises(StructureError):
        run_ensemble(tree, DisorderSpec(0.0, 0.0, 0), ProbeSpec(), trials=0, base_seed=1)


def test_run_ensemble_fidelity_regimes():
    # Clean operation at 0.03t disorder; strictly degraded at 0.1t.
    probe = ProbeSpec()
    rates = {}
    for sigma in (0.03, 0.1):
        total = 0.0
        for bits in ([0] * 32, [1] * 32):
            tree = build_tree(5, bits)
            r = run_ensemble(
                tree,
                DisorderSpec(sigma, sigma, 0),
                probe,
                trials=200,
                base_seed=11,
                gamma=sigma,
            )
            total += r.success_rate
        rates[sigma] = total / 2.0
    assert rates[0.03] >= 0.9
    assert rates[0.1] < rates[0.03]


def test_gamma_degradation_monotone():
    # With zero disorder, pushing gamma past t/sqrt(N) drives the
    # ambiguous fraction up.
    tree = build_tree(4, [0] * 16)
    probe = ProbeSpec()
    spec = DisorderSpec(0.0, 0.0, 0)
    rates = [
        run_ensemble(tree, spec, probe, trials=5, base_seed=1, gamma=g).ambiguous_rate
        for g in (0.05, 0.25, 0.5, 0.9, 1.3)
    ]
    assert all(b >= a for a, b in zip(rates, rates[1:]))
    assert rates[-1] > rates[0]


def test_shift_scaling_no_disorder():
    for n, rms in shift_scaling([3, 4, 5], 0.0, trials=10, base_seed=7):
        resolution = 8.0 / (np.sqrt(n) * (SHIFT_GRID_POINTS - 1))
        assert rms <= resolution


def test_shift_scaling_linear_in_sigma():
    a = shift_scaling([4, 6], 0.01, trials=40, base_seed=7)
    b = shift_scaling([4, 6], 0.02, trials=40, base_seed=7)
    for (_, rms1), (_, rms2) in zip(a, b):
        assert 1.4 <= rms2 / rms1 <= 2.6


def test_shift_scaling_reproducible_and_capped():
    a = shift_scaling([4, 6], 0.01, trials=20, base_seed=5)
    assert a == shift_scaling([4, 6], 0.01, trials=20, base_seed=5)
    with pytest.raises(StructureError):
        shift_scaling([13], 0.01, trials=5, base_seed=1)


@pytest.mark.xfail(
    strict=True,
    reason="the first-order picture predicts rms shift ~ sigma*sqrt(N) from "
    "unit-weight detuning accumulation, but the exact recursion attenuates "
    "contributions on their way to the root (total sensitivity stays O(1)), "
    "so the measured exponent is far below the predicted band",
)
def test_shift_scaling_sqrt_n_band():
    out = shift_scaling([4, 6, 8, 10], 0.01, trials=60, base_seed=5)
    ns = np.array([n for n, _ in out], dtype=float)
    rms = np.array([r for _, r in out])
    exponent = np.polyfit(np.log(ns), np.log(rms), 1)[0]
    assert 0.4 <= exponent <= 0.6
    for (_, r1), (_, r2) in zip(out, out[1:]):
        assert 1.2 <= r2 / r1 <= 1.7  # times 4 in N -> two sqrt(2) steps
