import math

import pytest

import qperc


def test_closed_forms():
    assert qperc.critical_occupation(0.25) == 0.75
    assert qperc.mean_cluster_size(0.3, 0.2) == pytest.approx(2.25, abs=1e-12)
    assert qperc.mean_cluster_size(0.5, 0.0, include_zero_open=True) == pytest.approx(2.0)
    assert qperc.pair_connectivity(2, 0.3, 0.2) == pytest.approx(0.25)
    assert qperc.correlation_length(0.5, 0.0) == pytest.approx(1 / math.log(2))
    assert qperc.filtering_probability(0.5) == 0.5


def test_strength():
    sol = qperc.percolation_strength(0.8, 0.25)
    assert sol.strength == pytest.approx(0.4375, abs=1e-12)
    assert sol.root == "physical"
    fixed = qperc.percolation_strength_fixed_point(0.8, 0.25)
    assert fixed.strength == pytest.approx(sol.strength, abs=1e-10)
    assert qperc.jump_magnitude(0.6, 0.49) == pytest.approx(0.51853394418992083, abs=1e-12)


def test_exceptions():
    with pytest.raises(qperc.DivergenceError):
        qperc.mean_cluster_size(0.75, 0.25)
    with pytest.raises(qperc.DomainError):
        qperc.ModelParams(1.5, 0.0)
    with pytest.raises(ValueError):
        qperc.sample_chain(10, 0.7, 0.4)
    with pytest.raises(qperc.EnumerationLimitError):
        qperc.enumerate_exact(13, 0.3, 0.2)
    assert issubclass(qperc.DivergenceError, qperc.DomainError)


def test_sampling_and_sweep():
    assert qperc.derive_trial_seed(0, 0) == 0xE220A8397B1DCDAF
    states = qperc.sample_chain(1000, 1.0, 0.0, seed=3)
    assert states == [1] * 999
    rows = qperc.run_sweep([(0.3, 0.2), (0.9, 0.3)], length_nodes=50_000, trials=6)
    assert rows[0].error is None
    assert rows[0].mean_cluster_size.value == pytest.approx(2.25, rel=0.05)
    assert rows[1].error is not None
    again = qperc.run_sweep([(0.3, 0.2)], length_nodes=50_000, trials=6, threads=1)
    assert again[0].mean_cluster_size.value == rows[0].mean_cluster_size.value


def test_enumeration():
    exact = qperc.enumerate_exact(9, 0.3, 0.2)
    assert exact.configurations == 3**8
    assert exact.spanning_probability == pytest.approx(0.5**8)
    assert exact.mean_cluster_size() == pytest.approx(1.9857131488650566, abs=1e-12)


def test_dynamics_and_exponents():
    ramp = qperc.linear_ramp(201)
    traj = qperc.delayed_trajectory(ramp, 0.49, 120)
    assert traj[119].strength == 0.0
    assert traj[120].strength == pytest.approx(0.51853394418992083, abs=1e-12)
    grid = qperc.subcritical_grid(0.25)
    gamma = qperc.estimate_gamma_analytic(0.25, grid)
    sigma = qperc.estimate_sigma_analytic(0.25, grid)
    assert 0.9 <= gamma.exponent_estimate <= 1.1
    assert 0.9 <= qperc.estimate_nu_analytic(0.25, grid).exponent_estimate <= 1.1
    beta = qperc.estimate_beta_analytic(0.25, qperc.supercritical_grid(0.25))
    assert 0.95 <= beta.exponent_estimate <= 1.05
    tau = qperc.tau_from_scaling(gamma.exponent_estimate, sigma.exponent_estimate)
    assert abs(tau - 2.0) < 0.3


def test_audit():
    relations = {r.name: r for r in qperc.scaling_law_audit()}
    assert not relations["beta=(tau-2)/sigma"].holds
    assert relations["gamma=(3-tau)/sigma"].holds
