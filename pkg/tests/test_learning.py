"""Belief dynamics: adapt/combine, log recursion, runs, dual representation."""

import math

import numpy as np
import pytest

from sociallearn import (
    AgentConfig,
    BeliefState,
    Hypothesis,
    Role,
    adapt,
    bsc_model,
    combine,
    log_ratio_recursion,
    make_model,
    make_network,
    run,
    run_finals,
    star_adjacency,
    step,
    uniform_combination,
    unknown_divergence_attack,
)
from sociallearn.errors import ZeroLikelihoodError
from sociallearn.learning import _draw_all_symbols, network_average_true_belief

from helpers import agents_for, random_model, random_network


class TestAdapt:
    def test_uniform_prior_returns_normalized_row(self):
        assert adapt([0.5, 0.5], [0.9, 0.1]) == pytest.approx([0.9, 0.1])

    def test_uninformative_row_no_update(self):
        assert adapt([0.5, 0.5], [0.3, 0.3]) == pytest.approx([0.5, 0.5])

    def test_symmetric_product(self):
        # 0.8*0.2 in both components -> uniform
        assert adapt([0.8, 0.2], [0.2, 0.8]) == pytest.approx([0.5, 0.5])

    def test_zero_row(self):
        with pytest.raises(ZeroLikelihoodError):
            adapt([0.5, 0.5], [0.0, 0.0])


class TestCombine:
    def test_single_neighbor_identity(self):
        assert combine([[0.7, 0.3]], [1.0]) == pytest.approx([0.7, 0.3])

    def test_symmetric_pair(self):
        assert combine([[0.9, 0.1], [0.1, 0.9]], [0.5, 0.5]) == pytest.approx([0.5, 0.5])

    def test_weighted_geometric_mean(self):
        # ratio (0.8/0.2)^0.75 * (0.5/0.5)^0.25 = 4^0.75 evaluated directly
        mu = combine([[0.8, 0.2], [0.5, 0.5]], [0.75, 0.25])
        ratio = 4.0**0.75
        assert mu == pytest.approx([ratio / (1 + ratio), 1 / (1 + ratio)], abs=1e-12)


class TestLogRatioRecursion:
    def test_zero_fixed_point(self):
        out = log_ratio_recursion(np.zeros(3), np.zeros(3), np.eye(3))
        assert np.array_equal(out, np.zeros(3))

    def test_scalar_accumulation(self):
        lam = np.zeros(1)
        for i in range(1, 8):
            lam = log_ratio_recursion(lam, np.array([0.37]), np.eye(1))
            assert lam[0] == pytest.approx(i * 0.37, abs=1e-12)

    def test_matches_belief_domain_composition(self):
        rng = np.random.default_rng(77)
        net = random_network(rng, 3)
        models = [random_model(rng, int(rng.integers(2, 5))) for _ in range(3)]
        agents = agents_for(net, models)
        horizon = 50
        blocks = _draw_all_symbols(agents, Hypothesis.THETA1, horizon, seed=5)
        state = BeliefState.uniform(3)
        lam = state.log_ratio.copy()
        for i in range(horizon):
            obs = [int(blocks[k][i]) for k in range(3)]
            state = step(state, net, agents, obs)
            llr = np.array(
                [
                    math.log(agents[k].inference_model.row(obs[k])[0])
                    - math.log(agents[k].inference_model.row(obs[k])[1])
                    for k in range(3)
                ]
            )
            lam = log_ratio_recursion(lam, llr, net.combination)
            assert np.max(np.abs(state.log_ratio - lam)) < 1e-9


class TestStep:
    def test_uninformative_models_freeze_state(self):
        # no update from evidence, and combining identical priors is a no-op
        rng = np.random.default_rng(1)
        net = random_network(rng, 4)
        third = 1.0 / 3.0
        m = make_model([third] * 3, [third] * 3)
        agents = agents_for(net, [m] * 4)
        state = BeliefState.from_belief_theta1([0.3, 0.3, 0.3, 0.3])
        new = step(state, net, agents, [0, 1, 2, 0])
        assert np.allclose(new.log_ratio, state.log_ratio, atol=1e-12)

    def test_single_agent_drift_matches_kl(self):
        # lone agent with a self-loop: E[log-ratio increment] = D(row1 || row2)
        net = make_network(np.array([[1.0]]), 0)
        m = bsc_model(0.9)
        agents = (AgentConfig(role=Role.NORMAL, true_model=m),)
        traj = run(net, agents, Hypothesis.THETA1, horizon=20000, seed=3)
        mean_inc = float(traj.final_log_ratio[0]) / 20000.0
        expected = 0.8 * math.log(9.0)
        assert mean_inc == pytest.approx(expected, abs=0.05)

    def test_beliefs_stay_in_open_simplex(self):
        rng = np.random.default_rng(8)
        net = random_network(rng, 4, n_malicious=1)
        models = [random_model(rng, 3, floor=0.05) for _ in range(4)]
        forged = {0: unknown_divergence_attack(models[0], 0.01)}
        agents = agents_for(net, models, forged)
        state = BeliefState.uniform(4)
        blocks = _draw_all_symbols(agents, Hypothesis.THETA1, 100, seed=2)
        for i in range(100):
            state = step(state, net, agents, [int(b[i]) for b in blocks])
            beliefs = state.beliefs()
            assert np.all(beliefs > 0.0) and np.all(beliefs < 1.0)


class TestRun:
    def test_no_adversaries_learns_truth(self):
        rng = np.random.default_rng(12)
        net = random_network(rng, 6)
        agents = agents_for(net, [bsc_model(0.8)] * 6)
        traj = run(net, agents, Hypothesis.THETA1, horizon=2000, seed=0)
        assert traj.final_network_average_true_belief() > 0.99

    def test_uninformative_models_keep_initial_beliefs(self):
        rng = np.random.default_rng(13)
        net = random_network(rng, 3)
        agents = agents_for(net, [bsc_model(0.5)] * 3)
        traj = run(net, agents, Hypothesis.THETA2, horizon=50, seed=1)
        assert np.allclose(traj.final_log_ratio, 0.0, atol=1e-12)

    def test_high_centrality_attack_misleads_fast(self):
        # star with a malicious hub: distorted updates dominate by step 100
        net = make_network(uniform_combination(star_adjacency(15, 0), True), 1)
        m = bsc_model(0.8)
        forged = {0: unknown_divergence_attack(m, 5e-3)}
        agents = agents_for(net, [m] * 15, forged)
        traj = run(net, agents, Hypothesis.THETA1, horizon=100, seed=4)
        assert traj.final_network_average_true_belief() < 0.01

    def test_determinism(self):
        rng = np.random.default_rng(14)
        net = random_network(rng, 5, n_malicious=1)
        models = [random_model(rng, 3) for _ in range(5)]
        forged = {0: unknown_divergence_attack(models[0], 1e-2)}
        agents = agents_for(net, models, forged)
        t1 = run(net, agents, Hypothesis.THETA1, horizon=200, seed=9, stride=10)
        t2 = run(net, agents, Hypothesis.THETA1, horizon=200, seed=9, stride=10)
        assert np.array_equal(t1.log_ratio, t2.log_ratio)
        assert np.array_equal(t1.final_log_ratio, t2.final_log_ratio)

    def test_run_finals_matches_run(self):
        rng = np.random.default_rng(15)
        net = random_network(rng, 4)
        agents = agents_for(net, [bsc_model(0.7)] * 4)
        finals = run_finals(net, agents, Hypothesis.THETA1, horizon=150, seeds=[3, 8])
        for col, seed in enumerate((3, 8)):
            traj = run(net, agents, Hypothesis.THETA1, horizon=150, seed=seed)
            assert np.array_equal(finals[:, col], traj.final_log_ratio)

    def test_stride_and_steps(self):
        rng = np.random.default_rng(16)
        net = random_network(rng, 3)
        agents = agents_for(net, [bsc_model(0.7)] * 3)
        traj = run(net, agents, Hypothesis.THETA1, horizon=100, seed=0, stride=30)
        assert list(traj.steps) == [30, 60, 90]
        empty = run(net, agents, Hypothesis.THETA1, horizon=100, seed=0, stride=0)
        assert empty.log_ratio.shape == (0, 3)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(17)
        n = 5
        net = random_network(rng, n, n_malicious=1)
        models = [random_model(rng, 3) for _ in range(n)]
        forged = {0: unknown_divergence_attack(models[0], 1e-2)}
        agents = agents_for(net, models, forged)
        traj = run(net, agents, Hypothesis.THETA1, horizon=80, seed=6)

        perm = np.array([2, 0, 4, 1, 3])  # new index -> old index
        a_p = net.combination[np.ix_(perm, perm)]
        roles_p = tuple(net.roles[k] for k in perm)
        from sociallearn import Network

        net_p = Network(a_p, roles_p)
        agents_p = tuple(agents[k] for k in perm)
        traj_p = run(
            net_p,
            agents_p,
            Hypothesis.THETA1,
            horizon=80,
            seed=6,
            agent_keys=[int(k) for k in perm],
        )
        assert np.array_equal(traj_p.final_log_ratio, traj.final_log_ratio[perm])

    def test_empirical_rate_adversarial(self):
        # star + distorted hub: (1/i) log-ratio growth matches the margin
        from sociallearn import deception_verdict

        net = make_network(uniform_combination(star_adjacency(15, 0), True), 1)
        m = bsc_model(0.9)
        forged = {0: unknown_divergence_attack(m, 5e-3)}
        agents = agents_for(net, [m] * 15, forged)
        report = deception_verdict(net, agents)
        predicted = report.margin1  # theta_true = theta1
        finals = run_finals(net, agents, Hypothesis.THETA1, 5000, seeds=range(20))
        empirical = float(np.mean(-finals / 5000.0))
        assert abs(empirical - predicted) <= 0.05 * abs(predicted)


class TestBeliefState:
    def test_round_trip(self):
        s = BeliefState.from_belief_theta1([0.2, 0.5, 0.9])
        assert s.beliefs()[:, 0] == pytest.approx([0.2, 0.5, 0.9], abs=1e-12)

    def test_rejects_degenerate_initials(self):
        with pytest.raises(ValueError):
            BeliefState.from_belief_theta1([0.0, 0.5])

    def test_network_average_helper(self):
        lam = np.array([[0.0, 100.0], [0.0, -100.0]])
        avg = network_average_true_belief(lam, Hypothesis.THETA1)
        assert avg == pytest.approx([0.5, 0.5], abs=1e-12)
