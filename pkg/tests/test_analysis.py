"""Closed-form predictions: divergences, contributions, verdicts, roots."""

import math

import numpy as np
import pytest

from sociallearn import (
    Hypothesis,
    Verdict,
    adversary_contribution,
    asymptotic_rate,
    bsc_model,
    critical_parameter,
    deception_verdict,
    erdos_renyi_adjacency,
    homogeneous_centrality_margin,
    kl_divergence,
    make_model,
    make_network,
    multi_adversary_known,
    normal_divergence,
    perron_vector,
    run_finals,
    star_adjacency,
    uniform_combination,
    unknown_divergence_attack,
)
from sociallearn.attacks import AttackPlan, AttackPlanEntry
from sociallearn.errors import NoSignChangeError
from sociallearn.learning import network_average_true_belief
from sociallearn.network import adversary_centrality

from helpers import agents_for, random_model, random_network, random_uninformative_model

BSC08_KL = 0.8317766166719344  # 0.6 ln 4
NONSEP = make_model([0.8, 0.2], [0.55, 0.45])


def er_network(n, edge_prob, seed, n_malicious):
    adj = erdos_renyi_adjacency(n, edge_prob, seed)
    return make_network(uniform_combination(adj, True), n_malicious)


def plan_for(models, strategy, eps, net=None, **kw):
    if strategy == "unknown":
        entries = tuple(
            AttackPlanEntry(unknown_divergence_attack(m, eps), "unknown_divergences", eps)
            for m in models
        )
        return AttackPlan(entries, "unknown_divergences", eps)
    raise ValueError(strategy)


class TestNormalDivergence:
    def test_two_agent_doubly_stochastic(self):
        net = make_network(np.full((2, 2), 0.5), 0)
        agents = agents_for(net, [bsc_model(0.8)] * 2)
        assert normal_divergence(net, agents, 1) == pytest.approx(BSC08_KL, abs=1e-12)
        assert normal_divergence(net, agents, 2) == pytest.approx(BSC08_KL, abs=1e-12)

    def test_uninformative_normal_agent_contributes_zero(self):
        net = make_network(np.full((3, 3), 1.0 / 3.0), 2)
        agents = agents_for(net, [bsc_model(0.9), bsc_model(0.9), bsc_model(0.5)])
        assert normal_divergence(net, agents, 1) == pytest.approx(0.0, abs=1e-15)

    def test_linear_in_normal_centrality(self):
        net = er_network(15, 0.25, 28, 4)
        agents = agents_for(net, [bsc_model(0.8)] * 15)
        u = perron_vector(net)
        normal_mass = 1.0 - adversary_centrality(u, net.roles)
        assert normal_divergence(net, agents, 1) == pytest.approx(
            normal_mass * BSC08_KL, abs=1e-12
        )


class TestAdversaryContribution:
    def test_uninformative_true_model_antisymmetry(self):
        rng = np.random.default_rng(2)
        m = random_uninformative_model(rng, 4)
        forged = random_model(rng, 4)
        r1 = adversary_contribution(0.3, m, forged, 1)
        r2 = adversary_contribution(0.3, m, forged, 2)
        assert r1 == pytest.approx(-r2, abs=1e-12)

    def test_identical_forged_columns_zero(self):
        m = bsc_model(0.8)
        flat = make_model([0.6, 0.4], [0.6, 0.4])
        assert adversary_contribution(0.4, m, flat, 1) == 0.0
        assert adversary_contribution(0.4, m, flat, 2) == 0.0

    def test_reference_value(self):
        # u = 1/4, optimal forged pair at eps = 1e-3: 0.25 * 0.8 * ln(999)
        m = bsc_model(0.9)
        forged = unknown_divergence_attack(m, 1e-3)
        expected = 0.2 * math.log(999.0)
        assert expected == pytest.approx(1.3813509557297107, abs=1e-13)
        assert adversary_contribution(0.25, m, forged, 1) == pytest.approx(
            expected, abs=1e-12
        )


class TestDeceptionVerdict:
    def test_no_adversaries_learns_truth(self):
        rng = np.random.default_rng(3)
        net = random_network(rng, 5)
        agents = agents_for(net, [bsc_model(0.7)] * 5)
        report = deception_verdict(net, agents)
        assert report.verdict1 is Verdict.LEARNS_TRUTH
        assert report.verdict2 is Verdict.LEARNS_TRUTH
        assert report.margin1 == pytest.approx(-report.s1)

    def test_nonseparable_unknown_attack_misleads_one_state(self):
        net = er_network(15, 0.25, 28, 4)
        models = [NONSEP] * 15
        plan = plan_for([NONSEP] * 4, "unknown", 1e-5)
        agents = agents_for(net, models)
        report = deception_verdict(net, agents, plan)
        verdicts = (report.verdict1, report.verdict2)
        assert verdicts.count(Verdict.MISLED) == 1
        assert verdicts.count(Verdict.LEARNS_TRUTH) == 1

    def test_nonseparable_known_attack_misleads_both(self):
        net = er_network(15, 0.25, 28, 4)
        u = perron_vector(net)
        agents = agents_for(net, [NONSEP] * 15)
        s1 = normal_divergence(net, agents, 1, u)
        s2 = normal_divergence(net, agents, 2, u)
        plan = multi_adversary_known(
            [NONSEP] * 4, [u[k] for k in range(4)], s1, s2, 1e-5,
            aggregate_centrality=True,
        )
        report = deception_verdict(net, agents, plan)
        assert report.verdict1 is Verdict.MISLED
        assert report.verdict2 is Verdict.MISLED

    def test_cost_margin_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            net = random_network(rng, int(rng.integers(3, 8)), n_malicious=1)
            models = [random_model(rng, 3) for _ in range(net.n_agents)]
            plan = plan_for([models[0]], "unknown", 1e-3)
            try:
                report = deception_verdict(net, agents_for(net, models), plan)
            except Exception:
                continue
            assert report.cost1 == pytest.approx(-report.margin1, abs=1e-12)
            assert report.cost2 == pytest.approx(-report.margin2, abs=1e-12)

    def test_symbol_relabeling_invariance(self):
        rng = np.random.default_rng(9)
        net = random_network(rng, 4, n_malicious=1)
        base = random_model(rng, 4)
        models = [base] * 4
        plan = plan_for([base], "unknown", 1e-3)
        report = deception_verdict(net, agents_for(net, models), plan)

        perm = [2, 0, 3, 1]

        def permute(m):
            return make_model(
                [m.given_theta1[s] for s in perm], [m.given_theta2[s] for s in perm]
            )

        models_p = [permute(m) for m in models]
        plan_p = AttackPlan(
            (AttackPlanEntry(permute(plan.entries[0].forged), "unknown_divergences", 1e-3),),
            "unknown_divergences",
            1e-3,
        )
        report_p = deception_verdict(net, agents_for(net, models_p), plan_p)
        assert report_p.s1 == pytest.approx(report.s1, abs=1e-12)
        assert report_p.s2 == pytest.approx(report.s2, abs=1e-12)
        assert report_p.margin1 == pytest.approx(report.margin1, abs=1e-12)
        assert report_p.verdict2 is report.verdict2

    def test_verdict_simulation_agreement(self):
        # decisive closed-form margins must match Monte Carlo majorities
        rng = np.random.default_rng(40)
        agree = 0
        total = 0
        while total < 50:
            n = int(rng.integers(4, 9))
            n_mal = int(rng.integers(1, max(2, n // 3) + 1))
            net = random_network(rng, n, n_malicious=n_mal)
            shared = random_model(rng, int(rng.integers(2, 5)), floor=0.05)
            models = [shared] * n
            try:
                plan = plan_for([shared] * n_mal, "unknown", 5e-3)
            except Exception:
                continue
            agents = agents_for(net, models)
            report = deception_verdict(net, agents, plan)
            if abs(report.margin1) <= 0.05:
                continue
            total += 1
            forged = {k: plan.entries[i].forged for i, k in enumerate(range(n_mal))}
            agents_run = agents_for(net, models, forged)
            lam = run_finals(net, agents_run, Hypothesis.THETA1, 5000, seeds=range(10))
            finals = network_average_true_belief(lam, Hypothesis.THETA1)
            majority_true = float(np.mean(np.asarray(finals) > 0.5)) > 0.5
            predicted_true = report.verdict1 is Verdict.LEARNS_TRUTH
            if majority_true == predicted_true:
                agree += 1
        assert agree >= 48


class TestAsymptoticRate:
    def test_no_adversaries_bsc08(self):
        rng = np.random.default_rng(11)
        net = random_network(rng, 5)
        agents = agents_for(net, [bsc_model(0.8)] * 5)
        rate = asymptotic_rate(net, agents, None, Hypothesis.THETA1)
        assert rate == pytest.approx(-BSC08_KL, abs=1e-12)

    def test_sign_matches_verdict(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            net = random_network(rng, 5, n_malicious=1)
            models = [random_model(rng, 3) for _ in range(5)]
            plan = plan_for([models[0]], "unknown", 1e-3)
            agents = agents_for(net, models)
            report = deception_verdict(net, agents, plan)
            rate = asymptotic_rate(net, agents, plan, Hypothesis.THETA1)
            if report.verdict1 is Verdict.MISLED:
                assert rate > 0
            elif report.verdict1 is Verdict.LEARNS_TRUTH:
                assert rate < 0

    def test_adversarial_star_positive_rate(self):
        net = make_network(uniform_combination(star_adjacency(15, 0), True), 1)
        m = bsc_model(0.9)
        plan = plan_for([m], "unknown", 5e-3)
        agents = agents_for(net, [m] * 15)
        report = deception_verdict(net, agents, plan)
        rate = asymptotic_rate(net, agents, plan, Hypothesis.THETA1)
        assert report.verdict1 is Verdict.MISLED and rate > 0


class TestCriticalParameter:
    def test_centrality_root_closed_form(self):
        # margin(U) = U r - (1-U) kl crosses zero at kl / (kl + r)
        m = bsc_model(0.9)
        forged = unknown_divergence_attack(m, 5e-3)
        margin = homogeneous_centrality_margin(m, forged, 1)
        kl = kl_divergence(m.given_theta1, m.given_theta2)
        r_unit = adversary_contribution(1.0, m, forged, 1)
        expected = kl / (kl + r_unit)
        root = critical_parameter(margin, (0.01, 0.99))
        assert root == pytest.approx(expected, abs=1e-9)
        assert margin(0.01) < 0  # tiny adversary mass cannot win

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            critical_parameter(lambda x: 1.0 + x * x, (0.0, 1.0))

    def test_margin_at_zero_centrality(self):
        m = bsc_model(0.8)
        forged = unknown_divergence_attack(m, 1e-3)
        margin = homogeneous_centrality_margin(m, forged, 1)
        assert margin(1e-12) == pytest.approx(-BSC08_KL, abs=1e-9)
