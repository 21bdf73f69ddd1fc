"""Shared generators for randomized property tests (seeded, no hypothesis dep)."""

from __future__ import annotations

import numpy as np

from sociallearn import (
    AgentConfig,
    LikelihoodModel,
    erdos_renyi_adjacency,
    is_informative,
    make_network,
    make_pmf,
    uniform_combination,
)


def random_pmf(rng: np.random.Generator, n: int, floor: float = 0.0):
    w = rng.dirichlet(np.ones(n))
    if floor > 0.0:
        w = floor + (1.0 - n * floor) * w
    return make_pmf(w)


def random_model(
    rng: np.random.Generator,
    n: int,
    floor: float = 0.02,
    min_gap: float = 1e-3,
) -> LikelihoodModel:
    """Random informative model with all entries bounded away from zero."""
    while True:
        m = LikelihoodModel(random_pmf(rng, n, floor), random_pmf(rng, n, floor))
        gap = np.max(
            np.abs(m.given_theta1.as_array() - m.given_theta2.as_array())
        )
        if is_informative(m) and gap >= min_gap:
            return m


def random_uninformative_model(rng: np.random.Generator, n: int) -> LikelihoodModel:
    p = random_pmf(rng, n, floor=0.01)
    return LikelihoodModel(p, p)


def random_network(rng: np.random.Generator, n: int, n_malicious: int = 0):
    """Connected seeded ER network with uniform weights and self-loops."""
    seed = int(rng.integers(0, 2**31 - 1))
    adj = erdos_renyi_adjacency(n, 0.5, seed)
    return make_network(uniform_combination(adj, True), n_malicious)


def agents_for(net, models, forged=None) -> tuple[AgentConfig, ...]:
    forged = forged or {}
    return tuple(
        AgentConfig(role=net.roles[k], true_model=models[k], forged_model=forged.get(k))
        for k in range(net.n_agents)
    )
