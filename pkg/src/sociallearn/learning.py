"""The social-learning dynamical system.

Each synchronous round, every agent (i) performs a Bayesian *adapt* step on
its private observation and (ii) *combines* neighbors' intermediate beliefs
by a weighted geometric mean. Malicious agents run the identical arithmetic
but plug a forged likelihood model into the adapt step; their observations
are still drawn from their true model (only the inference model is faked,
never the data).

Two equivalent representations are implemented:

  * belief domain -- ``adapt``/``combine``/``step`` operate on (mu(theta1),
    mu(theta2)) pairs; readable, but underflows on long horizons because
    beliefs decay exponentially;
  * log domain -- the exact linear recursion
    ``lam_i = A^T (llr_i + lam_{i-1})`` on the per-agent log-belief ratio
    ``lam = ln(mu(theta1)/mu(theta2))``. This is the authoritative
    representation; beliefs are a view through the logistic map.

Sampling is reproducible: agent ``k`` of a run draws from
``default_rng((seed, agent_key[k]))``, so permuting agents together with
their keys permutes trajectories identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ZeroLikelihoodError
from .network import Network, Role
from .probability import Hypothesis, LikelihoodModel

__all__ = [
    "AgentConfig",
    "BeliefState",
    "Trajectory",
    "adapt",
    "combine",
    "step",
    "log_ratio_recursion",
    "run",
    "run_finals",
]


@dataclass(frozen=True)
class AgentConfig:
    """Role, true observation model, and (for malicious agents) forged model."""

    role: Role
    true_model: LikelihoodModel
    forged_model: LikelihoodModel | None = None

    def __post_init__(self):
        if self.role is Role.MALICIOUS and self.forged_model is not None:
            if self.forged_model.alphabet_size != self.true_model.alphabet_size:
                raise ValueError("forged model must share the true model's alphabet")

    @property
    def inference_model(self) -> LikelihoodModel:
        """Model actually used in the adapt step (forged one for adversaries)."""
        if self.role is Role.MALICIOUS and self.forged_model is not None:
            return self.forged_model
        return self.true_model


@dataclass(frozen=True, eq=False)
class BeliefState:
    """Per-agent beliefs stored as log ratios lam_k = ln(mu_k(theta1)/mu_k(theta2))."""

    log_ratio: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.log_ratio, dtype=float).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "log_ratio", arr)

    @staticmethod
    def uniform(n_agents: int) -> "BeliefState":
        return BeliefState(np.zeros(n_agents))

    @staticmethod
    def from_belief_theta1(beliefs: Sequence[float]) -> "BeliefState":
        b = np.asarray(beliefs, dtype=float)
        if np.any(b <= 0.0) or np.any(b >= 1.0):
            raise ValueError("initial beliefs must lie strictly inside (0, 1)")
        return BeliefState(np.log(b) - np.log1p(-b))

    def beliefs(self) -> np.ndarray:
        """(n, 2) array of (mu(theta1), mu(theta2)) pairs.

        Both components are evaluated as logistic values of +/- lam so each
        keeps full relative precision even when one is vanishingly small.
        """
        return np.column_stack([_sigmoid(self.log_ratio), _sigmoid(-self.log_ratio)])

    def belief_in(self, theta: Hypothesis) -> np.ndarray:
        sign = 1.0 if theta is Hypothesis.THETA1 else -1.0
        return _sigmoid(sign * self.log_ratio)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=float)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


# --- belief-domain operations ---------------------------------------------------

def adapt(prior: Sequence[float], likelihood_row: Sequence[float]) -> np.ndarray:
    """Bayesian update of a 2-state belief pair with one likelihood row.

    ``likelihood_row`` holds the likelihood of the realized symbol under
    (theta1, theta2); malicious agents pass their forged row, normal agents
    the true one -- the arithmetic is identical.
    """
    prior = np.asarray(prior, dtype=float)
    row = np.asarray(likelihood_row, dtype=float)
    unnorm = row * prior
    z = unnorm.sum()
    if z == 0.0:
        raise ZeroLikelihoodError(
            "likelihood row is zero under both hypotheses for the realized symbol"
        )
    return unnorm / z


def combine(neighbor_psis: Sequence[Sequence[float]], weights: Sequence[float]) -> np.ndarray:
    """Weighted geometric-mean fusion of neighbors' intermediate beliefs.

    Computed in the log domain: ln mu(theta) = sum_l w_l ln psi_l(theta),
    then normalized.
    """
    psis = np.asarray(neighbor_psis, dtype=float)
    w = np.asarray(weights, dtype=float)
    log_mu = w @ np.log(psis)
    log_mu -= log_mu.max()
    mu = np.exp(log_mu)
    return mu / mu.sum()


def step(
    state: BeliefState,
    net: Network,
    agents: Sequence[AgentConfig],
    observations: Sequence[int],
) -> BeliefState:
    """One synchronous round in the belief domain: all adapt, then all combine.

    Observations must have been drawn from each agent's *true* model under
    the true state; this function only consumes them.
    """
    pairs = state.beliefs()
    psis = np.empty_like(pairs)
    for k, (agent, symbol) in enumerate(zip(agents, observations)):
        psis[k] = adapt(pairs[k], agent.inference_model.row(int(symbol)))
    a = net.combination
    new_pairs = np.empty_like(pairs)
    for k in range(net.n_agents):
        nbrs = np.flatnonzero(a[:, k] > 0.0)
        new_pairs[k] = combine(psis[nbrs], a[nbrs, k])
    return BeliefState(np.log(new_pairs[:, 0]) - np.log(new_pairs[:, 1]))


# --- log-domain recursion ---------------------------------------------------------

def log_ratio_recursion(
    lam_prev: np.ndarray, loglik_ratios: np.ndarray, combination: np.ndarray
) -> np.ndarray:
    """Exact linear update lam_i = A^T (llr_i + lam_{i-1}).

    ``loglik_ratios[k]`` is ln of agent k's inference-model likelihood ratio
    (theta1 over theta2) at its realized symbol. Stacks of state columns are
    supported: shapes (n,) or (n, m).
    """
    lam_prev = np.asarray(lam_prev, dtype=float)
    llr = np.asarray(loglik_ratios, dtype=float)
    return np.asarray(combination).T @ (lam_prev + llr)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Strided record of one run plus its exact final state.

    ``steps[r]`` is the time index of record ``r``; ``log_ratio[r, k]`` the
    log-belief ratio ln(mu(theta1)/mu(theta2)) of agent ``k`` then. The final
    state is stored separately so striding never loses the endpoint.
    """

    theta_true: Hypothesis
    seed: int
    horizon: int
    steps: np.ndarray
    log_ratio: np.ndarray
    final_log_ratio: np.ndarray

    def belief_theta1(self) -> np.ndarray:
        return _sigmoid(self.log_ratio)

    def network_average_true_belief(self) -> np.ndarray:
        """Average over agents of the belief in the true state, per record."""
        sign = 1.0 if self.theta_true is Hypothesis.THETA1 else -1.0
        return _sigmoid(sign * self.log_ratio).mean(axis=1)

    def final_network_average_true_belief(self) -> float:
        sign = 1.0 if self.theta_true is Hypothesis.THETA1 else -1.0
        return float(_sigmoid(sign * self.final_log_ratio).mean())

    def empirical_rate(self) -> np.ndarray:
        """Per-agent (1/horizon) * ln(mu(theta_wrong)/mu(theta_true)) at the end."""
        sign = -1.0 if self.theta_true is Hypothesis.THETA1 else 1.0
        return sign * self.final_log_ratio / float(self.horizon)


def _llr_tables(agents: Sequence[AgentConfig]) -> list[np.ndarray]:
    """Per-agent lookup: symbol -> ln(inference(theta1)/inference(theta2))."""
    tables = []
    for agent in agents:
        m = agent.inference_model
        t1 = m.given_theta1.as_array()
        t2 = m.given_theta2.as_array()
        with np.errstate(divide="ignore"):
            tables.append(np.log(t1) - np.log(t2))
    return tables


def _draw_all_symbols(
    agents: Sequence[AgentConfig],
    theta_true: Hypothesis,
    horizon: int,
    seed: int,
    agent_keys: Sequence[int] | None = None,
) -> list[np.ndarray]:
    """Observation block per agent: i.i.d. draws from its TRUE model under theta_true."""
    keys = range(len(agents)) if agent_keys is None else agent_keys
    blocks = []
    for agent, key in zip(agents, keys):
        pmf = agent.true_model.given(theta_true)
        rng = np.random.default_rng((int(seed), int(key)))
        cum = np.cumsum(pmf.as_array())
        idx = np.searchsorted(cum, rng.random(horizon), side="right")
        blocks.append(np.minimum(idx, pmf.alphabet_size - 1))
    return blocks


def run(
    net: Network,
    agents: Sequence[AgentConfig],
    theta_true: Hypothesis,
    horizon: int,
    seed: int,
    stride: int = 1,
    initial_belief_theta1: Sequence[float] | float = 0.5,
    agent_keys: Sequence[int] | None = None,
) -> Trajectory:
    """Simulate one seeded run in the log domain and record a strided trajectory.

    ``stride = 0`` records nothing (summary only); otherwise records land at
    steps stride, 2*stride, ... <= horizon. Initial beliefs default to
    uniform and must be strictly inside (0, 1).
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    n = net.n_agents
    if len(agents) != n:
        raise ValueError("agents list must match the network size")
    init = np.broadcast_to(np.asarray(initial_belief_theta1, dtype=float), (n,))
    lam = BeliefState.from_belief_theta1(init).log_ratio.copy()

    tables = _llr_tables(agents)
    blocks = _draw_all_symbols(agents, theta_true, horizon, seed, agent_keys)
    llr = np.column_stack([tab[blk] for tab, blk in zip(tables, blocks)])
    if not np.all(np.isfinite(llr)):
        raise ZeroLikelihoodError(
            "an inference model assigns zero likelihood to a realized symbol"
        )

    at = net.combination.T
    record_steps = [] if stride <= 0 else list(range(stride, horizon + 1, stride))
    records = np.empty((len(record_steps), n))
    r = 0
    for i in range(1, horizon + 1):
        lam = at @ (lam + llr[i - 1])
        if r < len(record_steps) and i == record_steps[r]:
            records[r] = lam
            r += 1
    return Trajectory(
        theta_true=theta_true,
        seed=int(seed),
        horizon=int(horizon),
        steps=np.asarray(record_steps, dtype=int),
        log_ratio=records,
        final_log_ratio=lam,
    )


def run_finals(
    net: Network,
    agents: Sequence[AgentConfig],
    theta_true: Hypothesis,
    horizon: int,
    seeds: Sequence[int],
    initial_belief_theta1: Sequence[float] | float = 0.5,
) -> np.ndarray:
    """Final log-ratio matrix (n_agents, n_seeds) for a batch of seeds.

    Column ``s`` is bit-identical to ``run(..., seed=seeds[s]).final_log_ratio``
    because each seed replays the exact single-run recursion (records off).
    """
    finals = [
        run(
            net,
            agents,
            theta_true,
            horizon=horizon,
            seed=seed,
            stride=0,
            initial_belief_theta1=initial_belief_theta1,
        ).final_log_ratio
        for seed in seeds
    ]
    return np.column_stack(finals)


def network_average_true_belief(
    lam: np.ndarray, theta_true: Hypothesis
) -> np.ndarray | float:
    """Agent-average belief in the true state from log ratios (vector or matrix)."""
    b1 = _sigmoid(np.asarray(lam, dtype=float))
    b = b1 if theta_true is Hypothesis.THETA1 else 1.0 - b1
    return b.mean(axis=0) if b.ndim > 1 else float(b.mean())
