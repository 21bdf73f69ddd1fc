"""Graph topology, combination matrices, and Perron centrality.

The combination matrix ``A`` is left-stochastic with ``A[l, k]`` the trust
weight agent ``k`` assigns to neighbor ``l`` (columns sum to one). For a
strongly connected topology with at least one self-loop, ``(A^T)^i``
converges to ``1 u^T`` where ``u`` is the positive, sum-one Perron vector;
``u[k]`` measures agent ``k``'s long-run influence (centrality).

Topology builders return boolean adjacency matrices without self-loops;
``uniform_combination`` turns adjacency + a self-loop mask into the
uniform-trust combination matrix used throughout the experiments.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import IsolatedAgentError, NoConvergenceError

COLUMN_SUM_TOL = 1e-9
PERRON_RESIDUAL_TOL = 1e-10
_POWER_ITER_TOL = 1e-13
_POWER_ITER_CAP = 10**6


class Role(enum.Enum):
    NORMAL = "normal"
    MALICIOUS = "malicious"


@dataclass(frozen=True, eq=False)
class Network:
    """Combination matrix plus per-agent roles.

    By convention the builders list malicious agents first; nothing in the
    analysis depends on the ordering, only on the role tags.
    """

    combination: np.ndarray
    roles: tuple[Role, ...]

    def __post_init__(self):
        a = np.asarray(self.combination, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"combination matrix must be square, got {a.shape}")
        if a.shape[0] != len(self.roles):
            raise ValueError("roles length must match matrix size")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "combination", a)

    @property
    def n_agents(self) -> int:
        return self.combination.shape[0]

    @property
    def malicious_indices(self) -> tuple[int, ...]:
        return tuple(k for k, r in enumerate(self.roles) if r is Role.MALICIOUS)

    @property
    def normal_indices(self) -> tuple[int, ...]:
        return tuple(k for k, r in enumerate(self.roles) if r is Role.NORMAL)


@dataclass(frozen=True)
class Violation:
    """One validation failure; ``code`` is stable, ``detail`` is for humans."""

    code: str
    detail: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True, eq=False)
class PerronVector:
    """Positive, sum-one fixed vector of the combination matrix."""

    u: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.u, dtype=float).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "u", arr)

    def __getitem__(self, k: int) -> float:
        return float(self.u[k])

    def as_array(self) -> np.ndarray:
        return self.u


# --- adjacency builders -------------------------------------------------------

def complete_adjacency(n: int) -> np.ndarray:
    adj = np.ones((n, n), dtype=bool)
    np.fill_diagonal(adj, False)
    return adj


def star_adjacency(n: int, hub: int = 0) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    adj[hub, :] = True
    adj[:, hub] = True
    adj[hub, hub] = False
    return adj


def ring_adjacency(n: int) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    for k in range(n):
        adj[k, (k + 1) % n] = adj[(k + 1) % n, k] = True
    return adj


def path_adjacency(n: int) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    for k in range(n - 1):
        adj[k, k + 1] = adj[k + 1, k] = True
    return adj


def edge_list_adjacency(n: int, edges: Sequence[tuple[int, int]]) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        if i == j:
            continue  # self-loops come from the self-loop mask, not edges
        adj[i, j] = adj[j, i] = True
    return adj


def erdos_renyi_adjacency(
    n: int,
    edge_prob: float,
    seed: int,
    require_connected: bool = True,
    max_tries: int = 1000,
) -> np.ndarray:
    """Seeded Erdos-Renyi topology, rejected until connected.

    With self-loops on every agent (the builders' default) connectivity of
    the undirected graph is exactly strong connectivity of the combination
    matrix, so rejection here guarantees a valid network.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        adj = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < edge_prob:
                    adj[i, j] = adj[j, i] = True
        if not require_connected or _connected(adj):
            return adj
    raise NoConvergenceError(
        f"no connected Erdos-Renyi draw in {max_tries} tries (p={edge_prob})"
    )


def _connected(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(adj[v]):
            if not seen[w]:
                seen[w] = True
                stack.append(int(w))
    return bool(seen.all())


# --- combination matrices -------------------------------------------------------

def uniform_combination(
    adjacency: np.ndarray, self_loops: np.ndarray | bool = True
) -> np.ndarray:
    """Uniform trust weights: column k puts 1/deg(k) on each in-neighbor.

    ``self_loops`` is a per-agent boolean mask (or a scalar applied to all);
    a flagged agent includes itself in its own neighborhood.
    """
    adj = np.asarray(adjacency, dtype=bool)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError(f"adjacency must be square, got {adj.shape}")
    if not np.array_equal(adj, adj.T):
        raise ValueError("adjacency must be symmetric (undirected links)")
    n = adj.shape[0]
    loops = np.broadcast_to(np.asarray(self_loops, dtype=bool), (n,))
    a = np.zeros((n, n), dtype=float)
    for k in range(n):
        nbrs = list(np.flatnonzero(adj[:, k]))
        if loops[k] and k not in nbrs:
            nbrs.append(k)
        if not nbrs:
            raise IsolatedAgentError(f"agent {k} has no neighbors and no self-loop")
        a[np.asarray(sorted(nbrs)), k] = 1.0 / len(nbrs)
    return a


def trust_weighted_complete(
    n_agents: int, n_malicious: int, trust_weight: float
) -> np.ndarray:
    """One-parameter complete-graph family whose adversary centrality sweeps (0, 1).

    Every agent assigns weight ``trust_weight`` to each malicious agent
    (indices 0..n_malicious-1) and splits the remainder uniformly over the
    normal agents (self included). Aggregate malicious centrality increases
    continuously from ~0 to ~1 as ``trust_weight`` goes from 0 to
    1/n_malicious, which makes this the documented builder for
    centrality-parameterized sweeps and root finding.
    """
    if not 0 < n_malicious < n_agents:
        raise ValueError("need 0 < n_malicious < n_agents")
    if not 0.0 < trust_weight < 1.0 / n_malicious:
        raise ValueError(f"trust_weight must lie in (0, 1/{n_malicious})")
    n_normal = n_agents - n_malicious
    a = np.zeros((n_agents, n_agents), dtype=float)
    a[:n_malicious, :] = trust_weight
    a[n_malicious:, :] = (1.0 - n_malicious * trust_weight) / n_normal
    return a


def make_network(combination: np.ndarray, n_malicious: int) -> Network:
    """Wrap a combination matrix with the malicious-first role convention."""
    n = np.asarray(combination).shape[0]
    roles = tuple(
        Role.MALICIOUS if k < n_malicious else Role.NORMAL for k in range(n)
    )
    return Network(np.asarray(combination, dtype=float), roles)


# --- validation -----------------------------------------------------------------

def validate_network(net: Network) -> list[Violation]:
    """Check every structural invariant; an empty list means valid.

    Violations are data, not exceptions: callers (and the CLI) report all
    of them at once.
    """
    out: list[Violation] = []
    a = net.combination
    n = net.n_agents

    if np.any(a < -1e-15) or np.any(a > 1.0 + 1e-12):
        out.append(Violation("EntryOutOfRange", "weights must lie in [0, 1]"))
    sums = a.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > COLUMN_SUM_TOL)
    for k in bad[:8]:
        out.append(
            Violation("NotLeftStochastic", f"column {k} sums to {sums[k]!r}")
        )
    if not np.any(np.diag(a) > 0.0):
        out.append(Violation("NoSelfLoop", "no agent trusts itself (a_kk > 0)"))
    # strong connectivity via reachability sweeps on the directed support
    support = a > 0.0
    if not (_reaches_all(support) and _reaches_all(support.T)):
        out.append(
            Violation("NotStronglyConnected", "some agent pair has no positive path")
        )
    if all(r is Role.MALICIOUS for r in net.roles):
        out.append(Violation("NoNormalAgent", "at least one normal agent required"))
    if n != len(net.roles):
        out.append(Violation("RoleLengthMismatch", "roles do not match matrix size"))
    return out


def _reaches_all(support: np.ndarray) -> bool:
    n = support.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for w in np.flatnonzero(support[:, v]):
            if not seen[w]:
                seen[w] = True
                stack.append(int(w))
    return bool(seen.all())


# --- Perron centrality ------------------------------------------------------------

def perron_vector(net: Network) -> PerronVector:
    """Positive fixed vector of A (eigenvalue 1), normalized to sum one.

    Power iteration mirrors the limit construction directly: iterate
    ``u <- A u`` from the uniform vector until successive iterates differ
    by < 1e-13 in max-norm.
    """
    a = net.combination
    n = net.n_agents
    u = np.full(n, 1.0 / n)
    for _ in range(_POWER_ITER_CAP):
        v = a @ u
        v = v / v.sum()
        if float(np.max(np.abs(v - u))) < _POWER_ITER_TOL:
            return PerronVector(v)
        u = v
    raise NoConvergenceError("power iteration did not converge (periodic structure?)")


def adversary_centrality(u: PerronVector | np.ndarray, roles: Sequence[Role]) -> float:
    """Aggregate centrality of the malicious agents, sum of their u entries."""
    arr = u.as_array() if isinstance(u, PerronVector) else np.asarray(u, dtype=float)
    if len(arr) != len(roles):
        raise ValueError("centrality vector and roles must have equal length")
    return float(sum(arr[k] for k, r in enumerate(roles) if r is Role.MALICIOUS))
