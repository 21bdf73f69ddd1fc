"""Constructive adversarial likelihood strategies and their oracles.

Two constructions are implemented, plus a random baseline:

**Known-divergence construction.** Given the normal sub-network divergences
(s1, s2), the adversary's centrality u, and a support pair of symbols, the
deception conditions become linear in the transformed coordinates
``x1 = ln(p1/(alpha - p2))``, ``x2 = ln((alpha - p1)/p2)``. The admissible
set is an open wedge bounded by two negative-slope lines meeting at

    x1' = n2 / (u d),    x2' = -n1 / (u d)

with ``n_j = L(z_j|theta2) s1 + L(z_j|theta1) s2`` and
``d = L(z2|theta2) L(z1|theta1) - L(z2|theta1) L(z1|theta2)``. Any wedge
point yields forged PMFs that mislead the network for *both* candidate true
states. The epsilon floor on forged masses further restricts (x1, x2) to a
region that is strictly smaller than the naive box |x| <= ln((alpha-eps)/eps);
for a fixed x1 the four floor constraints are linear in e^{x2}, so the
feasible x2 interval is computed exactly in the log domain. The constructor
scans candidate support pairs by decreasing |d| and picks the midpoint of
the largest floor-feasible slice; if no pair admits a floor-feasible point
(possible: the wedge may only intersect the box near its edges where the
floor fails), it falls back to the classical wedge-midpoint choice, which
still satisfies both deception inequalities but may place a forged mass
below the floor -- flagged on the returned entry.

**Unknown-divergence construction.** Without network knowledge the
adversary minimizes the expected-cost objective assuming equally likely
states; the minimizer floors every symbol of the confidence-aligned set and
distributes the remaining mass proportionally to the confidence gap
``z(s) = L(s|theta1) - L(s|theta2)``. A dense-grid-plus-refinement oracle
(`oracle_optimal_attack`) independently verifies optimality for small
alphabets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AllUninformativeError,
    DegeneratePairError,
    EmptyRegionError,
    EpsilonTooLargeError,
    FloorViolationError,
    OutOfRangeError,
    UninformativeModelError,
)
from .probability import LikelihoodModel, Pmf, make_pmf, is_informative

__all__ = [
    "ConfidencePartition",
    "SeparabilityReport",
    "DistortionRegion",
    "AttackPlanEntry",
    "AttackPlan",
    "confidence_partition",
    "separability",
    "unknown_divergence_attack",
    "unknown_divergence_objective",
    "oracle_optimal_attack",
    "select_support_pair",
    "distortion_region",
    "known_divergence_attack",
    "multi_adversary_known",
    "one_variable_feasibility",
    "random_attack",
]

_STRICT_MARGIN = 1e-9
_GRID_POINTS = 768


# =============================================================================
# Confidence partition and separability
# =============================================================================

@dataclass(frozen=True, eq=False)
class ConfidencePartition:
    """Split of the alphabet by the sign of z(s) = L(s|theta1) - L(s|theta2).

    ``d1`` holds symbols more (or equally) likely under theta1, ``d2`` the
    strictly-theta2-leaning rest. Ties (z = 0) go to ``d1``.
    """

    z: np.ndarray
    d1: tuple[int, ...]
    d2: tuple[int, ...]

    def __post_init__(self):
        arr = np.asarray(self.z, dtype=float).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "z", arr)


def confidence_partition(model: LikelihoodModel) -> ConfidencePartition:
    z = model.given_theta1.as_array() - model.given_theta2.as_array()
    d1 = tuple(int(s) for s in np.flatnonzero(z >= 0.0))
    d2 = tuple(int(s) for s in np.flatnonzero(z < 0.0))
    return ConfidencePartition(z=z, d1=d1, d2=d2)


@dataclass(frozen=True)
class SeparabilityReport:
    """Masses and log-weighted constants of the confidence partition.

    ``xi_j`` / ``sigma_j`` are the masses of d1 / d2 under theta_j. The
    observations are separable when d1 carries the majority of mass under
    theta1 and the minority under theta2, which is exactly the condition
    under which the unknown-divergence attack deceives for both states at
    small epsilon.
    """

    xi1: float
    xi2: float
    sigma1: float
    sigma2: float
    c1: float
    c2: float
    b1: float
    b2: float
    separable: bool


def separability(model: LikelihoodModel) -> SeparabilityReport:
    if not is_informative(model):
        raise UninformativeModelError("separability needs an informative model")
    part = confidence_partition(model)
    t = (model.given_theta1.as_array(), model.given_theta2.as_array())
    d1 = list(part.d1)
    d2 = list(part.d2)
    z = part.z

    def mass(tj: np.ndarray, idx: list[int]) -> float:
        return float(tj[idx].sum()) if idx else 0.0

    def logw(tj: np.ndarray, idx: list[int]) -> float:
        # sum_{s in idx} L(s|theta_j) ln( z(s) / sum_{s' in idx} z(s') )
        if not idx:
            return 0.0
        zs = z[idx]
        zsum = float(zs.sum())
        total = 0.0
        for s, zv in zip(idx, zs):
            w = float(tj[s])
            if w == 0.0:
                continue
            ratio = zv / zsum
            total += w * (math.log(ratio) if ratio > 0.0 else -math.inf)
        return total

    xi1, xi2 = mass(t[0], d1), mass(t[1], d1)
    sigma1, sigma2 = mass(t[0], d2), mass(t[1], d2)
    return SeparabilityReport(
        xi1=xi1,
        xi2=xi2,
        sigma1=sigma1,
        sigma2=sigma2,
        c1=logw(t[0], d1),
        c2=logw(t[1], d1),
        b1=logw(t[0], d2),
        b2=logw(t[1], d2),
        separable=bool(sigma1 < xi1 and sigma2 > xi2),
    )


# =============================================================================
# Unknown-divergence (network-agnostic) attack
# =============================================================================

def _check_epsilon(eps: float, alphabet_size: int) -> None:
    if not 0.0 < eps < 1.0 / alphabet_size:
        raise OutOfRangeError(
            f"epsilon must lie in (0, 1/{alphabet_size}), got {eps!r}"
        )


def unknown_divergence_attack(model: LikelihoodModel, eps: float) -> LikelihoodModel:
    """Closed-form optimal forged model for a network-agnostic adversary.

    Column theta_j floors every symbol of the confidence set aligned with
    theta_j and gives each remaining symbol mass proportional to its
    confidence gap |z(s)|. Tie symbols (z = 0) carry zero objective weight;
    they are floored in both columns and the strictly-signed mass is scaled
    accordingly, which leaves the objective value untouched while keeping
    the full-support floor valid. If a proportional mass would fall below
    the floor, the closed form does not apply and
    :class:`FloorViolationError` is raised explicitly.
    """
    if not is_informative(model):
        raise UninformativeModelError(
            "the objective is identically zero for an uninformative model"
        )
    _check_epsilon(eps, model.alphabet_size)
    z = model.given_theta1.as_array() - model.given_theta2.as_array()
    n = model.alphabet_size
    neg = z < 0.0
    pos = z > 0.0
    tie = ~neg & ~pos

    # column for theta1: floor on {z >= 0}, proportional mass on {z < 0}
    f1 = np.full(n, eps)
    w_neg = z[neg] / z[neg].sum()
    mass1 = w_neg * (1.0 - float(np.count_nonzero(~neg)) * eps)
    if np.any(mass1 < eps):
        raise FloorViolationError(
            "theta1 column of the closed form dips below the epsilon floor"
        )
    f1[neg] = mass1

    # column for theta2: floor on {z < 0} and on ties, proportional on {z > 0}
    f2 = np.full(n, eps)
    w_pos = z[pos] / z[pos].sum()
    mass2 = w_pos * (1.0 - float(np.count_nonzero(~pos)) * eps)
    if np.any(mass2 < eps):
        raise FloorViolationError(
            "theta2 column of the closed form dips below the epsilon floor"
        )
    f2[pos] = mass2
    return LikelihoodModel(make_pmf(f1), make_pmf(f2))


def unknown_divergence_objective(model: LikelihoodModel, forged: LikelihoodModel) -> float:
    """Per-agent cost sum_s z(s) (ln forged(s|theta1) - ln forged(s|theta2)).

    The network-agnostic attack minimizes exactly this (centrality scales
    every candidate equally, so it drops out).
    """
    z = model.given_theta1.as_array() - model.given_theta2.as_array()
    lf1 = np.log(forged.given_theta1.as_array())
    lf2 = np.log(forged.given_theta2.as_array())
    return float(np.sum(z * (lf1 - lf2)))


def _floored_simplex_minimize(
    z: np.ndarray, eps: float, sign: float, m_axis: int = 13, rounds: int = 48
) -> tuple[np.ndarray, float]:
    """Brute-force min of sign * sum z ln(x) over the eps-floored simplex.

    Dense grid over the first n-1 coordinates followed by geometric window
    shrinking around the incumbent. Independent of the closed form by
    construction (pure search, no stationarity conditions).
    """
    n = len(z)
    lo, hi = eps, 1.0 - (n - 1) * eps

    def best_of(cands: np.ndarray) -> tuple[np.ndarray | None, float]:
        last = 1.0 - cands.sum(axis=1)
        ok = last >= eps - 1e-15
        if not ok.any():
            return None, math.inf
        cands = cands[ok]
        full = np.column_stack([cands, last[ok]])
        vals = sign * (np.log(full) @ z)
        k = int(np.argmin(vals))
        return full[k], float(vals[k])

    axes = [np.linspace(lo, hi, m_axis)] * (n - 1)
    cands = np.array(list(itertools.product(*axes)))
    x, v = best_of(cands)
    width = hi - lo
    for _ in range(rounds):
        width *= 0.5
        axes = [
            np.linspace(max(lo, c - width / 2.0), min(hi, c + width / 2.0), m_axis)
            for c in x[: n - 1]
        ]
        cands = np.array(list(itertools.product(*axes)))
        x2, v2 = best_of(cands)
        if x2 is not None and v2 < v:
            x, v = x2, v2
    return x, sign * v


def oracle_optimal_attack(
    model: LikelihoodModel, eps: float, grid_resolution: int = 13
) -> tuple[LikelihoodModel, float]:
    """Grid + refinement minimizer of the network-agnostic objective.

    Verification oracle for small alphabets (cost grows geometrically with
    alphabet size; intended for |alphabet| <= 4). Returns the best forged
    model found and its objective value.
    """
    if model.alphabet_size > 4:
        raise OutOfRangeError("oracle is restricted to alphabets of size <= 4")
    _check_epsilon(eps, model.alphabet_size)
    z = model.given_theta1.as_array() - model.given_theta2.as_array()
    x1, v1 = _floored_simplex_minimize(z, eps, sign=+1.0, m_axis=grid_resolution)
    x2, v2 = _floored_simplex_minimize(z, eps, sign=-1.0, m_axis=grid_resolution)
    forged = LikelihoodModel(make_pmf(x1), make_pmf(x2))
    return forged, float(v1 - v2)


# =============================================================================
# Known-divergence construction
# =============================================================================

@dataclass(frozen=True)
class DistortionRegion:
    """Geometry of the transformed feasibility wedge for one support pair.

    ``x1_prime``/``x2_prime`` are the intersection point of the two
    boundary lines; ``x_minus``/``x_plus`` the symmetric box induced by the
    epsilon floor on the transformed coordinates; ``epsilon_bound`` the
    largest floor for which the intersection stays strictly inside the box
    (the construction's feasibility condition).
    """

    support_pair: tuple[int, int]
    d_k: float
    n1: float
    n2: float
    x1_prime: float
    x2_prime: float
    x_minus: float
    x_plus: float
    alpha_k: float
    epsilon_bound: float
    empty: bool


def select_support_pair(model: LikelihoodModel) -> tuple[int, int]:
    """Deterministic support pair: maximal |determinant|, then lexicographic.

    The determinant ``d = L(z2|t2) L(z1|t1) - L(z2|t1) L(z1|t2)`` must be
    nonzero for the pair to support the construction; informative models
    always admit such a pair.
    """
    if not is_informative(model):
        raise UninformativeModelError("support pair needs an informative model")
    t1 = model.given_theta1.as_array()
    t2 = model.given_theta2.as_array()
    best: tuple[float, int, int] | None = None
    n = model.alphabet_size
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d = t2[j] * t1[i] - t1[j] * t2[i]
            if d == 0.0:
                continue
            key = (-abs(d), i, j)
            if best is None or key < best:
                best = key
    if best is None:
        raise UninformativeModelError("no symbol pair with nonzero determinant")
    return (best[1], best[2])


def _pair_geometry(
    model: LikelihoodModel,
    u_k: float,
    s1: float,
    s2: float,
    eps: float,
    pair: tuple[int, int],
) -> DistortionRegion:
    i, j = pair
    t1 = model.given_theta1.as_array()
    t2 = model.given_theta2.as_array()
    l11, l21 = float(t1[i]), float(t1[j])
    l12, l22 = float(t2[i]), float(t2[j])
    d = l22 * l11 - l21 * l12
    if d == 0.0:
        raise DegeneratePairError(f"support pair {pair} has zero determinant")
    n1 = l12 * s1 + l11 * s2
    n2 = l22 * s1 + l21 * s2
    x1p = n2 / (u_k * d)
    x2p = -n1 / (u_k * d)
    size = model.alphabet_size
    alpha = 1.0 - (size - 2) * eps
    x_plus = math.log(alpha - eps) - math.log(eps)

    def invbound(xp: float) -> float:
        # 1 / (e^|xp| + size - 1), flushing to 0 instead of overflowing
        return 0.0 if abs(xp) > 700.0 else 1.0 / (math.exp(abs(xp)) + size - 1)

    bound = min(invbound(x1p), invbound(x2p))
    return DistortionRegion(
        support_pair=(i, j),
        d_k=d,
        n1=n1,
        n2=n2,
        x1_prime=x1p,
        x2_prime=x2p,
        x_minus=-x_plus,
        x_plus=x_plus,
        alpha_k=alpha,
        epsilon_bound=bound,
        empty=not eps < bound,
    )


def distortion_region(
    model: LikelihoodModel,
    u_k: float,
    s1: float,
    s2: float,
    eps: float,
    pair: tuple[int, int] | None = None,
) -> DistortionRegion:
    """Region geometry for ``pair`` (default: the canonical support pair)."""
    if not 0.0 < u_k < 1.0:
        raise OutOfRangeError(f"centrality must lie in (0, 1), got {u_k!r}")
    if s1 < 0.0 or s2 < 0.0 or not (math.isfinite(s1) and math.isfinite(s2)):
        raise OutOfRangeError("sub-network divergences must be finite and >= 0")
    if pair is None:
        pair = select_support_pair(model)
    return _pair_geometry(model, u_k, s1, s2, eps, pair)


def _region_lines(
    geom: DistortionRegion, model: LikelihoodModel, u_k: float, s1: float, s2: float
) -> tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]:
    i, j = geom.support_pair
    l11, l21 = model.given_theta1[i], model.given_theta1[j]
    l12, l22 = model.given_theta2[i], model.given_theta2[j]

    def r1(x1):
        return (s1 - u_k * l11 * x1) / (u_k * l21)

    def r2(x1):
        return -(s2 + u_k * l12 * x1) / (u_k * l22)

    return r1, r2


def _log1mexp(x: np.ndarray) -> np.ndarray:
    """log(1 - e^x) for x < 0, vectorized and stable."""
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(
            x < -math.log(2.0), np.log1p(-np.exp(x)), np.log(-np.expm1(x))
        )


def _logsubexp(a, b):
    """log(e^a - e^b) where a > b elementwise; -inf when a <= b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    diff = np.where(a > b, b - a, -1.0)
    return np.where(a > b, a + _log1mexp(diff), -np.inf)


def _floor_x2_interval(
    x1: np.ndarray,
    geom: DistortionRegion,
    model: LikelihoodModel,
    u_k: float,
    s1: float,
    s2: float,
    eps: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact feasible x2 interval (lo, hi) per x1: wedge, box, and floor.

    With E = e^{x2} the four floor constraints are linear in E for fixed
    x1, so the interval endpoints are closed-form in the log domain.
    """
    r1, r2 = _region_lines(geom, model, u_k, s1, s2)
    x1 = np.asarray(x1, dtype=float)
    leps = math.log(eps)
    lal = math.log(geom.alpha_k)
    lame = math.log(geom.alpha_k - eps)
    lo = np.maximum(r1(x1), -geom.x_plus)
    hi = np.minimum(r2(x1), geom.x_plus)

    la_m_ame_e1 = _logsubexp(lal, lame + x1)  # ln(alpha - (alpha-eps) e^{x1})
    la_m_eps_e1 = _logsubexp(lal, leps + x1)  # ln(alpha - eps e^{x1})
    l_ae1_m_eps = _logsubexp(lal + x1, leps)  # ln(alpha e^{x1} - eps)
    l_ae1_m_ame = _logsubexp(lal + x1, lame)  # ln(alpha e^{x1} - (alpha-eps))

    if geom.d_k > 0:
        lo = np.maximum(lo, np.where(np.isfinite(la_m_ame_e1), la_m_ame_e1 - leps, -np.inf))
        hi = np.minimum(hi, la_m_eps_e1 - lame)
        hi = np.minimum(hi, lame + x1 - l_ae1_m_eps)
        lo = np.maximum(lo, leps + x1 - l_ae1_m_ame)
    else:
        hi = np.minimum(hi, la_m_ame_e1 - leps)
        lo = np.maximum(lo, la_m_eps_e1 - lame)
        lo = np.maximum(lo, lame + x1 - l_ae1_m_eps)
        hi = np.minimum(hi, np.where(np.isfinite(l_ae1_m_ame), leps + x1 - l_ae1_m_ame, np.inf))
    return lo, hi


def _masses_from_x(
    x1: float, x2: float, geom: DistortionRegion, eps: float, alphabet_size: int
) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Map (x1, x2) back to (p1, p2) and assemble both forged columns.

    Each of the four pair masses is evaluated from its own log-domain
    expression so that tiny masses keep full relative precision instead of
    being recovered by catastrophic subtraction from alpha.
    """
    i, j = geom.support_pair
    alpha = geom.alpha_k
    lal = math.log(alpha)
    lden = float(_logsubexp(max(x1, x2), min(x1, x2)))
    l1me1 = float(_logsubexp(x1, 0.0)) if x1 > 0 else float(_log1mexp(np.asarray(x1)))
    l1me2 = float(_logsubexp(x2, 0.0)) if x2 > 0 else float(_log1mexp(np.asarray(x2)))
    p1 = math.exp(lal + x1 + l1me2 - lden)          # forged(z1 | theta2)
    q1 = math.exp(lal + x2 + l1me1 - lden)          # forged(z2 | theta2) = alpha - p1
    p2 = math.exp(lal + l1me1 - lden)               # forged(z2 | theta1)
    q2 = math.exp(lal + l1me2 - lden)               # forged(z1 | theta1) = alpha - p2
    f1 = np.full(alphabet_size, eps)
    f2 = np.full(alphabet_size, eps)
    f1[i] = q2
    f1[j] = p2
    f2[i] = p1
    f2[j] = q1
    return p1, p2, f1, f2


@dataclass(frozen=True)
class AttackPlanEntry:
    """One adversary's forged model plus full construction provenance."""

    forged: LikelihoodModel
    strategy: str
    eps: float
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AttackPlan:
    """Per-adversary forged models; index aligned with the adversary list."""

    entries: tuple[AttackPlanEntry, ...]
    strategy: str
    eps: float

    def forged_models(self) -> tuple[LikelihoodModel, ...]:
        return tuple(e.forged for e in self.entries)


def _candidate_pairs(model: LikelihoodModel) -> list[tuple[int, int, float]]:
    t1 = model.given_theta1.as_array()
    t2 = model.given_theta2.as_array()
    n = model.alphabet_size
    cands = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d = t2[j] * t1[i] - t1[j] * t2[i]
            if d != 0.0 and t1[j] > 0.0 and t2[j] > 0.0:
                cands.append((-abs(d), i, j, d))
    cands.sort()
    return [(i, j, d) for _, i, j, d in cands]


def _midpoint(lo: float, hi: float) -> float:
    return 0.5 * (lo + hi)


def known_divergence_attack(
    model: LikelihoodModel,
    u_k: float,
    s1: float,
    s2: float,
    eps: float,
    x1_selector: Callable[[float, float], float] | None = None,
    beta_selector: Callable[[float, float], float] | None = None,
    require_floor: bool = False,
) -> AttackPlanEntry:
    """Forged model guaranteed to mislead for both candidate true states.

    Scans support pairs by decreasing |determinant|. For each admissible
    pair (epsilon below that pair's feasibility bound) the floor-feasible
    x1 slice is located on a fixed grid with exact per-x1 intervals;
    ``x1_selector`` picks within the largest slice (default midpoint) and
    ``beta_selector`` picks the line slope through the wedge intersection,
    parameterized over the implied admissible slope interval (default
    midpoint). When no pair admits a floor-feasible point, the first
    admissible pair's wedge midpoint is returned instead: both deception
    inequalities still hold strictly, but a forged mass sits below the
    floor; ``params['floor_satisfied']`` records which path was taken.
    With ``require_floor=True`` that fallback becomes an
    :class:`EmptyRegionError` instead.

    Raises :class:`EpsilonTooLargeError` when epsilon fails the bound for
    every support pair, :class:`UninformativeModelError` for a model with
    identical per-hypothesis PMFs.
    """
    if not is_informative(model):
        raise UninformativeModelError("deceiving both states needs an informative model")
    if not 0.0 < u_k < 1.0:
        raise OutOfRangeError(f"centrality must lie in (0, 1), got {u_k!r}")
    _check_epsilon(eps, model.alphabet_size)
    x1_sel = x1_selector or _midpoint
    beta_sel = beta_selector or _midpoint

    fallback: tuple[DistortionRegion, float, float] | None = None
    for i, j, _ in _candidate_pairs(model):
        geom = _pair_geometry(model, u_k, s1, s2, eps, (i, j))
        if geom.empty:
            continue
        if fallback is None:
            fallback = (geom, *_wedge_midpoint(geom, model, u_k, s1, s2))

        entry = _construct_on_pair(model, u_k, s1, s2, eps, geom, x1_sel, beta_sel)
        if entry is not None:
            return entry

    if fallback is None:
        raise EpsilonTooLargeError(
            "epsilon exceeds the feasibility bound of every support pair"
        )
    if require_floor:
        raise EmptyRegionError(
            "no support pair admits a floor-respecting deception point at this epsilon"
        )
    geom, fx1, fx2 = fallback
    p1, p2, f1, f2 = _masses_from_x(fx1, fx2, geom, eps, model.alphabet_size)
    forged = LikelihoodModel(make_pmf(f1), make_pmf(f2))
    return AttackPlanEntry(
        forged=forged,
        strategy="known_divergences",
        eps=eps,
        params=_entry_params(geom, fx1, fx2, p1, p2, u_k, s1, s2, floor_satisfied=False),
    )


def _wedge_midpoint(
    geom: DistortionRegion, model: LikelihoodModel, u_k: float, s1: float, s2: float
) -> tuple[float, float]:
    """Classical construction point: slope-interval midpoint line, box-clipped."""
    i, j = geom.support_pair
    l11, l21 = model.given_theta1[i], model.given_theta1[j]
    l12, l22 = model.given_theta2[i], model.given_theta2[j]
    slopes = sorted((-l11 / l21, -l12 / l22))
    beta = 0.5 * (slopes[0] + slopes[1])
    y0 = geom.x2_prime
    if geom.d_k > 0:
        dmax = min(geom.x_plus - geom.x1_prime, (geom.x_plus + y0) / (-beta))
        delta = 0.5 * dmax
    else:
        dmin = max(-geom.x_plus - geom.x1_prime, (geom.x_plus - y0) / beta)
        delta = 0.5 * dmin
    return geom.x1_prime + delta, beta * delta + y0


def _construct_on_pair(
    model: LikelihoodModel,
    u_k: float,
    s1: float,
    s2: float,
    eps: float,
    geom: DistortionRegion,
    x1_sel: Callable[[float, float], float],
    beta_sel: Callable[[float, float], float],
) -> AttackPlanEntry | None:
    if geom.d_k > 0:
        a, b = geom.x1_prime, geom.x_plus
    else:
        a, b = -geom.x_plus, geom.x1_prime
    ts = (np.arange(_GRID_POINTS) + 0.5) / _GRID_POINTS
    grid = a + (b - a) * ts
    lo, hi = _floor_x2_interval(grid, geom, model, u_k, s1, s2, eps)
    feas = lo < hi - 1e-12
    if not feas.any():
        return None
    # largest contiguous feasible slice of the x1 grid
    runs: list[tuple[int, int]] = []
    start = None
    flags = feas.tolist()
    for m in range(_GRID_POINTS + 1):
        v = flags[m] if m < _GRID_POINTS else False
        if v and start is None:
            start = m
        if not v and start is not None:
            runs.append((start, m))
            start = None
    s_idx, e_idx = max(runs, key=lambda r: (r[1] - r[0], -r[0]))
    x1 = x1_sel(float(grid[s_idx]), float(grid[e_idx - 1]))
    lo1, hi1 = _floor_x2_interval(np.asarray([x1]), geom, model, u_k, s1, s2, eps)
    lov, hiv = float(lo1[0]), float(hi1[0])
    if not lov < hiv - 1e-12:
        m = int(np.argmax(feas))
        x1, lov, hiv = float(grid[m]), float(lo[m]), float(hi[m])
    # slope parameterization over the x2 interval through the intersection
    delta = x1 - geom.x1_prime
    beta_a = (lov - geom.x2_prime) / delta
    beta_b = (hiv - geom.x2_prime) / delta
    beta = beta_sel(min(beta_a, beta_b), max(beta_a, beta_b))
    x2 = geom.x2_prime + beta * delta

    p1, p2, f1, f2 = _masses_from_x(x1, x2, geom, eps, model.alphabet_size)
    if np.any(f1 < eps * (1.0 - 1e-9)) or np.any(f2 < eps * (1.0 - 1e-9)):
        return None  # numeric edge; let the scan try the next pair
    forged = LikelihoodModel(make_pmf(f1), make_pmf(f2))
    return AttackPlanEntry(
        forged=forged,
        strategy="known_divergences",
        eps=eps,
        params=_entry_params(geom, x1, x2, p1, p2, u_k, s1, s2, floor_satisfied=True),
    )


def _entry_params(
    geom: DistortionRegion,
    x1: float,
    x2: float,
    p1: float,
    p2: float,
    u_k: float,
    s1: float,
    s2: float,
    floor_satisfied: bool,
) -> dict:
    beta = (x2 - geom.x2_prime) / (x1 - geom.x1_prime)
    return {
        "support_pair": geom.support_pair,
        "d_k": geom.d_k,
        "x1": x1,
        "x2": x2,
        "beta": beta,
        "p1": p1,
        "p2": p2,
        "alpha": geom.alpha_k,
        "u_k": u_k,
        "s1": s1,
        "s2": s2,
        "epsilon_bound": geom.epsilon_bound,
        "floor_satisfied": floor_satisfied,
    }


def multi_adversary_known(
    models: Sequence[LikelihoodModel],
    centralities: Sequence[float],
    s1: float,
    s2: float,
    eps: float,
    aggregate_centrality: bool = False,
    x1_selector: Callable[[float, float], float] | None = None,
    beta_selector: Callable[[float, float], float] | None = None,
) -> AttackPlan:
    """Known-divergence plan for several adversaries.

    Informative adversaries each get the single-adversary construction;
    uninformative ones keep their true models (their contribution is zero
    either way, and no forged pair could help them deceive both states).
    With ``aggregate_centrality`` every informative construction uses the
    summed adversary centrality in place of the individual one -- useful
    when all adversaries share one observation model and would otherwise
    need a much smaller epsilon.
    """
    if len(models) != len(centralities):
        raise ValueError("one centrality per adversary model required")
    informative = [is_informative(m) for m in models]
    if not any(informative):
        raise AllUninformativeError(
            "no forged models can deceive both states: every adversary is uninformative"
        )
    u_total = float(sum(centralities))
    entries: list[AttackPlanEntry] = []
    for m, u_k, info in zip(models, centralities, informative):
        if not info:
            entries.append(
                AttackPlanEntry(
                    forged=m,
                    strategy="unmodified_uninformative",
                    eps=eps,
                    params={"floor_satisfied": True},
                )
            )
            continue
        u_eff = u_total if aggregate_centrality else float(u_k)
        entries.append(
            known_divergence_attack(
                m, u_eff, s1, s2, eps, x1_selector, beta_selector
            )
        )
    return AttackPlan(entries=tuple(entries), strategy="known_divergences", eps=eps)


def one_variable_feasibility(
    model: LikelihoodModel,
    u_k: float,
    s1: float,
    s2: float,
    eps: float,
    pair: tuple[int, int] | None = None,
) -> bool:
    """Can a single free parameter (p1 = p2) deceive for both states?

    Tying the two masses restricts the transformed coordinates to the
    anti-diagonal x2 = -x1; the answer is whether that line crosses the
    wedge inside the epsilon box. Solved exactly by interval intersection
    of the three linear conditions in x1.
    """
    geom = distortion_region(model, u_k, s1, s2, eps, pair)
    i, j = geom.support_pair
    l11, l21 = model.given_theta1[i], model.given_theta1[j]
    l12, l22 = model.given_theta2[i], model.given_theta2[j]
    if l21 == 0.0 or l22 == 0.0:
        raise DegeneratePairError("zero likelihood at the second pair symbol")
    if geom.empty:
        return False

    lo, hi = -geom.x_plus, geom.x_plus
    # side constraint relative to the wedge apex
    if geom.d_k > 0:
        lo = max(lo, geom.x1_prime)
    else:
        hi = min(hi, geom.x1_prime)

    def clip(a_coeff: float, b_const: float, lo: float, hi: float) -> tuple[float, float]:
        # a_coeff * x1 < b_const
        if a_coeff > 0.0:
            return lo, min(hi, b_const / a_coeff)
        if a_coeff < 0.0:
            return max(lo, b_const / a_coeff), hi
        return (lo, hi) if b_const > 0.0 else (1.0, 0.0)

    # r1(x1) < -x1  <=>  u(l11 - l21) x1 > s1
    lo, hi = clip(-(u_k * (l11 - l21)), -s1, lo, hi)
    # -x1 < r2(x1)  <=>  u(l12 - l22) x1 < -s2
    lo, hi = clip(u_k * (l12 - l22), -s2, lo, hi)
    return lo < hi - _STRICT_MARGIN


def random_attack(
    model: LikelihoodModel, eps: float, rng: np.random.Generator
) -> LikelihoodModel:
    """Baseline: two independent draws from the epsilon-floored simplex.

    A uniform Dirichlet draw is shrunk onto the floored simplex
    (``eps + (1 - n*eps) * w``); crude but sufficient for the qualitative
    point that undirected forgeries rarely deceive.
    """
    _check_epsilon(eps, model.alphabet_size)
    n = model.alphabet_size
    scale = 1.0 - n * eps

    def draw() -> Pmf:
        w = rng.dirichlet(np.ones(n))
        return make_pmf(eps + scale * w)

    return LikelihoodModel(draw(), draw())
