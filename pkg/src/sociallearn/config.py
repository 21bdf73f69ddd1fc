"""Experiment configuration: YAML schema, validation, and scenario assembly.

One canonical schema (all keys optional unless noted):

.. code-block:: yaml

    topology:
      kind: erdos_renyi          # erdos_renyi | star | complete | ring |
                                 # edge_list | trust_weighted_complete
      n_agents: 15               # required
      edge_prob: 0.25            # erdos_renyi
      seed: 28                   # erdos_renyi rejection sampling
      hub: 0                     # star
      edges: [[0, 1], [1, 2]]    # edge_list
      trust_weight: 0.05         # trust_weighted_complete
      self_loops: true           # default true (all agents)
    agents:
      n_malicious: 4             # adversaries are agents 0 .. n_malicious-1
      model: {kind: bsc, p: 0.8} # shared model, or
      models:                    # one per agent
        - {kind: rows, theta1: [0.8, 0.2], theta2: [0.55, 0.45]}
    attack:
      strategy: unknown_divergences   # known_divergences | random | none
      epsilon: 5.0e-3
      s1: null                   # known_divergences: externally supplied
      s2: null                   #   (default: computed from the scenario)
      aggregate_centrality: false
      seed: 0                    # random strategy
    experiment:
      theta_true: theta1
      horizon: 2000
      seeds: [0]
      stride: 1
      initial_belief_theta1: 0.5 # scalar or per-agent list, strictly in (0,1)
    sweep:
      parameter: bsc_p           # bsc_p | epsilon | adversary_centrality
      grid: {start: 0.55, stop: 0.95, step: 0.01}   # or  values: [...]
    output:
      directory: out
      format: structured         # structured | tabular

Validation collects *every* violation before failing, and the echoed
configuration contains all materialized defaults, so a result file always
records the exact knobs that produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np
import yaml

from .attacks import (
    AttackPlan,
    AttackPlanEntry,
    multi_adversary_known,
    random_attack,
    unknown_divergence_attack,
)
from .errors import ConfigParseError, ConfigValidationError
from .learning import AgentConfig
from .network import (
    Network,
    adversary_centrality,
    complete_adjacency,
    edge_list_adjacency,
    erdos_renyi_adjacency,
    make_network,
    perron_vector,
    ring_adjacency,
    star_adjacency,
    trust_weighted_complete,
    uniform_combination,
    validate_network,
)
from .probability import Hypothesis, LikelihoodModel, bsc_model, make_model

_TOPOLOGY_KINDS = (
    "erdos_renyi",
    "star",
    "complete",
    "ring",
    "edge_list",
    "trust_weighted_complete",
)
_STRATEGIES = ("none", "unknown_divergences", "known_divergences", "random")
_SWEEP_PARAMETERS = ("bsc_p", "epsilon", "adversary_centrality")
_FORMATS = ("structured", "tabular")


@dataclass(frozen=True)
class TopologySpec:
    kind: str = "complete"
    n_agents: int = 2
    edge_prob: float = 0.3
    seed: int = 0
    hub: int = 0
    edges: tuple[tuple[int, int], ...] = ()
    trust_weight: float = 0.05
    self_loops: bool = True


@dataclass(frozen=True)
class ModelSpec:
    kind: str = "bsc"  # bsc | rows
    p: float = 0.8
    theta1: tuple[float, ...] = ()
    theta2: tuple[float, ...] = ()

    def build(self) -> LikelihoodModel:
        if self.kind == "bsc":
            return bsc_model(self.p)
        return make_model(self.theta1, self.theta2)


@dataclass(frozen=True)
class AgentsSpec:
    n_malicious: int = 0
    model: ModelSpec | None = None
    models: tuple[ModelSpec, ...] = ()


@dataclass(frozen=True)
class AttackSpec:
    strategy: str = "none"
    epsilon: float = 1e-3
    s1: float | None = None
    s2: float | None = None
    aggregate_centrality: bool = False
    seed: int = 0


@dataclass(frozen=True)
class ExperimentSpec:
    theta_true: str = "theta1"
    horizon: int = 2000
    seeds: tuple[int, ...] = (0,)
    stride: int = 1
    initial_belief_theta1: float | tuple[float, ...] = 0.5


@dataclass(frozen=True)
class SweepSpec:
    parameter: str = "bsc_p"
    values: tuple[float, ...] = ()


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    format: str = "structured"


@dataclass(frozen=True)
class ExperimentConfig:
    topology: TopologySpec = field(default_factory=TopologySpec)
    agents: AgentsSpec = field(default_factory=AgentsSpec)
    attack: AttackSpec = field(default_factory=AttackSpec)
    experiment: ExperimentSpec = field(default_factory=ExperimentSpec)
    sweep: SweepSpec | None = None
    output: OutputSpec = field(default_factory=OutputSpec)

    def to_dict(self) -> dict[str, Any]:
        """Complete echo of every knob, defaults materialized."""
        d: dict[str, Any] = {
            "topology": {
                "kind": self.topology.kind,
                "n_agents": self.topology.n_agents,
                "edge_prob": self.topology.edge_prob,
                "seed": self.topology.seed,
                "hub": self.topology.hub,
                "edges": [list(e) for e in self.topology.edges],
                "trust_weight": self.topology.trust_weight,
                "self_loops": self.topology.self_loops,
            },
            "agents": {
                "n_malicious": self.agents.n_malicious,
                "model": _model_dict(self.agents.model),
                "models": [_model_dict(m) for m in self.agents.models] or None,
            },
            "attack": {
                "strategy": self.attack.strategy,
                "epsilon": self.attack.epsilon,
                "s1": self.attack.s1,
                "s2": self.attack.s2,
                "aggregate_centrality": self.attack.aggregate_centrality,
                "seed": self.attack.seed,
            },
            "experiment": {
                "theta_true": self.experiment.theta_true,
                "horizon": self.experiment.horizon,
                "seeds": list(self.experiment.seeds),
                "stride": self.experiment.stride,
                "initial_belief_theta1": (
                    list(self.experiment.initial_belief_theta1)
                    if isinstance(self.experiment.initial_belief_theta1, tuple)
                    else self.experiment.initial_belief_theta1
                ),
            },
            "sweep": (
                {"parameter": self.sweep.parameter, "values": list(self.sweep.values)}
                if self.sweep is not None
                else None
            ),
            "output": {
                "directory": self.output.directory,
                "format": self.output.format,
            },
        }
        return d

    def echo(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)


def _model_dict(m: ModelSpec | None) -> dict[str, Any] | None:
    if m is None:
        return None
    if m.kind == "bsc":
        return {"kind": "bsc", "p": m.p}
    return {"kind": "rows", "theta1": list(m.theta1), "theta2": list(m.theta2)}


# --- parsing ---------------------------------------------------------------------

def load_config(text: str) -> ExperimentConfig:
    """Parse and validate configuration text; all violations reported at once."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"not valid YAML: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigParseError(f"top level must be a mapping, got {type(raw).__name__}")
    violations: list[str] = []
    cfg = _parse(raw, violations)
    if not violations:
        violations.extend(validate_config(cfg))
    if violations:
        raise ConfigValidationError(violations)
    return cfg


def _parse(raw: dict, violations: list[str]) -> ExperimentConfig:
    known = {"topology", "agents", "attack", "experiment", "sweep", "output"}
    for key in raw:
        if key not in known:
            violations.append(f"unknown top-level section {key!r}")

    def section(name: str) -> dict:
        v = raw.get(name) or {}
        if not isinstance(v, dict):
            violations.append(f"section {name!r} must be a mapping")
            return {}
        return v

    t = section("topology")
    topology = TopologySpec(
        kind=str(t.get("kind", "complete")),
        n_agents=int(t.get("n_agents", 2)),
        edge_prob=float(t.get("edge_prob", 0.3)),
        seed=int(t.get("seed", 0)),
        hub=int(t.get("hub", 0)),
        edges=tuple(tuple(int(x) for x in e) for e in t.get("edges", []) or []),
        trust_weight=float(t.get("trust_weight", 0.05)),
        self_loops=bool(t.get("self_loops", True)),
    )

    a = section("agents")

    def model_spec(m: Any) -> ModelSpec | None:
        if m is None:
            return None
        if not isinstance(m, dict):
            violations.append(f"model spec must be a mapping, got {m!r}")
            return None
        kind = str(m.get("kind", "bsc"))
        if kind == "bsc":
            return ModelSpec(kind="bsc", p=float(m.get("p", 0.8)))
        if kind == "rows":
            return ModelSpec(
                kind="rows",
                theta1=tuple(float(x) for x in m.get("theta1", [])),
                theta2=tuple(float(x) for x in m.get("theta2", [])),
            )
        violations.append(f"unknown model kind {kind!r}")
        return None

    agents = AgentsSpec(
        n_malicious=int(a.get("n_malicious", 0)),
        model=model_spec(a.get("model")),
        models=tuple(
            spec for spec in (model_spec(m) for m in a.get("models", []) or []) if spec
        ),
    )

    at = section("attack")
    attack = AttackSpec(
        strategy=str(at.get("strategy", "none")),
        epsilon=float(at.get("epsilon", 1e-3)),
        s1=None if at.get("s1") is None else float(at.get("s1")),
        s2=None if at.get("s2") is None else float(at.get("s2")),
        aggregate_centrality=bool(at.get("aggregate_centrality", False)),
        seed=int(at.get("seed", 0)),
    )

    e = section("experiment")
    init = e.get("initial_belief_theta1", 0.5)
    experiment = ExperimentSpec(
        theta_true=str(e.get("theta_true", "theta1")),
        horizon=int(e.get("horizon", 2000)),
        seeds=tuple(int(s) for s in e.get("seeds", [0]) or [0]),
        stride=int(e.get("stride", 1)),
        initial_belief_theta1=(
            tuple(float(x) for x in init) if isinstance(init, (list, tuple)) else float(init)
        ),
    )

    sweep = None
    if raw.get("sweep") is not None:
        s = section("sweep")
        values: tuple[float, ...] = ()
        if "values" in s and s["values"] is not None:
            values = tuple(float(x) for x in s["values"])
        elif "grid" in s and isinstance(s["grid"], dict):
            g = s["grid"]
            try:
                start, stop, step_sz = float(g["start"]), float(g["stop"]), float(g["step"])
                count = int(round((stop - start) / step_sz)) + 1
                values = tuple(round(start + i * step_sz, 12) for i in range(count))
            except (KeyError, TypeError, ValueError):
                violations.append("sweep.grid needs numeric start/stop/step")
        else:
            violations.append("sweep needs either 'values' or 'grid'")
        sweep = SweepSpec(parameter=str(s.get("parameter", "bsc_p")), values=values)

    o = section("output")
    output = OutputSpec(
        directory=str(o.get("directory", "out")),
        format=str(o.get("format", "structured")),
    )
    return ExperimentConfig(
        topology=topology,
        agents=agents,
        attack=attack,
        experiment=experiment,
        sweep=sweep,
        output=output,
    )


def validate_config(cfg: ExperimentConfig) -> list[str]:
    """Schema-level checks; returns human-readable violations."""
    v: list[str] = []
    t = cfg.topology
    if t.kind not in _TOPOLOGY_KINDS:
        v.append(f"topology.kind must be one of {_TOPOLOGY_KINDS}, got {t.kind!r}")
    if t.n_agents < 2:
        v.append("topology.n_agents must be >= 2")
    if t.kind == "erdos_renyi" and not 0.0 < t.edge_prob <= 1.0:
        v.append("topology.edge_prob must lie in (0, 1]")
    if t.kind == "star" and not 0 <= t.hub < t.n_agents:
        v.append("topology.hub must index an agent")
    if t.kind == "edge_list":
        for i, j in t.edges:
            if not (0 <= i < t.n_agents and 0 <= j < t.n_agents):
                v.append(f"edge ({i}, {j}) references a missing agent")
    a = cfg.agents
    if not 0 <= a.n_malicious < t.n_agents:
        v.append("agents.n_malicious must satisfy 0 <= n_malicious < n_agents")
    if a.models and len(a.models) != t.n_agents:
        v.append(f"agents.models must list one model per agent ({t.n_agents})")
    if not a.models and a.model is None:
        v.append("agents needs a shared 'model' or a per-agent 'models' list")
    models = _model_list(cfg) if not v else []
    at = cfg.attack
    if at.strategy not in _STRATEGIES:
        v.append(f"attack.strategy must be one of {_STRATEGIES}, got {at.strategy!r}")
    if models:
        min_alphabet = min(m.alphabet_size for m in models)
        if at.strategy != "none" and not 0.0 < at.epsilon < 1.0 / min_alphabet:
            v.append(
                f"attack.epsilon must lie in (0, 1/{min_alphabet}) "
                f"for the smallest alphabet, got {at.epsilon!r}"
            )
    for name, s in (("s1", at.s1), ("s2", at.s2)):
        if s is not None and (not math.isfinite(s) or s < 0.0):
            v.append(f"attack.{name} must be finite and >= 0")
    e = cfg.experiment
    try:
        Hypothesis.from_name(e.theta_true)
    except Exception:
        v.append(f"experiment.theta_true must be theta1 or theta2, got {e.theta_true!r}")
    if e.horizon < 1:
        v.append("experiment.horizon must be >= 1")
    if e.stride < 0:
        v.append("experiment.stride must be >= 0 (0 disables trajectory records)")
    if not e.seeds:
        v.append("experiment.seeds must be non-empty")
    init = e.initial_belief_theta1
    init_values = init if isinstance(init, tuple) else (init,)
    if isinstance(init, tuple) and len(init) != t.n_agents:
        v.append("experiment.initial_belief_theta1 list must have one entry per agent")
    for b in init_values:
        if not 0.0 < b < 1.0:
            v.append("initial beliefs must lie strictly inside (0, 1)")
    if cfg.sweep is not None:
        if cfg.sweep.parameter not in _SWEEP_PARAMETERS:
            v.append(
                f"sweep.parameter must be one of {_SWEEP_PARAMETERS}, got {cfg.sweep.parameter!r}"
            )
        if not cfg.sweep.values:
            v.append("sweep grid is empty")
        if cfg.sweep.parameter == "bsc_p":
            if cfg.agents.model is None or cfg.agents.model.kind != "bsc":
                v.append("sweep over bsc_p needs a shared bsc agent model")
            if any(not 0.5 < p < 1.0 for p in cfg.sweep.values):
                v.append("bsc_p sweep values must lie in (0.5, 1)")
        if cfg.sweep.parameter == "adversary_centrality":
            if cfg.topology.kind != "trust_weighted_complete":
                v.append(
                    "sweep over adversary_centrality needs the "
                    "trust_weighted_complete topology family"
                )
    if cfg.output.format not in _FORMATS:
        v.append(f"output.format must be one of {_FORMATS}, got {cfg.output.format!r}")
    return v


def _model_list(cfg: ExperimentConfig) -> list[LikelihoodModel]:
    if cfg.agents.models:
        return [m.build() for m in cfg.agents.models]
    return [cfg.agents.model.build()] * cfg.topology.n_agents


# --- scenario assembly -------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """Runnable assembly: network, agent configs (forged models bound), plan."""

    net: Network
    agents: tuple[AgentConfig, ...]
    plan: AttackPlan | None
    theta_true: Hypothesis
    report_inputs: dict


def build_network(cfg: ExperimentConfig) -> Network:
    t = cfg.topology
    if t.kind == "trust_weighted_complete":
        comb = trust_weighted_complete(t.n_agents, cfg.agents.n_malicious, t.trust_weight)
        return make_network(comb, cfg.agents.n_malicious)
    if t.kind == "erdos_renyi":
        adj = erdos_renyi_adjacency(t.n_agents, t.edge_prob, t.seed)
    elif t.kind == "star":
        adj = star_adjacency(t.n_agents, t.hub)
    elif t.kind == "complete":
        adj = complete_adjacency(t.n_agents)
    elif t.kind == "ring":
        adj = ring_adjacency(t.n_agents)
    elif t.kind == "edge_list":
        adj = edge_list_adjacency(t.n_agents, t.edges)
    else:  # pragma: no cover - guarded by validation
        raise ConfigValidationError([f"unknown topology kind {t.kind!r}"])
    comb = uniform_combination(adj, t.self_loops)
    return make_network(comb, cfg.agents.n_malicious)


def build_plan(
    cfg: ExperimentConfig, net: Network, models: Sequence[LikelihoodModel]
) -> AttackPlan | None:
    """Assemble the forged models the configured strategy prescribes."""
    at = cfg.attack
    malicious = net.malicious_indices
    if at.strategy == "none" or not malicious:
        return None
    eps = at.epsilon
    if at.strategy == "unknown_divergences":
        entries = tuple(
            AttackPlanEntry(
                forged=unknown_divergence_attack(models[k], eps),
                strategy="unknown_divergences",
                eps=eps,
                params={},
            )
            for k in malicious
        )
        return AttackPlan(entries=entries, strategy="unknown_divergences", eps=eps)
    if at.strategy == "random":
        rng = np.random.default_rng(at.seed)
        entries = tuple(
            AttackPlanEntry(
                forged=random_attack(models[k], eps, rng),
                strategy="random",
                eps=eps,
                params={"seed": at.seed},
            )
            for k in malicious
        )
        return AttackPlan(entries=entries, strategy="random", eps=eps)
    # known_divergences: the minimal network knowledge is (s1, s2) plus the
    # adversary's own centrality; defaults are computed from the scenario,
    # but both divergences can be supplied externally in the config.
    u = perron_vector(net)
    if at.s1 is None or at.s2 is None:
        from .analysis import normal_divergence  # local import avoids a cycle

        agents_tmp = tuple(
            AgentConfig(role=net.roles[k], true_model=models[k])
            for k in range(net.n_agents)
        )
        s1 = at.s1 if at.s1 is not None else normal_divergence(net, agents_tmp, 1, u)
        s2 = at.s2 if at.s2 is not None else normal_divergence(net, agents_tmp, 2, u)
    else:
        s1, s2 = at.s1, at.s2
    return multi_adversary_known(
        [models[k] for k in malicious],
        [u[k] for k in malicious],
        s1,
        s2,
        eps,
        aggregate_centrality=at.aggregate_centrality,
    )


def build_scenario(cfg: ExperimentConfig) -> Scenario:
    net = build_network(cfg)
    models = _model_list(cfg)
    plan = build_plan(cfg, net, models)
    forged: dict[int, LikelihoodModel] = {}
    if plan is not None:
        for k, entry in zip(net.malicious_indices, plan.entries):
            forged[k] = entry.forged
    agents = tuple(
        AgentConfig(
            role=net.roles[k],
            true_model=models[k],
            forged_model=forged.get(k),
        )
        for k in range(net.n_agents)
    )
    u = perron_vector(net)
    report_inputs = {
        "adversary_centrality": adversary_centrality(u, net.roles),
        "perron": [float(x) for x in u.as_array()],
        "violations": [str(x) for x in validate_network(net)],
    }
    return Scenario(
        net=net,
        agents=agents,
        plan=plan,
        theta_true=Hypothesis.from_name(cfg.experiment.theta_true),
        report_inputs=report_inputs,
    )


def apply_sweep_value(cfg: ExperimentConfig, value: float) -> ExperimentConfig:
    """New config with the sweep parameter set to ``value``."""
    assert cfg.sweep is not None
    p = cfg.sweep.parameter
    if p == "bsc_p":
        return replace(
            cfg, agents=replace(cfg.agents, model=replace(cfg.agents.model, p=value))
        )
    if p == "epsilon":
        return replace(cfg, attack=replace(cfg.attack, epsilon=value))
    if p == "adversary_centrality":
        return replace(cfg, topology=replace(cfg.topology, trust_weight=value))
    raise ConfigValidationError([f"unknown sweep parameter {p!r}"])
