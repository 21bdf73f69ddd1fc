"""Experiment orchestration: Monte Carlo runs, sweeps, and result files.

Outputs are fully determined by (config, seeds): no timestamps, stable key
order, and floats rendered with shortest-round-trip precision, so repeated
runs produce byte-identical files.

Tabular trajectory format (CSV): one header row, then one row per
(recorded step, agent, seed) with columns

    step, agent_id, role, belief_theta1, log_ratio, seed

Structured format: a single JSON document embedding the echoed config, the
closed-form deception report, and per-seed summaries.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import learning
from .analysis import (
    DeceptionReport,
    critical_parameter,
    deception_verdict,
    homogeneous_centrality_margin,
    predicted_and_empirical_agree,
)
from .config import (
    ExperimentConfig,
    Scenario,
    apply_sweep_value,
    build_scenario,
)
from .errors import NoSignChangeError, OutputIOError
from .probability import Hypothesis

__all__ = [
    "ExperimentResult",
    "SweepPoint",
    "SweepResult",
    "run_experiment",
    "run_sweep",
    "emit_results",
    "emit_sweep_results",
]


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    scenario: Scenario
    report: DeceptionReport
    trajectories: tuple[learning.Trajectory, ...]

    def final_true_beliefs(self) -> list[float]:
        return [t.final_network_average_true_belief() for t in self.trajectories]

    def prediction_table(self) -> list[dict]:
        """Side-by-side of the closed-form verdict and each seed's outcome."""
        rows = []
        theta = self.scenario.theta_true
        for t in self.trajectories:
            final = t.final_network_average_true_belief()
            rows.append(
                {
                    "seed": t.seed,
                    "final_true_belief": final,
                    "predicted_verdict": self.report.verdict(theta).value,
                    "agrees": predicted_and_empirical_agree(self.report, theta, final),
                }
            )
        return rows


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """Run every configured seed and attach the closed-form report."""
    scenario = build_scenario(cfg)
    e = cfg.experiment
    report = deception_verdict(scenario.net, scenario.agents, scenario.plan)
    args = [
        (scenario, e.horizon, seed, e.stride, e.initial_belief_theta1)
        for seed in e.seeds
    ]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            trajectories = tuple(pool.map(_run_one, args))
    else:
        trajectories = tuple(_run_one(a) for a in args)
    return ExperimentResult(
        config=cfg, scenario=scenario, report=report, trajectories=trajectories
    )


def _run_one(packed) -> learning.Trajectory:
    scenario, horizon, seed, stride, init = packed
    return learning.run(
        scenario.net,
        scenario.agents,
        scenario.theta_true,
        horizon=horizon,
        seed=seed,
        stride=stride,
        initial_belief_theta1=init,
    )


# --- sweeps -----------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    value: float
    adversary_centrality: float
    margin_true: float
    per_seed_final: tuple[float, ...]

    @property
    def mean_final(self) -> float:
        return float(np.mean(self.per_seed_final))


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    parameter: str
    points: tuple[SweepPoint, ...]
    empirical_crossing: float | None
    theory_root: float | None

    def crossing_count(self) -> int:
        signs = [p.mean_final - 0.5 for p in self.points]
        return sum(
            1
            for a, b in zip(signs, signs[1:])
            if (a > 0) != (b > 0) and a != 0.0
        )


def _sweep_point(packed) -> SweepPoint:
    cfg, value = packed
    point_cfg = apply_sweep_value(cfg, value)
    scenario = build_scenario(point_cfg)
    e = point_cfg.experiment
    report = deception_verdict(scenario.net, scenario.agents, scenario.plan)
    lam = learning.run_finals(
        scenario.net,
        scenario.agents,
        scenario.theta_true,
        horizon=e.horizon,
        seeds=e.seeds,
        initial_belief_theta1=e.initial_belief_theta1,
    )
    finals = learning.network_average_true_belief(lam, scenario.theta_true)
    return SweepPoint(
        value=float(value),
        adversary_centrality=float(scenario.report_inputs["adversary_centrality"]),
        margin_true=report.margin(scenario.theta_true),
        per_seed_final=tuple(float(x) for x in np.atleast_1d(finals)),
    )


def run_sweep(cfg: ExperimentConfig, jobs: int = 1) -> SweepResult:
    """Evaluate every grid point (all seeds each) plus the theory root.

    The empirical crossing is the linear interpolation of the mean final
    true-state belief through 0.5 at the first adjacent grid pair where it
    changes side; the theory root bisects the closed-form margin over
    the grid span. For ``adversary_centrality`` sweeps both the grid and
    the root are expressed in aggregate-centrality units.
    """
    if cfg.sweep is None:
        raise NoSignChangeError("config has no sweep section")
    values = list(cfg.sweep.values)
    packed = [(cfg, v) for v in values]
    if jobs > 1 and len(packed) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = tuple(pool.map(_sweep_point, packed))
    else:
        points = tuple(_sweep_point(p) for p in packed)

    axis = [
        p.adversary_centrality if cfg.sweep.parameter == "adversary_centrality" else p.value
        for p in points
    ]
    crossing = _interp_crossing(axis, [p.mean_final for p in points])
    root = _theory_root(cfg, points)
    return SweepResult(
        config=cfg,
        parameter=cfg.sweep.parameter,
        points=points,
        empirical_crossing=crossing,
        theory_root=root,
    )


def _interp_crossing(xs: Sequence[float], means: Sequence[float]) -> float | None:
    for x0, x1, m0, m1 in zip(xs, xs[1:], means, means[1:]):
        lo, hi = m0 - 0.5, m1 - 0.5
        if lo == 0.0:
            return float(x0)
        if (lo > 0) != (hi > 0):
            return float(x0 + (x1 - x0) * (-lo) / (hi - lo))
    return None


def _theory_root(cfg: ExperimentConfig, points: tuple[SweepPoint, ...]) -> float | None:
    """Bisection root of the closed-form margin along the sweep axis."""
    sweep = cfg.sweep
    theta = Hypothesis.from_name(cfg.experiment.theta_true)

    if sweep.parameter == "adversary_centrality":
        # margin is linear in aggregate centrality for shared models
        point_cfg = apply_sweep_value(cfg, sweep.values[0])
        scenario = build_scenario(point_cfg)
        adv0 = scenario.net.malicious_indices[0]
        forged = scenario.agents[adv0].forged_model
        true_model = scenario.agents[adv0].true_model
        if forged is None:
            return None
        margin_fn = homogeneous_centrality_margin(
            true_model, forged, 1 if theta is Hypothesis.THETA1 else 2
        )
        lo = min(p.adversary_centrality for p in points)
        hi = max(p.adversary_centrality for p in points)
        try:
            return critical_parameter(margin_fn, (lo, hi))
        except NoSignChangeError:
            return None

    def margin_of(value: float) -> float:
        point_cfg = apply_sweep_value(cfg, value)
        scenario = build_scenario(point_cfg)
        report = deception_verdict(scenario.net, scenario.agents, scenario.plan)
        return report.margin(theta)

    try:
        return critical_parameter(margin_of, (min(sweep.values), max(sweep.values)))
    except NoSignChangeError:
        return None


# --- result files ------------------------------------------------------------------


def _fmt(x: float) -> str:
    """Shortest decimal that round-trips the exact double (<= 17 significant digits)."""
    return repr(float(x))


def _report_dict(report: DeceptionReport) -> dict:
    return {
        "s1": report.s1,
        "s2": report.s2,
        "adversary_indices": list(report.adversary_indices),
        "r1": list(report.r1),
        "r2": list(report.r2),
        "margin1": report.margin1,
        "margin2": report.margin2,
        "verdict1": report.verdict1.value,
        "verdict2": report.verdict2.value,
        "cost1": report.cost1,
        "cost2": report.cost2,
    }


def emit_results(result: ExperimentResult, out_dir: str, fmt: str | None = None) -> list[str]:
    """Write result files; returns the created paths (deterministic bytes)."""
    fmt = fmt or result.config.output.format
    written: list[str] = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        if fmt == "tabular":
            path = os.path.join(out_dir, "trajectories.csv")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("step,agent_id,role,belief_theta1,log_ratio,seed\n")
                for traj in result.trajectories:
                    beliefs = traj.belief_theta1()
                    for r, step_idx in enumerate(traj.steps):
                        for k in range(result.scenario.net.n_agents):
                            role = result.scenario.net.roles[k].value
                            fh.write(
                                f"{int(step_idx)},{k},{role},"
                                f"{_fmt(beliefs[r, k])},{_fmt(traj.log_ratio[r, k])},"
                                f"{traj.seed}\n"
                            )
            written.append(path)
        doc = {
            "config": result.config.to_dict(),
            "deception_report": _report_dict(result.report),
            "scenario": result.scenario.report_inputs,
            "per_seed": result.prediction_table(),
        }
        path = os.path.join(out_dir, "summary.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(path)
    except OSError as exc:
        raise OutputIOError(f"cannot write results under {out_dir!r}: {exc}") from exc
    return written


def emit_sweep_results(result: SweepResult, out_dir: str) -> list[str]:
    written: list[str] = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, "sweep.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(
                "parameter,value,adversary_centrality,margin_true,seed,final_true_belief\n"
            )
            for p in result.points:
                for seed, final in zip(result.config.experiment.seeds, p.per_seed_final):
                    fh.write(
                        f"{result.parameter},{_fmt(p.value)},"
                        f"{_fmt(p.adversary_centrality)},{_fmt(p.margin_true)},"
                        f"{seed},{_fmt(final)}\n"
                    )
        written.append(path)
        doc = {
            "config": result.config.to_dict(),
            "parameter": result.parameter,
            "empirical_crossing": result.empirical_crossing,
            "theory_root": result.theory_root,
            "points": [
                {
                    "value": p.value,
                    "adversary_centrality": p.adversary_centrality,
                    "margin_true": p.margin_true,
                    "mean_final_true_belief": p.mean_final,
                    "per_seed_final": list(p.per_seed_final),
                }
                for p in result.points
            ],
        }
        path = os.path.join(out_dir, "sweep.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(path)
    except OSError as exc:
        raise OutputIOError(f"cannot write results under {out_dir!r}: {exc}") from exc
    return written
