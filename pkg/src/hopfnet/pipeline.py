"""Config-driven analysis runs: predict, classify, simulate and verify."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .analysis import ComparisonReport, compare, discard_transient, measure_oscillation
from .bifurcation import GraphClassification, HopfReport, classify_graphs, predict_oscillation
from .config import ExperimentConfig
from .dynamics import IntegrationSettings, Trajectory, integrate, random_initial

DEFAULT_PERIODS = 50
DEFAULT_HORIZON = 500.0
SAMPLES_PER_PERIOD = 100
DEFAULT_STRIDE = 0.1


def analyze(cfg: ExperimentConfig) -> HopfReport:
    return predict_oscillation(cfg.communication, cfg.belief_system, cfg.params)


def classify(cfg: ExperimentConfig) -> GraphClassification:
    return classify_graphs(cfg.communication, cfg.belief_system, cfg.params)


def simulation_horizon(cfg: ExperimentConfig, report: Optional[HopfReport] = None):
    """``(t_final, stride)`` from the config, falling back to prediction-based defaults."""
    period = report.predicted_period if report is not None and report.available else None
    t_final = cfg.simulation.t_final
    if t_final is None:
        t_final = DEFAULT_PERIODS * period if period else DEFAULT_HORIZON
    stride = cfg.simulation.output_stride
    if stride is None:
        stride = period / SAMPLES_PER_PERIOD if period else DEFAULT_STRIDE
    return t_final, stride


def simulate(cfg: ExperimentConfig, report: Optional[HopfReport] = None) -> Trajectory:
    if report is None:
        report = analyze(cfg)
    t_final, stride = simulation_horizon(cfg, report)
    sim = cfg.simulation
    n = cfg.communication.n * cfg.n_topics
    z0 = random_initial(n, sim.ic_scale, sim.seed)
    settings = IntegrationSettings(rtol=sim.rtol, atol=sim.atol, stride=stride)
    traj = integrate(cfg.communication, cfg.belief_system, cfg.params, z0, t_final, settings)
    traj.metadata.update(seed=sim.seed, ic_scale=sim.ic_scale,
                         ic_generator="PCG64 raw 53-bit uniform")
    return traj


@dataclass
class VerifyResult:
    report: HopfReport
    trajectory: Trajectory
    comparison: ComparisonReport

    @property
    def passed(self) -> bool:
        return self.comparison.passed


def verify(cfg: ExperimentConfig) -> VerifyResult:
    """analyze -> simulate -> measure -> compare."""
    report = analyze(cfg)
    traj = simulate(cfg, report)
    tail = discard_transient(traj, cfg.simulation.transient_fraction)
    meas = measure_oscillation(tail, atol=cfg.simulation.atol)
    return VerifyResult(report, traj, compare(report, meas, cfg.analysis))
