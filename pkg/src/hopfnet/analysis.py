"""Period, phase and amplitude measurement on simulated trajectories, and
comparison against Hopf predictions.

Phases are delays: a component whose mean upcrossings happen ``dt`` after
those of the reference has phase ``2*pi*dt/T``. For a near-onset solution
proportional to ``Re(exp(-i*omega*t) * v)``, this equals
``arg(v_c) - arg(v_ref)``, which is the predicted phase convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from .bifurcation import HopfReport
from .dynamics import Trajectory

TWO_PI = 2 * math.pi


class MeasurementError(ValueError):
    pass


def discard_transient(traj: Trajectory, fraction: float = 0.5) -> Trajectory:
    """Keep the part of ``traj`` after ``fraction`` of its time span."""
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    t0 = traj.times[0] + fraction * (traj.times[-1] - traj.times[0])
    keep = traj.times >= t0
    if keep.sum() < 10:
        raise MeasurementError(f"only {int(keep.sum())} samples remain after discarding the transient")
    return Trajectory(traj.times[keep], traj.states[keep], traj.n_agents, traj.n_topics,
                      dict(traj.metadata, transient_fraction=fraction))


def upcrossings(t: np.ndarray, x: np.ndarray, level: float) -> np.ndarray:
    """Linearly interpolated times where ``x`` rises through ``level``."""
    y = x - level
    idx = np.nonzero((y[:-1] < 0) & (y[1:] >= 0))[0]
    frac = -y[idx] / (y[idx + 1] - y[idx])
    return t[idx] + frac * (t[idx + 1] - t[idx])


@dataclass
class OscillationMeasurement:
    period: Optional[float]
    phase: Optional[np.ndarray]
    amplitude: np.ndarray
    oscillating: bool
    residual: Optional[float]
    reference: tuple = (0, 0)
    reason: str = ""

    @property
    def amplitude_normalized(self) -> np.ndarray:
        top = self.amplitude.max()
        return self.amplitude / top if top > 0 else np.zeros_like(self.amplitude)

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "phase": None if self.phase is None else self.phase.tolist(),
            "amplitude": self.amplitude.tolist(),
            "amplitude_normalized": self.amplitude_normalized.tolist(),
            "oscillating": self.oscillating,
            "residual": self.residual,
            "reference": list(self.reference),
            "reason": self.reason,
        }


def _circular_mean(angles: np.ndarray) -> float:
    return float(np.mod(np.angle(np.mean(np.exp(1j * angles))), TWO_PI))


def _cycle_crossings(t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Upcrossings of the mean taken over whole cycles.

    The plain sample mean is biased when the window holds a fractional
    number of periods, which shifts each component's crossings differently.
    """
    cr = upcrossings(t, x, x.mean())
    if cr.size < 2:
        return cr
    inside = (t >= cr[0]) & (t <= cr[-1])
    ts, xs = t[inside], x[inside]
    if ts.size < 2:
        return cr
    level = float(trapezoid(xs, ts) / (ts[-1] - ts[0]))
    return upcrossings(t, x, level)


def measure_oscillation(traj: Trajectory, atol: Optional[float] = None,
                        spread_tol: float = 0.05, decay_tol: float = 0.5) -> OscillationMeasurement:
    """Extract period, relative phases and amplitudes from a post-transient trajectory.

    Crossings are taken at each component's mean over its whole cycles. A
    trajectory counts as oscillating when every component has at least
    three such upcrossings with inter-crossing spread below ``spread_tol``,
    peak-to-trough above ``10 * atol``, and its last-period amplitude has not
    fallen below ``decay_tol`` times its first-period amplitude.
    """
    t = traj.times
    if t.size < 20:
        raise MeasurementError("need at least 20 samples")
    dt = np.diff(t)
    if np.max(np.abs(dt - dt.mean())) > 0.01 * dt.mean():
        raise MeasurementError("time grid is not uniform to within 1%")
    if atol is None:
        atol = float(traj.metadata.get("atol", 1e-10))

    X = traj.states.T  # (components, samples)
    shape = (traj.n_agents, traj.n_topics)
    ncomp = X.shape[0]
    crossings = [_cycle_crossings(t, x) for x in X]
    peak_to_trough = X.max(axis=1) - X.min(axis=1)

    def fail(reason):
        amp = (peak_to_trough / 2).reshape(shape)
        return OscillationMeasurement(None, None, amp, False, None, (0, 0), reason)

    if np.all(peak_to_trough <= 10 * atol):
        return fail("trajectory decays")
    for c in range(ncomp):
        cr = crossings[c]
        if cr.size < 3:
            return fail(f"component {np.unravel_index(c, shape)} has fewer than 3 upcrossings")
        first = (t >= cr[0]) & (t < cr[1])
        last = t >= cr[-2]
        if np.ptp(X[c, last]) < decay_tol * np.ptp(X[c, first]):
            return fail("trajectory decays")
        iv = np.diff(cr)
        if (iv.max() - iv.min()) / iv.mean() >= spread_tol:
            return fail("irregular crossing intervals")
    if np.any(peak_to_trough <= 10 * atol):
        return fail("some components do not oscillate")

    # amplitude over the last three periods of each component
    amp = np.empty(ncomp)
    for c in range(ncomp):
        period_c = np.diff(crossings[c]).mean()
        late = t >= t[-1] - 3 * period_c
        amp[c] = np.ptp(X[c, late]) / 2
    amp = amp.reshape(shape)

    ref = (0, 0)
    if amp[ref] < 0.01 * amp.max():
        ref = tuple(int(v) for v in np.unravel_index(np.argmax(amp), shape))
    ref_flat = ref[0] * shape[1] + ref[1]
    ref_cross = crossings[ref_flat]
    period = float(np.diff(ref_cross).mean())

    phase = np.empty(ncomp)
    for c in range(ncomp):
        cr = crossings[c]
        # pair each crossing with the latest reference crossing at or before it
        k = np.searchsorted(ref_cross, cr, side="right") - 1
        ok = k >= 0
        delays = cr[ok] - ref_cross[k[ok]]
        phase[c] = _circular_mean(TWO_PI * delays / period)
    phase[ref_flat] = 0.0
    phase = phase.reshape(shape)

    # periodicity defect over the final period
    span = (t >= t[-1] - 2 * period) & (t <= t[-1] - period)
    residual = 0.0
    if span.any():
        ts = t[span]
        for c in range(ncomp):
            shifted = np.interp(ts + period, t, X[c])
            a = amp.flat[c] if amp.flat[c] > 0 else 1.0
            residual = max(residual, float(np.max(np.abs(X[c, span] - shifted)) / a))
    return OscillationMeasurement(period, phase, amp, True, residual, ref, "")


@dataclass(frozen=True)
class Tolerances:
    period: float = 0.03
    phase: float = 0.2
    amplitude_spread: float = 0.05
    amplitude_gap: float = 0.02

    def to_dict(self) -> dict:
        return {"period": self.period, "phase": self.phase,
                "amplitude_spread": self.amplitude_spread, "amplitude_gap": self.amplitude_gap}


def circular_distance(a, b) -> np.ndarray:
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


@dataclass
class ComparisonReport:
    predicted: HopfReport
    measured: OscillationMeasurement
    period_rel_err: Optional[float]
    phase_max_abs_err: Optional[float]
    amplitude_ordering_agrees: Optional[bool]
    amplitude_max_spread: Optional[float]
    passed: bool
    reasons: list = field(default_factory=list)
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "predicted": self.predicted.to_dict(),
            "measured": self.measured.to_dict(),
            "period_rel_err": self.period_rel_err,
            "phase_max_abs_err": self.phase_max_abs_err,
            "amplitude_ordering_agrees": self.amplitude_ordering_agrees,
            "amplitude_max_spread": self.amplitude_max_spread,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
            "tolerances": self.tolerances.to_dict(),
        }


def _amplitude_checks(pred: np.ndarray, meas: np.ndarray, tol: Tolerances):
    """Ordering agreement for well-separated predicted pairs; spread for predicted-equal pairs."""
    p = pred.ravel()
    m = meas.ravel()
    agrees = True
    spread = 0.0
    for i in range(p.size):
        for j in range(i + 1, p.size):
            gap = abs(p[i] - p[j]) / max(p[i], p[j])
            mgap = abs(m[i] - m[j]) / max(m[i], m[j], 1e-300)
            if gap > tol.amplitude_gap:
                if np.sign(p[i] - p[j]) != np.sign(m[i] - m[j]):
                    agrees = False
            else:
                spread = max(spread, mgap)
    return agrees, spread


def compare(pred: HopfReport, meas: OscillationMeasurement,
            tol: Tolerances = Tolerances()) -> ComparisonReport:
    """Score a measurement against a prediction; the verdict depends only on errors and ``tol``."""
    if not pred.available:
        return ComparisonReport(pred, meas, None, None, None, None, False,
                                ["prediction unavailable"], tol)
    if not meas.oscillating:
        return ComparisonReport(pred, meas, None, None, None, None, False,
                                [meas.reason or "no oscillation measured"], tol)
    period_err = abs(meas.period - pred.predicted_period) / pred.predicted_period
    # re-base predicted phases on the measurement's reference component
    rebased = np.mod(pred.phase - pred.phase[meas.reference], TWO_PI)
    phase_err = float(np.max(circular_distance(meas.phase, rebased)))
    agrees, spread = _amplitude_checks(pred.amplitude, meas.amplitude, tol)
    reasons = []
    if period_err > tol.period:
        reasons.append(f"period error {period_err:.3g} exceeds {tol.period}")
    if phase_err > tol.phase:
        reasons.append(f"phase error {phase_err:.3g} rad exceeds {tol.phase}")
    if not agrees:
        reasons.append("amplitude ordering disagrees")
    if spread > tol.amplitude_spread:
        reasons.append(f"amplitude spread {spread:.3g} among predicted-equal components exceeds "
                       f"{tol.amplitude_spread}")
    return ComparisonReport(pred, meas, float(period_err), phase_err, agrees, float(spread),
                            not reasons, reasons, tol)
