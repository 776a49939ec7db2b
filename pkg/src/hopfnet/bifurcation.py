"""Indecision-breaking threshold, Hopf conditions, criticality and
oscillation-pattern prediction for the multi-topic belief model.

Conventions
-----------
``lambda_dagger`` and ``mu_dagger`` generate the leading Jacobian eigenvalue
with positive imaginary part. The right eigenvectors ``va``, ``vo`` belong to
their conjugates, and the left eigenvectors ``wa``, ``wo`` satisfy
``wa.T @ A_a == lambda_dagger * wa.T``. Together with the Hermitian inner
product ``<x, y> = vdot(x, y)``, this makes ``(wa, va)`` the biorthogonal
pair of ``conj(lambda_dagger)`` in :class:`hopfnet.spectral.EigenPair`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import spectral
from .params import ModelParams
from .signed_graph import SignedGraph, find_switching_to_eventually_positive, is_undirected
from .spectral import EQ_TOL, Spectrum

# |b| at or below this gives a degenerate verdict
TOL_B = 1e-10
# phase reference falls back when its amplitude is below this fraction of the max
PHASE_REF_TOL = 1e-12


class BifurcationError(ValueError):
    pass


class Criticality(str, enum.Enum):
    SUPERCRITICAL = "supercritical"
    SUBCRITICAL = "subcritical"
    DEGENERATE = "degenerate"


class Verdict(str, enum.Enum):
    NEVER_OSCILLATES = "NeverOscillates"
    SUPPORTS_OSCILLATIONS = "SupportsOscillations"
    INDETERMINATE = "Indeterminate"


class Reason(str, enum.Enum):
    UNDIRECTED_PAIR = "undirected-pair"
    BOTH_EVENTUALLY_BALANCED = "both-eventually-balanced"
    THRESHOLD_MET = "threshold-met"
    THRESHOLD_AVAILABLE = "threshold-available"
    NO_CRITERION = "no-criterion-applies"


class KMax(NamedTuple):
    value: float
    lam: complex
    mu: complex
    lam_index: int
    mu_index: int
    maximizers: list  # all (lam_index, mu_index) attaining the max


def compute_K(sa: Spectrum, so: Spectrum, p: ModelParams) -> KMax:
    """Largest real part of ``alpha + gamma*lam + beta*mu + delta*lam*mu``.

    Among tied maximizers the returned pair is the one contributing the
    largest (positive) imaginary part.
    """
    lam = sa.values[:, None]
    mu = so.values[None, :]
    c = spectral.social_contribution(lam, mu, p)
    k = float(c.real.max())
    tied = np.argwhere(k - c.real <= EQ_TOL)
    best = max(tied, key=lambda ij: (c[ij[0], ij[1]].imag, -ij[0], -ij[1]))
    i, j = int(best[0]), int(best[1])
    return KMax(k, sa.values[i], so.values[j], i, j, [(int(a), int(b)) for a, b in tied])


def critical_attention(p: ModelParams, K: float) -> float:
    """Attention value ``d / K`` at which the origin loses stability."""
    if K <= 0:
        raise BifurcationError(
            f"K = {K:.6g} <= 0: no attention level destabilizes the origin"
        )
    return p.d / K


@dataclass
class Assumption1Check:
    holds: bool
    leading: list  # ComposedEig at the evaluation attention
    reason: str

    def describe(self) -> list:
        return [[e.eta.real, e.eta.imag] for e in self.leading]


def check_assumption1(sa: Spectrum, so: Spectrum, p: ModelParams) -> Assumption1Check:
    """Whether the leading Jacobian eigenvalues are exactly one non-real conjugate pair.

    The leading set does not depend on ``u > 0``; it is evaluated at ``u*``
    when ``K > 0`` and at ``u = 1`` otherwise.
    """
    km = compute_K(sa, so, p)
    u = p.d / km.value if km.value > 0 else 1.0
    composed = spectral.compose_jacobian_spectrum(sa, so, p, u, with_vectors=False)
    top = max(e.eta.real for e in composed)
    lead = [e for e in composed if top - e.eta.real <= EQ_TOL * max(1.0, u)]
    if len(lead) != 2:
        return Assumption1Check(False, lead, f"leading set has {len(lead)} eigenvalues")
    a, b = lead[0].eta, lead[1].eta
    if abs(a.imag) <= EQ_TOL or abs(b.imag) <= EQ_TOL:
        return Assumption1Check(False, lead, "leading eigenvalues are real")
    if abs(a - np.conj(b)) > EQ_TOL * max(1.0, abs(a)):
        return Assumption1Check(False, lead, "leading eigenvalues are not a conjugate pair")
    return Assumption1Check(True, lead, "one complex-conjugate leading pair")


@dataclass
class HopfVectors:
    va: np.ndarray
    vo: np.ndarray
    wa: np.ndarray
    wo: np.ndarray
    orthogonality_defect: float

    @property
    def v(self) -> np.ndarray:
        return np.kron(self.va, self.vo)

    @property
    def w(self) -> np.ndarray:
        return np.kron(self.wa, self.wo)


def normalize_hopf_eigenvectors(va, vo, wa, wo, tol: float = 1e-12) -> HopfVectors:
    """Scale eigenvectors so that ``<wa (x) wo, va (x) vo> = 2``.

    Right vectors get unit norm with their first largest-modulus entry real
    positive. ``wa`` absorbs the factor 2 and ``wo`` is scaled to
    ``<wo, vo> = 1``. The companion condition
    ``<conj(wa (x) wo), va (x) vo> = 0`` is measured and returned as
    ``orthogonality_defect`` but not enforced.
    """
    va = spectral.gauge_fix(va)
    vo = spectral.gauge_fix(vo)
    wa = np.asarray(wa, dtype=complex)
    wo = np.asarray(wo, dtype=complex)
    sa = np.vdot(wa, va)
    so = np.vdot(wo, vo)
    if abs(sa) <= tol * np.linalg.norm(wa) or abs(so) <= tol * np.linalg.norm(wo):
        raise BifurcationError("defective or mispaired eigenvectors: <w, v> vanishes")
    wa = wa * np.conj(2.0 / sa)
    wo = wo / np.conj(so)
    defect = abs(np.vdot(np.conj(np.kron(wa, wo)), np.kron(va, vo)))
    return HopfVectors(va, vo, wa, wo, float(defect))


def hopf_vectors(sa: Spectrum, so: Spectrum, lam: complex, mu: complex) -> HopfVectors:
    """Normalized eigenvectors for the generating pair ``(lam, mu)``.

    The right vectors belong to ``conj(lam)`` and ``conj(mu)``. The
    transpose-left eigenvector of ``lam`` is the Hermitian-left eigenvector
    of ``conj(lam)``, so both come from the same eigenpair.
    """
    pa = sa.nearest(np.conj(lam))
    po = so.nearest(np.conj(mu))
    return normalize_hopf_eigenvectors(pa.right, po.right, pa.left, po.left)


def hopf_coefficient_b(lambda_dagger: complex, mu_dagger: complex, vecs: HopfVectors,
                       p: ModelParams) -> float:
    """Criticality coefficient; negative means a supercritical (stable) branch."""
    lam, mu = complex(lambda_dagger), complex(mu_dagger)
    q1 = p.alpha + p.gamma * lam
    q2 = p.beta + p.delta * lam
    factor = (p.s1.third_derivative * q1 * abs(q1) ** 2
              + p.s2.third_derivative * q2 * mu * abs(q2) ** 2 * abs(mu) ** 2)
    v = vecs.v
    cubic = np.vdot(vecs.w, (np.conj(v) * v) * v)
    return float(np.real(factor * cubic))


def criticality(b: float, tol: float = TOL_B) -> Criticality:
    if b < -tol:
        return Criticality.SUPERCRITICAL
    if b > tol:
        return Criticality.SUBCRITICAL
    return Criticality.DEGENERATE


@dataclass
class HopfReport:
    K: Optional[float]
    u_star: Optional[float]
    lambda_dagger: Optional[complex]
    mu_dagger: Optional[complex]
    omega: Optional[float]
    b: Optional[float]
    criticality: Optional[Criticality]
    predicted_period: Optional[float]
    phase: Optional[np.ndarray]
    amplitude: Optional[np.ndarray]
    assumption1: bool
    notes: list = field(default_factory=list)
    reference: tuple = (0, 0)
    leading: list = field(default_factory=list)

    @property
    def available(self) -> bool:
        return self.assumption1 and self.phase is not None

    def to_dict(self) -> dict:
        def cplx(z):
            return None if z is None else [float(np.real(z)), float(np.imag(z))]

        def mat(m):
            return None if m is None else np.asarray(m, dtype=float).tolist()

        return {
            "K": self.K,
            "u_star": self.u_star,
            "lambda_dagger": cplx(self.lambda_dagger),
            "mu_dagger": cplx(self.mu_dagger),
            "omega": self.omega,
            "b": self.b,
            "criticality": None if self.criticality is None else self.criticality.value,
            "predicted_period": self.predicted_period,
            "phase": mat(self.phase),
            "amplitude": mat(self.amplitude),
            "assumption1": self.assumption1,
            "notes": list(self.notes),
            "reference": list(self.reference),
            "leading": [cplx(z) for z in self.leading],
        }


def _spectra(ga: SignedGraph, go: Optional[SignedGraph]):
    return spectral.eig(ga.adjacency), spectral.eig(spectral.topic_matrix(go))


def predict_oscillation(ga: SignedGraph, go: Optional[SignedGraph], p: ModelParams) -> HopfReport:
    """Full Hopf prediction for a graph pair; ``go=None`` is the single-topic model.

    Failures (``K <= 0``, Assumption 1 violated) are encoded in the report
    rather than raised.
    """
    p = spectral.effective_params(p, go)
    sa, so = _spectra(ga, go)
    km = compute_K(sa, so, p)
    notes = []
    empty = dict(lambda_dagger=None, mu_dagger=None, omega=None, b=None, criticality=None,
                 predicted_period=None, phase=None, amplitude=None)
    if km.value <= 0:
        notes.append("K <= 0: the origin never loses stability through this mechanism")
        return HopfReport(K=km.value, u_star=None, assumption1=False, notes=notes, **empty)
    u_star = critical_attention(p, km.value)
    a1 = check_assumption1(sa, so, p)
    leading = [e.eta for e in a1.leading]
    if not a1.holds:
        notes.append(f"Assumption 1 fails: {a1.reason}")
        if len(a1.leading) > 2:
            pairs = sorted({(e.lam_index, e.mu_index) for e in a1.leading})
            cands = [(sa.values[i], so.values[j]) for i, j in pairs]
            notes.append("degenerate leading set; generating pairs: "
                         + ", ".join(f"({_fmt(l)}, {_fmt(m)})" for l, m in cands))
        return HopfReport(K=km.value, u_star=u_star, assumption1=False, notes=notes,
                          leading=leading, **empty)

    lam, mu = km.lam, km.mu
    vecs = hopf_vectors(sa, so, lam, mu)
    if vecs.orthogonality_defect > 1e-8:
        notes.append(f"biorthogonality defect {vecs.orthogonality_defect:.3g}")
    b = hopf_coefficient_b(lam, mu, vecs, p)
    crit = criticality(b)
    if crit is Criticality.DEGENERATE:
        notes.append("degenerate Hopf point (b = 0): criticality is not determined at third order")
    im = spectral.social_contribution(lam, mu, p).imag
    omega = u_star * abs(im)
    period = 2 * math.pi / omega if omega > 0 else None

    v = vecs.v.reshape(ga.n, -1)
    amp = np.abs(v)
    amp = amp / amp.max()
    ref = (0, 0)
    if amp[ref] < PHASE_REF_TOL:
        ref = tuple(int(x) for x in np.unravel_index(np.argmax(amp), amp.shape))
        notes.append(f"phase reference moved to component {(ref[0] + 1, ref[1] + 1)}")
    phase = np.mod(np.angle(v) - np.angle(v[ref]), 2 * math.pi)
    phase[np.isclose(phase, 2 * math.pi, rtol=0, atol=1e-12)] = 0.0
    silent = amp < PHASE_REF_TOL
    if silent.any():
        phase[silent] = 0.0
        notes.append("components with zero predicted amplitude get phase 0: "
                     + ", ".join(str((i + 1, j + 1)) for i, j in np.argwhere(silent)))
    return HopfReport(K=km.value, u_star=u_star, lambda_dagger=lam, mu_dagger=mu, omega=omega,
                      b=b, criticality=crit, predicted_period=period, phase=phase,
                      amplitude=amp, assumption1=True, notes=notes, reference=ref,
                      leading=leading)


def _fmt(z: complex) -> str:
    return f"{z.real:.4g}{z.imag:+.4g}i"


def oscillation_threshold(sb: Spectrum, sc: Spectrum, p: ModelParams, which: str) -> float:
    """Gain threshold above which the complex leading pair of ``sc`` drives a Hopf point.

    Parameters
    ----------
    sb : Spectrum
        Spectrum of the eventually balanced graph (strictly dominant real
        eigenvalue ``rho > 0``).
    sc : Spectrum
        Spectrum of the graph whose leading eigenvalues are a complex pair
        ``kappa, conj(kappa)`` with ``Re kappa > 0``.
    which : {"gamma", "beta"}
        ``"gamma"`` when ``sb`` belongs to the communication graph (the
        threshold is on gamma), ``"beta"`` when it belongs to the belief
        system graph.

    Returns
    -------
    float
        The threshold. A negative value means every nonnegative gain already
        satisfies it; ``-inf`` only when the balanced graph has a single node.
    """
    if which not in ("gamma", "beta"):
        raise ValueError("which must be 'gamma' or 'beta'")
    dom = spectral.dominant_pair(sb)
    if dom is None:
        raise BifurcationError("balanced graph lacks a simple, real, strictly dominant eigenvalue")
    rho = dom.value.real
    lead = spectral.leading_eigenvalues(sc)
    if len(lead) != 2 or abs(lead[0].value.imag) <= EQ_TOL:
        raise BifurcationError("leading eigenvalues are not a single complex-conjugate pair")
    kappa = lead[0].value
    if kappa.real <= 0:
        raise BifurcationError("complex leading pair must have positive real part")
    other = p.beta if which == "gamma" else p.gamma
    worst = -math.inf
    for x in sb.values:
        if abs(x - rho) <= EQ_TOL:
            continue
        gap = rho - x.real
        for y in sc.values:
            num = other * (kappa - y).real + p.delta * (kappa * rho - y * x).real
            worst = max(worst, -num / gap)
    if worst == -math.inf:
        return worst
    return 0.0 if abs(worst) <= EQ_TOL else float(worst)


@dataclass
class GraphClassification:
    verdict: Verdict
    reason: Reason
    thresholds: dict = field(default_factory=dict)
    generating_pair: Optional[tuple] = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        pair = None
        if self.generating_pair is not None:
            pair = [[float(np.real(z)), float(np.imag(z))] for z in self.generating_pair]
        thr = {k: (None if v == -math.inf else v) for k, v in self.thresholds.items()}
        return {"verdict": self.verdict.value, "reason": self.reason.value,
                "thresholds": thr, "generating_pair": pair, "notes": list(self.notes)}


def _complex_leading(s: Spectrum) -> Optional[complex]:
    lead = spectral.leading_eigenvalues(s)
    if len(lead) == 2 and lead[0].value.imag > EQ_TOL and lead[0].value.real > 0:
        return lead[0].value
    return None


def classify_graphs(ga: SignedGraph, go: Optional[SignedGraph], p: ModelParams) -> GraphClassification:
    """Sort a graph pair into never / supports / indeterminate for oscillations."""
    go_undirected = True if go is None else is_undirected(go)
    if is_undirected(ga) and go_undirected:
        return GraphClassification(Verdict.NEVER_OSCILLATES, Reason.UNDIRECTED_PAIR)
    ao = spectral.topic_matrix(go)
    balanced_a = find_switching_to_eventually_positive(ga) is not None
    balanced_o = spectral.is_eventually_positive(ao) if go is None else (
        find_switching_to_eventually_positive(go) is not None)
    if balanced_a and balanced_o:
        return GraphClassification(Verdict.NEVER_OSCILLATES, Reason.BOTH_EVENTUALLY_BALANCED)

    pe = spectral.effective_params(p, go)
    sa, so = _spectra(ga, go)
    for balanced, sb, sc, which, gain in (
        (balanced_a, sa, so, "gamma", pe.gamma),
        (balanced_o, so, sa, "beta", pe.beta),
    ):
        if not balanced:
            continue
        kappa = _complex_leading(sc)
        if kappa is None:
            continue
        thr = oscillation_threshold(sb, sc, pe, which)
        rho = spectral.dominant_pair(sb).value.real
        pair = (rho, kappa) if which == "gamma" else (kappa, rho)
        notes = []
        coupling = (pe.beta if which == "gamma" else pe.gamma) + pe.delta * rho
        met = gain > thr
        if coupling <= 0:
            met = False
            notes.append("cross gains vanish: every pairing with the dominant eigenvalue ties, "
                         "so the leading set is degenerate at these gains")
        reason = Reason.THRESHOLD_MET if met else Reason.THRESHOLD_AVAILABLE
        return GraphClassification(Verdict.SUPPORTS_OSCILLATIONS, reason,
                                   {f"{which}_star": thr}, pair, notes)
    return GraphClassification(Verdict.INDETERMINATE, Reason.NO_CRITERION)
