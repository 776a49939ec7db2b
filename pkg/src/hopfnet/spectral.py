"""Eigen-decomposition, Perron-Frobenius tests and the Kronecker-composed
Jacobian spectrum of the linearized belief dynamics.

States are ordered agent-major: belief of agent ``i`` on topic ``j`` sits
at index ``i * n_topics + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np
import scipy.linalg

from .params import ModelParams

if TYPE_CHECKING:
    from .signed_graph import SignedGraph

# eigenvalues closer than this are treated as equal
EQ_TOL = 1e-8
# relative tolerance for treating an eigenvector entry as zero
ZERO_ENTRY_TOL = 1e-8


class SpectralError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue with right and left eigenvectors.

    ``right`` has unit norm and its first largest-modulus entry is real and
    positive. ``left`` is the Hermitian left eigenvector,
    ``left.conj() @ A == value * left.conj()``, scaled so that
    ``vdot(left, right) == 1`` when that product is nonzero.
    """

    value: complex
    right: np.ndarray
    left: np.ndarray


@dataclass(frozen=True)
class Spectrum:
    """Eigenpairs sorted by descending real part, then descending imaginary part."""

    pairs: tuple[EigenPair, ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.pairs], dtype=complex)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, idx):
        return self.pairs[idx]

    def nearest(self, value: complex) -> EigenPair:
        return self.pairs[int(np.argmin(np.abs(self.values - value)))]


@dataclass(frozen=True)
class ComposedEig:
    """Jacobian eigenvalue ``eta`` generated by ``lam`` in sigma(A_a) and ``mu`` in sigma(A_o)."""

    eta: complex
    lam: complex
    mu: complex
    lam_index: int
    mu_index: int
    vector: Optional[np.ndarray] = None


def gauge_fix(v: np.ndarray) -> np.ndarray:
    """Scale to unit norm with the first largest-modulus entry real positive."""
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    mod = np.abs(v)
    k = int(np.argmax(mod >= (1.0 - 1e-8) * mod.max()))
    return v * (np.conj(v[k]) / mod[k])


def sort_order(values: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Indices ordering ``values`` by real part, then imaginary part, both descending.

    Real parts within ``tol`` of the running group head count as tied.
    """
    values = np.asarray(values, dtype=complex)
    order = list(np.argsort(-values.real, kind="stable"))
    out = []
    i = 0
    while i < len(order):
        head = values[order[i]].real
        j = i
        while j < len(order) and head - values[order[j]].real <= tol:
            j += 1
        group = sorted(order[i:j], key=lambda k: -values[k].imag)
        out.extend(group)
        i = j
    return np.array(out, dtype=int)


def _repair_vectors(a, value, right, left, scale, tol=1e-12):
    """Swap in SVD null vectors of ``A - value*I`` where LAPACK's vectors miss.

    Balancing can wreck eigenvectors when entries span many orders of
    magnitude even though the eigenvalues stay accurate.
    """
    right = np.asarray(right, dtype=complex)
    left = np.asarray(left, dtype=complex)
    shifted = a - value * np.eye(a.shape[0])
    bad_r = np.linalg.norm(shifted @ right) > tol * scale * np.linalg.norm(right)
    bad_l = np.linalg.norm(left.conj() @ shifted) > tol * scale * np.linalg.norm(left)
    if bad_r or bad_l:
        u, _, vh = np.linalg.svd(shifted)
        if bad_r:
            right = vh[-1].conj()
        if bad_l:
            left = u[:, -1]
    return right, left


def eig(a) -> Spectrum:
    """Full spectrum of a real square matrix with right and left eigenvectors."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("matrix has dimension zero")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    try:
        vals, vl, vr = scipy.linalg.eig(a, left=True, right=True, check_finite=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure is rare
        raise SpectralError(
            f"QR iteration failed to converge for {a.shape[0]}x{a.shape[0]} matrix {a.tolist()}: {exc}"
        ) from exc
    # conjugate pairs from LAPACK are exact; clean up signed zeros on real values
    vals = np.where(vals.imag == 0, vals.real + 0j, vals)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    pairs = []
    for k in sort_order(vals):
        right, left = _repair_vectors(a, vals[k], vr[:, k], vl[:, k], scale)
        right = gauge_fix(right)
        s = np.vdot(left, right)
        if abs(s) > 1e-12 * np.linalg.norm(left):
            left = left / np.conj(s)
        else:
            left = left / np.linalg.norm(left)
        pairs.append(EigenPair(complex(vals[k]), right, left))
    return Spectrum(tuple(pairs))


def leading_eigenvalues(s: Spectrum, tol: float = EQ_TOL) -> list[EigenPair]:
    """Pairs whose real part is within ``tol`` of the largest real part."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    top = max(p.value.real for p in s.pairs)
    return [p for p in s.pairs if top - p.value.real <= tol]


def dominant_pair(s: Spectrum, tol: float = EQ_TOL) -> Optional[EigenPair]:
    """The simple, real, positive eigenvalue strictly dominating all others in modulus."""
    mods = np.abs(s.values)
    k = int(np.argmax(mods))
    rho = mods[k]
    lead = s.pairs[k]
    if rho <= tol or abs(lead.value.imag) > tol or lead.value.real <= 0:
        return None
    others = np.delete(mods, k)
    if others.size and np.any(others > rho - tol):
        return None
    return lead


def has_strong_perron_frobenius(s: Spectrum) -> bool:
    """Unique strictly dominant real positive eigenvalue with a positive eigenvector."""
    lead = dominant_pair(s)
    if lead is None:
        return False
    v = lead.right
    scale = np.max(np.abs(v))
    if np.any(np.abs(v.imag) > ZERO_ENTRY_TOL * scale):
        return False
    # gauge fixing already makes the largest entry positive
    return bool(np.all(v.real > ZERO_ENTRY_TOL * scale))


def is_eventually_positive(a) -> bool:
    """``A`` and ``A.T`` both have the strong Perron-Frobenius property."""
    a = np.asarray(a, dtype=float)
    return has_strong_perron_frobenius(eig(a)) and has_strong_perron_frobenius(eig(a.T))


def topic_matrix(go: Optional["SignedGraph"]) -> np.ndarray:
    """Belief-system adjacency, or the scalar ``[[1]]`` in single-topic mode."""
    return np.ones((1, 1)) if go is None else go.adjacency


def effective_params(p: ModelParams, go: Optional["SignedGraph"]) -> ModelParams:
    """Single-topic models carry no cross-topic gains."""
    return p.single_topic() if go is None else p


def form_jacobian(ga: "SignedGraph", go: Optional["SignedGraph"], p: ModelParams,
                  u: Optional[float] = None) -> np.ndarray:
    """Jacobian of the belief dynamics at the origin (agent-major ordering).

    ``go=None`` selects the single-topic model (cross-topic gains ignored).
    """
    u = p.u if u is None else u
    p = effective_params(p, go)
    aa = ga.adjacency
    ao = topic_matrix(go)
    ia = np.eye(aa.shape[0])
    io = np.eye(ao.shape[0])
    return ((-p.d + u * p.alpha) * np.kron(ia, io)
            + u * p.gamma * np.kron(aa, io)
            + u * p.beta * np.kron(ia, ao)
            + u * p.delta * np.kron(aa, ao))


def social_contribution(lam, mu, p: ModelParams):
    """``alpha + gamma*lam + beta*mu + delta*lam*mu`` (broadcasts)."""
    return p.alpha + p.gamma * lam + p.beta * mu + p.delta * lam * mu


def eta(u: float, lam, mu, p: ModelParams):
    return -p.d + u * social_contribution(lam, mu, p)


def compose_jacobian_spectrum(sa: Spectrum, so: Spectrum, p: ModelParams,
                              u: Optional[float] = None,
                              with_vectors: bool = True) -> list[ComposedEig]:
    """All ``N_a * N_o`` Jacobian eigenvalues built from the factor spectra."""
    u = p.u if u is None else u
    out = []
    for i, pa in enumerate(sa.pairs):
        for j, po in enumerate(so.pairs):
            vec = np.kron(pa.right, po.right) if with_vectors else None
            out.append(ComposedEig(complex(eta(u, pa.value, po.value, p)),
                                   pa.value, po.value, i, j, vec))
    return out


def match_sorted(x: Sequence[complex], y: Sequence[complex]) -> float:
    """Largest distance after pairing two multisets by the canonical sort order."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape:
        raise ValueError("multisets differ in size")
    xs = x[sort_order(x, tol=1e-7)]
    ys = y[sort_order(y, tol=1e-7)]
    return float(np.max(np.abs(xs - ys))) if x.size else 0.0
