"""Nonlinear belief dynamics: vector field, integration and initial conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import spectral
from .params import ModelParams
from .signed_graph import SignedGraph


class IntegrationError(RuntimeError):
    pass


def make_rhs(ga: SignedGraph, go: Optional[SignedGraph], p: ModelParams,
             u: Optional[float] = None) -> Callable[[float, np.ndarray], np.ndarray]:
    """Vector field ``f(t, z)`` of the belief update law for flat agent-major ``z``.

    Each cross-topic term ``l != j`` is saturated separately, with
    ``(A_o)_{jl}`` multiplying both the internal and the social input inside
    ``S2``.
    """
    u = p.u if u is None else u
    p = spectral.effective_params(p, go)
    aa = ga.adjacency
    na = ga.n
    single = go is None
    ao = None if single else go.adjacency * (1.0 - np.eye(go.n))
    no = 1 if single else go.n
    d, alpha, beta, gamma, delta = p.d, p.alpha, p.beta, p.gamma, p.delta
    s1, s2 = p.s1, p.s2

    def f(t, z):
        Z = z.reshape(na, no)
        social = aa @ Z
        dz = -d * Z + u * s1(alpha * Z + gamma * social)
        if not single:
            inner = beta * Z + delta * social  # (na, no), indexed by topic l
            dz = dz + u * s2(inner[:, None, :] * ao[None, :, :]).sum(axis=2)
        return dz.reshape(-1)

    return f


def rhs(z, ga: SignedGraph, go: Optional[SignedGraph], p: ModelParams) -> np.ndarray:
    """Time derivative of the belief state ``z`` (length ``N_a * N_o``)."""
    z = np.asarray(z, dtype=float)
    no = 1 if go is None else go.n
    if z.shape != (ga.n * no,):
        raise ValueError(f"state has shape {z.shape}, expected ({ga.n * no},)")
    return make_rhs(ga, go, p)(0.0, z)


@dataclass(frozen=True)
class IntegrationSettings:
    rtol: float = 1e-8
    atol: float = 1e-10
    first_step: float = 1e-3
    max_step: Optional[float] = None  # defaults to t_final / 100
    stride: float = 0.1

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")
        if not self.first_step > 0 or not self.stride > 0:
            raise ValueError("first_step and stride must be positive")
        if self.max_step is not None and not self.max_step > 0:
            raise ValueError("max_step must be positive")


@dataclass
class Trajectory:
    """Sampled solution; ``states[k]`` is the agent-major state at ``times[k]``."""

    times: np.ndarray
    states: np.ndarray
    n_agents: int
    n_topics: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        if self.states.ndim != 2 or self.states.shape[0] != self.times.size:
            raise ValueError("states must have one row per time sample")
        if self.states.shape[1] != self.n_agents * self.n_topics:
            raise ValueError("state width does not match n_agents * n_topics")
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(self.states)):
            raise ValueError("trajectory contains non-finite states")

    def __len__(self):
        return self.times.size

    def component(self, agent: int, topic: int) -> np.ndarray:
        """Series of ``z_{agent, topic}`` with 0-based indices."""
        return self.states[:, agent * self.n_topics + topic]

    def grid(self) -> np.ndarray:
        """States reshaped to ``(time, agent, topic)``."""
        return self.states.reshape(-1, self.n_agents, self.n_topics)


def integrate(ga: SignedGraph, go: Optional[SignedGraph], p: ModelParams, z0,
              t_final: float, settings: IntegrationSettings = IntegrationSettings(),
              u: Optional[float] = None) -> Trajectory:
    """Integrate the belief dynamics with the Dormand-Prince 5(4) pair.

    Samples are taken from the dense output at multiples of
    ``settings.stride`` up to ``t_final``; the grid stays uniform, so the last
    sample may fall short of ``t_final`` by less than one stride.
    """
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    no = 1 if go is None else go.n
    z0 = np.asarray(z0, dtype=float)
    if z0.shape != (ga.n * no,):
        raise ValueError(f"initial state has shape {z0.shape}, expected ({ga.n * no},)")
    if not np.all(np.isfinite(z0)):
        raise ValueError("initial state must be finite")
    f = make_rhs(ga, go, p, u)
    n_samples = int(np.floor(t_final / settings.stride + 1e-9))
    t_eval = np.arange(n_samples + 1) * settings.stride
    t_eval[-1] = min(t_eval[-1], t_final)
    max_step = settings.max_step if settings.max_step is not None else t_final / 100
    sol = solve_ivp(f, (0.0, t_final), z0, method="RK45", t_eval=t_eval,
                    rtol=settings.rtol, atol=settings.atol,
                    first_step=min(settings.first_step, t_final), max_step=max_step)
    if sol.status != 0:
        raise IntegrationError(f"integration failed at t={sol.t[-1] if sol.t.size else 0.0}: {sol.message}")
    states = sol.y.T
    if not np.all(np.isfinite(states)):
        raise IntegrationError("non-finite state encountered")
    meta = {
        "params": p.with_u(p.u if u is None else u).to_dict(),
        "integrator": "RK45 (Dormand-Prince 5(4), scipy.integrate.solve_ivp)",
        "rtol": settings.rtol, "atol": settings.atol,
        "first_step": settings.first_step, "max_step": max_step,
        "stride": settings.stride, "t_final": t_final,
        "nfev": int(sol.nfev),
    }
    return Trajectory(sol.t, states, ga.n, no, meta)


def random_initial(n: int, scale: float = 0.01, seed: int = 0) -> np.ndarray:
    """Uniform draws on ``[-scale, scale]`` from PCG64 seeded with ``seed``.

    Doubles are formed from the top 53 bits of the raw 64-bit PCG64 outputs,
    so the stream does not depend on numpy's distribution code.
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    raw = np.random.PCG64(seed).random_raw(n)
    unit = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return scale * (2.0 * unit - 1.0)
