"""Model gains and saturation functions for the belief dynamics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np


@dataclass(frozen=True)
class SaturationSpec:
    """Scaled hyperbolic tangent ``S(y) = amplitude * tanh(slope * y)``.

    ``amplitude * slope`` must equal 1 so that ``S'(0) = 1``. The function is
    odd and bounded by ``amplitude``, and ``S'''(0) = -2 * slope**2``.
    """

    amplitude: float = 1.0
    slope: float = 1.0
    family: str = "tanh"

    def __post_init__(self):
        if self.family != "tanh":
            raise ValueError(f"unsupported saturation family {self.family!r}")
        if not (self.amplitude > 0 and self.slope > 0):
            raise ValueError("saturation amplitude and slope must be positive")
        if not math.isclose(self.amplitude * self.slope, 1.0, rel_tol=1e-12):
            raise ValueError(
                f"saturation needs amplitude*slope == 1 (got {self.amplitude * self.slope!r})"
            )

    def __call__(self, y):
        return self.amplitude * np.tanh(self.slope * y)

    @property
    def bound(self) -> float:
        return self.amplitude

    @property
    def third_derivative(self) -> float:
        """Value of ``S'''(0)``."""
        return -2.0 * self.amplitude * self.slope**3

    def to_dict(self) -> dict:
        return {"family": self.family, "amplitude": self.amplitude, "slope": self.slope}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SaturationSpec":
        return cls(
            amplitude=float(data.get("amplitude", 1.0)),
            slope=float(data.get("slope", 1.0)),
            family=str(data.get("family", "tanh")),
        )


def _default_s2() -> SaturationSpec:
    return SaturationSpec(amplitude=0.5, slope=2.0)


@dataclass(frozen=True)
class ModelParams:
    """Gains of the belief update law.

    Parameters
    ----------
    d : float
        Resistance to forming strong beliefs, ``d > 0``.
    u : float
        Attention to social influence; the bifurcation parameter.
    alpha, beta, gamma, delta : float
        Self-reinforcement, belief-system adherence, social imitation and
        ideological commitment gains. All nonnegative.
    s1, s2 : SaturationSpec
        Same-topic and cross-topic saturations. Defaults are ``tanh(y)`` and
        ``tanh(2y)/2``.
    """

    d: float = 1.0
    u: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    s1: SaturationSpec = field(default_factory=SaturationSpec)
    s2: SaturationSpec = field(default_factory=_default_s2)

    def __post_init__(self):
        values = dict(d=self.d, u=self.u, alpha=self.alpha, beta=self.beta,
                      gamma=self.gamma, delta=self.delta)
        for name, value in values.items():
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
        if self.d <= 0:
            raise ValueError("d must be positive")
        for name in ("u", "alpha", "beta", "gamma", "delta"):
            if values[name] < 0:
                raise ValueError(f"{name} must be nonnegative")

    def with_u(self, u: float) -> "ModelParams":
        return replace(self, u=float(u))

    def single_topic(self) -> "ModelParams":
        """Copy with the cross-topic gains zeroed."""
        return replace(self, beta=0.0, delta=0.0)

    def to_dict(self) -> dict:
        return {
            "d": self.d, "u": self.u, "alpha": self.alpha, "beta": self.beta,
            "gamma": self.gamma, "delta": self.delta,
            "s1": self.s1.to_dict(), "s2": self.s2.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelParams":
        kwargs = {k: float(data[k]) for k in ("d", "u", "alpha", "beta", "gamma", "delta") if k in data}
        if "s1" in data:
            kwargs["s1"] = SaturationSpec.from_dict(data["s1"])
        if "s2" in data:
            kwargs["s2"] = SaturationSpec.from_dict(data["s2"])
        return cls(**kwargs)
