"""Experiment configuration: a single JSON document.

Example::

    {
      "name": "seven-agent ring",
      "communication": {"n": 2, "edges": [[1, 2, 1], [2, 1, -1]]},
      "belief_system": null,
      "params": {"d": 1, "u": 5.35, "alpha": 0.1, "gamma": 0.1},
      "simulation": {"seed": 1, "ic_scale": 0.01},
      "analysis": {"phase": 0.2}
    }

Omitting ``belief_system`` (or setting it to null) selects the single-topic
model, in which ``beta`` and ``delta`` are forced to zero.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Optional

from .analysis import Tolerances
from .params import ModelParams, SaturationSpec
from .signed_graph import GraphSpecError, SignedGraph, graph_from_spec


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimulationSettings:
    t_final: Optional[float] = None  # None: 50 predicted periods, or 500
    seed: int = 0
    ic_scale: float = 0.01
    rtol: float = 1e-8
    atol: float = 1e-10
    output_stride: Optional[float] = None  # None: predicted period / 100, or 0.1
    transient_fraction: float = 0.5


@dataclass(frozen=True)
class ExperimentConfig:
    communication: SignedGraph
    params: ModelParams
    belief_system: Optional[SignedGraph] = None
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    analysis: Tolerances = field(default_factory=Tolerances)
    name: str = ""

    @property
    def n_topics(self) -> int:
        return 1 if self.belief_system is None else self.belief_system.n

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "communication": _graph_dict(self.communication),
            "belief_system": None if self.belief_system is None else _graph_dict(self.belief_system),
            "params": self.params.to_dict(),
            "simulation": {f.name: getattr(self.simulation, f.name) for f in fields(SimulationSettings)},
            "analysis": self.analysis.to_dict(),
        }

    def dumps(self) -> str:
        """Canonical JSON form; loading it back and dumping again is byte-identical."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def with_params(self, **changes) -> "ExperimentConfig":
        return replace(self, params=replace(self.params, **changes))

    def with_simulation(self, **changes) -> "ExperimentConfig":
        return replace(self, simulation=replace(self.simulation, **changes))


def _graph_dict(g: SignedGraph) -> dict:
    edges = [[i, k, int(w) if float(w).is_integer() else w] for i, k, w in g.edges()]
    return {"n": g.n, "edges": edges}


_TOP_KEYS = {"name", "communication", "belief_system", "params", "simulation", "analysis"}
_PARAM_KEYS = {"d", "u", "alpha", "beta", "gamma", "delta", "s1", "s2"}
_SAT_KEYS = {"family", "amplitude", "slope"}


class _Locator:
    """Maps config keys back to line numbers in the source text."""

    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source

    def line_of(self, key: Optional[str]) -> Optional[int]:
        if key is None or not self.text:
            return None
        m = re.search(r'"%s"\s*:' % re.escape(key), self.text)
        return None if m is None else self.text.count("\n", 0, m.start()) + 1

    def error(self, where: str, message: str, key: Optional[str] = None) -> ConfigError:
        line = self.line_of(key or where.split(".")[-1])
        loc = f"{self.source}:{line}" if line else self.source
        return ConfigError(f"{loc}: {where}: {message}")


def _number(value, where, loc: _Locator, key=None, positive=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise loc.error(where, f"expected a finite number, got {value!r}", key)
    if positive and value <= 0:
        raise loc.error(where, f"must be positive, got {value!r}", key)
    return float(value)


def _check_keys(data, allowed, where, loc):
    if not isinstance(data, dict):
        raise loc.error(where, "expected a JSON object")
    extra = sorted(set(data) - allowed)
    if extra:
        raise loc.error(where, f"unknown key(s) {extra}", extra[0])


def config_from_dict(data: Any, source: str = "<config>", text: str = "") -> ExperimentConfig:
    loc = _Locator(text, source)
    _check_keys(data, _TOP_KEYS, "config", loc)
    if "communication" not in data:
        raise loc.error("config", "missing 'communication' graph")
    if "params" not in data:
        raise loc.error("config", "missing 'params'")

    graphs = {}
    for key in ("communication", "belief_system"):
        spec = data.get(key)
        if spec is None:
            graphs[key] = None
            continue
        if not isinstance(spec, dict):
            raise loc.error(key, "graph spec must be an object", key)
        try:
            graphs[key] = graph_from_spec(spec)
        except GraphSpecError as exc:
            raise loc.error(key, str(exc), key) from None

    raw = data["params"]
    _check_keys(raw, _PARAM_KEYS, "params", loc)
    kwargs = {}
    for k in ("d", "u", "alpha", "beta", "gamma", "delta"):
        if k in raw:
            kwargs[k] = _number(raw[k], f"params.{k}", loc, k)
    for k in ("s1", "s2"):
        if k in raw:
            _check_keys(raw[k], _SAT_KEYS, f"params.{k}", loc)
            try:
                kwargs[k] = SaturationSpec.from_dict(raw[k])
            except (TypeError, ValueError) as exc:
                raise loc.error(f"params.{k}", str(exc), k) from None
    if graphs["belief_system"] is None:
        kwargs["beta"] = 0.0
        kwargs["delta"] = 0.0
    try:
        params = ModelParams(**kwargs)
    except ValueError as exc:
        raise loc.error("params", str(exc)) from None

    sim_raw = data.get("simulation") or {}
    _check_keys(sim_raw, {f.name for f in fields(SimulationSettings)}, "simulation", loc)
    sim = SimulationSettings()
    sim_kwargs = {}
    for k, v in sim_raw.items():
        where = f"simulation.{k}"
        if k == "seed":
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise loc.error(where, f"seed must be a nonnegative integer, got {v!r}", k)
            sim_kwargs[k] = v
        elif k in ("t_final", "output_stride"):
            sim_kwargs[k] = _number(v, where, loc, k, positive=True, allow_none=True)
        elif k == "transient_fraction":
            f = _number(v, where, loc, k)
            if not 0 < f < 1:
                raise loc.error(where, "must lie in (0, 1)", k)
            sim_kwargs[k] = f
        else:
            sim_kwargs[k] = _number(v, where, loc, k, positive=True)
    sim = replace(sim, **sim_kwargs)

    tol_raw = data.get("analysis") or {}
    _check_keys(tol_raw, set(Tolerances().to_dict()), "analysis", loc)
    tol = Tolerances(**{k: _number(v, f"analysis.{k}", loc, k, positive=True) for k, v in tol_raw.items()})

    name = data.get("name", "")
    if not isinstance(name, str):
        raise loc.error("name", "must be a string")
    return ExperimentConfig(graphs["communication"], params, graphs["belief_system"], sim, tol, name)


def loads(text: str, source: str = "<config>") -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    return config_from_dict(data, source, text)


def load(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return loads(text, str(path))
