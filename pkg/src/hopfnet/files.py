"""Trajectory CSV, JSON reports and atomic file writes."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .dynamics import Trajectory


def atomic_write(path, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def csv_header(n_agents: int, n_topics: int) -> list[str]:
    return ["t"] + [f"z_{i}_{j}" for i in range(1, n_agents + 1) for j in range(1, n_topics + 1)]


def trajectory_csv(traj: Trajectory) -> str:
    """CSV text: header ``t,z_1_1,...`` (agent-major), 17 significant digits, LF endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(traj.n_agents, traj.n_topics))
    for t, row in zip(traj.times, traj.states):
        w.writerow([format(float(t), ".17g")] + [format(float(x), ".17g") for x in row])
    return buf.getvalue()


def write_trajectory_csv(traj: Trajectory, path) -> Path:
    return atomic_write(path, trajectory_csv(traj))


def read_trajectory_csv(path) -> Trajectory:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    if not header or header[0] != "t":
        raise ValueError(f"{path}: first column must be 't'")
    last = header[-1].split("_")
    n_agents, n_topics = int(last[1]), int(last[2])
    if header != csv_header(n_agents, n_topics):
        raise ValueError(f"{path}: unexpected header")
    data = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float)
    return Trajectory(data[:, 0], data[:, 1:], n_agents, n_topics)
