"""Deterministic data files and flat configuration files.

Every CSV starts with one ``# {json}`` metadata line (sorted keys, no
timestamps) followed by a column header; floats are written with ``repr``
precision so identical inputs give byte-identical files.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

from .errors import IoError

ARTIFACT = "swanson_csm"
VERSION = "0.1.0"
UNITS = "hbar = b0 = 1 unless given; x in b0, p in hbar/b0, t in 1/omega"


def _plain(value):
    if is_dataclass(value):
        return {k: _plain(v) for k, v in asdict(value).items()}
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return _plain(value.item())
    if isinstance(value, complex):
        return {"re": _plain(value.real), "im": _plain(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if hasattr(value, "value") and not isinstance(value, (int, float, str, bool)):
        return value.value
    return value


def metadata(params=None, theta: float | None = None, **extra) -> dict:
    """Header dictionary with parameters, angle, units and artifact version."""
    meta = {"artifact": f"{ARTIFACT} {VERSION}", "units": UNITS}
    if params is not None:
        meta["params"] = _plain(params)
    if theta is not None:
        meta["theta"] = theta
    meta.update(_plain(extra))
    return meta


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=1)


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def format_csv(meta: dict, columns, rows) -> str:
    lines = ["# " + json.dumps(_plain(meta), sort_keys=True), ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _write(path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def write_csv(path, meta: dict, columns, rows) -> Path:
    """Write rows under a metadata line and a column header."""
    return _write(path, format_csv(meta, columns, rows))


def write_json(path, meta: dict, payload) -> Path:
    return _write(path, dumps({"meta": meta, "data": payload}) + "\n")


def read_csv(path):
    """Inverse of :func:`write_csv`: ``(meta, columns, rows as float array)``."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    meta = json.loads(lines[0][2:])
    columns = lines[1].split(",")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:]]) \
        if len(lines) > 2 else np.empty((0, len(columns)))
    return meta, columns, rows


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment.

    Keys use the long flag names without dashes (``alpha``, ``quad_panels``).
    Values are returned as strings.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise IoError(f"{path}:{number}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out
