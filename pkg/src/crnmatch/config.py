"""Load sweep configurations from flat ``key = value`` text or JSON.

An empty file gives the default experiment. Scenario fields and sweep fields
share one namespace, e.g.::

    # sweep.cfg
    trials = 10000
    n_values = 4
    m_values = 2,3,4,5
    alpha = 0.5
    beta_range = 0.5, 1.5
"""
from __future__ import annotations

import json
from dataclasses import fields, replace
from pathlib import Path
from typing import Any, Dict

from .harness import SweepConfig
from .scenario import ScenarioConfig

SCENARIO_KEYS = {f.name for f in fields(ScenarioConfig)}
SWEEP_KEYS = {f.name for f in fields(SweepConfig)} - {"scenario"}
TUPLE_KEYS = {"m_values", "n_values", "algorithms", "beta_range"}


def _parse_value(text: str) -> Any:
    text = text.strip()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    if "," in text:
        return [_parse_value(part) for part in text.split(",") if part.strip()]
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    return text


def parse_text(text: str) -> Dict[str, Any]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = _parse_value(value)
    return out


def sweep_from_mapping(data: Dict[str, Any], base: SweepConfig | None = None) -> SweepConfig:
    base = base or SweepConfig()
    scen, sweep = {}, {}
    for key, value in data.items():
        if key in TUPLE_KEYS:
            value = tuple(value) if isinstance(value, (list, tuple)) else (value,)
        if key in SCENARIO_KEYS:
            scen[key] = value
        elif key in SWEEP_KEYS:
            sweep[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    scenario = replace(base.scenario, **scen)
    return replace(base, scenario=scenario, **sweep)


def load_config(path) -> SweepConfig:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        data = json.loads(text) if text.strip() else {}
    else:
        data = parse_text(text)
    return sweep_from_mapping(data)
