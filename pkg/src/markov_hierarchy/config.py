"""Run configuration: a YAML document with a closed set of keys.

Example::

    scenario: lambda
    delta_ref: 1.0
    parameters: {rabi0: 0.4, rabi1: 0.3, detuning: 1.0}
    methods: [exact, markov0, markov1]
    condition: a
    grid: {t_max: 120, steps: 12000}
    output: out/fig3

Frequencies (parameters, inline matrix entries, fixed shifts) are given in
units of ``delta_ref``; ``grid.t_max`` is in units of ``1 / delta_ref``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .model import PRESETS, PartitionPlan, Scenario

METHODS = ("exact", "markov0", "markov1", "markov1d")
TOP_KEYS = {"scenario", "delta_ref", "parameters", "plan", "methods", "condition", "grid", "output"}
GRID_KEYS = {"t_max", "steps"}
PLAN_KEYS = {"name", "relevant", "stages"}
MATRIX_KEYS = {"matrix", "imag", "labels"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str | dict
    delta_ref: float
    parameters: dict[str, float] = field(default_factory=dict)
    plan: Any = None
    methods: tuple[str, ...] = ("exact", "markov0", "markov1")
    condition: str = "a"
    t_max: float = 100.0
    steps: int = 10000
    output: str = "out/run"

    def validate(self) -> None:
        if not (isinstance(self.delta_ref, (int, float)) and math.isfinite(self.delta_ref) and self.delta_ref > 0):
            raise ConfigError("delta_ref must be a positive number")
        if not self.methods:
            raise ConfigError("methods must not be empty")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"unknown methods {bad}; choose from {list(METHODS)}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("methods are listed twice")
        if not (self.t_max > 0):
            raise ConfigError("grid.t_max must be positive")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ConfigError("grid.steps must be an integer >= 2")
        for k, v in self.parameters.items():
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise ConfigError(f"parameter {k} must be a finite number")
        if isinstance(self.scenario, str):
            if self.scenario not in PRESETS:
                raise ConfigError(f"unknown scenario {self.scenario!r}; see list-scenarios")
            allowed = set(PRESETS[self.scenario].parameters)
            extra = set(self.parameters) - allowed
            if extra:
                raise ConfigError(f"unknown parameters for {self.scenario}: {sorted(extra)}")
        else:
            _check_keys(self.scenario, MATRIX_KEYS, "scenario")
            if "matrix" not in self.scenario:
                raise ConfigError("inline scenario needs a 'matrix' entry")
            if self.plan is None:
                raise ConfigError("inline scenario needs an explicit plan")
            if self.parameters:
                raise ConfigError("inline scenario takes no parameters")


def _check_keys(mapping: Any, allowed: set[str], where: str) -> None:
    if not isinstance(mapping, dict):
        raise ConfigError(f"{where} must be a mapping")
    extra = set(mapping) - allowed
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")


def parse_config(doc: Any) -> RunConfig:
    _check_keys(doc, TOP_KEYS, "config")
    for key in ("scenario", "delta_ref", "methods", "grid", "output"):
        if key not in doc:
            raise ConfigError(f"missing required key {key!r}")
    grid = doc["grid"]
    _check_keys(grid, GRID_KEYS, "grid")
    if set(grid) != GRID_KEYS:
        raise ConfigError("grid needs t_max and steps")
    methods = doc["methods"]
    if isinstance(methods, str):
        methods = [methods]
    if not isinstance(methods, list):
        raise ConfigError("methods must be a list")
    params = doc.get("parameters") or {}
    if not isinstance(params, dict):
        raise ConfigError("parameters must be a mapping")
    try:
        cfg = RunConfig(
            scenario=doc["scenario"],
            delta_ref=doc["delta_ref"],
            parameters=dict(params),
            plan=doc.get("plan"),
            methods=tuple(str(m).lower() for m in methods),
            condition=str(doc.get("condition", "a")),
            t_max=float(grid["t_max"]),
            steps=grid["steps"],
            output=str(doc["output"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate()
    cfg.steps = int(cfg.steps)
    return cfg


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    return parse_config(doc)


def _plan_from_mapping(entry: dict) -> tuple[str, PartitionPlan]:
    _check_keys(entry, PLAN_KEYS, "plan")
    if "relevant" not in entry or "stages" not in entry:
        raise ConfigError("plan needs 'relevant' and 'stages'")
    try:
        plan = PartitionPlan(tuple(entry["relevant"]), tuple(tuple(s) for s in entry["stages"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed plan: {exc}") from exc
    name = str(entry.get("name", "+".join(str(len(x)) for x in (plan.relevant,) + plan.stages)))
    return name, plan


def resolve_scenario(cfg: RunConfig) -> Scenario:
    """Build the scenario in absolute units and select its plans."""
    if isinstance(cfg.scenario, str):
        info = PRESETS[cfg.scenario]
        kw = {**info.defaults, **cfg.parameters}
        base = info.build(**{k: v * cfg.delta_ref for k, v in kw.items()})
        h, labels, available = base.hamiltonian, base.labels, base.plans
    else:
        try:
            h = np.array(cfg.scenario["matrix"], dtype=float).astype(np.complex128)
            if "imag" in cfg.scenario:
                h = h + 1j * np.array(cfg.scenario["imag"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed inline matrix: {exc}") from exc
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ConfigError("inline matrix must be square")
        h = h * cfg.delta_ref
        labels = tuple(str(x) for x in cfg.scenario.get("labels", range(h.shape[0])))
        if len(labels) != h.shape[0]:
            raise ConfigError("need one label per basis state")
        available = {}

    entries = cfg.plan
    if entries is None:
        plans = {next(iter(available)): available[next(iter(available))]}
    else:
        if not isinstance(entries, list):
            entries = [entries]
        plans = {}
        for entry in entries:
            if isinstance(entry, str):
                if entry not in available:
                    raise ConfigError(f"unknown plan {entry!r}; available: {list(available)}")
                plans[entry] = available[entry]
            else:
                name, plan = _plan_from_mapping(entry)
                plans[name] = plan
    for name, plan in plans.items():
        try:
            plan.validate(h.shape[0])
        except IndexError as exc:
            raise ConfigError(f"plan {name}: {exc}") from exc
    name = cfg.scenario if isinstance(cfg.scenario, str) else "inline"
    return Scenario(name, h, labels, plans)
