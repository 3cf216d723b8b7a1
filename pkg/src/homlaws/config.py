"""Run configuration: caps, budgets and sampling schedules."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields

from .colored import COMPOSITION_BUDGET
from .density import DEFAULT_DENSITY_CAP
from .duality import DEFAULT_SIZE_BUDGET
from .homomorphism import DEFAULT_AUT_CAP, DEFAULT_DISMANTLE_BUDGET
from .logic.evaluate import DEFAULT_EVAL_BUDGET, DEFAULT_TENSOR_BUDGET
from .structures import DEFAULT_ENUM_CAP, DEFAULT_LOOPLESS_CAP

THREADS_ENV = "HOMLAWS_THREADS"


@dataclass(frozen=True)
class Budgets:
    enum_cap: int = DEFAULT_ENUM_CAP
    loopless_cap: int = DEFAULT_LOOPLESS_CAP
    aut_cap: int = DEFAULT_AUT_CAP
    density_cap: int = DEFAULT_DENSITY_CAP
    dual_budget: int = DEFAULT_SIZE_BUDGET
    dismantle_budget: int = DEFAULT_DISMANTLE_BUDGET
    composition_budget: int = COMPOSITION_BUDGET
    eval_budget: int = DEFAULT_EVAL_BUDGET
    tensor_budget: int = DEFAULT_TENSOR_BUDGET
    chromatic_cap: int = 16


@dataclass(frozen=True)
class LimitSchedule:
    sizes: tuple = (50, 100, 200)
    seeds: int = 20
    seed: int = 0


@dataclass(frozen=True)
class DualValidation:
    exhaustive_n: int = 3
    random_trials: int = 200
    random_n: int = 6
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    budgets: Budgets = field(default_factory=Budgets)
    schedule: LimitSchedule = field(default_factory=LimitSchedule)
    dual: DualValidation = field(default_factory=DualValidation)
    threads: int = 1

    def to_json(self) -> dict:
        return asdict(self)


def _build(cls, obj: dict):
    known = {f.name for f in fields(cls)}
    unknown = set(obj) - known
    if unknown:
        raise ValueError(f"unknown {cls.__name__} keys: {sorted(unknown)}")
    out = {}
    for f in fields(cls):
        if f.name not in obj:
            continue
        v = obj[f.name]
        sub = {"budgets": Budgets, "schedule": LimitSchedule, "dual": DualValidation}.get(f.name)
        if sub is not None and cls is RunConfig:
            v = _build(sub, v)
        elif isinstance(v, list):
            v = tuple(v)
        out[f.name] = v
    return cls(**out)


def load_config(path: str | None = None, threads: int | None = None) -> RunConfig:
    """Defaults, overridden by a JSON file, overridden by the thread flag or env."""
    cfg = RunConfig()
    if path:
        with open(path) as fh:
            cfg = _build(RunConfig, json.load(fh))
    if threads is None and os.environ.get(THREADS_ENV):
        threads = int(os.environ[THREADS_ENV])
    if threads is not None:
        if threads < 1:
            raise ValueError("threads must be at least 1")
        cfg = RunConfig(cfg.budgets, cfg.schedule, cfg.dual, threads)
    return cfg
