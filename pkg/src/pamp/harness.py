"""Experiment orchestration: seeded parameter sweeps over (t, m, delta, k, alpha).

Each cell of the grid runs `trials` independent (graph, colours, dynamics)
executions.  Trial seeds are derived by hashing
(base_seed, t, m, round(delta*1e6), k, round(alpha*1e6), trial), so a cell's
results never depend on the rest of the grid or on worker scheduling; the
reduction is ordered, making CSV/JSON output byte-deterministic.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

from .dynamics import ProtocolConfig, default_max_steps, run
from .pa_graph import generate_pa
from .rng import stable_seed
from .threshold import alpha_star, effective_d, tau_star

__all__ = [
    "ConfigError",
    "ExperimentSpec",
    "TrialRecord",
    "CellResult",
    "SweepResult",
    "run_sweep",
    "emit",
    "load_sweep_json",
    "WORKERS_ENV",
]

WORKERS_ENV = "PAMP_WORKERS"

CSV_HEADER = "t,m,delta,k,alpha,trials,blue_rate,red_rate,nonconv_rate,cs_p50,cs_p95,tau_star"


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def _as_tuple(value, kind, name):
    # An explicitly empty axis is legal and yields an empty (header-only) sweep.
    items = value if isinstance(value, (list, tuple)) else [value]
    try:
        return tuple(kind(x) for x in items)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be {kind.__name__} or a list of them") from None


@dataclass(frozen=True)
class ExperimentSpec:
    """Grid axes (scalars accepted anywhere a list is), trial count, seeds,
    schedule epsilon, optional step-cap override and output paths."""

    t: tuple[int, ...]
    m: tuple[int, ...]
    delta: tuple[float, ...]
    k: tuple[int, ...]
    alpha: tuple[float, ...]
    trials: int
    base_seed: int
    epsilon: float = 0.1
    max_steps: int | None = None
    protocol: str = "mpk"
    strict_regime: bool = True
    out_csv: str | None = None
    out_json: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "t", _as_tuple(self.t, int, "t"))
        object.__setattr__(self, "m", _as_tuple(self.m, int, "m"))
        object.__setattr__(self, "delta", _as_tuple(self.delta, float, "delta"))
        object.__setattr__(self, "k", _as_tuple(self.k, int, "k"))
        object.__setattr__(self, "alpha", _as_tuple(self.alpha, float, "alpha"))
        if int(self.trials) < 1:
            raise ConfigError("trials must be >= 1")
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "base_seed", int(self.base_seed))
        if not float(self.epsilon) > 0:
            raise ConfigError("epsilon must be > 0")
        object.__setattr__(self, "epsilon", float(self.epsilon))
        if self.protocol not in ("mpk", "voter"):
            raise ConfigError(f"protocol must be 'mpk' or 'voter', got {self.protocol!r}")
        for t in self.t:
            if t < 1:
                raise ConfigError("every t must be >= 1")
        for m in self.m:
            if m < 1:
                raise ConfigError("every m must be >= 1")
        for k in self.k:
            if k < 5 or k % 2 == 0:
                raise ConfigError("every k must be an odd integer >= 5")
        for a in self.alpha:
            if not 0.0 <= a <= 1.0:
                raise ConfigError("every alpha must lie in [0, 1]")
        for d, m in product(self.delta, self.m):
            if not d > -m:
                raise ConfigError("every delta must exceed -m")
            if self.strict_regime and d < 0:
                raise ConfigError(
                    "delta < 0 is outside the regime the threshold predictions "
                    "cover; set strict_regime=false to sweep it anyway"
                )

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentSpec":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = {"t", "m", "delta", "k", "alpha", "trials", "base_seed"} - set(doc)
        if missing:
            raise ConfigError(f"missing required config keys: {sorted(missing)}")
        return cls(**doc)

    @classmethod
    def from_json_file(cls, path) -> "ExperimentSpec":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {
            "t": list(self.t),
            "m": list(self.m),
            "delta": list(self.delta),
            "k": list(self.k),
            "alpha": list(self.alpha),
            "trials": self.trials,
            "base_seed": self.base_seed,
            "epsilon": self.epsilon,
            "max_steps": self.max_steps,
            "protocol": self.protocol,
            "strict_regime": self.strict_regime,
            "out_csv": self.out_csv,
            "out_json": self.out_json,
        }

    def cells(self):
        return product(self.t, self.m, self.delta, self.k, self.alpha)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    winner: str | None
    consensus_step: int | None
    steps_run: int


def _nearest_rank(sorted_values, q):
    if not sorted_values:
        return None
    rank = math.ceil(q * len(sorted_values))
    return sorted_values[max(rank, 1) - 1]


@dataclass(frozen=True)
class CellResult:
    t: int
    m: int
    delta: float
    k: int
    alpha: float
    trials: int
    records: tuple[TrialRecord, ...]
    tau_star: float | None
    alpha_star: float | None
    regime: str
    max_steps: int

    @property
    def blue_wins(self) -> int:
        return sum(r.winner == "blue" for r in self.records)

    @property
    def red_wins(self) -> int:
        return sum(r.winner == "red" for r in self.records)

    @property
    def nonconv(self) -> int:
        return sum(r.winner is None for r in self.records)

    @property
    def blue_rate(self) -> float:
        return self.blue_wins / self.trials

    @property
    def red_rate(self) -> float:
        return self.red_wins / self.trials

    @property
    def nonconv_rate(self) -> float:
        return self.nonconv / self.trials

    def _converged_steps(self):
        return sorted(r.consensus_step for r in self.records if r.consensus_step is not None)

    @property
    def cs_p50(self) -> int | None:
        return _nearest_rank(self._converged_steps(), 0.50)

    @property
    def cs_p95(self) -> int | None:
        return _nearest_rank(self._converged_steps(), 0.95)

    @property
    def predicted_step(self) -> int | None:
        """Theory line ceil(tau_star) + 2: consensus expected at or before it."""
        if self.tau_star is None:
            return None
        return math.ceil(self.tau_star) + 2

    def csv_row(self) -> str:
        cs50, cs95 = self.cs_p50, self.cs_p95
        return ",".join(
            [
                str(self.t),
                str(self.m),
                repr(self.delta),
                str(self.k),
                repr(self.alpha),
                str(self.trials),
                f"{self.blue_rate:.6f}",
                f"{self.red_rate:.6f}",
                f"{self.nonconv_rate:.6f}",
                "" if cs50 is None else str(cs50),
                "" if cs95 is None else str(cs95),
                "" if self.tau_star is None else f"{self.tau_star:.9g}",
            ]
        )

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "m": self.m,
            "delta": self.delta,
            "k": self.k,
            "alpha": self.alpha,
            "trials": self.trials,
            "blue_rate": self.blue_rate,
            "red_rate": self.red_rate,
            "nonconv_rate": self.nonconv_rate,
            "cs_p50": self.cs_p50,
            "cs_p95": self.cs_p95,
            "tau_star": self.tau_star,
            "alpha_star": self.alpha_star,
            "regime": self.regime,
            "predicted_step": self.predicted_step,
            "max_steps": self.max_steps,
            "records": [
                {
                    "trial": r.trial,
                    "seed": r.seed,
                    "winner": r.winner,
                    "consensus_step": r.consensus_step,
                    "steps_run": r.steps_run,
                }
                for r in self.records
            ],
        }


@dataclass(frozen=True)
class SweepResult:
    spec: ExperimentSpec
    cells: tuple[CellResult, ...]

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(c.csv_row() for c in self.cells)
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {"spec": self.spec.to_dict(), "cells": [c.to_dict() for c in self.cells]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"


def trial_seed(base_seed: int, t: int, m: int, delta: float, k: int,
               alpha: float, trial: int) -> int:
    """Position-independent per-trial seed (reordering the grid never moves it)."""
    return stable_seed(
        base_seed, t, m, round(delta * 1e6), k, round(alpha * 1e6), trial
    )


def _run_trial(args) -> tuple[str | None, int | None, int]:
    t, m, delta, k, alpha, protocol, max_steps, seed = args
    g = generate_pa(t, m, delta, stable_seed("graph", seed))
    config = ProtocolConfig(k=k, alpha=alpha, seed=stable_seed("dyn", seed),
                            max_steps=max_steps)
    trace = run(g, config, protocol=protocol)
    return trace.winner, trace.consensus_step, trace.steps_run


def _cell_schedule(spec: ExperimentSpec, t: int, m: int, k: int):
    d = effective_d(m, k)
    if d >= 5 and t >= d:
        ts = tau_star(d, spec.epsilon, t)
        a_star = alpha_star(d)
    else:
        ts, a_star = None, None
    return ts, a_star


def _regime(alpha: float, a_star: float | None) -> str:
    if a_star is None:
        return "n/a"
    if alpha < a_star:
        return "subcritical"
    if alpha > a_star:
        return "supercritical"
    return "critical"


def resolve_workers(workers: int | None) -> int:
    """Explicit argument wins, then the PAMP_WORKERS variable, then 1."""
    if workers is not None:
        n = int(workers)
    else:
        env = os.environ.get(WORKERS_ENV, "").strip()
        try:
            n = int(env) if env else 1
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}")
    if n < 1:
        raise ConfigError(f"worker count must be >= 1, got {n}")
    return n


def run_sweep(spec: ExperimentSpec, workers: int | None = None) -> SweepResult:
    """Run every (t, m, delta, k, alpha) cell for spec.trials seeded trials.

    Trials are independent and may execute across a process pool; aggregation
    consumes results in submission order, so the outcome is identical for any
    worker count.
    """
    nworkers = resolve_workers(workers)
    tasks = []
    meta = []
    for (t, m, delta, k, alpha) in spec.cells():
        ts, a_star = _cell_schedule(spec, t, m, k)
        cap = spec.max_steps
        if cap is None:
            cap = default_max_steps(t, m, k, spec.epsilon)
        meta.append((t, m, delta, k, alpha, ts, a_star, cap))
        for trial in range(spec.trials):
            seed = trial_seed(spec.base_seed, t, m, delta, k, alpha, trial)
            tasks.append((t, m, delta, k, alpha, spec.protocol, cap, seed))

    if nworkers == 1 or len(tasks) <= 1:
        outcomes = [_run_trial(a) for a in tasks]
    else:
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            chunk = max(1, len(tasks) // (4 * nworkers))
            outcomes = list(pool.map(_run_trial, tasks, chunksize=chunk))

    cells = []
    pos = 0
    for (t, m, delta, k, alpha, ts, a_star, cap) in meta:
        records = []
        for trial in range(spec.trials):
            seed = tasks[pos][-1]
            winner, cstep, steps = outcomes[pos]
            records.append(TrialRecord(trial, seed, winner, cstep, steps))
            pos += 1
        cells.append(
            CellResult(
                t=t, m=m, delta=delta, k=k, alpha=alpha, trials=spec.trials,
                records=tuple(records), tau_star=ts, alpha_star=a_star,
                regime=_regime(alpha, a_star), max_steps=cap,
            )
        )
    return SweepResult(spec=spec, cells=tuple(cells))


def emit(result: SweepResult, fmt: str, path) -> None:
    """Write a sweep as csv or json; identical results give identical bytes."""
    if fmt == "csv":
        text = result.to_csv()
    elif fmt == "json":
        text = result.to_json()
    else:
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def load_sweep_json(path) -> dict:
    """Re-read an emitted JSON sweep (round trip equals to_json_obj())."""
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
