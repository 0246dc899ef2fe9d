"""Seeded Monte-Carlo harness for the distance-convergence and DP-approximation experiments.

Every replication draws from its own seed stream, keyed by the base seed, the
experiment id, the grid value and the replication index, so adding grid
points or replications never changes rows that were already computed.
Rows are written in a fixed order with 17-significant-digit floats, so a
given configuration always produces byte-identical CSV files.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .hipm import AscentConfig, hipm_lip_distance, mean_lower_bound
from .measures import (DPParams, EmpiricalLaw, Grid, Uniform, UniformMixture,
                       empirical_hierarchical_estimator, hierarchical_empirical_measure,
                       sample_dirichlet_multinomial, sample_truncated_stick_breaking,
                       substream)
from .oracles import (FIG1_TRUE_VALUE, Cdf, dirmult_upper_bound,
                      hier_empirical_upper_bound, species_sampling_wow,
                      stickbreaking_upper_bound)
from .wow import wow_distance

log = logging.getLogger(__name__)

EXPERIMENTS = ("fig1-left", "fig1-right", "fig2-alpha", "fig2-N")
SCHEMA_VERSION = 1
SEED_ENV = "HIPM_LAB_SEED"

FIG1_HEADER = ["n", "estimator", "mean", "std", "stderr", "replications"]
FIG1_ESTIMATORS = ("wow", "hipm", "mean_lower_bound")
FIG2_HEADER = ["x", "approximation", "d_lip_estimate", "d_lip_std", "upper_bound", "replications"]
APPROXIMATIONS = ("dirichlet_multinomial", "stick_breaking", "hierarchical_empirical")

_DESK = {
    "fig1-left": dict(n_list=[16, 32, 64, 128, 256], m=1000, M=128, replications=8),
    "fig1-right": dict(n_list=[16, 32, 64, 128, 256], m=1000, M=128, replications=8),
    "fig2-alpha": dict(x_list=[1, 2, 5, 10, 20, 35, 50, 75, 100], fixed=50, n=64, m=1000,
                       M=64, replications=4),
    "fig2-N": dict(x_list=[1, 2, 5, 10, 20, 50, 100, 200, 400], fixed=50, n=64, m=1000,
                   M=64, replications=4),
}
_FULL_SCALE = {
    "fig1-left": dict(n_list=[16, 32, 64, 128, 256, 512, 1024], m=5000, M=250, replications=24),
    "fig1-right": dict(n_list=[16, 32, 64, 128, 256, 512, 1024], m=5000, M=250, replications=24),
    "fig2-alpha": dict(n=256, m=5000, M=250, replications=24),
    "fig2-N": dict(n=256, m=5000, M=250, replications=24),
}


@dataclass
class ExperimentConfig:
    """Parameters of one experiment run.

    fig1 runs use ``n_list``; fig2 runs use ``x_list`` (concentrations for
    ``fig2-alpha``, atom counts for ``fig2-N``) with the other parameter held
    at ``fixed`` and ``n`` members per law.
    """

    experiment: str
    n_list: list = field(default_factory=list)
    x_list: list = field(default_factory=list)
    fixed: float = 50
    n: int = 64
    m: int = 1000
    M: int = 128
    replications: int = 8
    seed: int = 0
    output_dir: str = "results"
    ascent: dict = field(default_factory=dict)
    jobs: int = 1
    schema: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ParameterError(
                f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}")
        if self.schema != SCHEMA_VERSION:
            raise ParameterError(f"unsupported config schema {self.schema!r}")
        for name in ("n", "m", "M", "replications", "jobs"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ParameterError(f"{name} must be a positive integer, got {value!r}")
        if self.M < 2:
            raise ParameterError("M must be at least 2")
        grid = self.n_list if self.is_fig1 else self.x_list
        if not grid:
            raise ParameterError("the parameter grid is empty")
        if any(not (v > 0) for v in grid):
            raise ParameterError("parameter grid values must be positive")
        if self.experiment == "fig2-N" and any(int(v) != v for v in grid):
            raise ParameterError("atom counts must be integers")
        if self.is_fig1 and any(int(v) != v for v in grid):
            raise ParameterError("member counts must be integers")
        if not (self.fixed > 0):
            raise ParameterError("fixed parameter must be positive")
        AscentConfig(**self.ascent)

    @property
    def is_fig1(self):
        return self.experiment.startswith("fig1")

    @classmethod
    def defaults(cls, experiment, paper_scale=False, **overrides):
        if experiment not in EXPERIMENTS:
            raise ParameterError(f"unknown experiment {experiment!r}")
        params = dict(_DESK[experiment])
        if paper_scale:
            params.update(_FULL_SCALE[experiment])
        params.update(overrides)
        return cls(experiment=experiment, **params)

    @classmethod
    def from_json(cls, text, experiment=None, paper_scale=False):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"invalid config JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ParameterError("config must be a JSON object")
        if obj.get("schema") != SCHEMA_VERSION:
            raise ParameterError(f"config needs \"schema\": {SCHEMA_VERSION}")
        exp = obj.pop("experiment", experiment)
        if experiment is not None and exp != experiment:
            raise ParameterError(f"config is for {exp!r}, not {experiment!r}")
        known = set(cls.__dataclass_fields__)
        unknown = set(obj) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        return cls.defaults(exp, paper_scale, **obj)

    def with_env_seed(self, environ=os.environ):
        raw = environ.get(SEED_ENV)
        if raw is None or raw == "":
            return self
        try:
            seed = int(raw)
        except ValueError:
            raise ParameterError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
        return replace(self, seed=seed)

    def to_dict(self):
        return asdict(self)


# --------------------------------------------------------------------------
# Seeding
# --------------------------------------------------------------------------


def _key(value):
    # stable integer key for a grid value (int or float)
    if float(value).is_integer():
        return int(value)
    return zlib.crc32(repr(float(value)).encode())


def replication_stream(config: ExperimentConfig, x, rep) -> np.random.SeedSequence:
    root = np.random.SeedSequence([int(config.seed), zlib.crc32(config.experiment.encode())])
    return substream(root, _key(x), int(rep))


def _ascent_config(config, stream):
    seed = int(stream.generate_state(1)[0])
    return AscentConfig(**{**config.ascent, "seed": seed})


# --------------------------------------------------------------------------
# fig1: convergence of the estimators in n
# --------------------------------------------------------------------------

FIG1_LEFT_BASES = (Uniform(-0.5, 0.5), UniformMixture(((-1.0, -0.75), (0.75, 1.0)), (0.5, 0.5)))
FIG1_RIGHT_BASE = Uniform(0.0, 1.0)


def fig1_params(experiment):
    if experiment == "fig1-left":
        return (DPParams(1.0, FIG1_LEFT_BASES[0], (-1.0, 1.0)),
                DPParams(1.0, FIG1_LEFT_BASES[1], (-1.0, 1.0)))
    p = DPParams(1.0, FIG1_RIGHT_BASE, (0.0, 1.0))
    return p, p


def fig1_replication(config: ExperimentConfig, n, rep):
    """The three estimates for one pair of draws at member count ``n``."""
    p1, p2 = fig1_params(config.experiment)
    stream = replication_stream(config, n, rep)
    q1 = empirical_hierarchical_estimator(p1, n, config.m, substream(stream, 0))
    q2 = empirical_hierarchical_estimator(p2, n, config.m, substream(stream, 1))
    grid = Grid(p1.domain[0], p1.domain[1], config.M)
    return {
        "wow": wow_distance(q1, q2),
        "hipm": hipm_lip_distance(q1, q2, grid, _ascent_config(config, substream(stream, 2))),
        "mean_lower_bound": mean_lower_bound(q1, q2),
    }


def _summary(values):
    values = np.asarray(values, dtype=float)
    mean = math.fsum(values) / values.size
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return mean, std, std / math.sqrt(values.size)


def _fmt(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _run_tasks(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def _completed_keys(path, header, key_column):
    """Grid values already present in an existing CSV (for resuming)."""
    if not path.exists():
        return set(), []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != header:
        return set(), []
    return {r[key_column] for r in rows[1:] if r}, rows[1:]


def run_fig1(config: ExperimentConfig, resume=False):
    """Run a fig1 experiment, writing ``<output_dir>/<experiment>.csv``.

    Rows are flushed after every member count, so an interrupted run can be
    continued with ``resume=True``. Returns the CSV path.
    """
    if not config.is_fig1:
        raise ParameterError(f"{config.experiment} is not a fig1 experiment")
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{config.experiment}.csv"
    done, kept = _completed_keys(path, FIG1_HEADER, 0) if resume else (set(), [])
    reference = None
    if config.experiment == "fig1-left":
        reference = species_sampling_wow(Cdf.from_base(FIG1_LEFT_BASES[0]),
                                         Cdf.from_base(FIG1_LEFT_BASES[1]))
    _write_metadata(config, path, reference=reference)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(FIG1_HEADER) + "\n")
        for row in kept:
            fh.write(",".join(row) + "\n")
        fh.flush()
        for n in sorted(int(v) for v in config.n_list):
            if str(n) in done:
                continue
            log.info("%s: n=%d (%d replications)", config.experiment, n, config.replications)
            results = _run_tasks(fig1_replication,
                                 [(config, n, r) for r in range(config.replications)],
                                 config.jobs)
            for name in FIG1_ESTIMATORS:
                mean, std, se = _summary([res[name] for res in results])
                fh.write(",".join([_fmt(n), name, _fmt(mean), _fmt(std), _fmt(se),
                                   _fmt(config.replications)]) + "\n")
            if reference is not None:
                fh.write(",".join([_fmt(n), "reference", _fmt(FIG1_TRUE_VALUE), _fmt(0.0),
                                   _fmt(0.0), _fmt(config.replications)]) + "\n")
            fh.flush()
    return path


# --------------------------------------------------------------------------
# fig2: finite-dimensional approximations of the DP
# --------------------------------------------------------------------------

FIG2_BASE = Uniform(0.0, 1.0)
_SAMPLERS = {
    "dirichlet_multinomial": sample_dirichlet_multinomial,
    "stick_breaking": sample_truncated_stick_breaking,
    "hierarchical_empirical": hierarchical_empirical_measure,
}


def fig2_point(config: ExperimentConfig, x):
    """(alpha, N) for grid value ``x``."""
    if config.experiment == "fig2-alpha":
        return float(x), int(config.fixed)
    return float(config.fixed), int(x)


def approximation_law(name, params: DPParams, N, n, stream) -> EmpiricalLaw:
    """``n`` independent draws of one finite approximation with ``N`` atoms."""
    sampler = _SAMPLERS[name]
    members = tuple(sampler(params, N, np.random.default_rng(substream(stream, i)))
                    for i in range(n))
    return EmpiricalLaw(members, params.domain)


def fig2_upper_bound(name, alpha, N, F0=None):
    F0 = F0 or Cdf.from_base(FIG2_BASE)
    if name == "dirichlet_multinomial":
        return dirmult_upper_bound(N, F0)
    if name == "stick_breaking":
        return stickbreaking_upper_bound(alpha, N, F0)
    return hier_empirical_upper_bound(alpha, N, F0)


def fig2_replication(config: ExperimentConfig, x, rep):
    """d_Lip estimates of the three approximations against one shared DP-side law."""
    alpha, N = fig2_point(config, x)
    params = DPParams(alpha, FIG2_BASE, (0.0, 1.0))
    stream = replication_stream(config, x, rep)
    reference = empirical_hierarchical_estimator(params, config.n, config.m, substream(stream, 0))
    grid = Grid(0.0, 1.0, config.M)
    out = {}
    for k, name in enumerate(APPROXIMATIONS, start=1):
        approx = approximation_law(name, params, N, config.n, substream(stream, k))
        ascent = _ascent_config(config, substream(stream, 10 + k))
        out[name] = hipm_lip_distance(reference, approx, grid, ascent)
    return out


def run_fig2(config: ExperimentConfig, resume=False):
    """Run a fig2 experiment, writing ``<output_dir>/<experiment>.csv``."""
    if config.is_fig1:
        raise ParameterError(f"{config.experiment} is not a fig2 experiment")
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{config.experiment}.csv"
    done, kept = _completed_keys(path, FIG2_HEADER, 0) if resume else (set(), [])
    _write_metadata(config, path)
    F0 = Cdf.from_base(FIG2_BASE)
    xs = sorted(config.x_list)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(FIG2_HEADER) + "\n")
        for row in kept:
            fh.write(",".join(row) + "\n")
        fh.flush()
        for x in xs:
            x_cell = _fmt(int(x) if float(x).is_integer() else x)
            if x_cell in done:
                continue
            log.info("%s: x=%s (%d replications)", config.experiment, x_cell, config.replications)
            results = _run_tasks(fig2_replication,
                                 [(config, x, r) for r in range(config.replications)],
                                 config.jobs)
            alpha, N = fig2_point(config, x)
            for name in APPROXIMATIONS:
                mean, std, _ = _summary([res[name] for res in results])
                bound = fig2_upper_bound(name, alpha, N, F0)
                fh.write(",".join([x_cell, name, _fmt(mean), _fmt(std), _fmt(bound),
                                   _fmt(config.replications)]) + "\n")
            fh.flush()
    return path


def _write_metadata(config, csv_path, **extra):
    meta = {"config": config.to_dict()}
    if config.is_fig1:
        meta["estimators"] = list(FIG1_ESTIMATORS)
        meta["dispersion"] = "std is the sample standard deviation over replications"
    else:
        alpha_or_n = "alpha" if config.experiment == "fig2-alpha" else "N"
        meta["x"] = alpha_or_n
        meta["estimator"] = (
            "d_Lip between an n-member hierarchical empirical law of DP(alpha, Unif[0,1]) "
            "with m atoms per member and n independent draws of the approximation; "
            "one DP-side law is shared by the three approximations in each replication")
    meta.update({k: v for k, v in extra.items() if v is not None})
    with open(str(csv_path) + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_experiment(config: ExperimentConfig, resume=False):
    if config.is_fig1:
        return run_fig1(config, resume)
    return run_fig2(config, resume)
