"""Discrete (hierarchical) measures and samplers for Dirichlet-process-type random measures.

A :class:`DiscreteMeasure` is one realization of a random probability on an
interval of the real line. An :class:`EmpiricalLaw` is the uniform mixture of
``n`` such realizations, i.e. a discrete law on the space of probabilities.
:class:`GriddedLaw` is the same object after every atom has been snapped to a
fixed equally spaced :class:`Grid`.

Randomness is always passed in explicitly. Samplers that produce several
independent members derive one substream per member index from a
:class:`numpy.random.SeedSequence`, so member ``i`` does not depend on how
many members are requested.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, ParameterError, ParseError, ShapeMismatchError

__all__ = [
    "DiscreteMeasure",
    "EmpiricalLaw",
    "Grid",
    "GriddedLaw",
    "Uniform",
    "UniformMixture",
    "EmpiricalBase",
    "DPParams",
    "as_seed_sequence",
    "substream",
    "sample_stick_breaking_weights",
    "sample_truncated_stick_breaking",
    "sample_dirichlet_multinomial",
    "sample_dp_marginals_polya",
    "hierarchical_empirical_measure",
    "empirical_hierarchical_estimator",
    "project_to_grid",
    "project_law",
    "read_measure_csv",
    "write_measure_csv",
    "read_law_csv",
    "write_law_csv",
]

WEIGHT_TOL = 1e-12
RENORMALIZE_TOL = 1e-15
_DOMAIN_SLACK = 1e-12

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _renormalize(weights):
    total = math.fsum(weights)
    if abs(total - 1.0) > RENORMALIZE_TOL:
        weights = weights / total
    return weights


# --------------------------------------------------------------------------
# Core types
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finitely supported probability ``sum_j weights[j] * delta(atoms[j])``.

    ``domain`` defaults to the hull of the atoms. Arrays are stored read-only.
    """

    atoms: np.ndarray
    weights: np.ndarray
    domain: tuple = None

    def __post_init__(self):
        atoms = np.atleast_1d(np.asarray(self.atoms, dtype=np.float64))
        weights = np.atleast_1d(np.asarray(self.weights, dtype=np.float64))
        if atoms.ndim != 1 or weights.ndim != 1:
            raise ParameterError("atoms and weights must be one-dimensional")
        if atoms.size == 0:
            raise ParameterError("a discrete measure needs at least one atom")
        if atoms.shape != weights.shape:
            raise ShapeMismatchError(
                f"{atoms.size} atoms but {weights.size} weights")
        if not (np.all(np.isfinite(atoms)) and np.all(np.isfinite(weights))):
            raise ParameterError("atoms and weights must be finite")
        if np.any(weights < 0):
            raise ParameterError("weights must be nonnegative")
        total = math.fsum(weights)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ParameterError(f"weights sum to {total!r}, not 1")
        if self.domain is None:
            domain = (float(atoms.min()), float(atoms.max()))
        else:
            domain = (float(self.domain[0]), float(self.domain[1]))
            if not domain[0] <= domain[1]:
                raise ParameterError(f"invalid domain {domain}")
            slack = _DOMAIN_SLACK * max(1.0, domain[1] - domain[0])
            if atoms.min() < domain[0] - slack or atoms.max() > domain[1] + slack:
                raise DomainError(
                    f"atoms span [{atoms.min()!r}, {atoms.max()!r}] "
                    f"outside domain {domain}")
        object.__setattr__(self, "atoms", _frozen(atoms))
        object.__setattr__(self, "weights", _frozen(weights))
        object.__setattr__(self, "domain", domain)

    @classmethod
    def dirac(cls, x, domain=None):
        return cls(np.array([x], dtype=float), np.array([1.0]), domain)

    @classmethod
    def uniform(cls, atoms, domain=None):
        atoms = np.asarray(atoms, dtype=float)
        return cls(atoms, np.full(atoms.size, 1.0 / atoms.size), domain)

    def __len__(self):
        return self.atoms.size

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return (self.domain == other.domain
                and np.array_equal(self.atoms, other.atoms)
                and np.array_equal(self.weights, other.weights))

    __hash__ = None

    def mean(self):
        return float(np.dot(self.weights, self.atoms))

    def with_domain(self, domain):
        return DiscreteMeasure(self.atoms, self.weights, domain)

    @cached_property
    def sorted(self):
        """(atoms, weights) sorted by atom position, stable in the original order."""
        order = np.argsort(self.atoms, kind="stable")
        return _frozen(self.atoms[order]), _frozen(self.weights[order])

    def cdf(self, x):
        xs, ws = self.sorted
        cum = np.concatenate(([0.0], np.cumsum(ws)))
        idx = np.searchsorted(xs, np.asarray(x, dtype=float), side="right")
        return np.minimum(cum[idx], 1.0)


@dataclass(frozen=True, eq=False)
class EmpiricalLaw:
    """Uniform mixture ``(1/n) sum_i delta(members[i])`` of discrete measures."""

    members: tuple
    domain: tuple = None

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ParameterError("an empirical law needs at least one member")
        for p in members:
            if not isinstance(p, DiscreteMeasure):
                raise ParameterError("members must be DiscreteMeasure instances")
        if self.domain is None:
            lo = min(p.domain[0] for p in members)
            hi = max(p.domain[1] for p in members)
            domain = (lo, hi)
        else:
            domain = (float(self.domain[0]), float(self.domain[1]))
        members = tuple(p if p.domain == domain else p.with_domain(domain)
                        for p in members)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "domain", domain)

    @property
    def n(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        if not isinstance(other, EmpiricalLaw):
            return NotImplemented
        return self.domain == other.domain and self.members == other.members

    __hash__ = None

    def means(self):
        return np.array([p.mean() for p in self.members])

    @cached_property
    def packed(self):
        """Sorted atoms and weights as two ``(n, m_max)`` arrays.

        Shorter members are padded with zero-weight copies of their largest
        atom, which leaves every distribution unchanged.
        """
        width = max(len(p) for p in self.members)
        atoms = np.empty((self.n, width))
        weights = np.zeros((self.n, width))
        for i, p in enumerate(self.members):
            xs, ws = p.sorted
            k = xs.size
            atoms[i, :k] = xs
            atoms[i, k:] = xs[-1]
            weights[i, :k] = ws
        return _frozen(atoms), _frozen(weights)


@dataclass(frozen=True)
class Grid:
    """``M`` equally spaced points on ``[a, b]``, endpoints included."""

    a: float
    b: float
    M: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ParameterError(f"grid needs finite a < b, got [{self.a}, {self.b}]")
        if int(self.M) != self.M or self.M < 2:
            raise ParameterError(f"grid needs M >= 2 points, got {self.M}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "M", int(self.M))

    @property
    def dx(self):
        return (self.b - self.a) / (self.M - 1)

    @cached_property
    def points(self):
        return _frozen(np.linspace(self.a, self.b, self.M))

    def to_dict(self):
        return {"a": self.a, "b": self.b, "M": self.M}


@dataclass(frozen=True, eq=False)
class GriddedLaw:
    """Law whose ``n`` members all live on the points of ``grid``.

    ``weights[i, q]`` is the mass member ``i`` puts on grid point ``q``.
    """

    grid: Grid
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[1] != self.grid.M:
            raise ShapeMismatchError(
                f"weights of shape {w.shape} do not match a grid of {self.grid.M} points")
        if w.shape[0] < 1:
            raise ParameterError("a gridded law needs at least one member")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ParameterError("gridded weights must be finite and nonnegative")
        sums = w.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > WEIGHT_TOL):
            raise ParameterError("every row of a gridded law must sum to 1")
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self):
        return self.weights.shape[0]

    def member(self, i):
        return DiscreteMeasure(self.grid.points, self.weights[i],
                               (self.grid.a, self.grid.b))

    def to_law(self):
        return EmpiricalLaw(tuple(self.member(i) for i in range(self.n)),
                            (self.grid.a, self.grid.b))

    def to_json(self):
        return json.dumps({"a": self.grid.a, "b": self.grid.b, "M": self.grid.M,
                           "weights": self.weights.ravel().tolist()})

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
            grid = Grid(obj["a"], obj["b"], obj["M"])
            flat = np.asarray(obj["weights"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"invalid gridded law JSON: {exc}") from exc
        if flat.size % grid.M:
            raise ShapeMismatchError(
                f"{flat.size} weights cannot fill rows of {grid.M} points")
        return cls(grid, flat.reshape(-1, grid.M))


# --------------------------------------------------------------------------
# Base measures
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def __post_init__(self):
        if not self.low < self.high:
            raise ParameterError(f"Uniform needs low < high, got {self.low}, {self.high}")

    @property
    def support(self):
        return (float(self.low), float(self.high))

    def sample(self, rng, size):
        return self.low + (self.high - self.low) * rng.random(size)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip((x - self.low) / (self.high - self.low), 0.0, 1.0)


@dataclass(frozen=True)
class UniformMixture:
    """Finite mixture of uniforms, e.g. ``1/2 U[-1,-3/4] + 1/2 U[3/4,1]``."""

    components: tuple
    mix: tuple

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Uniform) else Uniform(*c)
                      for c in self.components)
        mix = tuple(float(w) for w in self.mix)
        if not comps or len(comps) != len(mix):
            raise ParameterError("mixture needs one weight per component")
        if any(w < 0 for w in mix) or abs(math.fsum(mix) - 1.0) > WEIGHT_TOL:
            raise ParameterError("mixture weights must be a probability vector")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "mix", mix)

    @property
    def support(self):
        return (min(c.low for c in self.components),
                max(c.high for c in self.components))

    def sample(self, rng, size):
        which = rng.choice(len(self.components), size=size, p=self.mix)
        u = rng.random(size)
        lows = np.array([c.low for c in self.components])[which]
        highs = np.array([c.high for c in self.components])[which]
        return lows + (highs - lows) * u

    def cdf(self, x):
        return sum(w * c.cdf(x) for w, c in zip(self.mix, self.components))


@dataclass(frozen=True)
class EmpiricalBase:
    """Base measure given by a discrete measure."""

    measure: DiscreteMeasure

    @property
    def support(self):
        return (float(self.measure.atoms.min()), float(self.measure.atoms.max()))

    def sample(self, rng, size):
        idx = rng.choice(len(self.measure), size=size, p=self.measure.weights)
        return self.measure.atoms[idx]

    def cdf(self, x):
        return self.measure.cdf(x)


# Further base families only need ``support``, ``sample`` and ``cdf``.
BaseMeasure = Union[Uniform, UniformMixture, EmpiricalBase]


@dataclass(frozen=True)
class DPParams:
    """Concentration ``alpha`` and base measure of a Dirichlet process."""

    alpha: float
    base: BaseMeasure
    domain: tuple = field(default=None)

    def __post_init__(self):
        if not (isinstance(self.alpha, (int, float, np.floating))
                and math.isfinite(self.alpha) and self.alpha > 0):
            raise ParameterError(f"alpha must be a positive real, got {self.alpha!r}")
        for attr in ("support", "sample", "cdf"):
            if not hasattr(self.base, attr):
                raise ParameterError(f"base measure lacks {attr!r}")
        lo, hi = self.base.support
        if self.domain is None:
            object.__setattr__(self, "domain", (lo, hi))
        else:
            domain = (float(self.domain[0]), float(self.domain[1]))
            if lo < domain[0] or hi > domain[1]:
                raise DomainError(f"base support {(lo, hi)} exceeds domain {domain}")
            object.__setattr__(self, "domain", domain)


# --------------------------------------------------------------------------
# Random streams
# --------------------------------------------------------------------------


def as_seed_sequence(rng: SeedLike) -> np.random.SeedSequence:
    if isinstance(rng, np.random.SeedSequence):
        return rng
    if isinstance(rng, np.random.Generator):
        return np.random.SeedSequence(int(rng.integers(0, 2**63)))
    if isinstance(rng, (int, np.integer)) and not isinstance(rng, bool):
        return np.random.SeedSequence(int(rng))
    raise ParameterError(f"cannot derive a random stream from {rng!r}")


def substream(seed: SeedLike, *key: int) -> np.random.SeedSequence:
    """Child stream of ``seed`` addressed by ``key``; independent of siblings."""
    ss = as_seed_sequence(seed)
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + tuple(key))


def _as_generator(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer, np.random.SeedSequence)):
        return np.random.default_rng(rng)
    # duck-typed stand-ins that expose ``random(size)`` are accepted as-is
    if hasattr(rng, "random"):
        return rng
    raise ParameterError(f"not a random generator: {rng!r}")


def _check_count(name, value):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


# --------------------------------------------------------------------------
# Samplers
# --------------------------------------------------------------------------


def sample_stick_breaking_weights(alpha, N, rng):
    """First ``N`` stick-breaking weights with Beta(1, alpha) sticks.

    Returns ``(J, residual)`` where ``J[i] = V[i] * prod_{j<i} (1 - V[j])`` and
    ``residual = prod_{j<N} (1 - V[j]) = 1 - sum(J)``.
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise ParameterError(f"alpha must be a positive real, got {alpha!r}")
    N = _check_count("N", N)
    rng = _as_generator(rng)
    u = np.asarray(rng.random(N), dtype=float)
    # inverse CDF of Beta(1, alpha): 1 - (1 - u)^(1/alpha)
    log_keep = np.log1p(-u) / alpha
    v = -np.expm1(log_keep)
    remaining = np.exp(np.concatenate(([0.0], np.cumsum(log_keep))))
    jumps = v * remaining[:-1]
    return jumps, float(remaining[-1])


def sample_truncated_stick_breaking(params: DPParams, N, rng) -> DiscreteMeasure:
    """``sum_{i<N} J_i delta(X_i) + (1 - sum_{i<N} J_i) delta(X_N)``."""
    N = _check_count("N", N)
    rng = _as_generator(rng)
    atoms = params.base.sample(rng, N)
    weights = np.empty(N)
    if N > 1:
        jumps, _ = sample_stick_breaking_weights(params.alpha, N - 1, rng)
        weights[:-1] = jumps
        weights[-1] = max(0.0, 1.0 - math.fsum(jumps))
    else:
        weights[0] = 1.0
    return DiscreteMeasure(atoms, _renormalize(weights), params.domain)


def sample_dirichlet_multinomial(params: DPParams, N, rng) -> DiscreteMeasure:
    """``N`` iid atoms with symmetric Dirichlet(alpha/N, ..., alpha/N) weights."""
    N = _check_count("N", N)
    rng = _as_generator(rng)
    atoms = params.base.sample(rng, N)
    if N == 1:
        return DiscreteMeasure(atoms, np.ones(1), params.domain)
    conc = np.full(N, params.alpha / N)
    while True:
        weights = rng.dirichlet(conc)
        if np.all(np.isfinite(weights)) and weights.sum() > 0:
            break
    return DiscreteMeasure(atoms, _renormalize(weights), params.domain)


def sample_dp_marginals_polya(params: DPParams, m, rng) -> np.ndarray:
    """Exchangeable draws ``X_1..X_m`` from a DP via the Polya urn.

    Draw ``k+1`` is fresh from the base with probability ``alpha/(alpha+k)``
    and otherwise copies a uniformly chosen earlier draw.
    """
    m = _check_count("m", m)
    rng = _as_generator(rng)
    alpha = params.alpha
    k = np.arange(m)
    fresh = rng.random(m) * (alpha + k) < alpha
    fresh[0] = True
    parent = np.minimum((rng.random(m) * k).astype(np.int64), np.maximum(k - 1, 0))
    origin = np.where(fresh, k, parent)
    # pointer jumping resolves each copy to the fresh draw it descends from
    while True:
        nxt = origin[origin]
        if np.array_equal(nxt, origin):
            break
        origin = nxt
    n_fresh = int(fresh.sum())
    values = np.empty(m)
    values[fresh] = params.base.sample(rng, n_fresh)
    return values[origin]


def hierarchical_empirical_measure(params: DPParams, N, rng) -> DiscreteMeasure:
    """Uniform empirical measure of ``N`` Polya-urn draws."""
    N = _check_count("N", N)
    atoms = sample_dp_marginals_polya(params, N, rng)
    return DiscreteMeasure(atoms, np.full(N, 1.0 / N), params.domain)


def empirical_hierarchical_estimator(params: DPParams, n, m, rng: SeedLike) -> EmpiricalLaw:
    """``n`` independent hierarchical empirical measures with ``m`` atoms each.

    Member ``i`` is drawn from ``substream(rng, i)``.
    """
    n = _check_count("n", n)
    m = _check_count("m", m)
    root = as_seed_sequence(rng)
    members = tuple(
        hierarchical_empirical_measure(params, m, np.random.default_rng(substream(root, i)))
        for i in range(n))
    return EmpiricalLaw(members, params.domain)


# --------------------------------------------------------------------------
# Grid projection
# --------------------------------------------------------------------------


def _grid_index(atoms, grid):
    slack = _DOMAIN_SLACK * (grid.b - grid.a)
    if atoms.min() < grid.a - slack or atoms.max() > grid.b + slack:
        raise DomainError(
            f"atoms span [{atoms.min()!r}, {atoms.max()!r}] outside grid "
            f"[{grid.a!r}, {grid.b!r}]")
    t = (atoms - grid.a) / grid.dx
    # nearest point, ties to the lower index
    idx = np.ceil(t - 0.5).astype(np.int64)
    return np.clip(idx, 0, grid.M - 1)


def project_to_grid(p: DiscreteMeasure, grid: Grid) -> np.ndarray:
    """Move every atom's mass to the nearest grid point; returns a length-``M`` row."""
    idx = _grid_index(p.atoms, grid)
    row = np.bincount(idx, weights=p.weights, minlength=grid.M)
    return _renormalize(row)


def project_law(law: EmpiricalLaw, grid: Grid) -> GriddedLaw:
    atoms, weights = law.packed
    idx = _grid_index(atoms.ravel(), grid).reshape(atoms.shape)
    offsets = (np.arange(law.n) * grid.M)[:, None]
    rows = np.bincount((idx + offsets).ravel(), weights=weights.ravel(),
                       minlength=law.n * grid.M).reshape(law.n, grid.M)
    rows /= rows.sum(axis=1, keepdims=True)
    return GriddedLaw(grid, rows)


# --------------------------------------------------------------------------
# CSV serialization
# --------------------------------------------------------------------------


def _fmt(x):
    return format(float(x), ".17g")


def write_measure_csv(p: DiscreteMeasure, path_or_file):
    def _write(fh):
        fh.write("atom,weight\n")
        for a, w in zip(p.atoms, p.weights):
            fh.write(f"{_fmt(a)},{_fmt(w)}\n")
    _with_handle(path_or_file, "w", _write)


def write_law_csv(law: EmpiricalLaw, path_or_file):
    def _write(fh):
        fh.write("member,atom,weight\n")
        for i, p in enumerate(law.members):
            for a, w in zip(p.atoms, p.weights):
                fh.write(f"{i},{_fmt(a)},{_fmt(w)}\n")
    _with_handle(path_or_file, "w", _write)


def _with_handle(path_or_file, mode, fn):
    if isinstance(path_or_file, io.IOBase) or hasattr(path_or_file, "write" if "w" in mode else "read"):
        return fn(path_or_file)
    with open(path_or_file, mode, newline="") as fh:
        return fn(fh)


def _parse_float(text, path, line):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", path, line) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value: {text!r}", path, line)
    return value


def _read_rows(path_or_file):
    name = getattr(path_or_file, "name", None) if hasattr(path_or_file, "read") else str(path_or_file)

    def _read(fh):
        return name, list(csv.reader(fh))
    try:
        return _with_handle(path_or_file, "r", _read)
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", name) from exc
    except (UnicodeDecodeError, csv.Error) as exc:
        raise ParseError(f"unreadable CSV: {exc}", name) from exc


def read_measure_csv(path_or_file, domain=None) -> DiscreteMeasure:
    name, rows = _read_rows(path_or_file)
    if not rows or [c.strip() for c in rows[0]] != ["atom", "weight"]:
        raise ParseError("expected header 'atom,weight'", name, 1)
    atoms, weights = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", name, lineno)
        atoms.append(_parse_float(row[0], name, lineno))
        weights.append(_parse_float(row[1], name, lineno))
    if not atoms:
        raise ParseError("no atoms", name, len(rows))
    try:
        return DiscreteMeasure(np.array(atoms), np.array(weights), domain)
    except ParameterError as exc:
        raise ParseError(str(exc), name) from exc


def read_law_csv(path_or_file, domain=None) -> EmpiricalLaw:
    """Read a ``member,atom,weight`` file; an ``atom,weight`` file is a one-member law."""
    name, rows = _read_rows(path_or_file)
    if not rows:
        raise ParseError("empty file", name, 1)
    header = [c.strip() for c in rows[0]]
    if header == ["atom", "weight"]:
        rows = [["0"] + r if r else r for r in rows[1:]]
    elif header == ["member", "atom", "weight"]:
        rows = rows[1:]
    else:
        raise ParseError("expected header 'member,atom,weight'", name, 1)
    groups = {}
    for lineno, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", name, lineno)
        try:
            member = int(row[0])
        except ValueError:
            raise ParseError(f"member index is not an integer: {row[0]!r}", name, lineno) from None
        if member < 0:
            raise ParseError(f"negative member index {member}", name, lineno)
        groups.setdefault(member, ([], []))
        groups[member][0].append(_parse_float(row[1], name, lineno))
        groups[member][1].append(_parse_float(row[2], name, lineno))
    if not groups:
        raise ParseError("no members", name, len(rows) + 1)
    if sorted(groups) != list(range(len(groups))):
        raise ParseError("member indices must be 0..n-1 without gaps", name)
    try:
        members = tuple(DiscreteMeasure(np.array(groups[i][0]), np.array(groups[i][1]))
                        for i in range(len(groups)))
        return EmpiricalLaw(members, domain)
    except ParameterError as exc:
        raise ParseError(str(exc), name) from exc


def law_from_arrays(atoms: Sequence, weights: Sequence = None, domain=None) -> EmpiricalLaw:
    """Build a law from per-member atom arrays (uniform weights by default)."""
    members = []
    for i, xs in enumerate(atoms):
        xs = np.asarray(xs, dtype=float)
        ws = np.full(xs.size, 1.0 / xs.size) if weights is None else weights[i]
        members.append(DiscreteMeasure(xs, ws))
    return EmpiricalLaw(tuple(members), domain)
