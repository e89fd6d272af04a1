"""Preferential attachment multigraphs: growth, contraction, queries, serialization.

PA_t(1, delta) starts as a single vertex with one self-loop.  Each arriving
vertex v = s+1 adds one edge, attaching to itself with probability
(1+delta)/(s(2+delta)+(1+delta)) and to an existing vertex i with probability
(D_i(s)+delta)/(s(2+delta)+(1+delta)), where D_i(s) is i's current degree
(self-loops count 2).  PA_t(m, delta) is PA_{mt}(1, delta/m) with consecutive
blocks of m vertices contracted into one; all loops and parallel edges are
kept.  The result has t vertices, m*t edges, total degree 2*m*t, minimum
degree m, and a degree tail with power-law exponent 3 + delta/m.

A graph is stored as its arrival-ordered target sequence: edge j (0-based)
belongs to child vertex j//m + 1 and points at targets[j] <= child, with
target == child encoding a self-loop.  Everything else (degrees, adjacency)
is derived.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rng import make_generator

__all__ = [
    "GraphFormatError",
    "PAParams",
    "PAGraph",
    "DegreeStats",
    "generate_pa1",
    "contract",
    "generate_pa",
    "degree_evolution_urn",
    "save",
    "load",
    "degree_stats",
    "hill_exponent",
]


class GraphFormatError(ValueError):
    """Raised when a graph file violates the format or an arrival-order invariant."""


@dataclass(frozen=True)
class PAParams:
    """Model parameters: edges per vertex m >= 1 and attachment offset delta > -m."""

    m: int
    delta: float

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "delta", float(self.delta))
        if not self.delta > -self.m:
            raise ValueError(f"delta must exceed -m, got delta={self.delta}, m={self.m}")

    @property
    def gamma(self) -> float:
        """Early-vertex degree growth exponent 1/(2 + delta/m), in (0, 1)."""
        return 1.0 / (2.0 + self.delta / self.m)


class PAGraph:
    """Immutable arrival-ordered multigraph (see module docstring for encoding)."""

    def __init__(self, t: int, params: PAParams, targets, seed: int | None = None):
        t = int(t)
        if t < 1:
            raise ValueError("t must be >= 1")
        targets = np.ascontiguousarray(targets, dtype=np.int64)
        if targets.shape != (params.m * t,):
            raise ValueError(
                f"expected {params.m * t} targets for t={t}, m={params.m}, "
                f"got {targets.shape}"
            )
        children = np.arange(targets.shape[0], dtype=np.int64) // params.m + 1
        if np.any(targets < 1) or np.any(targets > children):
            raise ValueError("every target must satisfy 1 <= target <= child")
        targets.setflags(write=False)
        children.setflags(write=False)
        self.t = t
        self.params = params
        self.seed = None if seed is None else int(seed)
        self.targets = targets
        self.children = children
        self._degrees = None
        self._csr = None

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def delta(self) -> float:
        return self.params.delta

    @property
    def num_edges(self) -> int:
        return self.targets.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        """Degree of vertex i at degrees[i-1]; a self-loop contributes 2."""
        if self._degrees is None:
            deg = np.bincount(self.children, minlength=self.t + 1)
            deg += np.bincount(self.targets, minlength=self.t + 1)
            deg = deg[1:].astype(np.int64)
            deg.setflags(write=False)
            self._degrees = deg
        return self._degrees

    def degree(self, v: int) -> int:
        return int(self.degrees[v - 1])

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, endpoints, edge_ids): 0-based slot adjacency.

        Slots of vertex v occupy endpoints[indptr[v-1]:indptr[v]]; the slot
        order is v's child-side slots in arrival order, then its target-side
        slots in arrival order (a self-loop contributes one of each).
        edge_ids maps each slot back to its arrival index.
        """
        if self._csr is None:
            mt = self.num_edges
            owner = np.concatenate([self.children, self.targets])
            other = np.concatenate([self.targets, self.children])
            eid = np.concatenate([np.arange(mt), np.arange(mt)]).astype(np.int64)
            order = np.argsort(owner, kind="stable")
            endpoints = other[order] - 1
            edge_ids = eid[order]
            indptr = np.zeros(self.t + 1, dtype=np.int64)
            np.cumsum(np.bincount(owner, minlength=self.t + 1)[1:], out=indptr[1:])
            for a in (indptr, endpoints, edge_ids):
                a.setflags(write=False)
            self._csr = (indptr, endpoints, edge_ids)
        return self._csr

    def slots(self, v: int) -> np.ndarray:
        """Incident edge-endpoint multiset of v, 1-based (self-loop appears twice)."""
        indptr, endpoints, _ = self.csr()
        return endpoints[indptr[v - 1] : indptr[v]] + 1

    def neighbors(self, v: int) -> np.ndarray:
        """Distinct adjacent vertices (including v itself if it has a loop), sorted."""
        return np.unique(self.slots(v))

    def edges(self):
        """Iterate (child, target) pairs in arrival order."""
        for c, g in zip(self.children.tolist(), self.targets.tolist()):
            yield c, g

    def __eq__(self, other):
        if not isinstance(other, PAGraph):
            return NotImplemented
        return (
            self.t == other.t
            and self.params == other.params
            and self.seed == other.seed
            and np.array_equal(self.targets, other.targets)
        )

    def __repr__(self):
        return (
            f"PAGraph(t={self.t}, m={self.m}, delta={self.delta}, "
            f"seed={self.seed}, edges={self.num_edges})"
        )


@dataclass(frozen=True)
class DegreeStats:
    """Degrees D_i(t) and prefix sums S_i(t) = sum of degrees of vertices 1..i."""

    degrees: np.ndarray
    prefix: np.ndarray


def degree_stats(g: PAGraph) -> DegreeStats:
    deg = g.degrees
    return DegreeStats(degrees=deg, prefix=np.cumsum(deg))


def generate_pa1(t: int, delta: float, seed: int) -> PAGraph:
    """Generate PA_t(1, delta); delta > -1, deterministic in seed."""
    params = PAParams(1, delta)
    gen = make_generator(seed)
    targets = _kernels.pa1_targets(int(t), params.delta, gen)
    return PAGraph(int(t), params, targets, seed=seed)


def contract(g: PAGraph, m: int) -> PAGraph:
    """Contract consecutive blocks of m vertices of a PA(1, delta/m) graph.

    Vertex i of the result absorbs block {(i-1)m+1, ..., im}; loops and
    parallel edges are retained, so edge count is preserved.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    if g.m != 1:
        raise ValueError("contract expects a single-edge (m=1) graph")
    if g.t % m != 0:
        raise ValueError(f"vertex count {g.t} not divisible by m={m}")
    params = PAParams(m, g.delta * m)
    targets = (g.targets - 1) // m + 1
    return PAGraph(g.t // m, params, targets, seed=g.seed)


def generate_pa(t: int, m: int, delta: float, seed: int) -> PAGraph:
    """Generate PA_t(m, delta) = contraction of PA_{mt}(1, delta/m)."""
    params = PAParams(int(m), delta)  # validates before the long run
    g1 = generate_pa1(params.m * int(t), params.delta / params.m, seed)
    targets = (g1.targets - 1) // params.m + 1
    return PAGraph(int(t), params, targets, seed=seed)


def degree_evolution_urn(i: int, a: int, t: int, params: PAParams, seed: int) -> int:
    """Sample D_i(t) given D_i(i) = a via the exact marginal urn chain.

    Block i's degree plus offset is one colour of a two-colour urn whose
    total weight after s single-edge growth steps is deterministic:
    s(2+delta/m) + (1+delta/m).  Each of the m(t-i) remaining growth steps
    adds the new edge's target end to block i with probability
    (R + delta)/(s(2+delta/m) + (1+delta/m)) where R is the block's current
    degree (the child end always lands outside a completed block).  Used as
    a cross-validation oracle for the marginal law of D_i(t) under direct
    generation.
    """
    i, a, t = int(i), int(a), int(t)
    if i < 1:
        raise ValueError("i must be >= 1")
    if t < i:
        raise ValueError("t must be >= i")
    if not params.m <= a <= 2 * params.m:
        raise ValueError(f"initial degree a must lie in [m, 2m], got {a}")
    d1 = params.delta / params.m
    delta = params.delta
    gen = make_generator(seed)
    red = a
    lo, hi = params.m * i, params.m * t
    if lo == hi:
        return red
    u = gen.random(hi - lo)
    for idx in range(hi - lo):
        s = lo + idx
        den = s * (2.0 + d1) + (1.0 + d1)
        if u[idx] * den < red + delta:
            red += 1
    return red


def save(g: PAGraph, path) -> None:
    """Write the plain-text format: header ``t m delta seed``, then one
    ``child target`` line per edge in arrival order (seed ``-`` if unknown)."""
    seed_tok = "-" if g.seed is None else str(g.seed)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.t} {g.m} {g.delta!r} {seed_tok}\n")
        for c, tgt in zip(g.children.tolist(), g.targets.tolist()):
            fh.write(f"{c} {tgt}\n")


def load(path) -> PAGraph:
    """Read the format written by save(); raises GraphFormatError on violations."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if not header:
            raise GraphFormatError("empty file")
        parts = header.split()
        if len(parts) != 4:
            raise GraphFormatError(f"header must be 't m delta seed', got {header!r}")
        try:
            t, m, delta = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise GraphFormatError(f"bad header field: {exc}") from None
        seed = None if parts[3] == "-" else int(parts[3])
        try:
            params = PAParams(m, delta)
        except ValueError as exc:
            raise GraphFormatError(str(exc)) from None
        if t < 1:
            raise GraphFormatError("t must be >= 1")
        targets = np.empty(m * t, dtype=np.int64)
        for j in range(m * t):
            line = fh.readline()
            if not line:
                raise GraphFormatError(f"truncated file: expected {m * t} edges, got {j}")
            toks = line.split()
            if len(toks) != 2:
                raise GraphFormatError(f"edge line {j + 1} must be 'child target'")
            try:
                child, target = int(toks[0]), int(toks[1])
            except ValueError:
                raise GraphFormatError(f"non-integer edge line {j + 1}") from None
            if child != j // m + 1:
                raise GraphFormatError(
                    f"edge {j + 1}: child {child} out of arrival order "
                    f"(expected {j // m + 1})"
                )
            if not 1 <= target <= child:
                raise GraphFormatError(
                    f"edge {j + 1}: target {target} violates 1 <= target <= child {child}"
                )
            targets[j] = target
        if fh.readline().strip():
            raise GraphFormatError("trailing content after last edge")
    return PAGraph(t, params, targets, seed=seed)


def hill_exponent(degrees, top_fraction: float = 0.01) -> float:
    """Hill power-law tail exponent from the top fraction of a degree sample.

    With descending order statistics d_(1) >= ... >= d_(n) and
    j = floor(top_fraction * n): 1 + 1/mean(log(d_(i)/d_(j+1)), i <= j).
    """
    d = np.sort(np.asarray(degrees, dtype=np.float64))[::-1]
    n = d.shape[0]
    j = int(top_fraction * n)
    if j < 1 or j >= n:
        raise ValueError(f"top_fraction {top_fraction} leaves no usable order statistics")
    mean_log = float(np.mean(np.log(d[:j]) - np.log(d[j])))
    if mean_log <= 0.0:
        raise ValueError("degenerate tail: all top-order statistics equal")
    return 1.0 + 1.0 / mean_log
