"""Synchronous colour dynamics on preferential attachment multigraphs.

Two protocols over a binary colour vector (red=1, blue=0):

* k-sample local majority: each vertex polls k of its incident edge-endpoint
  slots uniformly without replacement (all slots if it has fewer than k and
  an odd number; one uniformly discarded if even) and adopts the strict
  majority colour of the poll.  Parallel edges weight a neighbour by
  multiplicity and a self-loop lets a vertex poll its own previous colour —
  slot semantics throughout.  Poll sizes are always odd, so no ties exist.
* voter baseline: each vertex copies one uniformly chosen slot.

Updates are synchronous and double-buffered: every poll reads the previous
step's colours.  All-blue and all-red are absorbing.  The number of uniforms
consumed per step depends only on the degree sequence, never on colours, so
traces under relabelling red<->blue, alpha -> 1-alpha mirror exactly for the
same seed (see init_colours).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from . import _kernels
from .pa_graph import PAGraph
from .rng import make_generator, uniform_index
from .threshold import effective_d, tau_star

__all__ = [
    "ColourState",
    "ProtocolConfig",
    "Trace",
    "init_colours",
    "sample_poll",
    "step",
    "voter_step",
    "default_max_steps",
    "run",
]

RED, BLUE = 1, 0


@dataclass
class ColourState:
    """Colour vector at one synchronous time step (uint8, red=1, blue=0)."""

    colours: np.ndarray
    step: int

    def __post_init__(self):
        self.colours = np.ascontiguousarray(self.colours, dtype=np.uint8)
        self.colours.setflags(write=False)
        if self.step < 0:
            raise ValueError("step must be >= 0")

    @property
    def red_count(self) -> int:
        return int(self.colours.sum())

    def is_consensus(self) -> bool:
        r = self.red_count
        return r == 0 or r == self.colours.shape[0]


@dataclass(frozen=True)
class ProtocolConfig:
    """k odd >= 5 (poll size), alpha in [0,1] (initial red bias), seed,
    optional step cap (None = default_max_steps policy)."""

    k: int
    alpha: float
    seed: int
    max_steps: int | None = None

    def __post_init__(self):
        if int(self.k) < 5 or int(self.k) % 2 == 0:
            raise ValueError(f"k must be an odd integer >= 5, got {self.k}")
        if not 0.0 <= float(self.alpha) <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.max_steps is not None and int(self.max_steps) < 1:
            raise ValueError("max_steps must be >= 1 when given")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "alpha", float(self.alpha))


@dataclass
class Trace:
    """Per-step red totals plus consensus outcome (None fields = did not converge)."""

    red_counts: list[int]
    consensus_step: int | None
    winner: str | None
    steps_run: int


def _draw_colours(t: int, alpha: float, gen: np.random.Generator) -> np.ndarray:
    # Two-sided threshold rule: for alpha <= 1/2 red iff u < alpha, otherwise
    # red iff u >= 1-alpha.  Both give Bernoulli(alpha), and the rule makes the
    # alpha -> 1-alpha relabelling an exact pointwise complement under a shared
    # uniform stream (except at alpha = 1/2 exactly, its own mirror image).
    u = gen.random(t)
    if alpha <= 0.5:
        return (u < alpha).astype(np.uint8)
    return (u >= 1.0 - alpha).astype(np.uint8)


def init_colours(t: int, alpha: float, seed: int) -> ColourState:
    """Independently red with probability alpha, deterministic in seed."""
    if not 0.0 <= float(alpha) <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    gen = make_generator(seed)
    return ColourState(_draw_colours(int(t), float(alpha), gen), 0)


def sample_poll(g: PAGraph, v: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """One vertex's poll: an odd-cardinality multiset of slot endpoints (1-based).

    Reference implementation of the slot-sampling contract the step kernels
    follow; consumes k uniforms when deg(v) >= k, none when deg(v) < k is odd,
    one when deg(v) < k is even.
    """
    if int(k) < 1 or int(k) % 2 == 0:
        raise ValueError(f"k must be a positive odd integer, got {k}")
    indptr, endpoints, _ = g.csr()
    lo, hi = int(indptr[v - 1]), int(indptr[v])
    n = hi - lo
    if n >= k:
        scratch = endpoints[lo:hi].copy()
        for i in range(k):
            j = i + uniform_index(rng.random(), n - i)
            scratch[i], scratch[j] = scratch[j], scratch[i]
        return scratch[:k] + 1
    if n % 2 == 1:
        return endpoints[lo:hi] + 1
    j = uniform_index(rng.random(), n)
    return np.delete(endpoints[lo:hi], j) + 1


def step(g: PAGraph, state: ColourState, config: ProtocolConfig,
         rng: np.random.Generator) -> ColourState:
    """One synchronous k-sample majority round (reads only the given state)."""
    if state.colours.shape[0] != g.t:
        raise ValueError("colour vector length does not match graph")
    indptr, endpoints, _ = g.csr()
    new = _kernels.mpk_step(indptr, endpoints, state.colours, config.k, rng)
    return ColourState(new, state.step + 1)


def voter_step(g: PAGraph, state: ColourState, rng: np.random.Generator) -> ColourState:
    """One synchronous voter round: every vertex copies one uniform slot."""
    if state.colours.shape[0] != g.t:
        raise ValueError("colour vector length does not match graph")
    indptr, endpoints, _ = g.csr()
    new = _kernels.voter_step(indptr, endpoints, state.colours, rng)
    return ColourState(new, state.step + 1)


def default_max_steps(t: int, m: int, k: int, epsilon: float = 0.1) -> int:
    """Step cap 10*ceil(tau_star) + 100 when the schedule applies (effective
    d >= 5 and t >= d), plain 100 otherwise."""
    d = effective_d(m, k)
    if d >= 5 and t >= d:
        return 10 * ceil(tau_star(d, epsilon, t)) + 100
    return 100


def run(g: PAGraph, config: ProtocolConfig, protocol: str = "mpk") -> Trace:
    """Initialize colours and iterate until consensus or the step cap.

    Non-convergence within the cap is an outcome (winner=None), not an error.
    A single uniform stream seeded by config.seed drives initialization and
    every subsequent round.
    """
    if protocol not in ("mpk", "voter"):
        raise ValueError(f"protocol must be 'mpk' or 'voter', got {protocol!r}")
    indptr, endpoints, _ = g.csr()
    gen = make_generator(config.seed)
    colours = _draw_colours(g.t, config.alpha, gen)
    red = int(colours.sum())
    red_counts = [red]
    if red in (0, g.t):
        return Trace(red_counts, 0, "red" if red else "blue", 0)
    cap = config.max_steps
    if cap is None:
        cap = default_max_steps(g.t, g.m, config.k)
    steps_run = 0
    for tau in range(1, cap + 1):
        if protocol == "mpk":
            colours = _kernels.mpk_step(indptr, endpoints, colours, config.k, gen)
        else:
            colours = _kernels.voter_step(indptr, endpoints, colours, gen)
        red = int(colours.sum())
        red_counts.append(red)
        steps_run = tau
        if red in (0, g.t):
            return Trace(red_counts, tau, "red" if red else "blue", tau)
    return Trace(red_counts, None, None, steps_run)
