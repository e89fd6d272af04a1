"""Shared test fixtures and independent oracle helpers.

The oracles here deliberately avoid the library's own code paths: exact
rational binomial tails, a naive per-vertex re-simulation of the attachment
draw contract, and a dictionary-based ball/census builder.  Tests compare
the fast implementations against these.
"""

from collections import deque
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from pamp.pa_graph import PAGraph, PAParams
from pamp.rng import make_generator, uniform_index


def tail_fraction(n: int, j: int, p: Fraction) -> Fraction:
    """Exact Pr(Bin(n, p) >= j) as a Fraction."""
    if j <= 0:
        return Fraction(1)
    if j > n:
        return Fraction(0)
    q = 1 - p
    return sum(comb(n, i) * p**i * q ** (n - i) for i in range(j, n + 1))


def build_graph(m: int, delta: float, targets) -> PAGraph:
    """Hand-crafted graph from an explicit arrival-ordered target list."""
    return PAGraph(len(targets) // m, PAParams(m, delta), np.asarray(targets))


def naive_pa1_targets(n: int, delta: float, seed: int) -> list[int]:
    """Re-simulates the documented attachment draw contract one step at a
    time with plain Python state; the production kernels must match it
    bit for bit."""
    gen = make_generator(seed)
    targets = [1]
    slots = [1, 1]
    deg = {1: 2}
    for v in range(2, n + 1):
        s = v - 1
        den = s * (2.0 + delta) + (1.0 + delta)
        if delta >= 0:
            u1, u2 = gen.random(), gen.random()
            x = u1 * den
            if x < 1.0 + delta:
                tgt = v
            elif x < 1.0 + delta + 2.0 * s:
                tgt = slots[uniform_index(u2, 2 * s)]
            else:
                tgt = uniform_index(u2, s) + 1
        else:
            x = gen.random() * den
            tgt, acc = v, 0.0
            for i in range(1, s + 1):
                acc += deg[i] + delta
                if x < acc:
                    tgt = i
                    break
        targets.append(tgt)
        slots.extend([v, tgt])
        deg[tgt] = deg.get(tgt, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return targets


def adjacency(g: PAGraph) -> dict[int, list[tuple[int, int]]]:
    """1-based vertex -> [(neighbour, edge_id)]; self-loops appear twice."""
    adj = {v: [] for v in range(1, g.t + 1)}
    for eid, (c, tg) in enumerate(g.edges()):
        adj[c].append((tg, eid))
        adj[tg].append((c, eid))
    return adj


def brute_ball(g: PAGraph, v: int, r: int):
    """(vertex set, edge-id set) of the distance-<=r induced subgraph."""
    adj = adjacency(g)
    dist = {v: 0}
    q = deque([v])
    while q:
        u = q.popleft()
        if dist[u] == r:
            continue
        for w, _ in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    verts = set(dist)
    eids = {e for u in verts for w, e in adj[u] if w in verts}
    return verts, eids


def brute_light_census(g: PAGraph, v: int, r: int, kappa: int) -> int:
    """Cyclomatic number (E - V + components) of the light part of the ball."""
    verts, eids = brute_ball(g, v, r)
    light = {u for u in verts if u > kappa}
    ledges = [
        e for e in eids
        if g.children[e] > kappa and g.targets[e] > kappa
    ]
    padj = {u: [] for u in light}
    for e in ledges:
        a, b = int(g.children[e]), int(g.targets[e])
        padj[a].append(b)
        padj[b].append(a)
    seen, comps = set(), 0
    for u in light:
        if u in seen:
            continue
        comps += 1
        dq = deque([u])
        seen.add(u)
        while dq:
            x = dq.popleft()
            for y in padj[x]:
                if y not in seen:
                    seen.add(y)
                    dq.append(y)
    return len(ledges) - len(light) + comps


@pytest.fixture(scope="session")
def small_graph():
    from pamp.pa_graph import generate_pa

    return generate_pa(400, 3, 0.5, seed=20240)


@pytest.fixture(scope="session")
def medium_graph():
    from pamp.pa_graph import generate_pa

    return generate_pa(3000, 5, 0.0, seed=77)
