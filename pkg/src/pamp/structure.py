"""Structural certificates on preferential attachment graphs.

Vertices with index <= kappa are heavy (inner core), <= kappa_o outer core,
everything else light.  This module computes radius-r balls, truncated balls
(delete core-incident edges from the ball, keep the root's component, re-add
deleted edges joining a heavy vertex to that component), light-cycle censuses
(cyclomatic number, where a self-loop or a parallel pair counts as a cycle),
counts of root edges on short paths into the core, degree floors for the
outer core, and a sampling scan that classifies truncated balls into the
categories

    tree-all-light             acyclic, no heavy vertex
    acyclic-with-1-or-2-heavy  acyclic, 1 or 2 attached heavy vertices
    root-on-light-cycle        exactly one cycle, all-light, through the
                               root; removing its edges disconnects every
                               heavy vertex from the root
    light-cycle-via-path       exactly one cycle, all-light, joined to the
                               root by a path P; at most one root edge
                               outside P starts a path to a heavy vertex
    other                      anything else

The conditions are mutually exclusive as written (acyclic vs. one cycle,
root on vs. off the cycle); they are evaluated in the order listed and
anything unmatched — more heavy attachments, several independent cycles,
cycles through heavy vertices, extra core connections — is ``other``.
Distances ignore edge multiplicity; cycle counting keeps it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pa_graph import PAGraph
from .rng import make_generator, uniform_index

__all__ = [
    "CATEGORY_TREE",
    "CATEGORY_ACYCLIC_HEAVY",
    "CATEGORY_ROOT_CYCLE",
    "CATEGORY_PATH_CYCLE",
    "CATEGORY_OTHER",
    "CATEGORIES",
    "StructureParams",
    "Ball",
    "TruncatedBall",
    "RootRecord",
    "StructureScan",
    "ball",
    "truncated_ball",
    "light_cycle_census",
    "short_paths_into_core",
    "outer_core_degree_check",
    "scan_structure",
]

CATEGORY_TREE = "tree-all-light"
CATEGORY_ACYCLIC_HEAVY = "acyclic-with-1-or-2-heavy"
CATEGORY_ROOT_CYCLE = "root-on-light-cycle"
CATEGORY_PATH_CYCLE = "light-cycle-via-path"
CATEGORY_OTHER = "other"
CATEGORIES = (
    CATEGORY_TREE,
    CATEGORY_ACYCLIC_HEAVY,
    CATEGORY_ROOT_CYCLE,
    CATEGORY_PATH_CYCLE,
    CATEGORY_OTHER,
)


@dataclass(frozen=True)
class StructureParams:
    """Core cutoffs kappa <= kappa_o, short radius omega, degree exponent gamma."""

    kappa: int
    kappa_o: int
    omega: int
    gamma: float

    def __post_init__(self):
        if not 1 <= self.kappa <= self.kappa_o:
            raise ValueError(
                f"need 1 <= kappa <= kappa_o, got kappa={self.kappa}, kappa_o={self.kappa_o}"
            )
        if self.omega < 1:
            raise ValueError("omega must be >= 1")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")

    @classmethod
    def desk_scale(cls, g: PAGraph, omega: int = 3) -> "StructureParams":
        """Feasible stand-ins for the asymptotic polylog cutoffs:
        kappa = ceil(t^0.3), kappa_o = ceil(t^0.5)."""
        return cls(
            kappa=math.ceil(g.t**0.3),
            kappa_o=math.ceil(g.t**0.5),
            omega=omega,
            gamma=g.params.gamma,
        )

    def is_heavy(self, v: int) -> bool:
        return v <= self.kappa


@dataclass(frozen=True)
class Ball:
    """All vertices within distance <= radius of root, with induced multi-edges.
    vertices: sorted 1-based ids; edge_ids: sorted arrival indices."""

    root: int
    radius: int
    vertices: np.ndarray
    edge_ids: np.ndarray

    @property
    def num_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def num_edges(self) -> int:
        return int(self.edge_ids.shape[0])


@dataclass(frozen=True)
class TruncatedBall:
    """Root's light component within its ball plus re-added heavy attachments.

    component: light vertices connected to root avoiding heavy-incident edges;
    heavy: distinct heavy endpoints of re-added edges; edge_ids: component
    edges plus readded_edge_ids.  Heavy vertices occur only as endpoints of
    re-added edges.
    """

    root: int
    radius: int
    component: np.ndarray
    heavy: np.ndarray
    edge_ids: np.ndarray
    readded_edge_ids: np.ndarray
    category: str

    @property
    def vertices(self) -> np.ndarray:
        return np.sort(np.concatenate([self.component, self.heavy]))

    @property
    def num_edges(self) -> int:
        return int(self.edge_ids.shape[0])


def _concat_ranges(starts: np.ndarray, stops: np.ndarray) -> np.ndarray:
    # concatenate [starts[i], stops[i]) index ranges without a Python loop
    lens = stops - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    out = np.ones(total, dtype=np.int64)
    out[0] = starts[0]
    heads = np.cumsum(lens)[:-1]
    out[heads] = starts[1:] - stops[:-1] + 1
    return np.cumsum(out)


def ball(g: PAGraph, v: int, r: int) -> Ball:
    """Breadth-first ball of radius r around v (distinct-neighbour BFS)."""
    if not 1 <= v <= g.t:
        raise ValueError(f"vertex {v} out of range")
    if r < 0:
        raise ValueError("radius must be >= 0")
    indptr, endpoints, edge_ids = g.csr()
    visited = np.zeros(g.t, dtype=bool)
    v0 = v - 1
    visited[v0] = True
    frontier = np.array([v0], dtype=np.int64)
    for _ in range(r):
        if frontier.size == 0:
            break
        slots = _concat_ranges(indptr[frontier], indptr[frontier + 1])
        nbr = endpoints[slots]
        nbr = np.unique(nbr[~visited[nbr]])
        visited[nbr] = True
        frontier = nbr
    verts0 = np.nonzero(visited)[0]
    slots = _concat_ranges(indptr[verts0], indptr[verts0 + 1])
    inside = visited[endpoints[slots]]
    eids = np.unique(edge_ids[slots][inside])
    return Ball(root=v, radius=r, vertices=verts0 + 1, edge_ids=eids)


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _components(vertices: np.ndarray, pairs) -> _DSU:
    # DSU over local indices of `vertices` (sorted unique); pairs yield (u, w)
    dsu = _DSU(vertices.shape[0])
    for u, w in pairs:
        dsu.union(
            int(np.searchsorted(vertices, u)),
            int(np.searchsorted(vertices, w)),
        )
    return dsu


def light_cycle_census(g: PAGraph, v: int, r: int, params: StructureParams) -> int:
    """Cyclomatic number |E| - |V| + #components of the light-induced subgraph
    of ball(v, r); self-loops and parallel pairs count as cycles."""
    if params.is_heavy(v):
        raise ValueError(f"root {v} is heavy (kappa={params.kappa})")
    return _census_from_ball(g, ball(g, v, r), params)


def _census_from_ball(g: PAGraph, b: Ball, params: StructureParams) -> int:
    light = b.vertices[b.vertices > params.kappa]
    ch = g.children[b.edge_ids]
    tg = g.targets[b.edge_ids]
    keep = (ch > params.kappa) & (tg > params.kappa)
    ch, tg = ch[keep], tg[keep]
    if light.shape[0] == 0:
        return 0
    dsu = _components(light, zip(ch.tolist(), tg.tolist()))
    roots = {dsu.find(i) for i in range(light.shape[0])}
    return int(ch.shape[0]) - int(light.shape[0]) + len(roots)


def truncated_ball(g: PAGraph, v: int, r: int, params: StructureParams) -> TruncatedBall:
    """Two-step truncation of ball(g, v, r) around a light root, classified."""
    if params.is_heavy(v):
        raise ValueError(f"root {v} is heavy (kappa={params.kappa})")
    return _truncate_from_ball(g, ball(g, v, r), params)


def _member_mask(sorted_arr: np.ndarray, values: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(sorted_arr, values)
    ok = idx < sorted_arr.shape[0]
    ok[ok] = sorted_arr[idx[ok]] == values[ok]
    return ok


def _truncate_from_ball(g: PAGraph, b: Ball, params: StructureParams) -> TruncatedBall:
    v = b.root
    kappa = params.kappa
    ch = g.children[b.edge_ids]
    tg = g.targets[b.edge_ids]
    ch_heavy = ch <= kappa
    tg_heavy = tg <= kappa
    light_edge = ~ch_heavy & ~tg_heavy

    light_verts = b.vertices[b.vertices > kappa]
    dsu = _components(light_verts, zip(ch[light_edge].tolist(), tg[light_edge].tolist()))
    v_root = dsu.find(int(np.searchsorted(light_verts, v)))
    in_comp = np.fromiter(
        (dsu.find(i) == v_root for i in range(light_verts.shape[0])),
        dtype=bool,
        count=light_verts.shape[0],
    )
    component = light_verts[in_comp]

    # a light edge has both or neither endpoint in the component
    comp_mask = light_edge.copy()
    comp_mask[light_edge] = _member_mask(component, ch[light_edge])
    one_heavy = ch_heavy ^ tg_heavy  # heavy-heavy edges stay deleted
    light_end = np.where(ch_heavy, tg, ch)
    readd_mask = one_heavy.copy()
    readd_mask[one_heavy] = _member_mask(component, light_end[one_heavy])

    comp_edges = b.edge_ids[comp_mask].tolist()
    readded = b.edge_ids[readd_mask].tolist()
    heavy = (
        np.unique(np.minimum(ch, tg)[readd_mask])
        if readded
        else np.empty(0, dtype=np.int64)
    )
    category = _classify(g, params, v, component, comp_edges, heavy, readded)
    return TruncatedBall(
        root=v,
        radius=b.radius,
        component=component,
        heavy=heavy,
        edge_ids=np.sort(np.asarray(comp_edges + readded, dtype=np.int64)),
        readded_edge_ids=np.asarray(readded, dtype=np.int64),
        category=category,
    )


def _classify(g, params, v, component, comp_edges, heavy, readded) -> str:
    n_comp = component.shape[0]
    n_heavy = heavy.shape[0]
    c_light = len(comp_edges) - n_comp + 1  # component is connected
    c_total = (len(comp_edges) + len(readded)) - (n_comp + n_heavy) + 1
    if c_total == 0:
        if n_heavy == 0:
            return CATEGORY_TREE
        if n_heavy <= 2:
            return CATEGORY_ACYCLIC_HEAVY
        return CATEGORY_OTHER
    if c_light != 1 or c_total != 1:
        return CATEGORY_OTHER

    cycle_vertices, cycle_edges = _unique_light_cycle(g, component, comp_edges)
    if v in cycle_vertices:
        # heavy attachments may reach v only through the cycle
        if n_heavy == 0:
            return CATEGORY_ROOT_CYCLE
        spine = [e for e in comp_edges if e not in cycle_edges] + readded
        verts = np.sort(np.concatenate([component, heavy]))
        dsu = _components(
            verts, ((g.children[e], g.targets[e]) for e in spine)
        )
        v_root = dsu.find(int(np.searchsorted(verts, v)))
        for h in heavy.tolist():
            if dsu.find(int(np.searchsorted(verts, h))) == v_root:
                return CATEGORY_OTHER
        return CATEGORY_ROOT_CYCLE

    path_edges = _path_to_cycle(g, v, component, comp_edges, cycle_vertices)
    off_path = _root_edges_toward_heavy(
        g, v, component, comp_edges, heavy, readded, exclude=path_edges[0]
    )
    return CATEGORY_PATH_CYCLE if off_path <= 1 else CATEGORY_OTHER


def _adjacency(g, vertices, edge_ids):
    # vertex -> list of (edge_id, other_endpoint), in edge-id order
    adj = {int(u): [] for u in vertices.tolist()}
    for e in edge_ids:
        c, t = int(g.children[e]), int(g.targets[e])
        if c in adj:
            adj[c].append((int(e), t))
        if t != c and t in adj:
            adj[t].append((int(e), c))
    return adj


def _unique_light_cycle(g, component, comp_edges):
    """2-core of a unicyclic multigraph = its unique cycle (loops count 2)."""
    adj = _adjacency(g, component, comp_edges)
    deg = {u: 0 for u in adj}
    for e in comp_edges:
        c, t = int(g.children[e]), int(g.targets[e])
        deg[c] += 1
        deg[t] += 1
    removed = set()
    queue = [u for u, d in deg.items() if d <= 1]
    while queue:
        u = queue.pop()
        if u in removed:
            continue
        removed.add(u)
        for e, w in adj[u]:
            if w in removed or w == u:
                continue
            deg[w] -= 1
            if deg[w] <= 1:
                queue.append(w)
    cycle_vertices = {u for u in adj if u not in removed}
    cycle_edges = {
        int(e)
        for e in comp_edges
        if int(g.children[e]) in cycle_vertices and int(g.targets[e]) in cycle_vertices
    }
    return cycle_vertices, cycle_edges


def _path_to_cycle(g, v, component, comp_edges, cycle_vertices):
    """Edge ids of a BFS-shortest path from v to the cycle (deterministic)."""
    adj = _adjacency(g, component, comp_edges)
    parent_edge = {v: None}
    frontier = [v]
    while frontier:
        nxt = []
        for u in frontier:
            for e, w in adj[u]:
                if w in parent_edge:
                    continue
                parent_edge[w] = (e, u)
                if w in cycle_vertices:
                    path = []
                    x = w
                    while parent_edge[x] is not None:
                        e2, px = parent_edge[x]
                        path.append(e2)
                        x = px
                    return path[::-1]
                nxt.append(w)
        frontier = nxt
    raise AssertionError("component has a cycle but BFS never reached it")


def _root_edges_toward_heavy(g, v, component, comp_edges, heavy, readded, exclude):
    """Count root slots whose edge lies on a path from the root to a heavy
    vertex, excluding the edge id `exclude` (the path P's first edge).

    Operational reading of the 'at most one edge e not in P' condition: an
    incident edge (v, w) counts when w is heavy or when w connects to a heavy
    vertex in the truncated ball with v removed.  Parallel edges count once
    per edge id.
    """
    verts = np.sort(np.concatenate([component, heavy]))
    dsu = _DSU(verts.shape[0])
    heavy_set = set(heavy.tolist())
    for e in list(comp_edges) + list(readded):
        c, t = int(g.children[e]), int(g.targets[e])
        if c == v or t == v:
            continue
        dsu.union(int(np.searchsorted(verts, c)), int(np.searchsorted(verts, t)))
    root_has_heavy = {}
    for h in heavy_set:
        root_has_heavy[dsu.find(int(np.searchsorted(verts, h)))] = True

    count = 0
    for e in list(comp_edges) + list(readded):
        c, t = int(g.children[e]), int(g.targets[e])
        if v not in (c, t) or c == t:  # loops at v sit on no simple path out
            continue
        if e == exclude:
            continue
        w = t if c == v else c
        if w in heavy_set:
            count += 1
        elif root_has_heavy.get(dsu.find(int(np.searchsorted(verts, w))), False):
            count += 1
    return count


def short_paths_into_core(g: PAGraph, v: int, r: int, params: StructureParams) -> int:
    """Number of v's incident edge slots lying on a path of length <= r into
    the inner core [kappa].  Self-loop slots never count (a loop sits on no
    simple path leaving v); parallel edges count separately.
    """
    if v <= params.kappa_o:
        raise ValueError(f"v must exceed kappa_o={params.kappa_o}, got {v}")
    if r < 1:
        raise ValueError("r must be >= 1")
    indptr, endpoints, _ = g.csr()
    v0 = v - 1
    kappa0 = params.kappa  # heavy iff 0-based endpoint < kappa
    slots = endpoints[indptr[v0] : indptr[v0 + 1]]
    count = 0
    reach_cache: dict[int, bool] = {}
    for w0 in slots.tolist():
        if w0 == v0:
            continue
        if w0 < kappa0:
            count += 1
            continue
        if r < 2:
            continue
        if w0 not in reach_cache:
            reach_cache[w0] = _reaches_core(indptr, endpoints, w0, v0, r - 1, kappa0)
        if reach_cache[w0]:
            count += 1
    return count


def _reaches_core(indptr, endpoints, w0, avoid, depth, kappa0) -> bool:
    if depth == 1:
        nbr = endpoints[indptr[w0] : indptr[w0 + 1]]
        return bool(np.any(nbr < kappa0))
    visited = {avoid, w0}
    frontier = [w0]
    for _ in range(depth):
        nxt = []
        for u in frontier:
            for x in endpoints[indptr[u] : indptr[u + 1]].tolist():
                if x < kappa0:
                    return True
                if x not in visited:
                    visited.add(x)
                    nxt.append(x)
        frontier = nxt
    return False


def outer_core_degree_check(g: PAGraph, params: StructureParams) -> np.ndarray:
    """Vertices i <= kappa_o violating D_i(t) >= (t/kappa_o)^gamma / kappa_o^2
    (1-based; expected empty — the desk-scale floor is weak by design)."""
    threshold = (g.t / params.kappa_o) ** params.gamma / params.kappa_o**2
    deg = g.degrees[: params.kappa_o]
    return np.nonzero(deg < threshold)[0] + 1


@dataclass(frozen=True)
class RootRecord:
    root: int
    category: str
    light_cycles: int
    core_edges: int | None  # None when root <= kappa_o (count only defined outside the outer core)


@dataclass(frozen=True)
class StructureScan:
    params: StructureParams
    radius: int
    seed: int
    records: tuple[RootRecord, ...]

    @property
    def frac_multi_cycle(self) -> float:
        n = len(self.records)
        return sum(r.light_cycles >= 2 for r in self.records) / n if n else 0.0

    @property
    def frac_other(self) -> float:
        n = len(self.records)
        return sum(r.category == CATEGORY_OTHER for r in self.records) / n if n else 0.0

    @property
    def frac_core3(self) -> float:
        outer = [r for r in self.records if r.core_edges is not None]
        if not outer:
            return 0.0
        return sum(r.core_edges >= 3 for r in outer) / len(outer)

    def category_counts(self) -> dict[str, int]:
        counts = {c: 0 for c in CATEGORIES}
        for r in self.records:
            counts[r.category] += 1
        return counts

    def summary(self) -> dict:
        outer = sum(r.core_edges is not None for r in self.records)
        return {
            "samples": len(self.records),
            "radius": self.radius,
            "kappa": self.params.kappa,
            "kappa_o": self.params.kappa_o,
            "seed": self.seed,
            "outer_roots": outer,
            "frac_multi_cycle": self.frac_multi_cycle,
            "frac_core3": self.frac_core3,
            "frac_other": self.frac_other,
            "category_counts": self.category_counts(),
        }

    def csv_lines(self):
        yield "root,category,light_cycles,core_edges"
        for r in self.records:
            core = "" if r.core_edges is None else str(r.core_edges)
            yield f"{r.root},{r.category},{r.light_cycles},{core}"


def scan_structure(
    g: PAGraph,
    params: StructureParams,
    radius: int | None = None,
    samples: int = 1000,
    seed: int = 0,
) -> StructureScan:
    """Classify the truncated balls of uniformly sampled light roots.

    Per root: ball once, then light-cycle census, truncated-ball category,
    and (for roots beyond kappa_o) the core-path edge count.  Deterministic
    in (graph, params, radius, samples, seed).
    """
    if radius is None:
        radius = params.omega
    population = g.t - params.kappa
    if population < 1:
        raise ValueError("no light vertices to sample")
    n = min(int(samples), population)
    gen = make_generator(seed)
    chosen: list[int] = []
    seen: set[int] = set()
    while len(chosen) < n:
        root = params.kappa + 1 + uniform_index(gen.random(), population)
        if root not in seen:
            seen.add(root)
            chosen.append(root)
    records = []
    for root in chosen:
        b = ball(g, root, radius)
        census = _census_from_ball(g, b, params)
        tb = _truncate_from_ball(g, b, params)
        core = (
            short_paths_into_core(g, root, radius, params)
            if root > params.kappa_o
            else None
        )
        records.append(
            RootRecord(root=root, category=tb.category, light_cycles=census, core_edges=core)
        )
    return StructureScan(params=params, radius=radius, seed=seed, records=tuple(records))
