"""Structural certificate tests.

Category cases are hand-crafted multigraphs small enough to classify by eye;
the census and core-path counters are additionally checked against naive
dictionary-based oracles on generated graphs.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pamp.pa_graph import generate_pa
from pamp.structure import (
    CATEGORIES,
    CATEGORY_ACYCLIC_HEAVY,
    CATEGORY_OTHER,
    CATEGORY_PATH_CYCLE,
    CATEGORY_ROOT_CYCLE,
    CATEGORY_TREE,
    StructureParams,
    ball,
    light_cycle_census,
    outer_core_degree_check,
    scan_structure,
    short_paths_into_core,
    truncated_ball,
)

from conftest import brute_ball, brute_light_census, build_graph


def params(kappa, kappa_o=None, omega=2, gamma=0.5):
    return StructureParams(kappa=kappa, kappa_o=kappa_o or kappa, omega=omega,
                           gamma=gamma)


# A chain hanging off the core: loop(1), (2,1), (3,2), (4,3)
CHAIN = [1, 1, 2, 3]
# Self-loops at 2 and 3 make light cycles: loop(1), loop(2), (3,2), (4,3)
LOOPY = [1, 2, 2, 3]


# ------------------------------------------------------------------- params

def test_params_validation():
    with pytest.raises(ValueError):
        params(0)
    with pytest.raises(ValueError):
        StructureParams(kappa=5, kappa_o=3, omega=2, gamma=0.5)
    with pytest.raises(ValueError):
        params(1, omega=0)
    with pytest.raises(ValueError):
        params(1, gamma=1.5)


def test_desk_scale_cutoffs():
    g = generate_pa(100_000, 5, 0.0, seed=1)
    sp = StructureParams.desk_scale(g, omega=2)
    assert sp.kappa == 32          # ceil(1e5^0.3)
    assert sp.kappa_o == 317       # ceil(1e5^0.5)
    assert sp.gamma == 0.5
    assert sp.is_heavy(32) and not sp.is_heavy(33)


# --------------------------------------------------------------------- balls

def test_ball_radius_zero_keeps_loops():
    g = build_graph(1, 0.0, CHAIN)
    b = ball(g, 1, 0)
    assert b.vertices.tolist() == [1]
    assert b.num_edges == 1  # the self-loop
    b = ball(g, 3, 0)
    assert b.vertices.tolist() == [3]
    assert b.num_edges == 0


def test_ball_is_induced_subgraph():
    g = build_graph(1, 0.0, CHAIN)
    b = ball(g, 4, 2)
    assert b.vertices.tolist() == [2, 3, 4]
    assert b.num_edges == 2  # (3,2), (4,3); (2,1) leaves the ball


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32), v=st.integers(1, 80), r=st.integers(0, 3))
def test_ball_matches_brute_force(seed, v, r):
    g = generate_pa(80, 2, 0.0, seed=seed)
    b = ball(g, v, r)
    verts, eids = brute_ball(g, v, r)
    assert set(b.vertices.tolist()) == verts
    assert set(b.edge_ids.tolist()) == eids


# -------------------------------------------------------------------- census

def test_census_tree_ball_is_zero():
    g = build_graph(1, 0.0, CHAIN)
    assert light_cycle_census(g, 4, 2, params(1)) == 0


def test_census_counts_light_self_loop():
    g = build_graph(1, 0.0, LOOPY)
    assert light_cycle_census(g, 2, 1, params(1)) == 1
    # from 4 the radius-3 ball reaches the loop at 2 through 3
    assert light_cycle_census(g, 4, 3, params(1)) == 1


def test_census_counts_two_loops():
    # loops at 2 and 3 joined by (3,2); root 4 hangs off 3 and sees both
    g = build_graph(2, 0.0, [1, 1, 2, 1, 3, 2, 3, 1])
    assert light_cycle_census(g, 4, 2, params(1)) == 2


def test_census_counts_parallel_pair():
    # (2,1)x2 heavy-attached, (3,2)x2 parallel light pair
    g = build_graph(2, 0.0, [1, 1, 1, 1, 2, 2])
    assert light_cycle_census(g, 3, 1, params(1)) == 1


def test_census_heavy_cycles_excluded():
    # all cycles sit inside the core: loops at 1 count only when 1 is light
    g = build_graph(1, 0.0, CHAIN)
    assert light_cycle_census(g, 2, 2, params(1)) == 0
    with pytest.raises(ValueError, match="heavy"):
        light_cycle_census(g, 1, 0, params(1))  # heavy roots rejected


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32), v=st.integers(6, 150))
def test_census_matches_brute_force(seed, v):
    g = generate_pa(150, 3, 0.0, seed=seed)
    assert (light_cycle_census(g, v, 2, params(5, 20))
            == brute_light_census(g, v, 2, 5))


# ---------------------------------------------------------------- truncation

def test_truncated_ball_tree_category():
    g = build_graph(1, 0.0, CHAIN)
    tb = truncated_ball(g, 4, 2, params(1))
    assert tb.category == CATEGORY_TREE
    assert tb.component.tolist() == [2, 3, 4]
    assert tb.heavy.size == 0
    assert tb.readded_edge_ids.size == 0


def test_truncated_ball_acyclic_heavy_category():
    g = build_graph(1, 0.0, CHAIN)
    tb = truncated_ball(g, 3, 2, params(1))
    # ball {1,2,3,4}: edge (2,1) deleted then re-added; loop(1) stays deleted
    assert tb.category == CATEGORY_ACYCLIC_HEAVY
    assert tb.component.tolist() == [2, 3, 4]
    assert tb.heavy.tolist() == [1]
    assert tb.readded_edge_ids.tolist() == [1]
    assert 0 not in tb.edge_ids.tolist()  # the core self-loop never returns


def test_truncated_ball_root_cycle_category():
    # light parallel pair {3,4}; heavy 1 and 2 attach at 3 via single edges
    g = build_graph(2, 0.0, [1, 1, 1, 1, 1, 2, 3, 3])
    tb = truncated_ball(g, 4, 2, params(2))
    assert tb.category == CATEGORY_ROOT_CYCLE
    assert tb.component.tolist() == [3, 4]
    assert tb.heavy.tolist() == [1, 2]
    assert len(tb.readded_edge_ids) == 2


def test_truncated_ball_path_cycle_category():
    # loop at 3 is the cycle; root 4 reaches it by (4,3) and has one heavy edge
    g = build_graph(2, 0.0, [1, 1, 2, 2, 3, 2, 3, 1])
    tb = truncated_ball(g, 4, 2, params(2))
    assert tb.category == CATEGORY_PATH_CYCLE
    assert tb.component.tolist() == [3, 4]
    assert sorted(tb.heavy.tolist()) == [1, 2]


def test_truncated_ball_other_categories():
    # three heavy attachments at the root
    g = build_graph(3, 0.0, [1, 1, 1, 1, 2, 2, 1, 2, 3, 1, 2, 3])
    tb = truncated_ball(g, 4, 1, params(3))
    assert tb.category == CATEGORY_OTHER
    # two light cycles in one component
    g2 = build_graph(2, 0.0, [1, 1, 2, 1, 3, 2, 3, 1])
    tb2 = truncated_ball(g2, 4, 2, params(1))
    assert tb2.category == CATEGORY_OTHER


def test_truncated_ball_drops_disconnected_light_part():
    # vertices 2 and 3 both hang off the core; from 3 the component is {3}
    g = build_graph(1, 0.0, [1, 1, 1, 3])
    tb = truncated_ball(g, 3, 2, params(1))
    assert tb.component.tolist() == [3, 4]
    assert 2 not in tb.vertices.tolist()


def test_truncated_vertices_subset_of_ball():
    g = generate_pa(500, 3, 0.0, seed=9)
    sp = params(8, 25)
    for v in (50, 200, 499):
        b = ball(g, v, 2)
        tb = truncated_ball(g, v, 2, sp)
        assert set(tb.vertices.tolist()) <= set(b.vertices.tolist())
        assert set(tb.edge_ids.tolist()) <= set(b.edge_ids.tolist())
        assert tb.category in CATEGORIES


# ------------------------------------------------------------ short paths

def test_core_paths_zero_without_heavy():
    g = build_graph(1, 0.0, CHAIN)
    assert short_paths_into_core(g, 4, 2, params(1, 2)) == 0


def test_core_paths_counts_distance_two():
    g = build_graph(1, 0.0, CHAIN)
    sp = params(1, 2)
    # edge (3,2) continues 2 -> 1 into the core; edge (4,3) does not
    assert short_paths_into_core(g, 3, 2, sp) == 1
    assert short_paths_into_core(g, 3, 1, sp) == 0


def test_core_paths_direct_edge():
    g = build_graph(1, 0.0, CHAIN)
    assert short_paths_into_core(g, 2, 1, params(1, 1)) >= 1


def test_core_paths_requires_outer_vertex():
    g = build_graph(1, 0.0, CHAIN)
    with pytest.raises(ValueError):
        short_paths_into_core(g, 2, 2, params(1, 2))  # v == kappa_o


def test_core_paths_counts_parallel_slots():
    # both parallel edges (2,1) lead into the core and both slots count
    g = build_graph(2, 0.0, [1, 1, 1, 1, 2, 2])
    assert short_paths_into_core(g, 2, 1, params(1, 1)) == 2


# ----------------------------------------------------------- degree floors

def test_outer_core_degree_check_on_generated_graph():
    g = generate_pa(2000, 5, 0.0, seed=4)
    sp = StructureParams.desk_scale(g)
    assert outer_core_degree_check(g, sp).tolist() == []


def test_outer_core_degree_check_flags_violations():
    # vertex 1 has degree 3 < 4^0.99, so a near-linear floor must flag it
    g = build_graph(1, 0.0, CHAIN)
    sp = StructureParams(kappa=1, kappa_o=1, omega=1, gamma=0.99)
    assert outer_core_degree_check(g, sp).tolist() == [1]


# -------------------------------------------------------------------- scans

def test_scan_structure_deterministic(medium_graph):
    sp = StructureParams.desk_scale(medium_graph, omega=2)
    a = scan_structure(medium_graph, sp, samples=60, seed=5, radius=2)
    b = scan_structure(medium_graph, sp, samples=60, seed=5, radius=2)
    assert a.records == b.records
    assert scan_structure(medium_graph, sp, samples=60, seed=6,
                          radius=2).records != a.records


def test_scan_structure_contents(medium_graph):
    sp = StructureParams.desk_scale(medium_graph, omega=2)
    scan = scan_structure(medium_graph, sp, samples=40, seed=3, radius=2)
    assert len(scan.records) == 40
    assert sum(scan.category_counts().values()) == 40
    roots = [r.root for r in scan.records]
    assert len(set(roots)) == 40            # sampled without replacement
    assert all(r > sp.kappa for r in roots)  # light roots only
    for rec in scan.records:
        assert rec.category in CATEGORIES
        assert rec.light_cycles >= 0
        if rec.root > sp.kappa_o:
            assert rec.core_edges is not None and rec.core_edges >= 0
        else:
            assert rec.core_edges is None


def test_scan_csv_lines(medium_graph):
    sp = StructureParams.desk_scale(medium_graph, omega=2)
    scan = scan_structure(medium_graph, sp, samples=5, seed=1, radius=2)
    lines = list(scan.csv_lines())
    assert lines[0] == "root,category,light_cycles,core_edges"
    assert len(lines) == 6
    root, cat, cycles, core = lines[1].split(",")
    assert int(root) > sp.kappa and cat in CATEGORIES and int(cycles) >= 0


def test_scan_summary_keys(medium_graph):
    sp = StructureParams.desk_scale(medium_graph, omega=2)
    s = scan_structure(medium_graph, sp, samples=10, seed=2, radius=2).summary()
    for key in ("samples", "radius", "kappa", "kappa_o", "frac_multi_cycle",
                "frac_core3", "frac_other", "category_counts"):
        assert key in s


def test_scan_samples_capped_by_population():
    g = generate_pa(30, 2, 0.0, seed=8)
    sp = params(10, 20)
    scan = scan_structure(g, sp, samples=1000, seed=1, radius=2)
    assert len(scan.records) == 20  # only t - kappa light roots exist
