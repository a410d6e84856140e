import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from process_resilience.classify import (
    audit_atyp_size,
    audit_edge_counts,
    audit_neighbourhoods,
    chernoff_tail_bounds,
    classify_vertices,
)
from process_resilience.graphs import build_graph, giant_component
from process_resilience.process import sample_gnp, sample_coupled
from process_resilience.rng import generator

from conftest import complete, star


# -- tail bounds -----------------------------------------------------------

def test_chernoff_formula_values():
    upper, lower = chernoff_tail_bounds(300, 0.1, 0.5)
    assert upper == pytest.approx(math.exp(-2.5))
    assert lower == pytest.approx(math.exp(-3.75))
    assert upper == pytest.approx(0.0821, abs=1e-4)


def test_chernoff_small_delta_tends_to_one():
    upper, lower = chernoff_tail_bounds(1000, 0.5, 1e-9)
    assert upper > 0.999999 and lower > 0.999999


def test_chernoff_rejects_bad_delta():
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(ValueError):
            chernoff_tail_bounds(10, 0.5, bad)


def test_chernoff_dominates_empirical_binomial_tail():
    n, p, delta, trials = 100, 0.5, 0.2, 200_000
    rng = generator(314159)
    draws = rng.binomial(n, p, size=trials)
    upper, lower = chernoff_tail_bounds(n, p, delta)
    mu = n * p
    assert (draws >= (1 + delta) * mu).mean() <= upper
    assert (draws <= (1 - delta) * mu).mean() <= lower


# -- classification --------------------------------------------------------

def test_classify_star():
    # K_{1,5}: scale np = 3, delta = 0.5: leaves (deg 1) are tiny, and every
    # vertex is atypical (leaves below 1.5, the centre's 5 above 4.5)
    cls = classify_vertices(star(6), 0.5, 0.5)
    assert cls.tiny == frozenset(range(1, 6))
    assert cls.atyp == frozenset(range(6))


def test_classify_regular_graph_all_typical():
    cls = classify_vertices(complete(4), 0.75, 0.1)  # np = 3 = every degree
    assert cls.tiny == frozenset()
    assert cls.atyp == frozenset()


def test_classify_restriction():
    cls = classify_vertices(star(6), 0.5, 0.5, restrict_to={0, 1, 2})
    assert cls.tiny == frozenset({1, 2})
    assert cls.atyp == frozenset({0, 1, 2})
    with pytest.raises(ValueError):
        classify_vertices(star(6), 0.5, 0.5, restrict_to={7})


def test_classify_idempotent():
    g = sample_gnp(64, 0.1, 3)
    a = classify_vertices(g, 0.1, 0.3)
    b = classify_vertices(g, 0.1, 0.3)
    assert a.tiny == b.tiny and a.atyp == b.atyp


@given(st.integers(0, 10 ** 6), st.floats(0.05, 0.5))
@settings(max_examples=40, deadline=None)
def test_tiny_subset_of_atyp_for_small_delta(seed, delta):
    g = sample_gnp(30, 0.2, seed)
    cls = classify_vertices(g, 0.2, delta)
    assert cls.tiny <= cls.atyp


def test_tiny_usually_empty_above_connectivity_scale():
    # At p = 1.2 log n / n and small delta, tiny means isolated, and the
    # expected number of isolated vertices is n^{-0.2} << 1.
    n = 1024
    p = 1.2 * math.log(n) / n
    empty = sum(
        not classify_vertices(sample_gnp(n, p, seed), p, 0.05).tiny
        for seed in range(40))
    assert empty >= 24  # ~78% expected


def test_restricted_to_subgraph_relabels():
    g = build_graph(5, [(0, 1), (1, 2), (3, 4)])
    cls = classify_vertices(g, 0.5, 0.5)  # np = 2.5: tiny = deg < 1.25
    giant = giant_component(g)  # vertices {0,1,2}
    sub_cls = cls.restricted_to_subgraph(giant)
    assert sub_cls.n == 3
    assert all(v < 3 for v in sub_cls.tiny | sub_cls.atyp)


# -- atypical-size audit ---------------------------------------------------

def test_atyp_size_empty_holds():
    rep = audit_atyp_size(classify_vertices(complete(4), 0.75, 0.1))
    assert rep.holds and not rep.violations and rep.condition == "C4"


def test_atyp_size_fails_with_witness():
    cls = classify_vertices(star(8), 0.5, 0.05)  # np = 4: all 8 atypical
    rep = audit_atyp_size(cls)
    assert not rep.holds
    assert rep.max_observed == 8
    assert rep.bound == pytest.approx(8 / math.log(8))
    assert rep.violations[0]["measured"] == 8


def test_atyp_size_rejects_single_vertex():
    with pytest.raises(ValueError):
        audit_atyp_size(classify_vertices(build_graph(1, []), 0.5, 0.1))


def test_atyp_size_monte_carlo():
    # p = 2 log n/(3n) and a wide typical band: the n/log n bound holds in
    # nearly every sample at this scale (pilot-calibrated parameters).
    n = 4096
    p = 2 * math.log(n) / (3 * n)
    holds = sum(
        audit_atyp_size(classify_vertices(sample_gnp(n, p, seed), p, 0.9)).holds
        for seed in range(50))
    assert holds >= 48


# -- neighbourhood audits --------------------------------------------------

def _manual_cls(g, tiny=(), atyp=()):
    from process_resilience.classify import VertexClassification
    return VertexClassification(g, 0.0, 0.5, frozenset(tiny), frozenset(atyp))


def test_neighbourhood_audits_vacuous_without_tiny():
    g = complete(5)
    ball_rep, nbr_rep, tri_rep = audit_neighbourhoods(g, _manual_cls(g), 5)
    assert ball_rep.holds and nbr_rep.holds and tri_rep.holds


def test_tiny_ball_boundary_and_violation():
    # path a-c-b: both endpoints tiny gives |ball3(c) & tiny| = 2 (boundary);
    # a third tiny pendant on c breaks the bound with c as witness
    g = build_graph(3, [(0, 2), (1, 2)])
    ball_rep, _, _ = audit_neighbourhoods(g, _manual_cls(g, tiny={0, 1}), 5)
    assert ball_rep.holds and ball_rep.max_observed == 2

    g2 = build_graph(4, [(0, 2), (1, 2), (3, 2)])
    ball_rep, _, _ = audit_neighbourhoods(g2, _manual_cls(g2, tiny={0, 1, 3}), 5)
    assert not ball_rep.holds
    assert {"vertex": 2, "measured": 3, "bound": 2} in [dict(v) for v in ball_rep.violations]


def test_triangle_with_two_tiny_fails():
    g = complete(3)
    _, _, tri_rep = audit_neighbourhoods(g, _manual_cls(g, tiny={0, 1}), 5)
    assert not tri_rep.holds
    assert tri_rep.violations[0]["triangle"] == [0, 1, 2]


def test_atyp_neighbourhood_bound():
    g = star(8)
    _, nbr_rep, _ = audit_neighbourhoods(g, _manual_cls(g, atyp=set(range(1, 8))), 3)
    assert not nbr_rep.holds
    assert nbr_rep.max_observed == 7  # centre sees all seven atypicals


def test_universe_mismatch_rejected():
    g = complete(4)
    with pytest.raises(ValueError, match="universe"):
        audit_neighbourhoods(complete(5), _manual_cls(g), 3)


def test_ball_bound_excludes_all_tiny_two_paths():
    # wherever the 3-ball audit holds, no path u-w-x with all three tiny
    # exists in the graph
    for seed in range(20):
        coupled = sample_coupled(64, 0.05, 0.01, seed)
        cls = classify_vertices(coupled.g_minus, 0.05, 0.5)
        ball_rep, _, _ = audit_neighbourhoods(coupled.g_plus, cls, 10)
        if not ball_rep.holds:
            continue
        g = coupled.g_plus
        for w in cls.tiny:
            tiny_nbrs = [u for u in g.adj[w] if u in cls.tiny]
            assert len(tiny_nbrs) <= 1, (seed, w)


# -- edge-count audit ------------------------------------------------------

def test_edge_counts_saturated_complete_graph():
    g = complete(12)
    rep = audit_edge_counts(g, 1.0 - 1e-9, c=2.0, subset_trials=50, seed=1)
    assert rep.holds
    assert rep.max_observed == pytest.approx(0.0, abs=1e-3)


def test_edge_counts_singletons_pass_any_c():
    g = build_graph(3, [(0, 1)])
    rep = audit_edge_counts(g, 0.5, c=0.001, subset_trials=0, seed=0)
    # only multi-vertex subsets matter; the full-vertex 'component' subsets
    # are the only candidates here
    assert isinstance(rep.holds, bool)


def test_edge_counts_monte_carlo_and_determinism():
    n = 512
    p = math.log(n) / n
    reps = [audit_edge_counts(sample_gnp(n, p, seed), p, c=2.0,
                              subset_trials=300, seed=77)
            for seed in range(20)]
    assert sum(rep.holds for rep in reps) >= 19
    again = audit_edge_counts(sample_gnp(n, p, 0), p, c=2.0,
                              subset_trials=300, seed=77)
    assert again.to_json_dict() == reps[0].to_json_dict()


def test_edge_count_violations_are_recheckable():
    # tight c forces violations; every witness must recompute exactly
    g = complete(10)
    rep = audit_edge_counts(g, 0.2, c=0.5, subset_trials=100, seed=5)
    assert not rep.holds
    for wit in rep.violations:
        X = wit["subset"]
        cnt = sum(1 for i in X for j in X if i < j and g.has_edge(i, j))
        assert cnt == wit["measured"]
        assert abs(cnt - wit["expected"]) > wit["bound"] - 1e-12


def test_audit_report_json_shape():
    g = complete(4)
    rep = audit_atyp_size(classify_vertices(g, 0.75, 0.1))
    payload = rep.to_json_dict()
    assert json.loads(json.dumps(payload)) == payload
    assert set(payload) == {"property", "condition", "holds", "max_observed",
                            "bound", "violations", "params"}
