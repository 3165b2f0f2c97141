import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inets import Configuration, combinator_system, normalize, parse_configuration, validate_configuration
from inets.combinators import complete_tree, erasure
from inets.engine import NORMAL, apply_interaction, resolve_indirections
from inets.core import canonicalize
from inets.oracle import (
    InconclusiveError,
    build_reduction_graph,
    check_diamond,
    check_step_invariance,
    check_unique_normal_form,
    generate_random_configuration,
    generate_random_system,
    shortest_cycle_through,
    sink_path_lengths,
)

from conftest import configurations


def cfg(S, text):
    return parse_configuration(text, S)


def test_looping_graph_has_four_cycle_through_root(S, looping):
    # other schedules grow the net without bound, so the cap always bites
    g = build_reduction_graph(looping, S, max_nodes=100)
    assert g.truncated
    cycle = shortest_cycle_through(g)
    assert len(cycle) == 4
    assert sorted(e.info.key for e in cycle) == sorted(
        [("del", "gam"), ("eps", "gam"), ("del", "eps"), ("eps", "eps")])


def test_trivial_graph(S):
    g = build_reduction_graph(cfg(S, "<eps = eps>"), S)
    assert len(g) == 2 and len(g.edges) == 1


def test_small_erasure_graph(S):
    g = build_reduction_graph(cfg(S, "<eps = gam(eps, eps)>"), S)
    assert sink_path_lengths(g) == {3}
    nf = check_unique_normal_form(g)
    assert nf.unique and [g.nodes[i] for i in nf.normal_forms] == [Configuration()]


def test_already_normal(S):
    g = build_reduction_graph(cfg(S, "<r = eps> interface r;"), S)
    assert len(g) == 1 and check_unique_normal_form(g).unique and check_diamond(g).holds


def test_nodes_are_canonical_and_edges_replay(S):
    g = build_reduction_graph(erasure(complete_tree(2)), S)
    for i, n in enumerate(g.nodes):
        assert canonicalize(n, cuts=True) == n
    for e in g.edges:
        c1, _ = apply_interaction(g.nodes[e.source], e.info.equation, S)
        assert canonicalize(resolve_indirections(c1), cuts=True) == g.nodes[e.target]


def test_corrupted_graph_is_caught(S):
    g = build_reduction_graph(cfg(S, "<eps = eps, eps = gam(eps, eps)>"), S)
    assert check_diamond(g).holds
    branching = next(n for n in range(len(g)) if len({e.target for e in g.successors(n)}) > 1)
    a = min(e.target for e in g.successors(branching))
    # remove every edge leaving one of the two reducts
    broken = dataclasses.replace(g, _succ={**g._succ, a: []})
    rep = check_diamond(broken)
    assert not rep.holds and rep.counterexample[0] == branching


def test_truncated_is_inconclusive(S, looping):
    g = build_reduction_graph(looping, S, max_nodes=1)
    assert g.truncated
    with pytest.raises(InconclusiveError):
        check_diamond(g)
    with pytest.raises(InconclusiveError):
        check_unique_normal_form(g)


def test_cycle_detected_in_path_lengths(S, looping):
    g = build_reduction_graph(looping, S, max_nodes=100)
    with pytest.raises(InconclusiveError):
        sink_path_lengths(g)
    with pytest.raises(ValueError):
        sink_path_lengths(dataclasses.replace(g, truncated=False))


class TestInvariance:
    def test_tree(self, S):
        rep = check_step_invariance(erasure(complete_tree(5)), S)
        assert rep.holds and rep.interaction_counts == {63}

    def test_eps_eps(self, S):
        rep = check_step_invariance(cfg(S, "<eps = eps>"), S)
        assert rep.interaction_counts == {1}

    def test_duplication_fifty_seeds(self, S):
        c = cfg(S, "<del(r1, r2) = gam(eps, eps)> interface r1, r2;")
        rep = check_step_invariance(c, S, trials=50, seed=7)
        assert rep.holds and len(rep.runs) == 53
        (n,) = rep.interaction_counts
        g = build_reduction_graph(c, S)
        assert sink_path_lengths(g) == {n}

    def test_fuel_is_inconclusive(self, S, looping):
        with pytest.raises(InconclusiveError):
            check_step_invariance(looping, S, trials=1, fuel=50)


class TestGenerator:
    def test_deterministic(self, S):
        assert generate_random_configuration(S, 12, 2, 99) == generate_random_configuration(S, 12, 2, 99)

    @settings(max_examples=500, deadline=None)
    @given(st.integers(0, 10**9), st.integers(2, 12), st.integers(0, 3))
    def test_valid_and_bounded(self, seed, max_agents, k):
        S = combinator_system()
        c = generate_random_configuration(S, max_agents, k, seed)
        assert validate_configuration(c, S).ok
        assert c.agent_count() <= max_agents and len(c.interface) == k

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6))
    def test_random_systems_validate(self, seed):
        s = generate_random_system(seed)
        c = generate_random_configuration(s, 6, 0, seed)
        assert validate_configuration(c, s).ok


@settings(max_examples=60, deadline=None)
@given(configurations(max_agents=8))
def test_confluence_properties(c):
    S = combinator_system()
    g = build_reduction_graph(c, S, max_nodes=300)
    if g.truncated:
        return
    assert check_diamond(g).holds
    assert check_unique_normal_form(g).unique
    try:
        lengths = sink_path_lengths(g)
    except ValueError:
        return  # cyclic graph
    # every maximal path spends the same number of interactions
    assert len(lengths) == 1
    r = normalize(c, S)
    if r.status == NORMAL:
        assert lengths == {r.interactions}
