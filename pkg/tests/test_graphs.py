import random

import pytest
from hypothesis import given, strategies as st

from ghostcover.graphs import (Disconnected, Graph, NotCotree, UnstableSet, betti, canonical_form,
                               contract, fundamental_cycle, is_tree_like, isomorphic,
                               quotient_graph, separating_edges, spanning_forest, trivial_action,
                               walk_is_closed)
from ghostcover.groups import builtin_group

from oracles import bridges_by_removal, random_ggraph, random_multigraph

seeds = st.integers(0, 2 ** 32 - 1)


def test_betti_examples():
    assert betti(Graph(1, ((0, 0),)))[1] == 1
    assert betti(Graph(2, ((0, 1), (0, 1))))[1] == 1
    assert betti(Graph(4, ((0, 1), (1, 2), (2, 3))))[1] == 0
    per, total = betti(Graph(4, ((0, 0), (2, 3), (2, 3))))
    assert total == 2 and sorted(per) == [0, 1, 1]


def test_separating_edge_examples():
    assert separating_edges(Graph(2, ((0, 1),))) == {0}
    assert separating_edges(Graph(2, ((0, 1), (0, 1)))) == set()
    assert separating_edges(Graph(1, ((0, 0),))) == set()
    # loop at one end of a bridge
    assert separating_edges(Graph(2, ((0, 0), (0, 1)))) == {1}


@given(seeds)
def test_bridges_match_removal_oracle(seed):
    g = random_multigraph(random.Random(seed))
    assert separating_edges(g) == bridges_by_removal(g.vertex_count, g.ends)


@given(seeds)
def test_bridges_at_most_v_minus_one(seed):
    g = random_multigraph(random.Random(seed), connected=False)
    assert len(separating_edges(g)) <= g.vertex_count - 1


def test_tree_like_examples():
    assert is_tree_like(Graph(3, ((0, 1), (1, 2), (1, 1), (2, 2))))
    assert not is_tree_like(Graph(2, ((0, 1), (0, 1))))
    with pytest.raises(Disconnected):
        is_tree_like(Graph(2, ()))


def test_spanning_forest_and_cycles():
    g = Graph(3, ((0, 1), (1, 2), (2, 0), (1, 1)))
    f = spanning_forest(g)
    assert f.edges == {0, 1}
    assert f.roots == (0,)
    cyc = fundamental_cycle(g, f, 4)  # edge 2 oriented 2 -> 0
    assert walk_is_closed(g, cyc) and {o >> 1 for o in cyc} == {0, 1, 2}
    assert fundamental_cycle(g, f, 6) == [6]
    with pytest.raises(NotCotree):
        fundamental_cycle(g, f, 0)


@given(seeds)
def test_fundamental_cycles_are_closed(seed):
    g = random_multigraph(random.Random(seed))
    f = spanning_forest(g)
    assert len(f.edges) == g.vertex_count - len(g.components)
    for o in g.oriented_edges:
        if (o >> 1) not in f.edges:
            cyc = fundamental_cycle(g, f, o)
            assert cyc[0] == o and walk_is_closed(g, cyc)
            assert all((x >> 1) in f.edges for x in cyc[1:])


def test_contract_examples():
    g = Graph(3, ((0, 1), (1, 2), (2, 0)))
    c = contract(g, {0, 1})
    assert c.graph.vertex_count == 2 and c.kept_edges == (1, 2)
    c = contract(g, {0, 1, 2, 3, 4, 5})
    assert c.graph.vertex_count == 1 and c.graph.edge_count == 0
    with pytest.raises(ValueError):
        contract(g, {0})


def test_contract_rejects_unstable_set():
    G = builtin_group("C2")
    # the swap of two parallel edges between two vertices
    g = Graph(2, ((0, 1), (0, 1)))
    act = type(trivial_action(g, G))(g, G, ((0, 1), (0, 1)), ((0, 1, 2, 3), (2, 3, 0, 1)))
    act.validate()
    with pytest.raises(UnstableSet):
        contract(g, {0, 1}, act)
    assert contract(g, {0, 1, 2, 3}, act).graph.edge_count == 0


def test_quotient_of_regular_cycle():
    G = builtin_group("C3")
    # C3 rotating a triangle
    g = Graph(3, ((0, 1), (1, 2), (2, 0)))
    vp = tuple(tuple((v + s) % 3 for v in range(3)) for s in range(3))
    ep = tuple(tuple(2 * ((o >> 1) + s) % 6 + (o & 1) for o in range(6)) for s in range(3))
    act = type(trivial_action(g, G))(g, G, vp, ep)
    act.validate()
    q = quotient_graph(act)
    assert q.graph.vertex_count == 1 and q.graph.edge_count == 1 and q.graph.is_loop(0)


@given(seeds, st.sampled_from(["C2", "C3", "S3"]))
def test_contraction_commutes_with_quotient(seed, name):
    G = builtin_group(name)
    rng = random.Random(seed)
    act = random_ggraph(G, rng, rng.randint(1, 3), rng.randint(1, 3))
    act.validate()
    q = quotient_graph(act)
    # contract a random union of edge orbits upstairs and the matching edges downstairs
    chosen = {k for k in range(q.graph.edge_count) if rng.random() < 0.5}
    D = {o for o in act.graph.oriented_edges if (q.edge_proj[o] >> 1) in chosen}
    up = contract(act.graph, D, act)
    down = contract(q.graph, chosen, oriented=False)
    q2 = quotient_graph(up.action)
    assert canonical_form(q2.graph) == canonical_form(down.graph)


@given(seeds)
def test_canonical_form_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    g = random_multigraph(rng, max_v=5, max_e=7)
    perm = list(range(g.vertex_count))
    rng.shuffle(perm)
    ends = [(perm[u], perm[v]) for u, v in g.ends]
    rng.shuffle(ends)
    assert isomorphic(g, Graph(g.vertex_count, tuple(ends)))


def test_canonical_form_separates():
    assert not isomorphic(Graph(2, ((0, 0), (0, 1))), Graph(2, ((0, 1), (0, 1))))
    assert not isomorphic(Graph(3, ((0, 1), (1, 2))), Graph(3, ((0, 1), (0, 2), (1, 2))))


def test_json_roundtrip():
    g = Graph(3, ((0, 1), (1, 2), (2, 2)))
    assert Graph.from_json(g.to_json()) == g
