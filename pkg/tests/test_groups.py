import itertools

import pytest
from hypothesis import given, strategies as st

from ghostcover.groups import (BUILTIN_NAMES, NotAGroup, builtin_group, center, centralizer,
                               coset_space, cyclic_group, equivariant_maps, generated_subgroup,
                               group_from_permutations, group_from_spec, group_from_table,
                               group_to_spec, inverse_index, local_index_from_element,
                               power_index, subclass_leq, subgroup_class_of, subgroup_classes,
                               trivial_subgroup, whole_group, all_subgroups)

from oracles import all_maps_equivariant, perm_group_elements, subgroups_by_generation, \
    subsets_closed_under_product

SMALL = ["C1", "C2", "C3", "C4", "C5", "C6", "S3", "D4", "Q8"]


def test_cyclic_table_is_addition_mod_n():
    G = group_from_table(3, [[(x + y) % 3 for y in range(3)] for x in range(3)])
    assert G.order == 3 and G.identity == 0
    assert [G.element_order(x) for x in G.elements] == [1, 3, 3]
    assert G.is_abelian


def test_s3_from_transposition_and_three_cycle():
    G = group_from_permutations([[1, 0, 2], [1, 2, 0]])
    assert G.order == 6
    orders = sorted(G.element_order(x) for x in G.elements)
    assert orders == [1, 2, 2, 2, 3, 3]
    assert not G.is_abelian
    assert len(perm_group_elements([(1, 0, 2), (1, 2, 0)])) == G.order


def test_non_associative_table_rejected():
    # a commutative loop of order 5 with identity and inverses but no associativity
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAGroup, match="associativity"):
        group_from_table(5, table)


def test_missing_identity_rejected():
    with pytest.raises(NotAGroup, match="identity"):
        group_from_table(2, [[1, 0], [0, 0]])


def test_out_of_range_and_shape():
    with pytest.raises(NotAGroup):
        group_from_table(2, [[0, 2], [1, 0]])
    with pytest.raises(NotAGroup):
        group_from_table(2, [[0, 1]])
    with pytest.raises(NotAGroup):
        group_from_table(65, [[0] * 65] * 65)


@pytest.mark.parametrize("name,count,sizes", [
    ("C3", 2, None),
    ("C4", 3, None),
    ("S3", 4, [1, 3, 1, 1]),
])
def test_subgroup_class_counts(name, count, sizes):
    classes = subgroup_classes(builtin_group(name))
    assert len(classes) == count
    if sizes:
        by_order = sorted((c.subgroup_order, len(c.representatives)) for c in classes)
        assert by_order == sorted(zip([1, 2, 3, 6], sizes))


@pytest.mark.parametrize("name", SMALL)
def test_subgroups_match_subset_oracle(name):
    G = builtin_group(name)
    ours = {frozenset(H.elements) for H in all_subgroups(G)}
    assert ours == set(subsets_closed_under_product(G))
    flat = [H for c in subgroup_classes(G) for H in c.representatives]
    assert len(flat) == len(ours) == len({frozenset(H.elements) for H in flat})


def test_s4_subgroups_match_generation_oracle():
    G = builtin_group("S4")
    ours = {frozenset(H.elements) for H in all_subgroups(G)}
    assert ours == subgroups_by_generation(G)
    assert len(ours) == 30
    assert len(subgroup_classes(G)) == 11


@pytest.mark.parametrize("name", SMALL + ["S4"])
def test_group_axioms(name):
    G = builtin_group(name)
    e = G.identity
    for x in G.elements:
        assert G.mul(x, e) == x == G.mul(e, x)
        assert G.mul(x, G.inverse(x)) == e
        assert G.power(x, G.element_order(x)) == e
    for x, y, z in itertools.product(G.elements, repeat=3):
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))


def test_centralizer_examples():
    G = builtin_group("S3")
    lab = {G.label(x): x for x in G.elements}
    rho = generated_subgroup(G, [lab["(123)"]])
    assert sorted(centralizer(G, rho).elements) == sorted(rho.elements)
    assert centralizer(G, trivial_subgroup(G)).order == 6
    assert center(G).order == 1
    assert center(builtin_group("Q8")).order == 2
    assert center(builtin_group("D4")).order == 2


@given(st.sampled_from(SMALL + ["S4"]), st.data())
def test_centralizer_of_conjugate(name, data):
    G = builtin_group(name)
    gens = data.draw(st.lists(st.sampled_from(G.elements), max_size=2))
    g = data.draw(st.sampled_from(G.elements))
    H = generated_subgroup(G, gens)
    lhs = sorted(centralizer(G, H.conjugate(g)).elements)
    rhs = sorted(G.conj(g, z) for z in centralizer(G, H).elements)
    assert lhs == rhs


def test_subclass_order_examples():
    G = builtin_group("S3")
    classes = {c.subgroup_order: c for c in subgroup_classes(G)}
    assert subclass_leq(classes[1], classes[2])
    assert subclass_leq(classes[3], classes[6])
    assert not subclass_leq(classes[2], classes[3])
    assert not subclass_leq(classes[3], classes[2])


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "C6"])
def test_subclass_order_is_a_partial_order(name):
    classes = subgroup_classes(builtin_group(name))
    for a in classes:
        assert subclass_leq(a, a)
        for b in classes:
            if a is not b and subclass_leq(a, b):
                assert not subclass_leq(b, a)
            for c in classes:
                if subclass_leq(a, b) and subclass_leq(b, c):
                    assert subclass_leq(a, c)


def test_equivariant_maps_examples():
    G = builtin_group("S3")
    lab = {G.label(x): x for x in G.elements}
    T = coset_space(G, generated_subgroup(G, [lab["(12)"]]))
    assert T.size == 3
    assert equivariant_maps(T).order == 2
    assert equivariant_maps(coset_space(G, whole_group(G))).order == center(G).order == 1
    assert equivariant_maps(coset_space(G, trivial_subgroup(G))).order == 6


@pytest.mark.parametrize("name", ["C4", "S3", "D4", "Q8"])
def test_equivariant_maps_brute_force(name):
    G = builtin_group(name)
    for H in all_subgroups(G):
        T = coset_space(G, H)
        if G.order ** T.size > 300000:
            continue
        m = equivariant_maps(T)
        assert m.order == all_maps_equivariant(G, T.labels, T.action)
        assert m.is_closed()


def test_local_index_power_and_inverse():
    G = cyclic_group(6)
    idx = local_index_from_element(G, 1)
    assert idx.order == 6
    assert [power_index(idx, k) for k in range(7)] == [0, 1, 2, 3, 4, 5, 0]
    assert inverse_index(idx).generator == 5
    assert idx.subgroup.order == 6


@given(st.sampled_from(SMALL), st.data())
def test_inverse_index_generates_same_subgroup(name, data):
    G = builtin_group(name)
    h = data.draw(st.sampled_from(G.elements))
    idx = local_index_from_element(G, h)
    inv = inverse_index(idx)
    assert sorted(idx.subgroup.elements) == sorted(inv.subgroup.elements)
    k = data.draw(st.integers(0, 20))
    assert G.mul(power_index(idx, k), power_index(inv, k)) == G.identity


def test_spec_roundtrip():
    for name in BUILTIN_NAMES:
        G = builtin_group(name)
        assert group_from_spec(group_to_spec(G)) is G
    G = group_from_spec({"perm_generators": [[1, 2, 0]], "name": "Z3"})
    H = group_from_spec(group_to_spec(G))
    assert H.order == 3 and H.table == G.table
    with pytest.raises(KeyError):
        group_from_spec("C99")
    with pytest.raises(NotAGroup):
        group_from_spec(3)


def test_subgroup_class_membership():
    G = builtin_group("S3")
    lab = {G.label(x): x for x in G.elements}
    cls = subgroup_class_of(generated_subgroup(G, [lab["(12)"]]))
    assert generated_subgroup(G, [lab["(13)"]]) in cls
    assert generated_subgroup(G, [lab["(123)"]]) not in cls
