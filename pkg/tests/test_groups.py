"""Tests for finite groups, families and the orbit category."""

from __future__ import annotations

import pytest

from bredon_obstruction.exceptions import (
    CompositionMismatchError,
    InvalidMorphismError,
    NotAGroupError,
    UnknownSubgroupError,
)
from bredon_obstruction.groups import (
    OrbitCategory,
    SubgroupFamily,
    close_family,
    compose,
    group_from_generators,
    group_from_permutations,
    group_from_table,
    hom_set,
    identity_morphism,
    orbit_morphism,
    subgroup_generated,
    subgroups_of,
)
from factories import SMALL_GROUPS, cyclic_group, klein_group, symmetric_group_3

NON_ASSOCIATIVE_LOOP = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_small_groups_satisfy_axioms(name: str) -> None:
    G = SMALL_GROUPS[name]()
    for g in G.elements:
        assert G.mul[G.inv[g]][g] == G.identity
        assert G.mul[G.identity][g] == g == G.mul[g][G.identity]


def test_table_must_be_associative() -> None:
    with pytest.raises(NotAGroupError) as exc_info:
        group_from_table(NON_ASSOCIATIVE_LOOP)
    assert exc_info.value.axiom == "associativity"
    assert exc_info.value.witness == (1, 1, 2)


def test_table_must_be_latin_square() -> None:
    with pytest.raises(NotAGroupError) as exc_info:
        group_from_table([[0, 1], [0, 1]])
    assert exc_info.value.axiom == "latin square"


def test_table_entries_in_range() -> None:
    with pytest.raises(NotAGroupError) as exc_info:
        group_from_table([[0, 2], [1, 0]])
    assert exc_info.value.axiom == "closure"


def test_permutation_closure_failure() -> None:
    with pytest.raises(NotAGroupError):
        group_from_permutations({"e": [0, 1, 2], "r": [1, 2, 0]})


def test_generated_group_names_are_shortlex_words() -> None:
    G = group_from_generators({"a": [1, 2, 0], "b": [1, 0, 2]})
    assert G.order == 6
    assert G.names[0] == "e"
    assert {"a", "b", "a*a", "a*b", "b*a"} <= set(G.names)


def test_element_lookup_by_name() -> None:
    G = symmetric_group_3()
    assert G.names[G.element("t1")] == "t1"
    with pytest.raises(KeyError):
        G.element("x")


def test_conjugation_is_right_action() -> None:
    G = symmetric_group_3()
    t0, r = G.element("t0"), G.element("r")
    H = subgroup_generated(G, [t0])
    assert H.conjugate(r).conjugate(r) == H.conjugate(G.mul[r][r])
    assert H.conjugate(r) != H


def test_subgroups_of_s3() -> None:
    G = symmetric_group_3()
    subs = subgroups_of(G.whole)
    assert [H.order for H in subs] == [1, 2, 2, 2, 3, 6]
    assert all(H.is_valid() for H in subs)


def test_subgroup_label_uses_element_names() -> None:
    G = klein_group()
    assert subgroup_generated(G, [G.element("a")]).label == "{e,a}"


def test_close_family_adds_conjugates_and_subgroups() -> None:
    G = symmetric_group_3()
    family = close_family(G, [subgroup_generated(G, [G.element("t0")])])
    assert [H.order for H in family] == [1, 2, 2, 2]
    assert family.is_closed()


def test_missing_members_reports_closure() -> None:
    G = symmetric_group_3()
    t0 = subgroup_generated(G, [G.element("t0")])
    family = SubgroupFamily.of(G, [t0])
    assert not family.is_closed()
    assert G.trivial_subgroup in family.missing_members()
    with pytest.raises(UnknownSubgroupError):
        family.require(G.whole)


def test_orbit_morphism_requires_subconjugacy() -> None:
    G = symmetric_group_3()
    t0 = subgroup_generated(G, [G.element("t0")])
    t1 = subgroup_generated(G, [G.element("t1")])
    with pytest.raises(InvalidMorphismError):
        orbit_morphism(t0, t1, G.identity)
    f = next(iter(hom_set(t0, t1)))
    assert t0.conjugate(f.coset_rep).is_subgroup_of(t1)


def test_coset_representative_is_canonical() -> None:
    G = cyclic_group(4)
    K = subgroup_generated(G, [2])
    assert orbit_morphism(G.trivial_subgroup, K, 3) == orbit_morphism(G.trivial_subgroup, K, 1)


def test_hom_sets_count_fixed_cosets() -> None:
    G = symmetric_group_3()
    trivial = G.trivial_subgroup
    t0 = subgroup_generated(G, [G.element("t0")])
    assert len(hom_set(trivial, t0)) == 3
    assert len(hom_set(t0, t0)) == 1
    assert len(hom_set(trivial, trivial)) == 6
    assert hom_set(t0, trivial) == []


def test_composition_is_associative_with_identities() -> None:
    G = symmetric_group_3()
    category = OrbitCategory(close_family(G, [G.whole]))
    table = category.composition_table
    for f, g in category.composable_pairs():
        assert compose(identity_morphism(f.source), f) == f
        assert compose(g, identity_morphism(g.target)) == g
        for h in category.hom(g.target, g.target):
            assert compose(table[(f, g)], h) == compose(f, compose(g, h))


def test_compose_rejects_mismatched_ends() -> None:
    G = cyclic_group(2)
    f = identity_morphism(G.trivial_subgroup)
    g = identity_morphism(G.whole)
    with pytest.raises(CompositionMismatchError):
        compose(f, g)


def test_category_validating_constructor() -> None:
    G = cyclic_group(3)
    category = OrbitCategory(close_family(G, [G.trivial_subgroup]))
    with pytest.raises(UnknownSubgroupError):
        category.morphism(G.trivial_subgroup, G.whole, 0)
    assert category.morphism(G.trivial_subgroup, G.trivial_subgroup, 2).coset_rep == 2
    assert len(category.all_morphisms()) == 3


# --- Properties over the small groups ---


@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_close_family_is_idempotent(name: str) -> None:
    G = SMALL_GROUPS[name]()
    subs = subgroups_of(G.whole)
    for seeds in [[H] for H in subs] + [[H, K] for H, K in zip(subs, subs[1:])]:
        family = close_family(G, seeds)
        assert family.is_closed()
        assert close_family(G, family) == family


@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_hom_set_counts_match_fixed_cosets(name: str) -> None:
    G = SMALL_GROUPS[name]()
    subs = subgroups_of(G.whole)
    for H in subs:
        for K in subs:
            cosets = {
                frozenset(G.mul[a][k] for k in K.elements)
                for a in G.elements
                if H.conjugate(a).is_subgroup_of(K)
            }
            assert len(hom_set(H, K)) == len(cosets)


@pytest.mark.parametrize("name", sorted(SMALL_GROUPS))
def test_conjugate_sources_have_matching_hom_sets(name: str) -> None:
    G = SMALL_GROUPS[name]()
    subs = subgroups_of(G.whole)
    for H in subs:
        for a in G.elements:
            conjugate = H.conjugate(a)
            back = orbit_morphism(conjugate, H, G.inv[a])
            for K in subs:
                homs = hom_set(H, K)
                image = {compose(back, f) for f in homs}
                assert len(image) == len(homs)
                assert image == set(hom_set(conjugate, K))


@pytest.mark.parametrize("name", ["S3", "D4", "Q8"])
def test_composition_is_associative_on_all_triples(name: str) -> None:
    G = SMALL_GROUPS[name]()
    category = OrbitCategory(close_family(G, [G.whole]))
    table = category.composition_table
    for (f, g), fg in table.items():
        for L in category.objects:
            for h in category.hom(g.target, L):
                assert compose(fg, h) == compose(f, table[(g, h)])
