"""Tests for the Bredon cochain complex and its cohomology."""

from __future__ import annotations

import random
from collections.abc import Callable

import pytest

from bredon_obstruction.bredon import (
    BredonComplex,
    coboundary,
    cochain_complex,
    cohomology,
    expand,
    map_cochain,
    oracle_cohomology,
    submodule_oracle,
)
from bredon_obstruction.coefficients import (
    CoefficientMorphism,
    close_system,
    constant_system,
    fixed_point_system,
    permutation_module,
)
from bredon_obstruction.complexes import (
    GCWComplex,
    boundary_matrix,
    fixed_basis,
    fixed_point_complex,
    orbit_space_complex,
    validate,
)
from bredon_obstruction.exceptions import DegreeMismatchError, NotACochainComplexError
from bredon_obstruction.groups import (
    FiniteGroup,
    OrbitMorphism,
    compose,
    subgroup_generated,
    subgroups_of,
)
from bredon_obstruction.loader import Instance
from bredon_obstruction.zmodule import (
    GroupInvariants,
    Homomorphism,
    IntMatrix,
    NoSolution,
    PresentedAbelianGroup,
    block_diagonal,
    homology_at,
    kernel_basis,
    kron,
    solve_many,
)
from factories import (
    SMALL_GROUPS,
    bar_complex,
    cyclic_group,
    random_bredon,
    random_cochain,
    random_complex,
    twisted_permutation_action,
)

Z = PresentedAbelianGroup.free(1)
Z2 = PresentedAbelianGroup.from_invariants([2])

CURATED = {
    "point": ["Z/2"],
    "reflection_circle": ["Z", "0"],
    "antipodal_circle_const": ["Z", "Z"],
    "antipodal_circle_sign": ["0", "Z/2"],
    "rotation_s2": ["Z", "0", "Z"],
    "antipodal_s3_sign": ["0", "Z/2", "0", "Z/2"],
    "s3_triangle": ["Z", "0"],
}


def all_degrees(C: BredonComplex) -> list[str]:
    return [cohomology(C, n).describe() for n in range(C.top + 1)]


@pytest.mark.parametrize("name, expected", sorted(CURATED.items()))
def test_curated_cohomology(
    instance: Callable[[str], Instance], name: str, expected: list[str]
) -> None:
    assert all_degrees(instance(name).bredon) == expected


@pytest.mark.parametrize("name", sorted(CURATED))
def test_curated_cohomology_matches_oracle(
    instance: Callable[[str], Instance], name: str
) -> None:
    C = instance(name).bredon
    for n in range(C.top + 1):
        assert oracle_cohomology(C, n) == cohomology(C, n).invariants


def test_sign_coboundaries_on_three_sphere(instance: Callable[[str], Instance]) -> None:
    inst = instance("antipodal_s3_sign")
    C = inst.bredon
    assert [C.coboundary_matrix(n).to_lists() for n in range(3)] == [[[-2]], [[0]], [[-2]]]
    assert C.coboundary_matrix(3).rows == 0
    assert cohomology(C, 1).ranks == (1, 0)

    constant = BredonComplex(inst.complex, constant_system(inst.category, Z))
    assert [constant.coboundary_matrix(n).to_lists() for n in range(3)] == [[[0]], [[2]], [[0]]]
    assert all_degrees(constant) == ["Z", "0", "Z/2", "Z"]


def test_expand_applies_morphism_matrices(instance: Callable[[str], Instance]) -> None:
    inst = instance("antipodal_circle_sign")
    C, G = inst.bredon, inst.group
    assert expand(C, inst.cochain("generator"), G.trivial_subgroup).to_lists() == [[1, -1]]

    point = instance("point")
    f = point.bredon.cochain(0, {"pt": [1]})
    assert expand(point.bredon, f, point.group.trivial_subgroup).to_lists() == [[0]]
    assert expand(point.bredon, f, point.group.whole).to_lists() == [[1]]


def test_coboundary_of_a_cochain(instance: Callable[[str], Instance]) -> None:
    C = instance("antipodal_circle_sign").bredon
    assert coboundary(C, C.cochain(0, {"p": [1]})).values == {"c": (-2,)}
    assert coboundary(C, C.cochain(1, {"c": [5]})).values == {}


def test_cochain_construction_errors(instance: Callable[[str], Instance]) -> None:
    C = instance("reflection_circle").bredon
    assert C.cochain(0, {"p": [3]}).values == {"p": (3,), "q": (0,)}
    with pytest.raises(KeyError):
        C.cochain(0, {"c": [1]})
    with pytest.raises(ValueError):
        C.cochain(1, {"c": [1, 2]})
    with pytest.raises(DegreeMismatchError):
        C.cochain(0) + C.cochain(1)


def test_flatten_round_trip(rng: random.Random) -> None:
    for _ in range(10):
        C = random_bredon(rng, max_cells=12)
        for n in range(C.top + 1):
            f = random_cochain(rng, C, n)
            assert C.unflatten(n, C.flatten(f)) == f


def test_complex_and_system_must_share_family(instance: Callable[[str], Instance]) -> None:
    circle = instance("reflection_circle")
    other = instance("antipodal_circle_const")
    with pytest.raises(ValueError):
        BredonComplex(circle.complex, other.system)


def test_non_functorial_system_breaks_square_zero(instance: Callable[[str], Instance]) -> None:
    inst = instance("antipodal_s3_sign")
    trivial = inst.group.trivial_subgroup
    flip = inst.category.morphism(trivial, trivial, inst.group.element("s"))
    broken = close_system(inst.category, {trivial: Z}, {flip: IntMatrix.from_rows([[2]])})
    with pytest.raises(NotACochainComplexError) as exc_info:
        cochain_complex(inst.complex, broken)
    assert exc_info.value.degree == 0
    assert exc_info.value.witness == "e0"


# --- Comparisons with ordinary cohomology ---


def test_constant_coefficients_give_orbit_space_cohomology(rng: random.Random) -> None:
    for _ in range(15):
        B = random_complex(rng, max_cells=15)
        orbit_space = orbit_space_complex(B)
        for A in (Z, Z2):
            C = BredonComplex(B, constant_system(B.category, A))
            for n in range(B.dimension + 1):
                assert cohomology(C, n).invariants == orbit_space.cohomology(n, A)


def test_coinduced_coefficients_give_ordinary_cohomology(rng: random.Random) -> None:
    for _ in range(10):
        B = random_complex(rng, groups=("C2", "C3", "V4", "S3"), max_cells=12)
        G = B.group
        underlying = fixed_point_complex(B, G.trivial_subgroup)
        for modulus, A in ((0, Z), (2, Z2)):
            M = fixed_point_system(B.category, permutation_module(G.trivial_subgroup), modulus)
            C = BredonComplex(B, M)
            for n in range(B.dimension + 1):
                assert cohomology(C, n).invariants == underlying.cohomology(n, A)


def test_reflection_circle_with_coinduced_coefficients(instance: Callable[[str], Instance]) -> None:
    inst = instance("reflection_circle")
    G = inst.group
    M = fixed_point_system(inst.category, permutation_module(G.trivial_subgroup))
    assert all_degrees(BredonComplex(inst.complex, M)) == ["Z", "Z"]


# --- Free actions against equivariant cochains ---


def elementary(r: int, i: int, j: int, c: int) -> IntMatrix:
    return IntMatrix.from_rows(
        [[1 if a == b else c if (a, b) == (i, j) else 0 for b in range(r)] for a in range(r)]
    )


def random_lattice(rng: random.Random, G: FiniteGroup) -> dict[int, IntMatrix]:
    """Two twisted permutation lattices, summed and conjugated by a unimodular matrix."""
    parts = []
    for bound in (3, 2):
        K = rng.choice([K for K in subgroups_of(G.whole) if G.order // K.order <= bound])
        parts.append(twisted_permutation_action(K, twist=rng.random() < 0.5))
    r = sum(p[G.identity].rows for p in parts)
    change, inverse = IntMatrix.identity(r), IntMatrix.identity(r)
    for _ in range(3):
        i, j = rng.sample(range(r), 2)
        c = rng.choice([-2, -1, 1, 2])
        change = change @ elementary(r, i, j, c)
        inverse = elementary(r, i, j, -c) @ inverse
    return {g: change @ block_diagonal(*(p[g] for p in parts)) @ inverse for g in G.elements}


def generating_set(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    while (H := subgroup_generated(G, gens)).order < G.order:
        gens.append(next(g for g in G.elements if g not in H))
    return gens


def equivariant_cohomology(B: GCWComplex, action: dict[int, IntMatrix]) -> list[GroupInvariants]:
    """H^n of Hom_ZG(C_*(B), A) cut out of Hom_Z(C_*(B), A) by f(gx) = g·f(x)."""
    G = B.group
    trivial = G.trivial_subgroup
    r = action[G.identity].rows
    top = B.dimension
    lattices = []
    for n in range(top + 1):
        basis = fixed_basis(B, trivial, n)
        rows = []
        for j, (cell, m) in enumerate(basis.basis):
            for g in generating_set(G):
                moved = basis.index(cell, compose(OrbitMorphism(trivial, trivial, g), m))
                for k in range(r):
                    row = [0] * (basis.rank * r)
                    row[moved * r + k] += 1
                    for col in range(r):
                        row[j * r + col] -= action[g].entries[k][col]
                    rows.append(row)
        lattices.append(kernel_basis(IntMatrix.from_rows(rows, cols=basis.rank * r)))

    maps = []
    for n in range(top):
        ambient = kron(boundary_matrix(B, trivial, n + 1).transpose(), IntMatrix.identity(r))
        coordinates = solve_many(lattices[n + 1], (ambient @ lattices[n]).columns())
        assert not any(isinstance(x, NoSolution) for x in coordinates)
        maps.append(IntMatrix.from_columns(coordinates, lattices[n + 1].cols))

    free = [PresentedAbelianGroup.free(K.cols) for K in lattices]
    zero = PresentedAbelianGroup.zero()
    result = []
    for n in range(top + 1):
        before = (
            Homomorphism(free[n - 1], free[n], maps[n - 1])
            if n > 0
            else Homomorphism(zero, free[n], IntMatrix.zeros(free[n].gens, 0))
        )
        after = (
            Homomorphism(free[n], free[n + 1], maps[n])
            if n < top
            else Homomorphism(free[n], zero, IntMatrix.zeros(0, free[n].gens))
        )
        result.append(homology_at(before, after))
    return result


def test_bar_complex_gives_group_cohomology() -> None:
    B = bar_complex(cyclic_group(3), 3)
    C = BredonComplex(B, constant_system(B.category, Z))
    assert [cohomology(C, n).describe() for n in range(3)] == ["Z", "0", "Z/3"]

    G = cyclic_group(2)
    B = bar_complex(G, 3)
    sign = fixed_point_system(B.category, twisted_permutation_action(G.whole, twist=True))
    assert [cohomology(BredonComplex(B, sign), n).describe() for n in range(3)] == [
        "0",
        "Z/2",
        "0",
    ]


@pytest.mark.parametrize("name, top", [("C2", 3), ("C3", 2), ("V4", 1), ("S3", 1)])
def test_free_bar_complexes_match_equivariant_cochains(
    rng: random.Random, name: str, top: int
) -> None:
    G = SMALL_GROUPS[name]()
    B = bar_complex(G, top)
    assert validate(B).ok
    for _ in range(3):
        action = random_lattice(rng, G)
        C = BredonComplex(B, fixed_point_system(B.category, action))
        assert [cohomology(C, n).invariants for n in range(top + 1)] == equivariant_cohomology(
            B, action
        )


@pytest.mark.parametrize("name", ["antipodal_circle_const", "antipodal_s3_sign"])
def test_curated_free_complexes_match_equivariant_cochains(
    instance: Callable[[str], Instance], rng: random.Random, name: str
) -> None:
    B = instance(name).complex
    for _ in range(3):
        action = random_lattice(rng, B.group)
        C = BredonComplex(B, fixed_point_system(B.category, action))
        expected = equivariant_cohomology(B, action)
        assert [cohomology(C, n).invariants for n in range(B.dimension + 1)] == expected


# --- Oracle and cochain maps ---


def test_expanded_cochains_satisfy_compatibility(rng: random.Random) -> None:
    for _ in range(10):
        C = random_bredon(rng, groups=("C2", "C3", "V4"), max_cells=8)
        for n in range(C.top + 1):
            oracle = submodule_oracle(C, n)
            family = oracle.family_vector(C, random_cochain(rng, C, n))
            image = oracle.constraints.matrix.apply(family)
            assert oracle.constraints.target.is_zero_element(image)


def test_cochain_maps_commute_with_coboundary(rng: random.Random) -> None:
    for _ in range(10):
        B = random_complex(rng, max_cells=12)
        source = BredonComplex(B, constant_system(B.category, Z))
        target = BredonComplex(B, constant_system(B.category, Z2))
        components = {H: IntMatrix.identity(1) for H in B.category.objects}
        T = CoefficientMorphism(source.M, target.M, components)
        for n in range(B.dimension):
            f = random_cochain(rng, source, n)
            lhs = map_cochain(source, target, T, coboundary(source, f))
            rhs = coboundary(target, map_cochain(source, target, T, f))
            assert target.is_zero(lhs - rhs)


def test_scalar_cochain_map_on_twisted_system(rng: random.Random) -> None:
    for _ in range(10):
        C = random_bredon(rng, max_cells=12)
        components = {
            H: IntMatrix.identity(C.M.at[H].gens).scaled(3) for H in C.M.category.objects
        }
        T = CoefficientMorphism(C.M, C.M, components)
        for n in range(C.top):
            f = random_cochain(rng, C, n)
            lhs = map_cochain(C, C, T, coboundary(C, f))
            assert C.is_zero(lhs - coboundary(C, f).scaled(3))
