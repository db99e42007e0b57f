"""Randomized checks over coset-poset complexes and fixed-point coefficient systems."""

from __future__ import annotations

import itertools
import random

from bredon_obstruction.bredon import (
    BredonCochain,
    BredonComplex,
    coboundary,
    cohomology,
    oracle_cohomology,
)
from bredon_obstruction.coefficients import constant_system, fixed_point_system
from bredon_obstruction.groups import subgroups_of
from bredon_obstruction.obstruction import (
    ObstructionInput,
    VerdictKind,
    decide,
    difference_identity,
    obstruction_class,
)
from bredon_obstruction.zmodule import PresentedAbelianGroup, hstack, kernel_basis
from factories import random_bredon, random_cochain, random_complex, twisted_permutation_action


def random_cocycle(rng: random.Random, C: BredonComplex, n: int) -> BredonCochain:
    """A random integer combination of generators of ker δ^n modulo relations."""
    target = C.group(n + 1)
    kernel = kernel_basis(hstack(target.gens, C.coboundary_matrix(n), target.relations))
    sources = C.group(n).gens
    vector = [0] * sources
    for column in kernel.columns():
        k = rng.randint(-3, 3)
        for i in range(sources):
            vector[i] += k * column[i]
    return C.unflatten(n, vector)


def unit(C: BredonComplex, n: int, i: int) -> BredonCochain:
    vector = [0] * C.group(n).gens
    vector[i] = 1
    return C.unflatten(n, vector)


def test_coboundary_squares_to_zero(rng: random.Random) -> None:
    for _ in range(100):
        C = random_bredon(rng)
        C.check()
        for n in range(C.top - 1):
            f = random_cochain(rng, C, n)
            assert C.is_zero(coboundary(C, coboundary(C, f)))


def test_oracle_agrees_on_small_instances(rng: random.Random) -> None:
    for _ in range(20):
        C = random_bredon(rng, groups=("C2", "C3", "C4", "V4"), max_cells=8)
        for n in range(C.top + 1):
            assert oracle_cohomology(C, n) == cohomology(C, n).invariants


def test_oracle_agrees_on_order_eight_groups(rng: random.Random) -> None:
    for _ in range(4):
        C = random_bredon(rng, groups=("D4", "Q8"), max_cells=4)
        for n in range(C.top + 1):
            assert oracle_cohomology(C, n) == cohomology(C, n).invariants


def modular_bredon(rng: random.Random) -> tuple[BredonComplex, int]:
    """A random Bredon complex whose cochain groups are killed by the returned modulus."""
    B = random_complex(rng, groups=("C2", "C3"), max_cells=10)
    m = rng.choice([2, 3])
    if rng.random() < 0.5:
        M = constant_system(B.category, PresentedAbelianGroup.from_invariants([m]))
    else:
        K = rng.choice(subgroups_of(B.group.whole))
        action = twisted_permutation_action(K, twist=rng.random() < 0.5)
        M = fixed_point_system(B.category, action, modulus=m)
    return BredonComplex(B, M), m


def test_verdicts_match_cohomology_class(rng: random.Random) -> None:
    for _ in range(40):
        C = random_bredon(rng, max_cells=14)
        if C.top < 1:
            continue
        n = rng.randint(1, C.top)
        alpha = random_cocycle(rng, C, n)
        inp = ObstructionInput(C, alpha)
        verdict = decide(inp)
        assert verdict.kind is not VerdictKind.NOT_A_COCYCLE
        nonzero_class = any(value for _, value in obstruction_class(inp))
        assert (verdict.kind is VerdictKind.BLOCKED) == nonzero_class
        if verdict.kind is VerdictKind.EXTENDS_AFTER_MODIFICATION:
            assert C.is_zero(coboundary(C, verdict.certificate) - alpha)
        if verdict.kind is VerdictKind.BLOCKED:
            assert verdict.class_coordinates == obstruction_class(inp)


def test_blocked_exactly_when_no_cochain_bounds(rng: random.Random) -> None:
    checked = 0
    while checked < 40:
        C, m = modular_bredon(rng)
        if C.top < 1:
            continue
        n = rng.randint(1, C.top)
        sources = C.group(n - 1).gens
        if sources > 5:
            continue
        alpha = random_cocycle(rng, C, n)
        verdict = decide(ObstructionInput(C, alpha))

        delta, target, goal = C.coboundary_matrix(n - 1), C.group(n), C.flatten(alpha)
        is_coboundary = any(
            target.equal(delta.apply(d), goal)
            for d in itertools.product(range(m), repeat=sources)
        )
        assert (verdict.kind is VerdictKind.BLOCKED) == (not is_coboundary)
        checked += 1


def test_certificates_round_trip(rng: random.Random) -> None:
    for _ in range(40):
        C = random_bredon(rng, max_cells=14)
        if C.top < 1:
            continue
        n = rng.randrange(C.top)
        d = random_cochain(rng, C, n)
        alpha = coboundary(C, d)
        verdict = decide(ObstructionInput(C, alpha))
        assert verdict.kind in (VerdictKind.EXTENDS_AS_IS, VerdictKind.EXTENDS_AFTER_MODIFICATION)
        if verdict.certificate is not None:
            assert difference_identity(C, alpha, C.zero(n + 1), verdict.certificate).holds
            assert difference_identity(C, alpha, C.zero(n + 1), d).holds


def test_difference_identity_detects_perturbations(rng: random.Random) -> None:
    pairs = 0
    while pairs < 100:
        C = random_bredon(rng, max_cells=14)
        if C.top < 1:
            continue
        n = rng.randrange(C.top)
        if C.group(n).gens == 0:
            continue
        alpha1 = random_cochain(rng, C, n + 1)
        d = random_cochain(rng, C, n)
        alpha2 = alpha1 - coboundary(C, d)
        assert difference_identity(C, alpha1, alpha2, d).holds

        e = unit(C, n, rng.randrange(C.group(n).gens))
        moved = difference_identity(C, alpha1, alpha2, d + e)
        assert moved.holds == C.is_zero(coboundary(C, e))
        pairs += 1
