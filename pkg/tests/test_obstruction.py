"""Tests for extension verdicts and the difference-cochain identity."""

from __future__ import annotations

import json
import random
from collections.abc import Callable

import pytest

from bredon_obstruction.bredon import coboundary, cohomology
from bredon_obstruction.constants import DEGREE_HYPOTHESIS_WARNING, THEOREM_HYPOTHESES
from bredon_obstruction.exceptions import DegreeMismatchError
from bredon_obstruction.loader import Instance, parse_instance
from bredon_obstruction.obstruction import (
    DifferenceCochain,
    ObstructionInput,
    Verdict,
    VerdictKind,
    apply_modification,
    check_cocycle,
    check_cocycle_expanded,
    decide,
    difference_identity,
    hypothesis_banners,
    obstruction_class,
)
from factories import INSTANCES, random_bredon, random_cochain


def verdict_for(inst: Instance, name: str) -> Verdict:
    return decide(ObstructionInput(inst.bredon, inst.cochain(name), inst.fibration_degrees[name]))


@pytest.fixture
def s3_sign(instance: Callable[[str], Instance]) -> Instance:
    return instance("antipodal_s3_sign")


# --- Verdicts ---


def test_generator_is_blocked(s3_sign: Instance) -> None:
    verdict = verdict_for(s3_sign, "alpha")
    assert verdict.kind is VerdictKind.BLOCKED
    assert verdict.class_coordinates == ((2, 1),)
    assert verdict.certificate is None


def test_even_cocycle_extends_after_modification(s3_sign: Instance) -> None:
    verdict = verdict_for(s3_sign, "alpha_even")
    assert verdict.kind is VerdictKind.EXTENDS_AFTER_MODIFICATION
    assert verdict.certificate is not None
    assert verdict.certificate.values == {"e2": (-1,)}
    C = s3_sign.bredon
    assert C.is_zero(coboundary(C, verdict.certificate) - s3_sign.cochain("alpha_even"))


def test_zero_cocycle_extends_as_is(
    s3_sign: Instance, instance: Callable[[str], Instance]
) -> None:
    assert verdict_for(s3_sign, "alpha_zero").kind is VerdictKind.EXTENDS_AS_IS
    assert verdict_for(instance("reflection_circle"), "alpha").kind is VerdictKind.EXTENDS_AS_IS


def test_non_cocycle_names_witness_cell(s3_sign: Instance) -> None:
    verdict = verdict_for(s3_sign, "beta")
    assert verdict.kind is VerdictKind.NOT_A_COCYCLE
    assert verdict.witness == "e3"
    inp = ObstructionInput(s3_sign.bredon, s3_sign.cochain("beta"))
    check = check_cocycle(inp)
    assert check.coboundary.values == {"e3": (-2,)}
    with pytest.raises(ValueError):
        obstruction_class(inp)


def test_expanded_check_agrees(s3_sign: Instance) -> None:
    for name in ("alpha", "alpha_even", "alpha_zero", "beta"):
        inp = ObstructionInput(s3_sign.bredon, s3_sign.cochain(name))
        assert check_cocycle_expanded(inp).is_cocycle == check_cocycle(inp).is_cocycle
    expanded = check_cocycle_expanded(ObstructionInput(s3_sign.bredon, s3_sign.cochain("beta")))
    assert expanded.witness is not None and expanded.witness.startswith("e3@")


def test_circle_verdicts_in_low_degree(instance: Callable[[str], Instance]) -> None:
    inst = instance("antipodal_circle_sign")
    blocked = verdict_for(inst, "generator")
    assert blocked.kind is VerdictKind.BLOCKED
    assert blocked.class_coordinates == ((2, 1),)
    assert DEGREE_HYPOTHESIS_WARNING.format(n=0) in blocked.warnings

    even = verdict_for(inst, "even")
    assert even.certificate is not None
    assert even.certificate.values == {"p": (-1,)}


def test_blocked_generator_has_no_small_certificate(instance: Callable[[str], Instance]) -> None:
    inst = instance("antipodal_circle_sign")
    C = inst.bredon
    alpha = inst.cochain("generator")
    for x in range(-20, 21):
        assert not C.is_zero(coboundary(C, C.cochain(0, {"p": [x]})) - alpha)


def test_hypothesis_banners() -> None:
    assert hypothesis_banners(2)[: len(THEOREM_HYPOTHESES)] == THEOREM_HYPOTHESES
    assert DEGREE_HYPOTHESIS_WARNING.format(n=2) not in hypothesis_banners(2)
    assert hypothesis_banners(1)[-1] == DEGREE_HYPOTHESIS_WARNING.format(n=1)


def test_input_degree_checks(s3_sign: Instance) -> None:
    with pytest.raises(DegreeMismatchError) as exc_info:
        ObstructionInput(s3_sign.bredon, s3_sign.bredon.cochain(0))
    assert (exc_info.value.expected, exc_info.value.actual) == (1, 0)
    with pytest.raises(DegreeMismatchError) as exc_info:
        ObstructionInput(s3_sign.bredon, s3_sign.cochain("d_even"), fibration_degree=2)
    assert (exc_info.value.expected, exc_info.value.actual) == (3, 2)
    with pytest.raises(DegreeMismatchError):
        ObstructionInput(s3_sign.bredon, s3_sign.cochain("alpha"), fibration_degree=1)
    assert ObstructionInput(s3_sign.bredon, s3_sign.cochain("alpha")).n == 2


def test_certificate_only_with_modification(s3_sign: Instance) -> None:
    with pytest.raises(ValueError):
        Verdict(VerdictKind.BLOCKED, certificate=s3_sign.cochain("d_even"))
    with pytest.raises(ValueError):
        Verdict(VerdictKind.EXTENDS_AFTER_MODIFICATION)


def test_coboundaries_always_extend(rng: random.Random) -> None:
    for _ in range(40):
        C = random_bredon(rng, max_cells=12)
        if C.top < 1:
            continue
        n = rng.randrange(C.top)
        alpha = coboundary(C, random_cochain(rng, C, n))
        verdict = decide(ObstructionInput(C, alpha))
        if C.is_zero(alpha):
            assert verdict.kind is VerdictKind.EXTENDS_AS_IS
        else:
            assert verdict.kind is VerdictKind.EXTENDS_AFTER_MODIFICATION
            assert C.is_zero(coboundary(C, verdict.certificate) - alpha)


@pytest.mark.parametrize(
    "name", ["antipodal_circle_sign", "antipodal_s3_sign", "reflection_circle"]
)
def test_verdicts_ignore_cell_order(name: str) -> None:
    text = (INSTANCES / f"{name}.json").read_text(encoding="utf-8")
    data = json.loads(text)
    data["complex"]["cells"].reverse()
    original = parse_instance(text.encode())
    reordered = parse_instance(json.dumps(data).encode())

    for n in range(original.bredon.top + 1):
        reordered_group = cohomology(reordered.bredon, n).invariants
        assert reordered_group == cohomology(original.bredon, n).invariants
    for cochain, alpha in sorted(original.cochains.items()):
        if alpha.degree < 1:
            continue
        a, b = verdict_for(original, cochain), verdict_for(reordered, cochain)
        assert (a.kind, a.witness, a.class_coordinates) == (b.kind, b.witness, b.class_coordinates)
        if a.certificate is not None:
            assert dict(a.certificate.values) == dict(b.certificate.values)


# --- Difference cochains ---


def test_difference_identity_examples(s3_sign: Instance) -> None:
    C = s3_sign.bredon
    even, zero, alpha = (s3_sign.cochain(k) for k in ("alpha_even", "alpha_zero", "alpha"))
    assert difference_identity(C, even, zero, s3_sign.cochain("d_even")).holds
    assert difference_identity(C, alpha, alpha, s3_sign.cochain("d_zero")).holds

    failed = difference_identity(C, even, zero, s3_sign.cochain("d_bad"))
    assert not failed.holds
    assert failed.residual.values == {"e3": (-2,)}


def test_unsigned_difference_cochain(s3_sign: Instance) -> None:
    C = s3_sign.bredon
    even, zero = s3_sign.cochain("alpha_even"), s3_sign.cochain("alpha_zero")
    unsigned = DifferenceCochain(C.cochain(2, {"e2": [1]}), sign_included=False)
    assert unsigned.signed.values == {"e2": (-1,)}
    assert difference_identity(C, even, zero, unsigned).holds
    assert not difference_identity(C, even, zero, DifferenceCochain(unsigned.d)).holds


def test_difference_identity_degree_checks(s3_sign: Instance) -> None:
    C = s3_sign.bredon
    alpha, beta = s3_sign.cochain("alpha"), s3_sign.cochain("beta")
    with pytest.raises(DegreeMismatchError):
        difference_identity(C, alpha, beta, s3_sign.cochain("d_zero"))
    with pytest.raises(DegreeMismatchError):
        difference_identity(C, alpha, alpha, alpha)


def test_modification_by_certificate_kills_obstruction(s3_sign: Instance) -> None:
    C = s3_sign.bredon
    even = s3_sign.cochain("alpha_even")
    certificate = verdict_for(s3_sign, "alpha_even").certificate
    assert certificate is not None
    assert C.is_zero(apply_modification(C, even, certificate))
    with pytest.raises(DegreeMismatchError):
        apply_modification(C, even, even)


def test_modification_is_additive(rng: random.Random) -> None:
    for _ in range(20):
        C = random_bredon(rng, max_cells=12)
        if C.top < 1:
            continue
        n = rng.randrange(C.top)
        alpha = random_cochain(rng, C, n + 1)
        d1, d2 = random_cochain(rng, C, n), random_cochain(rng, C, n)
        once = apply_modification(C, alpha, d1 + d2)
        twice = apply_modification(C, apply_modification(C, alpha, d1), d2)
        assert C.is_zero(once - twice)
        assert difference_identity(C, alpha, once, d1 + d2).holds
