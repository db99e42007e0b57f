"""Extension verdicts for obstruction cocycles and the difference-cochain algebra.

Given an obstruction cocycle α of degree n+1 over C^*_H(B; π), the fibration
over the n-skeleton extends over the (n+1)-skeleton as it is iff α = 0, and
extends after changing it over the n-skeleton (keeping the (n-1)-skeleton)
iff [α] = 0 in H^{n+1}. Both statements hold under hypotheses on the spaces
involved that cannot be read off chain data, so every verdict carries them as
warnings.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .bredon import BredonCochain, BredonComplex, coboundary, expand
from .complexes import fixed_basis
from .constants import DEGREE_HYPOTHESIS_WARNING, FINITENESS_NOTE, THEOREM_HYPOTHESES
from .exceptions import DegreeMismatchError
from .zmodule import NoSolution, hstack, solve

logger = logging.getLogger(__name__)


class VerdictKind(str, Enum):
    """Outcome of the decision pipeline, as printed in reports."""

    EXTENDS_AS_IS = "ExtendsAsIs"
    EXTENDS_AFTER_MODIFICATION = "ExtendsAfterModification"
    BLOCKED = "Blocked"
    NOT_A_COCYCLE = "NotACocycle"


def hypothesis_banners(n: int) -> tuple[str, ...]:
    """Declared, unverified hypotheses attached to every verdict in degree n."""
    banners = [*THEOREM_HYPOTHESES, FINITENESS_NOTE]
    if n < 2:
        banners.append(DEGREE_HYPOTHESIS_WARNING.format(n=n))
    return tuple(banners)


@dataclass(frozen=True)
class ObstructionInput:
    """An obstruction cocycle α of degree n+1 over a Bredon complex.

    ``fibration_degree`` is n; it defaults to ``alpha.degree - 1``.
    """

    bredon: BredonComplex
    alpha: BredonCochain
    fibration_degree: int | None = None

    def __post_init__(self) -> None:
        if self.alpha.degree < 1:
            raise DegreeMismatchError(
                "an obstruction cochain has degree at least 1",
                expected=1,
                actual=self.alpha.degree,
            )
        if self.fibration_degree is not None and self.fibration_degree != self.alpha.degree - 1:
            raise DegreeMismatchError(
                f"fibration degree {self.fibration_degree} needs a cochain of degree "
                f"{self.fibration_degree + 1}",
                expected=self.fibration_degree + 1,
                actual=self.alpha.degree,
            )

    @property
    def n(self) -> int:
        return self.alpha.degree - 1

    @property
    def warnings(self) -> tuple[str, ...]:
        return hypothesis_banners(self.n)


@dataclass(frozen=True)
class CocycleCheck:
    is_cocycle: bool
    coboundary: BredonCochain
    witness: str | None = None


@dataclass(frozen=True)
class Verdict:
    """Decision with its evidence; ``certificate`` d satisfies δd = α."""

    kind: VerdictKind
    certificate: BredonCochain | None = None
    class_coordinates: tuple[tuple[int, int], ...] = ()
    witness: str | None = None
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        has_certificate = self.certificate is not None
        if has_certificate != (self.kind is VerdictKind.EXTENDS_AFTER_MODIFICATION):
            raise ValueError("a certificate comes exactly with ExtendsAfterModification")


@dataclass(frozen=True)
class DifferenceCochain:
    """A difference cochain d of degree n.

    The geometric difference cochain carries a factor (-1)^{n+1} on its
    restriction maps. ``sign_included=False`` marks values given without it;
    the factor is then applied before checking δd = α₁ - α₂.
    """

    d: BredonCochain
    sign_included: bool = True

    @property
    def signed(self) -> BredonCochain:
        if self.sign_included:
            return self.d
        return self.d.scaled((-1) ** (self.d.degree + 1))


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    residual: BredonCochain


# ==================== COCYCLE CHECKS ====================


def check_cocycle(inp: ObstructionInput) -> CocycleCheck:
    """δα = 0 modulo relations, with the first failing (n+2)-cell as witness."""
    C = inp.bredon
    delta = coboundary(C, inp.alpha)
    for cell in C.cells(delta.degree):
        if not C.value_group(cell).is_zero_element(delta[cell.id]):
            return CocycleCheck(False, delta, witness=cell.id)
    return CocycleCheck(True, delta)


def check_cocycle_expanded(inp: ObstructionInput) -> CocycleCheck:
    """δα = 0 checked on the expanded family: (δα)(H) vanishes for every H."""
    C = inp.bredon
    delta = coboundary(C, inp.alpha)
    for H in C.M.category.objects:
        group = C.M.at[H]
        values = expand(C, delta, H)
        labels = fixed_basis(C.B, H, delta.degree).labels()
        for label, column in zip(labels, values.columns()):
            if not group.is_zero_element(column):
                return CocycleCheck(False, delta, witness=f"{label} at G/{H.label}")
    return CocycleCheck(True, delta)


# ==================== VERDICTS ====================


def strict_verdict(inp: ObstructionInput) -> Verdict | None:
    """ExtendsAsIs when α vanishes in every component group; otherwise None."""
    if inp.bredon.is_zero(inp.alpha):
        return Verdict(VerdictKind.EXTENDS_AS_IS, warnings=inp.warnings)
    return None


def _solve_coboundary(inp: ObstructionInput) -> tuple[BredonCochain | None, NoSolution | None]:
    C, n = inp.bredon, inp.n
    source, target = C.group(n), C.group(n + 1)
    system = hstack(target.gens, C.coboundary_matrix(n), target.relations)
    x = solve(system, C.flatten(inp.alpha))
    if isinstance(x, NoSolution):
        return None, x
    return C.unflatten(n, x[: source.gens]), None


def modification_verdict(inp: ObstructionInput) -> Verdict:
    """Solve δd = α; ExtendsAfterModification with d, or Blocked with the class of α."""
    C = inp.bredon
    d, failure = _solve_coboundary(inp)
    if d is not None:
        if not C.is_zero(coboundary(C, d) - inp.alpha):
            raise ArithmeticError("certificate does not satisfy δd = α")
        return Verdict(VerdictKind.EXTENDS_AFTER_MODIFICATION, certificate=d, warnings=inp.warnings)
    logger.debug("δd = α unsolvable: %s", failure)
    return Verdict(
        VerdictKind.BLOCKED, class_coordinates=obstruction_class(inp), warnings=inp.warnings
    )


def obstruction_class(inp: ObstructionInput) -> tuple[tuple[int, int], ...]:
    """Coordinates of [α] in H^{n+1} as (order, value) per nontrivial cyclic summand.

    Raises:
        ValueError: if α is not a cocycle.
    """
    C = inp.bredon
    return C.cohomology_subquotient(inp.alpha.degree).classify(C.flatten(inp.alpha))


def decide(inp: ObstructionInput) -> Verdict:
    """NotACocycle, then the strict verdict, then the modification verdict."""
    check = check_cocycle(inp)
    if not check.is_cocycle:
        verdict = Verdict(VerdictKind.NOT_A_COCYCLE, witness=check.witness, warnings=inp.warnings)
    else:
        verdict = strict_verdict(inp) or modification_verdict(inp)
    logger.info("verdict for degree %d cochain: %s", inp.alpha.degree, verdict.kind.value)
    return verdict


# ==================== DIFFERENCE COCHAINS ====================


def difference_identity(
    C: BredonComplex,
    alpha1: BredonCochain,
    alpha2: BredonCochain,
    d: BredonCochain | DifferenceCochain,
) -> IdentityCheck:
    """Check δd = α₁ - α₂ modulo relations; the residual is δd - (α₁ - α₂)."""
    if isinstance(d, DifferenceCochain):
        d = d.signed
    if alpha1.degree != alpha2.degree:
        raise DegreeMismatchError(
            "obstruction cochains of different degree",
            expected=alpha1.degree,
            actual=alpha2.degree,
        )
    if d.degree != alpha1.degree - 1:
        raise DegreeMismatchError(
            f"difference cochain must have degree {alpha1.degree - 1}",
            expected=alpha1.degree - 1,
            actual=d.degree,
        )
    residual = coboundary(C, d) - (alpha1 - alpha2)
    return IdentityCheck(holds=C.is_zero(residual), residual=residual)


def apply_modification(C: BredonComplex, alpha: BredonCochain, d: BredonCochain) -> BredonCochain:
    """The obstruction cocycle α - δd of the fibration modified by d."""
    if d.degree != alpha.degree - 1:
        raise DegreeMismatchError(
            f"modification must have degree {alpha.degree - 1}",
            expected=alpha.degree - 1,
            actual=d.degree,
        )
    return alpha - coboundary(C, d)
