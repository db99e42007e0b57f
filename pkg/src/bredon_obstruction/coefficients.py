"""Coefficient systems over the orbit category.

A coefficient system M assigns a presented abelian group M(G/H) to every H in
the family and, contravariantly, a matrix M(â): M(G/K) -> M(G/H) to every
orbit morphism â: G/H -> G/K. Matrices act on generator coordinates, rows
indexed by the generators of M(G/H) and columns by those of M(G/K).
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

from .exceptions import (
    FunctorialityViolationError,
    IncompleteSystemError,
    RelationViolationError,
)
from .groups import FiniteGroup, OrbitCategory, OrbitMorphism, Subgroup, SubgroupFamily
from .models.report import ValidationReport, Violation
from .zmodule import (
    Homomorphism,
    IntMatrix,
    PresentedAbelianGroup,
    Subquotient,
    vstack,
)

logger = logging.getLogger(__name__)


def _first_nonzero_column(group: PresentedAbelianGroup, difference: IntMatrix) -> int | None:
    for j, column in enumerate(difference.columns()):
        if not group.is_zero_element(column):
            return j
    return None


class CoefficientSystem:
    """A contravariant functor from the orbit category to presented abelian groups."""

    def __init__(
        self,
        category: OrbitCategory,
        at: Mapping[Subgroup, PresentedAbelianGroup],
        act: Mapping[OrbitMorphism, IntMatrix],
    ):
        self.category = category
        self.at = dict(at)
        self.act = dict(act)

    @property
    def family(self) -> SubgroupFamily:
        return self.category.family

    def value(self, H: Subgroup) -> PresentedAbelianGroup:
        self.family.require(H)
        return self.at[H]

    def matrix(self, f: OrbitMorphism) -> IntMatrix:
        try:
            return self.act[f]
        except KeyError:
            raise IncompleteSystemError(
                f"no matrix for {f.describe()}", morphism=f.describe()
            ) from None

    def homomorphism(self, f: OrbitMorphism) -> Homomorphism:
        """M(f) as a homomorphism M(G/K) -> M(G/H)."""
        return Homomorphism(self.at[f.target], self.at[f.source], self.matrix(f))


def constant_system(category: OrbitCategory, A: PresentedAbelianGroup) -> CoefficientSystem:
    """M(G/H) = A for every H, every morphism acting as the identity."""
    one = IntMatrix.identity(A.gens)
    return CoefficientSystem(
        category,
        {H: A for H in category.objects},
        {f: one for f in category.all_morphisms()},
    )


def _close_under_composition(
    category: OrbitCategory, act: dict[OrbitMorphism, IntMatrix]
) -> dict[OrbitMorphism, IntMatrix]:
    """Fill in M(g∘f) = M(f)·M(g) from known matrices until nothing changes."""
    pairs = category.composable_pairs()
    table = category.composition_table
    changed = True
    while changed:
        changed = False
        for f, g in pairs:
            h = table[(f, g)]
            if h not in act and f in act and g in act:
                act[h] = act[f] @ act[g]
                changed = True
    return act


def close_system(
    category: OrbitCategory,
    groups: Mapping[Subgroup, PresentedAbelianGroup],
    morphism_matrices: Mapping[OrbitMorphism, IntMatrix],
) -> CoefficientSystem:
    """Close generator morphisms under composition, without validation.

    Identities default to identity matrices; every other morphism must be given
    or be a composite of given ones.

    Raises:
        IncompleteSystemError: a group or a morphism matrix is undetermined.
    """
    for H in category.objects:
        if H not in groups:
            raise IncompleteSystemError(f"no group given for G/{H.label}", morphism=H.label)

    act: dict[OrbitMorphism, IntMatrix] = {}
    for f, matrix in morphism_matrices.items():
        category.family.require(f.source)
        category.family.require(f.target)
        Homomorphism(groups[f.target], groups[f.source], matrix)
        act[f] = matrix
    for H in category.objects:
        act.setdefault(category.identity(H), IntMatrix.identity(groups[H].gens))
    act = _close_under_composition(category, act)

    for f in category.all_morphisms():
        if f not in act:
            raise IncompleteSystemError(
                f"{f.describe()} is neither given nor a composite of given morphisms",
                morphism=f.describe(),
            )

    logger.debug("coefficient system closed to %d morphisms", len(act))
    return CoefficientSystem(category, groups, act)


def require_functorial(system: CoefficientSystem) -> None:
    """Raise on the first violation found by :func:`validate_functoriality`."""
    report = validate_functoriality(system)
    if not report.ok:
        first = report.violations[0]
        if first.kind == "RelationViolation":
            raise RelationViolationError(first.message, morphism=first.witness or "")
        if first.kind == "IdentityViolation":
            f, j = _identity_failures(system)[0]
            raise FunctorialityViolationError(
                first.message, pair=(f.describe(), f.describe()), witness=j
            )
        f, g, j = _failures(system)[0]
        raise FunctorialityViolationError(
            first.message, pair=(f.describe(), g.describe()), witness=j
        )


def system_from_data(
    category: OrbitCategory,
    groups: Mapping[Subgroup, PresentedAbelianGroup],
    morphism_matrices: Mapping[OrbitMorphism, IntMatrix],
) -> CoefficientSystem:
    """Build and validate a system from generator morphisms.

    Raises:
        IncompleteSystemError: a group or a morphism matrix is undetermined.
        RelationViolationError: a matrix does not preserve relations.
        FunctorialityViolationError: M(g∘f) != M(f)·M(g) on some generator.
    """
    system = close_system(category, groups, morphism_matrices)
    require_functorial(system)
    return system


def _identity_failures(system: CoefficientSystem) -> list[tuple[OrbitMorphism, int]]:
    failures = []
    for H in system.category.objects:
        f = system.category.identity(H)
        one = IntMatrix.identity(system.at[H].gens)
        j = _first_nonzero_column(system.at[H], system.matrix(f) - one)
        if j is not None:
            failures.append((f, j))
    return failures


def _failures(system: CoefficientSystem) -> list[tuple[OrbitMorphism, OrbitMorphism, int]]:
    """Composable pairs (f, g) with M(g∘f) != M(f)·M(g), and a witness generator."""
    failures = []
    table = system.category.composition_table
    for (f, g), h in table.items():
        lhs = system.matrix(h)
        rhs = system.matrix(f) @ system.matrix(g)
        j = _first_nonzero_column(system.at[f.source], lhs - rhs)
        if j is not None:
            failures.append((f, g, j))
    return failures


def validate_functoriality(system: CoefficientSystem) -> ValidationReport:
    """Exhaustive check of relation preservation, identities and composition."""
    violations: list[Violation] = []
    for f in system.category.all_morphisms():
        if f not in system.act:
            violations.append(
                Violation(kind="MissingMorphism", message="no matrix", witness=f.describe())
            )
            continue
        broken = system.homomorphism(f).first_broken_relation()
        if broken is not None:
            violations.append(
                Violation(
                    kind="RelationViolation",
                    message=f"relation {broken} of G/{f.target.label} is not preserved",
                    witness=f.describe(),
                )
            )
    if violations:
        return ValidationReport(subject="coefficients", violations=violations)

    for f, j in _identity_failures(system):
        violations.append(
            Violation(
                kind="IdentityViolation",
                message=f"identity acts nontrivially on generator {j}",
                witness=f.describe(),
            )
        )
    if violations:
        return ValidationReport(subject="coefficients", violations=violations)

    for f, g, j in _failures(system):
        violations.append(
            Violation(
                kind="FunctorialityViolation",
                message=f"M(g∘f) != M(f)·M(g) on generator {j}",
                witness=f"{f.describe()} ; {g.describe()}",
            )
        )
    return ValidationReport(subject="coefficients", violations=violations)


# ==================== FIXED-POINT SYSTEMS ====================


def permutation_module(K: Subgroup) -> dict[int, IntMatrix]:
    """Left action of G on Z[G/K], cosets ordered by canonical representative."""
    G = K.parent
    reps = sorted({min(G.mul[a][k] for k in K.elements) for a in G.elements})
    position = {a: i for i, rep in enumerate(reps) for a in (G.mul[rep][k] for k in K.elements)}
    action = {}
    for g in G.elements:
        entries = [[0] * len(reps) for _ in reps]
        for j, rep in enumerate(reps):
            entries[position[G.mul[g][rep]]][j] = 1
        action[g] = IntMatrix.from_rows(entries)
    return action


def check_action(group: FiniteGroup, action: Mapping[int, IntMatrix]) -> None:
    """Raise ValueError unless ``action`` is a left action by integer matrices."""
    for a in group.elements:
        for b in group.elements:
            if action[a] @ action[b] != action[group.mul[a][b]]:
                raise ValueError(
                    f"matrices of {group.names[a]} and {group.names[b]} do not multiply "
                    "like the group elements"
                )


def fixed_point_system(
    category: OrbitCategory, action: Mapping[int, IntMatrix], modulus: int = 0
) -> CoefficientSystem:
    """The system G/H ↦ A^H of a G-lattice A, optionally reduced modulo ``modulus``.

    M(â) sends a K-fixed vector x to a·x, which is fixed by H when H^a ≤ K.
    """
    G = category.group
    check_action(G, action)
    r = action[G.identity].rows
    ambient = (
        PresentedAbelianGroup(r, IntMatrix.identity(r).scaled(modulus))
        if modulus
        else PresentedAbelianGroup.free(r)
    )
    one = IntMatrix.identity(r)

    fixed: dict[Subgroup, Subquotient] = {}
    for H in category.objects:
        constraints = vstack(r, *(action[h] - one for h in H.elements))
        fixed[H] = Subquotient(
            ambient, IntMatrix.zeros(r, 0), constraints, ambient.power(H.order)
        )

    groups = {H: PresentedAbelianGroup(sq.rank, sq.presentation) for H, sq in fixed.items()}
    act = {}
    for f in category.all_morphisms():
        source, target = fixed[f.source], fixed[f.target]
        images = (action[f.coset_rep] @ target.basis).columns()
        coordinates = [source.coordinates(v) for v in images]
        act[f] = IntMatrix.from_columns(coordinates, source.rank)
    return CoefficientSystem(category, groups, act)


# ==================== MORPHISMS OF SYSTEMS ====================


@dataclass(frozen=True)
class CoefficientMorphism:
    """A natural transformation T: M -> N, one matrix T_H: M(G/H) -> N(G/H) per H."""

    source: CoefficientSystem
    target: CoefficientSystem
    components: Mapping[Subgroup, IntMatrix]


def validate_naturality(T: CoefficientMorphism) -> ValidationReport:
    """Report every morphism â: G/H -> G/K with N(â)·T_K != T_H·M(â)."""
    M, N = T.source, T.target
    violations: list[Violation] = []
    for H in M.category.objects:
        broken = Homomorphism(M.at[H], N.at[H], T.components[H]).first_broken_relation()
        if broken is not None:
            violations.append(
                Violation(
                    kind="RelationViolation",
                    message=f"relation {broken} is not preserved",
                    witness=f"T at G/{H.label}",
                )
            )
    for f in M.category.all_morphisms():
        lhs = N.matrix(f) @ T.components[f.target]
        rhs = T.components[f.source] @ M.matrix(f)
        j = _first_nonzero_column(N.at[f.source], lhs - rhs)
        if j is not None:
            violations.append(
                Violation(
                    kind="NaturalityViolation",
                    message=f"square does not commute on generator {j}",
                    witness=f.describe(),
                )
            )
    return ValidationReport(subject="coefficient morphism", violations=violations)


# ==================== FIBER DECLARATIONS ====================


@dataclass(frozen=True)
class CompatibleFamilyDecl:
    """Declared fibers F_H and H-homotopy equivalences. Names only; never checked."""

    family: SubgroupFamily
    labels: Mapping[Subgroup, str] = field(default_factory=dict)
    equivalences: Mapping[tuple[Subgroup, Subgroup], str] = field(default_factory=dict)

    def missing(self, category: OrbitCategory) -> list[Violation]:
        found = []
        for H in self.family:
            if H not in self.labels:
                label = Violation(
                    kind="MissingFiberLabel", message="no fiber declared", witness=H.label
                )
                found.append(label)
        for H in self.family:
            for K in self.family:
                if H != K and category.hom(H, K) and (H, K) not in self.equivalences:
                    found.append(
                        Violation(
                            kind="MissingEquivalence",
                            message=f"no equivalence declared from F_{K.label} to F_{H.label}",
                            witness=f"{H.label} -> {K.label}",
                        )
                    )
        return found
