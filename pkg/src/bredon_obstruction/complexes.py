"""G-CW-complexes as orbit cells with equivariant boundary data.

A cell σ with isotropy G_σ stands for the equivariant cell G ×_{G_σ} Dⁿ. Its
boundary is ∂σ = Σ n_i a_i τ_i, each translate stored as the orbit morphism
â_i: G/G_σ -> G/G_{τ_i}. The cells of the fixed set B^H are the pairs
(τ, â: G/H -> G/G_τ); everything else here is derived from that.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Any

from .exceptions import InvalidComplexError, InvalidMorphismError
from .groups import (
    FiniteGroup,
    OrbitCategory,
    OrbitMorphism,
    Subgroup,
    SubgroupFamily,
    close_family,
    compose,
)
from .models.report import ValidationReport, Violation
from .utils import BuildOnceCache
from .zmodule import (
    GroupInvariants,
    Homomorphism,
    IntMatrix,
    PresentedAbelianGroup,
    homology_at,
    kron,
)


@dataclass(frozen=True)
class OrbitCell:
    id: str
    dim: int
    isotropy: Subgroup


@dataclass(frozen=True)
class BoundaryTerm:
    """One summand n·a·τ of ∂σ."""

    coeff: int
    translate: OrbitMorphism
    face: OrbitCell


@dataclass(frozen=True)
class FixedBasis:
    """Ordered basis of C_n(B^H): pairs (τ, â) with H^a ≤ G_τ."""

    subgroup: Subgroup
    dim: int
    basis: tuple[tuple[OrbitCell, OrbitMorphism], ...]

    @cached_property
    def _positions(self) -> dict[tuple[str, OrbitMorphism], int]:
        return {(cell.id, m): i for i, (cell, m) in enumerate(self.basis)}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, cell: OrbitCell, morphism: OrbitMorphism) -> int:
        return self._positions[(cell.id, morphism)]

    def labels(self) -> list[str]:
        names = self.subgroup.parent.names
        return [f"{cell.id}@{names[m.coset_rep]}" for cell, m in self.basis]


@dataclass(frozen=True)
class ChainComplex:
    """An ordinary chain complex of free abelian groups.

    ``boundaries[n]`` is the matrix of C_n -> C_{n-1}; ``boundaries[0]`` has
    no rows.
    """

    cells: tuple[tuple[str, ...], ...]
    boundaries: tuple[IntMatrix, ...]

    @property
    def top(self) -> int:
        return len(self.cells) - 1

    def rank(self, n: int) -> int:
        return len(self.cells[n]) if 0 <= n <= self.top else 0

    def boundary(self, n: int) -> IntMatrix:
        if 0 <= n <= self.top:
            return self.boundaries[n]
        return IntMatrix.zeros(self.rank(n - 1), self.rank(n))

    def cochain_group(self, n: int, coefficients: PresentedAbelianGroup) -> PresentedAbelianGroup:
        return coefficients.power(self.rank(n))

    def coboundary(self, n: int, coefficients: PresentedAbelianGroup) -> IntMatrix:
        """δⁿ = ∂_{n+1}ᵀ ⊗ 1 on Hom(C_n, A) = A^{r_n}."""
        return kron(self.boundary(n + 1).transpose(), IntMatrix.identity(coefficients.gens))

    def cohomology(self, n: int, coefficients: PresentedAbelianGroup) -> GroupInvariants:
        """Hⁿ(C; A) for a presented coefficient group A."""
        before = Homomorphism(
            self.cochain_group(n - 1, coefficients),
            self.cochain_group(n, coefficients),
            self.coboundary(n - 1, coefficients),
        )
        after = Homomorphism(
            self.cochain_group(n, coefficients),
            self.cochain_group(n + 1, coefficients),
            self.coboundary(n, coefficients),
        )
        return homology_at(before, after)


class GCWComplex:
    """A finite G-CW-complex given by orbit cells and boundary terms.

    Cells are kept in canonical (dim, id) order regardless of input order.
    Derived bases and matrices are built once and cached.
    """

    def __init__(
        self,
        category: OrbitCategory,
        cells: Iterable[OrbitCell],
        boundary: Mapping[str, Sequence[BoundaryTerm]],
        assertions: Sequence[str] = (),
    ):
        self.category = category
        self.group: FiniteGroup = category.group
        self.family: SubgroupFamily = category.family
        self.cells = tuple(sorted(cells, key=lambda c: (c.dim, c.id)))
        ids = [c.id for c in self.cells]
        if len(set(ids)) != len(ids):
            raise ValueError("cell ids must be unique")
        unknown = set(boundary) - set(ids)
        if unknown:
            raise ValueError(f"boundary given for unknown cells {sorted(unknown)}")
        self.boundary = {c.id: tuple(boundary.get(c.id, ())) for c in self.cells}
        self.assertions = tuple(assertions)
        self._by_id = {c.id: c for c in self.cells}
        self._cache = BuildOnceCache()

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def cells_in_dim(self, n: int) -> tuple[OrbitCell, ...]:
        return tuple(c for c in self.cells if c.dim == n)

    def cell(self, cell_id: str) -> OrbitCell:
        return self._by_id[cell_id]

    def cached(self, key: tuple[Any, ...], build: Callable[[], Any]) -> Any:
        """Build-once cache shared by all derived data of this complex."""
        return self._cache.get(key, build)


def fixed_basis(B: GCWComplex, H: Subgroup, n: int) -> FixedBasis:
    """Basis of C_n(B^H): one generator per (τ, aG_τ) with H^a ≤ G_τ.

    Raises:
        UnknownSubgroupError: if H is not in the family.
    """
    B.family.require(H)

    def build() -> FixedBasis:
        basis = tuple(
            (tau, m) for tau in B.cells_in_dim(n) for m in B.category.hom(H, tau.isotropy)
        )
        return FixedBasis(H, n, basis)

    return B.cached(("basis", H, n), build)


def boundary_matrix(B: GCWComplex, H: Subgroup, n: int) -> IntMatrix:
    """Matrix of ∂: C_n(B^H) -> C_{n-1}(B^H) in FixedBasis order."""

    def build() -> IntMatrix:
        cols = fixed_basis(B, H, n)
        if n == 0:
            return IntMatrix.zeros(0, cols.rank)
        rows = fixed_basis(B, H, n - 1)
        entries = [[0] * cols.rank for _ in range(rows.rank)]
        for j, (sigma, b) in enumerate(cols.basis):
            for term in B.boundary[sigma.id]:
                i = rows.index(term.face, compose(b, term.translate))
                entries[i][j] += term.coeff
        return IntMatrix.from_rows(entries, cols=cols.rank)

    return B.cached(("boundary", H, n), build)


def translation_chain_map(
    B: GCWComplex, H: Subgroup, K: Subgroup, a: OrbitMorphism, n: int
) -> IntMatrix:
    """Matrix of ā_*: C_n(B^K) -> C_n(B^H), x ↦ ax, for â: G/H -> G/K.

    Raises:
        InvalidMorphismError: if â is not a morphism G/H -> G/K.
    """
    if a.source != H or a.target != K or not a.is_valid():
        raise InvalidMorphismError(f"{a.describe()} is not a morphism G/{H.label} -> G/{K.label}")

    def build() -> IntMatrix:
        rows = fixed_basis(B, H, n)
        cols = fixed_basis(B, K, n)
        entries = [[0] * cols.rank for _ in range(rows.rank)]
        for j, (tau, b) in enumerate(cols.basis):
            entries[rows.index(tau, compose(a, b))][j] = 1
        return IntMatrix.from_rows(entries, cols=cols.rank)

    return B.cached(("translation", a, n), build)


def fixed_point_complex(B: GCWComplex, H: Subgroup) -> ChainComplex:
    """Cellular chain complex of the fixed set B^H."""
    top = B.dimension
    cells = tuple(tuple(fixed_basis(B, H, n).labels()) for n in range(top + 1))
    boundaries = tuple(boundary_matrix(B, H, n) for n in range(top + 1))
    return ChainComplex(cells, boundaries)


def orbit_space_complex(B: GCWComplex) -> ChainComplex:
    """Cellular chain complex of B/G: translates collapse onto their orbit cell."""
    top = B.dimension
    cells = tuple(tuple(c.id for c in B.cells_in_dim(n)) for n in range(top + 1))
    boundaries = []
    for n in range(top + 1):
        rows = {cid: i for i, cid in enumerate(cells[n - 1])} if n > 0 else {}
        entries = [[0] * len(cells[n]) for _ in range(len(rows))]
        if n > 0:
            for j, cid in enumerate(cells[n]):
                for term in B.boundary[cid]:
                    entries[rows[term.face.id]][j] += term.coeff
        boundaries.append(IntMatrix.from_rows(entries, cols=len(cells[n])))
    return ChainComplex(cells, tuple(boundaries))


def isotropy_subgroups(B: GCWComplex) -> list[Subgroup]:
    """Iso(B): every conjugate of every isotropy label."""
    found = {c.isotropy.conjugate(a) for c in B.cells for a in B.group.elements}
    return sorted(found, key=lambda s: s.sort_key)


def isotropy_family(B: GCWComplex) -> SubgroupFamily:
    """Smallest admissible family: the closure of the isotropy subgroups."""
    return close_family(B.group, (c.isotropy for c in B.cells))


def validate(B: GCWComplex) -> ValidationReport:
    """Check dimensions, isotropy membership, boundary isotropy and ∂∘∂ = 0."""

    def build() -> ValidationReport:
        violations: list[Violation] = []
        if not B.family.is_closed():
            missing = ", ".join(H.label for H in B.family.missing_members())
            violations.append(
                Violation(
                    kind="FamilyNotClosed",
                    message="family is not closed under conjugation and subgroups",
                    witness=missing,
                )
            )
        for sigma in B.cells:
            if sigma.isotropy not in B.family:
                violations.append(
                    Violation(
                        kind="IsotropyNotInFamily",
                        message=f"isotropy {sigma.isotropy.label} is not in the family",
                        witness=sigma.id,
                    )
                )
            for k, term in enumerate(B.boundary[sigma.id]):
                where = f"{sigma.id}.boundary[{k}]"
                if term.face.dim != sigma.dim - 1:
                    violations.append(
                        Violation(
                            kind="DimensionMismatch",
                            message=f"face {term.face.id} has dimension {term.face.dim}, "
                            f"expected {sigma.dim - 1}",
                            witness=where,
                        )
                    )
                if term.translate.source != sigma.isotropy or term.translate.target != (
                    term.face.isotropy
                ):
                    violations.append(
                        Violation(
                            kind="TranslateMismatch",
                            message="translate does not run G/G_σ -> G/G_τ",
                            witness=where,
                        )
                    )
                elif not term.translate.is_valid():
                    violations.append(
                        Violation(
                            kind="IsotropyViolation",
                            message=f"(G_σ)^a is not contained in G_τ for "
                            f"a = {B.group.names[term.translate.coset_rep]}",
                            witness=where,
                        )
                    )
        if not violations:
            violations.extend(_boundary_square_violations(B))
        return ValidationReport(subject="complex", violations=violations)

    return B.cached(("validate",), build)


def _boundary_square_violations(B: GCWComplex) -> list[Violation]:
    trivial = B.group.trivial_subgroup
    found = []
    for n in range(2, B.dimension + 1):
        product = boundary_matrix(B, trivial, n - 1) @ boundary_matrix(B, trivial, n)
        basis = fixed_basis(B, trivial, n).basis
        seen: set[str] = set()
        for j, column in enumerate(product.columns()):
            cell = basis[j][0]
            if any(column) and cell.id not in seen:
                seen.add(cell.id)
                found.append(
                    Violation(
                        kind="BoundarySquareNonzero",
                        message=f"∂∂{cell.id} != 0",
                        witness=cell.id,
                    )
                )
    return found


def require_valid(B: GCWComplex) -> None:
    """Raise InvalidComplexError unless validate(B) is clean."""
    report = validate(B)
    if not report.ok:
        raise InvalidComplexError(
            f"complex has {len(report.violations)} violation(s), first: {report.violations[0]}",
            report.violations,
        )
