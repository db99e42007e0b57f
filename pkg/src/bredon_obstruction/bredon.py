"""Bredon cochain complex and cohomology.

Cochains are stored reduced: one vector in M(G/G_σ) per orbit cell σ, so
C^n = ⊕_σ M(G/G_σ) in canonical cell order. The compatible family
(f(H))_{H} is recovered by :func:`expand`. :func:`submodule_oracle` builds the
family space literally, as a solution space of compatibility constraints, and
serves as an independent cross-check.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from .coefficients import CoefficientMorphism, CoefficientSystem
from .complexes import (
    GCWComplex,
    OrbitCell,
    boundary_matrix,
    fixed_basis,
    translation_chain_map,
)
from .exceptions import DegreeMismatchError, NotACochainComplexError
from .groups import Subgroup
from .utils import BuildOnceCache
from .zmodule import (
    GroupInvariants,
    Homomorphism,
    IntMatrix,
    PresentedAbelianGroup,
    Subquotient,
    Vector,
    block_diagonal,
    check_composite,
    direct_sum,
    homology_at,
    kron,
    rank,
    subquotient,
    vstack,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BredonCochain:
    """A reduced cochain: degree plus one coefficient vector per orbit cell."""

    degree: int
    values: Mapping[str, Vector] = field(hash=False)

    def __getitem__(self, cell_id: str) -> Vector:
        return self.values[cell_id]

    def _combine(self, other: BredonCochain, op: Callable[[int, int], int]) -> BredonCochain:
        if other.degree != self.degree:
            raise DegreeMismatchError(
                "cochains of different degree", expected=self.degree, actual=other.degree
            )
        return BredonCochain(
            self.degree,
            {
                cid: tuple(op(a, b) for a, b in zip(v, other.values[cid]))
                for cid, v in self.values.items()
            },
        )

    def __add__(self, other: BredonCochain) -> BredonCochain:
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: BredonCochain) -> BredonCochain:
        return self._combine(other, lambda a, b: a - b)

    def scaled(self, factor: int) -> BredonCochain:
        return BredonCochain(
            self.degree, {cid: tuple(factor * x for x in v) for cid, v in self.values.items()}
        )


@dataclass(frozen=True)
class CohomologyReport:
    degree: int
    invariants: GroupInvariants
    ranks: tuple[int, int]
    """Ranks of δ^{n-1} and δ^n as integer matrices."""
    elapsed: float = field(default=0.0, compare=False)

    def describe(self) -> str:
        return self.invariants.describe()


class BredonComplex:
    """C^*_H(B; M) with cochain groups and coboundary matrices built once per degree."""

    def __init__(self, B: GCWComplex, M: CoefficientSystem):
        if B.family != M.family:
            raise ValueError("complex and coefficient system use different families")
        self.B = B
        self.M = M
        self._cache = BuildOnceCache()

    def cached(self, key: tuple[Any, ...], build: Callable[[], Any]) -> Any:
        return self._cache.get(key, build)

    @property
    def top(self) -> int:
        return self.B.dimension

    def cells(self, n: int) -> tuple[OrbitCell, ...]:
        return self.B.cells_in_dim(n)

    def value_group(self, cell: OrbitCell) -> PresentedAbelianGroup:
        return self.M.at[cell.isotropy]

    def group(self, n: int) -> PresentedAbelianGroup:
        """C^n = ⊕ M(G/G_σ) over the orbit n-cells."""
        return self.cached(
            ("group", n), lambda: direct_sum(*(self.value_group(c) for c in self.cells(n)))
        )

    def offsets(self, n: int) -> dict[str, int]:
        """First generator index of each cell's block in C^n."""

        def build() -> dict[str, int]:
            result, start = {}, 0
            for c in self.cells(n):
                result[c.id] = start
                start += self.value_group(c).gens
            return result

        return self.cached(("offsets", n), build)

    def owner(self, n: int, generator: int) -> str:
        """Cell whose block in C^n contains ``generator``."""
        offsets = self.offsets(n)
        for c in self.cells(n):
            if offsets[c.id] <= generator < offsets[c.id] + self.value_group(c).gens:
                return c.id
        raise IndexError(f"generator {generator} out of range in degree {n}")

    def coboundary_matrix(self, n: int) -> IntMatrix:
        """δ^n: C^n -> C^{n+1}; block (σ, τ) is Σ n_i·M(â_i) over terms n_i·a_i·τ of ∂σ."""

        def build() -> IntMatrix:
            source, target = self.group(n), self.group(n + 1)
            entries = [[0] * source.gens for _ in range(target.gens)]
            if n < 0:
                return IntMatrix.from_rows(entries, cols=source.gens)
            cols, rows = self.offsets(n), self.offsets(n + 1)
            for sigma in self.cells(n + 1):
                for term in self.B.boundary[sigma.id]:
                    block = self.M.matrix(term.translate)
                    r0, c0 = rows[sigma.id], cols[term.face.id]
                    for i, row in enumerate(block.entries):
                        for j, x in enumerate(row):
                            entries[r0 + i][c0 + j] += term.coeff * x
            return IntMatrix.from_rows(entries, cols=source.gens)

        return self.cached(("delta", n), build)

    def homomorphism(self, n: int) -> Homomorphism:
        return Homomorphism(self.group(n), self.group(n + 1), self.coboundary_matrix(n))

    def check(self) -> None:
        """Verify δ^{n+1}∘δ^n = 0 modulo relations in every degree.

        Raises:
            NotACochainComplexError: with the degree and the witness cell.
        """
        for n in range(0, self.top - 1):
            j = check_composite(self.homomorphism(n), self.homomorphism(n + 1))
            if j is not None:
                cell = self.owner(n, j)
                raise NotACochainComplexError(
                    f"δ^{n + 1}∘δ^{n} is nonzero on the block of {cell}", degree=n, witness=cell
                )

    # --- cochains ---

    def zero(self, n: int) -> BredonCochain:
        return BredonCochain(n, {c.id: (0,) * self.value_group(c).gens for c in self.cells(n)})

    def cochain(self, n: int, values: Mapping[str, Sequence[int]] | None = None) -> BredonCochain:
        """Cochain of degree n; omitted cells are zero.

        Raises:
            KeyError: for a cell id that is not an orbit n-cell.
            ValueError: for a vector of the wrong length.
        """
        values = dict(values or {})
        ids = {c.id for c in self.cells(n)}
        for cid in values:
            if cid not in ids:
                raise KeyError(f"{cid!r} is not an orbit cell of dimension {n}")
        result = {}
        for c in self.cells(n):
            gens = self.value_group(c).gens
            vector = tuple(int(x) for x in values.get(c.id, (0,) * gens))
            if len(vector) != gens:
                raise ValueError(f"value at {c.id} has length {len(vector)}, expected {gens}")
            result[c.id] = vector
        return BredonCochain(n, result)

    def flatten(self, f: BredonCochain) -> Vector:
        """Coordinates of f over the generators of C^n."""
        return tuple(x for c in self.cells(f.degree) for x in f.values[c.id])

    def unflatten(self, n: int, vector: Sequence[int]) -> BredonCochain:
        offsets = self.offsets(n)
        return BredonCochain(
            n,
            {
                c.id: tuple(
                    vector[offsets[c.id] : offsets[c.id] + self.value_group(c).gens]
                )
                for c in self.cells(n)
            },
        )

    def is_zero(self, f: BredonCochain) -> bool:
        """True when every component vanishes in its group M(G/G_σ)."""
        return all(
            self.value_group(c).is_zero_element(f.values[c.id]) for c in self.cells(f.degree)
        )

    def cohomology_subquotient(self, n: int) -> Subquotient:
        return self.cached(
            ("subquotient", n), lambda: subquotient(self.homomorphism(n - 1), self.homomorphism(n))
        )


def cochain_complex(B: GCWComplex, M: CoefficientSystem) -> BredonComplex:
    """Assemble C^*_H(B; M) and verify δ∘δ = 0."""
    complex_ = BredonComplex(B, M)
    complex_.check()
    return complex_


def expand(C: BredonComplex, f: BredonCochain, H: Subgroup) -> IntMatrix:
    """f(H): C_n(B^H) -> M(G/H), column (τ, â) equal to M(â)·f[τ]."""
    basis = fixed_basis(C.B, H, f.degree)
    columns = [C.M.matrix(m).apply(f.values[tau.id]) for tau, m in basis.basis]
    return IntMatrix.from_columns(columns, C.M.at[H].gens)


def coboundary(C: BredonComplex, f: BredonCochain) -> BredonCochain:
    return C.unflatten(f.degree + 1, C.coboundary_matrix(f.degree).apply(C.flatten(f)))


def cohomology(C: BredonComplex, n: int) -> CohomologyReport:
    """H^n as invariants of ker δ^n / im δ^{n-1}, with δ^{-1} = 0."""
    start = time.perf_counter()
    invariants = C.cohomology_subquotient(n).invariants()
    ranks = (rank(C.coboundary_matrix(n - 1)), rank(C.coboundary_matrix(n)))
    elapsed = time.perf_counter() - start
    logger.debug("H^%d = %s in %.3fs", n, invariants, elapsed)
    return CohomologyReport(degree=n, invariants=invariants, ranks=ranks, elapsed=elapsed)


def map_cochain(
    source: BredonComplex, target: BredonComplex, T: CoefficientMorphism, f: BredonCochain
) -> BredonCochain:
    """Image of f under the cochain map induced by T: (Tf)[σ] = T_{G_σ}·f[σ]."""
    if source.B is not target.B:
        raise ValueError("cochain map needs both complexes over the same G-CW-complex")
    return BredonCochain(
        f.degree,
        {
            c.id: T.components[c.isotropy].apply(f.values[c.id])
            for c in source.cells(f.degree)
        },
    )


# ==================== LITERAL SUBMODULE ORACLE ====================


@dataclass(frozen=True)
class SubmoduleOracle:
    """The compatible families in degree n, built from the constraints directly.

    ``ambient`` is ⊕_H Hom(C_n(B^H), M(G/H)); a family f sits in it with f(H)
    stored basis element by basis element. ``embedding`` has one column per
    generator of ``group``.
    """

    degree: int
    ambient: PresentedAbelianGroup
    constraints: Homomorphism
    group: PresentedAbelianGroup
    embedding: IntMatrix
    layout: Mapping[Subgroup, int]

    def family_vector(self, C: BredonComplex, f: BredonCochain) -> Vector:
        """The expanded family of a reduced cochain, in ambient coordinates."""
        vector = []
        for H in C.M.category.objects:
            fH = expand(C, f, H)
            for column in fH.columns():
                vector.extend(column)
        return tuple(vector)


def _ambient(C: BredonComplex, n: int) -> tuple[PresentedAbelianGroup, dict[Subgroup, int]]:
    layout, start, parts = {}, 0, []
    for H in C.M.category.objects:
        layout[H] = start
        part = C.M.at[H].power(fixed_basis(C.B, H, n).rank)
        parts.append(part)
        start += part.gens
    return direct_sum(*parts), layout


def submodule_oracle(C: BredonComplex, n: int) -> SubmoduleOracle:
    """Solution space of f(H)∘ā_* = M(â)∘f(K) over every morphism â: G/H -> G/K."""

    def build() -> SubmoduleOracle:
        ambient, layout = _ambient(C, n)
        blocks: list[IntMatrix] = []
        targets: list[PresentedAbelianGroup] = []
        for f in C.M.category.all_morphisms():
            H, K = f.source, f.target
            gH, gK = C.M.at[H].gens, C.M.at[K].gens
            T = translation_chain_map(C.B, H, K, f, n)
            Mf = C.M.matrix(f)
            rows = [[0] * ambient.gens for _ in range(T.cols * gH)]
            for j in range(T.cols):
                for k in range(gH):
                    row = rows[j * gH + k]
                    for i in range(T.rows):
                        if T.entries[i][j]:
                            row[layout[H] + i * gH + k] += T.entries[i][j]
                    for m in range(gK):
                        if Mf.entries[k][m]:
                            row[layout[K] + j * gK + m] -= Mf.entries[k][m]
            blocks.append(IntMatrix.from_rows(rows, cols=ambient.gens))
            targets.append(C.M.at[H].power(T.cols))
        target = direct_sum(*targets)
        phi = Homomorphism(ambient, target, vstack(ambient.gens, *blocks))
        solutions = Subquotient(ambient, IntMatrix.zeros(ambient.gens, 0), phi.matrix, target)
        return SubmoduleOracle(
            degree=n,
            ambient=ambient,
            constraints=phi,
            group=PresentedAbelianGroup(solutions.rank, solutions.presentation),
            embedding=solutions.basis,
            layout=layout,
        )

    return C.cached(("oracle", n), build)


def _literal_coboundary(C: BredonComplex, n: int) -> IntMatrix:
    """(δf)(H) = f(H)∘∂_H on the ambient spaces of degrees n and n+1."""
    blocks = []
    for H in C.M.category.objects:
        gens = C.M.at[H].gens
        boundary = boundary_matrix(C.B, H, n + 1)
        blocks.append(kron(boundary.transpose(), IntMatrix.identity(gens)))
    return block_diagonal(*blocks)


def oracle_cohomology(C: BredonComplex, n: int) -> GroupInvariants:
    """H^n computed on the literal compatibility complex."""
    current = submodule_oracle(C, n)
    after = submodule_oracle(C, n + 1)
    outgoing = vstack(
        current.ambient.gens, current.constraints.matrix, _literal_coboundary(C, n)
    )
    outgoing_target = direct_sum(current.constraints.target, after.ambient)
    if n > 0:
        before = submodule_oracle(C, n - 1)
        incoming = Homomorphism(
            before.group, current.ambient, _literal_coboundary(C, n - 1) @ before.embedding
        )
    else:
        incoming = Homomorphism(
            PresentedAbelianGroup.zero(), current.ambient, IntMatrix.zeros(current.ambient.gens, 0)
        )
    return homology_at(incoming, Homomorphism(current.ambient, outgoing_target, outgoing))
