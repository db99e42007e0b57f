"""Exact linear algebra over the integers.

Smith normal form with transforms, integer linear systems, kernels and images
of integer matrices, and homology of finitely presented abelian groups.
Everything here works on Python ints, so entries never overflow.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from sympy import factorint

from .constants import VERIFY_ENV_VAR
from .exceptions import NotAComplexError, RelationViolationError

VERIFY_DECOMPOSITIONS = os.environ.get(VERIFY_ENV_VAR, "") == "1"
"""Re-verify every Smith decomposition (the test suite switches this on)."""

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix with arbitrary-precision entries."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not form a {self.rows}x{self.cols} matrix")

    # --- constructors ---

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> IntMatrix:
        """Build from a list of rows; ``cols`` is required when there are no rows."""
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not entries:
                raise ValueError("cols must be given for a matrix without rows")
            cols = len(entries[0])
        return cls(len(entries), cols, entries)

    @classmethod
    def from_columns(cls, columns: Iterable[Iterable[int]], rows: int) -> IntMatrix:
        cols = [tuple(int(x) for x in c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise ValueError(f"every column must have {rows} entries")
        return cls(rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    # --- arithmetic ---

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        columns = other.transpose().entries
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in columns)
                for row in self.entries
            ),
        )

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._check_same_shape(other)
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def __neg__(self) -> IntMatrix:
        return self.scaled(-1)

    def scaled(self, factor: int) -> IntMatrix:
        return IntMatrix(
            self.rows, self.cols, tuple(tuple(factor * a for a in r) for r in self.entries)
        )

    def apply(self, vector: Sequence[int]) -> Vector:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise ValueError(f"vector of length {len(vector)} for {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.entries)

    def transpose(self) -> IntMatrix:
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def select_rows(self, indices: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(indices), self.cols, tuple(self.entries[i] for i in indices))

    def select_columns(self, indices: Sequence[int]) -> IntMatrix:
        return IntMatrix(
            self.rows, len(indices), tuple(tuple(r[j] for j in indices) for r in self.entries)
        )

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.entries for a in row)

    def determinant(self) -> int:
        """Fraction-free (Bareiss) determinant of a square matrix."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign, previous = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
            previous = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def _check_same_shape(self, other: IntMatrix) -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )


def hstack(rows: int, *blocks: IntMatrix) -> IntMatrix:
    """Concatenate matrices with ``rows`` rows side by side."""
    if any(b.rows != rows for b in blocks):
        raise ValueError(f"every block must have {rows} rows")
    cols = sum(b.cols for b in blocks)
    return IntMatrix(
        rows, cols, tuple(tuple(x for b in blocks for x in b.entries[i]) for i in range(rows))
    )


def vstack(cols: int, *blocks: IntMatrix) -> IntMatrix:
    """Stack matrices with ``cols`` columns on top of each other."""
    if any(b.cols != cols for b in blocks):
        raise ValueError(f"every block must have {cols} columns")
    entries = tuple(row for b in blocks for row in b.entries)
    return IntMatrix(len(entries), cols, entries)


def block_diagonal(*blocks: IntMatrix) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    entries: list[tuple[int, ...]] = []
    offset = 0
    for b in blocks:
        for r in b.entries:
            entries.append((0,) * offset + r + (0,) * (cols - offset - b.cols))
        offset += b.cols
    return IntMatrix(rows, cols, tuple(entries))


def kron(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Kronecker product; index (i·b.rows + k, j·b.cols + l) holds a[i][j]·b[k][l]."""
    return IntMatrix(
        a.rows * b.rows,
        a.cols * b.cols,
        tuple(
            tuple(x * y for x in a.entries[i] for y in b.entries[k])
            for i in range(a.rows)
            for k in range(b.rows)
        ),
    )


# ==================== SMITH NORMAL FORM ====================


@dataclass(frozen=True)
class SmithDecomposition:
    """U·A·V = D with U, V unimodular and D diagonal, d1 | d2 | ... >= 0."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> Vector:
        return tuple(self.D.entries[i][i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def divisors(self) -> Vector:
        """Nonzero diagonal entries in divisibility order."""
        return tuple(d for d in self.diagonal if d != 0)

    def failures(self, a: IntMatrix) -> list[str]:
        """Every way this decomposition fails to be a Smith decomposition of ``a``."""
        problems = []
        if self.U @ a @ self.V != self.D:
            problems.append("U·A·V != D")
        if self.U @ self.U_inv != IntMatrix.identity(self.U.rows):
            problems.append("U is not unimodular")
        if self.V @ self.V_inv != IntMatrix.identity(self.V.rows):
            problems.append("V is not unimodular")
        for i, row in enumerate(self.D.entries):
            if any(x != 0 for j, x in enumerate(row) if j != i):
                problems.append(f"D has an off-diagonal entry in row {i}")
                break
        diagonal = self.diagonal
        if any(d < 0 for d in diagonal):
            problems.append("D has a negative diagonal entry")
        for i in range(len(diagonal) - 1):
            d, e = diagonal[i], diagonal[i + 1]
            if (d == 0 and e != 0) or (d != 0 and e % d != 0):
                problems.append(f"divisibility chain broken at {i}")
                break
        return problems


def _eye(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith(a: IntMatrix, *, verify: bool = False) -> SmithDecomposition:
    """Smith normal form with unimodular transforms and their inverses.

    Pivots are the smallest nonzero entry by magnitude in the active block,
    ties broken by lowest row, then lowest column, so the result depends only
    on ``a``.
    """
    m, n = a.rows, a.cols
    d = [list(r) for r in a.entries]
    u, u_inv, v, v_inv = _eye(m), _eye(m), _eye(n), _eye(n)

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for row in u_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def add_row(target: int, source: int, c: int) -> None:
        # row_target += c * row_source
        d[target] = [x + c * y for x, y in zip(d[target], d[source])]
        u[target] = [x + c * y for x, y in zip(u[target], u[source])]
        for row in u_inv:
            row[source] -= c * row[target]

    def add_col(target: int, source: int, c: int) -> None:
        # col_target += c * col_source
        for row in d:
            row[target] += c * row[source]
        for row in v:
            row[target] += c * row[source]
        v_inv[source] = [x - c * y for x, y in zip(v_inv[source], v_inv[target])]

    def negate_row(i: int) -> None:
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for row in u_inv:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)

        while True:
            p = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // p
                    if q:
                        add_row(i, t, -q)
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // p
                    if q:
                        add_col(j, t, -q)

            rest = None
            for j in range(t + 1, n):
                if d[t][j] and (rest is None or abs(d[t][j]) < rest[0]):
                    rest = (abs(d[t][j]), t, j)
            for i in range(t + 1, m):
                if d[i][t] and (rest is None or abs(d[i][t]) < rest[0]):
                    rest = (abs(d[i][t]), i, t)
            if rest is not None:
                _, i, j = rest
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue

            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if d[i][j] % p != 0
                ),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break

        if d[t][t] < 0:
            negate_row(t)
        t += 1

    result = SmithDecomposition(
        U=IntMatrix.from_rows(u, cols=m),
        D=IntMatrix.from_rows(d, cols=n),
        V=IntMatrix.from_rows(v, cols=n),
        U_inv=IntMatrix.from_rows(u_inv, cols=m),
        V_inv=IntMatrix.from_rows(v_inv, cols=n),
    )
    if verify or VERIFY_DECOMPOSITIONS:
        problems = result.failures(a)
        if problems:
            raise ArithmeticError(
                "Smith decomposition failed verification: " + "; ".join(problems)
            )
    return result


def rank(a: IntMatrix) -> int:
    return smith(a).rank


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel of ``a``."""
    dec = smith(a)
    return dec.V.select_columns(range(dec.rank, a.cols))


def image_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a basis of the lattice spanned by the columns of ``a``."""
    dec = smith(a)
    columns = [
        tuple(x * dec.D.entries[i][i] for x in dec.U_inv.column(i)) for i in range(dec.rank)
    ]
    return IntMatrix.from_columns(columns, a.rows)


@dataclass(frozen=True)
class NoSolution:
    """Certificate that A·x = b has no integer solution.

    In the transformed system D·y = U·b, coordinate ``coordinate`` holds
    ``value``, which ``divisor`` does not divide (divisor 0: the row is past
    the rank and the value is nonzero).
    """

    coordinate: int
    value: int
    divisor: int


def solve(
    a: IntMatrix, b: Sequence[int], decomposition: SmithDecomposition | None = None
) -> Vector | NoSolution:
    """Integer solution of ``a·x = b``, or a NoSolution certificate."""
    if len(b) != a.rows:
        raise ValueError(f"right-hand side of length {len(b)} for {a.rows} rows")
    dec = decomposition or smith(a)
    c = dec.U.apply(b)
    y = [0] * a.cols
    diagonal = dec.diagonal
    for i, ci in enumerate(c):
        di = diagonal[i] if i < len(diagonal) else 0
        if di == 0:
            if ci != 0:
                return NoSolution(coordinate=i, value=ci, divisor=0)
        elif ci % di != 0:
            return NoSolution(coordinate=i, value=ci, divisor=di)
        else:
            y[i] = ci // di
    return dec.V.apply(y)


def solve_many(a: IntMatrix, rhs: Iterable[Sequence[int]]) -> list[Vector | NoSolution]:
    """Solve against several right-hand sides with a single decomposition."""
    dec = smith(a)
    return [solve(a, b, dec) for b in rhs]


# ==================== PRESENTED ABELIAN GROUPS ====================


@dataclass(frozen=True)
class GroupInvariants:
    """Isomorphism invariants of a finitely generated abelian group."""

    free_rank: int
    torsion: tuple[int, ...] = ()
    """Invariant factors greater than one, in divisibility order."""

    @classmethod
    def from_divisors(cls, free_rank: int, divisors: Iterable[int]) -> GroupInvariants:
        torsion = tuple(sorted(abs(d) for d in divisors if abs(d) > 1))
        return cls(free_rank=free_rank, torsion=torsion)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def primary_parts(self) -> tuple[int, ...]:
        """Prime-power orders of the cyclic summands of the torsion subgroup."""
        parts = []
        for d in self.torsion:
            parts.extend(p**e for p, e in factorint(d).items())
        return tuple(sorted(parts))

    def describe_primary(self) -> str:
        """``describe`` with the torsion split into prime powers, e.g. ``Z/2 + Z/3`` for ``Z/6``."""
        return GroupInvariants(self.free_rank, self.primary_parts()).describe()

    def describe(self) -> str:
        """``Z^2 + Z/2 + Z/6`` style rendering; ``0`` for the trivial group."""
        terms = []
        if self.free_rank == 1:
            terms.append("Z")
        elif self.free_rank > 1:
            terms.append(f"Z^{self.free_rank}")
        terms.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True)
class PresentedAbelianGroup:
    """The group Z^gens modulo the column span of ``relations``."""

    gens: int
    relations: IntMatrix

    def __post_init__(self) -> None:
        if self.relations.rows != self.gens:
            raise ValueError(
                f"relations have {self.relations.rows} rows for {self.gens} generators"
            )

    @classmethod
    def free(cls, rank: int) -> PresentedAbelianGroup:
        return cls(rank, IntMatrix.zeros(rank, 0))

    @classmethod
    def zero(cls) -> PresentedAbelianGroup:
        return cls.free(0)

    @classmethod
    def from_invariants(cls, orders: Sequence[int]) -> PresentedAbelianGroup:
        """Direct sum of cyclic groups Z/d (d = 0 gives Z), one generator each."""
        columns = [
            tuple(d if j == i else 0 for j in range(len(orders)))
            for i, d in enumerate(orders)
            if d != 0
        ]
        return cls(len(orders), IntMatrix.from_columns(columns, len(orders)))

    @classmethod
    def from_relators(cls, gens: int, relators: Iterable[Sequence[int]]) -> PresentedAbelianGroup:
        return cls(gens, IntMatrix.from_columns(relators, gens))

    @cached_property
    def _relations_smith(self) -> SmithDecomposition:
        return smith(self.relations)

    def is_zero_element(self, vector: Sequence[int]) -> bool:
        return not isinstance(solve(self.relations, vector, self._relations_smith), NoSolution)

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.is_zero_element(tuple(a - b for a, b in zip(u, v)))

    def invariants(self) -> GroupInvariants:
        dec = self._relations_smith
        return GroupInvariants.from_divisors(self.gens - dec.rank, dec.divisors)

    def power(self, r: int) -> PresentedAbelianGroup:
        """Direct sum of ``r`` copies; generator (i, j) sits at index i·gens + j."""
        return PresentedAbelianGroup(
            self.gens * r, kron(IntMatrix.identity(r), self.relations)
        )

    def describe(self) -> str:
        return self.invariants().describe()


def direct_sum(*groups: PresentedAbelianGroup) -> PresentedAbelianGroup:
    if not groups:
        return PresentedAbelianGroup.zero()
    return PresentedAbelianGroup(
        sum(g.gens for g in groups), block_diagonal(*(g.relations for g in groups))
    )


@dataclass(frozen=True)
class Homomorphism:
    """A homomorphism between presented groups, given on generators."""

    source: PresentedAbelianGroup
    target: PresentedAbelianGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if (self.matrix.rows, self.matrix.cols) != (self.target.gens, self.source.gens):
            raise ValueError(
                f"matrix is {self.matrix.rows}x{self.matrix.cols}, expected "
                f"{self.target.gens}x{self.source.gens}"
            )

    def first_broken_relation(self) -> int | None:
        """Index of a relator the matrix does not send into the target relations."""
        images = self.matrix @ self.source.relations
        for j, column in enumerate(images.columns()):
            if not self.target.is_zero_element(column):
                return j
        return None


class Subquotient:
    """The group ker(g) / (im(f) + relations) on free covers.

    ``basis`` holds a lattice basis of the cycles {y : g·y ∈ relations of the
    target}; ``presentation`` expresses im(f) and the middle relations in that
    basis. Its Smith form yields the invariants and class coordinates.
    """

    def __init__(
        self,
        middle: PresentedAbelianGroup,
        incoming: IntMatrix,
        outgoing: IntMatrix,
        target: PresentedAbelianGroup,
    ):
        y = middle.gens
        stacked = hstack(target.gens, outgoing, target.relations)
        cycles = kernel_basis(stacked).select_rows(range(y))
        self.middle = middle
        self.basis = image_basis(cycles)
        self._basis_smith = smith(self.basis)

        denominators = hstack(y, incoming, middle.relations)
        coordinates = []
        for j, column in enumerate(denominators.columns()):
            c = solve(self.basis, column, self._basis_smith)
            if isinstance(c, NoSolution):
                if j >= incoming.cols:
                    raise RelationViolationError(
                        f"relation {j - incoming.cols} is not sent to zero", morphism="outgoing"
                    )
                raise NotAComplexError(f"incoming generator {j} is not a cycle", witness=j)
            coordinates.append(c)
        self.presentation = IntMatrix.from_columns(coordinates, self.basis.cols)
        self._smith = smith(self.presentation)

    @property
    def rank(self) -> int:
        """Rank of the cycle lattice."""
        return self.basis.cols

    def invariants(self) -> GroupInvariants:
        return GroupInvariants.from_divisors(self.rank - self._smith.rank, self._smith.divisors)

    def coordinates(self, vector: Sequence[int]) -> Vector | None:
        """Coordinates of a cycle in ``basis``; None when the vector is not a cycle."""
        c = solve(self.basis, vector, self._basis_smith)
        return None if isinstance(c, NoSolution) else c

    def classify(self, vector: Sequence[int]) -> tuple[tuple[int, int], ...]:
        """Class of a cycle as (order, coordinate) per nontrivial cyclic summand.

        Torsion summands come first in divisibility order with coordinates
        reduced modulo their order; free summands follow with order 0.
        """
        c = self.coordinates(vector)
        if c is None:
            raise ValueError("vector is not a cycle")
        y = self._smith.U.apply(c)
        diagonal = self._smith.diagonal
        result = []
        for i, yi in enumerate(y):
            di = diagonal[i] if i < len(diagonal) else 0
            if di == 1:
                continue
            result.append((di, yi % di) if di else (0, yi))
        return tuple(result)

    def is_boundary(self, vector: Sequence[int]) -> bool:
        return all(value == 0 for _, value in self.classify(vector))


def check_composite(f: Homomorphism, g: Homomorphism) -> int | None:
    """First generator of f's source whose image under g∘f is nonzero, if any."""
    composite = g.matrix @ f.matrix
    for j, column in enumerate(composite.columns()):
        if not g.target.is_zero_element(column):
            return j
    return None


def homology_at(f: Homomorphism, g: Homomorphism) -> GroupInvariants:
    """Invariants of ker(g) / im(f) for presented groups X -f-> Y -g-> Z."""
    return subquotient(f, g).invariants()


def subquotient(f: Homomorphism, g: Homomorphism) -> Subquotient:
    if f.target.gens != g.source.gens:
        raise ValueError("f and g do not meet in a common group")
    witness = check_composite(f, g)
    if witness is not None:
        raise NotAComplexError(f"g∘f is nonzero on generator {witness}", witness=witness)
    return Subquotient(f.target, f.matrix, g.matrix, g.target)
