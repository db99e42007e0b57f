"""Finite groups, subgroup families and the orbit category Or_H(G).

Group elements are dense integer indices into a Cayley table; a subgroup is a
sorted tuple of indices. A morphism G/H -> G/K is stored as the coset aK,
represented by its smallest element index.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .constants import IDENTITY_NAME, WORD_SEPARATOR
from .exceptions import (
    CompositionMismatchError,
    InvalidMorphismError,
    NotAGroupError,
    UnknownSubgroupError,
)


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its multiplication table."""

    mul: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    names: tuple[str, ...]

    @property
    def order(self) -> int:
        return len(self.mul)

    @property
    def elements(self) -> range:
        return range(self.order)

    def product(self, *elements: int) -> int:
        result = self.identity
        for g in elements:
            result = self.mul[result][g]
        return result

    def conjugate(self, h: int, a: int) -> int:
        """a⁻¹ h a."""
        return self.mul[self.mul[self.inv[a]][h]][a]

    def element(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no group element named {name!r}") from None

    @cached_property
    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, (self.identity,))

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, tuple(self.elements))


def group_from_table(
    mul_table: Sequence[Sequence[int]], names: Sequence[str] | None = None
) -> FiniteGroup:
    """Validate a Cayley table and derive identity and inverses.

    Raises:
        NotAGroupError: naming the failed axiom and a witness.
    """
    n = len(mul_table)
    if n == 0:
        raise NotAGroupError("non-empty", (), "a group has at least one element")
    for i, row in enumerate(mul_table):
        if len(row) != n:
            raise NotAGroupError("square", (i,), f"row {i} has {len(row)} entries, expected {n}")
        for j, x in enumerate(row):
            if not 0 <= x < n:
                raise NotAGroupError("closure", (i, j), f"entry ({i},{j}) = {x} out of range")
    mul = tuple(tuple(int(x) for x in row) for row in mul_table)

    for i, row in enumerate(mul):
        if len(set(row)) != n:
            raise NotAGroupError("latin square", (i,), f"row {i} is not a permutation")
    for j in range(n):
        if len({mul[i][j] for i in range(n)}) != n:
            raise NotAGroupError("latin square", (j,), f"column {j} is not a permutation")

    identity = next(
        (e for e in range(n) if all(mul[e][g] == g and mul[g][e] == g for g in range(n))), None
    )
    if identity is None:
        raise NotAGroupError("identity", (), "no two-sided identity")

    for a, b, c in product(range(n), repeat=3):
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            raise NotAGroupError("associativity", (a, b, c))

    inv = tuple(next(h for h in range(n) if mul[h][g] == identity) for g in range(n))
    if names is None:
        names = tuple(str(i) for i in range(n))
    if len(names) != n or len(set(names)) != n:
        raise NotAGroupError("names", (), "element names must be distinct, one per element")
    return FiniteGroup(mul=mul, identity=identity, inv=inv, names=tuple(names))


def _compose_permutations(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p·q)(x) = p(q(x))."""
    return tuple(p[x] for x in q)


def group_from_permutations(named_perms: Mapping[str, Sequence[int]]) -> FiniteGroup:
    """Group whose elements are all listed as permutations of {0, ..., d-1}."""
    names = list(named_perms)
    perms = [tuple(named_perms[name]) for name in names]
    index = {p: i for i, p in enumerate(perms)}
    if len(index) != len(perms):
        raise NotAGroupError("distinct elements", (), "two names denote the same permutation")
    for i, p in enumerate(perms):
        if sorted(p) != list(range(len(p))) or len(p) != len(perms[0]):
            raise NotAGroupError("permutation", (i,), f"{names[i]!r} is not a permutation")
    table = []
    for i, p in enumerate(perms):
        row = []
        for j, q in enumerate(perms):
            r = _compose_permutations(p, q)
            if r not in index:
                raise NotAGroupError(
                    "closure", (i, j), f"{names[i]}*{names[j]} is not among the listed elements"
                )
            row.append(index[r])
        table.append(row)
    return group_from_table(table, names)


def group_from_generators(named_gens: Mapping[str, Sequence[int]]) -> FiniteGroup:
    """Close permutation generators; elements are named by shortlex generator words."""
    gens = sorted(named_gens.items())
    if not gens:
        raise NotAGroupError("generators", (), "at least one generator is required")
    degree = len(gens[0][1])
    identity = tuple(range(degree))
    words: dict[tuple[int, ...], str] = {identity: IDENTITY_NAME}
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for name, g in gens:
            if len(g) != degree or sorted(g) != list(identity):
                raise NotAGroupError("permutation", (), f"generator {name!r} is not a permutation")
            q = _compose_permutations(p, g)
            if q not in words:
                prefix = words[p]
                words[q] = name if p == identity else prefix + WORD_SEPARATOR + name
                queue.append(q)
    return group_from_permutations({name: perm for perm, name in words.items()})


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a sorted tuple of element indices."""

    parent: FiniteGroup = field(compare=False, repr=False)
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _members(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._members

    def is_subgroup_of(self, other: Subgroup) -> bool:
        return self._members <= other._members

    def conjugate(self, a: int) -> Subgroup:
        """H^a = a⁻¹ H a."""
        G = self.parent
        return Subgroup(G, tuple(sorted({G.conjugate(h, a) for h in self.elements})))

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.order, self.elements)

    @property
    def label(self) -> str:
        """Label built from element names, e.g. ``{e,s}``."""
        return "{" + ",".join(self.parent.names[g] for g in self.elements) + "}"

    def is_valid(self) -> bool:
        G = self.parent
        members = self._members
        return (
            G.identity in members
            and all(G.mul[a][b] in members for a in members for b in members)
            and all(G.inv[a] in members for a in members)
        )


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``gens`` (closure under multiplication)."""
    members = {G.identity, *gens}
    frontier = list(members)
    while frontier:
        new = []
        for a in frontier:
            for b in list(members):
                for c in (G.mul[a][b], G.mul[b][a]):
                    if c not in members:
                        members.add(c)
                        new.append(c)
        frontier = new
    return Subgroup(G, tuple(sorted(members)))


def subgroups_of(H: Subgroup) -> list[Subgroup]:
    """All subgroups of H, canonically ordered by (order, elements)."""
    G = H.parent
    found = {subgroup_generated(G, [h]) for h in H.elements}
    while True:
        joins = {subgroup_generated(G, a.elements + b.elements) for a in found for b in found}
        if joins <= found:
            break
        found |= joins
    return sorted(found, key=lambda s: s.sort_key)


@dataclass(frozen=True)
class SubgroupFamily:
    """A set of subgroups, deduplicated and canonically ordered."""

    group: FiniteGroup = field(compare=False, repr=False)
    members: tuple[Subgroup, ...]

    @classmethod
    def of(cls, group: FiniteGroup, members: Iterable[Subgroup]) -> SubgroupFamily:
        return cls(group, tuple(sorted(set(members), key=lambda s: s.sort_key)))

    def __contains__(self, H: Subgroup) -> bool:
        return H in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def missing_members(self) -> list[Subgroup]:
        """Subgroups that closure under conjugation and subgroups would add."""
        closed = close_family(self.group, self.members)
        return [H for H in closed.members if H not in self.members]

    def is_closed(self) -> bool:
        return not self.missing_members()

    def require(self, H: Subgroup) -> None:
        if H not in self.members:
            raise UnknownSubgroupError(f"subgroup {H.label} is not in the family")


def close_family(G: FiniteGroup, seeds: Iterable[Subgroup]) -> SubgroupFamily:
    """Smallest family containing ``seeds`` closed under conjugation and subgroups."""
    subgroups: set[Subgroup] = set()
    for seed in seeds:
        subgroups.update(subgroups_of(seed))
    return SubgroupFamily.of(G, (K.conjugate(a) for K in subgroups for a in G.elements))


@dataclass(frozen=True)
class OrbitMorphism:
    """The G-map G/H -> G/K sending H to aK; ``coset_rep`` is min(aK)."""

    source: Subgroup
    target: Subgroup
    coset_rep: int

    def is_valid(self) -> bool:
        """True when a⁻¹Ha ⊆ K."""
        return self.source.conjugate(self.coset_rep).is_subgroup_of(self.target)

    @property
    def is_identity(self) -> bool:
        return self.source == self.target and self.coset_rep in self.target

    def describe(self) -> str:
        G = self.source.parent
        return f"{G.names[self.coset_rep]}: G/{self.source.label} -> G/{self.target.label}"


def coset_rep(G: FiniteGroup, a: int, K: Subgroup) -> int:
    """Canonical representative of aK."""
    return min(G.mul[a][k] for k in K.elements)


def orbit_morphism(H: Subgroup, K: Subgroup, a: int) -> OrbitMorphism:
    """The morphism â: G/H -> G/K.

    Raises:
        InvalidMorphismError: if a⁻¹Ha is not contained in K.
    """
    f = OrbitMorphism(H, K, coset_rep(H.parent, a, K))
    if not f.is_valid():
        raise InvalidMorphismError(
            f"{H.parent.names[a]} does not induce a G-map G/{H.label} -> G/{K.label}"
        )
    return f


def hom_set(H: Subgroup, K: Subgroup) -> list[OrbitMorphism]:
    """All morphisms G/H -> G/K, ordered by coset representative."""
    G = H.parent
    reps = sorted({coset_rep(G, a, K) for a in G.elements})
    morphisms = [OrbitMorphism(H, K, a) for a in reps]
    return [f for f in morphisms if f.is_valid()]


def compose(f: OrbitMorphism, g: OrbitMorphism) -> OrbitMorphism:
    """g∘f for f: G/H -> G/K and g: G/K -> G/L, the coset (a_f·a_g)L."""
    if f.target != g.source:
        raise CompositionMismatchError(
            f"cannot compose {f.describe()} with {g.describe()}: target != source"
        )
    G = f.source.parent
    a = G.mul[f.coset_rep][g.coset_rep]
    return OrbitMorphism(f.source, g.target, coset_rep(G, a, g.target))


def identity_morphism(H: Subgroup) -> OrbitMorphism:
    return OrbitMorphism(H, H, coset_rep(H.parent, H.parent.identity, H))


class OrbitCategory:
    """The orbit category Or_H(G) of a family: objects G/H, morphisms the G-maps."""

    def __init__(self, family: SubgroupFamily):
        self.family = family
        self.group = family.group
        self._homs: dict[tuple[Subgroup, Subgroup], list[OrbitMorphism]] = {
            (H, K): hom_set(H, K) for H in family for K in family
        }

    @property
    def objects(self) -> tuple[Subgroup, ...]:
        return self.family.members

    def hom(self, H: Subgroup, K: Subgroup) -> list[OrbitMorphism]:
        try:
            return self._homs[(H, K)]
        except KeyError:
            missing = H if H not in self.family else K
            raise UnknownSubgroupError(f"subgroup {missing.label} is not in the family") from None

    def morphism(self, H: Subgroup, K: Subgroup, a: int) -> OrbitMorphism:
        self.family.require(H)
        self.family.require(K)
        return orbit_morphism(H, K, a)

    def identity(self, H: Subgroup) -> OrbitMorphism:
        self.family.require(H)
        return identity_morphism(H)

    def all_morphisms(self) -> list[OrbitMorphism]:
        return [f for H in self.objects for K in self.objects for f in self._homs[(H, K)]]

    def composable_pairs(self) -> list[tuple[OrbitMorphism, OrbitMorphism]]:
        return [
            (f, g)
            for H in self.objects
            for K in self.objects
            for f in self._homs[(H, K)]
            for L in self.objects
            for g in self._homs[(K, L)]
        ]

    @cached_property
    def composition_table(self) -> dict[tuple[OrbitMorphism, OrbitMorphism], OrbitMorphism]:
        return {(f, g): compose(f, g) for f, g in self.composable_pairs()}
