"""Instance file loading: schema validation plus reference resolution."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import ValidationError

from .bredon import BredonCochain, BredonComplex
from .coefficients import CoefficientSystem, CompatibleFamilyDecl, close_system, constant_system
from .complexes import BoundaryTerm, GCWComplex, OrbitCell, require_valid
from .exceptions import InstanceParseError, UnknownCochainError
from .groups import (
    FiniteGroup,
    OrbitCategory,
    OrbitMorphism,
    Subgroup,
    SubgroupFamily,
    close_family,
    coset_rep,
    group_from_generators,
    group_from_permutations,
    group_from_table,
    subgroup_generated,
)
from .models.instance import AbelianGroupSpec, CoefficientSection, InstanceFile
from .utils import instance_digest
from .zmodule import IntMatrix, PresentedAbelianGroup

logger = logging.getLogger(__name__)


@dataclass
class Instance:
    """A fully resolved instance: group, family, complex, coefficients, cochains."""

    digest: str
    group: FiniteGroup
    names: dict[Subgroup, str]
    family: SubgroupFamily
    category: OrbitCategory
    complex: GCWComplex
    system: CoefficientSystem
    bredon: BredonComplex
    cochains: dict[str, BredonCochain] = field(default_factory=dict)
    fibration_degrees: dict[str, int] = field(default_factory=dict)
    deferred: frozenset[str] = frozenset()
    """Cochains left unread because some cell isotropy lies outside the family."""
    fibers: CompatibleFamilyDecl | None = None
    assumptions: list[str] = field(default_factory=list)

    def cochain(self, name: str) -> BredonCochain:
        if name in self.deferred:
            require_valid(self.complex)
        try:
            return self.cochains[name]
        except KeyError:
            raise UnknownCochainError(name) from None

    def name_of(self, H: Subgroup) -> str:
        return self.names.get(H, H.label)


class _Resolver:
    """Name lookups that turn dangling references into located parse errors."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.subgroups: dict[str, Subgroup] = {}

    def element(self, name: str | None, location: str) -> int:
        if name is None:
            return self.group.identity
        try:
            return self.group.element(name)
        except KeyError:
            raise InstanceParseError(f"unknown group element {name!r}", location) from None

    def subgroup(self, name: str, location: str) -> Subgroup:
        if name in self.subgroups:
            return self.subgroups[name]
        raise InstanceParseError(f"unknown subgroup {name!r}", location)


def _parse_group(spec: InstanceFile) -> FiniteGroup:
    section = spec.group
    if section.table is not None:
        return group_from_table(section.table, section.elements)
    if section.permutations is not None:
        return group_from_permutations(section.permutations)
    return group_from_generators(section.generators or {})


def _abelian_group(spec: AbelianGroupSpec) -> PresentedAbelianGroup:
    if spec.invariants is not None:
        return PresentedAbelianGroup.from_invariants(spec.invariants)
    return PresentedAbelianGroup.from_relators(spec.gens or 0, spec.relations)


def _parse_coefficients(
    section: CoefficientSection, resolver: _Resolver, category: OrbitCategory
) -> CoefficientSystem:
    if section.constant is not None:
        return constant_system(category, _abelian_group(section.constant))

    groups: dict[Subgroup, PresentedAbelianGroup] = {}
    for label, group_spec in (section.groups or {}).items():
        H = resolver.subgroup(label, f"coefficients.groups.{label}")
        if H not in category.family:
            raise InstanceParseError(
                f"subgroup {label!r} is not in the family", f"coefficients.groups.{label}"
            )
        groups[H] = _abelian_group(group_spec)

    matrices: dict[OrbitMorphism, IntMatrix] = {}
    for k, morphism in enumerate(section.morphisms):
        where = f"coefficients.morphisms.{k}"
        H = resolver.subgroup(morphism.source, f"{where}.source")
        K = resolver.subgroup(morphism.target, f"{where}.target")
        a = resolver.element(morphism.element, f"{where}.element")
        for S, key in ((H, "source"), (K, "target")):
            if S not in groups:
                raise InstanceParseError("no group given for this subgroup", f"{where}.{key}")
        rows, cols = groups[H].gens, groups[K].gens
        if len(morphism.matrix) != rows or any(len(r) != cols for r in morphism.matrix):
            raise InstanceParseError(f"matrix must be {rows}x{cols}", f"{where}.matrix")
        f = category.morphism(H, K, a)
        matrices[f] = IntMatrix.from_rows(morphism.matrix, cols=cols)
    return close_system(category, groups, matrices)


def parse_instance(data: bytes) -> Instance:
    """Validate and resolve an instance document.

    Raises:
        InstanceParseError: malformed document or unresolved reference.
        NotAGroupError: the group section does not define a group.
    """
    try:
        spec = InstanceFile.model_validate_json(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or None
        raise InstanceParseError(first["msg"], location, original_error=e) from e

    group = _parse_group(spec)
    resolver = _Resolver(group)
    names: dict[Subgroup, str] = {}
    for name, generators in spec.subgroups.items():
        elements = [
            resolver.element(g, f"subgroups.{name}.{i}") for i, g in enumerate(generators)
        ]
        H = subgroup_generated(group, elements)
        resolver.subgroups[name] = H
        names.setdefault(H, name)

    isotropy: list[Subgroup] = []
    for i, cell in enumerate(spec.complex.cells):
        isotropy.append(resolver.subgroup(cell.isotropy, f"complex.cells.{i}.isotropy"))
    if spec.family is not None:
        seeds = [
            resolver.subgroup(s, f"family.seeds.{i}") for i, s in enumerate(spec.family.seeds)
        ]
        family = close_family(group, seeds)
    else:
        family = close_family(group, isotropy)
    for H in family:
        resolver.subgroups.setdefault(H.label, H)
    category = OrbitCategory(family)

    cells: dict[str, OrbitCell] = {}
    for i, (cell, H) in enumerate(zip(spec.complex.cells, isotropy)):
        if cell.id in cells:
            raise InstanceParseError(f"duplicate cell id {cell.id!r}", f"complex.cells.{i}.id")
        cells[cell.id] = OrbitCell(cell.id, cell.dim, H)

    boundary: dict[str, list[BoundaryTerm]] = {}
    for i, cell in enumerate(spec.complex.cells):
        sigma = cells[cell.id]
        terms = []
        for k, term in enumerate(cell.boundary):
            where = f"complex.cells.{i}.boundary.{k}"
            if term.face not in cells:
                raise InstanceParseError(f"unknown face {term.face!r}", f"{where}.face")
            face = cells[term.face]
            a = resolver.element(term.translate, f"{where}.translate")
            translate = OrbitMorphism(
                sigma.isotropy, face.isotropy, coset_rep(group, a, face.isotropy)
            )
            terms.append(BoundaryTerm(term.coeff, translate, face))
        boundary[cell.id] = terms
    B = GCWComplex(category, cells.values(), boundary, spec.complex.assertions)

    system = _parse_coefficients(spec.coefficients, resolver, category)
    bredon = BredonComplex(B, system)

    cochains: dict[str, BredonCochain] = {}
    fibration_degrees: dict[str, int] = {}
    interpretable = all(c.isotropy in family for c in B.cells)
    for name, cochain in spec.cochains.items() if interpretable else ():
        where = f"cochains.{name}.values"
        try:
            cochains[name] = bredon.cochain(cochain.degree, cochain.values)
        except KeyError as e:
            raise InstanceParseError(str(e.args[0]), where) from e
        except ValueError as e:
            raise InstanceParseError(str(e), where) from e
        fibration_degrees[name] = (
            cochain.fibration_degree
            if cochain.fibration_degree is not None
            else cochain.degree - 1
        )

    fibers = None
    if spec.fibers is not None:
        labels = {
            resolver.subgroup(key, f"fibers.labels.{key}"): text
            for key, text in spec.fibers.labels.items()
        }
        equivalences = {
            (
                resolver.subgroup(eq.source, f"fibers.equivalences.{k}.source"),
                resolver.subgroup(eq.target, f"fibers.equivalences.{k}.target"),
            ): eq.witness
            for k, eq in enumerate(spec.fibers.equivalences)
        }
        fibers = CompatibleFamilyDecl(family, labels, equivalences)

    logger.debug(
        "loaded instance: |G| = %d, %d subgroups in family, %d orbit cells",
        group.order,
        len(family),
        len(B.cells),
    )
    return Instance(
        digest=instance_digest(data),
        group=group,
        names=names,
        family=family,
        category=category,
        complex=B,
        system=system,
        bredon=bredon,
        cochains=cochains,
        fibration_degrees=fibration_degrees,
        deferred=frozenset() if interpretable else frozenset(spec.cochains),
        fibers=fibers,
        assumptions=list(spec.assumptions),
    )


def load_instance(path: str | Path) -> Instance:
    """Read and parse an instance file.

    Raises:
        InstanceParseError: unreadable or malformed file.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise InstanceParseError(f"cannot read instance file: {e.strerror}", str(path), e) from e
    return parse_instance(data)
