"""Instance file schema.

An instance file is a single JSON document with the sections below. Unknown
keys are rejected everywhere; cross-references (subgroup names, cell ids,
element names) are resolved by the loader, not here.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StrictModel(BaseModel):
    """Base for instance sections: unknown keys are an error."""

    model_config = ConfigDict(extra="forbid")


# --- Group ---


class GroupSection(StrictModel):
    """Exactly one of a Cayley table, a full permutation list or generators."""

    table: list[list[int]] | None = None
    elements: list[str] | None = None
    permutations: dict[str, list[int]] | None = None
    generators: dict[str, list[int]] | None = None

    @model_validator(mode="after")
    def exactly_one_source(self) -> "GroupSection":
        given = [
            name for name in ("table", "permutations", "generators") if getattr(self, name)
        ]
        if len(given) != 1:
            raise ValueError("exactly one of table, permutations, generators is required")
        if self.elements is not None and self.table is None:
            raise ValueError("elements only names the rows of a table")
        return self


class FamilySection(StrictModel):
    """Seed subgroups; the family is their closure under conjugation and subgroups."""

    seeds: list[str] = Field(min_length=1)


# --- Complex ---


class BoundaryTermSpec(StrictModel):
    coeff: int
    translate: str | None = None  # element name; identity when omitted
    face: str


class CellSpec(StrictModel):
    id: str = Field(min_length=1)
    dim: int = Field(ge=0)
    isotropy: str
    boundary: list[BoundaryTermSpec] = Field(default_factory=list)


class ComplexSection(StrictModel):
    cells: list[CellSpec] = Field(min_length=1)
    assertions: list[str] = Field(default_factory=list)


# --- Coefficients ---


class AbelianGroupSpec(StrictModel):
    """``{gens, relations}`` with relator vectors, or ``{invariants}`` (0 stands for Z)."""

    gens: int | None = Field(default=None, ge=0)
    relations: list[list[int]] = Field(default_factory=list)
    invariants: list[int] | None = None

    @model_validator(mode="after")
    def one_presentation(self) -> "AbelianGroupSpec":
        if (self.gens is None) == (self.invariants is None):
            raise ValueError("give either gens (with relations) or invariants")
        if self.invariants is not None:
            if self.relations:
                raise ValueError("relations cannot be combined with invariants")
            if any(d < 0 or d == 1 for d in self.invariants):
                raise ValueError("invariants must be 0 (for Z) or at least 2")
        else:
            for k, relator in enumerate(self.relations):
                if len(relator) != self.gens:
                    raise ValueError(f"relator {k} has length {len(relator)}, expected {self.gens}")
        return self


class MorphismSpec(StrictModel):
    """Matrix of M(â): M(G/target) -> M(G/source) for â: G/source -> G/target.

    Rows follow the generators of M(G/source), columns those of M(G/target).
    """

    source: str
    target: str
    element: str | None = None
    matrix: list[list[int]]


class CoefficientSection(StrictModel):
    constant: AbelianGroupSpec | None = None
    groups: dict[str, AbelianGroupSpec] | None = None
    morphisms: list[MorphismSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def constant_or_groups(self) -> "CoefficientSection":
        if (self.constant is None) == (self.groups is None):
            raise ValueError("give either constant or groups")
        if self.constant is not None and self.morphisms:
            raise ValueError("a constant system takes no morphisms")
        return self


# --- Cochains, fibers ---


class CochainSpec(StrictModel):
    degree: int = Field(ge=0)
    values: dict[str, list[int]] = Field(default_factory=dict)
    fibration_degree: int | None = None


class EquivalenceSpec(StrictModel):
    source: str
    target: str
    witness: str


class FibersSection(StrictModel):
    labels: dict[str, str] = Field(default_factory=dict)
    equivalences: list[EquivalenceSpec] = Field(default_factory=list)


class InstanceFile(StrictModel):
    """Top-level instance document."""

    group: GroupSection
    subgroups: dict[str, list[str]] = Field(default_factory=dict)
    family: FamilySection | None = None
    complex: ComplexSection
    coefficients: CoefficientSection
    cochains: dict[str, CochainSpec] = Field(default_factory=dict)
    fibers: FibersSection | None = None
    assumptions: list[str] = Field(default_factory=list)
