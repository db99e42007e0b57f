"""bredon-obstruction - Bredon cohomology and equivariant obstruction verdicts.

Exact integer computations over the orbit category of a finite group: Bredon
cochain complexes of finite G-CW-complexes, their cohomology, and the
extend / extend-after-modification / blocked decision for obstruction cocycles.

Example (library):
    ```python
    from bredon_obstruction import ObstructionInput, decide, load_instance

    instance = load_instance("antipodal_s3_sign.json")
    verdict = decide(ObstructionInput(instance.bredon, instance.cochain("alpha")))
    print(verdict.kind.value, verdict.class_coordinates)
    ```

Example (session):
    ```python
    import asyncio
    from bredon_obstruction import BredonSession, ComputeConfig, load_instance

    async def main():
        config = ComputeConfig(workers=4, oracle=True)
        async with BredonSession(load_instance("rotation_s2.json"), config) as session:
            for report in await session.cohomology(range(3)):
                print(f"H^{report.degree}: {report.describe()}")

    asyncio.run(main())
    ```
"""

__version__ = "0.1.0"

from .bredon import (
    BredonCochain,
    BredonComplex,
    CohomologyReport,
    SubmoduleOracle,
    coboundary,
    cochain_complex,
    cohomology,
    expand,
    map_cochain,
    oracle_cohomology,
    submodule_oracle,
)
from .coefficients import (
    CoefficientMorphism,
    CoefficientSystem,
    CompatibleFamilyDecl,
    close_system,
    constant_system,
    fixed_point_system,
    permutation_module,
    require_functorial,
    system_from_data,
    validate_functoriality,
    validate_naturality,
)
from .complexes import (
    BoundaryTerm,
    ChainComplex,
    GCWComplex,
    OrbitCell,
    fixed_point_complex,
    isotropy_family,
    isotropy_subgroups,
    orbit_space_complex,
    require_valid,
    validate,
)
from .constants import Commands
from .exceptions import (
    BredonError,
    CompositionMismatchError,
    DegreeMismatchError,
    FunctorialityViolationError,
    IncompleteSystemError,
    InstanceParseError,
    InvalidComplexError,
    InvalidMorphismError,
    NotACochainComplexError,
    NotAComplexError,
    NotAGroupError,
    OracleMismatchError,
    RelationViolationError,
    UnknownCochainError,
    UnknownSubgroupError,
    format_error_for_logging,
)
from .groups import (
    FiniteGroup,
    OrbitCategory,
    OrbitMorphism,
    Subgroup,
    SubgroupFamily,
    close_family,
    compose,
    group_from_generators,
    group_from_permutations,
    group_from_table,
    hom_set,
    subgroup_generated,
    subgroups_of,
)
from .loader import Instance, load_instance, parse_instance
from .models import Report, ValidationReport, Violation
from .obstruction import (
    DifferenceCochain,
    IdentityCheck,
    ObstructionInput,
    Verdict,
    VerdictKind,
    apply_modification,
    check_cocycle,
    check_cocycle_expanded,
    decide,
    difference_identity,
    modification_verdict,
    obstruction_class,
    strict_verdict,
)
from .session import BredonSession, BredonSessionSync
from .utils import ComputeConfig, get_logger
from .zmodule import (
    GroupInvariants,
    Homomorphism,
    IntMatrix,
    NoSolution,
    PresentedAbelianGroup,
    Subquotient,
    homology_at,
    smith,
    solve,
)

__all__ = [
    # Version
    "__version__",
    # Sessions
    "BredonSession",
    "BredonSessionSync",
    "ComputeConfig",
    "Instance",
    "load_instance",
    "parse_instance",
    # Groups and the orbit category
    "FiniteGroup",
    "Subgroup",
    "SubgroupFamily",
    "OrbitMorphism",
    "OrbitCategory",
    "group_from_table",
    "group_from_permutations",
    "group_from_generators",
    "subgroup_generated",
    "subgroups_of",
    "close_family",
    "hom_set",
    "compose",
    # Complexes
    "OrbitCell",
    "BoundaryTerm",
    "GCWComplex",
    "ChainComplex",
    "fixed_point_complex",
    "orbit_space_complex",
    "isotropy_subgroups",
    "isotropy_family",
    "validate",
    "require_valid",
    # Integer linear algebra
    "IntMatrix",
    "smith",
    "solve",
    "NoSolution",
    "GroupInvariants",
    "PresentedAbelianGroup",
    "Homomorphism",
    "Subquotient",
    "homology_at",
    # Coefficient systems
    "CoefficientSystem",
    "CoefficientMorphism",
    "CompatibleFamilyDecl",
    "constant_system",
    "close_system",
    "system_from_data",
    "require_functorial",
    "validate_functoriality",
    "validate_naturality",
    "permutation_module",
    "fixed_point_system",
    # Bredon cohomology
    "BredonCochain",
    "BredonComplex",
    "CohomologyReport",
    "SubmoduleOracle",
    "cochain_complex",
    "expand",
    "coboundary",
    "cohomology",
    "map_cochain",
    "submodule_oracle",
    "oracle_cohomology",
    # Obstructions
    "ObstructionInput",
    "Verdict",
    "VerdictKind",
    "DifferenceCochain",
    "IdentityCheck",
    "check_cocycle",
    "check_cocycle_expanded",
    "strict_verdict",
    "modification_verdict",
    "obstruction_class",
    "decide",
    "difference_identity",
    "apply_modification",
    # Reports
    "Report",
    "ValidationReport",
    "Violation",
    "Commands",
    # Exceptions
    "BredonError",
    "NotAGroupError",
    "CompositionMismatchError",
    "UnknownSubgroupError",
    "InvalidMorphismError",
    "NotAComplexError",
    "FunctorialityViolationError",
    "RelationViolationError",
    "IncompleteSystemError",
    "NotACochainComplexError",
    "InvalidComplexError",
    "DegreeMismatchError",
    "OracleMismatchError",
    "InstanceParseError",
    "UnknownCochainError",
    "format_error_for_logging",
    # Utils
    "get_logger",
]
