"""Constants for bredon-obstruction."""

# Exit codes of the command line front end
EXIT_OK = 0
EXIT_VALIDATION_FAILURE = 1
EXIT_PARSE_FAILURE = 2
EXIT_BLOCKED = 3
EXIT_NOT_A_COCYCLE = 4
EXIT_IDENTITY_FAILURE = 5

OUTPUT_FORMATS = ("text", "machine")

IDENTITY_NAME = "e"
"""Name given to the identity when elements are generated from permutations."""

WORD_SEPARATOR = "*"
"""Joins generator names into element names for generated groups."""

VERIFY_ENV_VAR = "BREDON_VERIFY_SMITH"
"""Set to "1" to re-verify every Smith decomposition after it is computed."""

# Hypotheses of the extension theorem; never verified from chain data.
THEOREM_HYPOTHESES = (
    "B^H is simply connected for every isotropy subgroup H of B",
    "every fiber F_H is a finite H-CW-complex and the family {F_H} is compatible",
    "total spaces have the G-homotopy type of G-CW-complexes",
)

FINITENESS_NOTE = (
    "if B is finite and E_n has the G-homotopy type of a finite G-CW-complex, "
    "so does the extended total space"
)

DEGREE_HYPOTHESIS_WARNING = (
    "fibration degree n = {n} is below 2; the verdict is purely algebraic"
)


class Commands:
    """Command names of the command line front end."""

    VALIDATE = "validate"
    COHOMOLOGY = "cohomology"
    OBSTRUCTION = "obstruction"
    CHECK_DIFFERENCE = "check-difference"
