import enum

from ..config import SuiteEntry
from ..schemas import SuiteOptions
from .algebra_checks import (
    AutomorphismCheck,
    AutomorphismFixedCheck,
    AutomorphismInvolutionCheck,
    ConfluenceCheck,
    DerivationCheck,
    EpsilonContractCheck,
    EpsilonNullCheck,
    RealizationCheck,
    RelationsCheck,
    StarClosureCheck,
)
from .base import BaseCheck
from .calculus_checks import (
    ClassicalLimitCheck,
    ExponentSolutionCheck,
    ExponentSystemCheck,
    MomentumDalembertianCheck,
    OperatorCommutativityCheck,
    OperatorCompositionCheck,
)


class CheckKind(str, enum.Enum):
    RELATIONS = "relations"
    CONFLUENCE = "confluence"
    STAR_CLOSURE = "star-closure"
    DERIVATION = "derivation"
    AUTOMORPHISM = "automorphism"
    AUTOMORPHISM_FIXED = "automorphism-fixed"
    AUTOMORPHISM_INVOLUTION = "automorphism-involution"
    REALIZATION = "realization"
    EPSILON_CONTRACT = "epsilon-contract"
    EPSILON_NULL = "epsilon-null"
    EXPONENT_SYSTEM = "exponent-system"
    EXPONENT_SOLUTION = "exponent-solution"
    OPERATOR_COMPOSITION = "operator-composition"
    OPERATOR_COMMUTATIVITY = "operator-commutativity"
    CLASSICAL_LIMIT = "classical-limit"
    MOMENTUM_DALEMBERTIAN = "momentum-dalembertian"


CHECK_MAP = {
    CheckKind.RELATIONS: RelationsCheck,
    CheckKind.CONFLUENCE: ConfluenceCheck,
    CheckKind.STAR_CLOSURE: StarClosureCheck,
    CheckKind.DERIVATION: DerivationCheck,
    CheckKind.AUTOMORPHISM: AutomorphismCheck,
    CheckKind.AUTOMORPHISM_FIXED: AutomorphismFixedCheck,
    CheckKind.AUTOMORPHISM_INVOLUTION: AutomorphismInvolutionCheck,
    CheckKind.REALIZATION: RealizationCheck,
    CheckKind.EPSILON_CONTRACT: EpsilonContractCheck,
    CheckKind.EPSILON_NULL: EpsilonNullCheck,
    CheckKind.EXPONENT_SYSTEM: ExponentSystemCheck,
    CheckKind.EXPONENT_SOLUTION: ExponentSolutionCheck,
    CheckKind.OPERATOR_COMPOSITION: OperatorCompositionCheck,
    CheckKind.OPERATOR_COMMUTATIVITY: OperatorCommutativityCheck,
    CheckKind.CLASSICAL_LIMIT: ClassicalLimitCheck,
    CheckKind.MOMENTUM_DALEMBERTIAN: MomentumDalembertianCheck,
}


def get_check(entry: SuiteEntry, options: SuiteOptions) -> BaseCheck:
    """
    Get the check implementation for a suite entry.

    Args:
        entry: the suite entry (kind, preset, expectation, parameters)
        options: run-wide options (corrected table, degree cap)

    Returns:
        Check instance ready to ``run``
    """
    try:
        kind = CheckKind(entry.kind)
    except ValueError:
        raise NotImplementedError(f"No check for kind {entry.kind}") from None
    check_class = CHECK_MAP.get(kind)
    if not check_class:
        raise NotImplementedError(f"No check for kind {entry.kind}")
    return check_class(entry, options)
