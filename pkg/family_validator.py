"""
Family Validation Module
Validates generating families before and during certification.
"""

import logging
import math
from typing import List, Optional, Tuple

from construction import GeneratingFamily
from experiment_config import BudgetExceededError, FamilyKind
from group_engine import BSGS, alternating_order, build_bsgs, is_transitive, orbit_labels
from perm_core import Parity, parity, order as element_order

logger = logging.getLogger(__name__)

_ALT_KINDS = (FamilyKind.F_N, FamilyKind.F_n, FamilyKind.C, FamilyKind.GAMMA)


class ValidationResult:
    """Result of a family check."""

    def __init__(self, valid: bool, message: str = "", order: Optional[int] = None):
        self.valid = valid
        self.message = message
        self.order = order

    def __bool__(self):
        return self.valid

    def __repr__(self):
        status = "✓ VALID" if self.valid else "✗ INVALID"
        return f"{status}: {self.message}" if self.message else status


class FamilyValidator:
    """
    Validates generating families.
    """

    def __init__(self, seed: int = 0, max_degree: int = 400):
        """
        Initialize family validator.

        Args:
            seed: seed of the random Schreier-Sims phase
            max_degree: largest degree a BSGS certificate is attempted for
        """
        self.seed = seed
        self.max_degree = max_degree

    def expected_order(self, family: GeneratingFamily) -> Optional[int]:
        """Order of Alt(n) or Sym(n) the family should generate, None for abelian kinds."""
        if family.kind in (FamilyKind.F_N, FamilyKind.F_n):
            return alternating_order(family.degree)
        if family.kind == FamilyKind.SYM_F_n:
            return math.factorial(family.degree)
        return None

    def validate_elements(self, family: GeneratingFamily) -> ValidationResult:
        """
        Check size and parity of the elements.

        Args:
            family: family to check

        Returns:
            ValidationResult indicating if the elements are consistent with the kind
        """
        if len(family) == 0:
            return ValidationResult(False, f"{family.kind.value}: family is empty")

        odd = [k for k, p in enumerate(family.elements) if parity(p) == Parity.ODD]
        if family.kind in _ALT_KINDS and odd:
            return ValidationResult(
                False,
                f"{family.kind.value}: {len(odd)} odd element(s), first at index {odd[0]} "
                f"({family.labels[odd[0]].source})")
        if family.kind == FamilyKind.SYM_F_n and len(odd) != 1:
            return ValidationResult(False, f"{family.kind.value}: expected exactly one odd element, found {len(odd)}")

        involutions = all(element_order(p) == 2 for p in family.elements)
        note = " (all involutions)" if involutions else ""
        return ValidationResult(True, f"{family.kind.value}: {len(family)} elements of degree {family.degree}{note}")

    def validate_transitivity(self, family: GeneratingFamily) -> ValidationResult:
        """Orbit computation on the points; cheaper than a certificate and run first."""
        if is_transitive(family.elements):
            return ValidationResult(True, f"{family.kind.value}: transitive on {family.degree} points")
        count, _ = orbit_labels(family.elements, family.degree)
        return ValidationResult(False, f"{family.kind.value}: intransitive ({count} orbits)")

    def certify(self, family: GeneratingFamily) -> Tuple[ValidationResult, Optional[BSGS]]:
        """
        BSGS certificate: the generated order must equal n!/2 (or n! for Sym kinds).

        Returns:
            (result, BSGS or None when the certificate was not attempted)

        Raises:
            BudgetExceededError: if the degree is above max_degree
        """
        expected = self.expected_order(family)
        if expected is None:
            return ValidationResult(False, f"{family.kind.value}: no generation target for this kind"), None
        if family.degree > self.max_degree:
            raise BudgetExceededError(f"{family.kind.value}: degree {family.degree} above the "
                                      f"certificate limit {self.max_degree}")

        bsgs = build_bsgs(family.elements, seed=self.seed, order_bound=expected)
        target = "Alt" if family.kind != FamilyKind.SYM_F_n else "Sym"
        if bsgs.order != expected:
            return ValidationResult(
                False,
                f"{family.kind.value}: generated order {bsgs.order} differs from |{target}({family.degree})|",
                order=bsgs.order), bsgs
        return ValidationResult(True, f"{family.kind.value}: generates {target}({family.degree}) ✓",
                                order=bsgs.order), bsgs

    def validate_all(self, family: GeneratingFamily) -> Tuple[ValidationResult, Optional[BSGS]]:
        """
        Run every check in order, stopping at the first failure.

        Returns:
            ValidationResult for all checks combined, and the BSGS when one was built
        """
        messages: List[str] = []
        for check in (self.validate_elements, self.validate_transitivity):
            result = check(family)
            messages.append(result.message)
            if not result.valid:
                logger.info("Validation stopped early: %s", result.message)
                return ValidationResult(False, "\n".join(messages)), None
        result, bsgs = self.certify(family)
        messages.append(result.message)
        return ValidationResult(result.valid, "\n".join(messages), order=result.order), bsgs


# Example usage
if __name__ == "__main__":
    from construction import CubeConstruction
    from experiment_config import ExperimentConfig

    print("=== Testing Family Validator ===\n")
    family = CubeConstruction(ExperimentConfig(d=2)).build_F_N()
    validator = FamilyValidator(seed=0)
    result, bsgs = validator.validate_all(family)
    print(result)
    print("\n=== Test Complete ===")
