"""
Characters Module
Exact character theory of Sym(n): partitions, dimensions, Murnaghan-Nakayama values,
normalized characters, a decay-bound scan and the class-averaging identity.
"""

import csv
import functools
import io
import itertools
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from experiment_config import SCHEMA_VERSION
from perm_core import Permutation, cycle_type

logger = logging.getLogger(__name__)

MAX_PARTITION_N = 40
MAX_SCAN_N = 14
MAX_EXPLICIT_N = 6


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing positive parts."""
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if not parts or any(x <= 0 for x in parts) or list(parts) != sorted(parts, reverse=True):
            raise ValueError(f"Not a partition: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def first(self) -> int:
        return self.parts[0]

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for x in self.parts if x > k) for k in range(self.parts[0])))

    def multiplicities(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for x in self.parts:
            counts[x] = counts.get(x, 0) + 1
        return counts

    def __str__(self) -> str:
        return "+".join(str(x) for x in self.parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        return cls(tuple(sorted((int(x) for x in text.replace(",", "+").split("+")), reverse=True)))


def partitions(n: int) -> List[Partition]:
    """All partitions of n in descending lexicographic order, starting with [n]."""
    if not 1 <= n <= MAX_PARTITION_N:
        raise ValueError(f"n must lie in 1..{MAX_PARTITION_N}, got {n}")

    def generate(remaining: int, largest: int) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in generate(remaining - first, first):
                yield (first,) + rest

    return [Partition(p) for p in generate(n, n)]


def dimension(lam: Partition) -> int:
    """Hook length formula."""
    conj = lam.conjugate().parts
    hooks = 1
    for i, row in enumerate(lam.parts):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(lam.n) // hooks


@dataclass(frozen=True)
class ClassSpec:
    """Conjugacy class of Sym(n) by cycle type."""
    cycle_type: Partition
    size: int
    support: int

    @property
    def n(self) -> int:
        return self.cycle_type.n


def class_spec(mu: Partition) -> ClassSpec:
    """Class size n!/z_mu and support n - (number of fixed points)."""
    z = 1
    for part, count in mu.multiplicities().items():
        z *= part ** count * math.factorial(count)
    return ClassSpec(mu, math.factorial(mu.n) // z, mu.n - mu.multiplicities().get(1, 0))


def conjugacy_classes(n: int) -> List[ClassSpec]:
    return [class_spec(mu) for mu in partitions(n)]


def class_of(p: Permutation) -> ClassSpec:
    return class_spec(Partition(cycle_type(p).parts))


@dataclass(frozen=True)
class CharacterValue:
    value: int
    partition: Partition
    cls: ClassSpec


@functools.lru_cache(maxsize=None)
def _murnaghan_nakayama(lam: Tuple[int, ...], mu: Tuple[int, ...]) -> int:
    """Rim-hook recursion on beta-sets: a hook of length r moves one bead from b to b - r."""
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    k = len(lam)
    beta = [lam[i] + k - 1 - i for i in range(k)]
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in occupied:
            continue
        sign = -1 if sum(1 for c in beta if target < c < b) % 2 else 1
        moved = sorted((occupied - {b}) | {target}, reverse=True)
        shape = tuple(x for x in (moved[i] - (k - 1 - i) for i in range(k)) if x > 0)
        total += sign * _murnaghan_nakayama(shape, rest)
    return total


def character(lam: Partition, cls: ClassSpec) -> CharacterValue:
    """Exact chi_lambda on a class."""
    if lam.n != cls.n:
        raise ValueError(f"Partition of {lam.n} does not match a class of Sym({cls.n})")
    return CharacterValue(_murnaghan_nakayama(lam.parts, cls.cycle_type.parts), lam, cls)


def normalized_character(lam: Partition, cls: ClassSpec) -> Fraction:
    """chi_lambda(B) / dim(lambda) as an exact rational."""
    return Fraction(character(lam, cls).value, dimension(lam))


@dataclass
class CharacterTable:
    """Exact table: rows are partitions, columns are cycle types."""
    n: int
    partitions: List[Partition]
    classes: List[ClassSpec]
    values: List[List[int]]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["lambda"] + [str(c.cycle_type) for c in self.classes])
        for lam, row in zip(self.partitions, self.values):
            writer.writerow([str(lam)] + row)
        return buffer.getvalue()


def character_table(n: int) -> CharacterTable:
    parts = partitions(n)
    classes = [class_spec(mu) for mu in parts]
    values = [[character(lam, cls).value for cls in classes] for lam in parts]
    return CharacterTable(n, parts, classes, values)


# ---------------------------------------------------------------------------
# Decay-bound scan
# ---------------------------------------------------------------------------

@dataclass
class BoundViolation:
    partition: str
    cycle_type: str
    support: int
    normalized: float
    bound: float


@dataclass
class RoichmanReport:
    """
    Scan of |normalized chi| <= base^(c * support) over a character table.

    fitted_c is the largest c for which the scan passes at this q (None when no pair constrains c).
    It is fitted on this table, not a universal constant.
    """
    n: int
    c: float
    q: float
    lambda1_cap: int
    support_floor: int
    one_sided: bool
    checked: int
    passes: bool
    violations: List[BoundViolation] = field(default_factory=list)
    fitted_c: Optional[float] = None
    fitted_label: str = "artifact-fitted"

    def to_dict(self) -> Dict[str, Any]:
        return dict(asdict(self), schema_version=SCHEMA_VERSION)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def default_lambda1_cap(n: int) -> int:
    """First-row cutoff n - ceil(n^(1/4))."""
    return n - math.ceil(n ** 0.25)


def _decay_base(lam: Partition, q: float, one_sided: bool) -> float:
    base = max(lam.first / lam.n, q)
    if not one_sided:
        base = max(base, lam.conjugate().first / lam.n)
    return base


def roichman_bound_scan(n: int, c: float, q: float, lambda1_cap: Optional[int] = None,
                        support_floor: Optional[int] = None, one_sided: bool = False) -> RoichmanReport:
    """
    Check |chi_lambda(B)/dim| <= max(lambda_1/n, lambda'_1/n, q)^(c * supp B) for every
    lambda with lambda_1 <= lambda1_cap and every class with support >= support_floor.

    Args:
        n: degree, at most 14
        c: exponent constant (> 0)
        q: base floor in (0, 1)
        lambda1_cap: first-row cap, default n - ceil(n^(1/4))
        support_floor: smallest class support scanned, default 0
        one_sided: use max(lambda_1/n, q) only

    Returns:
        RoichmanReport; `fitted_c` is the largest c the scan passes with, or None when no pair
        constrains it. Raising support_floor drops pairs, so fitted_c is non-decreasing in it:
        small-support classes are the binding ones.
    """
    if not 1 <= n <= MAX_SCAN_N:
        raise ValueError(f"Scans are limited to n <= {MAX_SCAN_N}, got {n}")
    if c <= 0 or not 0 < q < 1:
        raise ValueError(f"Need c > 0 and 0 < q < 1, got c={c}, q={q}")
    cap = default_lambda1_cap(n) if lambda1_cap is None else lambda1_cap
    floor = 0 if support_floor is None else support_floor

    classes = [cls for cls in conjugacy_classes(n) if cls.support >= floor]
    checked, violations, fitted = 0, [], math.inf
    for lam in partitions(n):
        if lam.first > cap:
            continue
        base = _decay_base(lam, q, one_sided)
        for cls in classes:
            checked += 1
            value = abs(normalized_character(lam, cls))
            bound = base ** (c * cls.support)
            if float(value) > bound * (1 + 1e-12):
                violations.append(BoundViolation(str(lam), str(cls.cycle_type), cls.support, float(value), bound))
            if cls.support == 0 or value == 0 or base >= 1:
                continue
            fitted = min(fitted, math.log(value) / (cls.support * math.log(base)))
    logger.debug("Scan n=%d: %d pairs, %d violations", n, checked, len(violations))
    return RoichmanReport(n, c, q, cap, floor, one_sided, checked, not violations, violations,
                          None if math.isinf(fitted) else max(fitted, 0.0))


# ---------------------------------------------------------------------------
# Young's orthogonal form
# ---------------------------------------------------------------------------

def standard_tableaux(lam: Partition) -> List[Tuple[int, ...]]:
    """Standard Young tableaux as the row of each entry 0..n-1."""
    rows = lam.parts
    result = []

    def place(entry: int, lengths: List[int], path: List[int]):
        if entry == lam.n:
            result.append(tuple(path))
            return
        for j, row in enumerate(rows):
            if lengths[j] < row and (j == 0 or lengths[j] < lengths[j - 1]):
                lengths[j] += 1
                path.append(j)
                place(entry + 1, lengths, path)
                path.pop()
                lengths[j] -= 1

    place(0, [0] * len(rows), [])
    return result


class YoungOrthogonalForm:
    """
    Explicit orthogonal irreducible representation of Sym(n) on standard tableaux.
    """

    def __init__(self, lam: Partition):
        if lam.n > MAX_EXPLICIT_N + 2:
            raise ValueError(f"Explicit representations are limited to n <= {MAX_EXPLICIT_N + 2}")
        self.partition = lam
        self.tableaux = standard_tableaux(lam)
        self.index = {t: k for k, t in enumerate(self.tableaux)}
        self.dim = len(self.tableaux)
        self._generators = [self._adjacent(k) for k in range(lam.n - 1)]

    def _content(self, tableau: Tuple[int, ...]) -> List[int]:
        filled: Dict[int, int] = {}
        content = []
        for row in tableau:
            col = filled.get(row, 0)
            filled[row] = col + 1
            content.append(col - row)
        return content

    def _adjacent(self, k: int) -> np.ndarray:
        """Matrix of the transposition (k k+1)."""
        matrix = np.zeros((self.dim, self.dim))
        for a, tableau in enumerate(self.tableaux):
            content = self._content(tableau)
            r = content[k + 1] - content[k]
            matrix[a, a] = 1.0 / r
            swapped = list(tableau)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            b = self.index.get(tuple(swapped))
            if b is not None:
                matrix[a, b] = math.sqrt(1.0 - 1.0 / r ** 2)
        return matrix

    def matrix(self, p: Permutation) -> np.ndarray:
        """rho(p) from a bubble-sort factorization into adjacent transpositions."""
        if p.degree != self.partition.n:
            raise ValueError(f"Degree {p.degree} does not match partition of {self.partition.n}")
        arr = p.images.astype(np.int64).tolist()
        result = np.eye(self.dim)
        for i in range(len(arr)):
            for j in range(len(arr) - 1 - i):
                if arr[j] > arr[j + 1]:
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
                    result = self._generators[j] @ result
        return result

    def trace(self, p: Permutation) -> float:
        return float(np.trace(self.matrix(p)))


def class_members(cls: ClassSpec) -> List[Permutation]:
    """Every permutation with the class's cycle type (small n only)."""
    n = cls.n
    if n > MAX_EXPLICIT_N + 2:
        raise ValueError(f"Class enumeration is limited to n <= {MAX_EXPLICIT_N + 2}")
    members = []
    for images in itertools.permutations(range(n)):
        p = Permutation(images)
        if cycle_type(p).parts == cls.cycle_type.parts:
            members.append(p)
    return members


def averaging_scalar_check(n: int, lam: Partition, cls: ClassSpec) -> float:
    """
    Spectral norm of (1/|B|) sum over g in B of rho(g), minus chi_bar(B) * I.

    Raises:
        ValueError: if n > 6 or the partition and class disagree with n
    """
    if n > MAX_EXPLICIT_N:
        raise ValueError(f"Class averaging is limited to n <= {MAX_EXPLICIT_N}, got {n}")
    if lam.n != n or cls.n != n:
        raise ValueError("Partition and class must both be of degree n")
    rep = YoungOrthogonalForm(lam)
    members = class_members(cls)
    average = sum(rep.matrix(p) for p in members) / len(members)
    scalar = float(normalized_character(lam, cls))
    return float(np.linalg.norm(average - scalar * np.eye(rep.dim), 2))


# Example usage
if __name__ == "__main__":
    print("=== Testing Characters ===\n")
    table = character_table(5)
    print(table.to_csv())
    report = roichman_bound_scan(8, c=0.05, q=0.9)
    print(f"n=8 scan: {report.checked} pairs, passes={report.passes}, fitted c={report.fitted_c}")
    lam = Partition((2, 2))
    print(f"Averaging residual [2,2] on class 2+2: "
          f"{averaging_scalar_check(4, lam, class_spec(Partition((2, 2)))):.2e}")
    print("\n=== Test Complete ===")
