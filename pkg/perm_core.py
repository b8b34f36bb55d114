"""
Permutation Core Module
Exact permutation arithmetic, cycle notation and the invariants every group action is built on.

Convention: compose(p, q) applies p first and then q, i.e. result(x) = q(p(x)).
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class PermutationError(ValueError):
    """Raised for malformed permutations, degree mismatches and bad tuples."""


class Parity(Enum):
    """Parity of a permutation."""
    EVEN = "even"
    ODD = "odd"


def point_dtype(degree: int) -> np.dtype:
    """Smallest index dtype able to hold the points 0..degree-1."""
    return np.dtype(np.uint16) if degree <= np.iinfo(np.uint16).max else np.dtype(np.int64)


class Permutation:
    """
    Immutable permutation of {0..n-1} stored as a dense image array.
    """

    __slots__ = ("_images",)

    def __init__(self, images: Sequence[int]):
        """
        Create a permutation from its one-line image sequence.

        Args:
            images: images[x] is the image of point x; must hit every point exactly once

        Raises:
            PermutationError: if images is empty or not a bijection on {0..n-1}
        """
        raw = np.asarray(images)
        if raw.ndim != 1 or raw.size == 0:
            raise PermutationError("A permutation needs a non-empty one-dimensional image list")
        if raw.dtype.kind not in "iu":
            raise PermutationError(f"Images must be integers, got dtype {raw.dtype}")
        n = raw.size
        if raw.min() < 0 or raw.max() >= n:
            raise PermutationError(f"Images must lie in 0..{n - 1}")
        arr = raw.astype(point_dtype(n))
        if not np.array_equal(np.sort(arr), np.arange(n, dtype=arr.dtype)):
            raise PermutationError("Images are not a bijection (some point is hit twice)")
        arr.setflags(write=False)
        self._images = arr

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> "Permutation":
        """Wrap a freshly built array already known to be a bijection (no validation)."""
        p = cls.__new__(cls)
        arr = arr.astype(point_dtype(arr.size), copy=False)
        arr.setflags(write=False)
        p._images = arr
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        """Identity permutation of the given degree."""
        if degree < 1:
            raise PermutationError(f"Degree must be >= 1, got {degree}")
        return cls._trusted(np.arange(degree, dtype=point_dtype(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """
        Build a permutation from disjoint cycles.

        Args:
            cycles: iterable of cycles, each a sequence of distinct points
            degree: number of points acted on

        Returns:
            The permutation sending each cycle entry to the next one
        """
        images = np.arange(degree, dtype=np.int64)
        seen = set()
        for cycle in cycles:
            cycle = [int(x) for x in cycle]
            for x in cycle:
                if x < 0 or x >= degree:
                    raise PermutationError(f"Point {x} out of range for degree {degree}")
                if x in seen:
                    raise PermutationError(f"Point {x} appears in more than one cycle")
                seen.add(x)
            for i, x in enumerate(cycle):
                images[x] = cycle[(i + 1) % len(cycle)]
        return cls(images)

    @property
    def degree(self) -> int:
        return int(self._images.size)

    @property
    def images(self) -> np.ndarray:
        """Read-only image array."""
        return self._images

    def __call__(self, x: int) -> int:
        return int(self._images[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.degree == other.degree and np.array_equal(self._images, other._images)

    def __hash__(self) -> int:
        return hash((self.degree, self._images.tobytes()))

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)}, degree={self.degree})"

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._images, np.arange(self.degree)))

    def to_cycles(self) -> List[Tuple[int, ...]]:
        """
        Nontrivial cycles, each starting at its smallest point, ordered by that point.
        """
        images = self._images.tolist()
        seen = [False] * len(images)
        cycles = []
        for start in range(len(images)):
            if seen[start] or images[start] == start:
                seen[start] = True
                continue
            cycle = [start]
            seen[start] = True
            x = images[start]
            while x != start:
                cycle.append(x)
                seen[x] = True
                x = images[x]
            cycles.append(tuple(cycle))
        return cycles


@dataclass(frozen=True)
class CycleType:
    """Cycle type of a permutation, fixed points included as parts of size 1."""
    parts: Tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise PermutationError(f"Cycle type parts must be positive: {self.parts}")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise PermutationError(f"Cycle type parts must be weakly decreasing: {self.parts}")

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "+".join(str(p) for p in self.parts)


def _check_same_degree(p: Permutation, q: Permutation):
    if p.degree != q.degree:
        raise PermutationError(f"Degree mismatch: {p.degree} vs {q.degree}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """
    Product applying p first, then q.

    Raises:
        PermutationError: on degree mismatch
    """
    _check_same_degree(p, q)
    return Permutation._trusted(q.images[p.images])


def compose_all(perms: Sequence[Permutation], degree: Optional[int] = None) -> Permutation:
    """Left-to-right product of a sequence (identity of `degree` when empty)."""
    if not perms:
        if degree is None:
            raise PermutationError("Empty product needs an explicit degree")
        return Permutation.identity(degree)
    result = perms[0].images
    for q in perms[1:]:
        if q.degree != perms[0].degree:
            raise PermutationError(f"Degree mismatch: {perms[0].degree} vs {q.degree}")
        result = q.images[result]
    return Permutation._trusted(result)


def inverse(p: Permutation) -> Permutation:
    """Inverse permutation."""
    inv = np.empty_like(p.images)
    inv[p.images] = np.arange(p.degree, dtype=inv.dtype)
    return Permutation._trusted(inv)


def power(p: Permutation, k: int) -> Permutation:
    """p applied k times (negative k uses the inverse)."""
    base = p if k >= 0 else inverse(p)
    k = abs(k)
    result = np.arange(p.degree, dtype=p.images.dtype)
    step = base.images
    while k:
        if k & 1:
            result = step[result]
        step = step[step]
        k >>= 1
    return Permutation._trusted(result)


def conjugate(p: Permutation, g: Permutation) -> Permutation:
    """g^-1 p g under the left-to-right convention."""
    return compose(compose(inverse(g), p), g)


def cycle_type(p: Permutation) -> CycleType:
    """Cycle type including fixed points."""
    lengths = [len(c) for c in p.to_cycles()]
    fixed = p.degree - sum(lengths)
    return CycleType(tuple(sorted(lengths, reverse=True)) + (1,) * fixed)


def support(p: Permutation) -> int:
    """Number of non-fixed points."""
    return int(np.count_nonzero(p.images != np.arange(p.degree)))


def parity(p: Permutation) -> Parity:
    """Parity from (-1)^(n - #cycles), fixed points counted as cycles."""
    nontrivial = p.to_cycles()
    moved = sum(len(c) for c in nontrivial)
    # n - #cycles = moved - #nontrivial cycles
    return Parity.EVEN if (moved - len(nontrivial)) % 2 == 0 else Parity.ODD


def order(p: Permutation) -> int:
    """Multiplicative order (lcm of cycle lengths)."""
    result = 1
    for c in p.to_cycles():
        result = np.lcm(result, len(c)).item()
    return int(result)


def act_on_tuple(p: Permutation, t: Sequence[int]) -> Tuple[int, ...]:
    """
    Apply p entrywise to an ordered tuple of distinct points.

    Raises:
        PermutationError: on duplicate or out-of-range entries
    """
    entries = [int(x) for x in t]
    if len(set(entries)) != len(entries):
        raise PermutationError(f"Tuple entries must be distinct: {tuple(entries)}")
    for x in entries:
        if x < 0 or x >= p.degree:
            raise PermutationError(f"Tuple entry {x} out of range for degree {p.degree}")
    return tuple(int(y) for y in p.images[entries]) if entries else ()


def extend_to(p: Permutation, n: int) -> Permutation:
    """Extend p to degree n by fixing the new points."""
    if n < p.degree:
        raise PermutationError(f"Cannot shrink degree {p.degree} to {n}")
    images = np.arange(n, dtype=np.int64)
    images[:p.degree] = p.images
    return Permutation._trusted(images)


def shift(p: Permutation, offset: int, n: int) -> Permutation:
    """Copy of p acting on the window [offset, offset + p.degree) of {0..n-1}."""
    if offset < 0 or offset + p.degree > n:
        raise PermutationError(f"Window [{offset}, {offset + p.degree}) does not fit in {n} points")
    images = np.arange(n, dtype=np.int64)
    images[offset:offset + p.degree] = p.images.astype(np.int64) + offset
    return Permutation._trusted(images)


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

def format_cycles(p: Permutation) -> str:
    """Disjoint-cycle notation with 0-based points, "()" for the identity."""
    cycles = p.to_cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycles)


def format_images(p: Permutation) -> str:
    """One-line form "n: i0 i1 ... i(n-1)"."""
    return f"{p.degree}: " + " ".join(str(x) for x in p.images.tolist())


def parse_permutation(text: str, degree: Optional[int] = None) -> Permutation:
    """
    Parse either cycle notation or the one-line "n: ..." form.

    Args:
        text: "(0 1 2)(4 5)" or "6: 1 2 0 3 5 4"
        degree: required for cycle notation, optional check for one-line form

    Returns:
        Parsed permutation
    """
    text = text.strip()
    if ":" in text:
        head, _, body = text.partition(":")
        n = int(head)
        images = [int(tok) for tok in body.split()]
        if len(images) != n:
            raise PermutationError(f"One-line form declares {n} points but lists {len(images)}")
        if degree is not None and degree != n:
            raise PermutationError(f"Expected degree {degree}, text declares {n}")
        return Permutation(images)
    if degree is None:
        raise PermutationError("Cycle notation needs an explicit degree")
    stripped = _CYCLE_RE.sub("", text)
    if stripped.strip():
        raise PermutationError(f"Unparseable cycle notation: {text!r}")
    cycles = [[int(tok) for tok in body.split()] for body in _CYCLE_RE.findall(text)]
    return Permutation.from_cycles([c for c in cycles if c], degree)


# Example usage
if __name__ == "__main__":
    print("=== Testing Permutation Core ===\n")
    c3 = Permutation.from_cycles([(0, 1, 2)], 3)
    print(f"(0 1 2)^2 = {format_cycles(compose(c3, c3))}")
    swap = parse_permutation("(0 1)(2 3)", 6)
    print(f"{format_cycles(swap)}: type {cycle_type(swap)}, support {support(swap)}, {parity(swap).value}")
    print(f"One-line form: {format_images(swap)}")
    print("\n=== Test Complete ===")
