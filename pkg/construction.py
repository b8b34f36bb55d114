"""
Construction Module
Assembles the generating families: the cube arrangement of N = K^d points, the d axis
embeddings, the power-group generating set S~ of H^M, the family F_N, the abelian sets Gamma_i
and their union C, the padding to arbitrary degree n and the Sym(n) variant.
"""

import functools
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from algebra import (FieldSpec, PointEnumeration, SLMatrix, base_generating_set, enumerate_points,
                     field_spec, k_cycle_element, perm_from_matrix, projective_kernel_size,
                     random_sl_matrix, sl_order)
from experiment_config import (SCHEMA_VERSION, BaseStyle, BudgetExceededError, CertificationError,
                               ExperimentConfig, FamilyKind, HKind)
from group_engine import alternating_order, build_bsgs, make_rng
from perm_core import (Parity, Permutation, PermutationError, format_cycles, parity,
                       parse_permutation, shift)

logger = logging.getLogger(__name__)

# Quantities of the original large-scale construction, carried as metadata only
SCALE_CONSTANTS: Dict[str, Any] = {
    "cube_dimension": 6,
    "H_series": "SL_{3s}(F_2), K = 2^{3s} - 1",
    "kazhdan_H_S": 1 / 400,
    "kazhdan_power_set": 1 / 500,
    "power_set_size": 40,
    "kazhdan_F_N": 1e-6,
    "kazhdan_F_n": 1e-15,
    "kazhdan_involution_set": 1e-8,
    "involution_set_size": 10,
    "padding_ratio_max": 10 ** 6,
    "transitivity_power": 440,
    "delta_power_eigenvalue_bound": 0.5,
}

# Power-set certificates by BSGS are attempted up to this many copies
BSGS_COPY_LIMIT = 20


@dataclass(frozen=True)
class CubeIndex:
    """
    Bijection {0..K^d - 1} <-> d-tuples over {0..K-1}: index = sum x_k K^k.
    """
    K: int
    d: int

    @property
    def size(self) -> int:
        return self.K ** self.d

    @property
    def copies(self) -> int:
        """Number of fibers along one axis, K^(d-1)."""
        return self.K ** (self.d - 1)

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != self.d or any(not 0 <= x < self.K for x in coords):
            raise PermutationError(f"Bad cube coordinates {tuple(coords)} for K={self.K}, d={self.d}")
        return sum(int(x) * self.K ** k for k, x in enumerate(coords))

    def coords(self, index: int) -> Tuple[int, ...]:
        if not 0 <= index < self.size:
            raise PermutationError(f"Cube index {index} out of range")
        return tuple((index // self.K ** k) % self.K for k in range(self.d))

    def copy_index(self, copy: Sequence[int]) -> int:
        """Lexicographic index of the (d-1) coordinates off the axis."""
        if len(copy) != self.d - 1 or any(not 0 <= x < self.K for x in copy):
            raise PermutationError(f"Bad copy tuple {tuple(copy)} for K={self.K}, d={self.d}")
        return sum(int(x) * self.K ** k for k, x in enumerate(copy))

    def fibers(self, axis: int) -> np.ndarray:
        """(copies x K) array: row c lists the points of fiber c ordered by the axis coordinate."""
        if not 0 <= axis < self.d:
            raise PermutationError(f"Axis {axis} out of range for d={self.d}")
        return _fibers(self.K, self.d, axis)


_FIBER_CACHE: Dict[Tuple[int, int, int], np.ndarray] = {}


def _fibers(K: int, d: int, axis: int) -> np.ndarray:
    key = (K, d, axis)
    if key not in _FIBER_CACHE:
        idx = np.arange(K ** d, dtype=np.int64)
        coords = np.stack([(idx // K ** k) % K for k in range(d)], axis=1)
        others = [k for k in range(d) if k != axis]
        copy = sum(coords[:, k] * K ** rank for rank, k in enumerate(others)) if others else np.zeros_like(idx)
        table = np.empty((K ** (d - 1), K), dtype=np.int64)
        table[copy, coords[:, axis]] = idx
        table.setflags(write=False)
        _FIBER_CACHE[key] = table
    return _FIBER_CACHE[key]


def cube_enumeration(K: int, d: int, budget: int = 20_000) -> CubeIndex:
    """
    Cube of side K in dimension d.

    Raises:
        BudgetExceededError: if K^d exceeds the point budget
    """
    if K < 2 or d < 1:
        raise PermutationError(f"Need K >= 2 and d >= 1, got K={K}, d={d}")
    if K ** d > budget:
        raise BudgetExceededError(f"Cube K={K}, d={d} has {K ** d} points, over the budget of {budget}")
    return CubeIndex(K, d)


def embed_tuple(local_images: np.ndarray, axis: int, cube: CubeIndex) -> Permutation:
    """
    Element acting on every fiber of `axis`: row c of local_images (copies x K) is the local
    permutation used on fiber c.
    """
    fibers = cube.fibers(axis)
    if local_images.shape != fibers.shape:
        raise PermutationError(f"Local images of shape {local_images.shape}, expected {fibers.shape}")
    images = np.arange(cube.size, dtype=np.int64)
    images[fibers] = np.take_along_axis(fibers, local_images.astype(np.int64), axis=1)
    return Permutation._trusted(images)


def embed_axis(h: Union[SLMatrix, Permutation], copy: Sequence[int], axis: int, cube: CubeIndex,
               enumeration: Optional[PointEnumeration] = None) -> Permutation:
    """
    Act by h on the single fiber where all coordinates but `axis` equal `copy`.

    Args:
        h: local permutation of degree K, or a matrix together with its point enumeration
        copy: the (d-1) fixed coordinates, in axis order with `axis` skipped
        axis: moving coordinate
        cube: cube arrangement
        enumeration: required when h is a matrix
    """
    if isinstance(h, SLMatrix):
        if enumeration is None:
            raise PermutationError("Embedding a matrix needs its point enumeration")
        h = perm_from_matrix(h, enumeration)
    if h.degree != cube.K:
        raise PermutationError(f"Local degree {h.degree} differs from K={cube.K}")
    local = np.tile(np.arange(cube.K, dtype=np.int64), (cube.copies, 1))
    local[cube.copy_index(copy)] = h.images
    return embed_tuple(local, axis, cube)


def restrict_to_fiber(p: Permutation, axis: int, copy_index: int, cube: CubeIndex) -> Permutation:
    """Local permutation induced on one fiber (which p must preserve)."""
    fiber = cube.fibers(axis)[copy_index]
    position = np.full(cube.size, -1, dtype=np.int64)
    position[fiber] = np.arange(cube.K)
    local = position[p.images[fiber]]
    if (local < 0).any():
        raise PermutationError(f"Element does not preserve fiber {copy_index} of axis {axis}")
    return Permutation(local)


# ---------------------------------------------------------------------------
# Power generating set
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Twist:
    """Automorphism x -> g^-1 phi(x) g of H, phi the identity or transpose-inverse."""
    conjugator: SLMatrix
    transpose_inverse: bool

    @functools.cached_property
    def _conjugator_inverse(self) -> SLMatrix:
        return self.conjugator.inverse()

    def apply(self, x: SLMatrix) -> SLMatrix:
        y = x.transpose().inverse() if self.transpose_inverse else x
        return self._conjugator_inverse @ y @ self.conjugator

    def invert(self, y: SLMatrix) -> SLMatrix:
        x = self.conjugator @ y @ self._conjugator_inverse
        return x.transpose().inverse() if self.transpose_inverse else x


@dataclass
class PowerGenSet:
    """Generating set of H^M: each element is an M-tuple of matrices."""
    spec: FieldSpec
    enumeration: PointEnumeration
    base_set: List[SLMatrix]
    M: int
    elements: List[Tuple[SLMatrix, ...]]
    labels: List[str]
    twists: List[Twist]
    h_order: int
    hall_checked: bool = False
    bsgs_order: Optional[int] = None
    _local_cache: Dict[SLMatrix, np.ndarray] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def local_images(self, k: int) -> np.ndarray:
        """(M x K) local image rows of element k."""
        rows = []
        for x in self.elements[k]:
            if x not in self._local_cache:
                self._local_cache[x] = perm_from_matrix(x, self.enumeration).images.astype(np.int64)
            rows.append(self._local_cache[x])
        return np.stack(rows)

    def product_action(self) -> List[Permutation]:
        """Elements as permutations of M disjoint blocks of K points."""
        K = self.enumeration.size
        offsets = (np.arange(self.M, dtype=np.int64) * K)[:, None]
        return [Permutation._trusted((self.local_images(k) + offsets).ravel()) for k in range(len(self))]


def is_simple_sl(spec: FieldSpec, dim: int) -> bool:
    """SL_dim(F_q) is simple exactly when it has no scalars and is not SL_2(2), SL_2(3)."""
    return math.gcd(dim, spec.q - 1) == 1 and (dim, spec.q) not in ((2, 2), (2, 3))


def _hall_conflicts(twists: List[Twist], a: List[SLMatrix], b: List[SLMatrix], j: int) -> bool:
    """True if copy j is automorphism-equivalent to an earlier copy."""
    for i in range(j):
        # the automorphism matching the diagonal part is forced to be twist_j o twist_i^-1
        if twists[j].apply(twists[i].invert(a[i])) == a[j] and twists[j].apply(twists[i].invert(b[i])) == b[j]:
            return True
    return False


def power_generating_set(S: Sequence[SLMatrix], enumeration: PointEnumeration, M: int,
                         seed: int = 1, certify: bool = True,
                         involutions: bool = False) -> PowerGenSet:
    """
    Twisted-diagonal generating set of H^M with two separators.

    Each s in S is placed on all M copies twisted by a per-copy automorphism; two separator
    elements carry independent random entries per copy, resampled until no two copies are
    automorphism-equivalent. With involutions the separators are random conjugates of S[0].

    Args:
        S: generating set of H (matrices acting on `enumeration`)
        enumeration: points H acts on
        M: number of copies
        seed: twist and separator sampling seed
        certify: run the Hall criterion and, for M <= 20, the BSGS order certificate
        involutions: draw separators among involutions

    Raises:
        CertificationError: if a certificate fails
    """
    if M < 1:
        raise CertificationError(f"Number of copies must be >= 1, got {M}")
    spec, dim = enumeration.spec, enumeration.dim
    h_order = sl_order(spec.q, dim)
    if enumeration.kind == HKind.PROJECTIVE_PLANE:
        h_order //= projective_kernel_size(spec, dim)
    identity = SLMatrix.identity(spec, dim)

    if M == 1:
        pgs = PowerGenSet(spec, enumeration, list(S), 1, [(s,) for s in S],
                          [f"s{k}" for k in range(len(S))], [Twist(identity, False)], h_order)
    else:
        rng = make_rng(seed, stream=1)
        twists = [Twist(identity, False)]
        for _ in range(1, M):
            twists.append(Twist(random_sl_matrix(spec, dim, rng), bool(rng.integers(2)) and dim >= 3))

        def separator_entry() -> SLMatrix:
            if involutions:
                g = random_sl_matrix(spec, dim, rng)
                return g.inverse() @ S[0] @ g
            return random_sl_matrix(spec, dim, rng)

        a, b = [], []
        for j in range(M):
            a.append(separator_entry())
            b.append(separator_entry())
            while _hall_conflicts(twists, a, b, j):
                a[j], b[j] = separator_entry(), separator_entry()

        elements = [tuple(tw.apply(s) for tw in twists) for s in S]
        elements += [tuple(a), tuple(b)]
        labels = [f"s{k}" for k in range(len(S))] + ["separator-a", "separator-b"]
        pgs = PowerGenSet(spec, enumeration, list(S), M, elements, labels, twists, h_order)

    if len(pgs) > SCALE_CONSTANTS["power_set_size"]:
        raise CertificationError(f"Power set has {len(pgs)} elements, over {SCALE_CONSTANTS['power_set_size']}")
    if certify:
        certify_power_set(pgs)
    return pgs


def certify_power_set(pgs: PowerGenSet, seed: int = 0) -> PowerGenSet:
    """
    Hall criterion (simple H) and, for M <= 20, BSGS order |H|^M on the product action.

    Raises:
        CertificationError: on failure
    """
    if is_simple_sl(pgs.spec, pgs.enumeration.dim):
        # projection j contains twist_j(S), so every projection generates once S does
        base_perms = [perm_from_matrix(s, pgs.enumeration) for s in pgs.base_set]
        if build_bsgs(base_perms, seed=seed, order_bound=pgs.h_order).order != pgs.h_order:
            raise CertificationError(f"Base set does not generate H on {pgs.enumeration.size} points")
        if pgs.M > 1:
            a, b = list(pgs.elements[-2]), list(pgs.elements[-1])
            for j in range(1, pgs.M):
                if _hall_conflicts(pgs.twists, a, b, j):
                    raise CertificationError(f"Copy {j} is automorphism-equivalent to an earlier copy")
        pgs.hall_checked = True
    else:
        logger.warning("H is not simple; the Hall criterion does not apply, relying on BSGS only")
    if pgs.M <= BSGS_COPY_LIMIT:
        expected = pgs.h_order ** pgs.M
        got = build_bsgs(pgs.product_action(), seed=seed, order_bound=expected).order
        if got != expected:
            raise CertificationError(f"Power set generates a group of order {got}, expected {expected}")
        pgs.bsgs_order = got
    elif not pgs.hall_checked:
        raise CertificationError(f"No certificate available for M={pgs.M} copies of a non-simple H")
    logger.debug("Power set certified: M=%d, %d elements", pgs.M, len(pgs))
    return pgs


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

@dataclass
class FamilyLabel:
    """Provenance of one family element."""
    source: str
    axis: Optional[int] = None
    copies: str = "all"
    window: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class GeneratingFamily:
    """Labeled generating set of permutations of one degree."""
    kind: FamilyKind
    degree: int
    elements: List[Permutation]
    labels: List[FamilyLabel]
    params: Dict[str, Any] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=lambda: dict(SCALE_CONSTANTS))

    def __post_init__(self):
        if len(self.elements) != len(self.labels):
            raise PermutationError("Every family element needs exactly one label")
        for p in self.elements:
            if p.degree != self.degree:
                raise PermutationError(f"Element of degree {p.degree} in a family of degree {self.degree}")

    def __len__(self) -> int:
        return len(self.elements)

    def label_strings(self) -> List[str]:
        """Short labels such as "T0@axis1" for graphs and exports."""
        return [label.source if label.axis is None else f"{label.source}@axis{label.axis}"
                for label in self.labels]

    def without(self, index: int) -> "GeneratingFamily":
        """Copy with one element removed."""
        keep = [k for k in range(len(self)) if k != index]
        return GeneratingFamily(self.kind, self.degree, [self.elements[k] for k in keep],
                                [self.labels[k] for k in keep], dict(self.params), dict(self.metadata))

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind.value,
            "degree": self.degree,
            "params": self.params,
            "elements": [format_cycles(p) for p in self.elements],
            "labels": [label.to_dict() for label in self.labels],
            "metadata": self.metadata,
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "GeneratingFamily":
        doc = json.loads(text)
        degree = int(doc["degree"])
        return cls(FamilyKind(doc["kind"]), degree,
                   [parse_permutation(s, degree) for s in doc["elements"]],
                   [FamilyLabel(**label) for label in doc["labels"]],
                   doc.get("params", {}), doc.get("metadata", {}))


def build_F_N(cube: CubeIndex, pgs: PowerGenSet) -> GeneratingFamily:
    """
    F_N: the images of S~ under the d axis embeddings.

    Raises:
        CertificationError: on inconsistent sizes or an odd element
    """
    if pgs.enumeration.size != cube.K or pgs.M != cube.copies:
        raise CertificationError(f"Power set for K={pgs.enumeration.size}, M={pgs.M} does not fit "
                                 f"the cube K={cube.K}, d={cube.d}")
    elements, labels = [], []
    for axis in range(cube.d):
        for k, label in enumerate(pgs.labels):
            p = embed_tuple(pgs.local_images(k), axis, cube)
            if parity(p) != Parity.EVEN:
                raise CertificationError(f"Element {label} on axis {axis} is odd")
            elements.append(p)
            labels.append(FamilyLabel(source=label, axis=axis))
    return GeneratingFamily(FamilyKind.F_N, cube.size, elements, labels)


def cycle_powers(cycle: Permutation) -> np.ndarray:
    """(K x K) table: row e holds the images of cycle^e."""
    rows = [np.arange(cycle.degree, dtype=np.int64)]
    for _ in range(1, cycle.degree):
        rows.append(cycle.images.astype(np.int64)[rows[-1]])
    return np.stack(rows)


def abelian_family(cube: CubeIndex, axis: int, exponents: Union[Sequence[int], Dict[int, int]],
                   cycle: Permutation) -> Permutation:
    """
    Element of Gamma_axis: the K-cycle raised to exponents[c] on fiber c.

    Args:
        exponents: per copy index (sequence of length K^(d-1), or a total map copy -> exponent)
        cycle: local K-cycle
    """
    if isinstance(exponents, dict):
        if set(exponents) != set(range(cube.copies)):
            raise PermutationError("Exponent map must be total on the copies")
        exponents = [exponents[c] for c in range(cube.copies)]
    exps = np.asarray(exponents, dtype=np.int64) % cube.K
    if exps.shape != (cube.copies,):
        raise PermutationError(f"Expected {cube.copies} exponents, got {exps.shape}")
    return embed_tuple(cycle_powers(cycle)[exps], axis, cube)


def enumerate_C_sample(count: int, rng: np.random.Generator, cube: CubeIndex,
                       cycle: Permutation) -> Tuple[List[Permutation], List[FamilyLabel]]:
    """Uniform axis and uniform exponent vector per sample."""
    powers = cycle_powers(cycle)
    elements, labels = [], []
    for _ in range(count):
        axis = int(rng.integers(cube.d))
        exps = rng.integers(0, cube.K, size=cube.copies)
        elements.append(embed_tuple(powers[exps], axis, cube))
        labels.append(FamilyLabel(source="gamma", axis=axis, copies="random-exponents"))
    return elements, labels


def padding_windows(n: int, n_s: int) -> List[int]:
    """Window offsets: overlap max(5, n_s // 2), step n_s - overlap, last window right-aligned."""
    if n < n_s:
        raise PermutationError(f"Cannot pad degree {n_s} down to {n}")
    step = n_s - max(5, n_s // 2)
    offsets = [0]
    while offsets[-1] + n_s < n:
        offsets.append(min(offsets[-1] + step, n - n_s))
    return offsets


def pad_to_all_n(n: int, base: GeneratingFamily) -> GeneratingFamily:
    """
    F_n: shifted copies of the base family on overlapping windows covering {0..n-1}.

    Raises:
        PermutationError: if n < n_s or n_s < 7
    """
    n_s = base.degree
    if n_s < 7:
        raise PermutationError(f"Base degree {n_s} is below 7")
    offsets = padding_windows(n, n_s)
    elements, labels = [], []
    for t in offsets:
        for p, label in zip(base.elements, base.labels):
            elements.append(shift(p, t, n))
            labels.append(FamilyLabel(label.source, label.axis, label.copies, window=t))
    params = dict(base.params, n=n, n_s=n_s, windows=offsets)
    logger.debug("Padded degree %d to %d with %d windows", n_s, n, len(offsets))
    return GeneratingFamily(FamilyKind.F_n, n, elements, labels, params, dict(base.metadata))


def odd_involution(n: int, style: str = "transposition") -> Permutation:
    """(0 1), or the product of the largest odd number of disjoint transpositions."""
    if style == "transposition":
        return Permutation.from_cycles([(0, 1)], n)
    pairs = n // 2 if (n // 2) % 2 == 1 else n // 2 - 1
    return Permutation.from_cycles([(2 * k, 2 * k + 1) for k in range(pairs)], n)


def sym_variant(F_n: GeneratingFamily, odd_element: str = "transposition", certify: bool = True,
                seed: int = 0) -> GeneratingFamily:
    """
    F~_n = F_n plus one labeled odd involution.

    Raises:
        CertificationError: if F_n is checked and does not generate Alt(n)
    """
    n = F_n.degree
    if certify:
        if any(parity(p) != Parity.EVEN for p in F_n.elements):
            raise CertificationError("Input family has odd elements")
        bsgs = build_bsgs(F_n.elements, seed=seed, order_bound=alternating_order(n))
        if bsgs.order != alternating_order(n):
            raise CertificationError(f"Input family generates order {bsgs.order}, not Alt({n})")
    extra = odd_involution(n, odd_element)
    elements = list(F_n.elements) + [extra]
    labels = list(F_n.labels) + [FamilyLabel(source=f"odd-{odd_element}", copies="none")]
    params = dict(F_n.params, odd_element=odd_element)
    return GeneratingFamily(FamilyKind.SYM_F_n, n, elements, labels, params, dict(F_n.metadata))


class CubeConstruction:
    """
    Builds every family of one experiment from its config.
    """

    def __init__(self, config: ExperimentConfig):
        """
        Initialize the construction.

        Args:
            config: validated experiment config (field, H kind, cube shape, seeds, budgets)
        """
        self.config = config
        self.spec = field_spec(config.field_p, config.field_m, config.modulus)
        self.enumeration = enumerate_points(self.spec, config.m_mat, config.h_kind)
        self.cube = cube_enumeration(self.enumeration.size, config.d, config.cube_point_budget)
        self.base_set = base_generating_set(self.spec, config.m_mat, config.base_style)
        self._power_set: Optional[PowerGenSet] = None
        self._cycle: Optional[Permutation] = None

    @property
    def params(self) -> Dict[str, Any]:
        return {
            "K": self.cube.K,
            "d": self.cube.d,
            "field": {"p": self.spec.p, "m": self.spec.m},
            "modulus": list(self.spec.modulus),
            "m_mat": self.enumeration.dim,
            "h_kind": self.enumeration.kind.value,
            "base_style": self.config.base_style.value,
            "construction_seed": self.config.construction_seed,
        }

    @property
    def power_set(self) -> PowerGenSet:
        if self._power_set is None:
            self._power_set = power_generating_set(
                self.base_set, self.enumeration, self.cube.copies, seed=self.config.construction_seed,
                certify=self.cube.copies <= BSGS_COPY_LIMIT or is_simple_sl(self.spec, self.enumeration.dim),
                involutions=self.config.base_style == BaseStyle.INVOLUTION)
        return self._power_set

    @property
    def cycle(self) -> Permutation:
        """Local K-cycle from the Singer element."""
        if self._cycle is None:
            self._cycle = perm_from_matrix(k_cycle_element(self.spec, self.enumeration), self.enumeration)
        return self._cycle

    def build_F_N(self) -> GeneratingFamily:
        family = build_F_N(self.cube, self.power_set)
        family.params = self.params
        return family

    def abelian_family(self, axis: int, exponents) -> Permutation:
        return abelian_family(self.cube, axis, exponents, self.cycle)

    def gamma_family(self) -> GeneratingFamily:
        """One generator per axis: the K-cycle on every fiber."""
        ones = [1] * self.cube.copies
        elements = [self.abelian_family(axis, ones) for axis in range(self.cube.d)]
        labels = [FamilyLabel(source="gamma-ones", axis=axis) for axis in range(self.cube.d)]
        return GeneratingFamily(FamilyKind.GAMMA, self.cube.size, elements, labels, self.params)

    def c_family(self, count: int, seed: int) -> GeneratingFamily:
        elements, labels = enumerate_C_sample(count, make_rng(seed, stream=2), self.cube, self.cycle)
        params = dict(self.params, c_sample_count=count, c_sample_seed=seed)
        return GeneratingFamily(FamilyKind.C, self.cube.size, elements, labels, params)

    def family(self) -> GeneratingFamily:
        """The family named by config.family_kind."""
        kind = self.config.family_kind
        if kind == FamilyKind.C:
            return self.c_family(self.config.c_sample_count, self.config.seed)
        if kind == FamilyKind.GAMMA:
            return self.gamma_family()
        F_N = self.build_F_N()
        if kind == FamilyKind.F_N:
            return F_N
        n = self.config.n_target if self.config.n_target is not None else F_N.degree
        F_n = pad_to_all_n(n, F_N)
        if kind == FamilyKind.F_n:
            return F_n
        return sym_variant(F_n, self.config.odd_element, certify=n <= 60, seed=self.config.seed)


# Example usage
if __name__ == "__main__":
    print("=== Testing Construction ===\n")
    construction = CubeConstruction(ExperimentConfig(d=2))
    F_N = construction.build_F_N()
    print(f"K={construction.cube.K}, d={construction.cube.d}: |S~| = {len(construction.power_set)}, "
          f"|F_N| = {len(F_N)} on {F_N.degree} points")
    print(f"Windows for n=90 from n_s=49: {padding_windows(90, 49)}")
    print("\n=== Test Complete ===")
