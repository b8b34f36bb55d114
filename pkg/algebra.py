"""
Algebra Module
Finite fields GF(p^m), SL matrices over them and their permutation actions on points.

Field elements are encoded as integers: the little-endian coefficient vector (c_0, ..., c_{m-1})
of c_0 + c_1 x + ... is stored as sum c_i p^i. Matrices act on row vectors (v -> v M), so the
permutation of a product is the left-to-right composition of the factors' permutations.
"""

import functools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from experiment_config import BaseStyle, CertificationError, HKind
from group_engine import build_bsgs
from perm_core import Permutation, Parity, cycle_type, parity

logger = logging.getLogger(__name__)

# Shipped irreducible moduli, little-endian coefficients, monic
MODULUS_TABLE: Dict[Tuple[int, int], Tuple[int, ...]] = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (5, 1): (0, 1),
    (7, 1): (0, 1),
    (2, 2): (1, 1, 1),           # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),        # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),     # x^4 + x + 1
    (2, 5): (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1
    (2, 6): (1, 1, 0, 0, 0, 0, 1),  # x^6 + x + 1
    (3, 2): (1, 0, 1),           # x^2 + 1
    (3, 3): (1, 2, 0, 1),        # x^3 + 2x + 1
    (5, 2): (2, 0, 1),           # x^2 + 2
    (5, 3): (1, 1, 0, 1),        # x^3 + x + 1
    (7, 2): (1, 0, 1),           # x^2 + 1
}


class FieldError(ValueError):
    """Raised for invalid field parameters, mixed fields and inversion of zero."""


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, math.isqrt(p) + 1))


def _prime_factors(n: int) -> List[int]:
    factors, k = [], 2
    while k * k <= n:
        if n % k == 0:
            factors.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        factors.append(n)
    return factors


# ---------------------------------------------------------------------------
# Polynomials over GF(p), little-endian coefficient lists
# ---------------------------------------------------------------------------

def _poly_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    a = _poly_trim([x % p for x in a])
    b = _poly_trim([x % p for x in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        factor = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for i, coeff in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * coeff) % p
        _poly_trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    """Brute-force factor search: no monic divisor of degree 1..deg/2."""
    m = len(modulus) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    for deg in range(1, m // 2 + 1):
        for code in range(p ** deg):
            divisor = [(code // p ** i) % p for i in range(deg)] + [1]
            if not _poly_mod(modulus, divisor, p):
                return False
    return True


def find_irreducible(p: int, m: int) -> Tuple[int, ...]:
    """First monic irreducible of degree m in code order."""
    for code in range(p ** m):
        candidate = [(code // p ** i) % p for i in range(m)] + [1]
        if candidate[0] != 0 and is_irreducible(p, candidate):
            return tuple(candidate)
    raise FieldError(f"No irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^m) presented as GF(p)[x] / (modulus)."""
    p: int
    m: int
    modulus: Tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def is_prime(self) -> bool:
        return self.m == 1

    def __str__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


def field_spec(p: int, m: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """
    Validated field description; the modulus defaults to the shipped table.

    Raises:
        FieldError: if p is not prime or the modulus is not a monic irreducible of degree m
    """
    if not _is_prime(p):
        raise FieldError(f"Characteristic {p} is not prime")
    if m < 1:
        raise FieldError(f"Extension degree must be >= 1, got {m}")
    if modulus is None:
        modulus = MODULUS_TABLE.get((p, m))
        if modulus is None:
            modulus = find_irreducible(p, m)
            logger.warning("No shipped modulus for GF(%d^%d); using %s", p, m, modulus)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != m + 1 or modulus[-1] != 1:
        raise FieldError(f"Modulus {modulus} must be monic of degree {m}")
    if not is_irreducible(p, modulus):
        raise FieldError(f"Modulus {modulus} is reducible over GF({p})")
    return FieldSpec(p, m, modulus)


class FieldTables:
    """Addition, multiplication, negation and inversion tables of one field."""

    def __init__(self, spec: FieldSpec):
        q, p, m = spec.q, spec.p, spec.m
        digits = np.array([[(code // p ** i) % p for i in range(m)] for code in range(q)], dtype=np.int64)
        weights = p ** np.arange(m, dtype=np.int64)
        self.spec = spec
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        self.mul = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(a, q):
                prod = _poly_mod(_poly_mul(digits[a].tolist(), digits[b].tolist(), p), spec.modulus, p)
                code = sum(c * p ** i for i, c in enumerate(prod))
                self.mul[a, b] = self.mul[b, a] = code
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(self.mul[a] == 1)[0])
        self.sub = self.add[:, self.neg]

    def power(self, a: int, k: int) -> int:
        result = 1
        for _ in range(k):
            result = int(self.mul[result, a])
        return result


@functools.lru_cache(maxsize=None)
def tables(spec: FieldSpec) -> FieldTables:
    return FieldTables(spec)


@dataclass(frozen=True)
class FieldElem:
    """Element of a finite field, stored by its integer code."""
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise FieldError(f"Code {self.value} out of range for {self.spec}")

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return tuple((self.value // self.spec.p ** i) % self.spec.p for i in range(self.spec.m))

    def __add__(self, other: "FieldElem") -> "FieldElem":
        return field_add(self, other)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        _same_field(self, other)
        return FieldElem(self.spec, int(tables(self.spec).sub[self.value, other.value]))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return field_mul(self, other)

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.spec, int(tables(self.spec).neg[self.value]))

    def __str__(self) -> str:
        return "".join(str(c) for c in self.coeffs)


def _same_field(a: FieldElem, b: FieldElem):
    if a.spec != b.spec:
        raise FieldError(f"Mixed fields: {a.spec} vs {b.spec}")


def field_add(a: FieldElem, b: FieldElem) -> FieldElem:
    _same_field(a, b)
    return FieldElem(a.spec, int(tables(a.spec).add[a.value, b.value]))


def field_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    _same_field(a, b)
    return FieldElem(a.spec, int(tables(a.spec).mul[a.value, b.value]))


def field_inv(a: FieldElem) -> FieldElem:
    """Multiplicative inverse; FieldError for zero."""
    if a.value == 0:
        raise FieldError("Zero has no multiplicative inverse")
    return FieldElem(a.spec, int(tables(a.spec).inv[a.value]))


def element_from_coeffs(spec: FieldSpec, coeffs: Sequence[int]) -> FieldElem:
    """Element c_0 + c_1 x + ... from little-endian coefficients."""
    if len(coeffs) > spec.m:
        raise FieldError(f"{len(coeffs)} coefficients for an extension of degree {spec.m}")
    return FieldElem(spec, sum((int(c) % spec.p) * spec.p ** i for i, c in enumerate(coeffs)))


def multiplicative_order(a: FieldElem) -> int:
    if a.value == 0:
        raise FieldError("Zero has no multiplicative order")
    t = tables(a.spec)
    x, k = a.value, 1
    while x != 1:
        x = int(t.mul[x, a.value])
        k += 1
    return k


def primitive_element(spec: FieldSpec) -> FieldElem:
    """
    First element (in code order) of multiplicative order q - 1.

    The order is verified through the prime divisors r of q - 1: a^((q-1)/r) != 1.
    """
    t = tables(spec)
    q = spec.q
    if q == 2:
        return FieldElem(spec, 1)
    divisors = _prime_factors(q - 1)
    for code in range(2, q):
        if all(_fast_pow(t, code, (q - 1) // r) != 1 for r in divisors):
            return FieldElem(spec, code)
    raise FieldError(f"No primitive element found in {spec}")


def _fast_pow(t: FieldTables, a: int, k: int) -> int:
    result, base = 1, a
    while k:
        if k & 1:
            result = int(t.mul[result, base])
        base = int(t.mul[base, base])
        k >>= 1
    return result


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

def mat_mul(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of coded matrices (also rows-of-vectors times matrix)."""
    t = tables(spec)
    terms = t.mul[a[:, :, None], b[None, :, :]]
    acc = terms[:, 0, :]
    for k in range(1, terms.shape[1]):
        acc = t.add[acc, terms[:, k, :]]
    return acc


def _row_reduce(spec: FieldSpec, a: np.ndarray, rhs: Optional[np.ndarray] = None):
    """Gauss-Jordan elimination; returns (determinant code, reduced rhs or None)."""
    t = tables(spec)
    a = a.copy()
    n = a.shape[0]
    rhs = None if rhs is None else rhs.copy()
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r, col] != 0), None)
        if pivot is None:
            return 0, None
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            if rhs is not None:
                rhs[[col, pivot]] = rhs[[pivot, col]]
            det = int(t.neg[det])
        det = int(t.mul[det, a[col, col]])
        scale = t.inv[a[col, col]]
        a[col] = t.mul[scale, a[col]]
        if rhs is not None:
            rhs[col] = t.mul[scale, rhs[col]]
        for r in range(n):
            if r != col and a[r, col] != 0:
                factor = a[r, col]
                a[r] = t.sub[a[r], t.mul[factor, a[col]]]
                if rhs is not None:
                    rhs[r] = t.sub[rhs[r], t.mul[factor, rhs[col]]]
    return det, rhs


def determinant(spec: FieldSpec, a: np.ndarray) -> int:
    det, _ = _row_reduce(spec, a)
    return det


class SLMatrix:
    """
    Determinant-1 matrix over a finite field (entries stored as field codes).
    """

    __slots__ = ("spec", "_array")

    def __init__(self, spec: FieldSpec, entries: Sequence[Sequence[int]]):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise FieldError(f"Matrix must be square, got shape {arr.shape}")
        if arr.min() < 0 or arr.max() >= spec.q:
            raise FieldError(f"Entries must be codes in 0..{spec.q - 1}")
        det = determinant(spec, arr)
        if det != 1:
            raise FieldError(f"Determinant is {det}, not 1")
        arr.setflags(write=False)
        self.spec = spec
        self._array = arr

    @classmethod
    def _trusted(cls, spec: FieldSpec, arr: np.ndarray) -> "SLMatrix":
        m = cls.__new__(cls)
        arr = np.array(arr, dtype=np.int64)
        arr.setflags(write=False)
        m.spec = spec
        m._array = arr
        return m

    @classmethod
    def identity(cls, spec: FieldSpec, dim: int) -> "SLMatrix":
        return cls._trusted(spec, np.eye(dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self._array.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._array

    def entry(self, i: int, j: int) -> FieldElem:
        return FieldElem(self.spec, int(self._array[i, j]))

    def __matmul__(self, other: "SLMatrix") -> "SLMatrix":
        if self.spec != other.spec or self.dim != other.dim:
            raise FieldError("Matrix product needs equal fields and dimensions")
        return SLMatrix._trusted(self.spec, mat_mul(self.spec, self._array, other._array))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SLMatrix):
            return NotImplemented
        return self.spec == other.spec and np.array_equal(self._array, other._array)

    def __hash__(self) -> int:
        return hash((self.spec, self._array.tobytes()))

    def __repr__(self) -> str:
        return f"SLMatrix({self.spec}, {self._array.tolist()})"

    def inverse(self) -> "SLMatrix":
        _, inv = _row_reduce(self.spec, self._array, np.eye(self.dim, dtype=np.int64))
        return SLMatrix._trusted(self.spec, inv)

    def transpose(self) -> "SLMatrix":
        return SLMatrix._trusted(self.spec, self._array.T)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._array, np.eye(self.dim, dtype=np.int64)))


def random_sl_matrix(spec: FieldSpec, dim: int, rng: np.random.Generator) -> SLMatrix:
    """Uniform element of SL_dim(F_q): rejection-sample GL, then rescale the first row."""
    t = tables(spec)
    while True:
        arr = rng.integers(0, spec.q, size=(dim, dim)).astype(np.int64)
        det = determinant(spec, arr)
        if det != 0:
            arr[0] = t.mul[t.inv[det], arr[0]]
            return SLMatrix._trusted(spec, arr)


def sl_order(q: int, dim: int) -> int:
    """|SL_dim(F_q)| = q^(dim(dim-1)/2) prod_{i=2..dim} (q^i - 1)."""
    result = q ** (dim * (dim - 1) // 2)
    for i in range(2, dim + 1):
        result *= q ** i - 1
    return result


# ---------------------------------------------------------------------------
# Point enumerations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointEnumeration:
    """
    Ordered points acted on by SL_dim(F_q).

    points holds one coded representative vector per row; index_of maps the code of every
    nonzero vector (first coordinate most significant, base q) to its point index.
    """
    kind: HKind
    spec: FieldSpec
    dim: int
    points: np.ndarray
    index_of: np.ndarray

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def code(self, vectors: np.ndarray) -> np.ndarray:
        weights = self.spec.q ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        return vectors @ weights


def enumerate_points(spec: FieldSpec, dim: int, kind: HKind = HKind.NONZERO_VECTORS) -> PointEnumeration:
    """
    Nonzero vectors in lexicographic order, or projective points by normalized coordinates
    (first nonzero coordinate 1), also lexicographic.
    """
    q = spec.q
    total = q ** dim
    codes = np.arange(1, total, dtype=np.int64)
    vectors = np.stack([(codes // q ** (dim - 1 - k)) % q for k in range(dim)], axis=1)
    index_of = np.full(total, -1, dtype=np.int64)
    if kind == HKind.NONZERO_VECTORS:
        index_of[codes] = np.arange(codes.size)
        return PointEnumeration(kind, spec, dim, vectors, index_of)
    if dim != 3:
        raise FieldError("The projective-plane enumeration needs dim = 3")
    t = tables(spec)
    lead = vectors[np.arange(vectors.shape[0]), np.argmax(vectors != 0, axis=1)]
    normalized = t.mul[t.inv[lead][:, None], vectors]
    weights = q ** np.arange(dim - 1, -1, -1, dtype=np.int64)
    norm_codes = normalized @ weights
    reps, point_index = np.unique(norm_codes, return_inverse=True)
    index_of[codes] = point_index
    rep_vectors = np.stack([(reps // q ** (dim - 1 - k)) % q for k in range(dim)], axis=1)
    return PointEnumeration(kind, spec, dim, rep_vectors, index_of)


def _acts_evenly(spec: FieldSpec, dim: int) -> bool:
    """SL_dim(F_q) is perfect (hence acts by even permutations) except SL_2(F_2), SL_2(F_3)."""
    return dim >= 3 or spec.q >= 4


def perm_from_matrix(matrix: SLMatrix, e: PointEnumeration) -> Permutation:
    """
    Permutation of the enumerated points induced by v -> v M.

    Raises:
        FieldError: on field/dimension mismatch, or an odd image where SL must act evenly
    """
    if matrix.spec != e.spec or matrix.dim != e.dim:
        raise FieldError(f"{matrix.dim}x{matrix.dim} matrix over {matrix.spec} does not act on "
                         f"{e.kind.value} of dimension {e.dim} over {e.spec}")
    images = e.index_of[e.code(mat_mul(e.spec, e.points, matrix.array))]
    perm = Permutation(images)
    if _acts_evenly(e.spec, e.dim) and parity(perm) != Parity.EVEN:
        raise FieldError("Perfect group element induced an odd permutation")
    return perm


def _extension_matrix(spec: FieldSpec, dim: int) -> Tuple[np.ndarray, FieldElem]:
    """Matrix of multiplication by a primitive element of GF(p^dim) in the basis 1, x, ..."""
    ext = field_spec(spec.p, dim)
    omega = primitive_element(ext)
    t = tables(ext)
    rows = []
    for i in range(dim):
        code = int(t.mul[spec.p ** i, omega.value])
        rows.append([(code // spec.p ** k) % spec.p for k in range(dim)])
    return np.array(rows, dtype=np.int64), omega


def k_cycle_element(spec: FieldSpec, e: PointEnumeration) -> SLMatrix:
    """
    Singer element: multiplication by a primitive element of GF(p^dim), which acts as one
    cycle through all points.

    Nonzero vectors need p = 2 (otherwise the determinant is a non-trivial norm). On the
    projective plane the matrix is rescaled by lambda with lambda^dim = norm^-1.

    Raises:
        FieldError: if no determinant-1 Singer element exists for these parameters
    """
    if not spec.is_prime:
        raise FieldError("Singer elements are built over prime fields only")
    arr, omega = _extension_matrix(spec, e.dim)
    t = tables(spec)
    det = determinant(spec, arr)
    if det != 1:
        if e.kind == HKind.NONZERO_VECTORS:
            raise FieldError(f"No determinant-1 K-cycle on nonzero vectors over {spec} (norm {det})")
        target = int(t.inv[det])
        lam = next((x for x in range(1, spec.q) if t.power(x, e.dim) == target), None)
        if lam is None:
            raise FieldError(f"Norm {det} has no {e.dim}-th root in {spec}; no Singer element in SL")
        arr = t.mul[lam, arr]
    singer = SLMatrix(spec, arr)
    ctype = cycle_type(perm_from_matrix(singer, e))
    if ctype.parts != (e.size,):
        raise CertificationError(f"Singer element has cycle type {ctype}, expected a single {e.size}-cycle")
    logger.debug("Singer element from primitive %s acts as a %d-cycle", omega, e.size)
    return singer


def _elementary(spec: FieldSpec, dim: int, i: int, j: int, value: int) -> SLMatrix:
    arr = np.eye(dim, dtype=np.int64)
    arr[i, j] = value
    return SLMatrix._trusted(spec, arr)


def base_generating_set(spec: FieldSpec, m_mat: int,
                        style: BaseStyle = BaseStyle.ELEMENTARY) -> List[SLMatrix]:
    """
    Small generating set of SL_m_mat(F_q).

    Elementary style: transvections I + a E_{i,i+1} and I + a E_{i+1,i} for a primitive a
    (and a = 1 as well over non-prime fields). Involution style: over characteristic 2 the
    transvections themselves; otherwise, for each transvection t, the diagonal +-1 matrix
    sigma inverting it and the involution sigma t.

    Raises:
        FieldError: if m_mat < 2 or no involution set exists for these parameters
    """
    if m_mat < 2:
        raise FieldError(f"m_mat must be >= 2, got {m_mat}")
    alpha = primitive_element(spec).value
    values = [alpha] if spec.is_prime or alpha == 1 else [alpha, 1]
    transvections = []
    for value in values:
        for i in range(m_mat - 1):
            transvections.append(_elementary(spec, m_mat, i, i + 1, value))
            transvections.append(_elementary(spec, m_mat, i + 1, i, value))
    if style == BaseStyle.ELEMENTARY or spec.p == 2:
        return transvections
    if m_mat < 3:
        raise FieldError("Involution generating sets in odd characteristic need m_mat >= 3")
    minus_one = int(tables(spec).neg[1])
    result = []
    for tv in transvections:
        i, j = [tuple(x) for x in np.argwhere(tv.array != np.eye(m_mat, dtype=np.int64))][0]
        lo = min(i, j)
        other = next(k for k in range(m_mat) if k not in (i, j))
        diag = np.ones(m_mat, dtype=np.int64)
        diag[lo] = minus_one
        diag[other] = minus_one
        sigma = SLMatrix._trusted(spec, np.diag(diag))
        result.extend([sigma, sigma @ tv])
    return list(dict.fromkeys(result))


def projective_kernel_size(spec: FieldSpec, dim: int) -> int:
    """Number of scalar matrices in SL_dim(F_q)."""
    return math.gcd(dim, spec.q - 1)


def certify_generation(gens: Sequence[SLMatrix], e: PointEnumeration, seed: int = 0):
    """
    BSGS certificate that the images of gens generate the image of SL on e.

    Returns:
        The BSGS of the permutation image

    Raises:
        CertificationError: if the order differs from |SL| (divided by the scalar kernel)
    """
    expected = sl_order(e.spec.q, e.dim)
    if e.kind == HKind.PROJECTIVE_PLANE:
        expected //= projective_kernel_size(e.spec, e.dim)
    bsgs = build_bsgs([perm_from_matrix(g, e) for g in gens], seed=seed, order_bound=expected)
    if bsgs.order != expected:
        raise CertificationError(f"Generated order {bsgs.order}, expected {expected}")
    return bsgs


# ---------------------------------------------------------------------------
# Matrix text format
# ---------------------------------------------------------------------------

def format_matrix(matrix: SLMatrix) -> str:
    """Rows of space-separated elements, each printed as little-endian coefficient digits."""
    return "\n".join(" ".join(str(matrix.entry(i, j)) for j in range(matrix.dim))
                     for i in range(matrix.dim))


def parse_matrix(spec: FieldSpec, text: str) -> SLMatrix:
    rows = []
    for line in text.strip().splitlines():
        row = []
        for token in line.split():
            if len(token) != spec.m or any(not ch.isdigit() or int(ch) >= spec.p for ch in token):
                raise FieldError(f"Bad element {token!r} for {spec}")
            row.append(element_from_coeffs(spec, [int(ch) for ch in token]).value)
        rows.append(row)
    return SLMatrix(spec, rows)


# Example usage
if __name__ == "__main__":
    print("=== Testing Algebra ===\n")
    gf8 = field_spec(2, 3)
    x, x2 = FieldElem(gf8, 2), FieldElem(gf8, 4)
    print(f"GF(8): x * x^2 = {x * x2}  (little-endian coefficients)")
    f2 = field_spec(2)
    points = enumerate_points(f2, 3)
    singer = k_cycle_element(f2, points)
    print(f"Singer element on {points.size} points:\n{format_matrix(singer)}")
    gens = base_generating_set(f2, 3)
    print(f"SL_3(F_2): {len(gens)} generators, certified order {certify_generation(gens, points).order}")
    print("\n=== Test Complete ===")
