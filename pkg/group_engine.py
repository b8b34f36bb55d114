"""
Group Engine Module
Exact permutation-group computation through a base and strong generating set (BSGS).

The stabilizer chain stores every coset representative explicitly as an image array together
with its inverse, so sifting is a handful of numpy gathers per level.
"""

import json
import logging
import math
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from experiment_config import SCHEMA_VERSION, BudgetExceededError
from perm_core import Permutation, PermutationError, format_cycles, parse_permutation, point_dtype

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.Generator, None]


def make_rng(seed: int = 0, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for (base seed, stream index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def _as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(0 if seed is None else seed)


class _StabilizerChain:
    """Mutable chain G = G(0) > G(1) > ... used while a BSGS is being built."""

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = np.arange(degree, dtype=point_dtype(degree))
        self.base: List[int] = []
        self.level_gens: List[List[np.ndarray]] = []
        self.reps: List[Dict[int, np.ndarray]] = []
        self.inv_reps: List[Dict[int, np.ndarray]] = []

    def order(self) -> int:
        return math.prod(len(r) for r in self.reps)

    def is_identity(self, g: np.ndarray) -> bool:
        return bool(np.array_equal(g, self.identity))

    def append_level(self, point: int):
        self.base.append(point)
        self.level_gens.append([])
        self.reps.append({point: self.identity})
        self.inv_reps.append({point: self.identity})

    def sift(self, g: np.ndarray, start: int = 0) -> Tuple[np.ndarray, int]:
        """
        Strip g through the chain from `start`.

        Returns:
            (residue, level) where level is the first level whose orbit misses the image of
            its base point, or len(base) if g passed every level
        """
        for level in range(start, len(self.base)):
            u_inv = self.inv_reps[level].get(int(g[self.base[level]]))
            if u_inv is None:
                return g, level
            g = u_inv[g]
        return g, len(self.base)

    def add_generator(self, h: np.ndarray, level: int, first: int = 0):
        """Insert h, which fixes b_0..b_{level-1}, as a strong generator on levels first..level."""
        if level == len(self.base):
            moved = np.flatnonzero(h != self.identity)
            self.append_level(int(moved[0]))
        for lvl in range(first, level + 1):
            self.level_gens[lvl].append(h)
            self._extend_orbit(lvl, h)

    def _store(self, level: int, point: int, rep: np.ndarray):
        inv = np.empty_like(rep)
        inv[rep] = self.identity
        self.reps[level][point] = rep
        self.inv_reps[level][point] = inv

    def _extend_orbit(self, level: int, h: np.ndarray):
        reps = self.reps[level]
        # base points b_0..b_{level-1} are fixed, so the orbit is already complete
        if len(reps) == self.degree - level:
            return
        queue = []
        for beta, u in list(reps.items()):
            gamma = int(h[beta])
            if gamma not in reps:
                self._store(level, gamma, h[u])
                queue.append(gamma)
        gens = self.level_gens[level]
        for beta in queue:
            u = reps[beta]
            for s in gens:
                gamma = int(s[beta])
                if gamma not in reps:
                    self._store(level, gamma, s[u])
                    queue.append(gamma)

    def complete(self):
        """Deterministic Schreier-Sims: test every Schreier generator level by level."""
        i = len(self.base) - 1
        while i >= 0:
            found = None
            for beta, u in list(self.reps[i].items()):
                for s in list(self.level_gens[i]):
                    gamma = int(s[beta])
                    g1 = s[u]
                    if np.array_equal(g1, self.reps[i][gamma]):
                        continue
                    schreier_gen = self.inv_reps[i][gamma][g1]
                    h, j = self.sift(schreier_gen, start=i + 1)
                    if j < len(self.base) or not self.is_identity(h):
                        found = (h, j)
                        break
                if found is not None:
                    break
            if found is None:
                i -= 1
                continue
            h, j = found
            self.add_generator(h, j, first=i + 1)
            logger.debug("Schreier generator added at level %d (base length %d)", j, len(self.base))
            i = j


def _product_replacement(gens: List[np.ndarray], rng: np.random.Generator,
                         warmup: int = 50) -> Iterator[np.ndarray]:
    """Endless stream of nearly uniform random elements of <gens>."""
    r = max(10, len(gens))
    state = [gens[k % len(gens)] for k in range(r)]
    acc = np.arange(gens[0].size, dtype=gens[0].dtype)

    def step():
        nonlocal acc
        i, j = (int(x) for x in rng.choice(r, size=2, replace=False))
        other = state[j]
        if rng.random() < 0.5:
            inv = np.empty_like(other)
            inv[other] = np.arange(other.size, dtype=other.dtype)
            other = inv
        state[i] = other[state[i]]
        acc = state[i][acc]

    for _ in range(warmup):
        step()
    while True:
        step()
        yield acc


class BSGS:
    """
    Completed base and strong generating set. Immutable once built.
    """

    def __init__(self, chain: _StabilizerChain):
        self._chain = chain
        self.degree = chain.degree
        self.base: Tuple[int, ...] = tuple(chain.base)
        self.order: int = chain.order()
        seen = {}
        for gens in chain.level_gens:
            for g in gens:
                seen.setdefault(g.tobytes(), g)
        self.strong_generators: Tuple[Permutation, ...] = tuple(
            Permutation._trusted(g) for g in seen.values())
        self._transversals: Optional[List[Dict[int, Permutation]]] = None

    @property
    def transversals(self) -> List[Dict[int, Permutation]]:
        """Per base point: orbit point -> coset representative sending the base point there."""
        if self._transversals is None:
            self._transversals = [
                {beta: Permutation._trusted(u) for beta, u in sorted(reps.items())}
                for reps in self._chain.reps
            ]
        return self._transversals

    def orbit_sizes(self) -> List[int]:
        return [len(r) for r in self._chain.reps]

    def __repr__(self) -> str:
        return f"BSGS(degree={self.degree}, base_length={len(self.base)}, order={self.order})"


def build_bsgs(gens: Sequence[Permutation], seed: int = 0,
               order_bound: Optional[int] = None, patience: int = 40, randomized: bool = True) -> BSGS:
    """
    Build a BSGS for the group generated by `gens`.

    With `randomized` (the default), random Schreier-Sims (product replacement seeded by `seed`)
    runs first. Its order is a lower bound, so reaching `order_bound` (the order of a known
    overgroup) proves the result. Otherwise the deterministic Schreier-Sims pass completes the
    chain. Either way the order is exact and the chain is reproducible from `seed`; the random
    phase only shortens certification of large groups. `randomized=False` runs the
    deterministic pass alone and ignores `seed`.

    Args:
        gens: nonempty generators of equal degree
        seed: seed of the random phase; the result is deterministic per seed
        order_bound: order of a group known to contain <gens>, or None
        patience: consecutive trivially-sifting random elements before switching to the
            deterministic pass
        randomized: run the seeded random phase before the deterministic pass

    Returns:
        BSGS of <gens>

    Raises:
        PermutationError: on empty input or mixed degrees
        ValueError: if the computed order exceeds order_bound
    """
    if not gens:
        raise PermutationError("build_bsgs needs at least one generator")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise PermutationError(f"Degree mismatch: {degree} vs {g.degree}")

    chain = _StabilizerChain(degree)
    arrays = [g.images for g in gens if not g.is_identity()]
    if not arrays:
        return BSGS(chain)

    for g in arrays:
        h, level = chain.sift(g)
        if level < len(chain.base) or not chain.is_identity(h):
            chain.add_generator(h, level)

    rng = make_rng(seed, stream=0)
    quiet = 0
    for element in (_product_replacement(arrays, rng) if randomized else ()):
        if order_bound is not None and chain.order() >= order_bound:
            break
        if quiet >= patience:
            break
        h, level = chain.sift(element)
        if level < len(chain.base) or not chain.is_identity(h):
            chain.add_generator(h.copy(), level)
            quiet = 0
        else:
            quiet += 1

    if order_bound is None or chain.order() < order_bound:
        logger.debug("Random phase stopped at order %d; running deterministic completion", chain.order())
        chain.complete()
    if order_bound is not None and chain.order() > order_bound:
        raise ValueError(f"Group order {chain.order()} exceeds the supplied bound {order_bound}")
    bsgs = BSGS(chain)
    logger.debug("BSGS built: degree %d, base length %d, order %d", degree, len(bsgs.base), bsgs.order)
    return bsgs


def order(b: BSGS) -> int:
    """Exact group order."""
    return b.order


def contains(b: BSGS, p: Permutation) -> bool:
    """
    Exact membership by sifting.

    Raises:
        PermutationError: on degree mismatch
    """
    if p.degree != b.degree:
        raise PermutationError(f"Degree mismatch: group has degree {b.degree}, element {p.degree}")
    h, level = b._chain.sift(p.images)
    return level == len(b.base) and b._chain.is_identity(h)


def alternating_order(n: int) -> int:
    return 1 if n < 2 else math.factorial(n) // 2


def is_alternating(b: BSGS, n: int) -> bool:
    """True iff the group is Alt(n), decided by exact order comparison."""
    return b.degree == n and b.order == alternating_order(n)


def is_symmetric(b: BSGS, n: int) -> bool:
    """True iff the group is Sym(n), decided by exact order comparison."""
    return b.degree == n and b.order == math.factorial(n)


def random_element(b: BSGS, rng_seed: SeedLike = 0) -> Permutation:
    """Exactly uniform element: one uniformly chosen representative per level."""
    rng = _as_rng(rng_seed)
    g = b._chain.identity
    for reps in reversed(b._chain.reps):
        points = sorted(reps)
        u = reps[points[int(rng.integers(len(points)))]]
        g = u[g]
    return Permutation._trusted(g.copy())


def elements(b: BSGS, cap: int) -> np.ndarray:
    """
    All group elements as rows of an (order x degree) image array, in a fixed order.

    Raises:
        BudgetExceededError: if the order exceeds cap
    """
    if b.order > cap:
        raise BudgetExceededError(f"Group order {b.order} exceeds the enumeration cap {cap}")
    rows = b._chain.identity[None, :]
    for reps in reversed(b._chain.reps):
        reps_sorted = [reps[beta] for beta in sorted(reps)]
        rows = np.concatenate([u[rows] for u in reps_sorted], axis=0)
    return rows


# ---------------------------------------------------------------------------
# Orbits
# ---------------------------------------------------------------------------

def orbit_labels(gens: Sequence[Permutation], degree: int) -> Tuple[int, np.ndarray]:
    """Connected components of the point graph x -- g(x)."""
    if not gens:
        return degree, np.arange(degree)
    src = np.concatenate([np.arange(degree)] * len(gens))
    dst = np.concatenate([g.images.astype(np.int64) for g in gens])
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(degree, degree))
    count, labels = connected_components(graph, directed=True, connection="weak")
    return int(count), labels


def is_transitive(gens: Sequence[Permutation]) -> bool:
    if not gens:
        return False
    count, _ = orbit_labels(gens, gens[0].degree)
    return count == 1


# ---------------------------------------------------------------------------
# JSON snapshots
# ---------------------------------------------------------------------------

def export_bsgs(b: BSGS) -> str:
    """BSGS as a JSON document (order as a decimal string)."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "degree": b.degree,
        "base": list(b.base),
        "strong_generators": [format_cycles(g) for g in b.strong_generators],
        "order": str(b.order),
    }
    return json.dumps(doc, indent=2)


def import_bsgs(text: str, verify: bool = True) -> BSGS:
    """
    Rebuild a BSGS from its JSON snapshot.

    The stored base and generators seed the chain; with verify the deterministic pass checks
    that they really form a BSGS. The recomputed order must equal the stored one.

    Raises:
        ValueError: if the snapshot is inconsistent
    """
    doc = json.loads(text)
    degree = int(doc["degree"])
    gens = [parse_permutation(s, degree) for s in doc["strong_generators"]]
    chain = _StabilizerChain(degree)
    for point in doc["base"]:
        chain.append_level(int(point))
    for g in gens:
        images = g.images
        level = 0
        while level < len(chain.base) and images[chain.base[level]] == chain.base[level]:
            level += 1
        if level == len(chain.base):
            if not g.is_identity():
                raise ValueError(f"Strong generator {format_cycles(g)} fixes the whole base")
            continue
        chain.add_generator(images, level)
    if verify:
        chain.complete()
    if str(chain.order()) != str(doc["order"]):
        raise ValueError(f"Snapshot order {doc['order']} does not match recomputed order {chain.order()}")
    return BSGS(chain)


# Example usage
if __name__ == "__main__":
    print("=== Testing Group Engine ===\n")
    n = 6
    sym6 = build_bsgs([Permutation.from_cycles([(0, 1)], n),
                       Permutation.from_cycles([tuple(range(n))], n)], seed=1)
    print(f"<(0 1), (0 1 2 3 4 5)>: order {order(sym6)}, symmetric: {is_symmetric(sym6, n)}")
    alt4 = build_bsgs([Permutation.from_cycles([(0, 1, 2)], 4),
                       Permutation.from_cycles([(0, 1), (2, 3)], 4)])
    print(f"Alt(4): order {order(alt4)}, sample {format_cycles(random_element(alt4, 7))}")
    print("\n=== Test Complete ===")
