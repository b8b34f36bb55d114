"""
Walks Module
Random words in a generating family, exact mixing of the point walk, cycle statistics of
sampled words and the almost-transitivity probe on ordered tuples.
"""

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from construction import CubeIndex, GeneratingFamily, abelian_family, cycle_powers
from experiment_config import SCHEMA_VERSION, BudgetExceededError, SolverMethod
from group_engine import make_rng
from perm_core import Permutation, act_on_tuple, cycle_type
from spectral_lab import GraphKind, build_action_graph, inverse_closure, second_eigenvalue

logger = logging.getLogger(__name__)

WORD_STREAM = 7
STATISTICS_STREAM = 8
PROBE_STREAM = 9
EXHAUSTIVE_WORD_BUDGET = 1_000_000


def default_word_length(n: int) -> int:
    """ceil(8 n ln n) picks."""
    return math.ceil(8 * n * math.log(n)) if n > 1 else 0


def _closed_generators(family: GeneratingFamily) -> np.ndarray:
    if len(family) == 0:
        raise ValueError("Random words need a nonempty family")
    gens, _ = inverse_closure(family.elements, [str(k) for k in range(len(family))])
    return np.stack([g.images.astype(np.int64) for g in gens])


def random_word(family: GeneratingFamily, L: int, seed: int = 0, offset: int = 0) -> Permutation:
    """
    Product of L uniform picks from the inverse-closed family, applied left to right.

    Picks come from one stream per seed; `offset` skips that many picks, so
    random_word(L1 + L2) == compose(random_word(L1), random_word(L2, offset=L1)).
    """
    if L < 0 or offset < 0:
        raise ValueError(f"Word length and offset must be non-negative, got {L}, {offset}")
    gens = _closed_generators(family)
    picks = np.floor(make_rng(seed, WORD_STREAM).random(offset + L)[offset:] * gens.shape[0]).astype(np.int64)
    state = np.arange(family.degree, dtype=np.int64)
    for pick in picks:
        state = gens[pick][state]
    return Permutation._trusted(state)


def random_words(family: GeneratingFamily, L: int, samples: int, seed: int = 0) -> np.ndarray:
    """(samples x n) images of independent words, advanced together one pick per step."""
    gens = _closed_generators(family)
    rng = make_rng(seed, STATISTICS_STREAM)
    states = np.tile(np.arange(family.degree, dtype=np.int64), (samples, 1))
    for _ in range(L):
        picks = np.floor(rng.random(samples) * gens.shape[0]).astype(np.int64)
        states = np.take_along_axis(gens[picks], states, axis=1)
    return states


def all_words(family: GeneratingFamily, L: int, budget: int = EXHAUSTIVE_WORD_BUDGET) -> np.ndarray:
    """Images of every word of length L (with multiplicity)."""
    gens = _closed_generators(family)
    count = gens.shape[0] ** L
    if count > budget:
        raise BudgetExceededError(f"{count} words of length {L} exceed the exhaustive budget {budget}")
    states = np.arange(family.degree, dtype=np.int64)[None, :]
    for _ in range(L):
        states = gens[:, states].reshape(-1, family.degree)
    return states


# ---------------------------------------------------------------------------
# Mixing
# ---------------------------------------------------------------------------

@dataclass
class CycleStats:
    """Fixed-point and cycle-count statistics of sampled words, with uniform references."""
    n: int
    L: int
    samples: int
    seed: int
    exhaustive: bool
    fixed_point_mean: float
    fixed_point_variance: float
    fixed_point_stderr: float
    cycle_count_mean: float
    cycle_count_stderr: float
    reference_fixed_point_mean: float = 1.0
    reference_fixed_point_variance: float = 1.0
    reference_cycle_count_mean: float = 0.0


@dataclass
class MixingReport:
    """TV curve of the point walk from a delta start, with the spectral overlay."""
    n_points: int
    steps: int
    tv: List[float] = field(default_factory=list)
    prediction: List[float] = field(default_factory=list)
    lambda_star: Optional[float] = None
    mixing_time: Optional[int] = None
    predicted_mixing_time: Optional[float] = None
    stats: Optional[CycleStats] = None

    def to_dict(self) -> Dict[str, Any]:
        return dict(asdict(self), schema_version=SCHEMA_VERSION)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["step", "tv", "prediction"])
        for step, (tv, pred) in enumerate(zip(self.tv, self.prediction)):
            writer.writerow([step, repr(tv), repr(pred)])
        return buffer.getvalue()


def total_variation(distribution: np.ndarray) -> float:
    return float(0.5 * np.abs(distribution - 1.0 / distribution.size).sum())


def point_mixing_exact(family: GeneratingFamily, steps: int, start: int = 0, budget: int = 250_000,
                       method: SolverMethod = SolverMethod.AUTO, tol: float = 1e-10, seed: int = 0,
                       threads: int = 1, threshold: float = 0.01) -> MixingReport:
    """
    Iterate the point distribution exactly from a delta start.

    Args:
        family: generators acting on the points
        steps: number of walk steps
        start: starting point
        budget: largest point count iterated densely
        threshold: TV level that defines the mixing time

    Raises:
        BudgetExceededError: if the degree exceeds budget
    """
    n = family.degree
    if n > budget:
        raise BudgetExceededError(f"{n} points exceed the dense-vector budget {budget}")
    graph = build_action_graph(family.elements, GraphKind.SCHREIER_POINTS, labels=family.label_strings())
    spectrum = second_eigenvalue(graph, method=method, tol=tol, seed=seed, threads=threads)
    lam = spectrum.lambda_star

    distribution = np.zeros(n)
    distribution[start] = 1.0
    report = MixingReport(n, steps, lambda_star=lam)
    for t in range(steps + 1):
        if t:
            distribution = graph.apply(distribution, threads)
        tv = total_variation(distribution)
        report.tv.append(tv)
        report.prediction.append(lam ** t * math.sqrt(n))
        if report.mixing_time is None and tv < threshold:
            report.mixing_time = t
    if 0 < lam < 1:
        report.predicted_mixing_time = math.log(math.sqrt(n) / threshold) / -math.log(lam)
    logger.debug("Point mixing on %d points: lambda* = %.6f, mixing time %s", n, lam, report.mixing_time)
    return report


def _cycle_counts(states: np.ndarray) -> np.ndarray:
    return np.array([len(cycle_type(Permutation._trusted(row.copy())).parts) for row in states])


def cycle_statistics(family: GeneratingFamily, L: int, samples: int = 10_000, seed: int = 0,
                     exhaustive: bool = False) -> CycleStats:
    """
    Fixed points and cycle counts of random words of length L.

    With exhaustive=True every word of length L is used once, which gives exact means.
    """
    n = family.degree
    states = all_words(family, L) if exhaustive else random_words(family, L, samples, seed)
    fixed = (states == np.arange(n)[None, :]).sum(axis=1).astype(np.float64)
    cycles = _cycle_counts(states).astype(np.float64)
    count = states.shape[0]
    variance = float(fixed.var(ddof=1)) if count > 1 else 0.0
    cycle_var = float(cycles.var(ddof=1)) if count > 1 else 0.0
    harmonic = sum(1.0 / k for k in range(1, n + 1))
    return CycleStats(n, L, count, seed, exhaustive, float(fixed.mean()), variance,
                      math.sqrt(variance / count), float(cycles.mean()), math.sqrt(cycle_var / count),
                      reference_cycle_count_mean=harmonic)


# ---------------------------------------------------------------------------
# Almost transitivity on tuples
# ---------------------------------------------------------------------------

@dataclass
class TransitivityProbe:
    """Fraction of sampled tuple pairs the greedy router connects within t moves."""
    r: int
    t: int
    kappa: float
    pairs: int
    successes: int
    seed: int
    exhaustive: bool
    moves_used: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return dict(asdict(self), schema_version=SCHEMA_VERSION)


class TupleRouter:
    """
    Greedy router: each move is one element of an abelian axis family, choosing per fiber the
    power that fixes the axis coordinate of the first tuple entry on that fiber.
    Axes are ranked by matched coordinates after the move, then after the best following move.
    """

    def __init__(self, cube: CubeIndex, cycle: Permutation):
        self.cube = cube
        self.cycle = cycle
        self.powers = cycle_powers(cycle)
        K = cube.K
        # exponent[x, y]: power of the cycle sending x to y
        self.exponent = np.zeros((K, K), dtype=np.int64)
        for e in range(K):
            self.exponent[np.arange(K), self.powers[e]] = e

    def _copy_of(self, coords: Tuple[int, ...], axis: int) -> int:
        return self.cube.copy_index([x for k, x in enumerate(coords) if k != axis])

    def _plan(self, current: List[Tuple[int, ...]], target: List[Tuple[int, ...]], axis: int) -> Dict[int, int]:
        plan: Dict[int, int] = {}
        for now, goal in zip(current, target):
            plan.setdefault(self._copy_of(now, axis), int(self.exponent[now[axis], goal[axis]]))
        return plan

    def _move(self, current, plan, axis) -> List[Tuple[int, ...]]:
        moved = []
        for coords in current:
            e = plan.get(self._copy_of(coords, axis), 0)
            moved.append(coords[:axis] + (int(self.powers[e][coords[axis]]),) + coords[axis + 1:])
        return moved

    @staticmethod
    def _score(current, target) -> int:
        return sum(a == b for now, goal in zip(current, target) for a, b in zip(now, goal))

    def route(self, source: Sequence[int], target: Sequence[int], t: int) -> Optional[int]:
        """Moves used to carry source onto target, or None if t moves do not suffice."""
        goal = [self.cube.coords(x) for x in target]
        current = [self.cube.coords(x) for x in source]
        points = tuple(source)
        for used in range(t + 1):
            if current == goal:
                return used
            if used == t:
                break
            best = None
            for axis in range(self.cube.d):
                plan = self._plan(current, goal, axis)
                after = self._move(current, plan, axis)
                lookahead = max(self._score(self._move(after, self._plan(after, goal, a), a), goal)
                                for a in range(self.cube.d))
                key = (self._score(after, goal), lookahead, -axis)
                if best is None or key > best[0]:
                    best = (key, axis, plan)
            _, axis, plan = best
            exponents = [plan.get(c, 0) for c in range(self.cube.copies)]
            points = act_on_tuple(abelian_family(self.cube, axis, exponents, self.cycle), points)
            current = [self.cube.coords(x) for x in points]
        return None


def transitivity_probe(cube: CubeIndex, cycle: Permutation, r: int, t: int, pairs: int = 200,
                       seed: int = 0, exhaustive: bool = False) -> TransitivityProbe:
    """
    Estimate kappa, the fraction of r-tuple pairs routable with at most t abelian moves.

    Args:
        exhaustive: for r = 1, use all ordered point pairs instead of sampling
    """
    if t < 1 or r < 1:
        raise ValueError(f"Need r >= 1 and t >= 1, got r={r}, t={t}")
    router = TupleRouter(cube, cycle)
    N = cube.size
    if exhaustive:
        if r != 1:
            raise ValueError("Exhaustive probes are defined for r = 1")
        sampled = [((a,), (b,)) for a in range(N) for b in range(N)]
    else:
        rng = make_rng(seed, PROBE_STREAM)
        sampled = [(tuple(int(x) for x in rng.choice(N, r, replace=False)),
                    tuple(int(x) for x in rng.choice(N, r, replace=False))) for _ in range(pairs)]
    moves = [router.route(src, dst, t) for src, dst in sampled]
    used = [m for m in moves if m is not None]
    return TransitivityProbe(r, t, len(used) / len(sampled), len(sampled), len(used), seed, exhaustive,
                             sorted(used))


def transitivity_curve(cube: CubeIndex, cycle: Permutation, r: int, ts: Sequence[int], pairs: int = 200,
                       seed: int = 0) -> List[TransitivityProbe]:
    """kappa(t) on the same sampled pairs for each t."""
    return [transitivity_probe(cube, cycle, r, t, pairs, seed) for t in ts]


# Example usage
if __name__ == "__main__":
    from construction import CubeConstruction
    from experiment_config import ExperimentConfig

    print("=== Testing Walks ===\n")
    construction = CubeConstruction(ExperimentConfig(d=2))
    F_N = construction.build_F_N()
    report = point_mixing_exact(F_N, steps=30)
    print(f"Point walk on {report.n_points} points: lambda* = {report.lambda_star:.4f}, "
          f"TV < 0.01 after {report.mixing_time} steps")
    probe = transitivity_probe(construction.cube, construction.cycle, r=2, t=12, pairs=50)
    print(f"Transitivity probe r=2, t=12: kappa = {probe.kappa:.2f}")
    print("\n=== Test Complete ===")
