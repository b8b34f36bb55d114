"""
Spectral Lab Module
Action graphs (Cayley, Schreier on points and on ordered tuples), the Markov operator, its
eigenvalues, vertex expansion, Kazhdan-constant numerics and random Cayley baselines.
"""

import io
import itertools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.io
import scipy.linalg
from scipy import optimize, sparse
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh
from scipy.special import logsumexp, softmax

from experiment_config import (SCHEMA_VERSION, BaselineGroup, BudgetExceededError, SolverError,
                               SolverMethod)
from group_engine import BSGS, build_bsgs, elements, make_rng, random_element
from perm_core import Permutation, inverse

logger = logging.getLogger(__name__)

DENSE_CUTOFF = 4000
BRUTE_FORCE_MAX_VERTICES = 22
KAZHDAN_MAX_ORDER = 60


class GraphKind(Enum):
    """Vertex sets an action graph can live on."""
    CAYLEY = "cayley"
    SCHREIER_POINTS = "schreier-points"
    SCHREIER_TUPLES = "schreier-tuples"


@dataclass
class ActionGraph:
    """
    Matrix-free graph: row s of `maps` sends vertex v to v.s.

    The first `original_count` rows come from the input generators, the rest are the inverses
    added by inverse closure.
    """
    kind: GraphKind
    n_vertices: int
    maps: np.ndarray
    labels: List[str]
    inverse_closed: bool
    original_count: int
    r: Optional[int] = None

    @property
    def generator_count(self) -> int:
        return int(self.maps.shape[0])

    def apply(self, x: np.ndarray, threads: int = 1) -> np.ndarray:
        """
        Markov operator (Delta x)(v) = mean over s of x(v.s); x may hold several columns.

        Vertex blocks are reduced in a fixed order, so the result does not depend on threads.
        """
        if threads <= 1 or self.n_vertices < 4096:
            return x[self.maps].mean(axis=0)
        bounds = np.linspace(0, self.n_vertices, threads + 1).astype(int)

        def block(k):
            return x[self.maps[:, bounds[k]:bounds[k + 1]]].mean(axis=0)

        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, range(threads)))
        return np.concatenate(parts, axis=0)

    def adjacency(self) -> sparse.csr_matrix:
        """Sparse multigraph adjacency: entry (v, v.s) counts generators s."""
        rows = np.tile(np.arange(self.n_vertices), self.generator_count)
        cols = self.maps.ravel()
        data = np.ones(rows.size, dtype=np.float64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n_vertices, self.n_vertices))

    def markov_matrix(self) -> sparse.csr_matrix:
        return self.adjacency() / self.generator_count

    def laplacian(self) -> sparse.csr_matrix:
        return sparse.identity(self.n_vertices, format="csr") - self.markov_matrix()

    def components(self) -> int:
        count, _ = connected_components(self.adjacency(), directed=True, connection="weak")
        return int(count)


def inverse_closure(perms: Sequence[Permutation], labels: Sequence[str]) -> Tuple[List[Permutation], List[str]]:
    """Keep the multiset and append g^-1 for each non-involution whose inverse is not already there."""
    present = set(perms)
    closed, closed_labels = list(perms), list(labels)
    for p, label in zip(perms, labels):
        inv = inverse(p)
        if inv != p and inv not in present:
            closed.append(inv)
            closed_labels.append(f"{label}^-1")
            present.add(inv)
    return closed, closed_labels


def _point_maps(perms: Sequence[Permutation]) -> np.ndarray:
    return np.stack([p.images.astype(np.int64) for p in perms])


def _tuple_maps(perms: Sequence[Permutation], r: int, budget: int) -> np.ndarray:
    n = perms[0].degree
    count = math.perm(n, r)
    if count > budget:
        raise BudgetExceededError(f"{count} ordered {r}-tuples exceed the vertex budget {budget}")
    tuples = np.array(list(itertools.permutations(range(n), r)), dtype=np.int64).reshape(count, r)
    weights = n ** np.arange(r, dtype=np.int64)
    index = np.full(n ** r, -1, dtype=np.int64)
    index[tuples @ weights] = np.arange(count)
    return np.stack([index[p.images.astype(np.int64)[tuples] @ weights] for p in perms])


def _cayley_maps(perms: Sequence[Permutation], group: BSGS, cap: int) -> np.ndarray:
    rows = elements(group, cap)
    lookup = {row.tobytes(): k for k, row in enumerate(rows)}
    maps = []
    for p in perms:
        products = p.images[rows]
        maps.append([lookup[row.tobytes()] for row in products])
    return np.array(maps, dtype=np.int64)


def build_action_graph(perms: Sequence[Permutation], kind: GraphKind = GraphKind.SCHREIER_POINTS,
                       r: Optional[int] = None, labels: Optional[Sequence[str]] = None,
                       group: Optional[BSGS] = None, cayley_cap: int = 50_000,
                       vertex_budget: int = 250_000, close_inverses: bool = True,
                       seed: int = 0) -> ActionGraph:
    """
    Build an action graph of a generator multiset.

    Args:
        perms: generators (a family's elements)
        kind: vertex set
        r: tuple length for Schreier graphs on tuples
        labels: generator labels, defaults to s0, s1, ...
        group: vertex group for Cayley graphs (defaults to <perms>)
        cayley_cap: largest group order enumerated for Cayley graphs
        vertex_budget: largest tuple graph
        close_inverses: apply inverse closure

    Raises:
        BudgetExceededError: if the vertex set is too large
    """
    if not perms:
        raise ValueError("An action graph needs at least one generator")
    labels = list(labels) if labels is not None else [f"s{k}" for k in range(len(perms))]
    original = len(perms)
    if close_inverses:
        perms, labels = inverse_closure(perms, labels)
    if kind == GraphKind.SCHREIER_POINTS:
        maps = _point_maps(perms)
    elif kind == GraphKind.SCHREIER_TUPLES:
        if r is None or r < 1:
            raise ValueError("Tuple graphs need r >= 1")
        maps = _tuple_maps(perms, r, vertex_budget)
    else:
        if group is None:
            group = build_bsgs(list(perms), seed=seed)
        maps = _cayley_maps(perms, group, cayley_cap)
    graph = ActionGraph(kind, int(maps.shape[1]), maps, list(labels), close_inverses, original, r)
    logger.debug("Built %s graph: %d vertices, %d generators", kind.value, graph.n_vertices, graph.generator_count)
    return graph


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------

@dataclass
class SpectralReport:
    """Top of the Markov spectrum with solver metadata."""
    method: str
    eigenvalues: List[float]
    lambda_2: float
    lambda_min: float
    lambda_star: float
    gap: float
    residuals: List[float]
    tolerance: float
    iterations: int
    seed: int
    n_vertices: int
    generator_count: int
    components: int
    converged: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return dict(asdict(self), schema_version=SCHEMA_VERSION)


class EigenSolver:
    """
    Second-eigenvalue solver for inverse-closed action graphs.
    """

    def __init__(self, method: SolverMethod = SolverMethod.AUTO, tol: float = 1e-10,
                 max_iterations: int = 5000, seed: int = 0, k: int = 6,
                 dense_cutoff: int = DENSE_CUTOFF, threads: int = 1):
        """
        Initialize the solver.

        Args:
            method: dense, lanczos, power-deflation, or auto (dense up to dense_cutoff vertices)
            tol: residual tolerance of iterative methods
            max_iterations: iteration cap of iterative methods
            seed: start-vector seed
            k: number of eigenvalues reported
            dense_cutoff: largest graph solved densely by auto
            threads: operator application workers
        """
        self.method = method
        self.tol = tol
        self.max_iterations = max_iterations
        self.seed = seed
        self.k = k
        self.dense_cutoff = dense_cutoff
        self.threads = threads

    def solve(self, graph: ActionGraph) -> SpectralReport:
        if not graph.inverse_closed:
            raise ValueError("Eigenvalues need an inverse-closed graph (self-adjoint operator)")
        method = self.method
        if method == SolverMethod.AUTO:
            method = SolverMethod.DENSE if graph.n_vertices <= self.dense_cutoff else SolverMethod.LANCZOS
        if graph.n_vertices <= 3:
            method = SolverMethod.DENSE
        if method == SolverMethod.DENSE:
            return self._dense(graph)
        if method == SolverMethod.LANCZOS:
            try:
                return self._lanczos(graph)
            except ArpackNoConvergence as e:
                logger.warning("Lanczos did not converge: %s. Using power deflation.", e)
        return self._power_deflation(graph)

    def _report(self, graph, method, top, lam_min, residuals, iterations, converged) -> SpectralReport:
        eigenvalues = [float(x) for x in top]
        lambda_2 = eigenvalues[1] if len(eigenvalues) > 1 else float(lam_min)
        lambda_star = max(abs(lambda_2), abs(float(lam_min)))
        return SpectralReport(method.value, eigenvalues, lambda_2, float(lam_min), lambda_star, 1.0 - lambda_2,
                              [float(r) for r in residuals], self.tol, int(iterations), self.seed,
                              graph.n_vertices, graph.generator_count, graph.components(), converged)

    def _dense(self, graph: ActionGraph) -> SpectralReport:
        matrix = graph.markov_matrix().toarray()
        matrix = (matrix + matrix.T) / 2
        values, vectors = scipy.linalg.eigh(matrix)
        order = np.argsort(values)[::-1]
        values, vectors = values[order], vectors[:, order]
        k = min(self.k, values.size)
        residuals = np.linalg.norm(matrix @ vectors[:, :k] - vectors[:, :k] * values[:k], axis=0)
        return self._report(graph, SolverMethod.DENSE, values[:k], values[-1], residuals, 1, True)

    def _operator(self, graph: ActionGraph, shift_constants: bool, counter: List[int]) -> LinearOperator:
        n = graph.n_vertices

        def matmat(x):
            counter[0] += 1
            x = np.asarray(x, dtype=np.float64).reshape(n, -1)
            y = graph.apply(x, self.threads)
            if shift_constants:
                # constant vector moves to eigenvalue -2, below the spectrum
                y = y - 3.0 * x.mean(axis=0, keepdims=True)
            return y

        def matvec(x):
            return matmat(x)[:, 0]

        return LinearOperator((n, n), matvec=matvec, matmat=matmat, dtype=np.float64)

    def _lanczos(self, graph: ActionGraph) -> SpectralReport:
        n = graph.n_vertices
        counter = [0]
        rng = make_rng(self.seed, stream=3)
        k = min(self.k - 1, n - 2)
        values, vectors = eigsh(self._operator(graph, True, counter), k=max(k, 1), which="LA", tol=self.tol,
                                maxiter=self.max_iterations, v0=rng.standard_normal(n))
        order = np.argsort(values)[::-1]
        values, vectors = values[order], vectors[:, order]
        lam_min = eigsh(self._operator(graph, False, counter), k=1, which="SA", tol=self.tol,
                        maxiter=self.max_iterations, v0=rng.standard_normal(n), return_eigenvectors=False)[0]
        residuals = np.linalg.norm(graph.apply(vectors) - vectors * values, axis=0)
        converged = bool((residuals <= max(self.tol, 1e-8)).all())
        return self._report(graph, SolverMethod.LANCZOS, np.concatenate([[1.0], values]), lam_min,
                            residuals, counter[0], converged)

    def _subspace_iteration(self, graph: ActionGraph, sign: float, block: int,
                            rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, float, int, bool]:
        """Top eigenpairs of (I + sign*Delta)/2 orthogonal to constants."""
        n = graph.n_vertices
        x = rng.standard_normal((n, block))
        for it in range(1, self.max_iterations + 1):
            x = x - x.mean(axis=0, keepdims=True)
            q, _ = np.linalg.qr(x)
            bq = (q + sign * graph.apply(q, self.threads)) / 2
            small = q.T @ bq
            theta, w = np.linalg.eigh((small + small.T) / 2)
            theta, w = theta[::-1], w[:, ::-1]
            ritz = q @ w
            residual = float(np.linalg.norm(bq @ w[:, 0] - theta[0] * ritz[:, 0]))
            if residual <= self.tol:
                return theta, ritz, residual, it, True
            x = bq @ w
        logger.warning("Power deflation reached %d iterations with residual %.3e", self.max_iterations, residual)
        return theta, ritz, residual, self.max_iterations, False

    def _power_deflation(self, graph: ActionGraph) -> SpectralReport:
        rng = make_rng(self.seed, stream=4)
        block = min(self.k, graph.n_vertices - 1)
        theta, vectors, residual, its, ok = self._subspace_iteration(graph, +1.0, block, rng)
        top = 2 * theta - 1
        theta_low, _, residual_low, its_low, ok_low = self._subspace_iteration(graph, -1.0, block, rng)
        lam_min = 1 - 2 * theta_low[0]
        residuals = np.linalg.norm(graph.apply(vectors) - vectors * top, axis=0)
        return self._report(graph, SolverMethod.POWER_DEFLATION, np.concatenate([[1.0], top[:self.k - 1]]), lam_min,
                            residuals, its + its_low, ok and ok_low)


def second_eigenvalue(graph: ActionGraph, method: SolverMethod = SolverMethod.AUTO, tol: float = 1e-10,
                      seed: int = 0, max_iterations: int = 5000, threads: int = 1) -> SpectralReport:
    """lambda_2 of the Markov operator (see EigenSolver)."""
    return EigenSolver(method, tol, max_iterations, seed, threads=threads).solve(graph)


@dataclass
class DeltaProbeReport:
    """Norm decay of Delta^t on probes orthogonal to constants."""
    power: int
    probes: int
    ratios: List[List[float]]
    max_ratio: float
    max_telescoping_excess: float
    telescoping_holds: bool
    bound: Optional[float] = None
    bound_holds: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return dict(asdict(self), schema_version=SCHEMA_VERSION)


def delta_power_probe(graph: ActionGraph, power: int = 8, probes: int = 20, seed: int = 0,
                      probe_vectors: Optional[np.ndarray] = None, lambda_star: Optional[float] = None,
                      tol: float = 1e-10, threads: int = 1) -> DeltaProbeReport:
    """
    For random probes v orthogonal to constants: ||Delta^t v|| / ||v|| for t <= power and the
    telescoping inequality ||Delta^t v - v|| <= t ||Delta v - v||.

    Args:
        probe_vectors: (V x probes) explicit probes instead of random ones
        lambda_star: spectral radius on the complement of constants; adds the check
            ratio(power) <= (lambda_star + tol)^power
    """
    if not graph.inverse_closed:
        raise ValueError("Delta-power probes need an inverse-closed graph")
    if probe_vectors is None:
        probe_vectors = make_rng(seed, stream=5).standard_normal((graph.n_vertices, probes))
        probe_vectors = probe_vectors - probe_vectors.mean(axis=0, keepdims=True)
    v = probe_vectors / np.linalg.norm(probe_vectors, axis=0, keepdims=True)
    first_step = np.linalg.norm(graph.apply(v, threads) - v, axis=0)
    current = v
    ratios = []
    excess = 0.0
    for t in range(1, power + 1):
        current = graph.apply(current, threads)
        ratios.append(np.linalg.norm(current, axis=0).tolist())
        drift = np.linalg.norm(current - v, axis=0)
        excess = max(excess, float((drift - t * first_step).max()))
    ratios = np.array(ratios).T
    max_ratio = float(ratios[:, -1].max())
    report = DeltaProbeReport(power, v.shape[1], ratios.tolist(), max_ratio, excess, excess <= 1e-12)
    if lambda_star is not None:
        report.bound = (lambda_star + tol) ** power
        report.bound_holds = max_ratio <= report.bound
    return report


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------

@dataclass
class ExpansionReport:
    """Exact vertex expansion with witness, or a Cheeger interval."""
    method: str
    exact: Optional[Fraction] = None
    witness: Optional[List[int]] = None
    lower: Optional[float] = None
    upper: Optional[float] = None

    def contains(self, value: float, slack: float = 1e-12) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def to_dict(self) -> Dict[str, Any]:
        doc = {"schema_version": SCHEMA_VERSION, "method": self.method}
        if self.exact is not None:
            doc["exact"] = f"{self.exact.numerator}/{self.exact.denominator}"
            doc["exact_float"] = float(self.exact)
            doc["witness"] = self.witness
        if self.lower is not None:
            doc["lower"] = self.lower
            doc["upper"] = self.upper
        return doc


def vertex_boundary(graph: ActionGraph, subset: Sequence[int]) -> List[int]:
    """Vertices outside the subset adjacent to it."""
    inside = np.zeros(graph.n_vertices, dtype=bool)
    inside[list(subset)] = True
    reached = np.zeros(graph.n_vertices, dtype=bool)
    reached[graph.maps[:, inside].ravel()] = True
    return np.flatnonzero(reached & ~inside).tolist()


def _popcount(x: np.ndarray) -> np.ndarray:
    table = np.array([bin(k).count("1") for k in range(1 << 16)], dtype=np.uint8)
    return table[x & 0xFFFF].astype(np.int32) + table[x >> 16]


def brute_force_expansion(graph: ActionGraph) -> ExpansionReport:
    """
    Exact min over nonempty A with |A| <= |V|/2 of |boundary(A)| / |A|, with witness.

    Raises:
        BudgetExceededError: above 22 vertices
    """
    n = graph.n_vertices
    if n > BRUTE_FORCE_MAX_VERTICES:
        raise BudgetExceededError(f"Brute-force expansion is limited to {BRUTE_FORCE_MAX_VERTICES} vertices, got {n}")
    neighbors = np.zeros(n, dtype=np.uint32)
    for v in range(n):
        for w in np.unique(graph.maps[:, v]):
            neighbors[v] |= np.uint32(1 << int(w))
    reach = np.zeros(1 << n, dtype=np.uint32)
    for bit in range(n):
        lo, hi = 1 << bit, 1 << (bit + 1)
        reach[lo:hi] = reach[:lo] | neighbors[bit]
    masks = np.arange(1 << n, dtype=np.uint32)
    sizes = _popcount(masks)
    boundary = _popcount(reach & ~masks)
    valid = (sizes >= 1) & (2 * sizes <= n)
    ratios = np.where(valid, boundary / np.maximum(sizes, 1), np.inf)
    # distinct ratios with denominators <= 11 differ by more than float error
    witness_mask = int(np.argmin(ratios))
    exact = Fraction(int(boundary[witness_mask]), int(sizes[witness_mask]))
    witness = [v for v in range(n) if witness_mask >> v & 1]
    return ExpansionReport("brute-force", exact=exact, witness=witness)


def cheeger_interval(report: SpectralReport, degree: Optional[int] = None) -> ExpansionReport:
    """
    Vertex-expansion interval from lambda_2 of a degree-D Markov operator:
    (1 - lambda_2)/2 <= epsilon <= min(D sqrt(2(1 - lambda_2)), D, |V| - 1).
    """
    D = degree if degree is not None else report.generator_count
    gap = max(0.0, 1.0 - report.lambda_2)
    lower = gap / 2
    upper = min(D * math.sqrt(2 * gap), float(D), float(report.n_vertices - 1))
    return ExpansionReport("cheeger", lower=lower, upper=upper)


# ---------------------------------------------------------------------------
# Kazhdan constants
# ---------------------------------------------------------------------------

@dataclass
class IrrepEstimate:
    label: str
    dim: int
    value: float
    dual_lower: float
    converged: bool


@dataclass
class BoundConstants:
    """Kazhdan estimate and the constants derived from it."""
    kazhdan: float
    kazhdan_dual_lower: float
    epsilon0: float
    per_irrep: List[IrrepEstimate]
    argmin_irrep: str
    group_order: int
    seed: int
    c: Optional[float] = None
    q: Optional[float] = None
    h_cutoff_exponent: float = 1.25

    def to_dict(self) -> Dict[str, Any]:
        return dict(asdict(self), schema_version=SCHEMA_VERSION)


def _realify(a: np.ndarray) -> np.ndarray:
    """Real symmetric form of a Hermitian matrix acting on (Re v, Im v)."""
    return np.block([[a.real, -a.imag], [a.imag, a.real]])


def _minimax_forms(forms: List[np.ndarray], restarts: int, rng: np.random.Generator) -> Tuple[float, bool]:
    """min over unit x of max_s x^T F_s x, by smoothed multi-start descent."""
    dim = forms[0].shape[0]
    stack = np.stack(forms)

    def exact(x):
        x = x / np.linalg.norm(x)
        return float(np.einsum("i,sij,j->s", x, stack, x).max())

    def smoothed(x, beta):
        norm2 = float(x @ x)
        fx = stack @ x
        values = (x @ fx.T) / norm2
        weights = softmax(beta * values)
        grads = 2 * (fx - values[:, None] * x[None, :]) / norm2
        return float(logsumexp(beta * values) / beta), weights @ grads

    best, ok = math.inf, False
    for _ in range(restarts):
        x = rng.standard_normal(dim)
        success = True
        for beta in (10.0, 1e2, 1e3, 1e4, 1e5):
            result = optimize.minimize(smoothed, x, args=(beta,), jac=True, method="L-BFGS-B",
                                       options={"maxiter": 2000})
            x = result.x / np.linalg.norm(result.x)
            success = success and bool(result.success)
        value = exact(x)
        if value < best:
            best, ok = value, success
    return best, ok


def _dual_bound(forms: List[np.ndarray], restarts: int, rng: np.random.Generator) -> float:
    """max over the simplex of lambda_min(sum mu_s F_s), a lower bound on the minimax."""
    stack = np.stack(forms)
    if len(forms) == 1:
        return float(max(0.0, np.linalg.eigvalsh(forms[0])[0]))

    def negative(z):
        mu = softmax(z)
        return -float(np.linalg.eigvalsh(np.tensordot(mu, stack, axes=1))[0])

    best = 0.0
    for _ in range(restarts):
        result = optimize.minimize(negative, rng.standard_normal(len(forms)), method="Nelder-Mead",
                                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        best = max(best, -float(result.fun))
    return best


def _clusters(values: np.ndarray, tol: float = 1e-6) -> List[np.ndarray]:
    groups, start = [], 0
    for k in range(1, values.size + 1):
        if k == values.size or values[k] - values[k - 1] > tol:
            groups.append(np.arange(start, k))
            start = k
    return groups


class KazhdanEstimator:
    """
    Kazhdan constant of a small group through its regular representation.
    """

    def __init__(self, restarts: int = 8, seed: int = 0, max_order: int = KAZHDAN_MAX_ORDER):
        self.restarts = restarts
        self.seed = seed
        self.max_order = max_order

    def estimate(self, gens: Sequence[Permutation], group: Optional[BSGS] = None) -> BoundConstants:
        """
        Per-irrep and global minima of max_s ||rho(s)v - v|| over unit v.

        The global value is taken over the augmentation subspace of the regular representation,
        which contains every representation without invariant vectors.

        Raises:
            BudgetExceededError: if the group order exceeds max_order
            SolverError: if the irreducible decomposition fails
        """
        group = group if group is not None else build_bsgs(list(gens), seed=self.seed)
        if group.order > self.max_order:
            raise BudgetExceededError(f"Kazhdan numerics are limited to |G| <= {self.max_order}, got {group.order}")
        rng = make_rng(self.seed, stream=6)
        rows = elements(group, self.max_order)
        order = rows.shape[0]
        lookup = {row.tobytes(): k for k, row in enumerate(rows)}
        mult = np.array([[lookup[rows[j][rows[i]].tobytes()] for j in range(order)] for i in range(order)])
        identity = lookup[np.arange(group.degree, dtype=rows.dtype).tobytes()]
        inv = np.array([int(np.flatnonzero(mult[i] == identity)[0]) for i in range(order)])

        def right(g):
            m = np.zeros((order, order))
            m[mult[:, g], np.arange(order)] = 1.0
            return m

        def left(h):
            m = np.zeros((order, order))
            m[mult[h, :], np.arange(order)] = 1.0
            return m

        gen_idx = [lookup[g.images.astype(rows.dtype).tobytes()] for g in gens]
        rho_s = [right(g) for g in gen_idx]
        components = self._isotypic_components(order, mult, inv, right, rng)
        eye = np.eye(order)

        per_irrep = []
        for number, basis in enumerate(components):
            single = self._single_copy(basis, order, inv, left, rng)
            dim = single.shape[1]
            reps = [single.conj().T @ r @ single for r in rho_s]
            if all(np.allclose(r, np.eye(dim), atol=1e-8) for r in reps):
                continue
            forms = [_realify((r - np.eye(dim)).conj().T @ (r - np.eye(dim))) for r in reps]
            value, ok = _minimax_forms(forms, self.restarts, rng)
            dual = _dual_bound(forms, self.restarts, rng)
            if not ok:
                logger.warning("Irrep %d: descent reported non-convergence", number)
            per_irrep.append(IrrepEstimate(f"rho{number}[dim={dim}]", dim, math.sqrt(max(value, 0.0)),
                                           math.sqrt(max(dual, 0.0)), ok))

        augmentation = scipy.linalg.null_space(np.ones((1, order)))
        global_forms = [_realify(augmentation.T @ (r - eye).T @ (r - eye) @ augmentation) for r in rho_s]
        value, _ = _minimax_forms(global_forms, self.restarts, rng)
        dual = _dual_bound(global_forms, self.restarts, rng)
        kazhdan = math.sqrt(max(value, 0.0))
        argmin = min(per_irrep, key=lambda e: e.value).label if per_irrep else ""
        return BoundConstants(kazhdan, math.sqrt(max(dual, 0.0)), kazhdan ** 2 / 4, per_irrep, argmin,
                              order, self.seed)

    def _isotypic_components(self, order, mult, inv, right, rng) -> List[np.ndarray]:
        """Eigenspaces of a random Hermitian central element."""
        classes, seen = [], set()
        for g in range(order):
            if g in seen:
                continue
            cls = sorted({int(mult[mult[inv[h], g], h]) for h in range(order)})
            seen.update(cls)
            classes.append(cls)
        for attempt in range(5):
            z = np.zeros((order, order), dtype=complex)
            for cls in classes:
                c = complex(*rng.standard_normal(2))
                class_sum = sum(right(g) for g in cls)
                z += c * class_sum + np.conj(c) * class_sum.T
            values, vectors = scipy.linalg.eigh(z)
            groups = _clusters(values)
            if all(math.isqrt(len(g)) ** 2 == len(g) for g in groups) and len(groups) == len(classes):
                return [vectors[:, g] for g in groups]
            logger.debug("Central element attempt %d split into %d blocks", attempt, len(groups))
        raise SolverError("Could not split the regular representation into isotypic components")

    def _single_copy(self, basis, order, inv, left, rng) -> np.ndarray:
        """One irreducible copy inside an isotypic component, from a random commutant element."""
        dim = math.isqrt(basis.shape[1])
        for _ in range(5):
            x = np.zeros((order, order), dtype=complex)
            for h in range(order):
                a = complex(*rng.standard_normal(2))
                x += a * left(h) + np.conj(a) * left(h).T
            restricted = basis.conj().T @ x @ basis
            values, vectors = scipy.linalg.eigh((restricted + restricted.conj().T) / 2)
            groups = _clusters(values)
            if len(groups) == dim and all(len(g) == dim for g in groups):
                return basis @ vectors[:, groups[0]]
        raise SolverError(f"Could not isolate one irreducible copy of dimension {dim}")


def kazhdan_numeric(gens: Sequence[Permutation], restarts: int = 8, seed: int = 0,
                    group: Optional[BSGS] = None) -> BoundConstants:
    """Kazhdan estimate for |G| <= 60 (see KazhdanEstimator)."""
    return KazhdanEstimator(restarts, seed).estimate(gens, group)


def kazhdan_to_expansion(k_est: float) -> float:
    """
    Expansion lower bound K^2/4.

    Raises:
        ValueError: unless 0 < K <= 2
    """
    if not 0.0 < k_est <= 2.0:
        raise ValueError(f"Kazhdan estimate must lie in (0, 2], got {k_est}")
    return k_est ** 2 / 4


# ---------------------------------------------------------------------------
# Random Cayley baseline
# ---------------------------------------------------------------------------

@dataclass
class BaselineReport:
    """Gap distribution over random generating sets."""
    group: str
    n: int
    set_size: int
    trials: int
    seed: int
    lambda_2: List[float]
    gaps: List[float]
    median_gap: float
    mean_gap: float
    min_gap: float
    max_gap: float

    def to_dict(self) -> Dict[str, Any]:
        return dict(asdict(self), schema_version=SCHEMA_VERSION)


def baseline_group(descriptor: BaselineGroup, n: int) -> Tuple[BSGS, GraphKind]:
    """Group and graph kind for a descriptor: Z/n on n points, Alt(n) or Sym(n) as Cayley graphs."""
    if descriptor == BaselineGroup.CYCLIC:
        rotation = Permutation.from_cycles([tuple(range(n))], n) if n > 1 else Permutation.identity(1)
        return build_bsgs([rotation]), GraphKind.SCHREIER_POINTS
    if descriptor == BaselineGroup.ALTERNATING:
        long_cycle = tuple(range(n)) if n % 2 else tuple(range(1, n))
        gens = [Permutation.from_cycles([(0, 1, 2)], n), Permutation.from_cycles([long_cycle], n)]
    else:
        gens = [Permutation.from_cycles([tuple(range(n))], n), Permutation.from_cycles([(0, 1)], n)]
    return build_bsgs(gens), GraphKind.CAYLEY


def random_cayley_baseline(descriptor: BaselineGroup, n: int, set_size: int, trials: int, seed: int = 0,
                           threads: int = 1, cayley_cap: int = 50_000,
                           method: SolverMethod = SolverMethod.AUTO, tol: float = 1e-8) -> BaselineReport:
    """
    lambda_2 for `trials` uniformly sampled generator multisets.

    A set size of at least |G| - 1 uses every non-identity element (the complete graph).
    """
    group, kind = baseline_group(descriptor, n)
    if kind == GraphKind.CAYLEY and group.order > cayley_cap:
        raise BudgetExceededError(f"|G| = {group.order} exceeds the Cayley cap {cayley_cap}")

    def trial(index: int) -> float:
        rng = make_rng(seed, stream=100 + index)
        if set_size >= group.order - 1:
            if kind == GraphKind.CAYLEY:
                gens = [Permutation._trusted(row.copy()) for row in elements(group, cayley_cap)]
            else:
                gens = [Permutation(np.roll(np.arange(n), -k)) for k in range(1, n)]
            gens = [g for g in gens if not g.is_identity()]
        else:
            gens = [random_element(group, rng) for _ in range(set_size)]
        graph = build_action_graph(gens, kind, group=group, cayley_cap=cayley_cap)
        return second_eigenvalue(graph, method=method, tol=tol, seed=seed + index).lambda_2

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        lambdas = list(pool.map(trial, range(trials)))
    gaps = [1.0 - lam for lam in lambdas]
    return BaselineReport(descriptor.value, n, set_size, trials, seed, lambdas, gaps,
                          float(np.median(gaps)), float(np.mean(gaps)), float(min(gaps)), float(max(gaps)))


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def graph_to_dot(graph: ActionGraph, name: Optional[str] = None) -> str:
    """Undirected DOT with every vertex and one edge per input generator step."""
    lines = [f"graph {name or graph.kind.value.replace('-', '_')} {{"]
    lines.extend(f"  {v};" for v in range(graph.n_vertices))
    for s in range(graph.original_count):
        for v, w in enumerate(graph.maps[s].tolist()):
            lines.append(f'  {v} -- {w} [label="{graph.labels[s]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_matrix_market(graph: ActionGraph) -> str:
    """Symmetric Matrix Market coordinate form of the multigraph adjacency."""
    adjacency = graph.adjacency()
    adjacency = ((adjacency + adjacency.T) / 2).tocoo()
    buffer = io.BytesIO()
    scipy.io.mmwrite(buffer, adjacency, comment="", symmetry="symmetric")
    return buffer.getvalue().decode("ascii")


def report_to_json(report) -> str:
    """JSON for any report object with to_dict()."""
    return json.dumps(report.to_dict(), indent=2, default=str)


# Example usage
if __name__ == "__main__":
    print("=== Testing Spectral Lab ===\n")
    rotation = Permutation.from_cycles([tuple(range(8))], 8)
    cycle_graph = build_action_graph([rotation])
    report = second_eigenvalue(cycle_graph)
    print(f"C8: lambda_2 = {report.lambda_2:.6f} (cos(pi/4) = {math.cos(math.pi / 4):.6f})")
    print(f"C8 expansion: {brute_force_expansion(cycle_graph).exact}, "
          f"Cheeger interval {cheeger_interval(report).lower:.4f}..{cheeger_interval(report).upper:.4f}")
    sym3 = [Permutation.from_cycles([(0, 1)], 3), Permutation.from_cycles([(0, 1, 2)], 3)]
    bounds = kazhdan_numeric(sym3, restarts=4)
    print(f"Sym(3): Kazhdan estimate {bounds.kazhdan:.4f}, epsilon0 >= {bounds.epsilon0:.4f}")
    print("\n=== Test Complete ===")
