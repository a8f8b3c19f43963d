"""Small dense LP core and Hausdorff distances between reward polytopes.

The metric is the infinity norm throughout. Distances from a point to a
polytope are one LP; the supremum side of the Hausdorff distance is taken
over polytope vertices (the point-to-set distance is convex, so it is
attained at a vertex), enumerated combinatorially for small dimensions or
sampled via random LP objectives for a certified lower bound.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .feasible import RewardPolytope

LP_TOL = 1e-9
FEAS_TOL = 1e-8
DEDUPE_TOL = 1e-7
DEFAULT_ENUM_CAP = 10
DEFAULT_LP_DIM_CAP = 64


class EmptyPolytopeError(ValueError):
    """Raised when a distance query hits an empty polytope."""


class EnumerationCapError(ValueError):
    """Raised when exact vertex enumeration is refused for a large dimension."""


@dataclass(frozen=True)
class LinearProgram:
    """min c . x  subject to  G x <= h, x free."""

    c: np.ndarray
    G: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        G = np.asarray(self.G, dtype=float)
        h = np.asarray(self.h, dtype=float)
        if G.ndim != 2 or c.shape != (G.shape[1],) or h.shape != (G.shape[0],):
            raise ValueError("inconsistent LP shapes")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(G)) and np.all(np.isfinite(h))):
            raise ValueError("LP data must be finite")
        if G.shape[1] > DEFAULT_LP_DIM_CAP:
            raise ValueError(f"dimension {G.shape[1]} exceeds the small-dense cap")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: float | None
    x: np.ndarray | None


def _dedupe_rows(G: np.ndarray, h: np.ndarray):
    seen = set()
    keep = []
    for i in range(G.shape[0]):
        key = (G[i].tobytes(), float(h[i]))
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return G[keep], h[keep]


def _pivot(tableau: np.ndarray, rhs: np.ndarray, basis: np.ndarray, row: int, col: int):
    piv = tableau[row, col]
    tableau[row] /= piv
    rhs[row] /= piv
    for i in range(tableau.shape[0]):
        if i != row and abs(tableau[i, col]) > 0.0:
            factor = tableau[i, col]
            tableau[i] -= factor * tableau[row]
            rhs[i] -= factor * rhs[row]
    basis[row] = col


def _simplex_phase(tableau, rhs, basis, costs, allowed):
    """Bland's-rule simplex on a tableau already in basic feasible form.

    Returns "optimal" or "unbounded"; mutates tableau/rhs/basis in place.
    """
    m = tableau.shape[0]
    while True:
        cb = costs[basis]
        reduced = costs - cb @ tableau
        entering = -1
        for j in np.flatnonzero(allowed):
            if reduced[j] < -LP_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal"
        best_ratio, leave = None, -1
        for i in range(m):
            if tableau[i, entering] > LP_TOL:
                ratio = rhs[i] / tableau[i, entering]
                if (best_ratio is None or ratio < best_ratio - LP_TOL
                        or (abs(ratio - best_ratio) <= LP_TOL and basis[i] < basis[leave])):
                    best_ratio, leave = ratio, i
        if leave < 0:
            return "unbounded"
        _pivot(tableau, rhs, basis, leave, entering)


def lp_solve(lp: LinearProgram) -> LpResult:
    """Two-phase dense simplex with Bland's rule on a slack formulation.

    Free variables are split into positive and negative parts; rows with a
    negative bound get an artificial variable in phase one.
    """
    G, h = _dedupe_rows(lp.G, lp.h)
    m, d = G.shape
    if m == 0:
        # unconstrained: optimum is 0 at the origin iff c == 0
        if np.all(lp.c == 0.0):
            return LpResult("optimal", 0.0, np.zeros(d))
        return LpResult("unbounded", None, None)

    # columns: x+ (d) | x- (d) | slacks (m) | artificials (k)
    body = np.hstack([G, -G, np.eye(m)])
    rhs = h.copy()
    neg = rhs < 0
    body[neg] *= -1.0
    rhs[neg] *= -1.0
    art_rows = np.flatnonzero(neg)
    n_art = art_rows.size
    art_block = np.zeros((m, n_art))
    for k, i in enumerate(art_rows):
        art_block[i, k] = 1.0
    tableau = np.hstack([body, art_block])
    ncols = tableau.shape[1]
    basis = np.empty(m, dtype=int)
    for i in range(m):
        basis[i] = 2 * d + i  # slack basic where h >= 0
    for k, i in enumerate(art_rows):
        basis[i] = 2 * d + m + k  # artificial basic where the row was flipped

    allowed = np.ones(ncols, dtype=bool)
    if n_art:
        costs1 = np.zeros(ncols)
        costs1[2 * d + m:] = 1.0
        _simplex_phase(tableau, rhs, basis, costs1, allowed)
        if costs1[basis] @ rhs > 1e-7:
            return LpResult("infeasible", None, None)
        allowed[2 * d + m:] = False
        # drive any zero-valued artificial out of the basis when possible
        for i in range(m):
            if basis[i] >= 2 * d + m:
                for j in range(2 * d + m):
                    if abs(tableau[i, j]) > LP_TOL:
                        _pivot(tableau, rhs, basis, i, j)
                        break

    costs2 = np.zeros(ncols)
    costs2[:d] = lp.c
    costs2[d:2 * d] = -lp.c
    status = _simplex_phase(tableau, rhs, basis, costs2, allowed)
    if status == "unbounded":
        return LpResult("unbounded", None, None)
    full = np.zeros(ncols)
    full[basis] = rhs
    x = full[:d] - full[d:2 * d]
    return LpResult("optimal", float(lp.c @ x), x)


def directed_distance(r0, polytope: RewardPolytope) -> float:
    """inf over the polytope of the infinity-norm distance to r0, as one LP
    in dim + 1 variables; raises EmptyPolytopeError on an empty polytope."""
    vec = np.asarray(getattr(r0, "values", r0), dtype=float).reshape(-1)
    d = polytope.dim
    if vec.shape != (d,):
        raise ValueError("point dimension does not match polytope")
    G, h = polytope.G, polytope.h
    eye = np.eye(d)
    ones = np.ones((d, 1))
    big_G = np.vstack([
        np.hstack([G, np.zeros((G.shape[0], 1))]),
        np.hstack([eye, -ones]),
        np.hstack([-eye, -ones]),
    ])
    big_h = np.concatenate([h, vec, -vec])
    c = np.zeros(d + 1)
    c[-1] = 1.0
    res = lp_solve(LinearProgram(c, big_G, big_h))
    if res.status == "infeasible":
        raise EmptyPolytopeError("polytope is empty")
    if res.status != "optimal":  # cannot happen: the objective is >= 0
        raise RuntimeError(f"unexpected LP status {res.status}")
    value = res.value
    return 0.0 if value < LP_TOL else float(value)


def _chunked_combinations(n: int, d: int, chunk: int):
    it = itertools.combinations(range(n), d)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block)


def enumerate_vertices(polytope: RewardPolytope, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """All basic feasible points: solve every dim-subset of rows, keep the
    feasible solutions, dedupe near-identical points.

    Subsets are processed in vectorized chunks (batched determinant filter,
    batched solve, batched feasibility check) to keep large combination
    counts tractable.
    """
    d = polytope.dim
    if d > cap:
        raise EnumerationCapError(f"dimension {d} exceeds enumeration cap {cap}")
    G, h = _dedupe_rows(polytope.G, polytope.h)
    candidates = []
    for block in _chunked_combinations(G.shape[0], d, 50_000):
        subs = G[block]  # (B, d, d)
        nonsingular = np.abs(np.linalg.det(subs)) > 1e-12
        if not np.any(nonsingular):
            continue
        points = np.linalg.solve(subs[nonsingular], h[block][nonsingular][..., None])[..., 0]
        finite = np.all(np.isfinite(points), axis=1)
        points = points[finite]
        feasible = np.all(points @ G.T <= h[None, :] + FEAS_TOL, axis=1)
        if np.any(feasible):
            candidates.append(points[feasible])
    if not candidates:
        return np.empty((0, d))
    pool = np.vstack(candidates)
    # coarse dedupe by rounding, then an exact tolerance pass on the survivors
    _, first = np.unique(np.round(pool, 8), axis=0, return_index=True)
    pool = pool[np.sort(first)]
    vertices: list[np.ndarray] = []
    for point in pool:
        for known in vertices:
            if np.max(np.abs(known - point)) < DEDUPE_TOL:
                break
        else:
            vertices.append(point)
    return np.array(vertices).reshape(len(vertices), d)


def sample_support_points(polytope: RewardPolytope, budget: int,
                          rng: np.random.Generator) -> np.ndarray:
    """Basic feasible points found by maximizing `budget` random directions.

    Directions are drawn sequentially, so a larger budget extends (never
    replaces) the set found with a smaller one under the same generator seed.
    """
    d = polytope.dim
    points = []
    for _ in range(budget):
        direction = rng.standard_normal(d)
        res = lp_solve(LinearProgram(-direction, polytope.G, polytope.h))
        if res.status == "infeasible":
            raise EmptyPolytopeError("polytope is empty")
        if res.status == "optimal":
            points.append(res.x)
    return np.array(points).reshape(len(points), d)


class HausdorffMode(enum.Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower"


@dataclass(frozen=True)
class HausdorffReport:
    value: float
    mode: HausdorffMode
    directed: tuple  # (sup over P1 side, sup over P2 side)
    witness_point: np.ndarray  # point attaining the max
    witness_distance: float


def _directed_sup(points: np.ndarray, target: RewardPolytope):
    best, arg = 0.0, None
    for point in points:
        dist = directed_distance(point, target)
        if dist > best or arg is None:
            best, arg = dist, point
    return best, arg


def hausdorff_distance(p1: RewardPolytope, p2: RewardPolytope,
                       mode: HausdorffMode = HausdorffMode.EXACT,
                       budget: int = 64, seed: int = 0,
                       enum_cap: int = DEFAULT_ENUM_CAP) -> HausdorffReport:
    """Infinity-norm Hausdorff distance between two reward polytopes.

    EXACT mode enumerates all vertices of both polytopes; LOWER_BOUND mode
    uses seeded random-objective support points and returns a certified
    lower bound that is non-decreasing in the budget.
    """
    if p1.dim != p2.dim:
        raise ValueError("polytope dimensions differ")
    if mode is HausdorffMode.EXACT:
        pts1 = enumerate_vertices(p1, enum_cap)
        pts2 = enumerate_vertices(p2, enum_cap)
    else:
        rng1 = np.random.default_rng(seed)
        rng2 = np.random.default_rng(seed + 1)
        pts1 = sample_support_points(p1, budget, rng1)
        pts2 = sample_support_points(p2, budget, rng2)
    if pts1.shape[0] == 0 or pts2.shape[0] == 0:
        raise EmptyPolytopeError("polytope has no feasible points")
    d12, w12 = _directed_sup(pts1, p2)
    d21, w21 = _directed_sup(pts2, p1)
    if d12 >= d21:
        value, witness, wdist = d12, w12, d12
    else:
        value, witness, wdist = d21, w21, d21
    return HausdorffReport(float(value), mode, (float(d12), float(d21)),
                           witness, float(wdist))
