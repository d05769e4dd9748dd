"""Perfect privacy (epsilon = 0): weak independence, the polytope D0, and g0.

D0 = {P_{Z|Y} : Z independent of X} is a polytope; I(Y;Z) is convex in the
filter, so its maximum over D0 is attained at a vertex. Vertices are
enumerated exhaustively as basic feasible solutions of the equality system
{rows stochastic, entries >= 0, sum_y P(z|y)(P_{Y|X}(y|x) - P_{Y|X}(y|x')) = 0},
which is tractable at desk scale (|Y| * z_card up to ~20 variables).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import _backend
from .errors import InstanceTooLargeError, ValidationError
from .filters import PrivacyFilter
from .prob import JointDistribution, posterior_kernel

RANK_TOL = 1e-9
VERTEX_DEDUP_TOL = 1e-8
_MAX_BASES = 5_000_000


@dataclass(frozen=True)
class WeakIndependenceReport:
    """Numerical-rank verdict on the posterior vectors {P_{X|Y}(.|y)}."""

    weakly_independent: bool
    rank: int
    n_posteriors: int
    tol: float


@dataclass(frozen=True)
class PolytopeVertexSet:
    vertices: tuple[PrivacyFilter, ...]
    constraint_residual_max: float


@dataclass(frozen=True)
class RatePrivacyPoint:
    """One point of the privacy-utility tradeoff: max I(Y;Z) s.t. I(X;Z) <= eps."""

    epsilon: float
    utility: float
    achieved_leakage: float
    filter: PrivacyFilter
    method: str  # vertex | deterministic | localSearch | gridOracle
    restarts: int | None = None
    seed: int | None = None
    notes: tuple[str, ...] = field(default=())


def is_weakly_independent(j: JointDistribution, tol: float = RANK_TOL) -> WeakIndependenceReport:
    """X is weakly independent of Y iff the posterior vectors are linearly dependent.

    Decided by the numerical rank of the |Y| x |X| posterior matrix with a
    relative singular-value threshold; weak independence holds iff
    rank < |Y|. Zero-mass y symbols carry no posterior and are excluded.
    """
    post = posterior_kernel(j).rows
    n = post.shape[0]
    if n == 1:
        return WeakIndependenceReport(False, 1, 1, tol)
    sv = np.linalg.svd(post, compute_uv=False)
    rank = int(np.sum(sv > tol * sv[0]))
    return WeakIndependenceReport(rank < n, rank, n, tol)


def _independence_rows(j: JointDistribution) -> np.ndarray:
    """An orthonormal basis of the row space spanned by the channel differences.

    Rows d_i(y) = P_{Y|X}(y|x_i) - P_{Y|X}(y|x_0); a column c of the filter
    keeps Z independent of X iff M c = 0 for this reduced matrix M.
    """
    keep = j.p_x > 0
    cond = j.probs[keep] / j.p_x[keep, None]
    if cond.shape[0] < 2:
        return np.zeros((0, j.n_y))
    diffs = cond[1:] - cond[0]
    u, s, vt = np.linalg.svd(diffs, full_matrices=False)
    # absolute floor: exact independence leaves O(1e-16) arithmetic noise
    thresh = max(RANK_TOL * (s[0] if s.size else 0.0), 1e-12)
    rank = int(np.sum(s > thresh))
    return vt[:rank]


def _equality_system(j: JointDistribution, z_card: int):
    """Stack row-stochasticity and Z-independence equalities over filter entries.

    Variables are filter entries flattened as index y * z_card + z.
    """
    ny = j.n_y
    n_vars = ny * z_card
    m_ind = _independence_rows(j)
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    for y in range(ny):
        row = np.zeros(n_vars)
        row[y * z_card : (y + 1) * z_card] = 1.0
        rows.append(row)
        rhs.append(1.0)
    for z in range(z_card):
        for mrow in m_ind:
            row = np.zeros(n_vars)
            row[np.arange(ny) * z_card + z] = mrow
            rows.append(row)
            rhs.append(0.0)
    return np.array(rows), np.array(rhs)


def _canonical_columns(matrix: np.ndarray) -> np.ndarray:
    """Sort columns lexicographically to quotient the Z-relabeling symmetry."""
    key = np.round(matrix, 10)
    order = np.lexsort(key[::-1])
    return matrix[:, order]


def d0_vertices(
    j: JointDistribution,
    z_card: int,
    quotient_relabelings: bool = True,
) -> PolytopeVertexSet:
    """Enumerate the vertices of D0 = {P_{Z|Y} : Z independent of X}.

    Basic feasible solutions of the equality system with nonnegativity;
    near-duplicate vertices (within 1e-8) are merged, and by default
    column-permutation (Z-relabeling) duplicates are removed.
    """
    if z_card < 1:
        raise ValidationError("z_card must be at least 1")
    a_full, b_full = _equality_system(j, z_card)
    n_vars = a_full.shape[1]

    # Row-reduce to an independent subsystem; candidate bases are square in it.
    q, r, piv = scipy.linalg.qr(a_full.T, pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > max(diag[0], 1e-300) * 1e-12)) if diag.size else 0
    keep_rows = piv[:rank]
    a_red = a_full[keep_rows]
    b_red = b_full[keep_rows]

    n_bases = math.comb(n_vars, rank)
    if n_bases > _MAX_BASES:
        raise InstanceTooLargeError(
            f"vertex enumeration needs {n_bases} candidate bases (> {_MAX_BASES}); "
            "reduce z_card or the Y alphabet"
        )
    combos = np.array(list(itertools.combinations(range(n_vars), rank)), dtype=np.int64)
    if combos.size == 0:
        combos = combos.reshape(0, rank)
    solutions, ok = _backend.solve_bases(a_red, b_red, combos)

    seen: dict[bytes, np.ndarray] = {}
    for sol, good, combo in zip(solutions, ok, combos):
        if not good or not np.all(np.isfinite(sol)) or np.any(sol < -1e-9):
            continue
        v = np.zeros(n_vars)
        v[combo] = np.clip(sol, 0.0, None)
        if np.abs(a_full @ v - b_full).max() > 1e-9:
            continue
        mat = v.reshape(j.n_y, z_card)
        canon = _canonical_columns(mat) if quotient_relabelings else mat
        key = np.round(canon / VERTEX_DEDUP_TOL).astype(np.int64).tobytes()
        if key not in seen:
            seen[key] = canon
    if not seen:
        raise AssertionError("D0 enumeration found no vertex; constant filters are always feasible")

    vertices = []
    residual_max = 0.0
    cond = j.probs[j.p_x > 0] / j.p_x[j.p_x > 0, None]
    for mat in seen.values():
        pzx = cond @ mat  # rows P_{Z|X}(.|x), all equal iff Z independent of X
        residual = float(np.abs(pzx - pzx[0]).max()) if pzx.shape[0] > 1 else 0.0
        residual_max = max(residual_max, residual)
        vertices.append(PrivacyFilter(mat))
    if residual_max > 1e-8:
        raise AssertionError(f"a D0 vertex violates Z independent of X by {residual_max}")
    vertices = [vertices[i] for i in _stable_matrix_order(vertices)]
    return PolytopeVertexSet(tuple(vertices), residual_max)


def _stable_matrix_order(filters) -> list[int]:
    keys = [tuple(np.round(f.matrix, 12).ravel().tolist()) for f in filters]
    return sorted(range(len(keys)), key=keys.__getitem__)


def g0(j: JointDistribution, z_card: int | None = None) -> RatePrivacyPoint:
    """g_0(X;Y): the best utility achievable with zero privacy leakage.

    Maximizes I(Y;Z) over the vertices of D0. Positive iff X is weakly
    independent of Y; for dependent binary pairs it is 0, and for binary Y
    it is either 0 or H(Y).
    """
    if z_card is None:
        z_card = j.n_y + 1
    vset = d0_vertices(j, z_card)
    mats = np.stack([f.matrix for f in vset.vertices])
    utility, leakage = _backend.batch_filter_objectives(j.probs, mats)
    best = None
    for i in range(len(vset.vertices)):
        key = (-utility[i], tuple(np.round(mats[i], 12).ravel().tolist()))
        if best is None or key < best[0]:
            best = (key, i)
    i = best[1]
    return RatePrivacyPoint(
        epsilon=0.0,
        utility=float(utility[i]),
        achieved_leakage=float(leakage[i]),
        filter=vset.vertices[i],
        method="vertex",
    )
