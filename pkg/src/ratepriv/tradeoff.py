"""The rate-privacy function g_eps for eps > 0.

Three routes with different trust levels:
  * g_eps_deterministic - exact enumeration of deterministic filters
    (all set partitions of Y, i.e. surjections up to Z relabeling);
  * g_eps_oracle        - exhaustive grid over the filter polytope, a guarded
    brute-force lower bound used to cross-check the solver;
  * g_eps_solve         - multistart local search with exchange moves and
    bisection projection onto the leakage boundary.

The deterministic variant's equality constraint I(f(Y);X) = eps is relaxed
to <= eps: function enumeration can in general not hit eps exactly, and the
supremum over the larger set dominates. Each returned point carries a note
recording the relaxation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import InstanceTooLargeError, ValidationError
from .filters import PrivacyFilter
from .perfect import RatePrivacyPoint, g0
from .prob import JointDistribution, entropy_bits, mutual_information

_FEAS_SLACK = 1e-12  # absorbs roundoff on exact-boundary filters
_LEQ_NOTE = "deterministic constraint I(f(Y);X) = eps relaxed to <= eps"


@dataclass(frozen=True)
class TradeoffCurve:
    """g_eps evaluated on an ascending grid, made monotone by running maximum."""

    points: tuple[RatePrivacyPoint, ...]

    @property
    def epsilons(self) -> np.ndarray:
        return np.array([p.epsilon for p in self.points])

    @property
    def utilities(self) -> np.ndarray:
        return np.array([p.utility for p in self.points])


def _lex_key(matrix: np.ndarray) -> tuple:
    return tuple(np.round(matrix, 12).ravel().tolist())


def _point_objectives(j: JointDistribution, matrix: np.ndarray) -> tuple[float, float]:
    utility, leakage = _backend.batch_filter_objectives(j.probs, matrix[None])
    return float(utility[0]), float(leakage[0])


def _iter_set_partitions(n: int):
    """All set partitions of range(n) via restricted-growth strings."""
    codes = [0] * n
    maxes = [0] * n
    while True:
        n_blocks = max(codes) + 1
        blocks = [[] for _ in range(n_blocks)]
        for i, c in enumerate(codes):
            blocks[c].append(i)
        yield blocks
        i = n - 1
        while i > 0 and codes[i] == maxes[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        codes[i] += 1
        maxes[i] = max(maxes[i - 1], codes[i])
        for k in range(i + 1, n):
            codes[k] = 0
            maxes[k] = maxes[i]


def g_eps_deterministic(j: JointDistribution, eps: float) -> RatePrivacyPoint:
    """Best deterministic filter: max H(f(Y)) over functions with I(f(Y);X) <= eps.

    Enumerates every set partition of Y (equivalently every surjection
    Y -> Z with |Z| <= |Y|, quotienting Z relabelings, under which both
    H(f(Y)) and I(f(Y);X) are invariant). Always feasible: a constant f has
    zero leakage.
    """
    if eps < 0:
        raise ValidationError("eps must be nonnegative")
    ny = j.n_y
    hx = entropy_bits(j.p_x)
    best = None
    for blocks in _iter_set_partitions(ny):
        agg = np.stack([j.probs[:, blk].sum(axis=1) for blk in blocks], axis=1)
        pw = agg.sum(axis=0)
        hw = entropy_bits(pw)
        leak = max(hx + hw - entropy_bits(agg), 0.0)
        if leak > eps + _FEAS_SLACK:
            continue
        rows = np.zeros((ny, len(blocks)))
        for z, blk in enumerate(blocks):
            rows[blk, z] = 1.0
        padded = np.zeros((ny, ny))
        padded[:, : len(blocks)] = rows
        key = (-hw, _lex_key(padded))
        if best is None or key < best[0]:
            best = (key, rows, hw, leak)
    _, rows, hw, leak = best
    return RatePrivacyPoint(
        epsilon=float(eps),
        utility=hw,
        achieved_leakage=leak,
        filter=PrivacyFilter(rows, deterministic=True),
        method="deterministic",
        notes=(_LEQ_NOTE,),
    )


def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length `parts` summing to `total`."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    out = []
    for first in range(total + 1):
        rest = _compositions(total - first, parts - 1)
        block = np.empty((rest.shape[0], parts), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = rest
        out.append(block)
    return np.concatenate(out, axis=0)


def g_eps_oracle(
    j: JointDistribution,
    eps: float,
    resolution: int,
    z_card: int | None = None,
    chunk: int = 65536,
) -> RatePrivacyPoint:
    """Brute-force grid reference: best feasible filter on a 1/resolution grid.

    Scans the full product of per-row simplices with step 1/resolution. The
    result is a lower bound on the true g_eps with a gap that vanishes as the
    resolution grows. Refuses instances where resolution ** dof exceeds 1e7
    (dof = |Y| * (z_card - 1)).
    """
    if eps < 0:
        raise ValidationError("eps must be nonnegative")
    if resolution < 1:
        raise ValidationError("resolution must be at least 1")
    if z_card is None:
        z_card = j.n_y + 1
    ny = j.n_y
    dof = ny * (z_card - 1)
    if float(resolution) ** dof > 1e7:
        raise InstanceTooLargeError(
            f"grid oracle refuses: resolution^dof = {resolution}^{dof} exceeds 1e7"
        )
    grid_rows = _compositions(resolution, z_card).astype(float) / resolution
    n_rows = grid_rows.shape[0]
    total = n_rows**ny

    best = None
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        digits = np.empty((idx.size, ny), dtype=np.int64)
        rem = idx.copy()
        for pos in range(ny - 1, -1, -1):
            digits[:, pos] = rem % n_rows
            rem //= n_rows
        filters = grid_rows[digits]  # (B, ny, z_card)
        utility, leakage = _backend.batch_filter_objectives(j.probs, filters)
        feasible = leakage <= eps + _FEAS_SLACK
        if not np.any(feasible):
            continue
        sub = np.nonzero(feasible)[0]
        order = sub[np.argsort(-utility[sub], kind="stable")]
        top = order[0]
        cand = (-utility[top], _lex_key(filters[top]))
        for i in order:
            if utility[i] < utility[top] - 1e-12:
                break
            key = (-utility[i], _lex_key(filters[i]))
            if key < cand:
                cand, top = key, i
        if best is None or cand < best[0]:
            best = (cand, filters[top].copy(), float(utility[top]), float(leakage[top]))
    _, mat, hw, leak = best
    return RatePrivacyPoint(
        epsilon=float(eps),
        utility=hw,
        achieved_leakage=leak,
        filter=PrivacyFilter(mat),
        method="gridOracle",
    )


def _bisect_to_boundary(
    j: JointDistribution, feasible_mat: np.ndarray, infeasible_mat: np.ndarray, eps: float, iters: int = 60
) -> np.ndarray:
    """Boundary point on the segment [feasible, infeasible] where I(X;Z) = eps.

    I(X;Z) is convex in the filter, so the feasible set on the segment is an
    interval containing the feasible end and the crossing is unique.
    """
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        mat = (1.0 - mid) * feasible_mat + mid * infeasible_mat
        _, leak = _point_objectives(j, mat)
        if leak <= eps + _FEAS_SLACK:
            lo = mid
        else:
            hi = mid
    return (1.0 - lo) * feasible_mat + lo * infeasible_mat


_MOVE_FRACTIONS = (1.0, 0.5, 0.25, 0.1, 0.02, 0.004)
_GRID_SEED_RESOLUTION = 8
_GRID_SEED_CAP = 20000


def _grid_seed_starts(j: JointDistribution, eps: float, z_card: int, top: int = 4):
    """Best points of a coarse internal grid, used as deterministic starts.

    Skipped when the grid would be large; the multistart random recipe is the
    only coverage at sizes the grid oracle refuses anyway.
    """
    grid_rows = _compositions(_GRID_SEED_RESOLUTION, z_card).astype(float) / _GRID_SEED_RESOLUTION
    n_rows = grid_rows.shape[0]
    total = n_rows**j.n_y
    if total > _GRID_SEED_CAP:
        return []
    idx = np.arange(total)
    digits = np.empty((total, j.n_y), dtype=np.int64)
    rem = idx.copy()
    for pos in range(j.n_y - 1, -1, -1):
        digits[:, pos] = rem % n_rows
        rem //= n_rows
    filters = grid_rows[digits]
    utility, leakage = _backend.batch_filter_objectives(j.probs, filters)
    feasible = leakage <= eps + _FEAS_SLACK
    starts: list[np.ndarray] = []
    if np.any(feasible):
        order = np.nonzero(feasible)[0][np.argsort(-utility[feasible], kind="stable")]
        starts.extend(filters[i] for i in order[:top])
    infeasible = ~feasible
    if np.any(infeasible):
        order = np.nonzero(infeasible)[0][np.argsort(-utility[infeasible], kind="stable")]
        starts.extend(filters[i] for i in order[:top])
    return starts


def _local_search(
    j: JointDistribution,
    start: np.ndarray,
    eps: float,
    anchor: np.ndarray,
    max_sweeps: int = 40,
) -> tuple[np.ndarray, float, float]:
    """Greedy coordinate exchange ascent of I(Y;Z) inside {I(X;Z) <= eps}.

    Moves shift a fraction of one row's mass between two Z symbols; moves
    that leave the feasible set are pulled back to the boundary by bisection
    toward the best known strictly feasible filter (the anchor).
    """
    ny, nz = start.shape
    current = start.copy()
    cur_util, cur_leak = _point_objectives(j, current)
    for _ in range(max_sweeps):
        cands = []
        for y in range(ny):
            for z1 in range(nz):
                mass = current[y, z1]
                if mass <= 1e-15:
                    continue
                for z2 in range(nz):
                    if z2 == z1:
                        continue
                    for frac in _MOVE_FRACTIONS:
                        mat = current.copy()
                        t = mass * frac
                        mat[y, z1] -= t
                        mat[y, z2] += t
                        cands.append(mat)
        if not cands:
            break
        batch = np.stack(cands)
        utility, leakage = _backend.batch_filter_objectives(j.probs, batch)
        feasible = leakage <= eps + _FEAS_SLACK
        improving = feasible & (utility > cur_util + 1e-12)
        moved = False
        if np.any(improving):
            i = int(np.argmax(np.where(improving, utility, -np.inf)))
            current, cur_util, cur_leak = batch[i], float(utility[i]), float(leakage[i])
            moved = True
        else:
            # most promising infeasible candidates: first shrink the move back
            # toward the current iterate (keeps the direction), then fall back
            # to projecting toward the strictly feasible anchor
            order = np.argsort(-utility, kind="stable")
            tried = 0
            for i in order:
                if tried >= 6:
                    break
                if feasible[i]:
                    continue
                tried += 1
                bases = (current, anchor) if cur_leak < eps - _FEAS_SLACK else (anchor,)
                for base in bases:
                    projected = _bisect_to_boundary(j, base, batch[i], eps)
                    p_util, p_leak = _point_objectives(j, projected)
                    if p_leak <= eps + _FEAS_SLACK and p_util > cur_util + 1e-12:
                        current, cur_util, cur_leak = projected, p_util, p_leak
                        moved = True
                        break
                if moved:
                    break
        if not moved:
            break
    return current, cur_util, cur_leak


def g_eps_solve(
    j: JointDistribution,
    eps: float,
    restarts: int = 32,
    seed: int | None = None,
    z_card: int | None = None,
    extra_starts: tuple[np.ndarray, ...] = (),
) -> RatePrivacyPoint:
    """Multistart search for g_eps(X;Y); never worse than the deterministic
    enumeration or the perfect-privacy vertex value at the same eps.

    Starts are leakage-boundary projections of random deterministic targets
    mixed with the best D0 vertex; restarts draw from generators split off
    the mandatory master seed, so parallel and serial execution agree. For
    0 < eps < I(X;Y) the returned filter sits on the leakage boundary (the
    maximum occurs at an extreme point with I(X;Z) = eps).
    """
    if eps < 0:
        raise ValidationError("eps must be nonnegative")
    if seed is None:
        raise ValidationError("seed is required for reproducible search")
    if z_card is None:
        z_card = j.n_y + 1
    ny = j.n_y
    ixy = mutual_information(j)

    det = g_eps_deterministic(j, eps)
    base = g0(j, z_card)
    anchor = base.filter.widened(z_card).matrix

    candidates: list[tuple[np.ndarray, float, float]] = []

    def consider(mat: np.ndarray):
        util, leak = _point_objectives(j, mat)
        if leak <= eps + _FEAS_SLACK:
            candidates.append((mat, util, leak))

    if det.filter.z_card <= z_card:
        consider(det.filter.widened(z_card).matrix)
    else:  # z_card restricted below |Y|: fall back to the best fitting constant
        consider(PrivacyFilter.constant(ny, z_card).matrix)
    consider(anchor)
    if ny <= z_card:
        consider(PrivacyFilter.identity(ny).widened(z_card).matrix)

    if eps > _FEAS_SLACK:
        master = np.random.default_rng(seed)
        streams = master.spawn(max(restarts, 0))
        starts: list[np.ndarray] = [np.asarray(m, dtype=float) for m in extra_starts]
        for mat in _grid_seed_starts(j, eps, z_card):
            if _point_objectives(j, mat)[1] <= eps + _FEAS_SLACK:
                starts.append(mat)
            else:
                starts.append(_bisect_to_boundary(j, anchor, mat, eps))
        for rng in streams:
            if rng.random() < 0.7:
                target = np.zeros((ny, z_card))
                target[np.arange(ny), rng.integers(0, z_card, size=ny)] = 1.0
            else:
                target = rng.dirichlet(np.full(z_card, 0.4), size=ny)
            _, leak_t = _point_objectives(j, target)
            if leak_t <= eps + _FEAS_SLACK:
                starts.append(target)
            else:
                starts.append(_bisect_to_boundary(j, anchor, target, eps))
        for start in starts:
            mat, util, leak = _local_search(j, start, eps, anchor)
            candidates.append((mat, util, leak))

    def best_of(cands):
        key = None
        chosen = None
        for mat, util, leak in cands:
            k = (-util, _lex_key(mat))
            if key is None or k < key:
                key, chosen = k, (mat, util, leak)
        return chosen

    best_mat, best_util, best_leak = best_of(candidates)

    # boundary polish: the optimum sits on I(X;Z) = eps (g_eps is strictly
    # increasing below saturation), so walk the best point out to the boundary
    if _FEAS_SLACK < eps < ixy - 1e-9:
        push_targets: list[np.ndarray] = []
        if ny <= z_card:
            push_targets.append(PrivacyFilter.identity(ny).widened(z_card).matrix)
        rng_push = np.random.default_rng(np.random.SeedSequence([int(seed), 0xB0]))
        for _ in range(4):
            t = np.zeros((ny, z_card))
            t[np.arange(ny), rng_push.integers(0, z_card, size=ny)] = 1.0
            push_targets.append(t)
        push_targets = [t for t in push_targets if _point_objectives(j, t)[1] > eps]

        for _ in range(6):
            if best_leak >= eps - 1e-4 or not push_targets:
                break
            # prefer a push direction that keeps utility (convexity plateaus
            # of I(Y;Z) usually extend out to the boundary)
            plateau = None
            fallback = None
            for target in push_targets:
                pushed = _bisect_to_boundary(j, best_mat, target, eps)
                p_util, p_leak = _point_objectives(j, pushed)
                if p_leak <= best_leak:
                    continue
                if p_util >= best_util - 1e-12:
                    if plateau is None or p_util > plateau[1]:
                        plateau = (pushed, p_util, p_leak)
                elif fallback is None or p_util > fallback[1]:
                    fallback = (pushed, p_util, p_leak)
            if plateau is not None:
                best_mat, best_util, best_leak = plateau
                continue
            if fallback is None:
                break
            mat, util, leak = _local_search(j, fallback[0], eps, anchor)
            if util > best_util + 1e-12:
                best_mat, best_util, best_leak = mat, util, leak
            elif fallback[1] >= best_util - 1e-7:
                # boundary attainment at a sub-1e-7 utility sacrifice
                best_mat, best_util, best_leak = fallback
                break
            else:
                break

    return RatePrivacyPoint(
        epsilon=float(eps),
        utility=best_util,
        achieved_leakage=best_leak,
        filter=PrivacyFilter(best_mat),
        method="localSearch",
        restarts=restarts,
        seed=seed,
    )


def g_eps_curve(
    j: JointDistribution,
    eps_grid,
    restarts: int = 32,
    seed: int | None = None,
    z_card: int | None = None,
) -> TradeoffCurve:
    """g_eps along an ascending grid, warm-started point to point.

    Each point reuses the previous optimum as an extra start (it stays
    feasible as eps grows), and a running maximum enforces monotonicity.
    Endpoints are validated against g0 and H(Y).
    """
    grid = [float(e) for e in eps_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValidationError("eps grid must be sorted ascending")
    if seed is None:
        raise ValidationError("seed is required for reproducible search")
    hy = entropy_bits(j.p_y)
    ixy = mutual_information(j)
    points: list[RatePrivacyPoint] = []
    prev: RatePrivacyPoint | None = None
    for eps in grid:
        extra = (prev.filter.widened((z_card or j.n_y + 1)).matrix,) if prev is not None else ()
        pt = g_eps_solve(j, eps, restarts=restarts, seed=seed, z_card=z_card, extra_starts=extra)
        if prev is not None and pt.utility < prev.utility:
            pt = RatePrivacyPoint(
                epsilon=eps,
                utility=prev.utility,
                achieved_leakage=prev.achieved_leakage,
                filter=prev.filter,
                method=prev.method,
                restarts=restarts,
                seed=seed,
                notes=("carried forward from smaller eps by running maximum",),
            )
        points.append(pt)
        prev = pt
    if grid and grid[0] <= _FEAS_SLACK:
        ref = g0(j, z_card)
        if abs(points[0].utility - ref.utility) > 1e-6:
            raise AssertionError("curve start disagrees with g0")
    for pt in points:
        if pt.epsilon >= ixy - 1e-12 and abs(pt.utility - hy) > 1e-9:
            raise AssertionError("curve fails to saturate at H(Y) for eps >= I(X;Y)")
    return TradeoffCurve(tuple(points))
