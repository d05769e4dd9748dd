"""Pure-numpy implementations of the hot kernels.

Mirrors the compiled `_fastcore` extension; selected by `_backend` when the
extension is unavailable (or forced via RATEPRIV_BACKEND=numpy).
"""
from __future__ import annotations

import numpy as np
from scipy.special import xlogy

_LN2 = np.log(2.0)


def batch_filter_objectives(pxy: np.ndarray, filters: np.ndarray):
    """Utility I(Y;Z) and leakage I(X;Z) for a batch of privacy filters.

    pxy: (nx, ny) joint; filters: (B, ny, nz) row-stochastic kernels Y->Z.
    Returns (utility[B], leakage[B]) in bits.
    """
    pxy = np.asarray(pxy, dtype=float)
    filters = np.asarray(filters, dtype=float)
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    hx = float(-xlogy(px, px).sum() / _LN2)
    hy = float(-xlogy(py, py).sum() / _LN2)

    pz = np.einsum("y,byz->bz", py, filters)
    pxz = np.einsum("xy,byz->bxz", pxy, filters)
    pyz = py[None, :, None] * filters

    hz = -xlogy(pz, pz).sum(axis=1) / _LN2
    hxz = -xlogy(pxz, pxz).sum(axis=(1, 2)) / _LN2
    hyz = -xlogy(pyz, pyz).sum(axis=(1, 2)) / _LN2

    utility = np.maximum(hy + hz - hyz, 0.0)
    leakage = np.maximum(hx + hz - hxz, 0.0)
    return utility, leakage


def solve_bases(a: np.ndarray, b: np.ndarray, combos: np.ndarray, chunk: int = 4096):
    """Solve the square systems a[:, combo] @ x = b for every candidate basis.

    a: (r, n) row-reduced equality matrix, b: (r,), combos: (B, r) column
    index sets. Returns (solutions (B, r), ok (B,) bool) where ok marks bases
    whose column set is numerically nonsingular.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    combos = np.asarray(combos)
    n_combos, r = combos.shape
    solutions = np.zeros((n_combos, r), dtype=float)
    ok = np.zeros(n_combos, dtype=bool)
    if r == 0:
        return solutions, ok
    at = a.T  # (n, r); at[combo] stacks basis columns as rows, i.e. A_B^T
    for start in range(0, n_combos, chunk):
        sel = combos[start : start + chunk]
        mats_t = at[sel]  # (c, r, r) = A_B^T
        u, s, vt = np.linalg.svd(mats_t)
        smax = s[:, 0]
        good = (smax > 0) & (s[:, -1] > 1e-12 * np.maximum(smax, 1e-300))
        # A_B = V S U^T  =>  x = U S^{-1} V^T b
        vtb = np.einsum("cij,j->ci", vt, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = np.where(s > 0, vtb / s, 0.0)
        x = np.einsum("cij,cj->ci", u, scaled)
        solutions[start : start + chunk] = x
        ok[start : start + chunk] = good
    return solutions, ok
