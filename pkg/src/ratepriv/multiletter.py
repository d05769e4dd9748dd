"""Multi-letter near-uniform binning over Y^n with maximum-likelihood decoding.

For each input symbol x_j the product distribution P_j^n over Y^n is packed
greedily into 2^r bins: descending-probability order, close a bin once its
mass reaches 2^-r - 2^-s, dump the leftover into the last bin. With
r = floor(n(H - delta)) and s = floor(n(H - delta/2)) for H the conditional
min-entropy and 0 < delta <= 2H/3, every closed bin's mass lies in
[2^-r - 2^-s, 2^-r) and the bin-mass distribution is within
2(2^{r-s} + 2^-r) of uniform in total variation.

The composed map f_n(y^n) bins y^n under the plan of the *decoded* symbol;
decoding is exact maximum-likelihood hypothesis selection, and its exact
error probability is reported rather than assumed to vanish. All report
quantities are computed by full enumeration of Y^n (no sampling), guarded
at n * log2|Y| <= 24.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InstanceTooLargeError, ValidationError
from .prob import (
    JointDistribution,
    Kernel,
    Pmf,
    conditional_min_entropy,
    entropy_bits,
)

log = logging.getLogger(__name__)

_MEMORY_GUARD_BITS = 24


@dataclass(frozen=True)
class BinningPlan:
    """Per-symbol bins: for each x_j, 2^r disjoint sets of y^n indices covering supp(P_j^n)."""

    n: int
    r: int
    s: int
    per_symbol_bins: tuple[tuple[np.ndarray, ...], ...]


@dataclass(frozen=True)
class BinningReport:
    n: int
    r: int
    s: int
    delta: float
    h_inf: float
    rate: float  # r/n bits per symbol
    degenerate: bool
    analytic_bound: float  # 2(2^{r-s} + 2^-r)
    per_symbol_tv: np.ndarray  # V(bin masses of P_j^n, U^r) per j
    pairwise_tv_max: float
    joint_tv: float  # V(P_{Z_n X}, P_{Z_n} P_X) under the composed f_n
    leakage: float  # I(X; Z_n) in bits
    decoder_error_prob: float
    bin_masses: tuple[np.ndarray, ...]
    realized_tv: np.ndarray  # TV to uniform of the f_n pushforwards (decoding included)
    plan: BinningPlan


def _guard_size(n: int, ny: int) -> None:
    if n < 1:
        raise ValidationError("n must be at least 1")
    if n * math.log2(ny) > _MEMORY_GUARD_BITS:
        raise InstanceTooLargeError(
            f"|Y|^n = {ny}^{n} exceeds the 2^{_MEMORY_GUARD_BITS} enumeration guard"
        )


def product_distribution(k: Kernel, x_index: int, n: int) -> Pmf:
    """Exact product pmf P_{Y^n|X=x_j} over Y^n, sequences in lexicographic order.

    Every entry is at most 2^{-n H*_inf(Y|X)}.
    """
    _guard_size(n, k.n_out)
    if not 0 <= x_index < k.n_in:
        raise ValidationError(f"x index {x_index} outside the input alphabet")
    row = k.rows[x_index]
    p = row.copy()
    for _ in range(n - 1):
        p = np.outer(p, row).ravel()
    return Pmf(p / p.sum())


def build_bins(p, r: int, s: int) -> list[np.ndarray]:
    """Greedy near-uniform binning of a pmf over Y^n into 2^r bins.

    Mass points are taken in descending probability with lexicographic
    tie-break; a bin closes as soon as its mass reaches 2^-r - 2^-s, and once
    2^r - 1 bins are closed all leftover support goes into the final bin.
    Exhausting the support before 2^r - 1 bins close cannot happen when
    s < n H*_inf, and raises an internal error otherwise.
    """
    mass = p.mass if isinstance(p, Pmf) else np.asarray(p, dtype=float)
    if r < 0 or s < r:
        raise ValidationError(f"need 0 <= r <= s, got r={r}, s={s}")
    n_bins = 1 << r
    order = np.argsort(-mass, kind="stable")
    support = order[mass[order] > 0]
    if r == 0:
        return [support]
    lower = 2.0**-r - 2.0**-s
    bins: list[np.ndarray] = []
    pos = 0
    while len(bins) < n_bins - 1:
        start = pos
        acc = 0.0
        while acc < lower:
            if pos >= support.size:
                raise RuntimeError(
                    "bin construction exhausted the support before 2^r - 1 bins closed; "
                    "the caller violated s < n*H_inf"
                )
            acc += mass[support[pos]]
            pos += 1
        bins.append(support[start:pos])
    bins.append(support[pos:])
    return bins


def ml_decode(k: Kernel, prior, yseq) -> int:
    """Maximum-likelihood estimate of the input symbol from one sequence y^n.

    Returns argmax_x P(y^n | x) with ties broken toward the smaller x index.
    The prior is accepted for interface symmetry with the exact-error
    computation but does not influence the ML rule.
    """
    seq = np.asarray(yseq, dtype=int)
    if seq.ndim != 1 or seq.size == 0:
        raise ValidationError("y sequence must be a non-empty 1-d index array")
    if np.any(seq < 0) or np.any(seq >= k.n_out):
        raise ValidationError("y sequence contains symbols outside the output alphabet")
    lik = k.rows[:, seq].prod(axis=1)
    return int(np.argmax(lik))


def ml_decode_all(k: Kernel, prior, n: int) -> tuple[np.ndarray, float]:
    """Decode every sequence in Y^n; return (decisions, exact error probability).

    The error P(X != psi(Y^n)) is an exact sum over all sequences. Decoding
    cannot be reliable when two kernel rows coincide; that case is warned.
    """
    _guard_size(n, k.n_out)
    prior_mass = prior.mass if isinstance(prior, Pmf) else np.asarray(prior, dtype=float)
    if prior_mass.size != k.n_in:
        raise ValidationError("prior does not match the kernel input alphabet")
    for a in range(k.n_in):
        for b in range(a + 1, k.n_in):
            if np.abs(k.rows[a] - k.rows[b]).max() < 1e-12:
                log.warning("kernel rows %d and %d coincide; ML decoding cannot separate them", a, b)
    products = np.stack([product_distribution(k, x, n).mass for x in range(k.n_in)])
    decisions = np.argmax(products, axis=0)
    correct = sum(
        float(prior_mass[x] * products[x, decisions == x].sum()) for x in range(k.n_in)
    )
    return decisions, max(1.0 - correct, 0.0)


def multiletter_evaluate(j: JointDistribution, n: int, delta: float) -> BinningReport:
    """Run the full construction at block length n and slack delta.

    Sets r = floor(n(H - delta)) and s = floor(n(H - delta/2)); r <= 0 yields
    a flagged degenerate zero-rate report (a single bin, constant Z_n).
    Requires 0 < delta <= (2/3) H*_inf(Y|X) whenever H*_inf > 0.
    """
    kernel = j.conditional_y_given_x()
    h_inf = conditional_min_entropy(kernel)
    if h_inf > 0:
        if not 0 < delta <= (2.0 / 3.0) * h_inf + 1e-12:
            raise ValidationError(
                f"delta must lie in (0, {(2.0 / 3.0) * h_inf:.6f}] for H*_inf = {h_inf:.6f}"
            )
        r = int(math.floor(n * (h_inf - delta)))
        s = int(math.floor(n * (h_inf - delta / 2.0)))
    else:
        r, s = 0, 0
    r = max(r, 0)
    s = max(s, r)
    degenerate = r == 0
    _guard_size(n, j.n_y)

    m = j.n_x
    products = np.stack([product_distribution(kernel, x, n).mass for x in range(m)])
    max_allowed = 2.0 ** (-n * h_inf) + 1e-15
    if products.max() > max_allowed:
        raise AssertionError("a product-distribution entry exceeds 2^{-n H_inf}")

    per_bins = []
    bin_masses = []
    n_bins = 1 << r
    for x in range(m):
        bins = build_bins(products[x], r, s)
        per_bins.append(tuple(bins))
        bin_masses.append(np.array([products[x, b].sum() for b in bins]))
    plan = BinningPlan(n=n, r=r, s=s, per_symbol_bins=tuple(per_bins))

    uniform = 2.0**-r
    per_symbol_tv = np.array([np.abs(uniform - bm).sum() for bm in bin_masses])
    analytic_bound = 2.0 * (2.0 ** (r - s) + 2.0**-r)
    if np.any(per_symbol_tv >= analytic_bound):
        raise AssertionError("per-symbol TV reached the analytic bound; construction broken")
    pairwise = 0.0
    for a in range(m):
        for b in range(a + 1, m):
            pairwise = max(pairwise, float(np.abs(bin_masses[a] - bin_masses[b]).sum()))

    decisions, decoder_error = ml_decode_all(kernel, Pmf(j.p_x), n)
    zbin = np.zeros((m, products.shape[1]), dtype=np.int64)
    for x in range(m):
        for i, b in enumerate(per_bins[x]):
            zbin[x, b] = i
    z_of_seq = zbin[decisions, np.arange(products.shape[1])]

    pushforward = np.stack(
        [np.bincount(z_of_seq, weights=products[x], minlength=n_bins) for x in range(m)]
    )
    realized_tv = np.abs(pushforward - uniform).sum(axis=1)

    p_zx = pushforward * j.p_x[:, None]  # (m, 2^r), joint of (X, Z_n)
    p_z = p_zx.sum(axis=0)
    if n_bins == 1:  # constant Z_n carries nothing, exactly
        leakage = 0.0
        joint_tv = 0.0
    else:
        leakage = max(
            entropy_bits(j.p_x) + entropy_bits(p_z) - entropy_bits(p_zx), 0.0
        )
        joint_tv = float(np.abs(p_zx - j.p_x[:, None] * p_z[None, :]).sum())

    return BinningReport(
        n=n,
        r=r,
        s=s,
        delta=float(delta),
        h_inf=h_inf,
        rate=r / n,
        degenerate=degenerate,
        analytic_bound=analytic_bound,
        per_symbol_tv=per_symbol_tv,
        pairwise_tv_max=pairwise,
        joint_tv=joint_tv,
        leakage=leakage,
        decoder_error_prob=decoder_error,
        bin_masses=tuple(bin_masses),
        realized_tv=realized_tv,
        plan=plan,
    )
