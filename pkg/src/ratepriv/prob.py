"""Exact discrete-probability primitives.

Everything here is base-2: entropies and mutual informations are in bits.
Inputs are explicit probability mass functions over finite alphabets; there
is no estimation from samples. The 0*log(0) = 0 convention applies
throughout. Validation uses an absolute tolerance of 1e-9 on total mass;
exact-identity assertions (Bayes consistency) use 1e-12.
"""
from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
from scipy.special import xlogy

from .errors import AlphabetMismatchError, ValidationError

log = logging.getLogger(__name__)

MASS_TOL = 1e-9
EXACT_TOL = 1e-12
_LN2 = np.log(2.0)


def _default_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def _check_mass(arr: np.ndarray, what: str) -> None:
    if arr.size == 0:
        raise ValidationError(f"{what} has an empty alphabet")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} contains non-finite entries")
    if np.any(arr < 0):
        idx = np.unravel_index(int(np.argmin(arr)), arr.shape)
        raise ValidationError(f"{what} has a negative entry {arr[idx]} at {idx}")
    total = float(arr.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise ValidationError(f"{what} sums to {total!r}, expected 1 within {MASS_TOL}")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.flags.writeable = False
    return arr


def entropy_bits(raw: np.ndarray) -> float:
    """Shannon entropy in bits of a nonnegative array, without validation.

    Internal building block: accepts any nonnegative array (joint tables,
    marginals, sub-normalized rows) and applies 0*log(0) = 0.
    """
    raw = np.asarray(raw, dtype=float)
    return float(-xlogy(raw, raw).sum() / _LN2) + 0.0


class Pmf:
    """A probability mass function over one finite alphabet."""

    __slots__ = ("mass", "labels")

    def __init__(self, mass, labels: Sequence[str] | None = None):
        arr = np.asarray(mass, dtype=float)
        if arr.ndim != 1:
            raise ValidationError("pmf mass must be one-dimensional")
        _check_mass(arr, "pmf")
        self.mass = _freeze(arr)
        self.labels = tuple(labels) if labels is not None else _default_labels("s", arr.size)
        if len(self.labels) != arr.size:
            raise ValidationError("pmf labels do not match alphabet size")

    def __len__(self) -> int:
        return self.mass.size

    def __repr__(self) -> str:
        return f"Pmf({np.array2string(self.mass, precision=6)})"


class Kernel:
    """A row-stochastic conditional distribution (channel)."""

    __slots__ = ("rows", "input_labels", "output_labels")

    def __init__(self, rows, input_labels=None, output_labels=None):
        arr = np.asarray(rows, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValidationError("kernel must be a non-empty 2-d array")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("kernel contains non-finite entries")
        if np.any(arr < 0):
            raise ValidationError("kernel has a negative entry")
        sums = arr.sum(axis=1)
        bad = np.abs(sums - 1.0) > MASS_TOL
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValidationError(f"kernel row {i} sums to {sums[i]!r}, expected 1 within {MASS_TOL}")
        self.rows = _freeze(arr)
        n_in, n_out = arr.shape
        self.input_labels = tuple(input_labels) if input_labels is not None else _default_labels("i", n_in)
        self.output_labels = tuple(output_labels) if output_labels is not None else _default_labels("o", n_out)
        if len(self.input_labels) != n_in or len(self.output_labels) != n_out:
            raise ValidationError("kernel labels do not match its shape")

    @property
    def n_in(self) -> int:
        return self.rows.shape[0]

    @property
    def n_out(self) -> int:
        return self.rows.shape[1]

    def __repr__(self) -> str:
        return f"Kernel({self.n_in}->{self.n_out})"


class JointDistribution:
    """A joint pmf over X x Y, the ground truth for every quantity here.

    `probs[i, j]` is P(X = x_i, Y = y_j). Marginals are derived and cached.
    """

    __slots__ = ("probs", "x_labels", "y_labels", "_p_x", "_p_y")

    def __init__(self, probs, x_labels=None, y_labels=None):
        arr = np.asarray(probs, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError("joint distribution must be a 2-d array with both sides non-empty")
        _check_mass(arr, "joint distribution")
        self.probs = _freeze(arr)
        nx, ny = arr.shape
        self.x_labels = tuple(x_labels) if x_labels is not None else _default_labels("x", nx)
        self.y_labels = tuple(y_labels) if y_labels is not None else _default_labels("y", ny)
        if len(self.x_labels) != nx or len(self.y_labels) != ny:
            raise ValidationError("joint labels do not match its shape")
        self._p_x = _freeze(arr.sum(axis=1))
        self._p_y = _freeze(arr.sum(axis=0))

    @classmethod
    def from_input_and_channel(cls, p_x, channel: Kernel, x_labels=None, y_labels=None) -> "JointDistribution":
        """Build P_XY = P_X(x) * P_{Y|X}(y|x) from an input pmf and a channel."""
        px = np.asarray(p_x, dtype=float)
        if px.ndim != 1 or px.size != channel.n_in:
            raise AlphabetMismatchError("input pmf does not match channel input alphabet")
        probs = px[:, None] * channel.rows
        return cls(
            probs,
            x_labels=x_labels if x_labels is not None else channel.input_labels,
            y_labels=y_labels if y_labels is not None else channel.output_labels,
        )

    @property
    def n_x(self) -> int:
        return self.probs.shape[0]

    @property
    def n_y(self) -> int:
        return self.probs.shape[1]

    @property
    def p_x(self) -> np.ndarray:
        return self._p_x

    @property
    def p_y(self) -> np.ndarray:
        return self._p_y

    def conditional_y_given_x(self) -> Kernel:
        """The channel P_{Y|X}. Requires every x symbol to have positive mass."""
        if np.any(self._p_x <= 0):
            raise ValidationError("P_{Y|X} undefined: some x symbol has zero mass")
        return Kernel(self.probs / self._p_x[:, None], self.x_labels, self.y_labels)

    def drop_null_y(self) -> "JointDistribution":
        """Return a copy with zero-mass Y symbols removed (warned, they affect nothing)."""
        keep = self._p_y > 0
        if np.all(keep):
            return self
        dropped = [self.y_labels[i] for i in np.nonzero(~keep)[0]]
        log.warning("dropping zero-probability Y symbols: %s", dropped)
        return JointDistribution(
            self.probs[:, keep] / self.probs[:, keep].sum(),
            self.x_labels,
            tuple(np.asarray(self.y_labels, dtype=object)[keep]),
        )

    def __repr__(self) -> str:
        return f"JointDistribution({self.n_x}x{self.n_y})"


def _mass_of(p) -> np.ndarray:
    return p.mass if isinstance(p, Pmf) else np.asarray(p, dtype=float)


def entropy(p) -> float:
    """H(p) = -sum p log2 p in bits, with 0*log(0) = 0."""
    mass = _mass_of(p)
    _check_mass(mass, "pmf")
    return entropy_bits(mass)


def binary_entropy(q: float) -> float:
    """h(q), the entropy of a Bernoulli(q) in bits."""
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"binary entropy argument {q} outside [0, 1]")
    return entropy_bits(np.array([q, 1.0 - q]))


def joint_entropy(j: JointDistribution) -> float:
    """H(X, Y) in bits."""
    return entropy_bits(j.probs)


def mutual_information(j: JointDistribution) -> float:
    """I(X;Y) = H(X) + H(Y) - H(X,Y) in bits; clamped at 0 against roundoff."""
    val = entropy_bits(j.p_x) + entropy_bits(j.p_y) - entropy_bits(j.probs)
    return max(val, 0.0)


def total_variation(p, q) -> float:
    """V(P, Q) = sum |P - Q|, the L1 total variation convention with range [0, 2]."""
    pm, qm = _mass_of(p), _mass_of(q)
    if pm.shape != qm.shape:
        raise AlphabetMismatchError(f"total variation over mismatched alphabets {pm.shape} vs {qm.shape}")
    if isinstance(p, Pmf) and isinstance(q, Pmf) and p.labels != q.labels:
        raise AlphabetMismatchError("total variation over differently-labelled alphabets")
    return float(np.abs(pm - qm).sum())


def conditional_min_entropy(k: Kernel) -> float:
    """H*_inf(Y|X) = -log2 max_{x,y} P(y|x) in bits.

    Zero-probability entries map to +inf under -log and never attain the min,
    so only the largest entry matters.
    """
    return float(-np.log2(k.rows.max()))


def posterior_kernel(j: JointDistribution) -> Kernel:
    """The map y -> P_{X|Y}(.|y) as a kernel with rows indexed by y.

    Zero-mass y symbols have no posterior and are dropped with a warning.
    The result recomposes with P_Y to the original joint within 1e-12.
    """
    if float(j.probs.sum()) <= 0:
        raise ValidationError("posterior undefined for an all-zero joint")
    j = j.drop_null_y()
    rows = (j.probs / j.p_y[None, :]).T
    kern = Kernel(rows, input_labels=j.y_labels, output_labels=j.x_labels)
    recomposed = kern.rows.T * j.p_y[None, :]
    if np.abs(recomposed - j.probs).max() > EXACT_TOL:
        raise AssertionError("posterior recomposition drifted beyond 1e-12")
    return kern
