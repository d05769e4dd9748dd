"""Privacy filters: channels Y -> Z and their exact evaluation under X -> Y -> Z.

A filter never sees X directly; its leakage I(X;Z) is induced through the
Markov chain. Filters are immutable value objects and evaluation is pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AlphabetMismatchError, ValidationError
from .prob import JointDistribution, Kernel, Pmf, entropy_bits

_DET_TOL = 1e-12


class PrivacyFilter:
    """A channel P_{Z|Y}. Default output cardinality is |Y| + 1 (Caratheodory)."""

    __slots__ = ("kernel", "deterministic")

    def __init__(self, kernel, deterministic: bool | None = None):
        if not isinstance(kernel, Kernel):
            kernel = Kernel(np.asarray(kernel, dtype=float))
        self.kernel = kernel
        if deterministic is None:
            deterministic = bool(np.all(np.abs(kernel.rows - np.round(kernel.rows)) < _DET_TOL))
        self.deterministic = deterministic

    @property
    def z_card(self) -> int:
        return self.kernel.n_out

    @property
    def matrix(self) -> np.ndarray:
        return self.kernel.rows

    @classmethod
    def identity(cls, n_y: int) -> "PrivacyFilter":
        return cls(np.eye(n_y), deterministic=True)

    @classmethod
    def constant(cls, n_y: int, z_card: int = 1, z_index: int = 0) -> "PrivacyFilter":
        rows = np.zeros((n_y, z_card))
        rows[:, z_index] = 1.0
        return cls(rows, deterministic=True)

    def widened(self, z_card: int) -> "PrivacyFilter":
        """The same filter padded with unused Z symbols up to z_card columns."""
        if z_card < self.z_card:
            raise ValidationError("cannot widen a filter to fewer output symbols")
        if z_card == self.z_card:
            return self
        rows = np.zeros((self.kernel.n_in, z_card))
        rows[:, : self.z_card] = self.kernel.rows
        return PrivacyFilter(rows, deterministic=self.deterministic)

    def __repr__(self) -> str:
        kind = "deterministic" if self.deterministic else "stochastic"
        return f"PrivacyFilter({self.kernel.n_in}->{self.z_card}, {kind})"


@dataclass(frozen=True)
class FilterEvaluation:
    """Both sides of the tradeoff for one filter, plus the induced P_Z."""

    utility: float  # I(Y;Z) in bits
    leakage: float  # I(X;Z) in bits
    induced_pz: Pmf


def filter_from_function(mapping: Sequence[int], z_card: int, n_y: int | None = None) -> PrivacyFilter:
    """Deterministic filter Z = f(Y) from a total assignment of Y indices to Z indices."""
    idx = np.asarray(mapping, dtype=int)
    if idx.ndim != 1 or idx.size == 0:
        raise ValidationError("mapping must be a non-empty sequence of Z indices")
    if n_y is not None and idx.size != n_y:
        raise ValidationError(f"mapping covers {idx.size} Y symbols, expected {n_y}")
    if np.any(idx < 0) or np.any(idx >= z_card):
        raise ValidationError(f"mapping image outside range(0, {z_card})")
    rows = np.zeros((idx.size, z_card))
    rows[np.arange(idx.size), idx] = 1.0
    return PrivacyFilter(rows, deterministic=True)


def evaluate_filter(j: JointDistribution, f: PrivacyFilter) -> FilterEvaluation:
    """Exact utility I(Y;Z) and leakage I(X;Z) of a filter on a joint.

    P_XZ(x,z) = sum_y P_XY(x,y) f(z|y) and P_YZ(y,z) = P_Y(y) f(z|y).
    """
    if f.kernel.n_in != j.n_y:
        raise AlphabetMismatchError(
            f"filter input alphabet size {f.kernel.n_in} != |Y| = {j.n_y}"
        )
    rows = f.kernel.rows
    pz = j.p_y @ rows
    pxz = j.probs @ rows
    pyz = j.p_y[:, None] * rows
    hz = entropy_bits(pz)
    utility = max(entropy_bits(j.p_y) + hz - entropy_bits(pyz), 0.0)
    leakage = max(entropy_bits(j.p_x) + hz - entropy_bits(pxz), 0.0)
    return FilterEvaluation(utility=utility, leakage=leakage, induced_pz=Pmf(pz / pz.sum()))
