"""Charge-basis operators of a single transmon mode."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class ChargeBasisOperators:
    """Operators on the Cooper-pair number states -n_max..n_max.

    ``cos_op`` is real symmetric and ``sin_op`` is imaginary antisymmetric, so
    both are Hermitian and ``cos_op @ cos_op + sin_op @ sin_op`` is the
    identity away from the two truncation edges.
    """

    n_max: int
    n_op: np.ndarray
    cos_op: np.ndarray
    sin_op: np.ndarray

    @property
    def dimension(self) -> int:
        return 2 * self.n_max + 1

    @property
    def charges(self) -> np.ndarray:
        return np.diag(self.n_op)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@lru_cache(maxsize=8)
def charge_basis_operators(n_max: int) -> ChargeBasisOperators:
    if n_max < 1:
        raise ValueError("n_max must be positive")
    dim = 2 * n_max + 1
    charges = np.arange(-n_max, n_max + 1, dtype=float)
    # shift[i, i + 1] = 1 is |n><n+1|
    shift = np.eye(dim, k=1)
    return ChargeBasisOperators(
        n_max=n_max,
        n_op=_frozen(np.diag(charges)),
        cos_op=_frozen(0.5 * (shift + shift.T)),
        sin_op=_frozen(0.5j * (shift - shift.T)),
    )
