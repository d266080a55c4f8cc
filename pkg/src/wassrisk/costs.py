"""Transport cost functions kappa * |x - y|^p."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CostFn:
    """Power cost c(x, y) = scale * |x - y|**exponent with scale, exponent > 0.

    For exponent >= 1 and scale = 1 this is the p-th power Wasserstein cost.
    """

    scale: float = 1.0
    exponent: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"cost scale must be positive, got {self.scale}")
        if not self.exponent > 0:
            raise ValueError(f"cost exponent must be positive, got {self.exponent}")

    def __call__(self, x, y):
        return self.scale * np.abs(np.asarray(x, dtype=float) - y) ** self.exponent

    def pairwise(self, xs, ys):
        """Dense cost matrix over xs (rows) and ys (columns)."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        return self.scale * np.abs(xs[:, None] - ys[None, :]) ** self.exponent


class TruncatedCost:
    """min(base(x, y), cap): a bounded cost, outside the duality assumptions.

    Exists to demonstrate the degeneracy of the robust value under bounded
    costs; only the generic grid transform accepts it.
    """

    def __init__(self, base, cap):
        if not cap > 0:
            raise ValueError("truncation cap must be positive")
        self.base = base
        self.cap = float(cap)

    def __call__(self, x, y):
        return np.minimum(self.base(x, y), self.cap)

    def pairwise(self, xs, ys):
        return np.minimum(self.base.pairwise(xs, ys), self.cap)
