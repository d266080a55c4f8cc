"""Loss functions and their lambda-c transforms f^{lc}(x) = sup_y (f(y) - l*c(x,y)).

Closed forms exist for the average value-at-risk loss (power costs of
exponent 1 and 2), the monotone mean-variance loss (exponent 2), the
value-at-risk indicator loss (any exponent), and the hedged call payoff
(cost (x-y)^2/2); a two-stage grid search covers everything else.  A cost
kappa*|x-y|^p under multiplier lambda equals |x-y|^p under lambda*kappa,
so every closed form is stated for kappa = 1 and the scale is folded in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import CostFn
from .measures import _eval_vec


class UnsupportedCostError(ValueError):
    """No closed-form transform for this (loss, cost) pair."""


@dataclass(frozen=True)
class TransformResult:
    value: float
    argmax_hint: float | None = None


class TransformedFunction:
    """Vectorized x -> f^{lc}(x), with kink locations for the quadrature.

    ``finite=False`` marks a transform that is identically +inf (an
    x-independent divergence, e.g. AV@R loss with exponent-1 cost and
    lambda below 1/alpha).
    """

    def __init__(self, evaluate, breakpoints=(), finite=True):
        self._evaluate = evaluate
        self.breakpoints = tuple(b for b in breakpoints if math.isfinite(b))
        self.finite = finite

    @classmethod
    def always_infinite(cls):
        return cls(lambda xs: np.full(np.shape(xs), math.inf), finite=False)

    def __call__(self, xs):
        xs = np.asarray(xs, dtype=float)
        if not self.finite:
            return np.full(xs.shape, math.inf)
        return self._evaluate(xs)


def _fold_scale(cost, lam):
    """Multiplier against the unit-scale cost |x-y|^p."""
    return lam * cost.scale, cost.exponent


# ---------------------------------------------------------------------------
# closed forms (scalar entry points mirror the derivations; the loss classes
# below wrap them vectorized)


def avar_transform(alpha, cost, lam, x):
    """Transform of l(x) = x+/alpha under power cost of exponent 1 or 2."""
    lam_eff, p = _fold_scale(cost, lam)
    if p == 2.0:
        if lam_eff == 0.0:
            return math.inf
        return max(x + 1.0 / (4.0 * lam_eff * alpha), 0.0) / alpha
    if p == 1.0:
        if lam_eff < 1.0 / alpha:
            return math.inf
        return max(x, 0.0) / alpha
    raise UnsupportedCostError(f"avar transform needs exponent 1 or 2, got {p}")


def meanvar_transform(lam, x):
    """Transform of the monotone mean-variance loss under c(x,y) = (x-y)^2."""
    if lam <= 0.5:
        return math.inf
    scale = 2.0 * lam / (2.0 * lam - 1.0)
    return scale * MeanVarLoss()(x) + 1.0 / (4.0 * lam - 2.0)


def var_indicator_transform(alpha, cost, lam, x):
    """Transform of 1_{(0,inf)} - alpha under power cost of any exponent.

    Equals 1_{(0,inf)}(x) + (1 - lam|x|^p) 1_{(-lam^{-1/p}, 0]}(x) - alpha,
    with the convention 0^{-1/p} = inf.
    """
    lam_eff, p = _fold_scale(cost, lam)
    width = math.inf if lam_eff == 0.0 else lam_eff ** (-1.0 / p)
    if x > 0.0:
        return 1.0 - alpha
    if -width < x:  # window (-width, 0]
        return 1.0 - lam_eff * abs(x) ** p - alpha
    return -alpha


def call_payoff_transform(k, s, a, lam, x):
    """sup_y ((y-k)+ + a(y-s) - lam (y-x)^2 / 2) in closed form.

    The cost here is fixed to c(x,y) = (x-y)^2/2; lambda must be positive.
    """
    if not lam > 0.0:
        raise ValueError("call payoff transform requires lambda > 0")
    shift = k - (2.0 * a + 1.0) / (2.0 * lam)
    return max(x - shift, 0.0) + a * (x - s) + a * a / (2.0 * lam)


# ---------------------------------------------------------------------------
# generic grid transform


def _cost_matrix(cost, xs, ys):
    if hasattr(cost, "pairwise"):
        return cost.pairwise(xs, ys)
    return np.asarray(cost(xs[:, None], ys[None, :]), dtype=float)


def grid_transform_batch(f, cost, lam, xs, domain, nodes=1024, refine=256):
    """Two-stage grid sup of f(y) - lam*c(x,y) for a batch of x values.

    Stage one scans a uniform grid over ``domain`` (with every x adjoined,
    so the value dominates f(x)); stage two rescans one coarse step around
    each incumbent.  Handles discontinuous and kinked f.
    """
    xs = np.asarray(xs, dtype=float)
    lo, hi = float(domain[0]), float(domain[1])
    ys = np.linspace(lo, hi, nodes)
    fy = _eval_vec(f, ys)
    obj = fy[None, :] - lam * _cost_matrix(cost, xs, ys)
    best_idx = np.argmax(obj, axis=1)
    best = obj[np.arange(xs.size), best_idx]
    # y = x is always a candidate: c(x, x) = 0
    best = np.maximum(best, _eval_vec(f, xs))
    step = (hi - lo) / max(nodes - 1, 1)
    centers = ys[best_idx]
    offsets = np.linspace(-step, step, refine)
    yr = np.clip(centers[:, None] + offsets[None, :], lo, hi)
    fr = _eval_vec(f, yr.ravel()).reshape(yr.shape)
    cr = cost(np.repeat(xs, refine), yr.ravel()).reshape(yr.shape) if not hasattr(cost, "pairwise") \
        else np.asarray(cost(xs[:, None], yr), dtype=float)
    best = np.maximum(best, np.max(fr - lam * cr, axis=1))
    return best, centers


def generic_ctransform(f, cost, lam, x, domain, nodes=1024, refine=256):
    """Single-point grid transform; see grid_transform_batch."""
    if nodes < 16:
        raise ValueError(f"generic transform needs at least 16 nodes, got {nodes}")
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    vals, centers = grid_transform_batch(f, cost, lam, np.array([x]), domain, nodes, refine)
    return TransformResult(value=float(vals[0]), argmax_hint=float(centers[0]))


# ---------------------------------------------------------------------------
# loss functions


class AvarLoss:
    """l(x) = x+/alpha, the Rockafellar-Uryasev average value-at-risk loss."""

    def __init__(self, alpha):
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        self.alpha = float(alpha)

    def __call__(self, x):
        return np.maximum(np.asarray(x, dtype=float), 0.0) / self.alpha

    def breakpoints(self):
        return (0.0,)

    def lambda_transform(self, cost, lam):
        lam_eff, p = _fold_scale(cost, lam)
        alpha = self.alpha
        if p == 2.0:
            if lam_eff == 0.0:
                return TransformedFunction.always_infinite()
            shift = 1.0 / (4.0 * lam_eff * alpha)
            return TransformedFunction(
                lambda xs: np.maximum(xs + shift, 0.0) / alpha,
                breakpoints=(-shift,),
            )
        if p == 1.0:
            if lam_eff < 1.0 / alpha:
                return TransformedFunction.always_infinite()
            return TransformedFunction(
                lambda xs: np.maximum(xs, 0.0) / alpha,
                breakpoints=(0.0,),
            )
        raise UnsupportedCostError(f"avar transform needs exponent 1 or 2, got {p}")


class MeanVarLoss:
    """l(x) = (((1+x)+)^2 - 1)/2, the monotone mean-variance loss."""

    def __call__(self, x):
        return (np.maximum(1.0 + np.asarray(x, dtype=float), 0.0) ** 2 - 1.0) / 2.0

    def breakpoints(self):
        return (-1.0,)

    def lambda_transform(self, cost, lam):
        lam_eff, p = _fold_scale(cost, lam)
        if p != 2.0:
            raise UnsupportedCostError(f"mean-variance transform needs exponent 2, got {p}")
        if lam_eff <= 0.5:
            return TransformedFunction.always_infinite()
        scale = 2.0 * lam_eff / (2.0 * lam_eff - 1.0)
        const = 1.0 / (4.0 * lam_eff - 2.0)
        return TransformedFunction(
            lambda xs: scale * self(xs) + const,
            breakpoints=(-1.0,),
        )


class VarIndicatorLoss:
    """l(x) = 1_{(0,inf)}(x) - alpha, the value-at-risk shortfall loss."""

    def __init__(self, alpha):
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        self.alpha = float(alpha)

    def __call__(self, x):
        return (np.asarray(x, dtype=float) > 0.0).astype(float) - self.alpha

    def breakpoints(self):
        return (0.0,)

    def lambda_transform(self, cost, lam):
        lam_eff, p = _fold_scale(cost, lam)
        alpha = self.alpha
        width = math.inf if lam_eff == 0.0 else lam_eff ** (-1.0 / p)

        def evaluate(xs):
            xs = np.asarray(xs, dtype=float)
            out = np.where(xs > 0.0, 1.0 - alpha, -alpha)
            window = (xs > -width) & (xs <= 0.0)
            out = np.where(window, 1.0 - lam_eff * np.abs(xs) ** p - alpha, out)
            return out

        return TransformedFunction(evaluate, breakpoints=(0.0, -width))


class TabulatedLoss:
    """Piecewise-linear loss through (points, values), constant outside.

    For cost exponents <= 1 the transform is exact (the objective is
    piecewise convex in y, so the sup sits on a knot or on y = x); larger
    exponents fall back to the grid transform on a padded knot span.
    """

    def __init__(self, points, values):
        pts = np.asarray(points, dtype=float)
        vals = np.asarray(values, dtype=float)
        if pts.ndim != 1 or pts.shape != vals.shape or pts.size < 2:
            raise ValueError("tabulated loss needs matching 1-D points/values, length >= 2")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("tabulated points must be strictly increasing")
        self.points = pts
        self.values = vals

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.points, self.values)

    def breakpoints(self):
        return tuple(self.points.tolist())

    def lambda_transform(self, cost, lam):
        if cost.exponent <= 1.0:
            def evaluate(xs):
                xs = np.asarray(xs, dtype=float)
                cand = self.values[None, :] - lam * cost.pairwise(xs, self.points)
                return np.maximum(cand.max(axis=1), self(xs))
            return TransformedFunction(evaluate, breakpoints=self.breakpoints())

        lam_eff, p = _fold_scale(cost, lam)
        span = self.points[-1] - self.points[0]
        slopes = np.abs(np.diff(self.values) / np.diff(self.points))
        lmax = float(slopes.max()) if slopes.size else 0.0
        if lam_eff > 0.0 and lmax > 0.0:
            pad = (lmax / (lam_eff * p)) ** (1.0 / (p - 1.0)) + 0.05 * span
        else:
            pad = 0.05 * span
        domain = (self.points[0] - pad, self.points[-1] + pad)

        def evaluate(xs):
            vals, _ = grid_transform_batch(self, cost, lam, np.atleast_1d(xs), domain)
            return vals

        return TransformedFunction(evaluate, breakpoints=self.breakpoints())


class ScaledLoss:
    """factor * base, sharing the base transform via sup(cf - lc) = c sup(f - (l/c)c)."""

    def __init__(self, base, factor):
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        self.base = base
        self.factor = float(factor)

    def __call__(self, x):
        return self.factor * self.base(x)

    def breakpoints(self):
        return self.base.breakpoints()

    def lambda_transform(self, cost, lam):
        inner = self.base.lambda_transform(cost, lam / self.factor)
        if not inner.finite:
            return TransformedFunction.always_infinite()
        return TransformedFunction(
            lambda xs: self.factor * inner(xs),
            breakpoints=inner.breakpoints,
        )


# ---------------------------------------------------------------------------
# transform-capable wrappers for arbitrary functions


class TabulatedFunction:
    """A function known on a finite support; the transform is a finite max.

    This is the object the duality certification runs on: with the primal
    restricted to the same support, sup_y ranges over exactly these points
    and both sides of the duality live on one finite space.
    """

    def __init__(self, points, values):
        pts = np.asarray(points, dtype=float)
        vals = np.asarray(values, dtype=float)
        if pts.shape != vals.shape or pts.ndim != 1 or pts.size == 0:
            raise ValueError("points and values must be matching 1-D arrays")
        self.points = pts
        self.values = vals

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.points, self.values)

    def breakpoints(self):
        return ()

    def lambda_transform(self, cost, lam):
        def evaluate(xs):
            xs = np.asarray(xs, dtype=float)
            return (self.values[None, :] - lam * _cost_matrix(cost, xs, self.points)).max(axis=1)
        return TransformedFunction(evaluate)


class GridFunction:
    """Arbitrary function with a declared search domain; grid transform only.

    Accepts any cost callable, including truncated ones, which is what the
    bounded-cost degeneracy checks exercise.
    """

    def __init__(self, f, domain, nodes=1024, refine=256):
        if not domain[1] > domain[0]:
            raise ValueError("domain must be a nonempty interval")
        self.f = f
        self.domain = (float(domain[0]), float(domain[1]))
        self.nodes = int(nodes)
        self.refine = int(refine)

    def __call__(self, x):
        return _eval_vec(self.f, np.asarray(x, dtype=float))

    def breakpoints(self):
        return ()

    def lambda_transform(self, cost, lam):
        def evaluate(xs):
            vals, _ = grid_transform_batch(
                self.f, cost, lam, np.atleast_1d(xs), self.domain, self.nodes, self.refine
            )
            return vals
        return TransformedFunction(evaluate)


def loss_from_config(spec):
    """Build a loss from its config dict, e.g. {"type": "avar", "alpha": 0.05}."""
    kind = spec.get("type")
    if kind == "avar":
        return AvarLoss(spec["alpha"])
    if kind == "meanvar":
        return MeanVarLoss()
    if kind == "var_indicator":
        return VarIndicatorLoss(spec["alpha"])
    if kind == "tabulated":
        return TabulatedLoss(spec["points"], spec["values"])
    raise ValueError(f"unknown loss type {kind!r}")
