"""Baseline distributions: discrete atoms, Normal/LogNormal, quadrature.

All distributions expose ``cdf`` (right-continuous) and ``quantile`` (the
left-continuous generalized inverse).  Expectations against a parametric
law are computed by a quantile-transform Gauss-Legendre rule so that no
truncation of the support is ever needed; discrete expectations are exact
weighted sums.  Everything here is immutable and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import norm

ATOM_MERGE_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-12


class InvalidDistributionError(ValueError):
    pass


class QuadratureError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """Node count for the quantile-transform Gauss-Legendre rule.

    ``nodes`` is applied per smooth segment when breakpoints are declared.
    """

    nodes: int = 512

    def __post_init__(self):
        if self.nodes < 2:
            raise QuadratureError(f"quadrature needs at least 2 nodes, got {self.nodes}")


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=64)
def _leggauss_unit(n):
    """Gauss-Legendre nodes/weights shifted to (0, 1)."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


class DiscreteDistribution:
    """Finitely supported probability measure with sorted, distinct atoms.

    Atoms closer than ``ATOM_MERGE_TOL`` are merged (weights added) so the
    CDF stays strictly sorted; weights must be positive and sum to one.
    """

    def __init__(self, points, weights):
        pts = np.asarray(points, dtype=float)
        wts = np.asarray(weights, dtype=float)
        if pts.ndim != 1 or pts.shape != wts.shape or pts.size == 0:
            raise InvalidDistributionError("points and weights must be equal-length 1-D arrays")
        if not np.all(np.isfinite(pts)):
            raise InvalidDistributionError("atom locations must be finite")
        if np.any(wts <= 0.0):
            raise InvalidDistributionError("weights must be strictly positive")
        total = wts.sum()
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidDistributionError(f"weights sum to {total!r}, not 1")
        order = np.argsort(pts, kind="stable")
        pts, wts = pts[order], wts[order]
        merged_p, merged_w = [pts[0]], [wts[0]]
        for p, w in zip(pts[1:], wts[1:]):
            if p - merged_p[-1] <= ATOM_MERGE_TOL:
                merged_w[-1] += w
            else:
                merged_p.append(p)
                merged_w.append(w)
        self.points = np.array(merged_p)
        self.weights = np.array(merged_w)
        self._cumw = np.cumsum(self.weights)
        self._cumw[-1] = 1.0

    @classmethod
    def from_atoms(cls, atoms):
        """Build from ``[(point, weight), ...]`` pairs."""
        pts, wts = zip(*atoms)
        return cls(pts, wts)

    @classmethod
    def dirac(cls, point):
        return cls([point], [1.0])

    @property
    def atoms(self):
        return list(zip(self.points.tolist(), self.weights.tolist()))

    def cdf(self, t):
        idx = int(np.searchsorted(self.points, t, side="right"))
        return float(self._cumw[idx - 1]) if idx > 0 else 0.0

    def quantile(self, u):
        _check_level(u)
        idx = int(np.searchsorted(self._cumw, u, side="left"))
        idx = min(idx, len(self.points) - 1)
        return float(self.points[idx])

    def mean(self):
        return float(self.points @ self.weights)

    def __repr__(self):
        return f"DiscreteDistribution({len(self.points)} atoms on [{self.points[0]:g}, {self.points[-1]:g}])"


class Normal:
    """Gaussian baseline with mean ``mean`` and standard deviation ``std > 0``."""

    def __init__(self, mean, std):
        if not std > 0:
            raise InvalidDistributionError(f"std must be positive, got {std}")
        self.mean = float(mean)
        self.std = float(std)

    def cdf(self, t):
        return float(norm.cdf(t, loc=self.mean, scale=self.std))

    def quantile(self, u):
        _check_level(u)
        return float(norm.ppf(u, loc=self.mean, scale=self.std))

    def quantile_array(self, u):
        return norm.ppf(u, loc=self.mean, scale=self.std)

    def __repr__(self):
        return f"Normal({self.mean:g}, {self.std:g})"


class LogNormal:
    """Law of exp(N(log_mean, log_std^2)); support (0, infinity)."""

    def __init__(self, log_mean, log_std):
        if not log_std > 0:
            raise InvalidDistributionError(f"log_std must be positive, got {log_std}")
        self.log_mean = float(log_mean)
        self.log_std = float(log_std)

    def cdf(self, t):
        if t <= 0.0:
            return 0.0
        return float(norm.cdf((math.log(t) - self.log_mean) / self.log_std))

    def quantile(self, u):
        _check_level(u)
        return float(math.exp(self.log_mean + self.log_std * norm.ppf(u)))

    def quantile_array(self, u):
        return np.exp(self.log_mean + self.log_std * norm.ppf(u))

    def mean(self):
        return math.exp(self.log_mean + 0.5 * self.log_std**2)

    def __repr__(self):
        return f"LogNormal({self.log_mean:g}, {self.log_std:g})"


def _check_level(u):
    if not (0.0 < u < 1.0):
        raise ValueError(f"probability level must lie in (0, 1), got {u}")


def _eval_vec(f, xs):
    """Evaluate f on an array, falling back to a scalar loop."""
    try:
        out = np.asarray(f(xs), dtype=float)
        if out.shape == xs.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(f(x)) for x in np.atleast_1d(xs)])


def cdf(dist, t):
    """Right-continuous CDF of any supported distribution."""
    return dist.cdf(t)


def quantile(dist, u):
    """Left-continuous generalized inverse of the CDF."""
    return dist.quantile(u)


def var_level(dist, u):
    """inf{m : mu((m, inf)) <= u}, the strict-upper-tail quantile.

    This is the value-at-risk convention used throughout; it coincides with
    ``quantile(1 - u)`` for continuous laws but differs on atoms.
    """
    _check_level(u)
    if isinstance(dist, DiscreteDistribution):
        # mu((m, inf)) <= u  iff  F(m) >= 1 - u; F is a right-continuous step.
        target = 1.0 - u
        idx = int(np.searchsorted(dist._cumw, target - 1e-15, side="left"))
        idx = min(idx, len(dist.points) - 1)
        return float(dist.points[idx])
    if hasattr(dist, "var_level"):
        return dist.var_level(u)
    return dist.quantile(1.0 - u)


def expect(dist, f, quad=None, breakpoints=()):
    """Integral of ``f`` against ``dist``; +inf if f hits +inf on positive mass.

    Discrete laws are summed exactly.  Parametric laws use the quantile
    transform with Gauss-Legendre nodes; ``breakpoints`` are x-locations of
    kinks of ``f`` at which the (0,1) integration range is split so each
    Gauss-Legendre panel sees a smooth integrand.
    """
    quad = quad or DEFAULT_QUAD
    if isinstance(dist, DiscreteDistribution):
        vals = _eval_vec(f, dist.points)
        if np.any(np.isposinf(vals)):
            return math.inf
        return float(vals @ dist.weights)

    levels = [0.0, 1.0]
    for b in breakpoints:
        ub = dist.cdf(b)
        if 1e-15 < ub < 1.0 - 1e-15:
            levels.append(ub)
    levels = sorted(set(levels))

    nodes, wts = _leggauss_unit(quad.nodes)
    total = 0.0
    for lo, hi in zip(levels[:-1], levels[1:]):
        if hi - lo <= 1e-15:
            continue
        u = lo + (hi - lo) * nodes
        xs = dist.quantile_array(u) if hasattr(dist, "quantile_array") \
            else np.array([dist.quantile(v) for v in u])
        vals = _eval_vec(f, xs)
        if np.any(np.isposinf(vals)):
            return math.inf
        total += (hi - lo) * float(vals @ wts)
    return total


def discretize(dist, n, scheme="equal-probability"):
    """Reduce a parametric law to ``n`` atoms.

    ``equal-probability`` puts weight 1/n at the quantiles of (i - 0.5)/n;
    ``grid`` places atoms uniformly between the 0.001 and 0.999 quantiles
    and weights them by the probability of their Voronoi cell.
    """
    if n < 2:
        raise ValueError(f"discretize needs n >= 2, got {n}")
    if scheme == "equal-probability":
        u = (np.arange(n) + 0.5) / n
        pts = np.array([dist.quantile(v) for v in u])
        return DiscreteDistribution(pts, np.full(n, 1.0 / n))
    if scheme == "grid":
        pts = np.linspace(dist.quantile(1e-3), dist.quantile(1.0 - 1e-3), n)
        mids = 0.5 * (pts[:-1] + pts[1:])
        levels = np.concatenate(([0.0], [dist.cdf(m) for m in mids], [1.0]))
        wts = np.diff(levels)
        keep = wts > 0
        return DiscreteDistribution(pts[keep], wts[keep] / wts[keep].sum())
    raise ValueError(f"unknown discretization scheme {scheme!r}")


class SampleFileError(ValueError):
    pass


def load_samples(path):
    """Empirical measure from a text file with one real number per line."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise SampleFileError(f"{path}: line {lineno}: cannot parse {line!r} as a real number")
    if not values:
        raise SampleFileError(f"{path}: no samples found")
    n = len(values)
    return DiscreteDistribution(values, np.full(n, 1.0 / n))
