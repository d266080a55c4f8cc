"""Penalization functions phi and their convex conjugates phi*.

Each penalty is convex, increasing, lower semicontinuous with phi(0) = 0.
Infinite values are ordinary floats (math.inf) and propagate through the
dual objective by saturation; they are routine for the ball and linear
variants, not exceptional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class PenaltyError(ValueError):
    pass


@dataclass(frozen=True)
class BallIndicator:
    """phi = infinity * 1_{(delta, inf]}: hard transport budget of radius delta.

    delta = 0 is the degenerate no-ambiguity case (only the baseline is
    feasible); callers special-case it since the conjugate collapses to 0.
    """

    delta: float = 0.1
    name = "ball"

    def __post_init__(self):
        if self.delta < 0:
            raise PenaltyError(f"ball radius must be >= 0, got {self.delta}")

    def phi(self, x):
        return 0.0 if x <= self.delta else math.inf

    def phi_star(self, lam):
        return self.delta * lam

    # sup of the finite domain of phi (used by the numeric conjugate) and
    # of the finite domain of phi_star (used by the lambda search).
    def phi_domain_sup(self):
        return self.delta

    def lambda_domain_sup(self):
        return math.inf


@dataclass(frozen=True)
class Linear:
    """phi(x) = x, whose conjugate is the indicator of lambda <= 1."""

    name = "linear"

    def phi(self, x):
        return x

    def phi_star(self, lam):
        return 0.0 if lam <= 1.0 else math.inf

    def phi_domain_sup(self):
        return math.inf

    def lambda_domain_sup(self):
        return 1.0


@dataclass(frozen=True)
class Power:
    """phi(x) = x^p / p for p > 1, with conjugate lambda^q / q, 1/p + 1/q = 1."""

    p_pen: float = 2.0
    name = "power"

    def __post_init__(self):
        if not self.p_pen > 1:
            raise PenaltyError(f"power penalty needs p > 1, got {self.p_pen}")

    @property
    def q_conj(self):
        return self.p_pen / (self.p_pen - 1.0)

    def phi(self, x):
        return x**self.p_pen / self.p_pen

    def phi_star(self, lam):
        q = self.q_conj
        return lam**q / q

    def phi_domain_sup(self):
        return math.inf

    def lambda_domain_sup(self):
        return math.inf


@dataclass(frozen=True)
class Exponential:
    """phi(x) = e^x - 1 on x >= 0.

    The conjugate is taken over the domain [0, inf) where phi is defined,
    giving 0 on lambda in [0, 1] and lambda*log(lambda) - lambda + 1 beyond;
    the unrestricted textbook conjugate disagrees on lambda < 1 and the
    numeric conjugate arbitrates in favour of the restricted one.
    """

    name = "exponential"

    def phi(self, x):
        return math.expm1(x)

    def phi_star(self, lam):
        if lam <= 1.0:
            return 0.0
        return lam * math.log(lam) - lam + 1.0

    def phi_domain_sup(self):
        return math.inf

    def lambda_domain_sup(self):
        return math.inf


def phi(pen, x):
    """Penalty value at transport cost x >= 0."""
    if x < 0:
        raise PenaltyError(f"phi is defined on x >= 0, got {x}")
    return float(pen.phi(x))


def phi_star(pen, lam):
    """Convex conjugate sup_{x>=0}(lam*x - phi(x)) in closed form."""
    if lam < 0:
        raise PenaltyError(f"phi_star is defined on lambda >= 0, got {lam}")
    return float(pen.phi_star(lam))


def phi_star_numeric(pen, lam, grid=10_000):
    """Grid validation of the closed-form conjugate.

    Takes the sup of lam*x - phi(x) over a log-spaced grid restricted to the
    finite domain of phi, always including the domain edge itself so that
    indicator penalties are resolved exactly.
    """
    if lam < 0:
        raise PenaltyError(f"phi_star_numeric is defined on lambda >= 0, got {lam}")
    hi = pen.phi_domain_sup()
    if not math.isfinite(hi):
        hi = max(1.0, 10.0 * (1.0 + lam))
    xs = np.concatenate(([0.0], np.geomspace(1e-10, hi, grid), [hi]))
    best = -math.inf
    for x in xs:
        px = pen.phi(float(x))
        if math.isinf(px):
            continue
        best = max(best, lam * float(x) - px)
    return best


_BY_NAME = {"ball": BallIndicator, "linear": Linear, "power": Power, "exponential": Exponential}


def penalty_from_config(spec):
    """Build a penalty from its config dict, e.g. {"type": "ball", "delta": 0.1}."""
    kind = spec.get("type")
    if kind == "ball":
        return BallIndicator(delta=spec["delta"])
    if kind == "linear":
        return Linear()
    if kind == "power":
        return Power(p_pen=spec["p"])
    if kind == "exponential":
        return Exponential()
    raise PenaltyError(f"unknown penalty type {kind!r}")


def is_degenerate_ball(pen):
    """True for the zero-radius ball, which pins the law to the baseline."""
    return isinstance(pen, BallIndicator) and pen.delta == 0.0
