"""Scalar bracketing, golden-section minimization, and monotone bisection.

Shared by the dual engine, the risk measures, and the pricing module.  All
routines tolerate +inf objective values and track the best point actually
evaluated, so a minimum sitting on a domain edge is returned exactly.
"""

from __future__ import annotations

import math

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi


class Tracker:
    """Remembers the best (x, f(x)) over every evaluation of f."""

    def __init__(self, f):
        self.f = f
        self.best_x = None
        self.best_val = math.inf
        self.evaluations = 0

    def __call__(self, x):
        val = self.f(x)
        self.evaluations += 1
        if val < self.best_val:
            self.best_val = val
            self.best_x = x
        return val


def golden_min(f, lo, hi, tol, max_iter=200):
    """Golden-section search on [lo, hi]; returns (x, f(x), width).

    Assumes f unimodal on the interval (constant plateaus allowed).  The
    endpoints are evaluated too, so monotone objectives resolve to an edge.
    """
    a, b = float(lo), float(hi)
    if not b > a:
        fa = f(a)
        return a, fa, 0.0
    fa, fb = f(a), f(b)
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, fb = x2, f2
            x2, f2 = x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, fa = x1, f1
            x1, f1 = x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = f(x2)
        it += 1
    candidates = [(a, fa), (x1, f1), (x2, f2), (b, fb)]
    x, val = min(candidates, key=lambda t: t[1])
    return x, val, b - a


def bracket_min(f, x0, step, hi_cap=math.inf, grow=2.0, max_iter=200):
    """Expand right from x0 until f starts increasing; returns (lo, hi).

    f(x0) must be finite.  If the cap is reached first, the bracket ends at
    the cap.  Raises if f keeps decreasing past max_iter expansions (the
    objective is then judged unbounded from below on the ray).
    """
    xs = [x0]
    fs = [f(x0)]
    x = x0 + step
    for _ in range(max_iter):
        x = min(x, hi_cap)
        fx = f(x)
        xs.append(x)
        fs.append(fx)
        if fx > fs[-2] or x >= hi_cap:
            lo = xs[-3] if len(xs) >= 3 else x0
            return lo, x
        step *= grow
        x = x + step
    raise ArithmeticError("objective keeps decreasing; no bracket found")


def bisect_smallest(pred, lo, hi, iters=100):
    """Smallest x in (lo, hi] with pred(x) true, for monotone predicates.

    Requires pred(hi) true; pred(lo) is assumed false.
    """
    a, b = float(lo), float(hi)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if pred(mid):
            b = mid
        else:
            a = mid
    return b
