"""Adaptive Gauss-Legendre quadrature for vector-valued integrands.

Each panel is integrated with an ``order``-point rule on the whole panel and on
its two halves; the difference is the panel's error estimate.  The panel with
the worst error (relative to its component targets) is split until the summed
error meets ``max(atol, rtol * integral of |f|)`` in every component.  Panel
results are summed in order of position with ``math.fsum`` so the output is a
pure function of the inputs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class QuadratureError(RuntimeError):
    """Refinement exceeded the panel budget before meeting the tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    rtol: float = 1e-12
    atol: float = 0.0
    order: int = 20
    initial_panels: int = 16
    max_panels: int = 4000

    def __post_init__(self):
        if self.rtol <= 0 and self.atol <= 0:
            raise ValueError("need a positive rtol or atol")
        if self.order < 2 or self.initial_panels < 1 or self.max_panels < self.initial_panels:
            raise ValueError("bad quadrature spec")


@dataclass
class QuadResult:
    value: np.ndarray
    abs_value: np.ndarray
    error: np.ndarray
    panels: int
    evaluations: int


_RULES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _rule(order: int):
    if order not in _RULES:
        _RULES[order] = np.polynomial.legendre.leggauss(order)
    return _RULES[order]


class _Panel:
    __slots__ = ("lo", "hi", "val", "absval", "err")

    def __init__(self, lo, hi, val, absval, err):
        self.lo, self.hi = lo, hi
        self.val, self.absval, self.err = val, absval, err


def _evaluate_panels(f, bounds, order):
    """Whole-panel and half-panel sums for a batch of intervals in one call."""
    t, w = _rule(order)
    pieces = []
    for lo, hi in bounds:
        mid = 0.5 * (lo + hi)
        pieces.extend([(lo, hi), (lo, mid), (mid, hi)])
    lo = np.array([p[0] for p in pieces])
    hi = np.array([p[1] for p in pieces])
    half = 0.5 * (hi - lo)
    x = (0.5 * (lo + hi))[:, None] + half[:, None] * t[None, :]
    vals = np.asarray(f(x.ravel()), dtype=float)
    vals = vals.reshape((len(pieces), order) + vals.shape[1:])
    wts = (half[:, None] * w[None, :]).reshape((len(pieces), order) + (1,) * (vals.ndim - 2))
    sums = (vals * wts).sum(axis=1)
    abs_sums = (np.abs(vals) * wts).sum(axis=1)
    out = []
    for i, (lo_i, hi_i) in enumerate(bounds):
        whole, left, right = sums[3 * i], sums[3 * i + 1], sums[3 * i + 2]
        fine = left + right
        absfine = abs_sums[3 * i + 1] + abs_sums[3 * i + 2]
        out.append(_Panel(lo_i, hi_i, fine, absfine, np.abs(fine - whole)))
    return out, 3 * len(bounds) * order


def _ordered_sum(panels, attr):
    stack = np.stack([getattr(p, attr) for p in sorted(panels, key=lambda p: p.lo)])
    flat = stack.reshape(len(panels), -1)
    return np.array([math.fsum(col) for col in flat.T]).reshape(stack.shape[1:])


def integrate_interval(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                       spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Integrate ``f`` over [lo, hi].  ``f`` maps an (N,) array to (N, ...)."""
    if not hi > lo:
        raise ValueError("need hi > lo")
    edges = np.linspace(lo, hi, spec.initial_panels + 1)
    panels, evals = _evaluate_panels(f, list(zip(edges[:-1], edges[1:])), spec.order)
    while True:
        total = _ordered_sum(panels, "val")
        absval = _ordered_sum(panels, "absval")
        err = _ordered_sum(panels, "err")
        target = np.maximum(spec.atol, spec.rtol * absval)
        target = np.where(target > 0, target, np.finfo(float).tiny)
        if np.all(err <= target):
            return QuadResult(total, absval, err, len(panels), evals)
        if len(panels) >= spec.max_panels:
            raise QuadratureError(
                f"no convergence within {spec.max_panels} panels "
                f"(worst error ratio {float(np.max(err / target)):.3g})"
            )
        # split up to a quarter of the panels, worst first, skipping any already within its fair share
        score = np.array([float(np.max(p.err / target)) for p in panels])
        n_split = max(1, min(len(panels) // 4, spec.max_panels - len(panels)))
        worst = heapq.nlargest(n_split, range(len(panels)), key=lambda i: (score[i], -i))
        worst = [i for i in worst if score[i] * len(panels) > 1.0] or worst[:1]
        chosen = set(worst)
        bounds = []
        for i in sorted(chosen):
            p = panels[i]
            mid = 0.5 * (p.lo + p.hi)
            bounds.extend([(p.lo, mid), (mid, p.hi)])
        new, used = _evaluate_panels(f, bounds, spec.order)
        evals += used
        panels = [p for i, p in enumerate(panels) if i not in chosen] + new
