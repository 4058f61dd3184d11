"""Initial data and cell integration.

An :class:`InitialProfile` carries ``h(x)`` and ``u(x)`` plus the
points where either is non-smooth.  Integrals are split at those
points and evaluated with 5-point Gauss-Legendre, which is exact for the
piecewise polynomials used in the experiments (steps and parabolas).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)


@dataclass(frozen=True)
class InitialProfile:
    h: Callable
    u: Callable
    breakpoints: Sequence[float] = field(default_factory=tuple)

    def hu(self, x):
        return self.h(x) * self.u(x)


def integrate(func: Callable, a: float, b: float, breakpoints=()) -> float:
    """Integral of ``func`` over [a, b], split at interior breakpoints."""
    if b <= a:
        return 0.0
    cuts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        total += half * float(np.sum(_GL_W * func(mid + half * _GL_X)))
    return total


def cell_integrals(func: Callable, edges: np.ndarray, breakpoints=()) -> np.ndarray:
    edges = np.asarray(edges, dtype=float)
    return np.array([integrate(func, lo, hi, breakpoints) for lo, hi in zip(edges[:-1], edges[1:])])


def step_profile(x_jump, h_left, h_right, u_left, u_right, x_min=-np.inf, x_max=np.inf):
    """Piecewise-constant Riemann data; zero outside [x_min, x_max]."""

    def inside(x):
        x = np.asarray(x, dtype=float)
        return (x >= x_min) & (x <= x_max)

    def h(x):
        return np.where(inside(x), np.where(np.asarray(x) < x_jump, h_left, h_right), 0.0)

    def u(x):
        return np.where(inside(x), np.where(np.asarray(x) < x_jump, u_left, u_right), 0.0)

    bps = [p for p in (x_min, x_jump, x_max) if np.isfinite(p)]
    return InitialProfile(h, u, tuple(bps))


def parabolic_cap(center, half_width, height, u0):
    """Cap ``height (1 - ((x - center)/half_width)^2)`` moving with uniform ``u0``."""

    def h(x):
        eta = (np.asarray(x, dtype=float) - center) / half_width
        return np.where(np.abs(eta) <= 1.0, height * (1.0 - eta * eta), 0.0)

    def u(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x - center) <= half_width, u0, 0.0)

    return InitialProfile(h, u, (center - half_width, center + half_width))
