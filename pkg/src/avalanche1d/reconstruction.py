"""Cell reconstructions for the staggered central scheme.

Every method produces, per cell, a polynomial ``a + b*xi + c*xi**2`` in
the local coordinate ``xi = (x - x_j)/dx`` that preserves the cell
average.  Piecewise linear methods (TVD limiters, two-point WENO) have
``c = 0`` and ``a`` equal to the average; ``b`` is the cell mean
derivative scaled by ``dx``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

WENO_EPS = 1e-6


class ReconMethod(enum.Enum):
    MINMOD = "minmod"
    SUPERBEE = "superbee"
    UNLIMITED = "unlimited"
    WENO_LINEAR = "weno2"
    WENO_QUADRATIC = "weno3"

    @classmethod
    def parse(cls, name: "str | ReconMethod") -> "ReconMethod":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "minmod": cls.MINMOD,
            "superbee": cls.SUPERBEE,
            "s": cls.SUPERBEE,
            "unlimited": cls.UNLIMITED,
            "unlimitedcentral": cls.UNLIMITED,
            "central": cls.UNLIMITED,
            "weno2": cls.WENO_LINEAR,
            "wenolinear": cls.WENO_LINEAR,
            "weno3": cls.WENO_QUADRATIC,
            "wenoquadratic": cls.WENO_QUADRATIC,
            "w": cls.WENO_QUADRATIC,
        }
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown reconstruction method {name!r}") from None

    @property
    def is_tvd(self) -> bool:
        return self in (ReconMethod.MINMOD, ReconMethod.SUPERBEE)


@dataclass(frozen=True)
class Reconstruction:
    """Per-cell quadratic ``a + b xi + c xi^2``; arrays share a shape whose
    last axis runs over cells."""

    method: ReconMethod
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @property
    def slope(self) -> np.ndarray:
        """Cell mean derivative times ``dx`` (value of ``dp/dxi`` at the centre)."""
        return self.b

    def average(self) -> np.ndarray:
        return self.a + self.c / 12.0

    def point(self, xi) -> np.ndarray:
        return self.a + self.b * xi + self.c * xi * xi

    def half_average(self, side: str) -> np.ndarray:
        """Average over the left (``"L"``) or right (``"R"``) half cell."""
        s = 1.0 if side == "R" else -1.0
        return self.a + s * self.b / 4.0 + self.c / 12.0

    def edge(self, side: str) -> np.ndarray:
        return self.point(0.5 if side == "R" else -0.5)


def minmod(x, y):
    return np.where(x * y > 0, np.sign(x) * np.minimum(np.abs(x), np.abs(y)), 0.0)


def maxmod(x, y):
    return np.where(x * y > 0, np.sign(x) * np.maximum(np.abs(x), np.abs(y)), 0.0)


def _linear_weno(dm, dp, eps=WENO_EPS):
    am = 0.5 / (eps + dm * dm) ** 2
    ap = 0.5 / (eps + dp * dp) ** 2
    return (am * dm + ap * dp) / (am + ap)


def _quadratic_weno(wm, w0, wp, eps=WENO_EPS):
    dm = w0 - wm
    dp = wp - w0
    d2 = wp - 2.0 * w0 + wm
    half_curv = 0.5 * d2
    central = 0.5 * (wp - wm)
    is_l = dm * dm
    is_r = dp * dp
    is_c = 13.0 / 3.0 * d2 * d2 + 0.25 * central * central
    al = 0.25 / (eps + is_l) ** 2
    ac = 0.5 / (eps + is_c) ** 2
    ar = 0.25 / (eps + is_r) ** 2
    s = al + ac + ar
    wl, wc, wr = al / s, ac / s, ar / s
    a = w0 - wc * half_curv / 6.0
    b = wl * dm + wr * dp + wc * central
    c = 2.0 * wc * half_curv
    return a, b, c


def interior_coefficients(wm, w0, wp, method: ReconMethod):
    """Coefficients of a cell with neighbour averages ``wm`` and ``wp``."""
    dm = w0 - wm
    dp = wp - w0
    zero = np.zeros_like(w0, dtype=float)
    if method is ReconMethod.MINMOD:
        return w0, minmod(dm, dp), zero
    if method is ReconMethod.SUPERBEE:
        return w0, maxmod(minmod(2.0 * dm, dp), minmod(dm, 2.0 * dp)), zero
    if method is ReconMethod.UNLIMITED:
        return w0, 0.5 * (dm + dp), zero
    if method is ReconMethod.WENO_LINEAR:
        return w0, _linear_weno(dm, dp), zero
    if method is ReconMethod.WENO_QUADRATIC:
        return _quadratic_weno(wm, w0, wp)
    raise DomainError(f"unsupported reconstruction {method!r}")


def reconstruct_array(w, method) -> Reconstruction:
    """Reconstruct averages ``w`` (last axis = cells, at least 3 cells).

    End cells fall back to the one-sided difference toward their only
    neighbour.
    """
    method = ReconMethod.parse(method)
    w = np.asarray(w, dtype=float)
    if w.shape[-1] < 3:
        raise DomainError("reconstruction needs at least three cells")
    a = w.copy()
    b = np.zeros_like(w)
    c = np.zeros_like(w)
    ai, bi, ci = interior_coefficients(w[..., :-2], w[..., 1:-1], w[..., 2:], method)
    a[..., 1:-1] = ai
    b[..., 1:-1] = bi
    c[..., 1:-1] = ci
    b[..., 0] = w[..., 1] - w[..., 0]
    b[..., -1] = w[..., -1] - w[..., -2]
    return Reconstruction(method, a, b, c)
