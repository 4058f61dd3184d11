"""Depth-averaged Savage-Hutter model in one space dimension.

Conserved variables are the thickness ``h`` and the depth-integrated
momentum ``m = h u``.  All functions accept scalars or numpy arrays and
broadcast in the usual way.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, DryStateError

#: Below this thickness a state is treated as vacuum (u = m = 0).
H_DRY = 1e-10


class PressureBranch(enum.Enum):
    ACTIVE = "active"
    PASSIVE = "passive"


@dataclass(frozen=True)
class ConservedState:
    """Thickness and momentum at a point, or as arrays of cell averages."""

    h: float | np.ndarray
    m: float | np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h)
        m = np.asarray(self.m)
        if np.any(h < 0):
            raise DomainError("thickness must be non-negative")
        if np.any((h == 0) & (m != 0)):
            raise DomainError("vacuum state carries momentum")

    @classmethod
    def from_velocity(cls, h, u):
        h_arr = np.asarray(h, dtype=float)
        m = np.where(h_arr > H_DRY, h_arr * np.asarray(u, dtype=float), 0.0)
        if m.ndim == 0:
            return cls(float(h_arr), float(m))
        return cls(h_arr, m)

    @property
    def u(self):
        return velocity(self.h, self.m)


@dataclass(frozen=True)
class MaterialParams:
    """Friction angles (radians), aspect ratio and artificial viscosity."""

    phi: float
    delta: float
    epsilon: float = 1.0
    mu_artificial: float = 0.0

    def __post_init__(self):
        if math.cos(self.phi) ** 2 > math.cos(self.delta) ** 2:
            raise DomainError(
                "cos^2(phi) must not exceed cos^2(delta) "
                f"(phi={math.degrees(self.phi):.3f} deg, delta={math.degrees(self.delta):.3f} deg)"
            )
        if not 0.0 <= self.epsilon <= 1.0:
            raise DomainError(f"epsilon={self.epsilon} outside [0, 1]")
        if not 0.0 <= self.mu_artificial <= 0.1:
            raise DomainError(f"mu_artificial={self.mu_artificial} outside [0, 0.1]")

    @classmethod
    def from_degrees(cls, phi, delta, epsilon=1.0, mu_artificial=0.0):
        return cls(math.radians(phi), math.radians(delta), epsilon, mu_artificial)


def _const(value):
    def f(x):
        return np.full(np.shape(x), value, dtype=float) if np.ndim(x) else float(value)

    return f


@dataclass(frozen=True)
class TrackProfile:
    """Track geometry along the arc length ``x``.

    Each field is a vectorised callable of ``x``: inclination angle
    ``zeta`` (radians), scaled curvature ``lambda_kappa``, basal
    topography ``zb`` and its gradient ``dzb_dx``.
    """

    zeta: Callable
    lambda_kappa: Callable = _const(0.0)
    zb: Callable = _const(0.0)
    dzb_dx: Callable = _const(0.0)

    @classmethod
    def plane(cls, zeta):
        return cls(zeta=_const(zeta))

    @classmethod
    def piecewise_linear(cls, knots, angles):
        """Continuous, piecewise-linear inclination through ``(knots, angles)``.

        Constant extrapolation outside the first and last knot.
        """
        xk = np.asarray(knots, dtype=float)
        zk = np.asarray(angles, dtype=float)
        if xk.shape != zk.shape or xk.size < 2 or np.any(np.diff(xk) <= 0):
            raise DomainError("knots must be strictly increasing and match angles")

        def zeta(x):
            z = np.interp(x, xk, zk)
            return float(z) if np.ndim(z) == 0 else z

        return cls(zeta=zeta)


def earth_pressure_coefficient(params: MaterialParams, branch: PressureBranch) -> float:
    """Active (minus root) or passive (plus root) earth pressure coefficient."""
    cphi2 = math.cos(params.phi) ** 2
    cdel2 = math.cos(params.delta) ** 2
    ratio = cphi2 / cdel2
    if ratio > 1.0:
        raise DomainError("cos^2(phi) > cos^2(delta): earth pressure coefficient undefined")
    root = math.sqrt(1.0 - ratio)
    sign = -1.0 if branch is PressureBranch.ACTIVE else 1.0
    return 2.0 * (1.0 + sign * root) / cphi2 - 1.0


def select_branch(du_dx: float) -> PressureBranch:
    """Active for expanding flow, passive for contracting; zero counts as active."""
    return PressureBranch.ACTIVE if du_dx >= 0 else PressureBranch.PASSIVE


def beta_x(params: MaterialParams, zeta, du_dx):
    """Vectorised pressure factor ``epsilon cos(zeta) K_x`` with branch per entry."""
    k_act = earth_pressure_coefficient(params, PressureBranch.ACTIVE)
    k_pass = earth_pressure_coefficient(params, PressureBranch.PASSIVE)
    k = np.where(np.asarray(du_dx) >= 0, k_act, k_pass)
    return params.epsilon * np.cos(zeta) * k


def velocity(h, m):
    """``m / h`` on wet entries, zero in vacuum."""
    h = np.asarray(h, dtype=float)
    m = np.asarray(m, dtype=float)
    wet = h > H_DRY
    u = np.divide(m, h, out=np.zeros(np.broadcast(h, m).shape), where=wet)
    return float(u) if u.ndim == 0 else u


def flux_hm(h, m, beta):
    """Flux components ``(m, m^2/h + beta h^2/2)`` with vacuum mapped to zero."""
    h = np.asarray(h, dtype=float)
    m = np.asarray(m, dtype=float)
    wet = h > H_DRY
    u = np.divide(m, h, out=np.zeros(np.broadcast(h, m).shape), where=wet)
    f0 = np.where(wet, m, 0.0)
    f1 = np.where(wet, m * u + 0.5 * beta * h * h, 0.0)
    return f0, f1


def flux(w: ConservedState, beta) -> np.ndarray:
    f0, f1 = flux_hm(w.h, w.m, beta)
    return np.array([f0, f1])


def net_acceleration(u, x, params: MaterialParams, track: TrackProfile):
    """Net driving acceleration s_x; sgn(0) is taken as 0."""
    zeta = track.zeta(x)
    sgn = np.sign(u)
    return (
        np.sin(zeta)
        - sgn * math.tan(params.delta) * (np.cos(zeta) + track.lambda_kappa(x) * u * u)
        - params.epsilon * np.cos(zeta) * track.dzb_dx(x)
    )


def source_hm(h, m, x, params: MaterialParams, track: TrackProfile):
    """Source components ``(0, h s_x)``; vacuum gives exact zeros."""
    h = np.asarray(h, dtype=float)
    wet = h > H_DRY
    u = velocity(h, m)
    sx = net_acceleration(u, x, params, track)
    s1 = np.where(wet, h * sx, 0.0)
    return np.zeros_like(s1), s1


def source(w: ConservedState, x, params: MaterialParams, track: TrackProfile) -> np.ndarray:
    s0, s1 = source_hm(w.h, w.m, x, params, track)
    return np.array([s0, s1])


def jacobian(w: ConservedState, beta: float) -> np.ndarray:
    if w.h <= H_DRY:
        raise DryStateError(f"Jacobian undefined for dry state h={w.h}")
    u = w.m / w.h
    return np.array([[0.0, 1.0], [-u * u + beta * w.h, 2.0 * u]])


def max_wave_speed(h, m, beta) -> float:
    """Largest |u| + sqrt(beta h) over wet entries; 0 for an all-dry field."""
    h = np.asarray(h, dtype=float)
    wet = h > H_DRY
    if not np.any(wet):
        return 0.0
    beta = np.broadcast_to(np.asarray(beta, dtype=float), h.shape)
    u = np.abs(velocity(h, m))
    return float(np.max(u[wet] + np.sqrt(beta[wet] * h[wet])))
