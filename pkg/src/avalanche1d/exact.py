"""Exact solutions used as ground truth.

* Rankine-Hugoniot relations for a single shock with Lax admissibility
  and the resulting travelling-shock solution on a non-accelerating slope.
* The parabolic similarity solution of a finite mass sliding down a
  plane: a parabolic cap whose half-width ``g(t)`` solves an implicit
  transcendental relation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, InadmissibleShockError, ValidityError
from .model import ConservedState


class Family(enum.Enum):
    FIRST = 1
    SECOND = 2


@dataclass(frozen=True)
class ShockSetup:
    """States either side of a shock.

    ``+`` is the upslope (left) state, ``-`` the downslope (right) one.
    """

    h_plus: float
    h_minus: float
    u_minus: float
    beta_x: float
    family: Family = Family.FIRST
    x0: float = 0.0

    def __post_init__(self):
        if self.h_plus <= 0 or self.h_minus <= 0 or self.beta_x <= 0:
            raise DomainError("shock setup needs positive thicknesses and beta_x")
        if self.family is Family.FIRST and not self.H > 1:
            raise InadmissibleShockError(f"first-family shock needs H > 1, got H={self.H}")
        if self.family is Family.SECOND and not self.H < 1:
            raise InadmissibleShockError(f"second-family shock needs H < 1, got H={self.H}")

    @property
    def H(self) -> float:
        return self.h_minus / self.h_plus


@dataclass(frozen=True)
class ShockState:
    V_n: float
    u_plus: float
    H: float


def velocity_jump(h_minus: float, H: float, beta_x: float) -> float:
    """|u+ - u-| across a shock with depth ratio ``H = h-/h+``."""
    if h_minus <= 0 or H <= 0 or beta_x <= 0:
        raise DomainError("velocity_jump needs positive h_minus, H and beta_x")
    return abs(H - 1.0) / H * math.sqrt(beta_x * h_minus * (H + 1.0) / 2.0)


def shock_speed(setup: ShockSetup) -> ShockState:
    H = setup.H
    root = math.sqrt(setup.beta_x * setup.h_minus * (H + 1.0) / 2.0)
    if setup.family is Family.FIRST:
        u_plus = setup.u_minus + (H - 1.0) / H * root
        V_n = setup.u_minus - root / H
    else:
        u_plus = setup.u_minus - (H - 1.0) / H * root
        V_n = setup.u_minus + root / H
    return ShockState(V_n=V_n, u_plus=u_plus, H=H)


def jump_residuals(setup: ShockSetup, state: ShockState) -> tuple[float, float]:
    """Mass and momentum jump residuals ``[[h(u-V)]]`` and ``[[hu(u-V) + beta h^2/2]]``."""
    hp, hm = setup.h_plus, setup.h_minus
    up, um, V = state.u_plus, setup.u_minus, state.V_n
    b = setup.beta_x
    r_mass = hp * (up - V) - hm * (um - V)
    r_mom = (hp * up * (up - V) + 0.5 * b * hp * hp) - (hm * um * (um - V) + 0.5 * b * hm * hm)
    return r_mass, r_mom


def travelling_shock_solution(x, t: float, setup: ShockSetup) -> ConservedState:
    st = shock_speed(setup)
    x = np.asarray(x, dtype=float)
    left = x < setup.x0 + st.V_n * t
    h = np.where(left, setup.h_plus, setup.h_minus)
    m = np.where(left, setup.h_plus * st.u_plus, setup.h_minus * setup.u_minus)
    if h.ndim == 0:
        return ConservedState(float(h), float(m))
    return ConservedState(h, m)


def shock_cell_averages(edges, t: float, setup: ShockSetup) -> np.ndarray:
    """Exact thickness averages of the travelling shock over cells."""
    edges = np.asarray(edges, dtype=float)
    xs = setup.x0 + shock_speed(setup).V_n * t
    lo, hi = edges[:-1], edges[1:]
    left_len = np.clip(xs - lo, 0.0, hi - lo)
    return (setup.h_plus * left_len + setup.h_minus * (hi - lo - left_len)) / (hi - lo)


@dataclass(frozen=True)
class SimilaritySetup:
    """Parabolic cap on a plane of constant inclination.

    ``g0`` is the initial half-width, ``p0`` its initial spreading rate,
    ``u00`` the initial bulk velocity and ``M`` the total mass.
    """

    g0: float
    p0: float
    u00: float
    zeta: float
    delta: float
    beta_x: float
    M: float
    x_center0: float = 0.0

    def __post_init__(self):
        if self.g0 <= 0 or self.M <= 0 or self.beta_x <= 0:
            raise DomainError("similarity setup needs g0 > 0, M > 0, beta_x > 0")
        if self.p0 < 0:
            raise DomainError("only spreading caps (p0 >= 0) are supported")

    @property
    def K(self) -> float:
        return 1.5 * self.beta_x * self.M

    @property
    def drive(self) -> float:
        return math.sin(self.zeta) - math.tan(self.delta) * math.cos(self.zeta)

    @property
    def peak_height0(self) -> float:
        return 3.0 * self.M / (4.0 * self.g0)


def bulk_velocity_u0(t, setup: SimilaritySetup):
    return setup.u00 + np.asarray(t, dtype=float) * setup.drive


def center_position(t, setup: SimilaritySetup):
    t = np.asarray(t, dtype=float)
    return setup.x_center0 + setup.u00 * t + 0.5 * setup.drive * t * t


def _implicit_F(G, K):
    """Antiderivative sqrt(G) sqrt(G - 2K) + 2K ln(sqrt(G) + sqrt(G - 2K))."""
    d = math.sqrt(max(G - 2.0 * K, 0.0))
    sg = math.sqrt(G)
    return sg * d + 2.0 * K * math.log(sg + d)


def implicit_residual(g: float, t: float, setup: SimilaritySetup) -> float:
    """Residual of the implicit half-width relation, scaled to be O(1)."""
    K = setup.K
    A = 2.0 * K / setup.g0 + setup.p0 ** 2
    rhs = A ** 1.5 * t
    lhs = _implicit_F(A * g, K) - _implicit_F(A * setup.g0, K)
    return (lhs - rhs) / max(1.0, abs(rhs), abs(lhs))


def solve_g(t: float, setup: SimilaritySetup) -> tuple[float, float]:
    """Half-width ``g(t)`` and its rate ``g'(t)``."""
    if t < 0:
        raise DomainError("solve_g needs t >= 0")
    K, g0, p0 = setup.K, setup.g0, setup.p0
    A = 2.0 * K / g0 + p0 * p0
    if t == 0:
        return g0, p0
    F0 = _implicit_F(A * g0, K)
    target = F0 + A ** 1.5 * t

    def resid(g):
        return _implicit_F(A * g, K) - target

    lo, hi = g0, g0 + math.sqrt(A) * t + 1.0
    if resid(lo) > 0 or resid(hi) < 0:
        raise ConvergenceError(f"root bracket [{lo}, {hi}] failed at t={t}")
    g = brentq(resid, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    # Newton polish; dF/dg = A sqrt(G)/sqrt(G - 2K)
    for _ in range(3):
        G = A * g
        if G - 2.0 * K <= 0:
            break
        step = resid(g) / (A * math.sqrt(G / (G - 2.0 * K)))
        if not math.isfinite(step):
            break
        g_new = g - step
        if g_new < g0 or abs(resid(g_new)) >= abs(resid(g)):
            break
        g = g_new
    gp = math.sqrt(max(A - 2.0 * K / g, 0.0))
    return g, gp


def similarity_profile(x, t: float, setup: SimilaritySetup):
    """Thickness/momentum and pointwise velocity of the similarity solution.

    Returns ``(ConservedState, u)``; outside the cap both are zero.
    """
    g, gp = solve_g(t, setup)
    u0 = float(bulk_velocity_u0(t, setup))
    if gp >= u0:
        raise ValidityError(f"g'(t)={gp:.6g} >= u0(t)={u0:.6g}: velocity changes sign")
    x = np.asarray(x, dtype=float)
    eta = (x - center_position(t, setup)) / g
    inside = np.abs(eta) <= 1.0
    h = np.where(inside, 3.0 * setup.M / (4.0 * g) * (1.0 - eta * eta), 0.0)
    u = np.where(inside, u0 + eta * gp, 0.0)
    if h.ndim == 0:
        return ConservedState(float(h), float(h * u)), float(u)
    return ConservedState(h, h * u), u


def similarity_margins(t: float, setup: SimilaritySetup) -> tuple[float, float]:
    """(tail, front) positions."""
    g, _ = solve_g(t, setup)
    c = float(center_position(t, setup))
    return c - g, c + g


def similarity_cell_averages(edges, t: float, setup: SimilaritySetup) -> np.ndarray:
    """Exact thickness averages over cells (closed-form parabola integral)."""
    edges = np.asarray(edges, dtype=float)
    g, _ = solve_g(t, setup)
    c = float(center_position(t, setup))
    peak = 3.0 * setup.M / (4.0 * g)

    def prim(x):
        s = np.clip(x - c, -g, g)
        return peak * (s - s ** 3 / (3.0 * g * g))

    return (prim(edges[1:]) - prim(edges[:-1])) / np.diff(edges)
