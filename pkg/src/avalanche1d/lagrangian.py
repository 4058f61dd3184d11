"""Lagrangian moving-mesh finite-difference scheme.

The avalanche is split into material cells whose volumes never change.
Cell boundaries move with velocities carried at the half time level and
advanced by the non-conservative (velocity) form of the momentum
balance.  Works well for smooth flows; develops oscillations at shocks.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import CellInversionError, DomainError
from .model import MaterialParams, TrackProfile, beta_x, net_acceleration
from .profiles import InitialProfile, integrate


class LagrangianBC(enum.Enum):
    #: free margins: zero exterior depth at both ends
    MARGIN_VACUUM = "margin_vacuum"
    #: zero depth gradient at both ends
    INFLOW_OUTFLOW = "inflow_outflow"


@dataclass(frozen=True)
class LagrangianMesh:
    """Boundary positions ``b`` (N+1), half-level boundary velocities
    ``u_half`` (N+1) and per-cell volumes ``V`` (N)."""

    b: np.ndarray
    u_half: np.ndarray
    V: np.ndarray
    t: float = 0.0

    @property
    def n_cells(self) -> int:
        return self.V.size

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.b)

    @property
    def h(self) -> np.ndarray:
        return self.V / np.diff(self.b)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.b[1:] + self.b[:-1])

    @property
    def total_volume(self) -> float:
        return float(np.sum(self.V))


def init_from_profile(profile: InitialProfile, domain: tuple[float, float], n: int) -> LagrangianMesh:
    """Mesh of ``n`` equal-width cells on ``domain`` from exact cell averages.

    Boundary velocities are mass-weighted averages of ``u`` between the
    centres of the adjacent cells; the two end boundaries use the half
    cell next to them.
    """
    if n < 2:
        raise DomainError("need at least two Lagrangian cells")
    lo, hi = domain
    b = np.linspace(lo, hi, n + 1)
    if np.any(np.diff(b) <= 0):
        raise DomainError("degenerate initial cell")
    bps = profile.breakpoints
    V = np.array([integrate(profile.h, b[j], b[j + 1], bps) for j in range(n)])
    c = 0.5 * (b[1:] + b[:-1])
    nodes = np.concatenate(([b[0]], c, [b[-1]]))
    u = np.empty(n + 1)
    for j in range(n + 1):
        a, z = nodes[j], nodes[j + 1]
        mass = integrate(profile.h, a, z, bps)
        mom = integrate(profile.hu, a, z, bps)
        u[j] = mom / mass if mass > 0 else float(profile.u(b[j]))
    return LagrangianMesh(b=b, u_half=u, V=V)


def _boundary_acceleration(mesh, params, track, bc, pressure_gradient=True):
    b, u, h, c = mesh.b, mesh.u_half, mesh.h, mesh.centers
    n = mesh.n_cells
    # expanding cell (right boundary at least as fast as left) is active
    beta_cell = beta_x(params, track.zeta(c), u[1:] - u[:-1])

    acc = net_acceleration(u, b, params, track).astype(float)

    dc = c[1:] - c[:-1]
    dhdx = (h[1:] - h[:-1]) / dc
    beta_b = 0.5 * (beta_cell[1:] + beta_cell[:-1])
    acc[1:n] -= beta_b * dhdx
    if pressure_gradient:
        h_mid = 0.5 * (h[1:] + h[:-1])
        acc[1:n] -= 0.5 * h_mid * (beta_cell[1:] - beta_cell[:-1]) / dc

    if bc is LagrangianBC.MARGIN_VACUUM:
        # thickness vanishes at the margin points themselves
        acc[0] -= beta_cell[0] * h[0] / (c[0] - b[0])
        acc[n] -= beta_cell[-1] * (0.0 - h[-1]) / (b[n] - c[-1])

    if params.mu_artificial > 0 and n >= 2:
        w = np.diff(b)
        grad = np.diff(u) / w
        acc[1:n] += params.mu_artificial * 2.0 * (grad[1:] - grad[:-1]) / (w[1:] + w[:-1])
    return acc


def apply_boundary(mesh: LagrangianMesh, bc: LagrangianBC) -> LagrangianMesh:
    """Boundary treatment lives in the end-node accelerations; volumes are
    never modified, so this only validates the mesh."""
    if not isinstance(bc, LagrangianBC):
        raise DomainError(f"unknown Lagrangian boundary condition {bc!r}")
    return mesh


def step(
    mesh: LagrangianMesh,
    dt: float,
    params: MaterialParams,
    track: TrackProfile,
    bc: LagrangianBC = LagrangianBC.MARGIN_VACUUM,
    pressure_gradient: bool = True,
) -> LagrangianMesh:
    """Advance one time step: velocities to the next half level, then positions."""
    if dt <= 0:
        raise DomainError("dt must be positive")
    acc = _boundary_acceleration(mesh, params, track, bc, pressure_gradient)
    u_new = mesh.u_half + dt * acc
    b_new = mesh.b + dt * u_new
    widths = np.diff(b_new)
    if np.any(widths <= 0):
        j = int(np.argmin(widths))
        raise CellInversionError(f"cell {j} inverted at t={mesh.t + dt:.6g}", index=j)
    return replace(mesh, b=b_new, u_half=u_new, t=mesh.t + dt)


def total_variation(values) -> float:
    return float(np.sum(np.abs(np.diff(values))))
