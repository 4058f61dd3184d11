"""Staggered non-oscillatory central (NOC) scheme on a uniform grid.

The grid alternates between two phases.  In phase 0 there are ``N``
cells ``[x0 + j dx, x0 + (j+1) dx]``; in phase 1 there are ``N + 1``
cells centred on the phase-0 cell edges, so the two end cells straddle
the domain boundaries.  One step maps one phase onto the other.

Each new cell average is the mean of the two half-cell averages of the
old reconstruction, minus the flux difference at the old cell centres
at the half time level, plus the midpoint-rule source at the two
quarter points.  Half-time values come from a first-order Taylor
extrapolation in time using the reconstructed slopes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import CFLViolationError, DomainError, NegativeDepthError
from .model import H_DRY, MaterialParams, TrackProfile, beta_x, flux_hm, max_wave_speed, source_hm, velocity
from .profiles import InitialProfile, cell_integrals
from .reconstruction import ReconMethod, Reconstruction, interior_coefficients, reconstruct_array

NGHOST = 2
#: thickness below which a negative update is silently clipped
NEG_TOL = 1e-10


@dataclass(frozen=True)
class EulerianField:
    """Cell averages of ``h`` and ``m`` on one phase of the staggered grid.

    ``n_base`` is the number of phase-0 cells; the domain is
    ``[x0, x0 + n_base dx]``.
    """

    x0: float
    dx: float
    n_base: int
    phase: int
    h: np.ndarray
    m: np.ndarray
    beta: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if not self.dx > 0:
            raise DomainError("dx must be positive")
        if self.phase not in (0, 1):
            raise DomainError("phase must be 0 or 1")
        if self.h.shape != (self.n_cells,) or self.m.shape != (self.n_cells,):
            raise DomainError(f"phase {self.phase} needs {self.n_cells} cells, got {self.h.shape}")
        if np.any(self.h < 0):
            raise DomainError("negative thickness in field")

    @property
    def n_cells(self) -> int:
        return self.n_base + self.phase

    @property
    def centers(self) -> np.ndarray:
        offset = 0.5 if self.phase == 0 else 0.0
        return self.x0 + (np.arange(self.n_cells) + offset) * self.dx

    @property
    def edges(self) -> np.ndarray:
        c = self.centers
        return np.concatenate((c - 0.5 * self.dx, [c[-1] + 0.5 * self.dx]))

    @property
    def u(self) -> np.ndarray:
        return velocity(self.h, self.m)

    def _domain_sum(self, values) -> float:
        # phase-1 end cells straddle the domain ends: only their inner half counts
        if self.phase == 1:
            return float((np.sum(values[1:-1]) + 0.5 * (values[0] + values[-1])) * self.dx)
        return float(np.sum(values) * self.dx)

    @property
    def total_mass(self) -> float:
        """Mass inside ``[x0, x0 + n_base dx]``."""
        return self._domain_sum(self.h)

    @property
    def total_momentum(self) -> float:
        return self._domain_sum(self.m)


# ----------------------------------------------------------------------
# boundary conditions


@dataclass(frozen=True)
class Transparent:
    """Zero-gradient ghosts copied from the edge cells."""


@dataclass(frozen=True)
class Wall:
    """Reflecting walls at both ends of the domain."""


@dataclass(frozen=True)
class InflowOutflow:
    """Prescribed state at the left end, extrapolated outflow at the right end."""

    h_in: float
    m_in: float


EulerianBC = Transparent | Wall | InflowOutflow


def apply_eulerian_bc(fld: EulerianField, bc) -> EulerianField:
    """Impose the boundary condition on the real cells of ``fld``."""
    h, m = fld.h.copy(), fld.m.copy()
    if isinstance(bc, InflowOutflow):
        h[0], m[0] = bc.h_in, bc.m_in
        if h.size >= 3:
            h[-1] = (4.0 * h[-2] - h[-3]) / 3.0
            m[-1] = (4.0 * m[-2] - m[-3]) / 3.0
            if h[-1] < 0:
                h[-1], m[-1] = 0.0, 0.0
    elif isinstance(bc, Wall):
        if fld.phase == 1:
            m[0] = 0.0
            m[-1] = 0.0
    elif not isinstance(bc, Transparent):
        raise DomainError(f"unknown boundary condition {bc!r}")
    return replace(fld, h=h, m=m)


def _pad(values: np.ndarray, phase: int, bc, component: int) -> np.ndarray:
    """Append NGHOST ghost cells at each end of a 1-D array."""
    out = np.empty(values.size + 2 * NGHOST)
    out[NGHOST:-NGHOST] = values
    if isinstance(bc, Wall):
        sign = -1.0 if component == 1 else 1.0
        # phase 0: the wall is a cell edge; phase 1: a cell centre
        k = 0 if phase == 0 else 1
        for g in range(NGHOST):
            out[NGHOST - 1 - g] = sign * values[k + g]
            out[-NGHOST + g] = sign * values[-1 - k - g]
    else:
        left = values[0]
        if isinstance(bc, InflowOutflow):
            left = bc.h_in if component == 0 else bc.m_in
        out[:NGHOST] = left
        out[-NGHOST:] = values[-1]
    return out


def padded_centers(fld: EulerianField) -> np.ndarray:
    offset = 0.5 if fld.phase == 0 else 0.0
    return fld.x0 + (np.arange(-NGHOST, fld.n_cells + NGHOST) + offset) * fld.dx


# ----------------------------------------------------------------------
# reconstruction and time derivative


def reconstruct(fld: EulerianField, method) -> Reconstruction:
    """Reconstruct ``(h, m)`` over the real cells of ``fld``."""
    return reconstruct_array(np.vstack((fld.h, fld.m)), method)


def cell_beta(u_padded: np.ndarray, zeta, params: MaterialParams) -> np.ndarray:
    """Per-cell beta from the centred velocity difference (ends one-sided)."""
    du = np.empty_like(u_padded)
    du[1:-1] = u_padded[2:] - u_padded[:-2]
    du[0] = u_padded[1] - u_padded[0]
    du[-1] = u_padded[-1] - u_padded[-2]
    return beta_x(params, zeta, du)


def time_derivative(h, m, rec: Reconstruction, beta, dx, x, params, track, jacobian_free=False):
    """Estimate of ``dw/dt`` at the cell centres; vacuum cells give zero.

    ``rec`` holds the coefficients of ``h`` (row 0) and ``m`` (row 1).
    Jacobian form: ``-A w'/dx + s``; Jacobian-free form: ``-f'/dx + s``
    where ``f'`` is the slope of the cell flux values built with the same
    reconstruction method.
    """
    h = np.asarray(h, dtype=float)
    m = np.asarray(m, dtype=float)
    wet = h > H_DRY
    u = velocity(h, m)
    bh, bm = rec.b[0], rec.b[1]
    if jacobian_free:
        f0, f1 = flux_hm(h, m, beta)
        fr = reconstruct_array(np.vstack((f0, f1)), rec.method)
        dfh, dfm = fr.b[0], fr.b[1]
    else:
        dfh = bm
        dfm = (-u * u + beta * h) * bh + 2.0 * u * bm
    s0, s1 = source_hm(h, m, x, params, track)
    ht = np.where(wet, -dfh / dx + s0, 0.0)
    mt = np.where(wet, -dfm / dx + s1, 0.0)
    return ht, mt


@dataclass
class StepTerms:
    """Padded per-cell quantities of one NOC step (index 0 = first ghost)."""

    x: np.ndarray
    h: np.ndarray
    m: np.ndarray
    beta: np.ndarray
    rec: Reconstruction
    h_half: np.ndarray
    m_half: np.ndarray
    flux: np.ndarray  # (2, n) flux at the centres, half time
    src_r: np.ndarray  # (2, n) source at x + dx/4, half time
    src_l: np.ndarray  # (2, n) source at x - dx/4, half time
    data_r: np.ndarray  # (2, n) right half-cell averages at t_n
    data_l: np.ndarray  # (2, n) left half-cell averages at t_n
    extra: dict = field(default_factory=dict)


def _dry_guard(h, m):
    wet = h > H_DRY
    return np.where(wet, h, 0.0), np.where(wet, m, 0.0)


def padded_reconstruction(P: np.ndarray, method: ReconMethod, override=None, variables: str = "conserved") -> Reconstruction:
    """Reconstruct padded ``(2, n)`` averages; ghost end cells get zero slope.

    ``override`` maps padded cell index -> (method, left sample, right sample)
    to rebuild individual cells from substitute neighbour values.

    With ``variables="primitive"`` a piecewise-linear method limits the
    slopes of ``h`` and ``u`` instead of ``h`` and ``m``; the momentum slope
    is then ``u h' + h u'``.  Cells with a dry neighbour keep the conserved
    slopes.  Cell averages are untouched either way.
    """
    if variables not in ("conserved", "primitive"):
        raise DomainError(f"unknown limiting variables {variables!r}")
    a = P.copy()
    b = np.zeros_like(P)
    c = np.zeros_like(P)
    ai, bi, ci = interior_coefficients(P[:, :-2], P[:, 1:-1], P[:, 2:], method)
    a[:, 1:-1], b[:, 1:-1], c[:, 1:-1] = ai, bi, ci
    if variables == "primitive":
        if method is ReconMethod.WENO_QUADRATIC:
            raise DomainError("primitive limiting is only defined for piecewise-linear methods")
        h = P[0]
        wet = h > H_DRY
        u = np.where(wet, P[1] / np.where(wet, h, 1.0), 0.0)
        U = np.vstack((h, u))
        _, bu, _ = interior_coefficients(U[:, :-2], U[:, 1:-1], U[:, 2:], method)
        ok = wet[:-2] & wet[1:-1] & wet[2:]
        b[0, 1:-1] = np.where(ok, bu[0], b[0, 1:-1])
        b[1, 1:-1] = np.where(ok, u[1:-1] * bu[0] + h[1:-1] * bu[1], b[1, 1:-1])
    if override:
        for i, (meth, left, right) in override.items():
            ai, bi, ci = interior_coefficients(np.asarray(left), P[:, i], np.asarray(right), meth)
            a[:, i], b[:, i], c[:, i] = ai, bi, ci
    # positivity: a cell whose thickness half-averages would go negative falls back to minmod
    lo = a[0] - np.abs(b[0]) / 4.0 + c[0] / 12.0
    bad = np.flatnonzero(lo[1:-1] < 0.0) + 1
    if bad.size:
        am, bm, cm = interior_coefficients(P[:, bad - 1], P[:, bad], P[:, bad + 1], ReconMethod.MINMOD)
        a[:, bad], b[:, bad], c[:, bad] = am, bm, cm
    return Reconstruction(method, a, b, c)


def step_terms(
    fld: EulerianField,
    method,
    dt: float,
    params: MaterialParams,
    track: TrackProfile,
    bc,
    jacobian_free: bool = False,
    override=None,
    variables: str = "conserved",
) -> StepTerms:
    method = ReconMethod.parse(method)
    dx = fld.dx
    x = padded_centers(fld)
    Ph = _pad(fld.h, fld.phase, bc, 0)
    Pm = _pad(fld.m, fld.phase, bc, 1)
    beta = cell_beta(velocity(Ph, Pm), track.zeta(x), params)
    rec = padded_reconstruction(np.vstack((Ph, Pm)), method, override, variables)

    ht, mt = time_derivative(Ph, Pm, rec, beta, dx, x, params, track, jacobian_free)
    hh = Ph + 0.5 * dt * ht
    mh = Pm + 0.5 * dt * mt
    hh, mh = _dry_guard(hh, mh)
    flux = np.array(flux_hm(hh, mh, beta))

    # quarter points: half-time state plus the spatial offset of the reconstruction
    dq_r = rec.b / 4.0 + rec.c / 16.0
    dq_l = -rec.b / 4.0 + rec.c / 16.0
    hr, mr = _dry_guard(hh + dq_r[0], mh + dq_r[1])
    hl, ml = _dry_guard(hh + dq_l[0], mh + dq_l[1])
    src_r = np.array(source_hm(hr, mr, x + 0.25 * dx, params, track))
    src_l = np.array(source_hm(hl, ml, x - 0.25 * dx, params, track))
    return StepTerms(
        x=x,
        h=Ph,
        m=Pm,
        beta=beta,
        rec=rec,
        h_half=hh,
        m_half=mh,
        flux=flux,
        src_r=src_r,
        src_l=src_l,
        data_r=rec.half_average("R"),
        data_l=rec.half_average("L"),
    )


def staggered_update(terms: StepTerms, dt: float, dx: float) -> np.ndarray:
    """New averages between every pair of adjacent padded cells, shape (2, n-1)."""
    lam = dt / dx
    return (
        0.5 * (terms.data_r[:, :-1] + terms.data_l[:, 1:])
        - lam * (terms.flux[:, 1:] - terms.flux[:, :-1])
        + 0.5 * dt * (terms.src_r[:, :-1] + terms.src_l[:, 1:])
    )


def new_cell_slice(phase: int, n_base: int) -> slice:
    """Pair indices (left padded cell) that form the real cells of the next phase."""
    if phase == 0:
        return slice(NGHOST - 1, n_base + NGHOST)
    return slice(NGHOST, n_base + NGHOST)


def finalize(h: np.ndarray, m: np.ndarray, t: float, where: str = "") -> tuple[np.ndarray, np.ndarray]:
    """Clip round-off negatives, raise on genuine ones, zero momentum in vacuum."""
    bad = np.flatnonzero(h < -NEG_TOL)
    if bad.size:
        j = int(bad[0])
        raise NegativeDepthError(f"negative depth h={h[j]:.3e} in cell {j} at t={t:.6g}{where}", index=j)
    h = np.where(h < 0, 0.0, h)
    m = np.where(h > H_DRY, m, 0.0)
    return h, m


def check_cfl(fld: EulerianField, dt: float, beta=None) -> None:
    if beta is None:
        beta = fld.beta
    a = max_wave_speed(fld.h, fld.m, beta)
    if a * dt / fld.dx >= 0.5:
        raise CFLViolationError(f"dt={dt:.6g} gives Courant number {a * dt / fld.dx:.4f} >= 1/2 at t={fld.t:.6g}")


def noc_step(
    fld: EulerianField,
    method,
    dt: float,
    params: MaterialParams,
    track: TrackProfile,
    bc=Transparent(),
    jacobian_free: bool = False,
    variables: str = "conserved",
) -> EulerianField:
    """Advance one staggered step; the result lives on the other phase."""
    if dt <= 0:
        raise DomainError("dt must be positive")
    terms = step_terms(fld, method, dt, params, track, bc, jacobian_free, variables=variables)
    check_cfl(fld, dt, terms.beta[NGHOST:-NGHOST])
    new = staggered_update(terms, dt, fld.dx)[:, new_cell_slice(fld.phase, fld.n_base)]
    h, m = finalize(new[0], new[1], fld.t + dt)
    out = EulerianField(
        x0=fld.x0,
        dx=fld.dx,
        n_base=fld.n_base,
        phase=1 - fld.phase,
        h=h,
        m=m,
        beta=np.zeros_like(h),
        t=fld.t + dt,
    )
    out = apply_eulerian_bc(out, bc)
    return with_beta(out, params, track, bc)


def with_beta(fld: EulerianField, params: MaterialParams, track: TrackProfile, bc=Transparent()) -> EulerianField:
    """Recompute the per-cell beta from the current velocities."""
    x = padded_centers(fld)
    Ph = _pad(fld.h, fld.phase, bc, 0)
    Pm = _pad(fld.m, fld.phase, bc, 1)
    beta = cell_beta(velocity(Ph, Pm), track.zeta(x), params)[NGHOST:-NGHOST]
    return replace(fld, beta=beta)


def cfl_dt(fld: EulerianField, cfl_number: float, t_next: float | None = None, extra_speed: float = 0.0) -> float:
    """Time step ``cfl dx / a_max`` capped at the next checkpoint.

    ``extra_speed`` lets callers include speeds not visible in the cell
    averages (for instance tracked margin velocities).
    """
    if not 0.0 < cfl_number < 0.5:
        raise DomainError(f"Courant number must lie in (0, 1/2), got {cfl_number}")
    a = max(max_wave_speed(fld.h, fld.m, fld.beta), abs(extra_speed))
    remaining = np.inf if t_next is None else t_next - fld.t
    if a <= 0.0:
        if not np.isfinite(remaining):
            raise DomainError("all-dry field needs a checkpoint to bound the step")
        return float(remaining)
    dt = cfl_number * fld.dx / a
    if remaining < dt:
        dt = remaining
    return float(dt)


def initial_cell_averages(
    profile: InitialProfile,
    x0: float,
    dx: float,
    n: int,
    params: MaterialParams | None = None,
    track: TrackProfile | None = None,
    bc=Transparent(),
) -> EulerianField:
    """Phase-0 field of exact cell averages of ``h`` and ``h u``."""
    if n < 3:
        raise DomainError("need at least three cells")
    edges = x0 + dx * np.arange(n + 1)
    V = cell_integrals(profile.h, edges, profile.breakpoints) / dx
    M = cell_integrals(profile.hu, edges, profile.breakpoints) / dx
    h = np.where(V > 0, V, 0.0)
    m = np.where(h > H_DRY, M, 0.0)
    fld = EulerianField(x0=x0, dx=dx, n_base=n, phase=0, h=h, m=m, beta=np.zeros(n), t=0.0)
    if params is not None and track is not None:
        fld = with_beta(fld, params, track, bc)
    return fld


def destagger(fld: EulerianField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Map a field to the phase-0 cells for output: ``(x, h, m)``.

    Phase-1 fields are averaged over adjacent pairs of cells; the solver
    state itself is never de-staggered.
    """
    if fld.phase == 0:
        return fld.centers, fld.h.copy(), fld.m.copy()
    h = 0.5 * (fld.h[1:] + fld.h[:-1])
    m = 0.5 * (fld.m[1:] + fld.m[:-1])
    x = fld.x0 + (np.arange(fld.n_base) + 0.5) * fld.dx
    return x, h, m
