"""Front tracking for the vacuum margins of a single avalanche body.

The front and the tail of the avalanche are carried as explicit
positions.  In the cell containing a margin the thickness is
reconstructed as the unique linear function that vanishes at the margin
and keeps the cell average; the velocity is constant over that cell.
The margin moves with this velocity, and the two new staggered cells
next to it are updated with quadratures that only integrate over the
wet part of space-time and are exact for linear data.

All formulas are written for the front (vacuum to the right).  The tail
is handled by mirroring ``x -> -x``, ``m -> -m``.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import DomainError, MarginError, NegativeDepthError
from .model import H_DRY, MaterialParams, TrackProfile, beta_x, flux_hm, net_acceleration
from .noc import (
    NGHOST,
    EulerianField,
    Transparent,
    apply_eulerian_bc,
    cfl_dt,
    finalize,
    new_cell_slice,
    staggered_update,
    step_terms,
    with_beta,
)
from .reconstruction import ReconMethod

#: relative tolerance (in units of dx) when locating a margin on a cell edge
EDGE_TOL = 1e-9


class MarginKind(enum.Enum):
    FRONT = "front"
    TAIL = "tail"


class Case(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


@dataclass(frozen=True)
class Margin:
    kind: MarginKind
    x_pos: float
    cell_index: int
    u_margin: float = 0.0


@dataclass(frozen=True)
class MarginReconstruction:
    """Linear thickness/momentum profile vanishing at ``x_margin``."""

    sigma_h: float
    sigma_m: float
    x_margin: float
    u: float

    def h(self, x):
        return self.sigma_h * (np.asarray(x, dtype=float) - self.x_margin)

    def m(self, x):
        return self.sigma_m * (np.asarray(x, dtype=float) - self.x_margin)


@dataclass(frozen=True)
class CaseGeometry:
    case_id: Case
    t_star: float | None
    t_bar: float
    dt_bar: float
    alpha_f: float
    omega_prev: float
    omega_cell: float


# ----------------------------------------------------------------------
# building blocks


def margin_reconstruct(h_f: float, m_f: float, x_margin: float, cell_lo: float, cell_hi: float, kind: MarginKind):
    """Reconstruction over the margin cell ``[cell_lo, cell_hi]``."""
    dx = cell_hi - cell_lo
    if h_f < 0:
        raise DomainError("margin cell average must be non-negative")
    wet = x_margin - cell_lo if kind is MarginKind.FRONT else cell_hi - x_margin
    if wet < 1e-12 * dx:
        raise MarginError(f"{kind.value} margin cell has degenerate wet width {wet:.3e}")
    if h_f <= H_DRY:
        return MarginReconstruction(0.0, 0.0, x_margin, 0.0)
    u = m_f / h_f
    sign = -1.0 if kind is MarginKind.FRONT else 1.0
    sigma_h = sign * 2.0 * h_f * dx / (wet * wet)
    return MarginReconstruction(sigma_h, u * sigma_h, x_margin, u)


def margin_velocity(rec: MarginReconstruction, beta: float, accel: float, dt: float, order: int = 2) -> float:
    """First-order ``m_f/h_f`` or the half-step value ``u + dt/2 (s_x - beta sigma_h)``.

    ``accel`` is the net driving acceleration at the margin.
    """
    if rec.sigma_h == 0.0:
        raise MarginError("margin cell is dry")
    if order == 1:
        return rec.u
    if order != 2:
        raise DomainError(f"margin order must be 1 or 2, got {order}")
    return rec.u + 0.5 * dt * (accel - beta * rec.sigma_h)


def source_weight(a: float, b: float, tau: float) -> float:
    """Weight of the one-node rule for a trapezoid with wet widths ``a``, ``b``.

    Exact for linear integrands vanishing on the slanted edge.
    """
    if a < 0 or b < 0 or tau < 0:
        raise DomainError("source_weight needs a, b, tau >= 0")
    if a + b <= 0:
        raise DomainError("source_weight needs a + b > 0")
    return tau / 3.0 * (a * a + a * b + b * b) / (a + b)


def classify_case(x_old: float, x_new: float, x_f: float, dx: float, t_n: float = 0.0, dt: float = 1.0) -> CaseGeometry:
    """Geometry of the front motion relative to the grid point ``x_f``."""
    if abs(x_new - x_old) >= 0.5 * dx:
        raise MarginError(f"margin moves {abs(x_new - x_old) / dx:.3f} dx in one step (limit 1/2)")
    x_prev = x_f - dx
    x_lo = x_f - 0.5 * dx
    x_hi = x_f + 0.5 * dx
    t_half = t_n + 0.5 * dt
    omega_prev = source_weight(x_old - x_prev, x_new - x_prev, dt)
    if x_old <= x_f:
        if x_new <= x_f:
            if not x_new > x_prev:
                raise MarginError("front left the margin stencil")
            return CaseGeometry(Case.I, None, t_n, 0.0, 0.0, omega_prev, 0.0)
        if x_new > x_hi:
            raise MarginError("front skipped a grid point")
        t_star = t_n + dt * (x_f - x_old) / (x_new - x_old)
        dt_bar = t_n + dt - t_star
        return CaseGeometry(
            Case.III,
            t_star,
            0.5 * (t_n + dt + t_star),
            dt_bar,
            0.0,
            omega_prev,
            source_weight(0.0, x_new - x_f, dt_bar),
        )
    alpha = ((x_old - x_f) / (x_old - x_lo)) ** 2
    if x_new > x_f:
        if x_new > x_f + dx:
            raise MarginError("front left the margin stencil")
        return CaseGeometry(
            Case.II, None, t_half, dt, alpha, omega_prev, source_weight(x_old - x_f, x_new - x_f, dt)
        )
    if not x_new > x_lo:
        raise MarginError("front skipped a grid point")
    t_star = t_n + dt * (x_old - x_f) / (x_old - x_new)
    dt_bar = t_star - t_n
    return CaseGeometry(
        Case.IV,
        t_star,
        0.5 * (t_n + t_star),
        dt_bar,
        alpha,
        omega_prev,
        source_weight(x_old - x_f, 0.0, dt_bar),
    )


def extrapolate_front_state(rec: MarginReconstruction, x_f: float, x_margin: float, u_margin: float, t_bar: float, t_n: float):
    """State at ``(x_f, t_bar)`` from the margin Taylor expansion.

    Returns ``(h, m, clipped)``; a negative thickness is clipped to zero.
    """
    h = rec.sigma_h * ((x_f - x_margin) - u_margin * (t_bar - t_n))
    clipped = h < 0
    if clipped:
        h = 0.0
    return h, u_margin * h, bool(clipped)


# ----------------------------------------------------------------------
# front update in a front-oriented frame


@dataclass(frozen=True)
class FrontFrame:
    """Everything the margin update needs, in coordinates where the
    vacuum lies to the right.

    ``accel(u, x)`` is the net driving acceleration in this frame.
    ``data_prev`` is the right half-cell average of cell ``f-1``,
    ``half_prev`` its centre state at the half time level.
    """

    dx: float
    x_f: float
    x_margin: float
    h_f: float
    m_f: float
    beta_f: float
    data_prev: np.ndarray
    half_prev: np.ndarray
    beta_prev: float
    accel: Callable


@dataclass(frozen=True)
class FrontResult:
    left: np.ndarray
    right: np.ndarray
    x_new: float
    u_margin: float
    geometry: CaseGeometry
    clipped: int


def _source(h, m, x, accel):
    if h <= H_DRY:
        return np.zeros(2)
    return np.array([0.0, h * accel(m / h, x)])


def front_update(fr: FrontFrame, dt: float, t_n: float, order: int = 2) -> FrontResult:
    """New averages on ``[x_{f-1}, x_f]`` and ``[x_f, x_{f+1}]`` and the new margin."""
    dx, x_f = fr.dx, fr.x_f
    rec = margin_reconstruct(fr.h_f, fr.m_f, fr.x_margin, x_f - 0.5 * dx, x_f + 0.5 * dx, MarginKind.FRONT)
    u_m = margin_velocity(rec, fr.beta_f, fr.accel(rec.u, fr.x_margin), dt, order)
    x_new = fr.x_margin + dt * u_m
    geo = classify_case(fr.x_margin, x_new, x_f, dx, t_n, dt)

    w_f = np.array([fr.h_f, fr.m_f])
    hp, mp = fr.half_prev
    flux_prev = np.array(flux_hm(hp, mp, fr.beta_prev), dtype=float)
    s_prev = _source(hp, mp, x_f - dx, fr.accel)

    clipped = 0
    flux_bar = np.zeros(2)
    s_bar = np.zeros(2)
    if geo.case_id is not Case.I:
        hb, mb, c = extrapolate_front_state(rec, x_f, fr.x_margin, u_m, geo.t_bar, t_n)
        clipped += int(c)
        flux_bar = np.array(flux_hm(hb, mb, fr.beta_f), dtype=float)
        s_bar = _source(hb, mb, x_f, fr.accel)

    lam_bar = geo.dt_bar / dx
    left = (
        0.5 * fr.data_prev
        + (1.0 - geo.alpha_f) * w_f
        - lam_bar * flux_bar
        + dt / dx * flux_prev
        + geo.omega_prev / dx * s_prev
        - geo.omega_cell / dx * s_bar
    )
    right = geo.alpha_f * w_f + lam_bar * flux_bar + geo.omega_cell / dx * s_bar
    return FrontResult(left, right, x_new, u_m, geo, clipped)


# ----------------------------------------------------------------------
# coupled step


def front_cell_index(fld: EulerianField, x: float) -> int:
    """Cell ``f`` with ``x_{f-1/2} < x <= x_{f+1/2}``."""
    edges = fld.edges
    k = int(np.ceil((x - edges[0]) / fld.dx - EDGE_TOL)) - 1
    if not 0 <= k < fld.n_cells:
        raise MarginError(f"front at x={x:.6g} outside the grid")
    return k


def tail_cell_index(fld: EulerianField, x: float) -> int:
    """Cell ``t`` with ``x_{t-1/2} <= x < x_{t+1/2}``."""
    edges = fld.edges
    k = int(np.floor((x - edges[0]) / fld.dx + EDGE_TOL))
    if not 0 <= k < fld.n_cells:
        raise MarginError(f"tail at x={x:.6g} outside the grid")
    return k


@dataclass
class TrackedField:
    """NOC field plus tracked tail and front positions."""

    field: EulerianField
    x_tail: float
    x_front: float
    u_tail: float = 0.0
    u_front: float = 0.0
    clips: int = 0
    cases: Counter = field(default_factory=Counter)

    @property
    def t(self) -> float:
        return self.field.t

    @property
    def total_mass(self) -> float:
        return self.field.total_mass

    def margins(self) -> tuple[Margin, Margin]:
        return (
            Margin(MarginKind.TAIL, self.x_tail, tail_cell_index(self.field, self.x_tail), self.u_tail),
            Margin(MarginKind.FRONT, self.x_front, front_cell_index(self.field, self.x_front), self.u_front),
        )


def _accel_fn(params: MaterialParams, track: TrackProfile, mirrored: bool):
    if not mirrored:
        return lambda u, x: float(net_acceleration(u, x, params, track))
    return lambda u, x: -float(net_acceleration(-u, -x, params, track))


def _margin_beta(params, track, x, du):
    return float(beta_x(params, track.zeta(x), du))


def margin_speed_bound(state: TrackedField) -> float:
    """Largest margin-cell velocity magnitude, for the time-step control."""
    fld = state.field
    f = front_cell_index(fld, state.x_front)
    t = tail_cell_index(fld, state.x_tail)
    out = 0.0
    for j in (f, t):
        if fld.h[j] > H_DRY:
            out = max(out, abs(fld.m[j] / fld.h[j]))
    return out


def tracked_cfl_dt(state: TrackedField, cfl_number: float, t_next: float | None = None) -> float:
    return cfl_dt(state.field, cfl_number, t_next, extra_speed=margin_speed_bound(state))


def margin_cell_update(
    state: TrackedField,
    method,
    dt: float,
    params: MaterialParams,
    track: TrackProfile,
    order: int = 2,
    jacobian_free: bool = False,
    bc=Transparent(),
    adjacent_method=ReconMethod.WENO_LINEAR,
    variables: str = "conserved",
) -> TrackedField:
    """One NOC step with the tail and front cells updated by front tracking.

    The two cells adjacent to the margin cells are reconstructed with
    ``adjacent_method`` (linear WENO by default) whatever the interior method.
    ``variables`` selects conserved or primitive limiting in the interior
    (see :func:`noc.padded_reconstruction`).
    """
    method = ReconMethod.parse(method)
    fld = state.field
    dx, t_n = fld.dx, fld.t
    f = front_cell_index(fld, state.x_front)
    tl = tail_cell_index(fld, state.x_tail)
    if f - tl < 3:
        raise MarginError(f"avalanche body spans too few cells (tail {tl}, front {f})")
    xc = fld.centers
    P = np.vstack((fld.h, fld.m))

    rec_f = margin_reconstruct(fld.h[f], fld.m[f], state.x_front, xc[f] - 0.5 * dx, xc[f] + 0.5 * dx, MarginKind.FRONT)
    rec_t = margin_reconstruct(fld.h[tl], fld.m[tl], state.x_tail, xc[tl] - 0.5 * dx, xc[tl] + 0.5 * dx, MarginKind.TAIL)
    sample_f = np.array([rec_f.h(xc[f]), rec_f.m(xc[f])])
    sample_t = np.array([rec_t.h(xc[tl]), rec_t.m(xc[tl])])
    adj = ReconMethod.parse(adjacent_method)
    # neighbours of the margin cells see the margin reconstruction sampled at the margin-cell centre
    override = {
        NGHOST + f - 1: (adj, P[:, f - 2], sample_f),
        NGHOST + tl + 1: (adj, sample_t, P[:, tl + 2]),
    }
    terms = step_terms(fld, method, dt, params, track, bc, jacobian_free, override, variables)
    sl = new_cell_slice(fld.phase, fld.n_base)
    new = staggered_update(terms, dt, dx)[:, sl].copy()
    shift = NGHOST - sl.start  # new index of the pair (j, j+1) is j + shift
    u = fld.u

    # front
    pf = NGHOST + f - 1
    frame = FrontFrame(
        dx=dx,
        x_f=xc[f],
        x_margin=state.x_front,
        h_f=fld.h[f],
        m_f=fld.m[f],
        beta_f=_margin_beta(params, track, xc[f], u[f] - u[f - 1]),
        data_prev=terms.data_r[:, pf],
        half_prev=np.array([terms.h_half[pf], terms.m_half[pf]]),
        beta_prev=terms.beta[pf],
        accel=_accel_fn(params, track, False),
    )
    res_f = front_update(frame, dt, t_n, order)
    kf = f - 1 + shift  # pair (f-1, f)
    if kf + 1 >= new.shape[1]:
        raise MarginError("front reached the end of the domain")
    new[:, kf] = res_f.left
    new[:, kf + 1] = res_f.right
    x_front_new = res_f.x_new
    new_front = kf + (1 if x_front_new > xc[f] else 0)
    if new_front == kf + 1 and new[0, kf + 1] <= H_DRY:
        # crossing too short to leave resolvable mass beyond x_f: stop at the grid point
        new_front, x_front_new = kf, float(xc[f])
    if new_front == kf:
        new[:, kf] += new[:, kf + 1]
        new[:, kf + 1] = 0.0

    # tail, mirrored
    pt = NGHOST + tl + 1
    frame_t = FrontFrame(
        dx=dx,
        x_f=-xc[tl],
        x_margin=-state.x_tail,
        h_f=fld.h[tl],
        m_f=-fld.m[tl],
        beta_f=_margin_beta(params, track, xc[tl], u[tl + 1] - u[tl]),
        data_prev=terms.data_l[:, pt] * np.array([1.0, -1.0]),
        half_prev=np.array([terms.h_half[pt], -terms.m_half[pt]]),
        beta_prev=terms.beta[pt],
        accel=_accel_fn(params, track, True),
    )
    res_t = front_update(frame_t, dt, t_n, order)
    kt = tl + shift  # pair (tl, tl+1)
    if kt - 1 < 0:
        raise MarginError("tail reached the start of the domain")
    new[:, kt] = res_t.left * np.array([1.0, -1.0])
    new[:, kt - 1] = res_t.right * np.array([1.0, -1.0])
    x_tail_new = -res_t.x_new
    new_tail = kt - (1 if x_tail_new < xc[tl] else 0)
    if new_tail == kt - 1 and new[0, kt - 1] <= H_DRY:
        new_tail, x_tail_new = kt, float(xc[tl])
    if new_tail == kt:
        new[:, kt] += new[:, kt - 1]
        new[:, kt - 1] = 0.0

    new[:, new_front + 1 :] = 0.0
    new[:, :new_tail] = 0.0
    for res, k in ((res_f, new_front), (res_t, new_tail)):
        if new[0, k] < -H_DRY:
            g = res.geometry
            raise NegativeDepthError(
                f"negative margin-cell average {new[0, k]:.3e} at t={t_n + dt:.6g} "
                f"(case {g.case_id.value}, alpha={g.alpha_f:.4g}, omega=({g.omega_prev:.4g}, {g.omega_cell:.4g}))",
                index=k,
                case=g.case_id.value,
            )
    h, m = finalize(new[0], new[1], t_n + dt)
    out = EulerianField(fld.x0, dx, fld.n_base, 1 - fld.phase, h, m, np.zeros_like(h), t_n + dt)
    out = with_beta(apply_eulerian_bc(out, bc), params, track, bc)
    for k, kind in ((new_front, "front"), (new_tail, "tail")):
        if out.h[k] <= H_DRY:
            raise MarginError(f"{kind} margin cell emptied at t={out.t:.6g}")

    cases = Counter(state.cases)
    cases[("front", res_f.geometry.case_id.value)] += 1
    cases[("tail", res_t.geometry.case_id.value)] += 1
    result = TrackedField(
        field=out,
        x_tail=x_tail_new,
        x_front=x_front_new,
        u_tail=-res_t.u_margin,
        u_front=res_f.u_margin,
        clips=state.clips + res_f.clipped + res_t.clipped,
        cases=cases,
    )
    # the margin must sit in the cell the update assumed
    if front_cell_index(out, result.x_front) != new_front or tail_cell_index(out, result.x_tail) != new_tail:
        raise MarginError("margin position inconsistent with updated cell layout")
    return result


tracked_step = margin_cell_update


def init_tracked(fld: EulerianField, x_tail: float, x_front: float) -> TrackedField:
    """Attach margins to a field; cells outside them are set to vacuum."""
    if not x_tail < x_front:
        raise DomainError("tail must lie upslope of the front")
    f = front_cell_index(fld, x_front)
    t = tail_cell_index(fld, x_tail)
    h, m = fld.h.copy(), fld.m.copy()
    h[f + 1 :] = 0.0
    m[f + 1 :] = 0.0
    h[:t] = 0.0
    m[:t] = 0.0
    return TrackedField(field=replace(fld, h=h, m=m), x_tail=x_tail, x_front=x_front)
