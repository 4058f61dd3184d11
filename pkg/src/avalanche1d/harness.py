"""Experiment registry, run driver, error metrics and shock diagnostics.

Three reference experiments are built in:

* ``travelling_shock``: a steady first-family shock on a 40 degree plane
  fed from upslope (exact oracle);
* ``similarity``: the spreading parabolic cap (exact oracle);
* ``runout``: a cap sliding from a 40 degree slope onto a horizontal
  run-out zone, where an upslope-moving shock forms (no oracle).

``custom`` runs a user-specified cap on a plane or a slope with a
transition zone.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field, fields, replace
from typing import Callable

import numpy as np

from . import front_tracking as ft
from . import lagrangian as lag
from . import noc
from .errors import AvalancheError, ConfigError, DomainError
from .exact import (
    ShockSetup,
    SimilaritySetup,
    shock_cell_averages,
    shock_speed,
    similarity_cell_averages,
    similarity_margins,
    similarity_profile,
)
from .model import H_DRY, MaterialParams, PressureBranch, TrackProfile, earth_pressure_coefficient, velocity
from .profiles import InitialProfile, parabolic_cap, step_profile
from .reconstruction import ReconMethod

#: steps between two time levels must land on checkpoints within this
T_TOL = 1e-12


class Experiment(enum.Enum):
    TRAVELLING_SHOCK = "travelling_shock"
    SIMILARITY = "similarity"
    RUN_OUT = "runout"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, name) -> "Experiment":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        aliases = {"shock": cls.TRAVELLING_SHOCK, "travellingshock": cls.TRAVELLING_SHOCK,
                   "run_out": cls.RUN_OUT}
        for e in cls:
            if key == e.value:
                return e
        if key in aliases:
            return aliases[key]
        raise ConfigError(f"unknown experiment {name!r}")


class Scheme(enum.Enum):
    LAGRANGIAN = "lagrangian"
    NOC = "noc"
    NOC_FRONT_TRACKING = "nft"

    @classmethod
    def parse(cls, name) -> "Scheme":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "").replace("_", "")
        aliases = {"lagrangian": cls.LAGRANGIAN, "lag": cls.LAGRANGIAN, "noc": cls.NOC,
                   "nft": cls.NOC_FRONT_TRACKING, "nocfronttracking": cls.NOC_FRONT_TRACKING,
                   "fronttracking": cls.NOC_FRONT_TRACKING}
        if key in aliases:
            return aliases[key]
        raise ConfigError(f"unknown scheme {name!r}")


class RunError(AvalancheError):
    """A scheme error raised during :func:`run`, tagged with where it happened."""

    def __init__(self, message, step: int, t: float, cause: Exception):
        super().__init__(f"step {step}, t={t:.6g}: {message}")
        self.step = step
        self.t = t
        self.cause = cause


class NoJumpError(AvalancheError):
    """No discontinuity stands out of the field."""


# ----------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that defines a run.  Angles are in degrees.

    ``cfl`` drives Eulerian steps; ``dt`` (if set) fixes the step and is
    the default for Lagrangian runs.  ``checkpoints=None`` picks the
    experiment's standard output times.
    """

    experiment: Experiment = Experiment.SIMILARITY
    scheme: Scheme = Scheme.NOC_FRONT_TRACKING
    recon: ReconMethod = ReconMethod.WENO_QUADRATIC
    n: int = 360
    cfl: float = 0.3
    dt: float | None = None
    t_end: float = 8.0
    checkpoints: tuple[float, ...] | None = None
    phi: float = 30.0
    delta: float = 30.0
    zeta: float = 40.0
    epsilon: float = 1.0
    mu: float = 0.0
    swap_friction: bool = False
    # transition from zeta to zeta_runout over [transition_start, transition_end]; none if start is None
    zeta_runout: float = 0.0
    transition_start: float | None = None
    transition_end: float | None = None
    x_min: float = 0.0
    x_max: float = 36.0
    cap_center: float = 4.0
    cap_radius: float = 3.2
    cap_height: float = 1.0
    u_init: float = 1.2
    margin_order: int = 2
    jacobian_free: bool = False
    #: "conserved" or "primitive" (h, u) slope limiting for piecewise-linear methods
    limit_variables: str = "conserved"
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "experiment", Experiment.parse(self.experiment))
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        try:
            object.__setattr__(self, "recon", ReconMethod.parse(self.recon))
        except DomainError as e:
            raise ConfigError(str(e)) from None
        if self.checkpoints is not None:
            object.__setattr__(self, "checkpoints", tuple(float(t) for t in self.checkpoints))
        self.validate()

    def validate(self) -> None:
        if self.n < 3:
            raise ConfigError("n must be at least 3")
        if not self.t_end > 0:
            raise ConfigError("t_end must be positive")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError("dt must be positive")
        if self.dt is None and not 0.0 < self.cfl < 0.5:
            raise ConfigError("cfl must lie in (0, 1/2)")
        if not self.x_max > self.x_min:
            raise ConfigError("x_max must exceed x_min")
        if self.cap_radius <= 0 or self.cap_height <= 0:
            raise ConfigError("cap radius and height must be positive")
        if self.limit_variables not in ("conserved", "primitive"):
            raise ConfigError("limit_variables must be conserved or primitive")
        if self.limit_variables == "primitive" and self.recon is ReconMethod.WENO_QUADRATIC:
            raise ConfigError("primitive limiting needs a piecewise-linear reconstruction")
        if self.margin_order not in (1, 2):
            raise ConfigError("margin_order must be 1 or 2")
        if not 0.0 <= self.mu <= 0.1:
            raise ConfigError("mu must lie in [0, 0.1]")
        if (self.transition_start is None) != (self.transition_end is None):
            raise ConfigError("transition needs both start and end")
        if self.transition_start is not None and not self.transition_end > self.transition_start:
            raise ConfigError("transition_end must exceed transition_start")
        if self.checkpoints is not None:
            cp = np.asarray(self.checkpoints)
            if np.any(np.diff(cp) <= 0) or np.any(cp < 0) or (cp.size and cp[-1] > self.t_end + T_TOL):
                raise ConfigError("checkpoints must be sorted, non-negative and not beyond t_end")
        if self.scheme is Scheme.NOC_FRONT_TRACKING and self.experiment is Experiment.TRAVELLING_SHOCK:
            raise ConfigError("front tracking needs a finite avalanche body")

    @property
    def checkpoint_times(self) -> tuple[float, ...]:
        if self.checkpoints is not None:
            return self.checkpoints
        step = 3.0 if self.experiment is Experiment.RUN_OUT else 1.0
        k = int(math.floor(self.t_end / step + 1e-9))
        times = [i * step for i in range(k + 1)]
        if times[-1] < self.t_end - T_TOL:
            times.append(self.t_end)
        return tuple(times)

    @property
    def material(self) -> MaterialParams:
        phi, delta = (self.delta, self.phi) if self.swap_friction else (self.phi, self.delta)
        try:
            return MaterialParams.from_degrees(phi, delta, self.epsilon, self.mu)
        except DomainError as e:
            raise ConfigError(str(e)) from None

    @property
    def track(self) -> TrackProfile:
        z = math.radians(self.zeta)
        if self.transition_start is None:
            return TrackProfile.plane(z)
        return TrackProfile.piecewise_linear(
            [self.transition_start, self.transition_end], [z, math.radians(self.zeta_runout)]
        )

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def preset(experiment, scheme="nft", **overrides) -> ExperimentConfig:
    """Standard configuration of a reference experiment, then ``overrides``."""
    experiment = Experiment.parse(experiment)
    scheme = Scheme.parse(scheme)
    base: dict = dict(experiment=experiment, scheme=scheme)
    if experiment is Experiment.TRAVELLING_SHOCK:
        base.update(phi=40.0, delta=40.0, zeta=40.0, n=360, cfl=0.4, t_end=6.0, recon=ReconMethod.SUPERBEE)
    elif experiment is Experiment.SIMILARITY:
        base.update(phi=30.0, delta=30.0, zeta=40.0, n=360, cfl=0.3, t_end=8.0, u_init=1.2)
    elif experiment is Experiment.RUN_OUT:
        base.update(phi=38.0, delta=35.0, zeta=40.0, zeta_runout=0.0, transition_start=21.5,
                    transition_end=25.5, n=180, cfl=0.4, t_end=27.0, u_init=0.0)
    if scheme is Scheme.LAGRANGIAN:
        base.update(dt=1e-3)
    base.update(overrides)
    return ExperimentConfig(**base)


def _coerce(name: str, text: str):
    typ = str(_FIELD_TYPES[name])
    text = text.strip()
    if name == "checkpoints":
        if text.lower() in ("", "none"):
            return None
        return tuple(float(v) for v in text.replace(",", " ").split())
    if text.lower() == "none" and "None" in typ:
        return None
    if typ.startswith("bool"):
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: expected a boolean, got {text!r}")
    if typ.startswith("int"):
        return int(text)
    if typ.startswith("float"):
        return float(text)
    return text


def config_from_mapping(values: dict) -> ExperimentConfig:
    """Build a config from string key/values; experiment and scheme pick the preset."""
    values = {k.strip().lower().replace("-", "_"): v for k, v in values.items()}
    aliases = {"reconstruction": "recon", "n_cells": "n"}
    values = {aliases.get(k, k): v for k, v in values.items()}
    unknown = set(values) - set(_FIELD_TYPES)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        parsed = {k: (_coerce(k, v) if isinstance(v, str) else v) for k, v in values.items()}
    except ValueError as e:
        raise ConfigError(str(e)) from None
    experiment = parsed.pop("experiment", Experiment.SIMILARITY)
    scheme = parsed.pop("scheme", Scheme.NOC_FRONT_TRACKING)
    try:
        return preset(experiment, scheme, **parsed)
    except TypeError as e:
        raise ConfigError(str(e)) from None


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


# ----------------------------------------------------------------------
# problem set-up


@dataclass(frozen=True)
class Problem:
    params: MaterialParams
    track: TrackProfile
    profile: InitialProfile
    noc_bc: object
    lag_bc: lag.LagrangianBC
    lag_domain: tuple[float, float]
    margins: tuple[float, float] | None
    #: exact cell averages over given edges at time t, or None
    oracle_avg: Callable | None = None
    #: exact point values at given positions at time t, or None
    oracle_point: Callable | None = None
    exact_margins: Callable | None = None


def shock_setup(cfg: ExperimentConfig) -> ShockSetup:
    p = cfg.material
    beta = math.cos(math.radians(cfg.zeta)) * earth_pressure_coefficient(p, PressureBranch.ACTIVE) * p.epsilon
    return ShockSetup(h_plus=0.3, h_minus=0.9, u_minus=0.1, beta_x=beta, x0=24.0)


def similarity_setup(cfg: ExperimentConfig) -> SimilaritySetup:
    p = cfg.material
    z = math.radians(cfg.zeta)
    beta = math.cos(z) * earth_pressure_coefficient(p, PressureBranch.ACTIVE) * p.epsilon
    mass = 4.0 * cfg.cap_height * cfg.cap_radius / 3.0
    return SimilaritySetup(cfg.cap_radius, 0.0, cfg.u_init, z, p.delta, beta, mass, cfg.cap_center)


def build_problem(cfg: ExperimentConfig) -> Problem:
    params, track = cfg.material, cfg.track
    if cfg.experiment is Experiment.TRAVELLING_SHOCK:
        s = shock_setup(cfg)
        up = shock_speed(s).u_plus
        prof = step_profile(s.x0, s.h_plus, s.h_minus, up, s.u_minus)
        return Problem(
            params, track, prof,
            noc_bc=noc.InflowOutflow(s.h_plus, s.h_plus * up),
            lag_bc=lag.LagrangianBC.INFLOW_OUTFLOW,
            lag_domain=(cfg.x_min, cfg.x_max),
            margins=None,
            oracle_avg=lambda edges, t: shock_cell_averages(edges, t, s),
            oracle_point=lambda x, t: _shock_points(x, t, s),
        )
    lo, hi = cfg.cap_center - cfg.cap_radius, cfg.cap_center + cfg.cap_radius
    if lo < cfg.x_min or hi > cfg.x_max:
        raise ConfigError("initial cap does not fit in the domain")
    prof = parabolic_cap(cfg.cap_center, cfg.cap_radius, cfg.cap_height, cfg.u_init)
    common = dict(noc_bc=noc.Transparent(), lag_bc=lag.LagrangianBC.MARGIN_VACUUM, lag_domain=(lo, hi), margins=(lo, hi))
    if cfg.experiment is Experiment.SIMILARITY:
        if cfg.transition_start is not None:
            raise ConfigError("the similarity experiment lives on a plane")
        s = similarity_setup(cfg)
        return Problem(
            params, track, prof,
            oracle_avg=lambda edges, t: similarity_cell_averages(edges, t, s),
            oracle_point=lambda x, t: similarity_profile(x, t, s)[0].h,
            exact_margins=lambda t: similarity_margins(t, s),
            **common,
        )
    return Problem(params, track, prof, **common)


def _shock_points(x, t, s: ShockSetup):
    xs = s.x0 + shock_speed(s).V_n * t
    return np.where(np.asarray(x) < xs, s.h_plus, s.h_minus)


# ----------------------------------------------------------------------
# metrics and diagnostics


def error_metric(h, h_exact) -> float:
    """Relative L1 thickness error ``sum|h - h_exact| / sum h_exact``."""
    h = np.asarray(h, dtype=float)
    h_exact = np.asarray(h_exact, dtype=float)
    if h_exact.size == 0:
        raise DomainError("empty oracle")
    if h.shape != h_exact.shape:
        raise DomainError(f"field and oracle live on different grids ({h.shape} vs {h_exact.shape})")
    total = float(np.sum(h_exact))
    if not total > 0:
        raise DomainError("oracle carries no mass")
    return float(np.sum(np.abs(h - h_exact)) / total)


def locate_shock(x, h, u=None, jump_factor: float = 10.0) -> float:
    """Position of the steepest compressive jump in ``h``.

    Only interfaces strictly inside the wet region are considered, so the
    vacuum margins never count as jumps.  If ``u`` is given, interfaces
    where the velocity increases (expansions) are ignored as well.  The
    position is the midpoint between the two cells of the steepest
    interface.  Raises :class:`NoJumpError` when the steepest difference is
    below ``jump_factor`` times the median difference.
    """
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    wet = np.flatnonzero(h > H_DRY)
    if wet.size < 4:
        raise NoJumpError("too few wet cells")
    lo, hi = wet[0], wet[-1]
    if np.any(h[lo : hi + 1] <= H_DRY):
        raise NoJumpError("wet region is not connected")
    if lo > 0 or hi < h.size - 1:
        # drop the margin cells themselves
        lo, hi = lo + (lo > 0), hi - (hi < h.size - 1)
    d = np.abs(np.diff(h[lo : hi + 1]))
    if d.size < 2:
        raise NoJumpError("too few wet interfaces")
    cand = d.copy()
    if u is not None:
        du = np.diff(np.asarray(u, dtype=float)[lo : hi + 1])
        cand[du > 0] = 0.0
    k = int(np.argmax(cand))
    med = float(np.median(d))
    if not cand[k] > 0 or cand[k] < jump_factor * med:
        raise NoJumpError(f"largest jump {cand[k]:.3g} is below {jump_factor} x median {med:.3g}")
    return float(0.5 * (x[lo + k] + x[lo + k + 1]))


# ----------------------------------------------------------------------
# run report


@dataclass
class Checkpoint:
    t: float
    x: np.ndarray
    h: np.ndarray
    u: np.ndarray
    m: np.ndarray
    x_tail: float | None = None
    x_front: float | None = None
    E: float | None = None


@dataclass
class RunReport:
    config: ExperimentConfig
    checkpoints: list[Checkpoint] = field(default_factory=list)
    #: (t, x_tail, x_front) after every step (and at t=0)
    margin_trace: list[tuple[float, float, float]] = field(default_factory=list)
    #: (t, total mass) after every step
    mass_trace: list[tuple[float, float]] = field(default_factory=list)
    initial_mass: float = 0.0
    steps: int = 0
    clips: int = 0
    cases: Counter = field(default_factory=Counter)
    tv_u: list[float] = field(default_factory=list)
    tv_u_max: float = 0.0
    #: exact (tail, front) per checkpoint when known
    exact_margins: list[tuple[float, float]] = field(default_factory=list)

    @property
    def errors(self) -> dict[float, float]:
        return {c.t: c.E for c in self.checkpoints if c.E is not None}

    @property
    def has_oracle(self) -> bool:
        return any(c.E is not None for c in self.checkpoints)

    def checkpoint(self, t: float) -> Checkpoint:
        for c in self.checkpoints:
            if abs(c.t - t) <= 1e-9:
                return c
        raise KeyError(t)

    @property
    def mass_drift(self) -> float:
        if not self.mass_trace or self.initial_mass == 0:
            return 0.0
        masses = np.array([m for _, m in self.mass_trace])
        return float(np.max(np.abs(masses - self.initial_mass)) / self.initial_mass)


def _wet_tv(h, u) -> float:
    wet = np.asarray(h) > H_DRY
    return lag.total_variation(np.asarray(u)[wet]) if np.count_nonzero(wet) > 1 else 0.0


def _eulerian_checkpoint(fld: noc.EulerianField, margins, E) -> Checkpoint:
    x, h, m = noc.destagger(fld)
    u = np.asarray(velocity(h, m), dtype=float)
    xt, xf = margins if margins is not None else (None, None)
    return Checkpoint(fld.t, x, h, u, m, xt, xf, E)


def _wet_extent(fld: noc.EulerianField) -> tuple[float, float]:
    wet = np.flatnonzero(fld.h > H_DRY)
    if wet.size == 0:
        return (math.nan, math.nan)
    e = fld.edges
    return float(e[wet[0]]), float(e[wet[-1] + 1])


# ----------------------------------------------------------------------
# driver


def run(cfg: ExperimentConfig) -> RunReport:
    """Advance the configured scheme through all checkpoints."""
    prob = build_problem(cfg)
    report = RunReport(config=cfg)
    if prob.exact_margins is not None:
        report.exact_margins = [prob.exact_margins(t) for t in cfg.checkpoint_times]
    if cfg.scheme is Scheme.LAGRANGIAN:
        _run_lagrangian(cfg, prob, report)
    else:
        _run_eulerian(cfg, prob, report)
    return report


def _scheme_error(e: Exception, step: int, t: float) -> RunError:
    return RunError(f"{type(e).__name__}: {e}", step, t, e)


def _run_lagrangian(cfg: ExperimentConfig, prob: Problem, report: RunReport) -> None:
    dt = cfg.dt if cfg.dt is not None else 1e-3
    mesh = lag.init_from_profile(prob.profile, prob.lag_domain, cfg.n)
    report.initial_mass = mesh.total_volume
    tv = lag.total_variation(mesh.u_half)
    report.tv_u_max = tv
    report.margin_trace.append((0.0, float(mesh.b[0]), float(mesh.b[-1])))
    pending = list(cfg.checkpoint_times)
    step = 0

    def record(mesh):
        t = mesh.t
        E = None
        if prob.oracle_point is not None:
            E = error_metric(mesh.h, prob.oracle_point(mesh.centers, t))
        u_c = 0.5 * (mesh.u_half[1:] + mesh.u_half[:-1])
        report.checkpoints.append(Checkpoint(t, mesh.centers, mesh.h, u_c, mesh.h * u_c,
                                             float(mesh.b[0]), float(mesh.b[-1]), E))
        report.tv_u.append(lag.total_variation(mesh.u_half))

    while pending:
        target = pending[0]
        if mesh.t >= target - 1e-9:
            record(mesh)
            pending.pop(0)
            continue
        h_step = min(dt, target - mesh.t)
        try:
            mesh = lag.step(mesh, h_step, prob.params, prob.track, prob.lag_bc)
        except AvalancheError as e:
            raise _scheme_error(e, step + 1, mesh.t) from e
        step += 1
        # snap onto the checkpoint to stop round-off drift in t
        if abs(mesh.t - target) < 1e-9:
            mesh = replace(mesh, t=target)
        report.mass_trace.append((mesh.t, mesh.total_volume))
        report.margin_trace.append((mesh.t, float(mesh.b[0]), float(mesh.b[-1])))
        report.tv_u_max = max(report.tv_u_max, lag.total_variation(mesh.u_half))
    report.steps = step


def _run_eulerian(cfg: ExperimentConfig, prob: Problem, report: RunReport) -> None:
    tracked = cfg.scheme is Scheme.NOC_FRONT_TRACKING
    fld = noc.initial_cell_averages(prob.profile, cfg.x_min, cfg.dx, cfg.n, prob.params, prob.track, prob.noc_bc)
    fld = noc.apply_eulerian_bc(fld, prob.noc_bc)
    state = None
    if tracked:
        state = ft.init_tracked(fld, *prob.margins)
        fld = state.field
    report.initial_mass = fld.total_mass
    pending = list(cfg.checkpoint_times)
    step = 0

    def margins():
        if state is not None:
            return (state.x_tail, state.x_front)
        return _wet_extent(fld)

    def record():
        E = None
        if prob.oracle_avg is not None:
            E = error_metric(fld.h, prob.oracle_avg(fld.edges, fld.t))
        report.checkpoints.append(_eulerian_checkpoint(fld, margins() if prob.margins else None, E))
        report.tv_u.append(_wet_tv(fld.h, fld.u))

    report.margin_trace.append((0.0, *margins()))
    report.tv_u_max = _wet_tv(fld.h, fld.u)
    while pending:
        target = pending[0]
        if fld.t >= target - 1e-9:
            record()
            pending.pop(0)
            continue
        try:
            if cfg.dt is not None:
                dt = min(cfg.dt, target - fld.t)
            elif tracked:
                dt = ft.tracked_cfl_dt(state, cfg.cfl, target)
            else:
                dt = noc.cfl_dt(fld, cfg.cfl, target)
            if tracked:
                state = ft.margin_cell_update(state, cfg.recon, dt, prob.params, prob.track,
                                              order=cfg.margin_order, jacobian_free=cfg.jacobian_free, bc=prob.noc_bc,
                                              variables=cfg.limit_variables)
                fld = state.field
            else:
                fld = noc.noc_step(fld, cfg.recon, dt, prob.params, prob.track, prob.noc_bc, cfg.jacobian_free,
                                   cfg.limit_variables)
        except AvalancheError as e:
            raise _scheme_error(e, step + 1, fld.t) from e
        step += 1
        if abs(fld.t - target) < 1e-9:
            fld = replace(fld, t=target)
            if state is not None:
                state = replace(state, field=fld)
        report.mass_trace.append((fld.t, fld.total_mass))
        report.margin_trace.append((fld.t, *margins()))
        report.tv_u_max = max(report.tv_u_max, _wet_tv(fld.h, fld.u))
    report.steps = step
    if state is not None:
        report.clips = state.clips
        report.cases = Counter(state.cases)


# ----------------------------------------------------------------------
# run-out diagnostics


@dataclass(frozen=True)
class RunoutDiagnostics:
    shock_formed_at: float | None
    shock_positions: tuple[tuple[float, float], ...]
    upslope_motion: bool
    final_front_at_rest: bool

    @property
    def ok(self) -> bool:
        return self.shock_formed_at is not None and self.upslope_motion and self.final_front_at_rest


def runout_diagnostics(report: RunReport) -> RunoutDiagnostics:
    """Shock formation time, upslope shock motion and front arrest."""
    found = []
    for c in report.checkpoints:
        try:
            found.append((c.t, locate_shock(c.x, c.h, c.u)))
        except NoJumpError:
            continue
    formed = found[0][0] if found else None
    # strictly decreasing positions at every checkpoint after formation (at least two more)
    upslope = False
    if found:
        later = [c for c in report.checkpoints if c.t >= formed]
        pos = dict(found)
        if len(later) >= 3 and all(c.t in pos for c in later):
            xs = [pos[c.t] for c in later]
            upslope = all(b < a for a, b in zip(xs, xs[1:]))
    at_rest = False
    fronts = [c.x_front for c in report.checkpoints if c.x_front is not None]
    if len(fronts) >= 2:
        at_rest = abs(fronts[-1] - fronts[-2]) < report.config.dx
    return RunoutDiagnostics(formed, tuple(found), upslope, at_rest)
