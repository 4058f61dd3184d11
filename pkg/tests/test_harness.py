import math

import numpy as np
import pytest

from avalanche1d import harness as hs
from avalanche1d.errors import ConfigError, DomainError
from avalanche1d.exact import shock_cell_averages, shock_speed
from avalanche1d.reconstruction import ReconMethod


def test_error_metric_identity_and_scaling():
    ex = np.array([0.0, 0.3, 0.9, 0.5])
    assert hs.error_metric(ex, ex) == 0.0
    assert hs.error_metric(ex * (1 + 1e-3), ex) == pytest.approx(1e-3, rel=1e-12)
    assert hs.error_metric(ex + 0.1, ex) >= 0


def test_error_metric_errors():
    with pytest.raises(DomainError):
        hs.error_metric([], [])
    with pytest.raises(DomainError):
        hs.error_metric([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        hs.error_metric([1.0], [0.0])


def test_locate_shock_on_step():
    cfg = hs.preset("shock", "noc")
    s = hs.shock_setup(cfg)
    edges = cfg.x_min + cfg.dx * np.arange(cfg.n + 1)
    h = shock_cell_averages(edges, 0.0, s)
    x = 0.5 * (edges[1:] + edges[:-1])
    assert abs(hs.locate_shock(x, h) - 24.0) <= cfg.dx


def test_locate_shock_parabola_has_no_jump():
    x = np.linspace(0.0, 10.0, 201)
    h = np.clip(1.0 - ((x - 5.0) / 3.0) ** 2, 0.0, None)
    with pytest.raises(hs.NoJumpError):
        hs.locate_shock(x, h)


def test_locate_shock_ignores_expansions():
    x = np.arange(40) * 0.1
    h = np.where(x < 2.0, 0.9, 0.3)
    u_exp = np.where(x < 2.0, 0.1, 1.3)  # fast thin flow ahead: an expansion
    u_cmp = np.where(x < 2.0, 1.3, 0.1)
    assert hs.locate_shock(x, h, u_cmp) == pytest.approx(1.95)
    with pytest.raises(hs.NoJumpError):
        hs.locate_shock(x, h, u_exp)


def test_shock_setup_values():
    s = hs.shock_setup(hs.preset("shock", "noc"))
    assert s.beta_x == pytest.approx(1.84477, abs=1e-5)


def test_preset_defaults():
    cfg = hs.preset("similarity", "lagrangian", n=16)
    assert cfg.dt == 1e-3 and cfg.n == 16
    assert cfg.checkpoint_times == tuple(float(t) for t in range(9))
    ro = hs.preset("runout", "nft")
    assert ro.n == 180 and ro.cfl == 0.4
    assert ro.checkpoint_times == tuple(3.0 * k for k in range(10))
    assert math.degrees(ro.material.phi) == pytest.approx(38.0)
    assert math.degrees(ro.material.delta) == pytest.approx(35.0)
    assert math.degrees(ro.track.zeta(30.0)) == pytest.approx(0.0)
    assert math.degrees(ro.track.zeta(23.5)) == pytest.approx(20.0)


def test_swapped_runout_friction_is_invalid():
    cfg = hs.preset("runout", "nft", swap_friction=True)
    with pytest.raises(ConfigError):
        cfg.material


@pytest.mark.parametrize(
    "bad",
    [
        dict(n=2),
        dict(cfl=0.5),
        dict(t_end=-1.0),
        dict(dt=0.0),
        dict(checkpoints=(2.0, 1.0)),
        dict(checkpoints=(1.0, 9.0)),
        dict(margin_order=3),
        dict(mu=0.5),
        dict(transition_start=1.0),
        dict(limit_variables="primitive"),  # weno3 is not piecewise linear
        dict(recon="spline"),
    ],
)
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        hs.preset("similarity", "nft", **bad)


def test_front_tracking_needs_a_body():
    with pytest.raises(ConfigError):
        hs.preset("shock", "nft")


def test_unknown_names():
    with pytest.raises(ConfigError):
        hs.Experiment.parse("tsunami")
    with pytest.raises(ConfigError):
        hs.Scheme.parse("sph")
    assert hs.Experiment.parse("shock") is hs.Experiment.TRAVELLING_SHOCK
    assert hs.Scheme.parse("NOC-front-tracking") is hs.Scheme.NOC_FRONT_TRACKING


def test_parse_config_text():
    text = """
    # similarity with a coarse grid
    experiment = similarity
    scheme = nft   # tracked
    recon = superbee
    n = 90
    checkpoints = 0, 1, 2
    t_end = 2
    """
    cfg = hs.config_from_mapping(hs.parse_config_text(text))
    assert cfg.experiment is hs.Experiment.SIMILARITY
    assert cfg.recon is ReconMethod.SUPERBEE
    assert cfg.n == 90 and cfg.checkpoint_times == (0.0, 1.0, 2.0)


@pytest.mark.parametrize("text", ["n 90", "bogus = 1", "n = ninety", "jacobian_free = maybe"])
def test_config_text_errors(text):
    with pytest.raises(ConfigError):
        hs.config_from_mapping(hs.parse_config_text(text))


def test_cap_must_fit():
    with pytest.raises(ConfigError):
        hs.build_problem(hs.preset("similarity", "nft", cap_center=1.0))


def _small_similarity(**kw):
    base = dict(n=90, t_end=2.0)
    base.update(kw)
    return hs.preset("similarity", "nft", **base)


def test_run_is_deterministic():
    a = hs.run(_small_similarity())
    b = hs.run(_small_similarity())
    assert a.steps == b.steps
    for ca, cb in zip(a.checkpoints, b.checkpoints):
        assert np.array_equal(ca.h, cb.h) and np.array_equal(ca.u, cb.u)
        assert ca.E == cb.E
    assert a.mass_trace == b.mass_trace


def test_report_structure():
    r = hs.run(_small_similarity())
    assert len(r.mass_trace) == r.steps
    assert len(r.margin_trace) == r.steps + 1
    assert [c.t for c in r.checkpoints] == [0.0, 1.0, 2.0]
    assert r.has_oracle and set(r.errors) == {0.0, 1.0, 2.0}
    assert r.errors[0.0] < 1e-12
    assert r.checkpoint(1.0).x.shape == (90,)
    assert r.mass_drift < 5e-3
    assert len(r.exact_margins) == 3
    with pytest.raises(KeyError):
        r.checkpoint(0.5)


def test_no_oracle_means_no_error():
    r = hs.run(hs.preset("runout", "nft", t_end=3.0))
    assert not r.has_oracle
    assert all(c.E is None for c in r.checkpoints)


def test_lagrangian_similarity_error_at_t6():
    r = hs.run(hs.preset("similarity", "lagrangian", n=16, t_end=6.0))
    assert r.errors[6.0] <= 2.0e-3
    assert len(r.mass_trace) == r.steps == 6000


def test_plain_noc_similarity_margins_from_wet_extent():
    r = hs.run(hs.preset("similarity", "noc", n=90, t_end=1.0, recon="minmod"))
    c = r.checkpoint(1.0)
    assert c.x_tail < c.x_front


def test_run_error_carries_step_and_time():
    # a fixed step far above the CFL limit fails on the first step
    with pytest.raises(hs.RunError) as info:
        hs.run(hs.preset("similarity", "noc", n=90, dt=1.0, t_end=1.0, recon="minmod"))
    assert info.value.step == 1 and info.value.t == 0.0


def test_similarity_has_no_shock():
    d = hs.runout_diagnostics(hs.run(_small_similarity()))
    assert d.shock_formed_at is None and not d.ok


def test_travelling_shock_moves_upslope():
    r = hs.run(hs.preset("shock", "noc", n=180, t_end=3.0))
    d = hs.runout_diagnostics(r)
    assert d.shock_formed_at == 0.0
    assert d.upslope_motion
    xs = dict(d.shock_positions)
    s = hs.shock_setup(r.config)
    assert abs(xs[3.0] - (24.0 + 3.0 * shock_speed(s).V_n)) <= 2 * r.config.dx
