import math

import numpy as np
import pytest

from avalanche1d import lagrangian as lag
from avalanche1d.errors import CellInversionError, DomainError
from avalanche1d.model import MaterialParams, TrackProfile
from avalanche1d.profiles import InitialProfile, parabolic_cap, step_profile


def uniform(h=1.0, u=2.0):
    return InitialProfile(lambda x: np.full(np.shape(x), h), lambda x: np.full(np.shape(x), u), ())


def test_init_uniform():
    mesh = lag.init_from_profile(uniform(), (0.0, 1.0), 4)
    np.testing.assert_allclose(mesh.h, 1.0)
    np.testing.assert_allclose(mesh.u_half, 2.0)
    np.testing.assert_allclose(mesh.V, 0.25)


def test_init_parabola_volume():
    mesh = lag.init_from_profile(parabolic_cap(4.0, 3.2, 1.0, 1.2), (0.8, 7.2), 16)
    assert mesh.total_volume == pytest.approx(4.0 * 3.2 / 3.0, abs=1e-13)
    assert np.all(mesh.V > 0)


def test_init_step_subcell():
    prof = step_profile(24.05, 0.3, 0.9, 1.3, 0.1)
    mesh = lag.init_from_profile(prof, (23.9, 24.2), 3)
    assert mesh.h[1] == pytest.approx(0.5 * 0.3 + 0.5 * 0.9)


def test_init_rejects_small():
    with pytest.raises(DomainError):
        lag.init_from_profile(uniform(), (0.0, 1.0), 1)


def test_rigid_translation():
    p = MaterialParams.from_degrees(40, 40)
    tr = TrackProfile.plane(math.radians(40))
    mesh = lag.init_from_profile(uniform(0.5, 1.3), (0.0, 2.0), 8)
    new = lag.step(mesh, 0.01, p, tr, lag.LagrangianBC.INFLOW_OUTFLOW)
    np.testing.assert_allclose(new.b - mesh.b, 0.013, atol=1e-14)
    np.testing.assert_allclose(new.h, mesh.h, atol=1e-13)


def test_flat_slab_accelerates_by_drive():
    p = MaterialParams.from_degrees(30, 30)
    tr = TrackProfile.plane(math.radians(40))
    mesh = lag.init_from_profile(uniform(0.5, 0.5), (0.0, 2.0), 8)
    new = lag.step(mesh, 1e-3, p, tr, lag.LagrangianBC.INFLOW_OUTFLOW)
    sx = math.sin(math.radians(40)) - math.tan(math.radians(30)) * math.cos(math.radians(40))
    np.testing.assert_allclose(new.u_half - mesh.u_half, 1e-3 * sx, atol=1e-14)


def test_volumes_never_change():
    p = MaterialParams.from_degrees(30, 30)
    tr = TrackProfile.plane(math.radians(40))
    mesh = lag.init_from_profile(parabolic_cap(4.0, 3.2, 1.0, 1.2), (0.8, 7.2), 16)
    V0 = mesh.V.copy()
    for _ in range(200):
        mesh = lag.step(mesh, 1e-3, p, tr)
    assert np.array_equal(mesh.V, V0)


def test_inflow_outflow_keeps_end_velocities():
    p = MaterialParams.from_degrees(40, 40)
    tr = TrackProfile.plane(math.radians(40))
    mesh = lag.init_from_profile(step_profile(24.0, 0.3, 0.9, 1.3148317, 0.1), (0.0, 36.0), 60)
    u0 = mesh.u_half[[0, -1]].copy()
    for _ in range(100):
        mesh = lag.step(mesh, 1e-3, p, tr, lag.LagrangianBC.INFLOW_OUTFLOW)
    np.testing.assert_allclose(mesh.u_half[[0, -1]], u0, atol=1e-12)


def test_two_cell_margin_mesh_finite():
    p = MaterialParams.from_degrees(30, 30)
    tr = TrackProfile.plane(math.radians(40))
    mesh = lag.init_from_profile(parabolic_cap(4.0, 3.2, 1.0, 1.2), (0.8, 7.2), 2)
    new = lag.step(mesh, 1e-3, p, tr)
    assert np.all(np.isfinite(new.u_half))


def test_inversion_reported():
    p = MaterialParams.from_degrees(30, 30)
    tr = TrackProfile.plane(0.0)
    mesh = lag.init_from_profile(uniform(1.0, 0.0), (0.0, 1.0), 4)
    mesh = lag.LagrangianMesh(mesh.b, np.array([0.0, 50.0, 0.0, 0.0, 0.0]), mesh.V)
    with pytest.raises(CellInversionError):
        lag.step(mesh, 0.01, p, tr)


def test_artificial_viscosity_smooths():
    tr = TrackProfile.plane(0.0)
    mesh = lag.init_from_profile(uniform(1.0, 0.0), (0.0, 1.0), 10)
    bumpy = lag.LagrangianMesh(mesh.b, np.where(np.arange(11) == 5, 0.1, 0.0), mesh.V)
    a = lag.step(bumpy, 1e-4, MaterialParams.from_degrees(30, 0.0), tr, lag.LagrangianBC.INFLOW_OUTFLOW)
    b = lag.step(bumpy, 1e-4, MaterialParams.from_degrees(30, 0.0, mu_artificial=0.05), tr, lag.LagrangianBC.INFLOW_OUTFLOW)
    assert b.u_half[5] < a.u_half[5]
