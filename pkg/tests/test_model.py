import math

import numpy as np
import pytest

from avalanche1d.errors import DomainError, DryStateError
from avalanche1d.model import (
    ConservedState,
    MaterialParams,
    PressureBranch,
    TrackProfile,
    beta_x,
    earth_pressure_coefficient,
    flux,
    jacobian,
    max_wave_speed,
    net_acceleration,
    select_branch,
    source,
)

BETA_40 = 1.84477


def test_earth_pressure_equal_angles():
    p = MaterialParams.from_degrees(40, 40)
    k_act = earth_pressure_coefficient(p, PressureBranch.ACTIVE)
    k_pass = earth_pressure_coefficient(p, PressureBranch.PASSIVE)
    assert k_act == k_pass
    assert k_act == pytest.approx(2.0 / math.cos(math.radians(40)) ** 2 - 1.0, rel=1e-14)
    assert k_act == pytest.approx(2.40818, abs=1e-5)
    assert float(beta_x(p, math.radians(40), 1.0)) == pytest.approx(BETA_40, abs=1e-5)


def test_earth_pressure_branches_ordered():
    p = MaterialParams.from_degrees(38, 35)
    k_act = earth_pressure_coefficient(p, PressureBranch.ACTIVE)
    k_pass = earth_pressure_coefficient(p, PressureBranch.PASSIVE)
    assert 0 < k_act < k_pass
    # sum and product of the two branches, evaluated independently
    c2 = math.cos(math.radians(38)) ** 2
    assert k_act + k_pass == pytest.approx(4.0 / c2 - 2.0, rel=1e-13)
    r = 1.0 - c2 / math.cos(math.radians(35)) ** 2
    assert (k_act + 1) * (k_pass + 1) == pytest.approx(4.0 * (1.0 - r) / c2 ** 2, rel=1e-13)


def test_invalid_angles_rejected():
    with pytest.raises(DomainError):
        MaterialParams.from_degrees(30, 40)
    with pytest.raises(DomainError):
        MaterialParams.from_degrees(40, 30, epsilon=1.5)
    with pytest.raises(DomainError):
        MaterialParams.from_degrees(40, 30, mu_artificial=0.2)


@pytest.mark.parametrize("du, branch", [(0.5, PressureBranch.ACTIVE), (-0.5, PressureBranch.PASSIVE), (0.0, PressureBranch.ACTIVE)])
def test_select_branch(du, branch):
    assert select_branch(du) is branch


def test_flux_values():
    f = flux(ConservedState(0.9, 0.09), BETA_40)
    assert f[0] == pytest.approx(0.09)
    assert f[1] == pytest.approx(0.009 + 0.5 * BETA_40 * 0.81, rel=1e-14)
    assert f[1] == pytest.approx(0.75613, abs=1e-5)
    assert np.all(flux(ConservedState(0.0, 0.0), 3.0) == 0.0)
    assert flux(ConservedState(0.7, 0.0), 2.0)[1] == pytest.approx(0.49)


def test_conserved_state_rejects_negative():
    with pytest.raises(DomainError):
        ConservedState(-1.0, 0.0)


def test_source_nonaccelerative_chute():
    p = MaterialParams.from_degrees(40, 40)
    tr = TrackProfile.plane(math.radians(40))
    assert source(ConservedState(0.5, 0.5), 3.0, p, tr)[1] == pytest.approx(0.0, abs=1e-15)
    assert np.all(source(ConservedState(0.0, 0.0), 3.0, p, tr) == 0.0)


def test_source_drive():
    p = MaterialParams.from_degrees(30, 30)
    tr = TrackProfile.plane(math.radians(40))
    sx = float(net_acceleration(1.0, 0.0, p, tr))
    assert sx == pytest.approx(math.sin(math.radians(40)) - math.tan(math.radians(30)) * math.cos(math.radians(40)))
    assert sx == pytest.approx(0.200512, abs=1e-6)
    # sgn(0) = 0: no Coulomb term at rest
    assert float(net_acceleration(0.0, 0.0, p, tr)) == pytest.approx(math.sin(math.radians(40)))


def test_jacobian_rest_state():
    A = jacobian(ConservedState(1.0, 0.0), 1.0)
    np.testing.assert_allclose(A, [[0, 1], [1, 0]])
    np.testing.assert_allclose(sorted(np.linalg.eigvals(A).real), [-1, 1])


def test_jacobian_eigenvalues():
    A = jacobian(ConservedState(0.9, 0.09), BETA_40)
    lam = sorted(np.linalg.eigvals(A).real)
    c = math.sqrt(BETA_40 * 0.9)
    np.testing.assert_allclose(lam, [0.1 - c, 0.1 + c], rtol=1e-12)
    assert c == pytest.approx(1.288524, abs=1e-6)
    with pytest.raises(DryStateError):
        jacobian(ConservedState(0.0, 0.0), 1.0)


def test_max_wave_speed():
    assert max_wave_speed([0.9], [0.09], BETA_40) == pytest.approx(0.1 + math.sqrt(BETA_40 * 0.9), rel=1e-14)
    assert max_wave_speed([0.0, 0.0], [0.0, 0.0], BETA_40) == 0.0
    h = np.array([0.3, 0.9])
    m = np.array([0.3 * 1.3148317, 0.09])
    assert max_wave_speed(h, m, BETA_40) == pytest.approx(1.3148317 + math.sqrt(BETA_40 * 0.3), rel=1e-14)
    assert max_wave_speed(h, m, BETA_40) == pytest.approx(2.058761, abs=1e-6)


def test_piecewise_track():
    tr = TrackProfile.piecewise_linear([21.5, 25.5], [math.radians(40), 0.0])
    assert tr.zeta(0.0) == pytest.approx(math.radians(40))
    assert tr.zeta(23.5) == pytest.approx(math.radians(20))
    assert tr.zeta(30.0) == 0.0
    np.testing.assert_allclose(tr.zeta(np.array([21.5, 25.5])), [math.radians(40), 0.0])
    with pytest.raises(DomainError):
        TrackProfile.piecewise_linear([1.0, 1.0], [0.0, 0.1])
