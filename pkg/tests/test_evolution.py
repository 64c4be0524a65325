import numpy as np
import pytest

from friedrichs import (
    GridMismatchError,
    ModelParams,
    NumericalError,
    ParameterError,
    StateVector,
    amplitude,
    assemble_hamiltonian,
    cn4_amplitudes,
    diagonalize,
    discretize,
    exact_amplitudes,
    make_state,
    propagate_cn4,
    propagate_exact,
    select_dt,
)


@pytest.fixture(scope="module")
def small():
    dm = discretize(ModelParams(), box_L=40.0, n_modes=400)
    H = assemble_hamiltonian(dm)
    return dm, H, diagonalize(H)


@pytest.fixture(scope="module")
def preset_sd(preset_model):
    return diagonalize(preset_model[1])


def test_diagonalization_reconstructs(small):
    _, H, sd = small
    V, E = sd.eigenvectors, sd.eigenvalues
    np.testing.assert_allclose((V * E) @ V.T, H.entries, atol=1e-11)
    assert np.all(np.diff(E) >= 0)


def test_states(small):
    dm, _, _ = small
    one = make_state("discrete", dm)
    assert one.norm == 1.0 and one.label == "1"
    px = make_state("position", dm, 3.0)
    assert px.amplitudes[0] == 0 and px.label == "x=3"
    with pytest.raises(ParameterError):
        make_state("position", dm)
    with pytest.raises(ParameterError):
        make_state("momentum", dm)
    with pytest.raises(NumericalError):
        StateVector(np.array([np.inf, 0.0]))
    with pytest.raises(ValueError):
        StateVector(np.zeros((2, 2)))


def test_exact_survival_basics(preset_sd, preset_model):
    dm, _ = preset_model
    one = make_state("discrete", dm)
    t = np.linspace(-30, 30, 121)
    a = exact_amplitudes(preset_sd, one, one, t).values
    assert abs(a[60]) ** 2 == pytest.approx(1.0, abs=1e-13)
    # real symmetric H: a(-t) = conj a(t)
    np.testing.assert_allclose(a[::-1], np.conj(a), atol=1e-13)


def test_exact_trajectory_matches_amplitudes(small):
    dm, _, sd = small
    one = make_state("discrete", dm)
    x = make_state("position", dm, 2.0)
    t = [0.0, 1.0, 2.5]
    traj = propagate_exact(sd, one, t)
    np.testing.assert_allclose(traj.norms(), 1.0, atol=1e-13)
    np.testing.assert_allclose(amplitude(x, traj).values, exact_amplitudes(sd, x, one, t).values, atol=1e-14)


def test_cn4_converges_at_fourth_order(small):
    dm, H, sd = small
    one = make_state("discrete", dm)
    devs = []
    for dt in (0.04, 0.02):
        series, drift = cn4_amplitudes(H, one, one, dt, int(round(10 / dt)))
        ref = exact_amplitudes(sd, one, one, series.grid).values
        devs.append(np.max(np.abs(series.values - ref)))
        assert drift < 1e-12
    assert devs[0] / devs[1] > 12


def test_cn4_trajectory_and_stride(small):
    dm, H, sd = small
    one = make_state("discrete", dm)
    traj = propagate_cn4(H, one, 0.01, 200, record_every=50)
    np.testing.assert_allclose(traj.times, [0, 0.5, 1.0, 1.5, 2.0])
    ref = propagate_exact(sd, one, traj.times)
    assert np.max(np.abs(traj.states - ref.states)) < 1e-5
    assert traj.step_drift < 1e-12
    with pytest.raises(ParameterError):
        propagate_cn4(H, one, -0.1, 10)
    with pytest.raises(ParameterError):
        propagate_cn4(H, one, 0.1, 2.5)
    with pytest.raises(GridMismatchError):
        propagate_cn4(H, StateVector(np.ones(3)), 0.1, 1)


def test_select_dt(small):
    dm, H, sd = small
    one = make_state("discrete", dm)
    sel = select_dt(H, one, one, 5.0, dt0=0.08, tol=1e-6)
    assert sel.dt <= 0.04
    assert sel.deviations[-1][1] < 1e-6
    assert all(d > 1e-6 for _, d in sel.deviations[:-1])
