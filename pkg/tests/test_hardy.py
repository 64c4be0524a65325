import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

import oracles
from friedrichs import (
    GridMismatchError,
    GridTooNarrowWarning,
    NumericalError,
    ResolutionWarning,
    SampledFunction,
    decompose,
    eval_complex,
    paley_wiener_residual,
    project,
    staggered_transform,
    symmetric_grid,
)


@pytest.fixture(scope="module")
def wide_gaussian():
    # dw = 0.1, period 6553.6
    return SampledFunction.from_callable(lambda w: np.exp(-w * w), 3276.8, 2**16, "g")


def smooth(omega_max=80.0, n=2**12):
    @st.composite
    def build(draw):
        c = draw(st.complex_numbers(min_magnitude=0.1, max_magnitude=5.0))
        mu = draw(st.floats(-10, 10))
        s = draw(st.floats(0.5, 3.0))
        k = draw(st.floats(-4, 4))
        grid = symmetric_grid(omega_max, n)
        return SampledFunction(grid, c * np.exp(-((grid - mu) ** 2) / (2 * s * s) + 1j * k * grid))

    return build()


def quiet(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridTooNarrowWarning)
        return fn(*args, **kwargs)


def test_grid():
    g = symmetric_grid(10.0, 8)
    np.testing.assert_allclose(g, [-10, -7.5, -5, -2.5, 0, 2.5, 5, 7.5])
    with pytest.raises(ValueError):
        symmetric_grid(-1.0, 8)


def test_gaussian_parts_match_faddeeva(wide_gaussian):
    plus = project(wide_gaussian, "+")
    minus = project(wide_gaussian, "-")
    m = np.abs(wide_gaussian.grid) <= 5
    ref = oracles.gaussian_plus(wide_gaussian.grid[m])
    assert np.max(np.abs(plus.values[m] - ref)) < 1e-7
    assert np.max(np.abs(minus.values[m] - (np.exp(-wide_gaussian.grid[m] ** 2) - ref))) < 1e-7
    assert plus.label == "[g]+"


@settings(max_examples=30, deadline=None)
@given(smooth())
def test_projector_algebra(f):
    plus, minus = project(f, "+"), project(f, "-")
    scale = np.linalg.norm(f.values)
    assert np.linalg.norm(plus.values + minus.values - f.values) < 1e-12 * scale
    pp = quiet(project, plus, "+")
    pm = quiet(project, plus, "-")
    assert np.linalg.norm(pp.values - plus.values) < 1e-12 * scale
    assert np.linalg.norm(pm.values) < 1e-12 * scale
    # conjugation swaps the classes
    conj = project(f.with_values(np.conj(f.values)), "-")
    assert np.linalg.norm(conj.values - np.conj(plus.values)) < 1e-11 * scale


@settings(max_examples=20, deadline=None)
@given(smooth())
def test_paley_wiener(f):
    plus, minus = project(f, "+"), project(f, "-")
    assert paley_wiener_residual(plus, "+") < 1e-12
    assert paley_wiener_residual(minus, "-") < 1e-12


def test_paley_wiener_unprojected_is_order_one(wide_gaussian):
    # a real even function has equal weight at +t and -t
    assert paley_wiener_residual(wide_gaussian, "+") == pytest.approx(1.0, rel=1e-9)


def test_staggered_transform_of_gaussian():
    f = SampledFunction.from_callable(lambda w: np.exp(-w * w / 2), 40.0, 2**10)
    t, g = staggered_transform(f)
    assert not np.any(t == 0)
    np.testing.assert_allclose(g, math.sqrt(2 * math.pi) * np.exp(-t * t / 2), atol=1e-12)


def test_decompose(wide_gaussian):
    pair = decompose(wide_gaussian)
    assert pair.recon_residual < 1e-14
    np.testing.assert_allclose(pair.plus.values, np.conj(pair.minus.values), atol=1e-15)


def test_zero_function():
    f = SampledFunction(symmetric_grid(10.0, 64), np.zeros(64))
    pair = decompose(f)
    assert pair.recon_residual == 0.0
    assert not pair.plus.values.any() and not pair.minus.values.any()
    assert paley_wiener_residual(f, "+") == 0.0


def test_one_over_w_needs_tail_correction():
    f = SampledFunction.from_callable(lambda w: 1.0 / (w - 1j), 2000.0, 2**16)
    with pytest.warns(GridTooNarrowWarning):
        rough = project(f, "+")
    fixed = project(f, "+", tail_correction=True)
    # 1/(w - i) is analytic below the axis: no H+ part
    assert np.max(np.abs(fixed.values)) < 1e-10
    assert np.max(np.abs(rough.values)) > 1e-4
    assert eval_complex(f, "-", -1j, tail_correction=True) == pytest.approx(0.5j, abs=1e-10)


@pytest.mark.parametrize("y", [1 - 0.5j, -3 - 2j, 0.2 - 1j])
def test_eval_complex_lower(wide_gaussian, y):
    ref = integrate.quad(lambda w: np.exp(-w * w) / (y - w), -12, 12, complex_func=True, epsabs=1e-14)[0]
    got = eval_complex(wide_gaussian, "-", y)
    assert got == pytest.approx(ref / (2j * math.pi), abs=1e-7)


def test_eval_complex_upper_and_wrong_side(wide_gaussian):
    y = 0.5 + 1j
    assert eval_complex(wide_gaussian, "+", y) == pytest.approx(oracles.gaussian_plus(y), abs=1e-7)
    assert eval_complex(wide_gaussian, "+", y.conjugate()) == 0
    assert eval_complex(wide_gaussian, "-", y) == 0


def test_eval_complex_approaches_boundary(wide_gaussian):
    minus = project(wide_gaussian, "-")
    i = np.argmin(np.abs(wide_gaussian.grid - 0.7))
    w0 = wide_gaussian.grid[i]
    slope = np.max(np.abs(np.gradient(minus.values, wide_gaussian.spacing)))
    for eps in (1.0, 0.5):
        got = eval_complex(wide_gaussian, "-", complex(w0, -eps))
        assert abs(got - minus.values[i]) < 1.5 * eps * slope
    with pytest.warns(ResolutionWarning):
        eval_complex(wide_gaussian, "-", complex(w0, -0.1))


def test_validation():
    g = symmetric_grid(1.0, 8)
    with pytest.raises(GridMismatchError):
        SampledFunction(g, np.zeros(7))
    with pytest.raises(GridMismatchError):
        SampledFunction(g[::-1], np.zeros(8))
    with pytest.raises(GridMismatchError):
        SampledFunction(np.r_[g[:-1], 5.0], np.zeros(8))
    with pytest.raises(NumericalError):
        SampledFunction(g, np.r_[np.zeros(7), np.nan])
    f = SampledFunction(g, np.zeros(8))
    with pytest.raises(ValueError):
        project(f, "*")
    with pytest.raises(ValueError):
        f.values[0] = 1


def test_csv_round_trip(tmp_path, wide_gaussian):
    f = SampledFunction.from_callable(lambda w: np.exp(-w * w) * (1 + 2j), 5.0, 64)
    path = tmp_path / "f.csv"
    f.to_csv(path)
    assert path.read_text().splitlines()[0] == "omega,re,im"
    back = SampledFunction.from_csv(path)
    np.testing.assert_allclose(back.values, f.values, rtol=1e-14)
    assert back.same_grid(f) or np.allclose(back.grid, f.grid, rtol=1e-14)
    assert f.norm() == pytest.approx(math.sqrt(5) * (math.pi / 2) ** 0.25, rel=1e-6)
