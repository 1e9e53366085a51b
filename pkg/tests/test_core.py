from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ungd import core, spectral
from ungd.core import FilterState, InvalidOrderError, Predictor


def test_order_three_coefficients_exact():
    spec = core.make_coefficients(3)
    assert spec.b == 3.0
    assert spec.c == (1 / 3, 2 / 3, 1.0)
    assert list(spec.delays) == [3, 2, 1]


@pytest.mark.parametrize("m", [2, 3, 7, 18, 64, 200])
def test_coefficient_identity(m):
    spec = core.make_coefficients(m)
    assert abs(spec.b - 1 - math.fsum(spec.c)) < 1e-12
    # same identity in exact arithmetic
    exact = Fraction(3 + m, 2) - 1 - sum(Fraction(k + 1, m) for k in range(m))
    assert exact == 0


@pytest.mark.parametrize("m", [1, 0, -4, 2.5, True])
def test_invalid_order(m):
    with pytest.raises(InvalidOrderError):
        core.make_coefficients(m)


def test_truncation_zeroes_tail():
    spec = core.make_coefficients(8, k_max=3)
    assert spec.truncated
    assert spec.c[:4] == tuple((k + 1) / 8 for k in range(4))
    assert all(c == 0.0 for c in spec.c[4:])
    assert spec.b == 5.5
    assert not core.make_coefficients(8, k_max=7).truncated
    with pytest.raises(ValueError):
        core.make_coefficients(8, k_max=8)


def test_impulse_response_order_three():
    x = np.zeros(6)
    x[0] = 1.0
    y = core.apply(core.make_coefficients(3), x)
    np.testing.assert_allclose(y, [3, -3, 1, 0, 1 / 3, -2 / 3], atol=1e-15)


def test_step_matches_apply(spec18, rng):
    x = rng.standard_normal(300)
    state = FilterState.zeros(spec18)
    y_step = np.array([core.step(spec18, state, v) for v in x])
    np.testing.assert_allclose(core.apply(spec18, x), y_step, rtol=1e-12, atol=1e-12)
    assert state.steps_run == 300


def test_streaming_chunks_match_batch(spec18, rng):
    x = rng.standard_normal(500)
    p = Predictor(18)
    parts = [p.process(chunk) for chunk in np.split(x, [7, 100, 101, 333])]
    np.testing.assert_allclose(np.concatenate(parts), core.apply(spec18, x), atol=1e-12)
    assert p.state.steps_run == 500
    p.reset()
    assert list(p.state.history) == [0.0] * 18


def test_final_state_chains_batches(rng):
    spec = core.make_coefficients(5)
    x = rng.standard_normal(80)
    s = core.final_state(spec, x[:30])
    y2 = core.apply(spec, x[30:], s)
    np.testing.assert_allclose(y2, core.apply(spec, x)[30:], atol=1e-12)


def test_initial_state_not_mutated(spec18, rng):
    s = core.final_state(spec18, rng.standard_normal(50))
    before = list(s.history)
    core.apply(spec18, rng.standard_normal(20), s)
    assert list(s.history) == before


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**32))
def test_linearity(m, a, b, seed):
    r = np.random.default_rng(seed)
    x1, x2 = r.standard_normal(64), r.standard_normal(64)
    spec = core.make_coefficients(m)
    lhs = core.apply(spec, a * x1 + b * x2)
    rhs = a * core.apply(spec, x1) + b * core.apply(spec, x2)
    np.testing.assert_allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(rhs).max()))


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 25), st.integers(1, 20))
def test_shift_invariance(m, shift):
    x = np.random.default_rng(m * 31 + shift).standard_normal(60)
    spec = core.make_coefficients(m)
    shifted = core.apply(spec, np.concatenate([np.zeros(shift), x]))
    np.testing.assert_allclose(shifted[:shift], 0.0)
    np.testing.assert_allclose(shifted[shift:], core.apply(spec, x), atol=1e-12)


@pytest.mark.parametrize("m", [2, 3, 5, 8, 18, 40, 60])
def test_impulse_response_decays(m):
    x = np.zeros(4000)
    x[0] = 1.0
    y = core.apply(core.make_coefficients(m), x)
    assert np.all(np.isfinite(y))
    assert np.abs(y[-200:]).max() < 1e-6 * np.abs(y).max()


@pytest.mark.parametrize("m,f", [(18, 0.02), (18, 0.04), (8, 0.08), (3, 0.2)])
def test_steady_state_sinusoid(m, f):
    spec = core.make_coefficients(m)
    t = np.arange(6000)
    y = core.apply(spec, np.sin(2 * np.pi * f * t))
    h = spectral.frequency_response(spec, 2 * np.pi * f)
    expected = abs(h) * np.sin(2 * np.pi * f * t + np.angle(h))
    np.testing.assert_allclose(y[-500:], expected[-500:], atol=1e-6 * abs(h))


def test_cascade_composes(rng):
    spec = core.make_coefficients(6)
    x = rng.standard_normal(200)
    np.testing.assert_allclose(core.cascade(spec, x, 2), core.apply(spec, core.apply(spec, x)))
    np.testing.assert_allclose(core.cascade(spec, x, 1), core.apply(spec, x))
    with pytest.raises(ValueError):
        core.cascade(spec, x, 0)


def test_cascade_adds_group_delay():
    spec = core.make_coefficients(10)
    t = np.arange(20000)
    f = 0.002
    y = core.cascade(spec, np.sin(2 * np.pi * f * t), 2)
    # the output phase lead equals twice the single-stage lead
    h = spectral.frequency_response(spec, 2 * np.pi * f)
    lead = np.angle(np.vdot(np.exp(2j * np.pi * f * t[-5000:]), y[-5000:] + 0j))
    single = np.angle(h)
    assert abs(lead - (2 * single - np.pi / 2)) < 1e-3


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_rejects_non_finite(spec18, bad):
    x = np.ones(10)
    x[4] = bad
    with pytest.raises(ValueError):
        core.apply(spec18, x)
    with pytest.raises(ValueError):
        core.step(spec18, FilterState.zeros(spec18), bad)


def test_rejects_empty_and_mismatched(spec18):
    with pytest.raises(ValueError):
        core.apply(spec18, [])
    with pytest.raises(ValueError):
        core.apply(spec18, np.ones(5), FilterState(3))
    with pytest.raises(ValueError):
        FilterState(3, [1.0, 2.0])


def test_docstring_examples():
    import doctest
    assert doctest.testmod(core).failed == 0
