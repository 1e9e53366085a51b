"""Closed-form frequency-domain analysis of the UNGD predictor.

All angular frequencies ``omega`` are in radians per sample on [0, pi];
normalized frequencies ``f`` are cycles per sample on [0, 1/2].

Writing the response denominator as ``R - iI`` with

    R(w) = 1 + sum_k c_k cos((m - k) w)      (the stability spectrum S)
    I(w) =     sum_k c_k sin((m - k) w)

gives H = b (R + iI) / (R^2 + I^2), so the phase is arctan(I/R). Because
R > 0 for every order the phase never leaves (-pi/2, pi/2) and needs no
unwrapping.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import optimize

from ungd.core import FilterSpec, make_coefficients, _check_order

#: gain level that defines the cutoff frequency of an order
CUTOFF_GAIN = 3.0
CUTOFF_GRID_STEP = 1e-4
CUTOFF_GAIN_TOL = 1e-8


def _as_spec(spec_or_order):
    if isinstance(spec_or_order, FilterSpec):
        return spec_or_order
    return make_coefficients(spec_or_order)


def _check_omega(omega, open_interval=False):
    w = np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValueError("angular frequency must be finite")
    if np.any(w < 0) or np.any(w > np.pi):
        raise ValueError(f"angular frequency must lie in [0, pi], got {omega!r}")
    return w


def _scalar_or_array(value, like):
    return value.item() if np.ndim(like) == 0 else value


def _terms(spec, w):
    """Return c_k and the delay products (m - k) * w with shape (..., m)."""
    d = spec.delays.astype(float)
    return spec.c_array, np.multiply.outer(w, d), d


def _r_and_i(spec, w):
    c, arg, _ = _terms(spec, w)
    return 1.0 + np.cos(arg) @ c, np.sin(arg) @ c


def frequency_response(spec, omega):
    """Complex response b / (1 + sum_k c_k exp(-i (m - k) omega)).

    Accepts a scalar or an array of angular frequencies in [0, pi].
    """
    w = _check_omega(omega)
    c, arg, _ = _terms(spec, w)
    denom = 1.0 + np.exp(-1j * arg) @ c
    return _scalar_or_array(spec.b / denom, omega)


def stability_spectrum_direct(spec, omega):
    """Cosine sum S(omega) = 1 + sum_k c_k cos((m - k) omega)."""
    w = _check_omega(omega)
    r, _ = _r_and_i(spec, w)
    return _scalar_or_array(r, omega)


def stability_endpoints(m):
    """Exact S(0) and S(pi) for the full coefficient set of order ``m``."""
    m = _check_order(m)
    at_zero = Fraction(m + 3, 2)
    at_pi = Fraction(1, 2) if m % 2 == 0 else Fraction(m - 1, 2 * m)
    return at_zero, at_pi


def stability_spectrum_closed(m, omega):
    """Closed-form stability spectrum for the full coefficient set.

    S(w) = 1 - (cos((m + 1) w) - (m + 1) cos(w) + m) / (2 m (1 - cos(w)))

    The expression is 0/0 at w = 0 and singular in form at w = pi; those
    two points are replaced by their exact values.
    """
    m = _check_order(m)
    w = _check_omega(omega)
    at_zero, at_pi = stability_endpoints(m)
    with np.errstate(divide="ignore", invalid="ignore"):
        # 1 - cos(w) = 2 sin^2(w/2) keeps precision near w = 0
        denom = 4.0 * m * np.sin(w / 2.0) ** 2
        s = 1.0 - (np.cos(w * (m + 1)) - (m + 1) * np.cos(w) + m) / denom
    s = np.where(w == 0.0, float(at_zero), s)
    s = np.where(w == np.pi, float(at_pi), s)
    return _scalar_or_array(np.asarray(s, dtype=float), omega)


def phase(spec, omega):
    """Phase arctan(I/R) of the response, in (-pi/2, pi/2)."""
    w = _check_omega(omega)
    r, i = _r_and_i(spec, w)
    return _scalar_or_array(np.arctan(i / r), omega)


def zero_freq_group_delay(m):
    """Exact zero-frequency group delay -(m^2 + 3m + 2) / (3 (m + 3))."""
    m = _check_order(m)
    return float(Fraction(-(m * m + 3 * m + 2), 3 * (m + 3)))


def _zero_freq_group_delay_general(spec):
    # -sum c_k (m - k) / (1 + sum c_k); valid for truncated sets too
    c = spec.c_array
    return -float(np.dot(c, spec.delays)) / (1.0 + c.sum())


def group_delay(spec, omega):
    """Analytic group delay -d/dw arctan(I/R).

    Uses -(R I' - I R') / (R^2 + I^2) with
    R' = -sum c_k d_k sin(d_k w) and I' = sum c_k d_k cos(d_k w).
    """
    w = _check_omega(omega)
    c, arg, d = _terms(spec, w)
    cos_a, sin_a = np.cos(arg), np.sin(arg)
    r = 1.0 + cos_a @ c
    i = sin_a @ c
    r_prime = -(sin_a @ (c * d))
    i_prime = cos_a @ (c * d)
    tau = -(r * i_prime - i * r_prime) / (r * r + i * i)
    if spec.truncated:
        tau0 = _zero_freq_group_delay_general(spec)
    else:
        tau0 = zero_freq_group_delay(spec.order)
    tau = np.where(w == 0.0, tau0, tau)
    return _scalar_or_array(np.asarray(tau, dtype=float), omega)


def phase_delay(spec, omega):
    """Phase delay -arctan(I/R) / omega; at omega = 0 the limit tau_g(0)."""
    w = _check_omega(omega)
    r, i = _r_and_i(spec, w)
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = -np.arctan(i / r) / w
    if np.any(w == 0.0):
        tau = np.where(w == 0.0, group_delay(spec, 0.0), tau)
    return _scalar_or_array(np.asarray(tau, dtype=float), omega)


def _gain_at_f(spec, f):
    return np.abs(frequency_response(spec, 2.0 * np.pi * np.asarray(f)))


@lru_cache(maxsize=None)
def cutoff_frequency(m):
    """First normalized frequency at which the gain reaches 3.

    The gain grid is scanned in steps of 1e-4 until it first reaches 3,
    then the bracket is refined by bisection to |G - 3| < 1e-8.
    """
    m = _check_order(m)
    spec = make_coefficients(m)
    chunk = 2048
    start = 0.0
    while start < 0.5:
        f = start + CUTOFF_GRID_STEP * np.arange(chunk + 1)
        f = f[f <= 0.5]
        g = _gain_at_f(spec, f)
        hit = np.flatnonzero(g >= CUTOFF_GAIN)
        if hit.size:
            j = hit[0]
            assert j > 0 or start > 0, "gain at DC must be 1"
            lo, hi = f[j - 1], f[j]
            if g[j] == CUTOFF_GAIN:
                return float(hi)
            root = optimize.bisect(
                lambda ff: float(_gain_at_f(spec, ff)) - CUTOFF_GAIN, lo, hi,
                xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200,
            )
            assert abs(float(_gain_at_f(spec, root)) - CUTOFF_GAIN) < CUTOFF_GAIN_TOL
            return float(root)
        start = f[-1]
        if f.size <= 1:
            break
    raise AssertionError(f"gain never reaches {CUTOFF_GAIN} for order {m}")


def cutoff_fit(m):
    """Empirical rational fit of the cutoff curve, -0.42/m^2 + 0.81/m + 0.005."""
    return -0.42 / m**2 + 0.81 / m + 0.005


def order_from_cutoff(f0, max_order=10000):
    """Largest order whose cutoff frequency is still at least ``f0``.

    Keeping the whole signal band inside the negative-group-delay band of
    the filter errs toward prediction accuracy. Frequencies at or above
    the order-2 cutoff return 2 with a warning.
    """
    f0 = float(f0)
    if not math.isfinite(f0) or f0 <= 0.0:
        raise ValueError(f"cutoff frequency must be positive, got {f0}")
    if f0 >= 0.5:
        raise ValueError(f"cutoff frequency must be below 1/2, got {f0}")
    prev = cutoff_frequency(2)
    if f0 >= prev:
        warnings.warn(
            f"cutoff {f0} is at or above the order-2 cutoff {prev:.4f}; using m=2",
            stacklevel=2,
        )
        return 2
    m = 2
    while m < max_order:
        nxt = cutoff_frequency(m + 1)
        assert nxt < prev, "cutoff frequency must decrease with order"
        if nxt < f0:
            return m
        prev = nxt
        m += 1
    raise ValueError(f"cutoff {f0} needs an order above {max_order}")


def crossover(spec):
    """First sign change of the group delay from negative to positive.

    Returns ``(f, gain)`` at the crossing, or ``None`` if the group delay
    stays negative up to the Nyquist frequency.
    """
    f = np.linspace(0.0, 0.5, 20001)
    tau = group_delay(spec, 2 * np.pi * f)
    pos = np.flatnonzero(tau > 0)
    if pos.size == 0:
        return None
    j = pos[0]
    root = optimize.brentq(lambda ff: group_delay(spec, 2 * np.pi * ff), f[j - 1], f[j],
                           xtol=1e-13)
    return float(root), float(_gain_at_f(spec, root))


@dataclass(frozen=True)
class SpectrumTable:
    """Per-frequency response quantities on a uniform grid over [0, 1/2]."""

    order: int
    freqs: np.ndarray
    response: np.ndarray
    gain: np.ndarray
    phase: np.ndarray
    phase_delay: np.ndarray
    group_delay: np.ndarray
    stability: np.ndarray

    COLUMNS = ("freq", "gain", "phase", "tau_p", "tau_g", "S")

    def rows(self):
        return np.column_stack([self.freqs, self.gain, self.phase, self.phase_delay,
                                self.group_delay, self.stability])


def spectrum_table(spec, n_grid=4096):
    """Evaluate every response quantity on ``n_grid`` points of [0, 1/2]."""
    if int(n_grid) != n_grid or n_grid < 2:
        raise ValueError(f"n_grid must be an integer >= 2, got {n_grid!r}")
    spec = _as_spec(spec)
    f = np.linspace(0.0, 0.5, int(n_grid))
    w = 2.0 * np.pi * f
    w[-1] = np.pi
    h = frequency_response(spec, w)
    s = stability_spectrum_direct(spec, w)
    return SpectrumTable(
        order=spec.order,
        freqs=f,
        response=h,
        gain=np.abs(h),
        phase=phase(spec, w),
        phase_delay=phase_delay(spec, w),
        group_delay=group_delay(spec, w),
        stability=s,
    )
