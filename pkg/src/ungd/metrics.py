"""Cross-correlation based prediction metrics.

Lag convention: C(tau) = E[x(t - tau) y(t)] / (sigma_x sigma_y). If the
output leads the input, y(t) = x(t + d) with d > 0, the correlation peaks
at tau = -d and the prediction horizon is d.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import optimize

from ungd.spectral import frequency_response

QUAD_POINTS = 2**14
IMAG_TOL = 1e-8


@dataclass(frozen=True)
class CcfResult:
    """Correlation values over a lag grid.

    ``extremum_lag`` is where |C| is largest. ``horizon`` is the prediction
    horizon, or None when the largest |C| does not sit at a negative lag
    with positive correlation.
    """

    lags: np.ndarray
    values: np.ndarray
    extremum_lag: float = field(init=False)
    horizon: float | None = field(init=False)

    def __post_init__(self):
        lags = np.asarray(self.lags)
        values = np.asarray(self.values, dtype=float)
        if lags.shape != values.shape or lags.ndim != 1 or lags.size == 0:
            raise ValueError("lags and values must be non-empty 1-D arrays of equal length")
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "values", values)
        j = int(np.argmax(np.abs(values)))
        object.__setattr__(self, "extremum_lag", lags[j].item())
        object.__setattr__(self, "horizon", _horizon(lags, values))

    @property
    def argmax(self):
        """Lag of the largest (signed) correlation."""
        return self.lags[int(np.argmax(self.values))].item()

    @property
    def peak(self):
        return float(self.values.max())

    @property
    def extremum_value(self):
        return float(self.values[int(np.argmax(np.abs(self.values)))])

    def at(self, lag):
        j = np.flatnonzero(self.lags == lag)
        if j.size == 0:
            raise KeyError(lag)
        return float(self.values[j[0]])


def _horizon(lags, values):
    j = int(np.argmax(np.abs(values)))
    if lags[j] < 0 and values[j] > 0:
        return -lags[j].item()
    return None


def prediction_horizon(ccf):
    """Prediction horizon of a correlation result, or None if undefined.

    Undefined is a legitimate outcome: the filter is not predicting when
    the largest correlation magnitude is at a non-negative lag or is an
    anti-correlation.
    """
    lags = np.asarray(ccf.lags)
    if lags.size and not np.allclose(np.sort(lags), np.sort(-lags)):
        raise ValueError("lag grid must be symmetric about zero")
    return _horizon(lags, np.asarray(ccf.values))


def estimate_ccf(x, y, max_lag):
    """Empirical normalized cross-correlation via zero-padded FFTs.

    Means are removed, the sum is divided by N (biased estimator) and by
    the full-sample standard deviations, so |C| <= 1.

    Parameters
    ----------
    x, y : array_like
        Input and output signals of equal length N >= 4 * max_lag.
    max_lag : int
        Lags -max_lag..max_lag are returned.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"signals must be 1-D with equal length, got {x.shape} and {y.shape}")
    max_lag = int(max_lag)
    n = x.size
    if max_lag < 0 or n < max(4 * max_lag, 2):
        raise ValueError(f"need at least 4*max_lag samples; got N={n}, max_lag={max_lag}")
    x = x - x.mean()
    y = y - y.mean()
    sx, sy = x.std(), y.std()
    if sx == 0 or sy == 0:
        raise ValueError("cannot correlate a constant signal")

    nfft = 1 << (2 * n - 1).bit_length()
    # r[k] = sum_t x(t) y(t + k), which is C(k) up to normalization
    r = np.fft.irfft(np.conj(np.fft.rfft(x, nfft)) * np.fft.rfft(y, nfft), nfft)
    lags = np.arange(-max_lag, max_lag + 1)
    values = r[lags % nfft] / (n * sx * sy)
    return CcfResult(lags, np.clip(values, -1.0, 1.0))


@dataclass(frozen=True)
class PsdSpec:
    """Normalized input spectral density over angular frequency [-pi, pi].

    Build with :meth:`uniform` for a flat band or :meth:`tabulated` from
    one-sided samples over normalized frequency [0, 1/2]. The density is
    symmetric and integrates to 1.
    """

    kind: str
    f0: float | None = None
    table_f: np.ndarray | None = None
    table_density: np.ndarray | None = None

    @classmethod
    def uniform(cls, f0):
        f0 = float(f0)
        if not 0.0 < f0 <= 0.5:
            raise ValueError(f"band edge must lie in (0, 1/2], got {f0}")
        return cls("uniform-band", f0=f0)

    @classmethod
    def tabulated(cls, freqs, density):
        f = np.asarray(freqs, dtype=float)
        d = np.asarray(density, dtype=float)
        if f.shape != d.shape or f.ndim != 1 or f.size < 2:
            raise ValueError("frequency and density tables must be 1-D of equal length >= 2")
        if np.any(np.diff(f) <= 0) or f[0] < 0 or f[-1] > 0.5:
            raise ValueError("table frequencies must increase within [0, 1/2]")
        if np.any(d < 0) or not np.all(np.isfinite(d)):
            raise ValueError("density must be finite and nonnegative")
        # symmetric density over [-pi, pi]: total mass = 2 * one-sided mass
        mass = 2.0 * np.trapezoid(d, 2 * np.pi * f)
        if mass <= 0:
            raise ValueError("density has zero mass")
        return cls("tabulated", table_f=f, table_density=d / mass)

    def grid(self, n=QUAD_POINTS):
        """Symmetric angular grid over the support, with density values."""
        if self.kind == "uniform-band":
            w0 = 2 * np.pi * self.f0
            w = np.linspace(-w0, w0, n + 1)
            return w, np.full(w.shape, 1.0 / (2 * w0))
        w = np.linspace(-np.pi, np.pi, n + 1)
        dens = np.interp(np.abs(w) / (2 * np.pi), self.table_f, self.table_density,
                         left=0.0, right=0.0)
        return w, dens


def _response_on(spec, w):
    if spec is None:
        return np.ones_like(w, dtype=complex)
    h = frequency_response(spec, np.abs(w))
    return np.where(w < 0, np.conj(h), h)


def _trapezoid_weights(w):
    dw = np.diff(w)
    tw = np.zeros_like(w)
    tw[:-1] += dw / 2
    tw[1:] += dw / 2
    return tw


def _quadrature(spec, psd):
    w, dens = psd.grid()
    mass = np.trapezoid(dens, w)
    if not mass > 0:
        raise ValueError("degenerate spectral density: zero mass")
    dens = dens / mass
    h = _response_on(spec, w)
    power = np.trapezoid(dens * np.abs(h) ** 2, w)
    return w, dens, h, power


def theoretical_ccf(spec, psd, tau):
    """Correlation implied by the frequency response and input spectrum.

    C(tau) = int f(w) H(w) exp(i w tau) dw / sqrt(int f(w) |H(w)|^2 dw)

    evaluated by the trapezoid rule on 2**14 intervals over the density
    support. ``spec=None`` stands for the identity filter. ``tau`` may be
    any real scalar or array.
    """
    w, dens, h, power = _quadrature(spec, psd)
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    weighted = dens * h * _trapezoid_weights(w)
    num = np.concatenate([np.exp(1j * np.multiply.outer(taus[i:i + 256], w)) @ weighted
                          for i in range(0, taus.size, 256)]) if taus.size else np.zeros(0)
    resid = np.max(np.abs(num.imag)) if num.size else 0.0
    assert resid < IMAG_TOL, f"imaginary residue {resid:.3g} in conjugate-symmetric quadrature"
    values = num.real / math.sqrt(power)
    return values.item() if np.ndim(tau) == 0 else values


def theoretical_ccf_result(spec, psd, max_lag):
    """Integer-lag theoretical correlation as a :class:`CcfResult`."""
    lags = np.arange(-int(max_lag), int(max_lag) + 1)
    return CcfResult(lags, theoretical_ccf(spec, psd, lags))


def continuous_argmax(spec, psd, max_lag=60, step=0.01):
    """Real-valued lag maximizing the theoretical correlation.

    The best integer lag in [-max_lag, max_lag] is refined on a 0.01-sample
    grid within one sample either side, then by golden-section search
    within one grid step. Returns ``(lag, value)``.
    """
    coarse = np.arange(-int(max_lag), int(max_lag) + 1, dtype=float)
    t0 = coarse[int(np.argmax(theoretical_ccf(spec, psd, coarse)))]
    grid = np.arange(t0 - 1.0, t0 + 1.0 + step / 2, step)
    vals = theoretical_ccf(spec, psd, grid)
    j = int(np.argmax(vals))
    a, b = grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)]
    t_best = float(grid[j])
    if a < t_best < b:
        res = optimize.minimize_scalar(lambda t: -theoretical_ccf(spec, psd, t),
                                       bracket=(a, t_best, b), method="golden",
                                       options={"xtol": 1e-8})
        if a <= res.x <= b:
            t_best = float(res.x)
    return t_best, float(theoretical_ccf(spec, psd, t_best))


def output_variance_ratio(spec, psd):
    """sigma_y^2 / sigma_x^2 = int f(w) |H(w)|^2 dw."""
    return float(_quadrature(spec, psd)[3])


@dataclass(frozen=True)
class StationaryPhaseTable:
    """Real parts of the normalized correlation integrand, one row per lag."""

    lags: np.ndarray
    omega: np.ndarray
    integrand: np.ndarray

    @property
    def integrals(self):
        return np.trapezoid(self.integrand, self.omega, axis=1)

    @property
    def best_lag(self):
        return self.lags[int(np.argmax(self.integrals))].item()


def stationary_phase_table(spec, psd, lags):
    """Integrand Re[f(w) H(w) exp(i w tau)] / sigma_y across w for each lag.

    Each row integrates to the theoretical correlation at that lag; the
    row with the largest integral marks the correlation peak.
    """
    lags = np.atleast_1d(np.asarray(lags, dtype=float))
    if lags.size == 0:
        raise ValueError("need at least one lag")
    w, dens, h, power = _quadrature(spec, psd)
    rows = np.real(dens * h * np.exp(1j * np.multiply.outer(lags, w))) / math.sqrt(power)
    if np.all(lags == np.round(lags)):
        lags = lags.astype(int)
    return StationaryPhaseTable(lags, w, rows)
