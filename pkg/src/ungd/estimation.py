"""Spectral estimation from data: Welch PSD, cross-PSD, empirical
frequency response and the linear phase fit used for group delay.

Cross spectra follow P_xy(f) = E[conj(X(f)) Y(f)], so the estimate
H = P_xy / P_xx has the same orientation as the theoretical response.
"""

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

DEFAULT_SEG_LEN = 256
DEFAULT_OVERLAP = 0.5
UNRELIABLE_FRACTION = 1e-6


@dataclass(frozen=True)
class PsdEstimate:
    """One-sided density over [0, 1/2]; ``density.sum() * df`` is the variance."""

    freqs: np.ndarray
    density: np.ndarray
    seg_len: int
    window: str
    overlap: float

    @property
    def df(self):
        return float(self.freqs[1] - self.freqs[0])

    def total_power(self):
        return float(np.sum(self.density) * self.df)


@dataclass(frozen=True)
class ResponseEstimate:
    """Empirical frequency response with a per-bin reliability mask."""

    freqs: np.ndarray
    response: np.ndarray
    reliable: np.ndarray

    @property
    def gain(self):
        return np.abs(self.response)

    @property
    def phase(self):
        return np.angle(self.response)


def _welch_args(x, seg_len, overlap):
    if int(seg_len) != seg_len or seg_len < 2 or (int(seg_len) & (int(seg_len) - 1)):
        raise ValueError(f"segment length must be a power of two, got {seg_len!r}")
    if not 0.0 <= overlap < 1.0:
        raise ValueError(f"overlap must lie in [0, 1), got {overlap}")
    if x.size < seg_len:
        raise ValueError(f"signal of length {x.size} is shorter than one segment ({seg_len})")
    seg_len = int(seg_len)
    return dict(fs=1.0, window="hann", nperseg=seg_len,
                noverlap=int(round(overlap * seg_len)), detrend="constant",
                scaling="density", return_onesided=True)


def welch_psd(x, seg_len=DEFAULT_SEG_LEN, overlap=DEFAULT_OVERLAP):
    """Averaged Hann-windowed periodograms of mean-removed segments."""
    x = np.asarray(x, dtype=float)
    kw = _welch_args(x, seg_len, overlap)
    f, p = sps.welch(x, **kw)
    return PsdEstimate(f, p, int(seg_len), "hann", float(overlap))


def cross_psd(x, y, seg_len=DEFAULT_SEG_LEN, overlap=DEFAULT_OVERLAP):
    """Welch cross spectrum E[conj(X) Y] (complex)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("signals must have equal length")
    kw = _welch_args(x, seg_len, overlap)
    f, p = sps.csd(x, y, **kw)
    return f, p


def estimate_frequency_response(x, y, seg_len=DEFAULT_SEG_LEN, overlap=DEFAULT_OVERLAP):
    """H(f) = P_xy(f) / P_xx(f).

    Bins where P_xx falls below 1e-6 of its maximum are flagged unreliable
    and set to NaN rather than raising.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("signals must have equal length")
    pxx = welch_psd(x, seg_len, overlap).density
    if not np.any(pxx > 0):
        raise ValueError("input has no power")
    f, pxy = cross_psd(x, y, seg_len, overlap)
    reliable = pxx > UNRELIABLE_FRACTION * pxx.max()
    h = np.full(f.shape, np.nan + 1j * np.nan)
    h[reliable] = pxy[reliable] / pxx[reliable]
    return ResponseEstimate(f, h, reliable)


def phase_fit_group_delay(estimate, f_max, f_min=0.0):
    """Group delay from a least-squares line through the unwrapped phase.

    Fits arg H against angular frequency over f in (f_min, f_max] with a
    free intercept and returns minus the slope. Unreliable bins are
    skipped; unwrapping runs over the fitted bins in frequency order.
    """
    f = np.asarray(estimate.freqs)
    if not f[0] <= f_max <= f[-1]:
        raise ValueError(f"f_max {f_max} outside the table range [{f[0]}, {f[-1]}]")
    usable = estimate.reliable & np.isfinite(estimate.response)
    sel = usable & (f > f_min) & (f <= f_max)
    if np.count_nonzero(sel) < 3:
        raise ValueError(f"need at least 3 usable bins in ({f_min}, {f_max}]")
    ph = np.unwrap(np.angle(estimate.response[sel]))
    slope, _ = np.polyfit(2 * np.pi * f[sel], ph, 1)
    return -float(slope)
