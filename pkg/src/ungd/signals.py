"""Deterministic test-signal generation.

Random numbers come from a counter-based SplitMix64 stream followed by a
Box-Muller transform, so sequences do not depend on the NumPy version:

* word i (i = 0, 1, 2, ...) of the stream for ``seed`` is
  ``mix64(seed + (i + 1) * 0x9E3779B97F4A7C15 mod 2**64)`` where
  ``mix64(z)``: ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``;
  ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``; ``z ^ (z >> 31)``.
* Words 2j and 2j+1 give uniforms ``u1 = ((w >> 11) + 1) / 2**53`` in
  (0, 1] and ``u2 = (w >> 11) / 2**53`` in [0, 1).
* Normals ``sqrt(-2 ln u1) cos(2 pi u2)`` and ``sqrt(-2 ln u1) sin(2 pi u2)``
  fill positions 2j and 2j+1.

The integer stream is bit-exact everywhere; the normals match to the
last ulp wherever libm's log/cos/sin are correctly rounded.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import signal as sps

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def splitmix64(seed, n):
    """First ``n`` 64-bit words of the SplitMix64 stream for ``seed``."""
    seed = int(seed) & _MASK64
    i = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + i * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MUL1
        z = (z ^ (z >> np.uint64(27))) * _MUL2
        z = z ^ (z >> np.uint64(31))
    return z


def standard_normal(n, seed):
    """``n`` standard normal deviates (no mean removal)."""
    pairs = (n + 1) // 2
    words = splitmix64(seed, 2 * pairs)
    scale = 2.0**-53
    u1 = ((words[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * scale
    u2 = (words[1::2] >> np.uint64(11)).astype(np.float64) * scale
    radius = np.sqrt(-2.0 * np.log(u1))
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(2.0 * np.pi * u2)
    out[1::2] = radius * np.sin(2.0 * np.pi * u2)
    return out[:n]


def white_noise(n, seed):
    """Zero-mean white Gaussian noise of length ``n``.

    The sample mean is subtracted, so the result sums to zero up to
    round-off.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"length must be a positive integer, got {n!r}")
    x = standard_normal(int(n), seed)
    return x - x.mean()


def _check_freq(name, f):
    if not (0.0 < f < 0.5):
        raise ValueError(f"{name} must lie in (0, 1/2), got {f}")


def butterworth_sos(order, fc):
    """Second-order sections of a digital Butterworth lowpass.

    Analog prototype mapped by the bilinear transform with the cutoff
    pre-warped, so the gain at ``fc`` (cycles/sample) is exactly 1/sqrt(2).
    """
    if int(order) != order or order < 1:
        raise ValueError(f"Butterworth order must be a positive integer, got {order!r}")
    _check_freq("cutoff", fc)
    return sps.butter(int(order), 2.0 * fc, btype="low", output="sos")


def butterworth_lowpass(x, order, fc):
    """Causal (forward-only) Butterworth lowpass from zero initial state."""
    sos = butterworth_sos(order, fc)
    return sps.sosfilt(sos, np.asarray(x, dtype=float))


def bandpass_noise(n, seed, f_lo, f_hi):
    """White noise confined to [f_lo, f_hi] by an FFT brickwall mask.

    The result is mean-removed and scaled to unit variance.
    """
    _check_freq("f_lo", f_lo)
    _check_freq("f_hi", f_hi)
    if not f_lo < f_hi:
        raise ValueError(f"need f_lo < f_hi, got [{f_lo}, {f_hi}]")
    x = white_noise(n, seed)
    spectrum = np.fft.rfft(x)
    f = np.fft.rfftfreq(x.size)
    spectrum[(f < f_lo) | (f > f_hi)] = 0.0
    y = np.fft.irfft(spectrum, x.size)
    y -= y.mean()
    sd = y.std()
    if sd == 0:
        raise ValueError(f"band [{f_lo}, {f_hi}] holds no FFT bins for n={n}")
    return y / sd


def staircase(n, amplitude, period):
    """``amplitude * floor(t / period)`` for t = 0..n-1."""
    if int(period) != period or period < 1:
        raise ValueError(f"period must be a positive integer, got {period!r}")
    return amplitude * (np.arange(n) // int(period)).astype(float)


def add_jumps(x, amplitude, period):
    """Add upward steps of ``amplitude`` every ``period`` samples, then remove the mean."""
    x = np.asarray(x, dtype=float)
    y = x + staircase(x.size, amplitude, period)
    return y - y.mean()


def notch_coefficients(f_notch, bandwidth):
    """Second-order IIR notch with zeros on the unit circle at +-2 pi f_notch.

    The pole radius follows from the -3 dB ``bandwidth`` (cycles/sample).
    """
    _check_freq("notch frequency", f_notch)
    if not 0.0 < bandwidth < f_notch:
        raise ValueError(f"bandwidth must lie in (0, f_notch), got {bandwidth}")
    return sps.iirnotch(2.0 * f_notch, f_notch / bandwidth, fs=2.0)


def notch_filter(x, f_notch=1.0 / 6.0, bandwidth=0.01):
    """Zero-phase (forward-backward) notch; an off-line cleaning step."""
    b, a = notch_coefficients(f_notch, bandwidth)
    return sps.filtfilt(b, a, np.asarray(x, dtype=float))


@dataclass(frozen=True)
class NoiseRecipe:
    """Everything needed to regenerate one test signal.

    ``lowpass`` is ``(fc, order)``, ``bandpass`` is ``(f_lo, f_hi)``; at
    most one may be set. Band-limited output is zero-mean with unit
    variance. ``jumps`` is ``(amplitude, period)`` and is added last.
    """

    n: int
    seed: int
    lowpass: tuple | None = None
    bandpass: tuple | None = None
    jumps: tuple | None = None

    def __post_init__(self):
        if self.lowpass is not None and self.bandpass is not None:
            raise ValueError("choose either a lowpass or a bandpass band, not both")
        if self.lowpass is not None:
            fc, order = self.lowpass
            _check_freq("cutoff", fc)
            if order < 1:
                raise ValueError("Butterworth order must be >= 1")
        if self.bandpass is not None:
            lo, hi = self.bandpass
            _check_freq("f_lo", lo)
            _check_freq("f_hi", hi)
            if not lo < hi:
                raise ValueError("need f_lo < f_hi")
        if self.jumps is not None and self.jumps[1] < 1:
            raise ValueError("jump period must be >= 1")

    def generate(self):
        if self.bandpass is not None:
            x = bandpass_noise(self.n, self.seed, *self.bandpass)
        else:
            x = white_noise(self.n, self.seed)
            if self.lowpass is not None:
                fc, order = self.lowpass
                x = butterworth_lowpass(x, order, fc)
                x -= x.mean()
                # unit variance so jump amplitudes are relative to the signal scale
                x /= x.std()
        if self.jumps is not None:
            x = add_jumps(x, *self.jumps)
        return x


def fig5_noise(seed, n=1024):
    """Band-limited noise of the main worked example: Butterworth(15, 0.05)."""
    return NoiseRecipe(n=n, seed=seed, lowpass=(0.05, 15)).generate()


def sinusoid(n, f, phase=0.0):
    return np.sin(2.0 * math.pi * f * np.arange(n) + phase)
