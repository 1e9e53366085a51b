"""Coefficients and time-domain execution of the UNGD predictor.

The predictor is the pure-IIR recursion

    y(t) = b x(t) - sum_{k=0}^{m-1} c_k y(t - (m - k))

with b = (3 + m)/2 and c_k = (k + 1)/m. Sampling interval is 1.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np


class InvalidOrderError(ValueError):
    """Raised for filter orders below 2."""


@dataclass(frozen=True)
class FilterSpec:
    """Immutable UNGD coefficient set.

    ``c[k]`` weights the output delayed by ``order - k`` samples, so
    ``c[-1]`` multiplies y(t-1) and ``c[0]`` multiplies y(t-m).
    ``k_max`` is set only for the truncated stability-demo variant.
    """

    order: int
    b: float
    c: tuple
    k_max: int | None = None

    @property
    def delays(self):
        return np.arange(self.order, 0, -1)

    @property
    def c_array(self):
        return np.asarray(self.c, dtype=float)

    @property
    def truncated(self):
        return self.k_max is not None


@dataclass
class FilterState:
    """Output history of a running predictor, oldest sample first.

    ``history[k]`` holds y(t - (m - k)), which lines up with ``c[k]``.
    """

    order: int
    history: deque = field(default=None)
    steps_run: int = 0

    def __post_init__(self):
        if self.history is None:
            self.history = deque([0.0] * self.order, maxlen=self.order)
        elif not isinstance(self.history, deque) or self.history.maxlen != self.order:
            self.history = deque(self.history, maxlen=self.order)
        if len(self.history) != self.order:
            raise ValueError(
                f"history length {len(self.history)} does not match order {self.order}"
            )

    @classmethod
    def zeros(cls, spec):
        return cls(spec.order)

    def copy(self):
        return FilterState(self.order, deque(self.history, maxlen=self.order), self.steps_run)


def _check_order(m):
    if isinstance(m, bool) or int(m) != m:
        raise InvalidOrderError(f"filter order must be an integer, got {m!r}")
    m = int(m)
    if m < 2:
        raise InvalidOrderError(f"filter order must be >= 2, got {m}")
    return m


def make_coefficients(m, k_max=None):
    """Build the coefficient set for order ``m``.

    Parameters
    ----------
    m : int
        Filter order (number of feedback taps), at least 2.
    k_max : int, optional
        Keep only c_0..c_{k_max} and zero the rest. The result is not a
        predictor; it only exists to show why every tap is needed for the
        stability guarantee. ``b`` stays (3 + m)/2.

    Returns
    -------
    FilterSpec
    """
    m = _check_order(m)
    # exact rationals, converted once
    b = Fraction(3 + m, 2)
    c = [Fraction(k + 1, m) for k in range(m)]
    if k_max is not None:
        if not 0 <= k_max <= m - 1:
            raise ValueError(f"k_max must lie in [0, {m - 1}], got {k_max}")
        c = [ck if k <= k_max else Fraction(0) for k, ck in enumerate(c)]
        if k_max == m - 1:
            k_max = None
    return FilterSpec(order=m, b=float(b), c=tuple(float(ck) for ck in c), k_max=k_max)


def step(spec, state, x):
    """Advance the predictor by one sample and return the new output."""
    if state.order != spec.order:
        raise ValueError(f"state order {state.order} does not match spec order {spec.order}")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite input sample {x!r}")
    feedback = math.fsum(ck * yk for ck, yk in zip(spec.c, state.history))
    y = spec.b * x - feedback
    state.history.append(y)
    state.steps_run += 1
    return y


def apply(spec, x, initial=None):
    """Filter a whole signal.

    Equivalent to calling :func:`step` once per sample, starting from
    ``initial`` (zero history if omitted). ``initial`` is not modified.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if x.size == 0:
        raise ValueError("cannot filter an empty signal")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal contains non-finite samples")
    m = spec.order
    if initial is not None and initial.order != m:
        raise ValueError(f"state order {initial.order} does not match spec order {m}")

    # y is stored behind an m-sample prefix holding the initial history
    y = np.zeros(m + x.size)
    if initial is not None:
        y[:m] = np.fromiter(initial.history, dtype=float, count=m)
    c = spec.c_array
    bx = spec.b * x
    for n in range(x.size):
        y[m + n] = bx[n] - np.dot(c, y[n:n + m])
    return y[m:]


def _advanced(state, y):
    hist = list(state.history) + list(y[-state.order:])
    return FilterState(state.order, deque(hist[-state.order:], maxlen=state.order),
                       state.steps_run + len(y))


def final_state(spec, x, initial=None):
    """State reached after filtering ``x``; lets batches be chained."""
    y = apply(spec, x, initial)
    return _advanced(initial if initial is not None else FilterState.zeros(spec), y)


def cascade(spec, x, stages):
    """Feed the output back through the same filter ``stages`` times."""
    if int(stages) != stages or stages < 1:
        raise ValueError(f"stages must be a positive integer, got {stages!r}")
    y = np.asarray(x, dtype=float)
    for _ in range(int(stages)):
        y = apply(spec, y)
    return y


class Predictor:
    """Streaming wrapper holding one spec and one state.

    >>> p = Predictor(3)
    >>> [p.update(v) for v in (1, 0, 0)]
    [3.0, -3.0, 1.0]
    """

    def __init__(self, order):
        self.spec = make_coefficients(order)
        self.state = FilterState.zeros(self.spec)

    def update(self, x):
        return step(self.spec, self.state, x)

    def process(self, chunk):
        y = apply(self.spec, chunk, self.state)
        self.state = _advanced(self.state, y)
        return y

    def reset(self):
        self.state = FilterState.zeros(self.spec)
