"""Universal negative-group-delay (UNGD) predictor for band-limited signals."""

from ungd.core import (
    FilterSpec,
    FilterState,
    InvalidOrderError,
    Predictor,
    apply,
    cascade,
    make_coefficients,
    step,
)
from ungd.metrics import (
    CcfResult,
    PsdSpec,
    estimate_ccf,
    prediction_horizon,
    theoretical_ccf,
)
from ungd.spectral import (
    cutoff_frequency,
    frequency_response,
    group_delay,
    order_from_cutoff,
    spectrum_table,
    zero_freq_group_delay,
)

__version__ = "0.1.0"
