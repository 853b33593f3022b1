"""Random-matrix moment averages via Jack-polynomial hypergeometric series."""

__version__ = "0.1.0"

from .hyperg import (  # noqa: F401
    Hyp2F1Params,
    NonConvergenceError,
    SeriesResult,
    hyp1f0_equal,
    hyp2f1_equal,
    series_term,
)
from .jack import PoleError  # noqa: F401
