"""finikey: finite-length limits on reconciliation leakage, LDPC syndrome
coding to measure what practical codes achieve, and the two-parameter
efficiency model tying the two together."""

from . import bounds, fit, infocalc, ldpc, sim

__version__ = "0.1.0"

__all__ = ["bounds", "fit", "infocalc", "ldpc", "sim", "__version__"]
