"""
RealAlign core package.

This package holds the exact and numeric machinery for real interference
alignment on single-antenna Gaussian networks:

- monomial transmit/receive directions and their generators
- channel realizations, the three-user standard form and algebraic folding
- the integer-constellation signaling chain (parameters, layouts,
  received constellations, encoding, hard decoding)

It is intentionally separate from:
- experiment orchestration in ``src/ria_bench``
- structured run logging in ``src/ria_logging``
- configuration and the command line in ``src/ria_runtime``
"""

from __future__ import annotations

__all__ = [
    "__version__",
]

__version__ = "0.1.0"
