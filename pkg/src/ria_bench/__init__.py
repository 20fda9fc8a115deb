"""
RealAlign experiment package.

This package holds the measurement side of the simulator:
- closed-form DOF tables and error/rate bounds
- Monte Carlo DOF sweeps with common random numbers
- the empirical Khintchine-Groshev probe and minimum-distance scaling probe
- CSV and JSON manifest reporting

Everything here builds on the exact machinery in ``src/ria`` and records its
progress through ``src/ria_logging``.
"""

from __future__ import annotations

__all__ = [
    "__version__",
]

__version__ = "0.1.0"
