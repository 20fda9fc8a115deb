"""
RealAlign runtime package.

This package wires the library into runnable commands:
- ``config``: YAML run files layered under command-line flags
- ``cli``: the ``ria`` console entry point (directions, sweep, kg, standard-form)
"""

from __future__ import annotations

__all__ = [
    "__version__",
]

__version__ = "0.1.0"
