"""
RealAlign structured logging package.

This package holds:
- run event models (runs, channel draws, layouts, sweep points, KG samples)
- newline-delimited JSON serialization
- an append-oriented recorder used by the experiment layer and the CLI

It is kept apart from the numeric core in ``src/ria`` so the alignment and
signaling code stays free of I/O. Event timestamps live only in the event log;
CSV artifacts never carry them and stay byte-reproducible.
"""

from __future__ import annotations

__all__ = [
    "__version__",
]

__version__ = "0.1.0"
