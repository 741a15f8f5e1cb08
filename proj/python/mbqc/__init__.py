"""Entanglement monotones, universality criteria, percolation and
measurement-protocol experiments, backed by the C++ core."""

from mbqc._core import *  # noqa: F401,F403
from mbqc._core import __doc__  # noqa: F401

__version__ = "0.1.0"
