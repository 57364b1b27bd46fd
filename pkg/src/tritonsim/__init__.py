"""Triton ground and excited states on a statevector simulator, with an LCU transition stage."""

__version__ = "0.1.0"
