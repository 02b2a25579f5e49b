"""Spectral boundary-integral evolution of a 2-D free interface.

The interface is a parametrized curve z(a, t) carrying a vortex-sheet
strength w(a, t); the average velocity is the Birkhoff-Rott integral, the
strength solves a second-kind equation each step, and classical RK4 advances
both.  Diagnostics track the arc-chord constant, the Rayleigh-Taylor sign
condition, and an energy built from Sobolev norms of the state.
"""
from ._backend import BACKEND

__all__ = ["BACKEND", "__version__"]
__version__ = "0.1.0"
