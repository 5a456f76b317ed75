"""Lyapunov analysis of polyhedral convex processes."""

from ._conelyap import *  # noqa: F401,F403
from ._conelyap import Error, ParseError, SolverError

SCHEMA = "conelyap/1"

__all__ = [name for name in dir() if not name.startswith("_")]
