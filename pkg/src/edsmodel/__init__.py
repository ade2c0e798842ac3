"""Elliptic divisibility sequences, indicator primes and a Diophantine model of Z over Q."""

from .curve import INFINITY, Curve, CurveConfig, RationalPoint

__version__ = "0.1.0"

__all__ = ["Curve", "CurveConfig", "RationalPoint", "INFINITY", "__version__"]
