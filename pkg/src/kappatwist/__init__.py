"""Exact PBW, Hopf-deformation and κ-contraction toolkit."""

__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402,F401
