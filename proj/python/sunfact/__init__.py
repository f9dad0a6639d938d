"""Ground-state factorization toolkit for n-level lattice models."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
