"""Krylov complexity of constrained spin chains."""

from ._kscars import *  # noqa: F401,F403
from ._kscars import KscarsError

__version__ = "0.1.0"
