"""Optimal group testing designs."""

from ._gtdesign import *  # noqa: F401,F403
from ._gtdesign import __doc__  # noqa: F401
