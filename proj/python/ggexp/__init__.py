"""Generalized Gegenbauer expansions and coefficient inequality checks."""

from ._ggexp import *  # noqa: F401,F403
from ._ggexp import __doc__  # noqa: F401
