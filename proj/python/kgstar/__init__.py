"""Klein-Gordon waves on two half-axes with a potential step."""

from ._kgstar import *  # noqa: F401,F403
from ._kgstar import PLANCHEREL_CONSTANT, __doc__  # noqa: F401
