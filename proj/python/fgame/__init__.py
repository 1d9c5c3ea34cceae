"""Free games: constructions, exact values, subsampling estimators and experiments."""

from ._fgame import *  # noqa: F401,F403
from ._fgame import __version__  # noqa: F401
