"""Post-data inference engines (fiducial, Bayes, bispatial, composition, Gibbs)."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
