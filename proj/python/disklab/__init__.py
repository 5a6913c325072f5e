"""Critical disk-type surfaces of revolution with elastic boundary energies."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
