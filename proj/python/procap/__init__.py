"""Process-capability analysis: screening, distribution fitting, sigma
estimation, capability indices, and the per-dimension decision workflow.

The compiled core lives in :mod:`procap._procap`; everything it exports is
re-exported here.
"""

from ._procap import *  # noqa: F401,F403
from ._procap import __doc__ as _core_doc  # noqa: F401
from ._procap import __version__  # noqa: F401
