"""Relativistic scalar point charge and its massless field in 1+1 dimensions.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from scalar1d._core import *  # noqa: F401,F403
from scalar1d._core import __doc__ as _core_doc

__doc__ = _core_doc
