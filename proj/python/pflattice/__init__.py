"""Spectral certificates for entrywise nonnegative operators.

Thin wrapper over the compiled extension: Perron eigendata, peripheral cycle
structure, super-commutant LP certificates, ideal-triangularizing chains and
the randomized theorem suite.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = _core_doc
