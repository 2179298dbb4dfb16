"""Citation matching toolkit: synthetic corpora, cascade matching, evaluation.

Thin wrapper over the compiled _citmatch extension module.
"""

from _citmatch import *  # noqa: F401,F403
from _citmatch import __doc__  # noqa: F401
