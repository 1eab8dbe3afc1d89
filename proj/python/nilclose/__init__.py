"""Closures of subgroups and rational subsets of free groups in the pro-p,
pro-nilpotent and profinite topologies, with the finite-monoid decision
procedures built on top of them."""

from ._nilclose import *  # noqa: F401,F403
from ._nilclose import __doc__ as _core_doc  # noqa: F401
