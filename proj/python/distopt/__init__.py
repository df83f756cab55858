"""Distributed constrained consensus optimization simulator.

Switching-graph projected consensus dynamics with per-agent state-dependent
diminishing stepsizes, in continuous (Euler-integrated) and discrete time.
"""

try:
    from ._distopt import *  # noqa: F401,F403  (installed package layout)
    from ._distopt import __doc__ as _doc
except ImportError:  # in-tree build: _distopt.so sits on PYTHONPATH
    from _distopt import *  # noqa: F401,F403
    from _distopt import __doc__ as _doc

__doc__ = _doc or __doc__
__version__ = "0.1.0"
