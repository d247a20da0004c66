"""mmWave gesture laboratory.

Thin python surface over the C++ core: FMCW beat simulation, the range /
range-angle preprocessing chain, the gesture CNN and SAR back-projection.
"""

try:
    from ._fgl import *  # noqa: F401,F403  (installed package layout)
    from ._fgl import __doc__ as _core_doc  # noqa: F401
except ImportError:
    from _fgl import *  # noqa: F401,F403  (in-tree build, module on sys.path)

__version__ = "0.1.0"
