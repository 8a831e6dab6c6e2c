"""Fourier-features training dynamics toolkit.

Thin Python layer over the C++ core: densities, targets, the scaled DFT,
two-layer/multilayer Fourier-features training, the damped-heat FEM solver,
and per-frequency learning-rate analysis.
"""

try:
    from ._ffdyn import *  # installed wheel layout
    from ._ffdyn import __version__
except ImportError:  # in-tree builds put _ffdyn on PYTHONPATH
    from _ffdyn import *  # noqa: F401,F403
    from _ffdyn import __version__  # noqa: F401
