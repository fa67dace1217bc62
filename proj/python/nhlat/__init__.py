"""Coupled lossy two-chain lattice: spectra, winding numbers, decay profiles."""

try:
    from ._nhlat import *  # noqa: F401,F403
    from ._nhlat import __version__  # noqa: F401
except ImportError:
    # plain CMake builds put the extension on sys.path instead of in-package
    from _nhlat import *  # noqa: F401,F403
    from _nhlat import __version__  # noqa: F401
