"""Compressible flow with Cattaneo heat flux and Maxwell viscous stress.

Modules: ``eos`` (relaxed equation of state), ``eigen`` (flux matrix and
hyperbolicity certificate), ``invariant`` (genuine-nonlinearity coefficient
in reduced parameters), ``sim`` (1D Lagrangian finite-volume solver) and
``cli``.
"""
__version__ = "0.1.0"
