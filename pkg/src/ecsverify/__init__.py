"""Verification toolkit for rank-one ECS model-manifold structures.

Submodules
----------
nullforms   exact canonical forms of generic nilpotent self-adjoint maps
solspace    the symplectic ODE solution space and its CT-operator spectrum
glzpoly     GL(Z)-polynomial algebra and cyclotomic detection
selectors   exhaustive verification of the combinatorial nonexistence theorem
isogroup    the model manifold, its isometry group and the group action
bridge      the spectral/combinatorial dictionary tying the above together
cli         command-line front end emitting machine-readable reports
"""

__version__ = "0.1.0"
