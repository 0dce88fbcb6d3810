"""deltasum: a verification toolkit for exponential-sum identities.

Library modules:

- arith: exact factorization, modular inverses, multiplicative functions
- characters: Dirichlet characters, Gauss sums, orthogonality
- expsums: Kloosterman/Ramanujan sums, Weil bounds, residue recombination
- modforms: eta-product newform coefficients, Hecke and bound checks, twists
- kernels: smooth bumps, J-Bessel, delta-symbol decompositions, oscillatory
  double integrals
- pipeline: shifted convolution sums, second-moment identities, Voronoi
  checks, exponent arithmetic
- cli: batch front-end emitting CSV reports

The hot Kloosterman kernel has a compiled backend with a pure Python
fallback; `backend_name()` reports which one is active.
"""

from ._backend import BACKEND as _BACKEND

__version__ = "0.1.0"


def backend_name() -> str:
    """Name of the active exponential-sum backend ("c" or "python")."""
    return _BACKEND
