"""Eigenvalues, spectral zeta functions, and the regularized determinant of
the Dirichlet pseudo-Laplacian on a hyperbolic cusp with a flat unitary
line bundle.

Modules:
    precision   accuracy policy, compensated summation
    quadrature  double-exponential quadrature
    specfun     gamma/zeta/E1/Bessel-K primitives and certified expansions
    hypergeom   Gauss 2F1 / 3F2 evaluation and identity checks
    ramanujan   Ramanujan summation of slowly decaying series
    spectrum    mode frequencies, Bessel zeros, eigenvalue enumeration, Weyl
    zetadet     spectral zeta on the strip, regularized determinant, asymptotics
    cli         command line interface (eig/count/zeta/det/asym/verify/sweep)
"""

from . import precision, quadrature, specfun, hypergeom, ramanujan  # noqa: F401
from . import spectrum, zetadet  # noqa: F401

__version__ = "0.1.0"
