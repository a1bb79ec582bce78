#!/usr/bin/env python3
"""Walk through the operator algebra behind the construction.

The free propagator factors as U(t) = M(t) D(t) F M(t): a quadratic chirp,
the unitary Fourier transform, a dilation, and another chirp.  On centered
complex Gaussians each factor acts in closed form, so the factorization can
be checked parameter-against-parameter with no grid at all.  Its companion,
F M(t) F* = U*(1/t), is what lets the whole laboratory stay on a fixed grid:
the dilation never has to be sampled.
"""

import numpy as np

from hartreelab.gaussians import GaussianSymbol, gaussian_apply, mdfm_compose, symbol_distance
from hartreelab.grids import ComplexField, GridSpec
from hartreelab.spectral import chirp_conjugation_residual, free_propagator, lr_norm

print("== Gaussian-calculus check of the factorization U = M D F M ==")
for sym in (GaussianSymbol(1.0, 1.0, 3), GaussianSymbol(0.7 + 0.3j, 1.5 + 0.4j, 3)):
    for t in (1.0, 2.0, 10.0):
        err = symbol_distance(mdfm_compose(sym, t), gaussian_apply(sym, "U", t))
        print(f"  A={sym.amplitude}, a={sym.width_param}, t={t:>4}: parameter mismatch {err:.2e}")

print("\n== Grid check of the chirp conjugation F M(t) F* = U*(1/t) ==")
grid = GridSpec(3, 32, 16.0)
f = ComplexField(grid, np.exp(-grid.radius_squared() / (2.0 * (4.0 * grid.h) ** 2)))
for t in (1.0, 2.0, 10.0):
    print(f"  t={t:>4}: relative L2 residual {chirp_conjugation_residual(f, t):.2e}")

print("\n== Unitarity of the free propagator on the grid ==")
rng = np.random.default_rng(0)
g = ComplexField(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))
for t in (0.5, 5.0, -2.0):
    drift = abs(lr_norm(free_propagator(g, t), 2) - lr_norm(g, 2)) / lr_norm(g, 2)
    print(f"  t={t:>4}: relative mass change {drift:.2e}")
