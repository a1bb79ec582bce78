"""Model parameters, Sobolev-pair admissibility, and the nonlinear functionals.

The interaction is the long-range Hartree-type coupling

    g0(w1, w2) = lambda Re omega^(mu-n) (w1 conj(w2)),   omega = (-Laplacian)^(1/2)

with its half-propagated diagonal form

    g(w, w)(t) = g0(v, v),   v = U*(1/t) w ,

which is exactly the nonlinearity seen by the rescaled amplitude equation.
The coupling lambda rides inside ModelParams so attractive/repulsive sign
experiments are run-level configuration.

Quadratic products are formed in physical space and 2/3-rule de-aliased, so
the same g0 is shared verbatim by the integrator and by the closed-form free
profiles (a mismatch there would pollute every difference norm downstream).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, ParameterError
from .grids import ComplexField, GridSpec, RealField, grid_arrays
from .spectral import dealias_hat, fftn, ifftn, riesz_symbol


@dataclass(frozen=True)
class ModelParams:
    """Physical/analytic parameters (dimension, coupling, exponents)."""

    n: int
    lam: float
    gamma: float
    mu: float

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n={self.n} must be >= 1")
        if not (0.0 < self.gamma < 1.0):
            raise ParameterError(f"gamma={self.gamma} must lie in (0, 1)")
        if not (0.0 < self.mu < self.n):
            raise ParameterError(f"mu={self.mu} must lie in (0, n={self.n})")

    def require_scattering(self):
        """Gate for the wave-operator constructions (stronger than the solver)."""
        if self.n < 3:
            raise ParameterError(f"scattering ops need n >= 3, got n={self.n}")
        if not self.mu <= self.n - 2:
            raise ParameterError(
                f"scattering ops need mu <= n-2, got mu={self.mu}, n={self.n}"
            )
        if not (0.5 < self.gamma < 1.0):
            raise ParameterError(
                f"wave-operator ops need 1/2 < gamma < 1, got gamma={self.gamma}"
            )
        return self


@dataclass(frozen=True)
class AdmissiblePair:
    """Sobolev indices (k, l) for the amplitude/phase-gradient pair."""

    k: int
    ell: int


@dataclass(frozen=True)
class AdmissibilityResult:
    ok: bool
    violations: tuple

    def __bool__(self) -> bool:
        return self.ok


CLAUSE_K_LE_L = "k <= l"
CLAUSE_L_GT_HALF_N = "l > n/2"
CLAUSE_SUM_BOUND = "l + 2 + mu <= min(n/2 + 2k, n + k)"
CLAUSE_EQUALITY = "k > n/2 when l + 2 + mu = n + k"
CLAUSE_EVEN_N = "n/2 + 3 + mu < min(n/2 + 2k, n + k) (n even)"


def check_admissible(n: int, mu: float, k: int, ell: int) -> AdmissibilityResult:
    """Check every admissibility clause; failures name their clause."""
    if not (0.0 < mu < n):
        raise ParameterError(f"mu={mu} must lie in (0, n={n})")
    if k < 0 or ell < 0:
        raise ParameterError("k and l must be nonnegative integers")
    bad = []
    cap = min(n / 2.0 + 2 * k, float(n + k))
    if not k <= ell:
        bad.append(CLAUSE_K_LE_L)
    if not ell > n / 2.0:
        bad.append(CLAUSE_L_GT_HALF_N)
    if not ell + 2 + mu <= cap:
        bad.append(CLAUSE_SUM_BOUND)
    if ell + 2 + mu == n + k and not k > n / 2.0:
        bad.append(CLAUSE_EQUALITY)
    if n % 2 == 0 and not n / 2.0 + 3 + mu < cap:
        bad.append(CLAUSE_EVEN_N)
    return AdmissibilityResult(not bad, tuple(bad))


def require_admissible(n: int, mu: float, pair: AdmissiblePair) -> AdmissiblePair:
    res = check_admissible(n, mu, pair.k, pair.ell)
    if not res:
        raise ParameterError(
            f"pair (k={pair.k}, l={pair.ell}) not admissible for n={n}, mu={mu}: "
            + "; ".join(res.violations)
        )
    return pair


# ---------------------------------------------------------------------------
# nonlinear functionals
# ---------------------------------------------------------------------------


def g0_hat(grid: GridSpec, w1: np.ndarray, w2: np.ndarray, params: ModelParams) -> np.ndarray:
    """Spectral representation of g0(w1, w2) from physical-space inputs."""
    prod_hat = dealias_hat(grid, fftn(w1 * np.conj(w2)))
    return params.lam * riesz_symbol(grid, params.mu) * prod_hat


def g0(w1: ComplexField, w2: ComplexField, params: ModelParams) -> RealField:
    """g0(w1, w2) = lambda Re omega^(mu-n)(w1 conj(w2)) as a real field."""
    if w1.grid != w2.grid:
        raise GridMismatchError("g0 arguments on different grids")
    hat = g0_hat(w1.grid, w1.values, w2.values, params)
    return RealField(w1.grid, ifftn(hat).real)


def g_diag(w: ComplexField, t: float, params: ModelParams) -> RealField:
    """g(w, w)(t) = g0 applied to the half-propagated field U*(1/t) w."""
    if not t > 0.0:
        raise ParameterError(f"g_diag needs t > 0, got {t}")
    k2 = grid_arrays(w.grid)["k2"]
    v = ifftn(np.exp(0.5j / t * k2) * fftn(w.values))
    hat = g0_hat(w.grid, v, v, params)
    return RealField(w.grid, ifftn(hat).real)
