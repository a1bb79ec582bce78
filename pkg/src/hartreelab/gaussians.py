"""Closed-form calculus for centered complex Gaussians A exp(-a|x|^2/2).

Each of the unitaries of the factored free propagator maps a centered
Gaussian to a centered Gaussian with explicitly transformed (A, a):

    F     : A -> A a^(-n/2),        a -> 1/a          (unitary Fourier transform)
    M(t)  : A -> A,                 a -> a - i/t       (chirp exp(i x^2 / 2t))
    D(t)  : A -> A (it)^(-n/2),     a -> a / t^2       (dilation (it)^(-n/2) f(x/t))
    U(t)  : A -> A (1+iat)^(-n/2),  a -> a / (1+iat)   (free propagator)

Complex powers use the principal branch.  The factorization
U(t) = M(t) D(t) F M(t) can then be tested exactly, parameter against
parameter, with no grid in sight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .grids import ComplexField, GridSpec, grid_arrays


@dataclass(frozen=True)
class GaussianSymbol:
    """Centered complex Gaussian profile A exp(-a|x|^2/2) in dimension n."""

    amplitude: complex
    width_param: complex
    dim: int

    def __post_init__(self):
        if not np.real(self.width_param) > 0.0:
            raise ParameterError(
                f"width parameter must have positive real part, got {self.width_param}"
            )
        if self.dim < 1:
            raise ParameterError("dimension must be >= 1")


def _cpow(z: complex, p: float) -> complex:
    return complex(np.exp(p * np.log(complex(z))))


def gaussian_apply(sym: GaussianSymbol, op: str, t: float | None = None) -> GaussianSymbol:
    """Apply one of {F, M, D, U} to a Gaussian symbol in closed form."""
    A, a, n = complex(sym.amplitude), complex(sym.width_param), sym.dim
    if op == "F":
        return GaussianSymbol(A * _cpow(a, -n / 2.0), 1.0 / a, n)
    if t is None:
        raise ParameterError(f"operator {op!r} needs a time argument")
    if op == "M":
        if t == 0.0:
            raise ParameterError("M(t) undefined at t = 0")
        return GaussianSymbol(A, a - 1j / t, n)
    if op == "D":
        if t == 0.0:
            raise ParameterError("D(t) undefined at t = 0")
        return GaussianSymbol(A * _cpow(1j * t, -n / 2.0), a / t**2, n)
    if op == "U":
        return GaussianSymbol(A * _cpow(1.0 + 1j * a * t, -n / 2.0), a / (1.0 + 1j * a * t), n)
    raise ParameterError(f"unknown operator {op!r}")


def mdfm_compose(sym: GaussianSymbol, t: float) -> GaussianSymbol:
    """M(t) D(t) F M(t) applied right-to-left; should reproduce U(t)."""
    out = gaussian_apply(sym, "M", t)
    out = gaussian_apply(out, "F")
    out = gaussian_apply(out, "D", t)
    return gaussian_apply(out, "M", t)


def symbol_distance(s1: GaussianSymbol, s2: GaussianSymbol) -> float:
    """Max parameter mismatch between two symbols."""
    return max(
        abs(complex(s1.amplitude) - complex(s2.amplitude)),
        abs(complex(s1.width_param) - complex(s2.width_param)),
    )


def sample_symbol(sym: GaussianSymbol, grid: GridSpec) -> ComplexField:
    """Sample the Gaussian profile on a grid (dimension must match)."""
    if sym.dim != grid.n:
        raise ParameterError(f"symbol dim {sym.dim} != grid dim {grid.n}")
    r2 = grid_arrays(grid)["r2"]
    return ComplexField(grid, complex(sym.amplitude) * np.exp(-0.5 * complex(sym.width_param) * r2))
