"""Periodic cubic grids and the field containers that live on them.

The computational domain is the box [-L, L)^n with N points per axis,
spacing h = 2L/N, and the frequency lattice xi in (pi/L) * {-N/2, ..., N/2-1}^n
stored in FFT order.  Fields are plain numpy arrays wrapped with their grid;
all operations elsewhere in the package treat them as values.

Serialization: a flat binary format (documented in the README) and a CSV
export for small slices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, ParameterError

_MAGIC = b"HLF1"
KIND_COMPLEX = 0
KIND_REAL = 1
KIND_VECTOR = 2


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Cubic periodic grid: box [-L, L)^n, N points per axis."""

    n: int
    points_per_axis: int
    half_width: float

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"dimension n={self.n} must be >= 1")
        if self.points_per_axis < 8 or not _is_power_of_two(self.points_per_axis):
            raise ParameterError(
                f"points_per_axis={self.points_per_axis} must be a power of two >= 8"
            )
        if not self.half_width > 0:
            raise ParameterError(f"half_width={self.half_width} must be positive")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.n

    @property
    def size(self) -> int:
        return self.points_per_axis**self.n

    @property
    def cell_volume(self) -> float:
        return self.h**self.n

    @property
    def box_volume(self) -> float:
        return (2.0 * self.half_width) ** self.n

    def axis_coordinates(self) -> np.ndarray:
        """Physical coordinates along one axis, [-L, L) with spacing h."""
        return -self.half_width + self.h * np.arange(self.points_per_axis)

    def coordinate_arrays(self) -> list:
        """n broadcastable coordinate arrays (each shaped for one axis)."""
        x = self.axis_coordinates()
        out = []
        for i in range(self.n):
            shape = [1] * self.n
            shape[i] = self.points_per_axis
            out.append(x.reshape(shape))
        return out

    def radius_squared(self) -> np.ndarray:
        xs = self.coordinate_arrays()
        r2 = np.zeros(self.shape)
        for x in xs:
            r2 = r2 + x**2
        return r2

    def axis_frequencies(self) -> np.ndarray:
        """Frequency lattice along one axis in FFT order, (pi/L) * integers."""
        N = self.points_per_axis
        return 2.0 * np.pi * np.fft.fftfreq(N, d=self.h)

    def frequency_arrays(self) -> list:
        k = self.axis_frequencies()
        out = []
        for i in range(self.n):
            shape = [1] * self.n
            shape[i] = self.points_per_axis
            out.append(k.reshape(shape))
        return out

    def k_squared(self) -> np.ndarray:
        ks = self.frequency_arrays()
        k2 = np.zeros(self.shape)
        for k in ks:
            k2 = k2 + k**2
        return k2

    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: keep axis mode indices |m| <= N/3."""
        N = self.points_per_axis
        m = np.rint(np.fft.fftfreq(N) * N).astype(int)
        keep = np.abs(m) <= N // 3
        mask = np.ones(self.shape, dtype=bool)
        for i in range(self.n):
            shape = [1] * self.n
            shape[i] = N
            mask = mask & keep.reshape(shape)
        return mask


# Per-grid cache of the derived arrays; GridSpec is hashable and immutable.
_CACHE: dict = {}


def grid_arrays(grid: GridSpec) -> dict:
    """Cached coordinate/frequency arrays for a grid."""
    got = _CACHE.get(grid)
    if got is None:
        got = {
            "x": grid.coordinate_arrays(),
            "r2": grid.radius_squared(),
            "k": grid.frequency_arrays(),
            "k2": grid.k_squared(),
            "dealias": grid.dealias_mask(),
        }
        _CACHE[grid] = got
    return got


def _check_same_grid(*grids):
    g0 = grids[0]
    for g in grids[1:]:
        if g != g0:
            raise GridMismatchError(f"grids differ: {g0} vs {g}")


@dataclass
class ComplexField:
    """Complex scalar samples on a grid (houses w, w_plus, v)."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != self.grid.shape:
            raise GridMismatchError(
                f"value shape {self.values.shape} != grid shape {self.grid.shape}"
            )
        if not np.isfinite(self.values.view(np.float64)).all():
            raise ParameterError("non-finite entries in ComplexField")

    def copy(self) -> "ComplexField":
        return ComplexField(self.grid, self.values.copy())

    @staticmethod
    def zero(grid: GridSpec) -> "ComplexField":
        return ComplexField(grid, np.zeros(grid.shape, dtype=np.complex128))


@dataclass
class RealField:
    """Real scalar samples on a grid (houses phases and g0 outputs)."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise GridMismatchError(
                f"value shape {self.values.shape} != grid shape {self.grid.shape}"
            )
        if not np.isfinite(self.values).all():
            raise ParameterError("non-finite entries in RealField")

    def copy(self) -> "RealField":
        return RealField(self.grid, self.values.copy())

    @staticmethod
    def zero(grid: GridSpec) -> "RealField":
        return RealField(grid, np.zeros(grid.shape))


@dataclass
class VectorField:
    """n real components on one grid (houses s and its free profiles)."""

    grid: GridSpec
    components: np.ndarray  # shape (n,) + grid.shape

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=np.float64)
        want = (self.grid.n,) + self.grid.shape
        if self.components.shape != want:
            raise GridMismatchError(
                f"component shape {self.components.shape} != {want}"
            )
        if not np.isfinite(self.components).all():
            raise ParameterError("non-finite entries in VectorField")

    def copy(self) -> "VectorField":
        return VectorField(self.grid, self.components.copy())

    @staticmethod
    def zero(grid: GridSpec) -> "VectorField":
        return VectorField(grid, np.zeros((grid.n,) + grid.shape))


Field = ComplexField | RealField | VectorField


def write_field(f, stream_or_path) -> None:
    """Write a field in the flat binary format (header + row-major doubles)."""
    if isinstance(f, ComplexField):
        kind, payload = KIND_COMPLEX, f.values
    elif isinstance(f, RealField):
        kind, payload = KIND_REAL, f.values
    elif isinstance(f, VectorField):
        kind, payload = KIND_VECTOR, f.components
    else:
        raise TypeError(f"not a field: {type(f)}")

    header = (
        _MAGIC
        + np.uint8(kind).tobytes()
        + np.uint32(f.grid.n).tobytes()
        + np.uint32(f.grid.points_per_axis).tobytes()
        + np.float64(f.grid.half_width).tobytes()
    )
    blob = header + np.ascontiguousarray(payload).tobytes()
    if hasattr(stream_or_path, "write"):
        stream_or_path.write(blob)
    else:
        with open(stream_or_path, "wb") as fh:
            fh.write(blob)


def read_field(stream_or_path):
    """Read a field written by :func:`write_field`."""
    if hasattr(stream_or_path, "read"):
        blob = stream_or_path.read()
    else:
        with open(stream_or_path, "rb") as fh:
            blob = fh.read()
    if blob[:4] != _MAGIC:
        raise ValueError("bad magic; not a field file")
    kind = int(np.frombuffer(blob, np.uint8, 1, 4)[0])
    n = int(np.frombuffer(blob, np.uint32, 1, 5)[0])
    N = int(np.frombuffer(blob, np.uint32, 1, 9)[0])
    L = float(np.frombuffer(blob, np.float64, 1, 13)[0])
    grid = GridSpec(n, N, L)
    body = blob[21:]
    if kind == KIND_COMPLEX:
        vals = np.frombuffer(body, np.complex128).reshape(grid.shape).copy()
        return ComplexField(grid, vals)
    if kind == KIND_REAL:
        vals = np.frombuffer(body, np.float64).reshape(grid.shape).copy()
        return RealField(grid, vals)
    if kind == KIND_VECTOR:
        vals = np.frombuffer(body, np.float64).reshape((n,) + grid.shape).copy()
        return VectorField(grid, vals)
    raise ValueError(f"unknown field kind {kind}")


def field_slice_csv(f, axis: int = 0) -> str:
    """CSV of a 1-d slice through the box center along one axis."""
    grid = f.grid
    idx = [grid.points_per_axis // 2] * grid.n
    x = grid.axis_coordinates()
    rows = ["x,value_re,value_im"]
    for j in range(grid.points_per_axis):
        here = list(idx)
        here[axis] = j
        if isinstance(f, VectorField):
            v = complex(f.components[(0, *here)])
        else:
            v = complex(f.values[tuple(here)])
        rows.append(f"{x[j]:.17g},{v.real:.17g},{v.imag:.17g}")
    return "\n".join(rows) + "\n"
