"""Sampled section containers shared by the bundle and polarization layers.

A quantum state lives here in one of three sampled forms: a 2D complex grid
over phase space (GridSection), a 1D complex line in x or p (LineSection),
or a particle/antiparticle pair of components (DoubledSection).  All carry
the quantum charge q_v as a plain validated integer, +1 for particles and
-1 for antiparticles.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmallError

_BINARY_MAGIC = b"BQGS"
_BINARY_VERSION = 1


def check_charge(charge: int) -> int:
    """Validate a quantum charge; bundle operations admit only +1 and -1."""
    if charge not in (+1, -1):
        raise ValueError(f"quantum charge must be +1 or -1, got {charge!r}")
    return int(charge)


def _uniform_spacing(axis: np.ndarray, name: str) -> float:
    if axis.ndim != 1 or axis.size < 3:
        raise GridTooSmallError(f"{name} axis needs at least 3 samples, got {axis.size}")
    h = np.diff(axis)
    if not np.allclose(h, h[0], rtol=1e-10, atol=0.0) or h[0] <= 0:
        raise ValueError(f"{name} axis must be uniform with positive spacing")
    return float(h[0])


@dataclass
class GridSection:
    """Complex amplitudes sampled on a uniform (x, p) grid.

    values[i, j] is the amplitude at (x[i], p[j]).
    """

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    charge: int = +1

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.p = np.asarray(self.p, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        self.hx = _uniform_spacing(self.x, "x")
        self.hp = _uniform_spacing(self.p, "p")
        if self.values.shape != (self.x.size, self.p.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.x.size}, {self.p.size})"
            )
        if not np.all(np.isfinite(self.values.view(float))):
            raise ValueError("section values must be finite")
        self.charge = check_charge(self.charge)

    @property
    def nx(self) -> int:
        return self.x.size

    @property
    def np_(self) -> int:
        return self.p.size

    def meshgrid(self):
        return np.meshgrid(self.x, self.p, indexing="ij")

    @classmethod
    def from_function(cls, f, x_range, p_range, nx: int, np_: int, charge: int = +1):
        """Sample f(X, P) on a uniform grid; f must broadcast over arrays."""
        x = np.linspace(x_range[0], x_range[1], nx)
        p = np.linspace(p_range[0], p_range[1], np_)
        X, P = np.meshgrid(x, p, indexing="ij")
        return cls(x=x, p=p, values=np.asarray(f(X, P), dtype=complex), charge=charge)

    def like(self, values: np.ndarray) -> "GridSection":
        """Same grid and charge, new values."""
        return GridSection(x=self.x, p=self.p, values=values, charge=self.charge)


@dataclass
class LineSection:
    """Complex amplitudes sampled on a uniform 1D grid in x or p."""

    axis: str  # "x" (coordinate representation) or "p" (momentum representation)
    coords: np.ndarray
    values: np.ndarray
    charge: int = +1

    def __post_init__(self):
        if self.axis not in ("x", "p"):
            raise ValueError(f"axis must be 'x' or 'p', got {self.axis!r}")
        self.coords = np.asarray(self.coords, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        self.h = _uniform_spacing(self.coords, self.axis)
        if self.values.shape != self.coords.shape:
            raise ValueError("values and coords must have the same length")
        if not np.all(np.isfinite(self.values.view(float))):
            raise ValueError("section values must be finite")
        self.charge = check_charge(self.charge)

    @classmethod
    def from_function(cls, f, axis: str, lo: float, hi: float, n: int, charge: int = +1):
        coords = np.linspace(lo, hi, n)
        return cls(axis=axis, coords=coords, values=np.asarray(f(coords), dtype=complex),
                   charge=charge)

    def like(self, values: np.ndarray) -> "LineSection":
        return LineSection(axis=self.axis, coords=self.coords, values=values,
                           charge=self.charge)

    def norm_sq(self) -> float:
        """Continuum norm squared by trapezoid."""
        return float(np.trapezoid(np.abs(self.values) ** 2, self.coords))


# Fiber basis: v_pm = (1, -/+ i)/sqrt(2), eigenvectors of J = [[0,-1],[1,0]],
# taken orthonormal (v+^dag v+ = 1, v+^dag v- = 0).
V_PLUS = np.array([1.0, -1.0j]) / np.sqrt(2.0)
V_MINUS = np.array([1.0, +1.0j]) / np.sqrt(2.0)


@dataclass
class DoubledSection:
    """Coordinates of a C^2 = L+ (+) L- section along the v_pm fiber basis.

    Components may be scalars or arrays of matching shape.  psi_minus is not
    in general the conjugate of psi_plus: the two charges carry independent
    amplitudes.
    """

    psi_plus: np.ndarray
    psi_minus: np.ndarray

    def __post_init__(self):
        self.psi_plus = np.asarray(self.psi_plus, dtype=complex)
        self.psi_minus = np.asarray(self.psi_minus, dtype=complex)
        if self.psi_plus.shape != self.psi_minus.shape:
            raise ValueError("component shapes differ")

    def rotate_fiber(self, theta: float) -> "DoubledSection":
        """U(1)_v action: psi_pm -> exp(+/- i theta) psi_pm."""
        return DoubledSection(np.exp(1j * theta) * self.psi_plus,
                              np.exp(-1j * theta) * self.psi_minus)

    def norm_sq(self):
        """Pointwise |Psi|^2; cross terms vanish by orthonormality of v_pm."""
        return np.abs(self.psi_plus) ** 2 + np.abs(self.psi_minus) ** 2

    def is_diagonal(self, tol: float = 1e-12) -> bool:
        """Neutral (q_v = 0) sections lie on the diagonal psi_plus = psi_minus."""
        scale = max(np.max(np.abs(self.psi_plus)), np.max(np.abs(self.psi_minus)), 1.0)
        return bool(np.max(np.abs(self.psi_plus - self.psi_minus)) <= tol * scale)


# ---------------------------------------------------------------------------
# GridSection import/export.
#
# CSV: header "x,p,re,im", one row per grid point, x-major order.
# Binary: 16-byte header (magic "BQGS", u16 version, i16 charge, u32 nx,
# u32 np), then x axis, p axis, and interleaved re/im values, all little-
# endian float64, row-major.
# ---------------------------------------------------------------------------

def write_grid_csv(section: GridSection, path) -> None:
    X, P = section.meshgrid()
    cols = np.column_stack([X.ravel(), P.ravel(),
                            section.values.real.ravel(), section.values.imag.ravel()])
    with open(path, "w") as fh:
        fh.write("x,p,re,im\n")
        for row in cols:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_grid_csv(path, charge: int = +1) -> GridSection:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    x = np.unique(data[:, 0])
    p = np.unique(data[:, 1])
    values = (data[:, 2] + 1j * data[:, 3]).reshape(x.size, p.size)
    return GridSection(x=x, p=p, values=values, charge=charge)


def write_grid_binary(section: GridSection, path) -> None:
    header = struct.pack("<4sHhII", _BINARY_MAGIC, _BINARY_VERSION,
                         section.charge, section.nx, section.np_)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(section.x.astype("<f8").tobytes())
        fh.write(section.p.astype("<f8").tobytes())
        interleaved = np.empty((section.nx, section.np_, 2))
        interleaved[..., 0] = section.values.real
        interleaved[..., 1] = section.values.imag
        fh.write(interleaved.astype("<f8").tobytes())


def read_grid_binary(path) -> GridSection:
    with open(path, "rb") as fh:
        magic, version, charge, nx, np_ = struct.unpack("<4sHhII", fh.read(16))
        if magic != _BINARY_MAGIC:
            raise ValueError(f"not a bundleqm grid file: bad magic {magic!r}")
        if version != _BINARY_VERSION:
            raise ValueError(f"unsupported grid file version {version}")
        x = np.frombuffer(fh.read(8 * nx), dtype="<f8")
        p = np.frombuffer(fh.read(8 * np_), dtype="<f8")
        raw = np.frombuffer(fh.read(16 * nx * np_), dtype="<f8").reshape(nx, np_, 2)
        return GridSection(x=x.copy(), p=p.copy(),
                           values=raw[..., 0] + 1j * raw[..., 1], charge=charge)


def save_grid(section: GridSection, path) -> None:
    """Write CSV or binary depending on file extension (.csv vs anything else)."""
    if str(path).lower().endswith(".csv"):
        write_grid_csv(section, path)
    else:
        write_grid_binary(section, path)


def load_grid(path, charge: int = +1) -> GridSection:
    if str(path).lower().endswith(".csv"):
        return read_grid_csv(path, charge=charge)
    return read_grid_binary(path)
