"""Classical oscillator mechanics on the phase plane (R^2, omega = dp ^ dx).

Energies, Hamiltonian flows, exact trajectories for both winding charges,
winding numbers of sampled curves, the U(1) moment map with its symplectic
reduction, and the Kahler metric.  Particles wind counterclockwise
(z(t) = e^{i omega t} z0, charge +1); antiparticles are the time-reversed,
conjugate-structure solutions winding clockwise (charge -1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OpenCurveError, UndersampledError, ZeroCrossingError, ZeroPointError
from .sections import check_charge

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class OscillatorParams:
    """Mass and frequency; the derived length scale is w^2 = 1/(m omega)."""

    m: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not (self.m > 0 and self.omega > 0):
            raise ValueError("m and omega must be positive")

    @property
    def w2(self) -> float:
        return 1.0 / (self.m * self.omega)

    @property
    def w(self) -> float:
        return self.w2 ** 0.5

    @property
    def w4(self) -> float:
        return self.w2 * self.w2


@dataclass(frozen=True)
class PhasePoint:
    """A point (x, p) of phase space with complex views z_pm.

    z_plus = (x - i w^2 p)/sqrt(2) is the particle coordinate; z_minus is its
    conjugate, the antiparticle coordinate.
    """

    x: float
    p: float

    def z_plus(self, params: OscillatorParams) -> complex:
        return (self.x - 1j * params.w2 * self.p) / np.sqrt(2.0)

    def z_minus(self, params: OscillatorParams) -> complex:
        return (self.x + 1j * params.w2 * self.p) / np.sqrt(2.0)

    @classmethod
    def from_z_plus(cls, z: complex, params: OscillatorParams) -> "PhasePoint":
        return cls(x=np.sqrt(2.0) * z.real, p=-np.sqrt(2.0) * z.imag / params.w2)


@dataclass(frozen=True)
class ClassicalState:
    """Initial datum z0 and winding charge; the two charges evolve independently."""

    z0: complex
    charge: int = +1

    def __post_init__(self):
        check_charge(self.charge)


@dataclass(frozen=True)
class ComplexStructure:
    """J (sign +1) or -J (sign -1) acting on (x^1, x^2) = (x, -w^2 p)."""

    sign: int = +1

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def matrix(self) -> np.ndarray:
        return self.sign * np.array([[0.0, -1.0], [1.0, 0.0]])


def hamiltonian_energy(pt: PhasePoint, params: OscillatorParams) -> float:
    """H = p^2/2m + m omega^2 x^2 / 2."""
    return pt.p ** 2 / (2.0 * params.m) + 0.5 * params.m * params.omega ** 2 * pt.x ** 2


def hamiltonian_vector_field(pt: PhasePoint, params: OscillatorParams):
    """(x_dot, p_dot) = (p/m, -m omega^2 x); equals omega times the rotation
    generator w^2 p d_x - (x/w^2) d_p evaluated at pt."""
    return (pt.p / params.m, -params.m * params.omega ** 2 * pt.x)


def rotation_generator(pt: PhasePoint, params: OscillatorParams):
    """The U(1) generator field w^2 p d_x - (x/w^2) d_p at pt."""
    return (params.w2 * pt.p, -pt.x / params.w2)


def evolve_classical(state: ClassicalState, t, params: OscillatorParams,
                     frequency_sign: int = +1):
    """Exact solution z(t) = exp(i q omega t) z0 in the charge-q coordinate.

    For charge -1 the stored z0 plays the role of the independent antiparticle
    datum (the paper's zbar_0').  frequency_sign = -1 flips to the physics
    phase convention.  Accepts scalar or array t.
    """
    phase = np.exp(1j * frequency_sign * state.charge * params.omega * np.asarray(t))
    out = phase * state.z0
    return complex(out) if np.isscalar(t) else out


def trajectory_times(periods: float, samples: int, params: OscillatorParams) -> np.ndarray:
    """Uniform times covering `periods` full periods, endpoints included."""
    return np.linspace(0.0, periods * TWO_PI / params.omega, samples)


def winding_number(samples, tol_rel: float = 1e-9) -> int:
    """Total unwrapped phase of a closed sampled curve, in turns.

    The curve must be closed (first ~ last sample), stay away from 0, and be
    sampled finely enough that every angular step is below pi.
    """
    z = np.asarray(samples, dtype=complex)
    if z.size < 2:
        raise OpenCurveError("need at least 2 samples")
    scale = np.max(np.abs(z))
    tol = tol_rel * scale
    if np.any(np.abs(z) < tol) or scale == 0.0:
        raise ZeroCrossingError("curve sample within tolerance of 0")
    if abs(z[0] - z[-1]) > tol:
        raise OpenCurveError("curve endpoints differ beyond closure tolerance")
    steps = np.angle(z[1:] / z[:-1])
    if np.any(np.abs(steps) >= np.pi * (1.0 - 1e-12)):
        raise UndersampledError("angular step reached pi; sample the curve more finely")
    turns = float(np.sum(steps) / TWO_PI)
    k = int(np.rint(turns))
    # closed + step-bounded implies an integer total up to rounding
    if abs(turns - k) > 1e-6:
        raise OpenCurveError(f"total phase {turns} turns is not an integer")
    return k


def moment_map(z: complex) -> float:
    """mu(z) = z zbar, the generator of the U(1) rotation action."""
    return abs(z) ** 2


def symplectic_reduce(z0: complex, n_samples: int):
    """Collapse the orbit circle {z zbar = |z0|^2} to its moduli point.

    Returns (z0, circle) where circle holds n_samples points of the level set,
    starting at z0.  The origin is excluded: the oscillator phase space is
    C \\ {0}.
    """
    if z0 == 0:
        raise ZeroPointError("z0 = 0 is excluded from the reduced phase space")
    if n_samples < 3:
        raise ValueError("n_samples must be >= 3")
    angles = TWO_PI * np.arange(n_samples) / n_samples
    return z0, z0 * np.exp(1j * angles)


def kahler_metric(params: OscillatorParams):
    """Rescaled metric ds^2 = dx^2 + w^4 dp^2: components (g_xx, g_pp)."""
    return (1.0, params.w4)
