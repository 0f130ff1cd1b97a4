"""Prequantum gauge layer on the phase plane.

The vacuum connection A = (p/2) dx - (x/2) dp lives on the line bundles L+
and L-; its curvature is the symplectic form and realizes the canonical
commutation relation.  Charge q_v = +1 sections feel +iA, charge -1 sections
-iA.  Gauge automorphisms exp(alpha J) shift A by d(alpha) and carry the
connection between the coordinate, momentum and intermediate gauges.

Derivatives are second-order central differences (one-sided O(h^2) stencils
at grid edges); averaged diagnostics use interior cells only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .classical import OscillatorParams
from .errors import DivisionNearZeroError, GridTooSmallError, WrongPolarizationError
from .sections import (DoubledSection, GridSection, LineSection, check_charge,
                       load_grid, save_grid)

__all__ = [
    "GaugeConnection", "vacuum_connection", "gauge_transform",
    "covariant_derivative", "curvature_numeric", "canonical_operators",
    "translate_operator", "decompose", "recompose", "hermitian_pairing",
    "GridSection", "LineSection", "DoubledSection", "load_grid", "save_grid",
]


@dataclass(frozen=True)
class GaugeConnection:
    """Connection components as vectorized functions of (x, p).

    In unitary gauges both components are real-valued; the values may be
    complex after non-unitary automorphisms (see polarizations).
    """

    a_x: Callable
    a_p: Callable
    gauge_label: str = "vacuum"


def vacuum_connection() -> GaugeConnection:
    """Symmetric-gauge vacuum connection A_x = p/2, A_p = -x/2 (curvature -1)."""
    return GaugeConnection(a_x=lambda x, p: 0.5 * p,
                           a_p=lambda x, p: -0.5 * x,
                           gauge_label="vacuum")


def gauge_transform(conn: GaugeConnection, alpha: Callable,
                    dalpha_dx: Optional[Callable] = None,
                    dalpha_dp: Optional[Callable] = None,
                    fd_step: float = 1e-6,
                    label: str = "alpha") -> GaugeConnection:
    """Automorphism exp(alpha J): A_x -> A_x + d(alpha)/dx, A_p -> A_p + d(alpha)/dp.

    Analytic partials are used when supplied; otherwise they are central-
    differenced with step fd_step.  Curvature is unchanged.
    """
    if dalpha_dx is None:
        dalpha_dx = lambda x, p: (alpha(x + fd_step, p) - alpha(x - fd_step, p)) / (2 * fd_step)
    if dalpha_dp is None:
        dalpha_dp = lambda x, p: (alpha(x, p + fd_step) - alpha(x, p - fd_step)) / (2 * fd_step)
    base_x, base_p = conn.a_x, conn.a_p
    return GaugeConnection(
        a_x=lambda x, p: base_x(x, p) + dalpha_dx(x, p),
        a_p=lambda x, p: base_p(x, p) + dalpha_dp(x, p),
        gauge_label=f"{conn.gauge_label}+{label}",
    )


def _diff_axis(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Central differences, one-sided O(h^2) at the two edge cells."""
    if values.shape[axis] < 3:
        raise GridTooSmallError("need at least 3 samples along the derivative axis")
    f = np.moveaxis(values, axis, 0)
    g = np.empty_like(f)
    g[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    g[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    return np.moveaxis(g, 0, axis)


def covariant_derivative(sec: GridSection, direction: str,
                         conn: GaugeConnection) -> GridSection:
    """grad = d + i q_v A along x or p, by central differences."""
    if direction not in ("x", "p"):
        raise ValueError(f"direction must be 'x' or 'p', got {direction!r}")
    X, P = sec.meshgrid()
    if direction == "x":
        deriv = _diff_axis(sec.values, sec.hx, axis=0)
        a = conn.a_x(X, P)
    else:
        deriv = _diff_axis(sec.values, sec.hp, axis=1)
        a = conn.a_p(X, P)
    return sec.like(deriv + 1j * sec.charge * a * sec.values)


def curvature_numeric(conn: GaugeConnection, probe: GridSection,
                      margin: int = 2, tol_rel: float = 1e-12) -> complex:
    """Interior-averaged ([grad_x, grad_p] psi)/psi; -i q_v up to O(h^2).

    The probe must be smooth and nonvanishing on the interior (two-cell
    margin, since the commutator applies two first derivatives).
    """
    if probe.nx < 2 * margin + 1 or probe.np_ < 2 * margin + 1:
        raise GridTooSmallError("probe grid too small for the requested margin")
    comm = (covariant_derivative(covariant_derivative(probe, "p", conn), "x", conn).values
            - covariant_derivative(covariant_derivative(probe, "x", conn), "p", conn).values)
    sl = (slice(margin, -margin), slice(margin, -margin))
    inner = probe.values[sl]
    if np.min(np.abs(inner)) < tol_rel * np.max(np.abs(probe.values)):
        raise DivisionNearZeroError("probe vanishes on the interior")
    return complex(np.mean(comm[sl] / inner))


def _line_diff(sec: LineSection) -> np.ndarray:
    return _diff_axis(sec.values, sec.h, axis=0)


def _require_axis(sec: LineSection, axis: str) -> None:
    if sec.axis != axis:
        raise WrongPolarizationError(
            f"section is polarized along {sec.axis!r}; this representation needs {axis!r}")


def canonical_operators(rep: str, charge: int):
    """Operators (x_hat, p_hat) on polarized 1D sections.

    Coordinate representation (both charges): x_hat = x*, p_hat = -i d/dx.
    Momentum representation: charge +1 gives (i d/dp, p*), charge -1 the
    antiparticle mirror (-i d/dp, -p*).
    """
    check_charge(charge)
    if rep == "coordinate":
        def x_hat(sec: LineSection) -> LineSection:
            _require_axis(sec, "x")
            return sec.like(sec.coords * sec.values)

        def p_hat(sec: LineSection) -> LineSection:
            _require_axis(sec, "x")
            return sec.like(-1j * _line_diff(sec))
    elif rep == "momentum":
        def x_hat(sec: LineSection) -> LineSection:
            _require_axis(sec, "p")
            return sec.like(1j * charge * _line_diff(sec))

        def p_hat(sec: LineSection) -> LineSection:
            _require_axis(sec, "p")
            return sec.like(charge * sec.coords * sec.values)
    else:
        raise ValueError(f"rep must be 'coordinate' or 'momentum', got {rep!r}")
    return x_hat, p_hat


def translate_operator(x0: float):
    """Coordinate operators conjugated by exp(p x0 J): x_hat shifts by -x0.

    Returns the pair (x_hat, p_hat); p_hat is unchanged and the CCR is
    preserved.  x0 = 0 reproduces canonical_operators("coordinate", .).
    """
    def x_hat(sec: LineSection) -> LineSection:
        _require_axis(sec, "x")
        return sec.like((sec.coords - x0) * sec.values)

    def p_hat(sec: LineSection) -> LineSection:
        _require_axis(sec, "x")
        return sec.like(-1j * _line_diff(sec))

    return x_hat, p_hat


def decompose(psi1, psi2) -> DoubledSection:
    """C^2 components -> v_pm coordinates: psi_pm = (psi1 +/- i psi2)/sqrt(2)."""
    psi1 = np.asarray(psi1, dtype=complex)
    psi2 = np.asarray(psi2, dtype=complex)
    return DoubledSection(psi_plus=(psi1 + 1j * psi2) / np.sqrt(2.0),
                          psi_minus=(psi1 - 1j * psi2) / np.sqrt(2.0))


def recompose(doubled: DoubledSection):
    """Inverse of decompose: Psi = psi_plus v+ + psi_minus v-."""
    psi1 = (doubled.psi_plus + doubled.psi_minus) / np.sqrt(2.0)
    psi2 = 1j * (doubled.psi_minus - doubled.psi_plus) / np.sqrt(2.0)
    return psi1, psi2


def hermitian_pairing(psi, phi):
    """Fiberwise Hermitian product <psi, phi> = psi* phi."""
    return np.conj(np.asarray(psi, dtype=complex)) * np.asarray(phi, dtype=complex)


def default_grid_section(f, params: OscillatorParams, n: int = 257,
                         half_width: float = 8.0, charge: int = +1) -> GridSection:
    """Sample f on the default grid [-8w, 8w] x [-8/w, 8/w], 257 x 257.

    Gaussian-type probes decay below 1e-14 at this boundary.
    """
    w = params.w
    return GridSection.from_function(f, (-half_width * w, half_width * w),
                                     (-half_width / w, half_width / w),
                                     n, n, charge=charge)
