"""Matrix elements of cos^2(theta_x), cos^2(theta_y), cos^2(theta_z) in the
|J,M> spherical-harmonic basis.

The quantization axis z is normal to the polarization ellipse.  With
Condon-Shortley harmonics every matrix element of these operators is real;
selection rules are dJ in {0, +-2} with dM = 0 for the z axis and
dM in {0, +-2} for x and y.  The x/y operators decompose as

    cos^2(theta_x) = (1 - cos^2(theta_z))/2 + T/2
    cos^2(theta_y) = (1 - cos^2(theta_z))/2 - T/2

with T = sin^2(theta) cos(2 phi) the rank-2, dM = +-2 tensor part.

A brute-force spherical-quadrature oracle is provided for testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

AXES = ("x", "y", "z")


@dataclass(frozen=True, order=True)
class BasisIndex:
    """Rotational state label |J, M>."""

    J: int
    M: int

    def __post_init__(self):
        if self.J < 0 or abs(self.M) > self.J:
            raise ValueError(f"invalid basis index J={self.J}, M={self.M}")


@dataclass(frozen=True)
class CouplingTable:
    """Banded matrix elements of one cos^2 operator up to j_max.

    `entries` maps (J, M, J', M') to the real element; only entries allowed
    by the selection rules are present, and the table carries both
    orientations of each symmetric pair.
    """

    axis: str
    j_max: int
    entries: dict = field(repr=False)

    def get(self, J: int, M: int, Jp: int, Mp: int) -> float:
        return self.entries.get((J, M, Jp, Mp), 0.0)


def cos2z_diagonal(J: int, M: int) -> float:
    """<J,M| cos^2(theta_z) |J,M>."""
    if J == 0:
        return 1.0 / 3.0
    return 1.0 / 3.0 + (2.0 / 3.0) * (J * (J + 1) - 3 * M * M) / (
        (2 * J - 1) * (2 * J + 3)
    )

def cos2z_raising(J: int, M: int) -> float:
    """<J+2,M| cos^2(theta_z) |J,M>."""
    num = ((J + 1) ** 2 - M * M) * ((J + 2) ** 2 - M * M)
    return math.sqrt(num / ((2 * J + 1) * (2 * J + 5))) / (2 * J + 3)


def _tensor_element(Jp: int, J: int, M: int) -> float:
    """<J', M+2| sin^2(theta) e^{2 i phi} |J, M> (real, Condon-Shortley).

    Closed forms from the Wigner-Eckert theorem for the rank-2 tensor
    sin^2(theta) e^{2 i phi} = 2 sqrt(2/3) C^2_2 (Racah-normalized).
    """
    if abs(M + 2) > Jp:
        return 0.0
    if Jp == J:
        if J < 1:
            return 0.0
        return (
            -2.0
            * math.sqrt((J - M) * (J - M - 1) * (J + M + 1) * (J + M + 2))
            / ((2 * J - 1) * (2 * J + 3))
        )
    if Jp == J + 2:
        num = (J + M + 1) * (J + M + 2) * (J + M + 3) * (J + M + 4)
        return math.sqrt(num / ((2 * J + 1) * (2 * J + 5))) / (2 * J + 3)
    if Jp == J - 2:
        num = (J - M) * (J - M - 1) * (J - M - 2) * (J - M - 3)
        return math.sqrt(num / ((2 * J + 1) * (2 * J - 3))) / (2 * J - 1)
    return 0.0


@lru_cache(maxsize=None)
def cos2_elements(axis: str, j_max: int) -> CouplingTable:
    """Analytic coupling table for cos^2 along one lab axis, J <= j_max.

    Tables are cached; they are immutable and freely shareable.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if j_max < 2:
        raise ValueError("j_max must be >= 2")

    entries: dict = {}

    def put(J, M, Jp, Mp, value):
        if value != 0.0:
            entries[(J, M, Jp, Mp)] = value
            entries[(Jp, Mp, J, M)] = value

    for J in range(j_max + 1):
        for M in range(-J, J + 1):
            dz = cos2z_diagonal(J, M)
            if axis == "z":
                entries[(J, M, J, M)] = dz
            else:
                entries[(J, M, J, M)] = (1.0 - dz) / 2.0
            if J + 2 <= j_max:
                rz = cos2z_raising(J, M)
                if axis == "z":
                    put(J, M, J + 2, M, rz)
                else:
                    put(J, M, J + 2, M, -rz / 2.0)

    if axis != "z":
        # dM = +-2 tensor part, sign +1 for x and -1 for y
        sign = 1.0 if axis == "x" else -1.0
        # every unordered pair {(J,M),(J',M+2)} is visited exactly once
        for J in range(j_max + 1):
            for Jp in (J - 2, J, J + 2):
                if Jp < 0 or Jp > j_max:
                    continue
                for M in range(-J, J + 1):
                    val = _tensor_element(Jp, J, M)
                    if val != 0.0:
                        put(J, M, Jp, M + 2, sign * val / 4.0)

    return CouplingTable(axis=axis, j_max=j_max, entries=entries)


def quadrature_oracle(
    axis: str, J: int, M: int, Jp: int, Mp: int, n_theta: int = 200, n_phi: int = 256
) -> float:
    """Brute-force <J',M'| f_axis |J,M> by spherical quadrature.

    Gauss-Legendre in cos(theta), uniform trapezoid in phi (exact for the
    azimuthal Fourier modes involved).  Absolute accuracy better than 1e-11
    at the default resolution.  Deliberately independent of the analytic
    tables.
    """
    from scipy.special import sph_harm_y

    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    nodes, weights = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(nodes)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    th, ph = np.meshgrid(theta, phi, indexing="ij")

    if axis == "z":
        f = np.cos(th) ** 2
    elif axis == "x":
        f = (np.sin(th) * np.cos(ph)) ** 2
    else:
        f = (np.sin(th) * np.sin(ph)) ** 2

    y_ket = sph_harm_y(J, M, th, ph)
    y_bra = sph_harm_y(Jp, Mp, th, ph)
    integrand = np.conj(y_bra) * f * y_ket
    # trapezoid in phi on a periodic grid = uniform sum * (2 pi / n)
    val = np.sum(weights[:, None] * integrand) * (2.0 * math.pi / n_phi)
    return float(np.real(val))
