"""Intermediate-field superposition picture of elliptical alignment.

An elliptical pulse of total fluence F splits into two cross-polarized
linear pulses of fluences b^2 F (major axis y) and a^2 F (minor axis x).
To first order each drives its own linear response, and the deviations
from 1/3 superpose:

    <cos^2 theta_y> - 1/3 ~ (1 - 3 a^2 / 2) A_par
    <cos^2 theta_x> - 1/3 ~ ((3 a^2 - 1) / 2) A_par

with A_par(t) the a^2 = 0 response along the field at the same total
fluence.  The x deviation vanishes at the magic ellipticity a^2 = 1/3,
the analogue of the spectroscopic magic angle arctan(sqrt 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .traces import AlignmentTrace

MAGIC_A2 = 1.0 / 3.0


@dataclass(frozen=True)
class LinearReference:
    """Linear (a^2 = 0) alignment response at the reference fluence.

    `a_parallel` is <cos^2 theta_y>(t) - 1/3 along the field axis; the
    perpendicular response is -a_parallel/2 identically by the x-z symmetry
    of the linear case.
    """

    grid: np.ndarray
    a_parallel: np.ndarray

    def __post_init__(self):
        if len(self.grid) != len(self.a_parallel):
            raise ValueError("grid and a_parallel must have equal length")

    @property
    def a_perpendicular(self) -> np.ndarray:
        return -self.a_parallel / 2.0

    @classmethod
    def from_trace(cls, trace: AlignmentTrace) -> "LinearReference":
        return cls(grid=trace.time_grid, a_parallel=trace.cos2_y - 1.0 / 3.0)


def superposed_trace(ref: LinearReference, a2: float):
    """Approximate (y, x) deviations from 1/3 for ellipticity a^2.

    Returns (delta_y, delta_x) = ((1 - 3 a^2/2) A_par, ((3 a^2 - 1)/2) A_par).
    """
    if not 0.0 <= a2 <= 0.5:
        raise ValueError(f"a2 = {a2} outside [0, 1/2]")
    delta_y = (1.0 - 1.5 * a2) * ref.a_parallel
    delta_x = (1.5 * a2 - 0.5) * ref.a_parallel
    return delta_y, delta_x


def approximate_trace(ref: LinearReference, a2: float) -> AlignmentTrace:
    """Full approximate AlignmentTrace; z closes the sum rule exactly."""
    delta_y, delta_x = superposed_trace(ref, a2)
    y = 1.0 / 3.0 + delta_y
    x = 1.0 / 3.0 + delta_x
    return AlignmentTrace(ref.grid, x, y, 1.0 - x - y)


@dataclass(frozen=True)
class MagicEllipticity:
    """a^2 = 1/3 with the equivalent waveplate-input angle."""

    a2: float
    angle_deg: float


def magic_ellipticity() -> MagicEllipticity:
    """Ellipticity where the x-axis response vanishes.

    a^2 = 1/3 satisfies the symmetry criterion 1 - 2 a^2 = a^2 (equal
    effective couplings along y and z); the equivalent input angle is
    arctan(sqrt 2) ~ 54.735 deg, with cos^2 of it exactly 1/3.
    """
    return MagicEllipticity(a2=MAGIC_A2, angle_deg=math.degrees(math.atan(math.sqrt(2.0))))


def compare_superposition(
    full: AlignmentTrace, approx: AlignmentTrace, window: tuple[float, float]
) -> dict[str, float]:
    """Relative RMS deviation of the approximation per axis over a window.

    RMS(full - approx) / RMS(full - 1/3), both restricted to the window;
    axes whose full deviation is identically zero report the absolute RMS
    mismatch instead.
    """
    if len(full.time_grid) != len(approx.time_grid) or not np.allclose(
        full.time_grid, approx.time_grid
    ):
        raise ValueError("traces must share one time grid")
    mask = (full.time_grid >= window[0]) & (full.time_grid <= window[1])
    if not np.any(mask):
        raise ValueError(f"empty comparison window {window}")
    out = {}
    for axis in ("x", "y", "z"):
        f = full.component(axis)[mask] - 1.0 / 3.0
        g = approx.component(axis)[mask] - 1.0 / 3.0
        norm = math.sqrt(float(np.mean(f * f)))
        err = math.sqrt(float(np.mean((f - g) ** 2)))
        out[axis] = err / norm if norm > 0.0 else err
    return out
