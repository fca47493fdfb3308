"""Physical specifications, internal unit system, and lab-unit conversions.

Internal units: time in ps, energies as angular frequencies in rad/ps,
hbar = 1.  With these choices the rotational constant of a light linear
molecule and the revival period both land at O(0.1)-O(10) numeric values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# CODATA 2018
C_M_PER_S = 2.99792458e8
C_CM_PER_PS = 2.99792458e-2
EPSILON_0 = 8.8541878128e-12  # F/m
HBAR = 1.054571817e-34  # J s
K_BOLTZMANN = 1.380649e-23  # J/K

# 1 atomic unit of polarizability in SI (C^2 m^2 / J)
POLARIZABILITY_AU = 1.64877727436e-41

ROOM_TEMPERATURE_K = 295.0


class ConfigurationError(ValueError):
    """Invalid or inconsistent physical specification."""


@dataclass(frozen=True)
class MoleculeSpec:
    """Linear-molecule data needed by the rigid-rotor model.

    Parameters
    ----------
    rotational_constant_B : float
        Rotational constant in cm^-1.
    polarizability_anisotropy : float
        Delta-alpha in the unit named by `anisotropy_unit`.
    anisotropy_unit : str
        "A3" (polarizability volume, Angstrom^3) or "au" (atomic units).
    spin_weight_even_J, spin_weight_odd_J : float
        Nuclear-spin statistical weights of even/odd rotational levels.
    """

    rotational_constant_B: float
    polarizability_anisotropy: float
    anisotropy_unit: str = "A3"
    spin_weight_even_J: float = 1.0
    spin_weight_odd_J: float = 1.0
    name: str = ""

    def __post_init__(self):
        if self.rotational_constant_B <= 0:
            raise ConfigurationError("rotational_constant_B must be > 0")
        if self.anisotropy_unit not in ("A3", "au"):
            raise ConfigurationError(
                f"unknown polarizability unit tag {self.anisotropy_unit!r}"
                " (expected 'A3' or 'au')"
            )
        if self.spin_weight_even_J < 0 or self.spin_weight_odd_J < 0:
            raise ConfigurationError("spin weights must be >= 0")
        if self.spin_weight_even_J == 0 and self.spin_weight_odd_J == 0:
            raise ConfigurationError("at least one spin weight must be > 0")


# B and Delta-alpha are order-of-magnitude literature values for the CO2
# ground state (Herzberg constants; polarizability volume ~2 A^3). Only even
# J exists for CO2 (zero-spin oxygen nuclei).
CO2 = MoleculeSpec(
    rotational_constant_B=0.3902,
    polarizability_anisotropy=2.0,
    anisotropy_unit="A3",
    spin_weight_even_J=1.0,
    spin_weight_odd_J=0.0,
    name="CO2",
)

MOLECULE_PRESETS = {"co2": CO2}


@dataclass(frozen=True)
class PulseSpec:
    """Elliptically polarized pump pulse.

    `ellipticity_a2` is the squared relative field amplitude along the minor
    axis x; b^2 = 1 - a^2 along the major axis y is never stored separately.
    a^2 = 0 is linear polarization along y, a^2 = 1/2 is circular.  Values
    beyond 1/2 merely swap the roles of x and y and are rejected.
    """

    peak_intensity: float  # W/cm^2
    fwhm_duration: float  # fs, intensity FWHM
    ellipticity_a2: float
    envelope_shape: str = "gaussian"
    center_time: float = 0.0  # ps
    wavelength_nm: float = 800.0  # informational only; carrier is cycle-averaged

    def __post_init__(self):
        if self.peak_intensity < 0:
            raise ConfigurationError("peak_intensity must be >= 0")
        if self.fwhm_duration <= 0:
            raise ConfigurationError("fwhm_duration must be > 0")
        if not 0.0 <= self.ellipticity_a2 <= 0.5:
            raise ConfigurationError(
                f"ellipticity_a2 = {self.ellipticity_a2} outside [0, 1/2];"
                " values above 1/2 are equivalent to swapping x and y"
            )
        if self.envelope_shape != "gaussian":
            raise ConfigurationError(
                f"unsupported envelope shape {self.envelope_shape!r}"
            )

    @property
    def b2(self) -> float:
        return 1.0 - self.ellipticity_a2

    @property
    def fwhm_ps(self) -> float:
        return self.fwhm_duration * 1e-3


@dataclass(frozen=True)
class GridSpec:
    """Uniform output time grid and basis-size policy."""

    t_start: float  # ps
    t_end: float  # ps
    dt_output: float  # ps
    j_max: int | str = "auto"

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ConfigurationError("t_end must be > t_start")
        if self.dt_output <= 0:
            raise ConfigurationError("dt_output must be > 0")
        if isinstance(self.j_max, str):
            if self.j_max != "auto":
                raise ConfigurationError("j_max must be an integer or 'auto'")
        elif self.j_max < 2:
            raise ConfigurationError("j_max must be >= 2")

    def times(self):
        import numpy as np

        n = int(math.floor((self.t_end - self.t_start) / self.dt_output + 1e-9)) + 1
        return self.t_start + self.dt_output * np.arange(n)


@dataclass(frozen=True)
class TemperatureSpec:
    temperature: float = ROOM_TEMPERATURE_K  # K

    def __post_init__(self):
        if self.temperature < 0:
            raise ConfigurationError("temperature must be >= 0")


@dataclass(frozen=True)
class InternalParams:
    """Propagation parameters in internal units (rad/ps, ps, hbar = 1)."""

    b_rad: float  # rotational constant as angular frequency, rad/ps
    u_peak: float  # peak polarizability coupling Delta-alpha E0^2 / (4 hbar), rad/ps
    a2: float
    pulse_center: float  # ps
    pulse_fwhm: float  # ps, intensity FWHM
    molecule: MoleculeSpec = field(repr=False, default=None)
    pulse: PulseSpec = field(repr=False, default=None)

    @property
    def revival_period(self) -> float:
        """Full revival period pi / B_rad in ps.

        All J(J+1) are even integers, so every free phase
        exp(-i B J(J+1) t) is periodic with this period.
        """
        return math.pi / self.b_rad

    @property
    def pulse_window(self) -> tuple[float, float]:
        """Integration window +-4 intensity-FWHM around the pulse peak.

        Gaussian tails beyond 4 FWHM carry < 1e-9 of the fluence.
        """
        t0, tau = self.pulse_center, self.pulse_fwhm
        return (t0 - 4.0 * tau, t0 + 4.0 * tau)


def anisotropy_si(mol: MoleculeSpec) -> float:
    """Polarizability anisotropy in SI units (C^2 m^2 / J)."""
    if mol.anisotropy_unit == "A3":
        # polarizability volume: alpha_SI = 4 pi eps0 * volume
        return 4.0 * math.pi * EPSILON_0 * mol.polarizability_anisotropy * 1e-30
    return mol.polarizability_anisotropy * POLARIZABILITY_AU


def internal_units(mol: MoleculeSpec, pulse: PulseSpec) -> InternalParams:
    """Convert laboratory parameters to internal propagation units.

    B_rad = 2 pi c B[cm^-1] in rad/ps; the peak coupling is
    U_peak = Delta-alpha E0^2 / (4 hbar) with E0^2 = 2 I_peak / (eps0 c),
    also in rad/ps.  The envelope is normalized so Lambda^2(center) = 1.
    """
    b_rad = 2.0 * math.pi * C_CM_PER_PS * mol.rotational_constant_B
    intensity_si = pulse.peak_intensity * 1e4  # W/cm^2 -> W/m^2
    e0_squared = 2.0 * intensity_si / (EPSILON_0 * C_M_PER_S)
    u_peak_si = anisotropy_si(mol) * e0_squared / (4.0 * HBAR)  # rad/s
    return InternalParams(
        b_rad=b_rad,
        u_peak=u_peak_si * 1e-12,
        a2=pulse.ellipticity_a2,
        pulse_center=pulse.center_time,
        pulse_fwhm=pulse.fwhm_ps,
        molecule=mol,
        pulse=pulse,
    )


def lab_units(params: InternalParams) -> tuple[float, float]:
    """Invert `internal_units`: return (B in cm^-1, peak intensity in W/cm^2)."""
    b_cm = params.b_rad / (2.0 * math.pi * C_CM_PER_PS)
    u_peak_si = params.u_peak * 1e12
    e0_squared = 4.0 * HBAR * u_peak_si / anisotropy_si(params.molecule)
    intensity_si = e0_squared * EPSILON_0 * C_M_PER_S / 2.0
    return b_cm, intensity_si * 1e-4


def envelope_squared(pulse: PulseSpec, t):
    """Normalized intensity envelope Lambda^2(t), peak value 1 at the center.

    exp(-4 ln2 (t - t0)^2 / tau^2) with tau the intensity FWHM; `t` in ps,
    scalar or array.
    """
    import numpy as np

    tau = pulse.fwhm_ps
    x = (np.asarray(t) - pulse.center_time) / tau
    return np.exp(-4.0 * math.log(2.0) * x * x)


def boltzmann_exponent_scale(mol: MoleculeSpec, temperature: float) -> float:
    """hbar B_rad / (k_B T): weight of level J is exp(-scale * J(J+1))."""
    if temperature <= 0:
        return math.inf
    b_rad_si = 2.0 * math.pi * C_M_PER_S * 1e2 * mol.rotational_constant_B  # rad/s
    return HBAR * b_rad_si / (K_BOLTZMANN * temperature)
