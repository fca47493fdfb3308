"""Unit system, parameter conversions, and input validation."""

import math

import numpy as np
import pytest

from ellipalign import (
    CO2,
    ConfigurationError,
    GridSpec,
    MoleculeSpec,
    PulseSpec,
    TemperatureSpec,
    envelope_squared,
    internal_units,
    lab_units,
)
from ellipalign.units import boltzmann_exponent_scale

PULSE_25TW = PulseSpec(peak_intensity=25e12, fwhm_duration=100.0, ellipticity_a2=0.0)


def test_b_rad_co2():
    params = internal_units(CO2, PULSE_25TW)
    # independent route: B[cm^-1] * c[cm/s] gives the frequency in Hz
    import scipy.constants as sc

    b_hz = 0.3902 * sc.c * 1e2
    assert params.b_rad == pytest.approx(2.0 * math.pi * b_hz * 1e-12, rel=1e-12)
    assert params.b_rad == pytest.approx(0.073504, rel=1e-4)


def test_u_peak_25tw():
    """Coupling strength via an independent SI computation."""
    import scipy.constants as sc

    params = internal_units(CO2, PULSE_25TW)
    e0_sq = 2.0 * (25e12 * 1e4) / (sc.epsilon_0 * sc.c)  # V^2/m^2
    dalpha = 4.0 * math.pi * sc.epsilon_0 * 2.0e-30  # 2 A^3 volume -> SI
    u = dalpha * e0_sq / (4.0 * sc.hbar) * 1e-12  # rad/ps
    assert params.u_peak == pytest.approx(u, rel=1e-9)
    assert params.u_peak == pytest.approx(99.4, rel=2e-3)


def test_u_peak_linear_in_intensity():
    p1 = internal_units(CO2, PULSE_25TW)
    half = PulseSpec(peak_intensity=12.5e12, fwhm_duration=100.0, ellipticity_a2=0.0)
    p2 = internal_units(CO2, half)
    assert p2.u_peak == pytest.approx(p1.u_peak / 2.0, rel=1e-12)


def test_revival_period():
    params = internal_units(CO2, PULSE_25TW)
    assert params.revival_period == pytest.approx(math.pi / params.b_rad, rel=1e-15)
    assert params.revival_period == pytest.approx(42.74, rel=1e-3)


def test_pulse_window_spans_4_fwhm():
    params = internal_units(CO2, PULSE_25TW)
    w0, w1 = params.pulse_window
    assert w0 == pytest.approx(-0.4)
    assert w1 == pytest.approx(0.4)


def test_lab_units_round_trip():
    params = internal_units(CO2, PULSE_25TW)
    b_cm, intensity = lab_units(params)
    assert b_cm == pytest.approx(0.3902, rel=1e-12)
    assert intensity == pytest.approx(25e12, rel=1e-12)


def test_au_polarizability_unit():
    # 1 A^3 of polarizability volume is about 6.748 atomic units
    mol_a3 = MoleculeSpec(0.3902, 1.0, anisotropy_unit="A3")
    mol_au = MoleculeSpec(0.3902, 6.74833, anisotropy_unit="au")
    u_a3 = internal_units(mol_a3, PULSE_25TW).u_peak
    u_au = internal_units(mol_au, PULSE_25TW).u_peak
    assert u_au == pytest.approx(u_a3, rel=1e-4)


def test_envelope_normalization_and_fwhm():
    t0 = 0.3
    pulse = PulseSpec(25e12, 100.0, 0.0, center_time=t0)
    assert envelope_squared(pulse, t0) == pytest.approx(1.0, abs=1e-15)
    tau = pulse.fwhm_ps
    assert envelope_squared(pulse, t0 + tau / 2) == pytest.approx(0.5, rel=1e-12)
    assert envelope_squared(pulse, t0 - tau / 2) == pytest.approx(0.5, rel=1e-12)
    # array input
    vals = envelope_squared(pulse, np.array([t0, t0 + tau]))
    assert vals.shape == (2,)
    assert vals[1] == pytest.approx(2.0 ** -4, rel=1e-12)


def test_boltzmann_scale_room_temperature():
    import scipy.constants as sc

    scale = boltzmann_exponent_scale(CO2, 295.0)
    oracle = sc.h * sc.c * 1e2 * 0.3902 / (sc.k * 295.0)
    assert scale == pytest.approx(oracle, rel=1e-9)
    assert boltzmann_exponent_scale(CO2, 0.0) == math.inf


def test_b2_complement():
    pulse = PulseSpec(25e12, 100.0, 0.2)
    assert pulse.b2 == pytest.approx(0.8)
    assert pulse.fwhm_ps == pytest.approx(0.1)


def test_grid_times_uniform():
    grid = GridSpec(t_start=-1.0, t_end=1.0, dt_output=0.5)
    assert np.allclose(grid.times(), [-1.0, -0.5, 0.0, 0.5, 1.0])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(peak_intensity=-1.0, fwhm_duration=100.0, ellipticity_a2=0.0),
        dict(peak_intensity=1e12, fwhm_duration=0.0, ellipticity_a2=0.0),
        dict(peak_intensity=1e12, fwhm_duration=100.0, ellipticity_a2=0.75),
        dict(peak_intensity=1e12, fwhm_duration=100.0, ellipticity_a2=-0.1),
        dict(
            peak_intensity=1e12,
            fwhm_duration=100.0,
            ellipticity_a2=0.0,
            envelope_shape="sech2",
        ),
    ],
)
def test_pulse_validation(kwargs):
    with pytest.raises(ConfigurationError):
        PulseSpec(**kwargs)


def test_molecule_validation():
    with pytest.raises(ConfigurationError):
        MoleculeSpec(0.0, 2.0)
    with pytest.raises(ConfigurationError):
        MoleculeSpec(0.39, 2.0, anisotropy_unit="cm3")
    with pytest.raises(ConfigurationError):
        MoleculeSpec(0.39, 2.0, spin_weight_even_J=0.0, spin_weight_odd_J=0.0)


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        GridSpec(t_start=1.0, t_end=0.0, dt_output=0.1)
    with pytest.raises(ConfigurationError):
        GridSpec(t_start=0.0, t_end=1.0, dt_output=0.0)
    with pytest.raises(ConfigurationError):
        GridSpec(t_start=0.0, t_end=1.0, dt_output=0.1, j_max="many")
    with pytest.raises(ConfigurationError):
        GridSpec(t_start=0.0, t_end=1.0, dt_output=0.1, j_max=1)


def test_temperature_validation():
    with pytest.raises(ConfigurationError):
        TemperatureSpec(-1.0)
    assert TemperatureSpec().temperature == 295.0
