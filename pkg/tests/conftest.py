"""Shared fixtures: cached single-state propagations for the cheap tests.

Expensive thermal runs are cached by the acceptance module itself.
"""

from __future__ import annotations

import pytest

from ellipalign import CO2, BasisIndex, GridSpec, PulseSpec, propagate_pulse

# spans a bit past the half revival (T_rev/2 = 21.4 ps) so peak extraction
# has both revival windows available
CHEAP_GRID = GridSpec(t_start=-1.0, t_end=23.0, dt_output=0.02)


@pytest.fixture(scope="session")
def single_state_run():
    """Factory: (a2, intensity_w_cm2, J0, M0) -> cached PropagationResult."""
    cache = {}

    def run(a2, intensity=25e12, J0=0, M0=0, fwhm=100.0):
        key = (a2, intensity, J0, M0, fwhm)
        if key not in cache:
            pulse = PulseSpec(
                peak_intensity=intensity, fwhm_duration=fwhm, ellipticity_a2=a2
            )
            cache[key] = propagate_pulse(CO2, pulse, CHEAP_GRID, BasisIndex(J0, M0))
        return cache[key]

    return run
