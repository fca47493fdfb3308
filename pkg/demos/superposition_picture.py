"""How well two scaled copies of the linear response explain elliptical runs.

In the intermediate-field picture an elliptical pulse drives the y and x
deviations as (1 - 3a2/2) A_par and (3a2 - 1)/2 A_par, where A_par is the
linear-pulse response. This demo measures the normalized error of that
approximation for a 30 K ensemble. At 5 TW/cm2 the picture is good; at
25 TW/cm2 a 30 K ensemble is kicked hard enough that it degrades (at room
temperature it recovers, which is why ellipticity scans are done warm).

At a2 = 1/3 the approximate x deviation is identically zero, so its
normalized error is 1 by construction; the column to watch there is the
absolute pinning of cos2_x to 1/3.
"""

import numpy as np

from ellipalign import (
    CO2,
    GridSpec,
    LinearReference,
    PulseSpec,
    approximate_trace,
    compare_superposition,
    magic_ellipticity,
    simulate_alignment,
)

grid = GridSpec(t_start=-1.0, t_end=23.0, dt_output=0.02)
temperature = 30.0
window = (1.0, 22.0)


def run(a2, intensity):
    pulse = PulseSpec(
        peak_intensity=intensity, fwhm_duration=100.0, ellipticity_a2=a2
    )
    return simulate_alignment(CO2, pulse, grid, temperature=temperature).trace


magic = magic_ellipticity()
print(f"magic ellipticity: a2 = {magic.a2:.6f} ({magic.angle_deg:.4f} deg)")

for intensity in (5e12, 25e12):
    print(f"\n{intensity / 1e12:.0f} TW/cm2, {temperature:.0f} K")
    reference = LinearReference.from_trace(run(0.0, intensity))
    print("  a2      normalized rms error (x, y, z)   full-run max |cos2_x - 1/3|")
    for a2 in (1.0 / 6.0, magic.a2, 0.5):
        full = run(a2, intensity)
        approx = approximate_trace(reference, a2)
        err = compare_superposition(full, approx, window)
        peak_x = np.max(np.abs(full.cos2_x - 1.0 / 3.0))
        print(
            f"  {a2:.4f}  {err['x']:.3f}  {err['y']:.3f}  {err['z']:.3f}"
            f"            {peak_x:.4f}"
        )
