"""Cross-defocusing pump-probe signal model, peak extraction, and scale fit.

The probe senses a signal proportional to [<cos^2 theta_i>(t) - 1/3]^2
convolved with the probe intensity envelope (a unit-area Gaussian).  The
overall proportionality constant of the defocusing optics is unknown and is
never modeled; comparisons are shape-based, through a single fitted scale
factor per trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .traces import AlignmentTrace
from .units import MoleculeSpec, internal_units

SIGNAL_CSV_HEADER = "delay_ps,Sx,Sy"
PEAK_WINDOW_HALF_WIDTH = 1.5  # ps, revival search half-window
PEAK_THRESHOLD = 1e-12


@dataclass(frozen=True)
class SignalTrace:
    """Defocusing signal S_i(delay) for the probe axes x and y.

    Dimensionless, nonnegative; the absolute scale is arbitrary.
    """

    delay_grid: np.ndarray
    s_x: np.ndarray
    s_y: np.ndarray
    probe_fwhm: float  # fs, intensity FWHM

    def __post_init__(self):
        n = len(self.delay_grid)
        if not (len(self.s_x) == len(self.s_y) == n):
            raise ValueError("signal components must share the delay grid")

    def component(self, axis: str) -> np.ndarray:
        return {"x": self.s_x, "y": self.s_y}[axis]

    def to_csv(self, path, header_comments: list[str] | None = None) -> None:
        with open(path, "w") as fh:
            for line in header_comments or []:
                fh.write(f"# {line}\n")
            fh.write(SIGNAL_CSV_HEADER + "\n")
            for d, sx, sy in zip(self.delay_grid, self.s_x, self.s_y):
                fh.write(f"{float(d)!r},{float(sx)!r},{float(sy)!r}\n")


def load_signal_csv(path, probe_fwhm: float = 100.0) -> SignalTrace:
    """Read a `delay_ps,Sx,Sy` CSV; a single-axis column subset is allowed.

    Missing columns are filled with zeros.
    """
    names = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if names is None and line.split(",")[0] == "delay_ps":
                names = [c.strip() for c in line.split(",")]
                continue
            rows.append([float(v) for v in line.split(",")])
    if names is None:
        raise ValueError(f"{path}: missing 'delay_ps,...' header row")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.asarray(rows)
    cols = {name: data[:, k] for k, name in enumerate(names)}
    zeros = np.zeros(len(data))
    return SignalTrace(
        delay_grid=cols["delay_ps"],
        s_x=cols.get("Sx", zeros),
        s_y=cols.get("Sy", zeros),
        probe_fwhm=probe_fwhm,
    )


@dataclass(frozen=True)
class RevivalPeak:
    """Signal maximum near the k-th quarter revival (index 1 = T_rev/4)."""

    index: int
    time: float  # ps
    height: float


def _probe_kernel(dt: float, probe_fwhm_ps: float) -> np.ndarray:
    """Unit-area Gaussian intensity envelope sampled on the trace grid."""
    half = max(int(math.ceil(4.0 * probe_fwhm_ps / dt)), 1)
    t = dt * np.arange(-half, half + 1)
    g = np.exp(-4.0 * math.log(2.0) * (t / probe_fwhm_ps) ** 2)
    return g / np.sum(g)


def defocusing_signal(
    trace: AlignmentTrace, axis: str = "both", probe_fwhm: float = 100.0
) -> SignalTrace:
    """S_i(delay) = integral G(t - delay) [<cos^2 theta_i>(t) - 1/3]^2 dt.

    G is the unit-area Gaussian probe intensity envelope of the given FWHM
    (fs); the convolution runs on the trace grid and the delay grid equals
    the time grid.  With axis "x" or "y" only that component is computed
    and the other column is zero.
    """
    if axis not in ("x", "y", "both"):
        raise ValueError(f"axis must be 'x', 'y' or 'both', got {axis!r}")
    if probe_fwhm <= 0:
        raise ValueError("probe_fwhm must be > 0")
    fwhm_ps = probe_fwhm * 1e-3
    dt = trace.dt
    if dt > fwhm_ps / 5.0 + 1e-12:
        raise ValueError(
            f"trace grid spacing {dt} ps too coarse for a {probe_fwhm} fs probe;"
            " need dt <= probe_fwhm/5"
        )
    kernel = _probe_kernel(dt, fwhm_ps)

    def convolve(values):
        d2 = (values - 1.0 / 3.0) ** 2
        return np.convolve(d2, kernel, mode="same")

    zeros = np.zeros(len(trace.time_grid))
    s_x = convolve(trace.cos2_x) if axis in ("x", "both") else zeros
    s_y = convolve(trace.cos2_y) if axis in ("y", "both") else zeros
    return SignalTrace(trace.time_grid, s_x, s_y, probe_fwhm)


def revival_peaks(
    signal: SignalTrace,
    mol: MoleculeSpec,
    axis: str = "y",
    threshold: float = PEAK_THRESHOLD,
) -> list[RevivalPeak]:
    """Signal maxima in +-1.5 ps windows around the quarter revivals k T_rev/4.

    Peaks below `threshold` are dropped; windows outside the delay grid are
    skipped.  Requires the grid to span at least half a revival period.
    """
    from .units import C_CM_PER_PS

    b_rad = 2.0 * math.pi * C_CM_PER_PS * mol.rotational_constant_B
    t_rev = math.pi / b_rad
    grid = signal.delay_grid
    if grid[-1] - grid[0] < t_rev / 2.0:
        raise ValueError(
            f"delay grid spans {grid[-1] - grid[0]:.2f} ps,"
            f" need at least T_rev/2 = {t_rev / 2.0:.2f} ps"
        )
    values = signal.component(axis)
    peaks = []
    k = 1
    while k * t_rev / 4.0 <= grid[-1] + PEAK_WINDOW_HALF_WIDTH:
        center = k * t_rev / 4.0
        mask = np.abs(grid - center) <= PEAK_WINDOW_HALF_WIDTH
        if np.any(mask):
            sub = values[mask]
            i = int(np.argmax(sub))
            height = float(sub[i])
            if height > threshold:
                peaks.append(
                    RevivalPeak(index=k, time=float(grid[mask][i]), height=height)
                )
        k += 1
    return peaks


def fit_scale(
    measured: SignalTrace,
    model: SignalTrace,
    window: tuple[float, float],
    axis: str = "y",
) -> tuple[float, float]:
    """Least-squares scale of the model onto the measured signal.

    The model is linearly interpolated onto the measured grid inside the
    window; the closed-form optimum is sum(m s) / sum(s^2).  Returns
    (scale, rms residual normalized by the measured peak in the window).
    """
    grid = measured.delay_grid
    mask = (grid >= window[0]) & (grid <= window[1])
    if not np.any(mask):
        raise ValueError(f"empty overlap window {window}")
    m = measured.component(axis)[mask]
    s = np.interp(grid[mask], model.delay_grid, model.component(axis))
    ss = float(np.dot(s, s))
    if ss == 0.0:
        raise ValueError("model signal identically zero on the fit window")
    scale = float(np.dot(m, s)) / ss
    peak = float(np.max(np.abs(m)))
    if peak == 0.0:
        return scale, 0.0
    rms = math.sqrt(float(np.mean((m - scale * s) ** 2)))
    return scale, rms / peak


def reconstruct_z(trace: AlignmentTrace) -> np.ndarray:
    """<cos^2 theta_z> from the two measured axes: 1 - cos2_x - cos2_y.

    The simulator computes z directly too; this is the experiment's
    reconstruction path, kept as an exercised identity.
    """
    return 1.0 - trace.cos2_x - trace.cos2_y
