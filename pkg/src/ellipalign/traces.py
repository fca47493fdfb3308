"""Time-domain alignment observables on a uniform grid, with CSV I/O."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CSV_HEADER = "t_ps,cos2x,cos2y,cos2z"


@dataclass(frozen=True)
class AlignmentTrace:
    """<cos^2 theta_i>(t) for i = x, y, z on a uniform time grid (ps)."""

    time_grid: np.ndarray
    cos2_x: np.ndarray
    cos2_y: np.ndarray
    cos2_z: np.ndarray

    def __post_init__(self):
        n = len(self.time_grid)
        if not (len(self.cos2_x) == len(self.cos2_y) == len(self.cos2_z) == n):
            raise ValueError("trace components must share the time grid")

    @property
    def dt(self) -> float:
        return float(self.time_grid[1] - self.time_grid[0])

    def component(self, axis: str) -> np.ndarray:
        return {"x": self.cos2_x, "y": self.cos2_y, "z": self.cos2_z}[axis]

    def sum_of_axes(self) -> np.ndarray:
        return self.cos2_x + self.cos2_y + self.cos2_z

    def to_csv(self, path, header_comments: list[str] | None = None) -> None:
        with open(path, "w") as fh:
            for line in header_comments or []:
                fh.write(f"# {line}\n")
            fh.write(CSV_HEADER + "\n")
            for t, x, y, z in zip(
                self.time_grid, self.cos2_x, self.cos2_y, self.cos2_z
            ):
                fh.write(f"{float(t)!r},{float(x)!r},{float(y)!r},{float(z)!r}\n")

def load_trace_csv(path) -> AlignmentTrace:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("t_ps"):
                continue
            rows.append([float(v) for v in line.split(",")])
    data = np.asarray(rows)
    return AlignmentTrace(data[:, 0], data[:, 1], data[:, 2], data[:, 3])
