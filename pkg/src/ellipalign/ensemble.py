"""Boltzmann-weighted ensemble of initial states and thermal averaging.

Members sharing a (J-parity, M-parity) block also share the Hamiltonian,
so the driver propagates each block once with one column per member and
averages with the Boltzmann weights.  The reduction order is fixed
(ascending J0, then M0) so results are bit-reproducible regardless of
scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .angular import AXES, BasisIndex
from .propagate import (
    TAIL_TOLERANCE,
    BlockBasis,
    PulseResponse,
    TruncationError,
    resolve_j_max,
)
from .traces import AlignmentTrace
from .units import (
    GridSpec,
    MoleculeSpec,
    PulseSpec,
    TemperatureSpec,
    boltzmann_exponent_scale,
    internal_units,
)

DEFAULT_POPULATION_CUTOFF = 1e-6
J0_BATCH_WIDTH = 12  # J0 span propagated together inside one J window


def _batch_by_j0(block_members, width: int):
    """Split a parity block into contiguous-J0 batches of the given span."""
    members = sorted(block_members, key=lambda m: (m.initial.J, m.initial.M))
    batches = []
    for m in members:
        if batches and m.initial.J - batches[-1][0].initial.J < width:
            batches[-1].append(m)
        else:
            batches.append([m])
    return batches


@dataclass(frozen=True)
class EnsembleMember:
    initial: BasisIndex
    weight: float


def _spin_weight(mol: MoleculeSpec, J: int) -> float:
    return mol.spin_weight_even_J if J % 2 == 0 else mol.spin_weight_odd_J


def boltzmann_ensemble(
    mol: MoleculeSpec,
    temperature: float | TemperatureSpec,
    population_cutoff: float = DEFAULT_POPULATION_CUTOFF,
) -> list[EnsembleMember]:
    """Thermal (J0, M0) members with nuclear-spin weights, renormalized to 1.

    Levels are included in ascending J until the excluded population falls
    below `population_cutoff`; the weight of each (J0, M0) is uniform over
    the 2J0+1 sublevels of its J0.
    """
    if isinstance(temperature, TemperatureSpec):
        temperature = temperature.temperature
    if not 0.0 < population_cutoff <= 1e-4:
        raise ValueError("population_cutoff must be in (0, 1e-4]")
    if temperature < 0:
        raise ValueError("temperature must be >= 0")

    if temperature == 0:
        j0 = 0 if mol.spin_weight_even_J > 0 else 1
        w = 1.0 / (2 * j0 + 1)
        return [EnsembleMember(BasisIndex(j0, M), w) for M in range(-j0, j0 + 1)]

    scale = boltzmann_exponent_scale(mol, temperature)
    # level weights g_J (2J+1) exp(-scale J(J+1)) until terms are negligible
    level = {}
    J = 0
    while True:
        g = _spin_weight(mol, J)
        bare = (2 * J + 1) * math.exp(-scale * J * (J + 1))
        if g > 0:
            level[J] = g * bare
        if J > 2 and bare < 1e-18 * max(level.values(), default=1.0):
            break
        J += 1
    Z = sum(level.values())

    members = []
    included = 0.0
    for J in sorted(level):
        if 1.0 - included / Z < population_cutoff:
            break
        included += level[J]
        w_jm = level[J] / (Z * (2 * J + 1))
        for M in range(-J, J + 1):
            members.append(EnsembleMember(BasisIndex(J, M), w_jm))

    total = sum(m.weight for m in members)
    return [EnsembleMember(m.initial, m.weight / total) for m in members]


def thermal_average(
    members: list[EnsembleMember], per_state_traces: list[AlignmentTrace]
) -> AlignmentTrace:
    """Weighted sample-wise mean of per-state traces sharing one grid."""
    if len(members) != len(per_state_traces):
        raise ValueError("one trace per member required")
    grid = per_state_traces[0].time_grid
    for tr in per_state_traces[1:]:
        if len(tr.time_grid) != len(grid) or not np.array_equal(tr.time_grid, grid):
            raise ValueError("per-state traces must share one time grid")
    w = np.array([m.weight for m in members])
    x = w @ np.stack([tr.cos2_x for tr in per_state_traces])
    y = w @ np.stack([tr.cos2_y for tr in per_state_traces])
    z = w @ np.stack([tr.cos2_z for tr in per_state_traces])
    return AlignmentTrace(grid, x, y, z)


@dataclass
class ThermalResult:
    """Thermally averaged alignment with cheap post-pulse evaluation.

    `trace` covers the requested grid; `evaluate(times)` returns the three
    components at arbitrary field-free times (>= end of the pulse window)
    from the thermally summed spectral coefficients.
    """

    trace: AlignmentTrace
    t_ref: float
    window: tuple[float, float]
    b_rad: float
    members: list[EnsembleMember]
    _static: dict = field(repr=False, default=None)
    _beats: dict = field(repr=False, default=None)  # axis -> (freqs, coeffs)
    diagnostics: dict = field(default_factory=dict)

    def evaluate(self, times) -> dict[str, np.ndarray]:
        times = np.asarray(times, dtype=np.float64)
        if np.any(times < self.t_ref):
            raise ValueError("evaluate() is valid only after the pulse window")
        out = {}
        for axis in AXES:
            freqs, coeffs = self._beats[axis]
            phases = np.exp(1j * np.outer(freqs, times - self.t_ref))
            out[axis] = self._static[axis] + 2.0 * np.real(coeffs @ phases)
        return out


def _propagate_block(
    params, j_parity, m_parity, margin, j_cap, block_members, times, rtol
):
    """Propagate one J0 batch of a parity block inside a windowed J range.

    The window [min J0 - margin, max J0 + margin] is widened (doubling the
    margin) until the populations at both J edges are below tolerance; a
    hard cap `j_cap` (user-fixed j_max) is never exceeded upward.
    """
    j0_lo = min(m.initial.J for m in block_members)
    j0_hi = max(m.initial.J for m in block_members)
    weights = np.array([m.weight for m in block_members])

    while True:
        j_hi = j0_hi + margin
        if j_cap is not None:
            j_hi = min(j_hi, j_cap)
        basis = BlockBasis(j_parity, m_parity, j_hi, j_min=j0_lo - margin)
        indices = [basis.state_index(m.initial) for m in block_members]
        response = PulseResponse(params, basis, indices, window_times=times, rtol=rtol)
        top_ok = response.tail_population < TAIL_TOLERANCE
        bottom_ok = response.bottom_population < TAIL_TOLERANCE
        if top_ok and bottom_ok:
            break
        at_cap = j_cap is not None and j_hi == j_cap
        if not top_ok and at_cap:
            raise TruncationError(
                f"tail population {response.tail_population:.2e} at fixed"
                f" j_max={j_cap}; increase j_max or use 'auto'"
            )
        margin *= 2

    comps = {axis: weights @ response.components(axis, times) for axis in AXES}
    static, beats = {}, {}
    for axis in AXES:
        s0, A = response._coeffs[axis]
        obs = response._observables[axis][1]
        static[axis] = float(weights @ s0)
        beats[axis] = (obs.j_values.copy(), A @ weights)
    diag = {
        "dim": basis.dim,
        "ncols": len(indices),
        "j_window": (basis.j_min, basis.j_max),
        "tail_population": response.tail_population,
        "norm_error": response.norm_error,
        "n_rhs_evals": getattr(response, "n_rhs_evals", 0),
    }
    return comps, static, beats, diag


def simulate_alignment(
    mol: MoleculeSpec,
    pulse: PulseSpec,
    grid: GridSpec,
    temperature: float | TemperatureSpec = 295.0,
    population_cutoff: float = DEFAULT_POPULATION_CUTOFF,
    fold_m: bool = True,
    workers: int = 1,
    rtol: float = 1e-10,
) -> ThermalResult:
    """Full pipeline: thermal ensemble -> per-block propagation -> average.

    With `fold_m` (default) only M0 >= 0 columns are propagated and M0 > 0
    weights are doubled; the +-M0 traces are identical by reflection
    symmetry (verified to 1e-12 in the test suite).
    """
    params = internal_units(mol, pulse)
    members = boltzmann_ensemble(mol, temperature, population_cutoff)
    members.sort(key=lambda m: (m.initial.J, m.initial.M))
    thermal_j_max = max(m.initial.J for m in members)

    j_max = resolve_j_max(
        params, thermal_j_max, grid.j_max, probe_state=BasisIndex(thermal_j_max, 0)
    )

    if fold_m:
        prop_members = [
            EnsembleMember(m.initial, m.weight * (2.0 if m.initial.M > 0 else 1.0))
            for m in members
            if m.initial.M >= 0
        ]
    else:
        prop_members = members

    blocks: dict[tuple[int, int], list[EnsembleMember]] = {}
    for m in prop_members:
        blocks.setdefault((m.initial.J % 2, m.initial.M % 2), []).append(m)

    margin = max(j_max - thermal_j_max, 4)
    j_cap = None if grid.j_max == "auto" else int(grid.j_max)
    times = grid.times()
    tasks = []
    for (jp, mp), blk in sorted(blocks.items()):
        for batch in _batch_by_j0(blk, width=J0_BATCH_WIDTH):
            tasks.append((params, jp, mp, margin, j_cap, batch, times, rtol))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_propagate_block_star, tasks))
    else:
        results = [_propagate_block(*t) for t in tasks]

    comps = {axis: np.zeros(len(times)) for axis in AXES}
    static = {axis: 0.0 for axis in AXES}
    beat_acc: dict[str, dict[int, complex]] = {axis: {} for axis in AXES}
    diagnostics = {"j_max": j_max, "blocks": []}
    worst_tail = 0.0
    for comp_b, static_b, beats_b, diag_b in results:
        for axis in AXES:
            comps[axis] += comp_b[axis]
            static[axis] += static_b[axis]
            jvals, coeffs = beats_b[axis]
            acc = beat_acc[axis]
            for jv, cv in zip(jvals, coeffs):
                acc[int(jv)] = acc.get(int(jv), 0.0) + cv
        diagnostics["blocks"].append(diag_b)
        worst_tail = max(worst_tail, diag_b["tail_population"])
    diagnostics["tail_population"] = worst_tail

    beats = {}
    for axis in AXES:
        jvals = np.array(sorted(beat_acc[axis]))
        coeffs = np.array([beat_acc[axis][j] for j in jvals])
        beats[axis] = (params.b_rad * (4.0 * jvals + 6.0), coeffs)

    trace = AlignmentTrace(times, comps["x"], comps["y"], comps["z"])
    return ThermalResult(
        trace=trace,
        t_ref=params.pulse_window[1],
        window=params.pulse_window,
        b_rad=params.b_rad,
        members=members,
        _static=static,
        _beats=beats,
        diagnostics=diagnostics,
    )


def _propagate_block_star(args):
    return _propagate_block(*args)
