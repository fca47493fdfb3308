"""Rigid-rotor wavepacket propagation through the pulse.

H(t)/hbar = B J(J+1) - U_peak Lambda^2(t) [(1-2a^2) cos^2(theta_y)
                                           + a^2 (1 - cos^2(theta_z))]

The pulse couples dJ in {0,+-2} and dM in {0,+-2}, so the (J-parity,
M-parity) block of the initial state is conserved and nothing outside it
is ever allocated.  Integration across the pulse window uses an
error-controlled stepper (DOP853) in the interaction picture; outside the
window amplitudes evolve by the analytic phases exp(-i B J(J+1) (t - t_ref)).

Post-pulse observables are represented spectrally: <cos^2 theta_i>(t) is a
static term plus Fourier components at the beat frequencies B(4J+6), which
makes trace evaluation at arbitrary times cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from .angular import AXES, BasisIndex, CouplingTable, cos2_elements
from .traces import AlignmentTrace
from .units import GridSpec, InternalParams, MoleculeSpec, PulseSpec, internal_units

ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
TAIL_TOLERANCE = 1e-8


class TruncationError(RuntimeError):
    """Population reached the top of the J basis; j_max too small."""


class BlockBasis:
    """Ordered (J, M) basis of one conserved parity block, j_min <= J <= j_max.

    A j_min above the parity floor is an internal windowing optimization
    for high-J thermal members; edge populations are checked after every
    propagation.
    """

    def __init__(self, j_parity: int, m_parity: int, j_max: int, j_min: int = 0):
        self.j_parity = j_parity % 2
        self.m_parity = m_parity % 2
        self.j_max = j_max
        lo = max(j_min, self.j_parity)
        if (lo - self.j_parity) % 2:
            lo += 1
        self.j_min = lo
        js, ms = [], []
        for J in range(self.j_min, j_max + 1, 2):
            start = -J if (J - self.m_parity) % 2 == 0 else -J + 1
            for M in range(start, J + 1, 2):
                js.append(J)
                ms.append(M)
        self.J = np.asarray(js, dtype=np.int64)
        self.M = np.asarray(ms, dtype=np.int64)
        self.dim = len(js)
        self.index = {(J, M): i for i, (J, M) in enumerate(zip(js, ms))}

    def energies(self, b_rad: float) -> np.ndarray:
        return b_rad * self.J * (self.J + 1)

    def state_index(self, state: BasisIndex) -> int:
        key = (state.J, state.M)
        if key not in self.index:
            raise ValueError(f"state {state} not in this parity block")
        return self.index[key]

    @classmethod
    def for_state(cls, state: BasisIndex, j_max: int) -> "BlockBasis":
        return cls(state.J % 2, state.M % 2, j_max)


def block_operator(table: CouplingTable, basis: BlockBasis) -> sp.csr_matrix:
    """Restrict a coupling table to a parity block as a sparse CSR matrix."""
    rows, cols, vals = [], [], []
    index = basis.index
    for (J, M, Jp, Mp), v in table.entries.items():
        i = index.get((J, M))
        if i is None:
            continue
        j = index.get((Jp, Mp))
        if j is None:
            continue
        rows.append(i)
        cols.append(j)
        vals.append(v)
    return sp.csr_matrix(
        (vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=np.float64
    )


def block_tables(j_max: int) -> dict[str, CouplingTable]:
    return {axis: cos2_elements(axis, j_max) for axis in AXES}


def interaction_operator(
    params: InternalParams, basis: BlockBasis, form: str = "yz"
) -> sp.csr_matrix:
    """Angle-dependent part of V/(−U_peak Λ²): the two algebraically equal forms.

    "yz": (1-2a^2) cos^2(theta_y) + a^2 (1 - cos^2(theta_z))
    "xy": a^2 cos^2(theta_x) + b^2 cos^2(theta_y)
    """
    a2 = params.a2
    tabs = block_tables(basis.j_max)
    if form == "yz":
        cy = block_operator(tabs["y"], basis)
        cz = block_operator(tabs["z"], basis)
        eye = sp.identity(basis.dim, format="csr")
        op = (1.0 - 2.0 * a2) * cy + a2 * (eye - cz)
    elif form == "xy":
        cx = block_operator(tabs["x"], basis)
        cy = block_operator(tabs["y"], basis)
        op = a2 * cx + (1.0 - a2) * cy
    else:
        raise ValueError(f"unknown interaction form {form!r}")
    return op.tocsr()


def build_hamiltonian(params: InternalParams, basis: BlockBasis, form: str = "yz"):
    """Return H(t) as an operator action (t, psi) -> H(t) psi, in rad/ps."""
    from .units import envelope_squared

    diag = basis.energies(params.b_rad)
    vop = interaction_operator(params, basis, form=form)
    pulse = params.pulse

    def apply(t: float, psi: np.ndarray) -> np.ndarray:
        lam2 = float(envelope_squared(pulse, t))
        return diag * psi - (params.u_peak * lam2) * (vop @ psi)

    return apply


@dataclass(frozen=True)
class Wavepacket:
    """Complex amplitudes over one parity block for one initial state."""

    basis: BlockBasis
    amplitudes: np.ndarray
    initial_state: BasisIndex

    @property
    def j_max(self) -> int:
        return self.basis.j_max

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True)
class PropagationResult:
    trace: AlignmentTrace
    final_amplitudes: Wavepacket
    tail_population: float


class _SpectralObservable:
    """Post-pulse <O>(t) per column as static + beat-frequency components."""

    def __init__(self, op: sp.csr_matrix, basis: BlockBasis, b_rad: float, t_ref: float):
        coo = op.tocoo()
        dj = basis.J[coo.row] - basis.J[coo.col]
        static = dj == 0
        self.static_op = sp.csr_matrix(
            (coo.data[static], (coo.row[static], coo.col[static])), shape=op.shape
        )
        up = dj == 2  # row J = col J + 2
        self.j_values = np.unique(basis.J[coo.col[up]])
        self.up_ops = []
        for v in self.j_values:
            pick = up & (basis.J[coo.col] == v)
            self.up_ops.append(
                sp.csr_matrix(
                    (coo.data[pick], (coo.row[pick], coo.col[pick])), shape=op.shape
                )
            )
        self.freqs = b_rad * (4.0 * self.j_values + 6.0)
        self.t_ref = t_ref

    def coefficients(self, C: np.ndarray):
        """Static term (n,) and beat amplitudes (nfreq, n) for columns C at t_ref."""
        s0 = np.einsum("ij,ij->j", np.conj(C), self.static_op @ C).real
        A = np.empty((len(self.up_ops), C.shape[1]), dtype=np.complex128)
        for k, opk in enumerate(self.up_ops):
            A[k] = np.einsum("ij,ij->j", np.conj(C), opk @ C)
        return s0, A

    def evaluate(self, s0, A, times) -> np.ndarray:
        """(ncols, ntimes) values at times >= t_ref (valid for any t, field-free)."""
        tau = np.asarray(times, dtype=np.float64) - self.t_ref
        phases = np.exp(1j * np.outer(self.freqs, tau))
        return s0[:, None] + 2.0 * np.real(A.T @ phases)


class PulseResponse:
    """Propagation of a set of initial basis states (columns) through the pulse.

    All columns share the parity block, Hamiltonian, and integration; the
    observable machinery evaluates every column at once.
    """

    def __init__(
        self,
        params: InternalParams,
        basis: BlockBasis,
        init_indices,
        window_times=None,
        rtol: float = ODE_RTOL,
        atol: float = ODE_ATOL,
    ):
        self.params = params
        self.basis = basis
        self.init_indices = np.asarray(init_indices, dtype=np.int64)
        self.window = params.pulse_window
        self.t_ref = self.window[1]
        self.diag = basis.energies(params.b_rad)

        w0 = self.window[0]
        if window_times is None:
            window_times = np.empty(0)
        window_times = np.asarray(window_times, dtype=np.float64)
        self.window_times = window_times[
            (window_times >= w0) & (window_times < self.t_ref)
        ]

        n = len(self.init_indices)
        C0 = np.zeros((basis.dim, n), dtype=np.complex128)
        C0[self.init_indices, np.arange(n)] = 1.0

        if params.u_peak == 0.0:
            self.C_end = C0
            # each column is an eigenstate; phases are global per column
            self._window_solutions = [C0 for _ in self.window_times]
        else:
            self.C_end = self._integrate(C0, rtol, atol)

        self._observables = {}
        self._coeffs = {}
        tabs = block_tables(basis.j_max)
        for axis in AXES:
            op = block_operator(tabs[axis], basis)
            obs = _SpectralObservable(op, basis, params.b_rad, self.t_ref)
            self._observables[axis] = (op, obs)
            self._coeffs[axis] = obs.coefficients(self.C_end)

        self.norm_error = float(
            np.max(np.abs(np.sum(np.abs(self.C_end) ** 2, axis=0) - 1.0))
        )
        self.tail_population = self._tail_population()

    def _integrate(self, C0, rtol, atol):
        from .units import envelope_squared

        params, basis = self.params, self.basis
        w0, w1 = self.window
        vop = interaction_operator(params, basis)
        diag = self.diag
        pulse = params.pulse
        u = params.u_peak
        shape = C0.shape

        from ._kernels import make_rhs_kernel

        kernel = make_rhs_kernel(vop)

        def rhs(t, y):
            a = np.ascontiguousarray(y.reshape(shape))
            lam2 = float(envelope_squared(pulse, t))
            phase = np.exp(-1j * diag * (t - w0))
            # fresh buffer: the solver keeps references to returned arrays
            out = np.empty(shape, dtype=np.complex128)
            kernel(phase, a, 1j * u * lam2, out)
            return out.reshape(-1)

        t_eval = np.unique(np.concatenate([self.window_times, [w1]]))
        sol = solve_ivp(
            rhs,
            (w0, w1),
            C0.ravel(),
            method="DOP853",
            rtol=rtol,
            atol=atol,
            t_eval=t_eval,
        )
        if not sol.success:
            raise RuntimeError(f"pulse integration failed: {sol.message}")
        self.n_rhs_evals = sol.nfev

        def to_schroedinger(k):
            a = sol.y[:, k].reshape(shape)
            phase = np.exp(-1j * diag * (sol.t[k] - w0))
            return phase[:, None] * a

        self._window_solutions = [
            to_schroedinger(k) for k, t in enumerate(sol.t) if t < w1
        ]
        return to_schroedinger(len(sol.t) - 1)

    def _tail_population(self) -> float:
        top = np.unique(self.basis.J)[-2:]
        mask = np.isin(self.basis.J, top)
        return float(np.max(np.sum(np.abs(self.C_end[mask]) ** 2, axis=0)))

    @property
    def bottom_population(self) -> float:
        """Population in the two lowest J shells; relevant when j_min > parity."""
        if self.basis.j_min <= 1:
            return 0.0
        bottom = np.unique(self.basis.J)[:2]
        mask = np.isin(self.basis.J, bottom)
        return float(np.max(np.sum(np.abs(self.C_end[mask]) ** 2, axis=0)))

    def amplitudes_at(self, t: float) -> np.ndarray:
        """Field-free amplitudes at t >= window end."""
        phase = np.exp(-1j * self.diag * (t - self.t_ref))
        return phase[:, None] * self.C_end

    def components(self, axis: str, times) -> np.ndarray:
        """<cos^2 theta_axis>(t) for every column, shape (ncols, ntimes).

        Times before the pulse window use the static initial-eigenstate
        value; times inside the window must have been requested via
        `window_times` at construction (the ODE solution is sampled there);
        later times use the analytic free evolution.
        """
        times = np.asarray(times, dtype=np.float64)
        op, obs = self._observables[axis]
        s0, A = self._coeffs[axis]
        out = np.empty((len(self.init_indices), len(times)))

        before = times < self.window[0]
        inside = (~before) & (times < self.t_ref)
        after = times >= self.t_ref

        if np.any(before):
            out[:, before] = op.diagonal()[self.init_indices][:, None]
        if np.any(after):
            out[:, after] = obs.evaluate(s0, A, times[after])
        for k in np.nonzero(inside)[0]:
            pos = np.searchsorted(self.window_times, times[k])
            if pos >= len(self.window_times) or not math.isclose(
                self.window_times[pos], times[k], abs_tol=1e-9
            ):
                raise ValueError(
                    f"t = {times[k]} inside the pulse window was not sampled;"
                    " pass it via window_times"
                )
            C = self._window_solutions[pos]
            out[:, k] = np.einsum("ij,ij->j", np.conj(C), op @ C).real
        return out


def resolve_j_max(
    params: InternalParams,
    initial_j_max: int,
    requested: int | str,
    probe_state: BasisIndex | None = None,
) -> int:
    """Basis size policy.

    Numeric requests are validated against the initial states and used
    as-is (truncation is then checked, not fixed, by the caller).  "auto"
    starts at initial_j_max + 10 and doubles the margin until the tail
    population after a probe propagation drops below TAIL_TOLERANCE.
    """
    if requested != "auto":
        j = int(requested)
        if j < initial_j_max:
            raise ValueError(
                f"j_max = {j} below maximum initially populated J = {initial_j_max}"
            )
        return j

    if probe_state is None:
        probe_state = BasisIndex(initial_j_max, 0)
    margin = 10
    while True:
        j_max = initial_j_max + margin
        basis = BlockBasis.for_state(probe_state, j_max)
        probe = PulseResponse(params, basis, [basis.state_index(probe_state)])
        if probe.tail_population < TAIL_TOLERANCE:
            return j_max
        margin *= 2
        if margin > 4096:
            raise TruncationError("auto j_max did not converge")


def expectation_cos2(wp: Wavepacket, tables: dict, axis: str) -> float:
    """<cos^2 theta_axis> of a normalized wavepacket; real, in [0, 1]."""
    op = block_operator(tables[axis], wp.basis)
    c = wp.amplitudes
    return float(np.real(np.vdot(c, op @ c)))


def propagate_pulse(
    mol: MoleculeSpec,
    pulse: PulseSpec,
    grid: GridSpec,
    initial: BasisIndex,
    rtol: float = ODE_RTOL,
) -> PropagationResult:
    """Propagate one initial |J0,M0> through the pulse and build its trace.

    Raises TruncationError when a fixed j_max leaves >= 1e-8 population in
    the top two J shells at the end of the pulse.
    """
    params = internal_units(mol, pulse)
    j_max = resolve_j_max(params, initial.J, grid.j_max, probe_state=initial)
    basis = BlockBasis.for_state(initial, j_max)
    times = grid.times()
    response = PulseResponse(
        params, basis, [basis.state_index(initial)], window_times=times, rtol=rtol
    )
    if response.tail_population >= TAIL_TOLERANCE:
        raise TruncationError(
            f"tail population {response.tail_population:.2e} at j_max={j_max};"
            " increase j_max or use 'auto'"
        )
    trace = AlignmentTrace(
        times,
        response.components("x", times)[0],
        response.components("y", times)[0],
        response.components("z", times)[0],
    )
    wp = Wavepacket(
        basis=basis,
        amplitudes=response.amplitudes_at(max(times[-1], response.t_ref))[:, 0],
        initial_state=initial,
    )
    return PropagationResult(
        trace=trace, final_amplitudes=wp, tail_population=response.tail_population
    )
