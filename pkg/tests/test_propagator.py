"""Propagator checks: perturbation-theory oracle, symmetries, free evolution."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from ellipalign import (
    CO2,
    BasisIndex,
    BlockBasis,
    GridSpec,
    PulseSpec,
    TruncationError,
    cos2_elements,
    envelope_squared,
    internal_units,
    propagate_pulse,
)
from ellipalign.propagate import (
    PulseResponse,
    block_operator,
    build_hamiltonian,
    interaction_operator,
    resolve_j_max,
)


def test_interaction_forms_agree():
    """(1-2a^2) cos2y + a^2 (1-cos2z) equals a^2 cos2x + b^2 cos2y."""
    params = internal_units(CO2, PulseSpec(25e12, 100.0, 0.3))
    basis = BlockBasis(0, 0, 20)
    v1 = interaction_operator(params, basis, form="yz").toarray()
    v2 = interaction_operator(params, basis, form="xy").toarray()
    assert np.max(np.abs(v1 - v2)) < 1e-14
    with pytest.raises(ValueError):
        interaction_operator(params, basis, form="zz")


def test_weak_field_matches_perturbation_theory():
    """First-order TDPT oracle for the populated amplitudes, 1% accuracy.

    For a weak pulse from |0,0>, the amplitude driven into |f> is
    |c_f| = U |V_f0| |integral Lambda^2(t) exp(i w_f0 t) dt| with the
    Gaussian integral known in closed form.
    """
    pulse = PulseSpec(peak_intensity=0.01e12, fwhm_duration=100.0, ellipticity_a2=0.25)
    params = internal_units(CO2, pulse)
    basis = BlockBasis(0, 0, 8)
    response = PulseResponse(params, basis, [basis.index[(0, 0)]])
    c = response.C_end[:, 0]

    vop = interaction_operator(params, basis).toarray()
    tau = pulse.fwhm_ps
    gauss_area = tau * math.sqrt(math.pi / (4.0 * math.log(2.0)))
    checked = 0
    for k in range(basis.dim):
        J, M = basis.J[k], basis.M[k]
        if (J, M) == (0, 0):
            continue
        omega = params.b_rad * J * (J + 1)
        predicted = (
            params.u_peak
            * abs(vop[k, basis.index[(0, 0)]])
            * gauss_area
            * math.exp(-(omega * tau) ** 2 / (16.0 * math.log(2.0)))
        )
        if predicted > 1e-5:
            assert abs(c[k]) == pytest.approx(predicted, rel=0.01), (J, M)
            checked += 1
    assert checked >= 3  # (2,0), (2,+-2) are populated at a^2 = 0.25


def test_norm_conserved_strong_field(single_state_run):
    result = single_state_run(0.25)
    assert result.final_amplitudes.norm == pytest.approx(1.0, abs=1e-9)


def test_sum_rule_single_state(single_state_run):
    trace = single_state_run(0.25).trace
    assert np.max(np.abs(trace.sum_of_axes() - 1.0)) < 1e-10


def test_trace_periodicity(single_state_run):
    """Post-pulse trace repeats with period pi/B to machine precision."""
    result = single_state_run(1.0 / 3.0)
    params = internal_units(CO2, PulseSpec(25e12, 100.0, 1.0 / 3.0))
    t0 = np.linspace(1.0, 1.0 + params.revival_period, 500)
    basis = result.final_amplitudes.basis
    # rebuild the response observables through propagate_pulse's trace is
    # grid-bound; use the spectral evaluator via a fresh PulseResponse
    response = PulseResponse(params, basis, [basis.index[(0, 0)]])
    for axis in ("x", "y", "z"):
        a = response.components(axis, t0)
        b = response.components(axis, t0 + params.revival_period)
        assert np.max(np.abs(a - b)) < 1e-9


def test_free_evolution_matches_direct_integration():
    """Analytic phase evolution after the pulse vs brute-force ODE."""
    pulse = PulseSpec(1e12, 100.0, 0.25)
    params = internal_units(CO2, pulse)
    basis = BlockBasis(0, 0, 10)
    response = PulseResponse(params, basis, [basis.index[(0, 0)]])
    h = build_hamiltonian(params, basis)

    t1 = response.t_ref + 2.0
    sol = solve_ivp(
        lambda t, y: -1j * h(t, y),
        (response.t_ref, t1),
        response.C_end[:, 0],
        method="DOP853",
        rtol=1e-11,
        atol=1e-13,
    )
    analytic = response.amplitudes_at(t1)[:, 0]
    assert np.max(np.abs(sol.y[:, -1] - analytic)) < 1e-8


def test_before_window_uses_initial_eigenstate():
    pulse = PulseSpec(25e12, 100.0, 0.0)
    params = internal_units(CO2, pulse)
    basis = BlockBasis(0, 0, 30)
    response = PulseResponse(params, basis, [basis.index[(2, 0)]])
    val = response.components("z", np.array([-2.0]))[0, 0]
    assert val == pytest.approx(11.0 / 21.0, abs=1e-14)


def test_unsampled_window_time_raises():
    pulse = PulseSpec(25e12, 100.0, 0.0)
    params = internal_units(CO2, pulse)
    basis = BlockBasis(0, 0, 30)
    response = PulseResponse(params, basis, [basis.index[(0, 0)]])
    with pytest.raises(ValueError, match="window"):
        response.components("y", np.array([0.0]))


def test_truncation_error_on_fixed_j_max():
    grid = GridSpec(t_start=-1.0, t_end=2.0, dt_output=0.02, j_max=6)
    pulse = PulseSpec(25e12, 100.0, 0.0)
    with pytest.raises(TruncationError):
        propagate_pulse(CO2, pulse, grid, BasisIndex(0, 0))


def test_resolve_j_max_validates_numeric():
    params = internal_units(CO2, PulseSpec(1e12, 100.0, 0.0))
    with pytest.raises(ValueError):
        resolve_j_max(params, initial_j_max=10, requested=8)
    assert resolve_j_max(params, 10, 40) == 40


def test_resolve_j_max_auto_converges():
    params = internal_units(CO2, PulseSpec(25e12, 100.0, 0.0))
    j = resolve_j_max(params, 0, "auto", probe_state=BasisIndex(0, 0))
    basis = BlockBasis(0, 0, j)
    probe = PulseResponse(params, basis, [basis.index[(0, 0)]])
    assert probe.tail_population < 1e-8


def test_circular_x_equals_y(single_state_run):
    """a^2 = 1/2 treats x and y identically; exact for every column."""
    trace = single_state_run(0.5).trace
    assert np.max(np.abs(trace.cos2_x - trace.cos2_y)) < 1e-12


def test_linear_x_equals_z(single_state_run):
    """a^2 = 0 has the field along y; x and z are equivalent."""
    trace = single_state_run(0.0).trace
    assert np.max(np.abs(trace.cos2_x - trace.cos2_z)) < 1e-10


def test_block_basis_structure():
    basis = BlockBasis(0, 0, 6)
    # even J, even M: J = 0, 2, 4, 6 contribute 1 + 3 + 5 + 7 states
    assert basis.dim == 16
    assert basis.state_index(BasisIndex(4, -2)) >= 0
    with pytest.raises(ValueError):
        basis.state_index(BasisIndex(3, 0))
    windowed = BlockBasis(0, 0, 10, j_min=4)
    assert windowed.j_min == 4
    assert np.min(windowed.J) == 4


def test_block_operator_is_symmetric():
    table = cos2_elements("x", 10)
    basis = BlockBasis(0, 0, 10)
    op = block_operator(table, basis)
    assert np.max(np.abs((op - op.T).toarray())) < 1e-15


def test_zero_intensity_is_static():
    pulse = PulseSpec(0.0, 100.0, 0.0)
    grid = GridSpec(t_start=-1.0, t_end=5.0, dt_output=0.1, j_max=10)
    result = propagate_pulse(CO2, pulse, grid, BasisIndex(2, 2))
    trace = result.trace
    for axis in ("x", "y", "z"):
        vals = trace.component(axis)
        assert np.max(np.abs(vals - vals[0])) < 1e-12
