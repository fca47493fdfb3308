"""Field-free alignment of linear molecules by elliptically polarized pulses.

Rigid-rotor wavepacket simulation of the three-axis alignment observables
<cos^2 theta_{x,y,z}>(t) for a thermal ensemble, the cross-defocusing
pump-probe signal model, and the intermediate-field superposition analysis
of alignment alternation at the magic ellipticity a^2 = 1/3.
"""

__version__ = "1.0.0"

from .angular import AXES, BasisIndex, CouplingTable, cos2_elements, quadrature_oracle
from .config import ConfigParseError, RunConfig, parse_config, serialize_config
from .ensemble import (
    EnsembleMember,
    ThermalResult,
    boltzmann_ensemble,
    simulate_alignment,
    thermal_average,
)
from .propagate import (
    BlockBasis,
    PropagationResult,
    TruncationError,
    Wavepacket,
    expectation_cos2,
    propagate_pulse,
)
from .signalmodel import (
    RevivalPeak,
    SignalTrace,
    defocusing_signal,
    fit_scale,
    load_signal_csv,
    reconstruct_z,
    revival_peaks,
)
from .superposition import (
    LinearReference,
    MagicEllipticity,
    approximate_trace,
    compare_superposition,
    magic_ellipticity,
    superposed_trace,
)
from .traces import AlignmentTrace, load_trace_csv
from .units import (
    CO2,
    ConfigurationError,
    GridSpec,
    InternalParams,
    MOLECULE_PRESETS,
    MoleculeSpec,
    PulseSpec,
    TemperatureSpec,
    envelope_squared,
    internal_units,
    lab_units,
)

__all__ = [
    "AXES",
    "AlignmentTrace",
    "BasisIndex",
    "BlockBasis",
    "CO2",
    "ConfigParseError",
    "ConfigurationError",
    "CouplingTable",
    "EnsembleMember",
    "GridSpec",
    "InternalParams",
    "LinearReference",
    "MOLECULE_PRESETS",
    "MagicEllipticity",
    "MoleculeSpec",
    "PropagationResult",
    "PulseSpec",
    "RevivalPeak",
    "RunConfig",
    "SignalTrace",
    "TemperatureSpec",
    "ThermalResult",
    "TruncationError",
    "Wavepacket",
    "approximate_trace",
    "boltzmann_ensemble",
    "compare_superposition",
    "cos2_elements",
    "defocusing_signal",
    "envelope_squared",
    "expectation_cos2",
    "fit_scale",
    "internal_units",
    "lab_units",
    "load_signal_csv",
    "load_trace_csv",
    "magic_ellipticity",
    "parse_config",
    "propagate_pulse",
    "quadrature_oracle",
    "reconstruct_z",
    "revival_peaks",
    "serialize_config",
    "simulate_alignment",
    "superposed_trace",
    "thermal_average",
]
