"""Line-oriented run configuration: `section.key = value` with mandatory units.

Example
-------
    molecule.preset = co2
    pulse.intensity = 25 TW/cm2
    pulse.fwhm = 100 fs
    pulse.a2 = 0.333333
    temperature.T = 295 K
    grid.t_end = 45 ps
    run.outputs = trace, signal, peaks

Dimensioned values require a unit token; dimensionless values reject one.
Unknown keys are rejected with the offending line number, and every applied
default is echoed to the `ellipalign.config` logger.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from .units import (
    ConfigurationError,
    GridSpec,
    MOLECULE_PRESETS,
    MoleculeSpec,
    PulseSpec,
    TemperatureSpec,
)

log = logging.getLogger("ellipalign.config")

VALID_OUTPUTS = ("trace", "signal", "peaks", "superposition")


class ConfigParseError(ConfigurationError):
    """Malformed or invalid configuration text."""


@dataclass(frozen=True)
class RunConfig:
    molecule: MoleculeSpec
    pulse: PulseSpec
    probe_fwhm: float  # fs
    temperature: TemperatureSpec
    grid: GridSpec
    outputs: tuple
    population_cutoff: float = 1e-6


# unit token -> factor into the canonical unit of the value kind
_UNITS = {
    "intensity": {"W/cm2": 1.0, "GW/cm2": 1e9, "TW/cm2": 1e12},  # -> W/cm2
    "duration_fs": {"fs": 1.0, "ps": 1e3},  # -> fs
    "time_ps": {"ps": 1.0, "fs": 1e-3},  # -> ps
    "temperature": {"K": 1.0},
    "wavenumber": {"cm-1": 1.0},
    "length_nm": {"nm": 1.0},
}

# (section, key) -> value kind; one entry per accepted key
_SCHEMA = {
    ("molecule", "preset"): "string",
    ("molecule", "name"): "string",
    ("molecule", "b"): "wavenumber",
    ("molecule", "dalpha"): "polarizability",
    ("molecule", "even_weight"): "dimensionless",
    ("molecule", "odd_weight"): "dimensionless",
    ("pulse", "intensity"): "intensity",
    ("pulse", "fwhm"): "duration_fs",
    ("pulse", "a2"): "dimensionless",
    ("pulse", "center"): "time_ps",
    ("pulse", "wavelength"): "length_nm",
    ("probe", "fwhm"): "duration_fs",
    ("temperature", "T"): "temperature",
    ("grid", "t_start"): "time_ps",
    ("grid", "t_end"): "time_ps",
    ("grid", "dt"): "time_ps",
    ("grid", "j_max"): "jmax",
    ("ensemble", "cutoff"): "dimensionless",
    ("run", "outputs"): "outputs",
}

_REQUIRED = (("pulse", "intensity"), ("pulse", "a2"))

_DEFAULTS = {
    ("molecule", "preset"): "co2",
    ("pulse", "fwhm"): "100 fs",
    ("pulse", "center"): "0 ps",
    ("pulse", "wavelength"): "800 nm",
    ("probe", "fwhm"): "100 fs",
    ("temperature", "T"): "295 K",
    ("grid", "t_start"): "-1 ps",
    ("grid", "t_end"): "45 ps",
    ("grid", "dt"): "0.02 ps",
    ("grid", "j_max"): "auto",
    ("ensemble", "cutoff"): "1e-6",
    ("run", "outputs"): "trace",
}


def _fail(lineno, key, message):
    where = f"line {lineno}" if lineno else "defaults"
    raise ConfigParseError(f"{where}, key '{key}': {message}")


def _parse_value(kind, raw, key, lineno):
    tokens = raw.split()
    if kind == "string":
        return raw
    if kind == "outputs":
        names = [t.strip() for t in raw.split(",") if t.strip()]
        for n in names:
            if n not in VALID_OUTPUTS:
                _fail(lineno, key, f"unknown output '{n}' (choose from {VALID_OUTPUTS})")
        return tuple(names)
    if kind == "jmax":
        if raw == "auto":
            return "auto"
        if len(tokens) != 1:
            _fail(lineno, key, "expected an integer or 'auto'")
        try:
            return int(tokens[0])
        except ValueError:
            _fail(lineno, key, f"expected an integer or 'auto', got '{raw}'")
    if kind == "dimensionless":
        if len(tokens) != 1:
            _fail(lineno, key, f"dimensionless value must carry no unit, got '{raw}'")
        try:
            return float(tokens[0])
        except ValueError:
            _fail(lineno, key, f"not a number: '{raw}'")
    if kind == "polarizability":
        # the unit tag (A3 or au) is kept, not converted
        if len(tokens) != 2 or tokens[1] not in ("A3", "au"):
            _fail(lineno, key, f"expected '<value> A3' or '<value> au', got '{raw}'")
        try:
            return (float(tokens[0]), tokens[1])
        except ValueError:
            _fail(lineno, key, f"not a number: '{tokens[0]}'")
    units = _UNITS[kind]
    if len(tokens) != 2:
        _fail(lineno, key, f"expected '<value> <unit>' with unit in {sorted(units)}, got '{raw}'")
    try:
        value = float(tokens[0])
    except ValueError:
        _fail(lineno, key, f"not a number: '{tokens[0]}'")
    if tokens[1] not in units:
        _fail(lineno, key, f"unit '{tokens[1]}' not accepted; expected one of {sorted(units)}")
    return value * units[tokens[1]]


def parse_config(text: str) -> RunConfig:
    """Parse configuration text into a validated RunConfig.

    Defaults are applied for omitted optional keys and echoed to the log;
    unknown keys, missing units, and out-of-range values raise
    ConfigParseError naming the key and line.
    """
    seen: dict[tuple, tuple] = {}  # (section, key) -> (raw value, lineno)
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigParseError(f"line {lineno}: expected 'section.key = value'")
        lhs, raw = (s.strip() for s in stripped.split("=", 1))
        if "." not in lhs:
            raise ConfigParseError(
                f"line {lineno}: key '{lhs}' must be qualified as 'section.key'"
            )
        section, key = lhs.split(".", 1)
        if (section, key) not in _SCHEMA:
            raise ConfigParseError(f"line {lineno}: unknown key '{lhs}'")
        if (section, key) in seen:
            raise ConfigParseError(f"line {lineno}: duplicate key '{lhs}'")
        seen[(section, key)] = (raw, lineno)

    for sk in _REQUIRED:
        if sk not in seen:
            raise ConfigParseError(f"missing required key '{sk[0]}.{sk[1]}'")

    custom_molecule = any(s == "molecule" and k != "preset" for s, k in seen)
    values = {}
    for sk, kind in _SCHEMA.items():
        if sk in seen:
            raw, lineno = seen[sk]
        elif sk in _DEFAULTS and not (custom_molecule and sk == ("molecule", "preset")):
            raw, lineno = _DEFAULTS[sk], 0
            log.info("config default applied: %s.%s = %s", sk[0], sk[1], raw)
        else:
            continue
        values[sk] = _parse_value(kind, raw, f"{sk[0]}.{sk[1]}", lineno)

    try:
        if custom_molecule:
            required = [("molecule", "b"), ("molecule", "dalpha")]
            for sk in required:
                if sk not in values:
                    _fail(0, f"{sk[0]}.{sk[1]}", "required for a custom molecule")
            dalpha, unit = values[("molecule", "dalpha")]
            molecule = MoleculeSpec(
                rotational_constant_B=values[("molecule", "b")],
                polarizability_anisotropy=dalpha,
                anisotropy_unit=unit,
                spin_weight_even_J=values.get(("molecule", "even_weight"), 1.0),
                spin_weight_odd_J=values.get(("molecule", "odd_weight"), 1.0),
                name=values.get(("molecule", "name"), "custom"),
            )
        else:
            preset = values[("molecule", "preset")].lower()
            if preset not in MOLECULE_PRESETS:
                lineno = seen.get(("molecule", "preset"), ("", 0))[1]
                _fail(lineno, "molecule.preset", f"unknown preset '{preset}'")
            molecule = MOLECULE_PRESETS[preset]

        pulse = PulseSpec(
            peak_intensity=values[("pulse", "intensity")],
            fwhm_duration=values[("pulse", "fwhm")],
            ellipticity_a2=values[("pulse", "a2")],
            center_time=values[("pulse", "center")],
            wavelength_nm=values[("pulse", "wavelength")],
        )
        grid = GridSpec(
            t_start=values[("grid", "t_start")],
            t_end=values[("grid", "t_end")],
            dt_output=values[("grid", "dt")],
            j_max=values[("grid", "j_max")],
        )
        temperature = TemperatureSpec(values[("temperature", "T")])
        cutoff = values[("ensemble", "cutoff")]
        if not 0.0 < cutoff <= 1e-4:
            _fail(seen.get(("ensemble", "cutoff"), ("", 0))[1], "ensemble.cutoff",
                  f"value {cutoff} outside (0, 1e-4]")
    except ConfigParseError:
        raise
    except ConfigurationError as exc:
        # re-attach the offending line where we can
        raise ConfigParseError(str(exc)) from exc

    return RunConfig(
        molecule=molecule,
        pulse=pulse,
        probe_fwhm=values[("probe", "fwhm")],
        temperature=temperature,
        grid=grid,
        outputs=values[("run", "outputs")],
        population_cutoff=cutoff,
    )


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(serialize(cfg)) == cfg."""
    lines = []
    mol = cfg.molecule
    preset = next(
        (name for name, m in MOLECULE_PRESETS.items() if m == mol), None
    )
    if preset is not None:
        lines.append(f"molecule.preset = {preset}")
    else:
        lines.append(f"molecule.name = {mol.name}")
        lines.append(f"molecule.b = {mol.rotational_constant_B!r} cm-1")
        lines.append(
            f"molecule.dalpha = {mol.polarizability_anisotropy!r} {mol.anisotropy_unit}"
        )
        lines.append(f"molecule.even_weight = {mol.spin_weight_even_J!r}")
        lines.append(f"molecule.odd_weight = {mol.spin_weight_odd_J!r}")
    lines += [
        f"pulse.intensity = {cfg.pulse.peak_intensity!r} W/cm2",
        f"pulse.fwhm = {cfg.pulse.fwhm_duration!r} fs",
        f"pulse.a2 = {cfg.pulse.ellipticity_a2!r}",
        f"pulse.center = {cfg.pulse.center_time!r} ps",
        f"pulse.wavelength = {cfg.pulse.wavelength_nm!r} nm",
        f"probe.fwhm = {cfg.probe_fwhm!r} fs",
        f"temperature.T = {cfg.temperature.temperature!r} K",
        f"grid.t_start = {cfg.grid.t_start!r} ps",
        f"grid.t_end = {cfg.grid.t_end!r} ps",
        f"grid.dt = {cfg.grid.dt_output!r} ps",
        f"grid.j_max = {cfg.grid.j_max}",
        f"ensemble.cutoff = {cfg.population_cutoff!r}",
        f"run.outputs = {', '.join(cfg.outputs)}",
    ]
    return "\n".join(lines) + "\n"


def with_ellipticity(cfg: RunConfig, a2: float) -> RunConfig:
    """Copy of the config with a different pulse ellipticity."""
    return replace(cfg, pulse=replace(cfg.pulse, ellipticity_a2=a2))
