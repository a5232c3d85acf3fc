"""Physical constants, scenario data model, and validation.

Unit discipline
---------------
Everything is SI internally.  All frequencies are angular (rad/s); scenario
files may carry ordinary frequencies with an ``_hz`` key suffix, which the
file reader converts on ingestion.  The one deliberate exception is the
Raman transition linewidth: linewidths are conventionally quoted in
ordinary Hz and the ``linewidth_hz`` field keeps that convention (see
``raman`` for how the ambiguity is handled inside the gain formula).

A ``Scenario`` is a dumb record; nothing is checked at construction time so
that values parsed from external input can be assembled first and examined
afterwards.  ``validate_scenario`` performs the checks and reports every
violation at once instead of stopping at the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "HBAR",
    "K_BOLTZMANN",
    "AVOGADRO",
    "GAS_CONSTANT",
    "STEFAN_BOLTZMANN",
    "SPEED_OF_LIGHT",
    "ATOMIC_MASS",
    "PhysicalConstants",
    "GasProperties",
    "CellGeometry",
    "LaserDrive",
    "ParticleSpec",
    "DetectorNoiseSpec",
    "Scenario",
    "Violation",
    "ScenarioValidationError",
    "validate_scenario",
    "sound_speed",
    "optimal_cell_radius",
]

# CODATA 2018, exact where the SI defines them so
HBAR = 1.054571817e-34        # J s
K_BOLTZMANN = 1.380649e-23    # J/K
AVOGADRO = 6.02214076e23      # 1/mol
GAS_CONSTANT = K_BOLTZMANN * AVOGADRO   # J/(mol K)
STEFAN_BOLTZMANN = 5.670374419e-8       # W/(m^2 K^4)
SPEED_OF_LIGHT = 2.99792458e8           # m/s
ATOMIC_MASS = 1.66053906660e-27         # kg


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants used throughout; overridable for tests."""

    hbar: float = HBAR
    k_boltzmann: float = K_BOLTZMANN
    avogadro: float = AVOGADRO
    gas_constant: float = GAS_CONSTANT
    stefan_boltzmann: float = STEFAN_BOLTZMANN


@dataclass(frozen=True)
class GasProperties:
    """Buffer gas filling the acoustic cell.

    pressure        Pa
    temperature     K
    density         kg/m^3
    gamma           ratio of specific heats (dimensionless, > 1)
    molecule_mass   kg, mass of one gas molecule
    """

    pressure: float
    temperature: float
    density: float
    gamma: float
    molecule_mass: float


@dataclass(frozen=True)
class CellGeometry:
    """Cylindrical acoustic cell with rigid walls.

    length              m, along the optical axis
    radius              m
    detector_coverage   fraction of the signal the detector actually sees,
                        in (0, 1]; 1 means ideal coupling
    """

    length: float
    radius: float
    detector_coverage: float = 1.0

    @property
    def volume(self) -> float:
        """Cell volume pi r^2 l, recomputed on read so it can never go stale."""
        return math.pi * self.radius**2 * self.length


@dataclass(frozen=True)
class LaserDrive:
    """Pump and Stokes beams plus the intensity modulation.

    pump_omega        rad/s, angular optical frequency of the pump
    stokes_omega      rad/s, angular optical frequency of the Stokes beam
    pump_intensity    W/m^2
    stokes_intensity  W/m^2
    refractive_index  of the medium at the Stokes frequency (>= 1)
    modulation_omega  rad/s, angular frequency of the intensity modulation
    """

    pump_omega: float
    stokes_omega: float
    pump_intensity: float
    stokes_intensity: float
    refractive_index: float = 1.0
    modulation_omega: float = 100.0

    @property
    def raman_shift(self) -> float:
        """Angular frequency difference pump minus Stokes, rad/s."""
        return self.pump_omega - self.stokes_omega


@dataclass(frozen=True)
class ParticleSpec:
    """Target particle (e.g. a bacterial spore) and its Raman-active content.

    volume              m^3, particle volume
    molecule_count      number of Raman-active molecules in one particle
    raman_fraction      fraction of deposited vibrational quanta degraded to
                        heat inside the particle, in (0, 1]
    active_density      1/m^3, number density of Raman-active molecules in
                        the particle material
    raman_cross_section m^2/sr, differential Raman cross section
    linewidth_hz        Hz (ordinary), Raman transition linewidth
    collisional_rate    1/s, vibrational decay into heat (collisional)
    radiative_rate      1/s, vibrational decay by re-radiation
    molar_heat          J/(mol K), heat capacity of the particle material
    radius_override     m, optional; replaces the volume-equivalent radius
    """

    volume: float
    molecule_count: float
    raman_fraction: float
    active_density: float
    raman_cross_section: float
    linewidth_hz: float
    collisional_rate: float
    radiative_rate: float
    molar_heat: float
    radius_override: float | None = None

    @property
    def equivalent_radius(self) -> float:
        """Radius of the volume-equivalent sphere, unless overridden."""
        if self.radius_override is not None:
            return self.radius_override
        return (3.0 * self.volume / (4.0 * math.pi)) ** (1.0 / 3.0)

    @property
    def radius_is_derived(self) -> bool:
        return self.radius_override is None


@dataclass(frozen=True)
class DetectorNoiseSpec:
    """Resonant pressure detector (microphone) parameters.

    noise_mode_omega  rad/s, angular frequency of the detector's lowest
                      resonant mode, the one that dominates thermal noise
    noise_damping     1/s, damping rate of that noise mode
    signal_damping    1/s, damping rate acting on the detected signal mode
    """

    noise_mode_omega: float
    noise_damping: float
    signal_damping: float

    @property
    def quality_factor(self) -> float:
        return self.noise_mode_omega / self.noise_damping


@dataclass(frozen=True)
class Scenario:
    """Complete description of one measurement configuration."""

    gas: GasProperties
    cell: CellGeometry
    laser: LaserDrive
    particle: ParticleSpec
    detector: DetectorNoiseSpec
    spore_density: float | None = None
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)


# violation codes, stable strings used by tests and the CLI
NEGATIVE_QUANTITY = "negative_quantity"
STOKES_NOT_BELOW_PUMP = "stokes_not_below_pump"
GAMMA_NOT_ABOVE_ONE = "gamma_not_above_one"
INCONSISTENT_DERIVED_FIELD = "inconsistent_derived_field"
OUT_OF_RANGE = "out_of_range"


@dataclass(frozen=True)
class Violation:
    code: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message} [{self.code}]"


class ScenarioValidationError(ValueError):
    """Raised with the complete list of violations, not just the first."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid scenario: {lines}")


def _check_positive(out: list[Violation], prefix: str, **values: float) -> None:
    for name, value in values.items():
        if not (value > 0.0) or not math.isfinite(value):
            out.append(Violation(NEGATIVE_QUANTITY, f"{prefix}.{name}",
                                 f"must be finite and > 0, got {value!r}"))


def _check_nonnegative(out: list[Violation], prefix: str, **values: float) -> None:
    for name, value in values.items():
        if not (value >= 0.0) or not math.isfinite(value):
            out.append(Violation(NEGATIVE_QUANTITY, f"{prefix}.{name}",
                                 f"must be finite and >= 0, got {value!r}"))


def validate_scenario(scenario: Scenario) -> Scenario:
    """Check a scenario candidate, returning it if sound.

    Raises ScenarioValidationError carrying every violation found.  Derived
    quantities (cell volume, particle equivalent radius, sound speed) are
    implemented as recompute-on-read, so a validated scenario cannot drift
    out of internal consistency afterwards.
    """
    v: list[Violation] = []
    gas, cell, laser, particle, det = (scenario.gas, scenario.cell,
                                       scenario.laser, scenario.particle,
                                       scenario.detector)

    _check_positive(v, "gas", pressure=gas.pressure, temperature=gas.temperature,
                    density=gas.density, molecule_mass=gas.molecule_mass)
    if not (gas.gamma > 1.0):
        v.append(Violation(GAMMA_NOT_ABOVE_ONE, "gas.gamma",
                           f"heat capacity ratio must exceed 1, got {gas.gamma!r}"))

    _check_positive(v, "cell", length=cell.length, radius=cell.radius)
    if not (0.0 < cell.detector_coverage <= 1.0):
        v.append(Violation(OUT_OF_RANGE, "cell.detector_coverage",
                           f"must lie in (0, 1], got {cell.detector_coverage!r}"))

    _check_positive(v, "laser", pump_omega=laser.pump_omega,
                    stokes_omega=laser.stokes_omega)
    _check_nonnegative(v, "laser", pump_intensity=laser.pump_intensity,
                       stokes_intensity=laser.stokes_intensity,
                       modulation_omega=laser.modulation_omega)
    if not (laser.refractive_index >= 1.0):
        v.append(Violation(OUT_OF_RANGE, "laser.refractive_index",
                           f"must be >= 1, got {laser.refractive_index!r}"))
    if not (laser.pump_omega > laser.stokes_omega):
        v.append(Violation(STOKES_NOT_BELOW_PUMP, "laser.stokes_omega",
                           "Stokes frequency must lie below the pump frequency"))

    _check_positive(v, "particle", volume=particle.volume,
                    molecule_count=particle.molecule_count,
                    linewidth_hz=particle.linewidth_hz,
                    molar_heat=particle.molar_heat)
    _check_nonnegative(v, "particle", active_density=particle.active_density,
                       raman_cross_section=particle.raman_cross_section,
                       collisional_rate=particle.collisional_rate,
                       radiative_rate=particle.radiative_rate)
    if not (0.0 < particle.raman_fraction <= 1.0):
        v.append(Violation(OUT_OF_RANGE, "particle.raman_fraction",
                           f"must lie in (0, 1], got {particle.raman_fraction!r}"))
    if not (particle.collisional_rate + particle.radiative_rate > 0.0):
        v.append(Violation(OUT_OF_RANGE, "particle.collisional_rate",
                           "collisional and radiative decay rates cannot both vanish"))
    if particle.radius_override is not None:
        _check_positive(v, "particle", radius_override=particle.radius_override)

    _check_positive(v, "detector", noise_mode_omega=det.noise_mode_omega,
                    noise_damping=det.noise_damping,
                    signal_damping=det.signal_damping)

    if scenario.spore_density is not None:
        _check_nonnegative(v, "scenario", spore_density=scenario.spore_density)

    k = scenario.constants
    expected_r = k.k_boltzmann * k.avogadro
    if abs(k.gas_constant - expected_r) > 1e-12 * expected_r:
        v.append(Violation(
            INCONSISTENT_DERIVED_FIELD, "constants.gas_constant",
            f"gas constant {k.gas_constant!r} disagrees with k_B * N_A = {expected_r!r}"))

    if v:
        raise ScenarioValidationError(v)
    return scenario


def sound_speed(gas: GasProperties) -> float:
    """Adiabatic sound speed c = sqrt(gamma p / rho)."""
    return math.sqrt(gas.gamma * gas.pressure / gas.density)


def optimal_cell_radius(wavelength: float, length: float) -> float:
    """Cell radius matching a focused Gaussian beam over the cell length.

    r = sqrt(lambda l / pi): the radius at which the cell just contains the
    diffraction-limited beam over its full length, minimizing dead volume.
    """
    if not (wavelength > 0.0) or not (length > 0.0):
        raise ValueError("wavelength and length must both be positive")
    return math.sqrt(wavelength * length / math.pi)
