"""parsim: detection limits for photoacoustic Raman sensing of aerosols.

The package models one detection chain end to end: stimulated Raman
pumping of marker molecules inside a micron-scale particle, collisional
transfer of the deposited heat into the surrounding gas, the acoustic
response of a closed cylindrical cell, the thermodynamic pressure noise
of the readout mode, and the resulting minimum detectable particle
density.  ``oracle`` integrates the stochastic mode dynamics in the time
domain to keep the analytic spectra honest, and ``cli`` exposes it all
as a command line tool.

Unit discipline: SI throughout; every frequency is angular (rad/s)
unless a name says otherwise (``linewidth_hz``).
"""

from .quantities import (
    ATOMIC_MASS,
    AVOGADRO,
    GAS_CONSTANT,
    HBAR,
    K_BOLTZMANN,
    SPEED_OF_LIGHT,
    STEFAN_BOLTZMANN,
    CellGeometry,
    DetectorNoiseSpec,
    GasProperties,
    LaserDrive,
    ParticleSpec,
    PhysicalConstants,
    Scenario,
    ScenarioValidationError,
    Violation,
    optimal_cell_radius,
    sound_speed,
    validate_scenario,
)
from .raman import (
    gain_coefficient,
    heat_source_density,
    population_factor,
    stokes_amplification,
)
from .thermal import (
    collision_rate,
    collisional_timescale,
    radiative_power,
    temperature_rise,
    thermal_report,
    transfer_efficiency,
)
from .acoustics import (
    AcousticMode,
    BeamCylinder,
    HeatSourceField,
    PointSources,
    PulseTrainEnvelope,
    SinusoidalEnvelope,
    SpectrumSeries,
    UniformCell,
    cylinder_modes,
    mode_overlap,
    pressure_field,
    signal_spectrum,
    spectrum_csv,
)
from .noise import (
    diffusion_coefficient,
    mode_noise_budget,
    nep,
    noise_spectrum,
    velocity_correlation,
)
from .detection import DetectionReport, min_density
from .oracle import (
    FreeDecay,
    SdeRunConfig,
    ThermalForcing,
    estimate_psd,
    integrate_driven,
    integrate_langevin,
    series_variance,
    trajectory_csv,
    transition,
)
from .presets import anthrax_stp, build_preset, preset_names
from .scenario_io import (
    load_scenario,
    loads_scenario,
    scenario_hash,
    write_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # constants
    "ATOMIC_MASS", "AVOGADRO", "GAS_CONSTANT", "HBAR", "K_BOLTZMANN",
    "SPEED_OF_LIGHT", "STEFAN_BOLTZMANN",
    # scenario types
    "CellGeometry", "DetectorNoiseSpec", "GasProperties", "LaserDrive",
    "ParticleSpec", "PhysicalConstants", "Scenario",
    "ScenarioValidationError", "Violation",
    "optimal_cell_radius", "sound_speed", "validate_scenario",
    # physics
    "gain_coefficient", "heat_source_density", "population_factor",
    "stokes_amplification",
    "collision_rate", "collisional_timescale", "radiative_power",
    "temperature_rise", "thermal_report", "transfer_efficiency",
    "AcousticMode", "BeamCylinder", "HeatSourceField", "PointSources",
    "PulseTrainEnvelope", "SinusoidalEnvelope", "SpectrumSeries",
    "UniformCell", "cylinder_modes", "mode_overlap", "pressure_field",
    "signal_spectrum", "spectrum_csv",
    "diffusion_coefficient", "mode_noise_budget", "nep", "noise_spectrum",
    "velocity_correlation",
    "DetectionReport", "min_density",
    # oracle
    "FreeDecay", "SdeRunConfig", "ThermalForcing", "estimate_psd",
    "integrate_driven", "integrate_langevin", "series_variance",
    "trajectory_csv", "transition",
    # scenarios
    "anthrax_stp", "build_preset", "preset_names",
    "load_scenario", "loads_scenario", "scenario_hash", "write_scenario",
]
