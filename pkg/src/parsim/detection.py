"""Minimum detectable particle density: signal chain against the noise floor.

A suspension of rho_S particles per unit volume, each of volume V_S and
heated at density H_R with transfer efficiency eta, produces the available
volumetric heating

    H = rho_S eta H_R V_S.

Setting H equal to the noise-equivalent heating H_nep sqrt(Gamma_s), the
floor integrated over the detection bandwidth, gives the detection limit

    rho_min = snr * H_nep sqrt(Gamma_s) / (eta H_R V_S).

Guards: intensities at or above the cascade-breakdown threshold of the gas
are flagged, as is a detection limit so low that fewer than a handful of
particles would occupy the cell (the continuum-suspension picture breaks
down there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import noise, raman, thermal
from .quantities import Scenario

__all__ = [
    "DetectionReport",
    "BREAKDOWN_RISK",
    "SPARSE_SUSPENSION",
    "NEP_CONVENTION_NOTE",
    "BREAKDOWN_INTENSITY",
    "SPARSE_COUNT_LIMIT",
    "available_power_density",
    "breakdown_guard",
    "sparse_regime_flag",
    "min_density",
]

BREAKDOWN_RISK = "cascade_breakdown_risk"
SPARSE_SUSPENSION = "sparse_suspension_limit"
NEP_CONVENTION_NOTE = "nep_two_sided_angular_convention"

# laser cascade breakdown of air sets in around this intensity, W/m^2
BREAKDOWN_INTENSITY = 1e16

# fewer expected particles than this in the cell breaks the continuum picture
SPARSE_COUNT_LIMIT = 10.0


def available_power_density(spore_density: float, eta: float, h_r: float,
                            particle_volume: float) -> float:
    """Volumetric heating available from a particle suspension, W/m^3."""
    return spore_density * eta * h_r * particle_volume


def breakdown_guard(pump_intensity: float, stokes_intensity: float,
                    threshold: float = BREAKDOWN_INTENSITY) -> bool:
    """True when either beam risks cascade breakdown of the buffer gas."""
    return max(pump_intensity, stokes_intensity) >= threshold


def sparse_regime_flag(density: float, cell_volume: float,
                       minimum_count: float = SPARSE_COUNT_LIMIT) -> bool:
    """True when the cell would hold too few particles for a continuum model."""
    return density * cell_volume < minimum_count


@dataclass(frozen=True)
class DetectionReport:
    """Detection limit with its full intermediate trace."""

    rho_min: float               # 1/m^3
    h_r: float                   # W/m^3 heating density inside the particle
    eta: float                   # heat-transfer efficiency
    h_nep: float                 # W m^-3 s^(1/2)
    bandwidth_root: float        # sqrt(Gamma_s), s^(-1/2)
    intensity_product: float     # I_p I_s, W^2/m^4
    h_available: float | None    # W/m^3 at the scenario's own density, if given
    snr: float
    warnings: tuple[str, ...]
    gain: raman.RamanGainResult
    deposition: raman.HeatDeposition
    thermal: thermal.ThermalReport
    nep: noise.NepResult


def min_density(scenario: Scenario, snr: float = 1.0,
                linewidth_convention: str = "ordinary") -> DetectionReport:
    """Minimum detectable particle density for one scenario.

    snr scales the required signal-to-noise ratio (1 means signal equal to
    the integrated noise floor).
    """
    if not (snr > 0.0):
        raise ValueError("snr must be positive")
    laser = scenario.laser
    if laser.pump_intensity * laser.stokes_intensity <= 0.0:
        raise ValueError("both beam intensities must be positive to detect anything")

    gain = raman.gain_coefficient(scenario, linewidth_convention)
    deposition = raman.heat_source_density(scenario, gain)
    therm = thermal.thermal_report(scenario)
    floor = noise.nep(scenario, laser.modulation_omega)

    root_bw = math.sqrt(scenario.detector.signal_damping)
    signal_per_density = (therm.eta * deposition.h_r * scenario.particle.volume
                          * scenario.cell.detector_coverage)
    rho_min = snr * floor.h_nep * root_bw / signal_per_density

    warnings: list[str] = []
    if breakdown_guard(laser.pump_intensity, laser.stokes_intensity):
        warnings.append(BREAKDOWN_RISK)
    warnings.extend(therm.warnings)
    warnings.extend(floor.warnings)
    if sparse_regime_flag(rho_min, scenario.cell.volume):
        warnings.append(SPARSE_SUSPENSION)
    warnings.append(NEP_CONVENTION_NOTE)

    h_avail = None
    if scenario.spore_density is not None:
        h_avail = available_power_density(scenario.spore_density, therm.eta,
                                          deposition.h_r,
                                          scenario.particle.volume)
    return DetectionReport(
        rho_min=rho_min,
        h_r=deposition.h_r,
        eta=therm.eta,
        h_nep=floor.h_nep,
        bandwidth_root=root_bw,
        intensity_product=laser.pump_intensity * laser.stokes_intensity,
        h_available=h_avail,
        snr=snr,
        warnings=tuple(warnings),
        gain=gain,
        deposition=deposition,
        thermal=therm,
        nep=floor,
    )
