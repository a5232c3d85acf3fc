"""Stimulated Raman gain and the heat it deposits in particle material.

A Stokes beam crossing a medium of Raman-active molecules grows as
n_s(z) = n_s(0) exp(g z).  For Stokes-type stimulated scattering the gain
coefficient is

    g = [8 pi^2 N v_s^2 / (hbar w_s^3 dnu)] (dsigma/dOmega) I_p f_pop

where N is the active molecule density, v_s = c0/n the Stokes phase
velocity, w_s the angular Stokes frequency, dnu the transition linewidth,
dsigma/dOmega the differential cross section, I_p the pump intensity and
f_pop = 1 - exp(-hbar (w_p - w_s) / k T) the thermal population contrast
between the two vibrational levels.

Linewidth convention: quoted Raman linewidths are ordinary frequencies in
Hz while w_s here is angular, so the formula is ambiguous by a factor of
2 pi depending on how dnu is read.  Both readings are supported through
``linewidth_convention``: "ordinary" uses the quoted Hz value as is (the
default), "angular" multiplies it by 2 pi.  Results record which reading
produced them.

Of the optical power transferred from pump to Stokes, the fraction
(w_p - w_s)/w_s is left behind in the medium as vibrational quanta; the
share of those quanta that decays collisionally (rate Gamma_c against
radiative rate Gamma_r) becomes heat.  That is the photoacoustic source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quantities import SPEED_OF_LIGHT, Scenario

__all__ = [
    "RamanGainResult",
    "StokesAmplification",
    "HeatDeposition",
    "LINEWIDTH_CONVENTIONS",
    "gain_coefficient",
    "stokes_amplification",
    "heat_source_density",
]

LINEWIDTH_CONVENTIONS = ("ordinary", "angular")

# |g z| above which the linearized exp(gz) ~ 1 + gz is no longer trusted
SMALL_GAIN_LIMIT = 0.01


@dataclass(frozen=True)
class RamanGainResult:
    """Gain of the Stokes beam through the Raman-active medium.

    gain                 1/m, g at the scenario's pump intensity
    gain_factor          m/W, G = g / I_p, independent of intensity
    population_factor    dimensionless thermal level contrast in [0, 1]
    stokes_velocity      m/s, phase velocity at the Stokes frequency
    linewidth_convention which reading of the quoted linewidth was used
    """

    gain: float
    gain_factor: float
    population_factor: float
    stokes_velocity: float
    linewidth_convention: str


@dataclass(frozen=True)
class StokesAmplification:
    """Photon number after traversing a path through the gain medium."""

    exact: float          # n_s0 * exp(g z)
    linearized: float     # n_s0 * (1 + g z)
    small_gain: bool      # True when |g z| is small enough to linearize


@dataclass(frozen=True)
class HeatDeposition:
    """Volumetric heating of the particle medium by the Raman process.

    h_r              W/m^3, heat deposited per unit volume of particle medium
    deposition_rate  W/m^3, energy left as vibrational quanta before the
                     collisional/radiative branching is applied
    branching        Gamma_c / (Gamma_c + Gamma_r), fraction degraded to heat
    """

    h_r: float
    deposition_rate: float
    branching: float


def population_factor(raman_shift: float, temperature: float, hbar: float,
                      k_boltzmann: float) -> float:
    """Thermal population contrast 1 - exp(-hbar dw / kT), in [0, 1]."""
    x = hbar * raman_shift / (k_boltzmann * temperature)
    return -math.expm1(-x)


def gain_coefficient(scenario: Scenario,
                     linewidth_convention: str = "ordinary") -> RamanGainResult:
    """Stimulated Raman gain coefficient for the scenario's beams and medium."""
    if linewidth_convention not in LINEWIDTH_CONVENTIONS:
        raise ValueError(f"unknown linewidth convention {linewidth_convention!r}; "
                         f"expected one of {LINEWIDTH_CONVENTIONS}")
    laser = scenario.laser
    particle = scenario.particle
    k = scenario.constants

    v_s = SPEED_OF_LIGHT / laser.refractive_index
    dnu = particle.linewidth_hz
    if linewidth_convention == "angular":
        dnu = 2.0 * math.pi * dnu

    f_pop = population_factor(laser.raman_shift, scenario.gas.temperature,
                              k.hbar, k.k_boltzmann)
    gain_factor = (8.0 * math.pi**2 * particle.active_density * v_s**2
                   * particle.raman_cross_section * f_pop
                   / (k.hbar * laser.stokes_omega**3 * dnu))
    return RamanGainResult(
        gain=gain_factor * laser.pump_intensity,
        gain_factor=gain_factor,
        population_factor=f_pop,
        stokes_velocity=v_s,
        linewidth_convention=linewidth_convention,
    )


def stokes_amplification(gain: float, path_length: float,
                         initial_photons: float = 1.0) -> StokesAmplification:
    """Stokes photon number growth over a straight path of given length."""
    gz = gain * path_length
    return StokesAmplification(
        exact=initial_photons * math.exp(gz),
        linearized=initial_photons * (1.0 + gz),
        small_gain=abs(gz) <= SMALL_GAIN_LIMIT,
    )


def heat_source_density(scenario: Scenario,
                        gain: RamanGainResult) -> HeatDeposition:
    """Heat deposited per unit volume of particle medium, W/m^3.

    The Stokes beam gains G I_p I_s per unit length; the fraction
    (w_p - w_s)/w_s of the transferred power stays in the medium, and the
    collisional branch of the vibrational decay turns it into heat.
    """
    laser = scenario.laser
    particle = scenario.particle
    total_rate = particle.collisional_rate + particle.radiative_rate
    if total_rate <= 0.0:
        raise ValueError("collisional and radiative decay rates cannot both vanish")
    branching = particle.collisional_rate / total_rate

    deposition_rate = (laser.raman_shift / laser.stokes_omega
                       * gain.gain_factor
                       * laser.pump_intensity * laser.stokes_intensity)
    return HeatDeposition(
        h_r=branching * deposition_rate,
        deposition_rate=deposition_rate,
        branching=branching,
    )
