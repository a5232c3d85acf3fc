"""Particle heating, gas-collision cooling, and heat-transfer efficiency.

A particle that absorbs vibrational quanta warms by
dT = f_R N_A hbar(w_p - w_s) / c_v per mole-averaged excitation cycle and
cools by molecular collisions with the buffer gas.  Each collision carries
away of order k T_s, so with N_c collisions per second the temperature
relaxes exponentially with time constant

    tau = (c_v / R) (N_S / N_c) / accommodation

where N_S is the number of excited molecules per particle and the
accommodation coefficient (default 1) absorbs the order-one efficiency of
energy exchange per collision.

Heat reaches the gas, and therefore the acoustic signal, only through the
collisional channel.  Radiation is the competing loss; its timescale is the
deposited energy divided by the blackbody power at the particle's peak
temperature.  When collisions beat both the modulation timescale 1/w and
radiation by a comfortable margin (the dominance ratio, default 10), the
transfer efficiency eta is 1; otherwise the collisional fraction
(1/tau_coll) / (1/tau_coll + 1/tau_rad) applies and a warning is recorded.

The modulation timescale is taken as 1/w, not the full period 2 pi / w,
matching how modulation times are usually quoted for these estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quantities import GasProperties, PhysicalConstants, Scenario

__all__ = [
    "CollisionalCooling",
    "EfficiencyResult",
    "ThermalReport",
    "TIMESCALES_NOT_SEPARATED",
    "collision_rate",
    "temperature_rise",
    "collisional_timescale",
    "radiative_power",
    "transfer_efficiency",
    "thermal_report",
]

TIMESCALES_NOT_SEPARATED = "timescales_not_separated"

DEFAULT_DOMINANCE_RATIO = 10.0


def collision_rate(gas: GasProperties, radius: float,
                   constants: PhysicalConstants | None = None) -> float:
    """Gas-molecule collision rate on a sphere of the given radius, 1/s.

    N_c = P 4 pi r^2 / (2 m_g u_g) with u_g = sqrt(3 k T / m_g) the rms
    molecular speed: flux of momentum-carrying molecules onto the surface.
    """
    k = constants or PhysicalConstants()
    u_g = math.sqrt(3.0 * k.k_boltzmann * gas.temperature / gas.molecule_mass)
    return gas.pressure * 4.0 * math.pi * radius**2 / (2.0 * gas.molecule_mass * u_g)


def temperature_rise(particle_molar_heat: float, raman_fraction: float,
                     raman_shift: float,
                     constants: PhysicalConstants | None = None) -> float:
    """Temperature gained per excitation cycle, K.

    dT = f_R N_A hbar dw / c_v: every active molecule receives one quantum
    hbar dw, a fraction f_R of which is degraded to heat in the particle.
    """
    k = constants or PhysicalConstants()
    return (raman_fraction * k.avogadro * k.hbar * raman_shift
            / particle_molar_heat)


@dataclass(frozen=True)
class CollisionalCooling:
    """Exponential cooling by gas collisions, T(t) = T0 + dT exp(-t/tau)."""

    tau: float  # s

    def excess_temperature(self, initial_rise: float, t: float) -> float:
        return initial_rise * math.exp(-t / self.tau)


def collisional_timescale(molecule_count: float, collisions_per_second: float,
                          molar_heat: float,
                          constants: PhysicalConstants | None = None,
                          accommodation: float = 1.0) -> CollisionalCooling:
    """Cooling time constant tau = (c_v/R)(N_S/N_c)/accommodation."""
    if not (collisions_per_second > 0.0):
        raise ValueError("collision rate must be positive")
    if not (0.0 < accommodation <= 1.0):
        raise ValueError("accommodation coefficient must lie in (0, 1]")
    k = constants or PhysicalConstants()
    tau = (molar_heat / k.gas_constant) * (molecule_count / collisions_per_second)
    return CollisionalCooling(tau=tau / accommodation)


def radiative_power(temperature: float, radius: float,
                    constants: PhysicalConstants | None = None) -> float:
    """Blackbody power radiated by a sphere: sigma T^4 4 pi r^2, W."""
    k = constants or PhysicalConstants()
    return k.stefan_boltzmann * temperature**4 * 4.0 * math.pi * radius**2


@dataclass(frozen=True)
class EfficiencyResult:
    """Heat-transfer efficiency into the gas with its justification.

    eta               fraction of deposited heat reaching the gas in time
    modulation_time   s, 1/w for the scenario's modulation frequency
    drive_separation      modulation_time / tau_coll
    radiative_separation  tau_rad / tau_coll
    chain_separation      tau_rad / modulation_time
    warnings          list of warning codes (empty when eta == 1)
    """

    eta: float
    modulation_time: float
    drive_separation: float
    radiative_separation: float
    chain_separation: float
    warnings: tuple[str, ...]


def transfer_efficiency(tau_collisional: float, tau_radiative: float,
                        modulation_omega: float,
                        dominance_ratio: float = DEFAULT_DOMINANCE_RATIO
                        ) -> EfficiencyResult:
    """Fraction of deposited heat that reaches the gas within a cycle.

    eta = 1 when collisions dominate: tau_coll shorter than the modulation
    timescale AND shorter than the radiative timescale, both by at least
    the dominance ratio.  Otherwise the collisional branching fraction is
    returned and a warning is recorded.
    """
    if not (tau_collisional > 0.0) or not (tau_radiative > 0.0):
        raise ValueError("timescales must be positive")
    if not (modulation_omega > 0.0):
        raise ValueError("modulation frequency must be positive")
    t_mod = 1.0 / modulation_omega
    drive_sep = t_mod / tau_collisional
    rad_sep = tau_radiative / tau_collisional
    chain_sep = tau_radiative / t_mod
    if drive_sep >= dominance_ratio and rad_sep >= dominance_ratio:
        return EfficiencyResult(1.0, t_mod, drive_sep, rad_sep, chain_sep, ())
    eta = tau_radiative / (tau_radiative + tau_collisional)
    return EfficiencyResult(eta, t_mod, drive_sep, rad_sep, chain_sep,
                            (TIMESCALES_NOT_SEPARATED,))


@dataclass(frozen=True)
class ThermalReport:
    """Full thermal chain for one scenario."""

    collision_rate: float        # 1/s, at the particle's equivalent radius
    temperature_rise: float      # K
    peak_temperature: float      # K, ambient plus the rise
    collisional_timescale: float  # s
    deposited_energy: float      # J per particle per cycle
    radiative_power: float       # W at the peak temperature
    radiative_timescale: float   # s
    efficiency: EfficiencyResult

    @property
    def eta(self) -> float:
        return self.efficiency.eta

    @property
    def warnings(self) -> tuple[str, ...]:
        return self.efficiency.warnings


def thermal_report(scenario: Scenario,
                   dominance_ratio: float = DEFAULT_DOMINANCE_RATIO,
                   accommodation: float = 1.0) -> ThermalReport:
    """Evaluate the whole heating/cooling chain for a scenario."""
    particle = scenario.particle
    gas = scenario.gas
    k = scenario.constants

    n_c = collision_rate(gas, particle.equivalent_radius, k)
    d_t = temperature_rise(particle.molar_heat, particle.raman_fraction,
                           scenario.laser.raman_shift, k)
    cooling = collisional_timescale(particle.molecule_count, n_c,
                                    particle.molar_heat, k, accommodation)
    peak_t = gas.temperature + d_t
    p_rad = radiative_power(peak_t, particle.equivalent_radius, k)
    e_dep = particle.molecule_count * k.hbar * scenario.laser.raman_shift
    tau_rad = e_dep / p_rad
    eff = transfer_efficiency(cooling.tau, tau_rad,
                              scenario.laser.modulation_omega, dominance_ratio)
    return ThermalReport(
        collision_rate=n_c,
        temperature_rise=d_t,
        peak_temperature=peak_t,
        collisional_timescale=cooling.tau,
        deposited_energy=e_dep,
        radiative_power=p_rad,
        radiative_timescale=tau_rad,
        efficiency=eff,
    )
