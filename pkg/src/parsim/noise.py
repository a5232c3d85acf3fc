"""Thermal (Brownian) pressure noise in the cell and the detection floor.

Fluctuation-dissipation
-----------------------
The gas in the cell behaves as a damped oscillator bathed in molecular
noise.  With damping rate Gamma_n the Langevin force R(t) obeys
<R(t) R(t')> = 2 D delta(t - t') with

    D = rho0 V Gamma_n k T,

fixed by requiring equipartition, rho0 V <u^2> = k T, for the velocity-like
mode coordinate u.  Its stationary autocorrelation is
<u(t) u(t')> = [D / ((rho0 V)^2 Gamma_n)] exp(-Gamma_n |t - t'|).

Spectral convention
-------------------
With the Fourier convention A(t) = integral dw exp(-i w t) A(w), the force
correlator reads <R(w) R(w')> = (D / pi) delta(w + w').  All power spectral
densities in this package are two-sided in angular frequency, normalized so
that the variance is the two-sided integral with measure dw / pi:

    <x^2> = integral_{-inf}^{inf} PSD_x(w) dw / pi.

Under that convention the thermal pressure-amplitude noise of a detector
mode at w_j is

    PSD_A(w) = rho0 c^2 w_j^2 Gamma_n k T / {V [(w_j^2 - w^2)^2 + (w Gamma_n)^2]}

whose plain two-sided integral with measure dw / 2 pi is rho0 c^2 k T / (2 V)
independently of w_j (half the variance, as the measure implies).  The
stochastic integrator in ``oracle`` reproduces this density pointwise,
which is what pins the normalization.

Noise-equivalent heating
------------------------
Equating the uniform-mode signal response at modulation frequency w to the
noise floor of the lowest detector mode (w << w_1) gives the detectable
volume-integrated heating per root bandwidth,

    V H_nep = sqrt[V Gamma_n rho0 c^2 k T (w^2 + Gamma_s^2)] / (w_1 (gamma - 1))

in W s^(1/2); dividing by V gives the heating density floor in
W m^-3 s^(1/2).  The small-modulation assumption w << w_1 is checked and
flagged, not enforced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .acoustics import CONVENTION_TWO_SIDED, SpectrumSeries
from .quantities import Scenario, sound_speed

__all__ = [
    "NoiseSpectrumResult",
    "NepResult",
    "MODULATION_NOT_SMALL",
    "diffusion_coefficient",
    "velocity_correlation",
    "noise_spectrum",
    "nep",
    "mode_noise_budget",
]

MODULATION_NOT_SMALL = "modulation_not_small"

# w above this fraction of the detector mode frequency gets flagged
_SMALL_MODULATION_FRACTION = 0.1


def diffusion_coefficient(scenario: Scenario) -> float:
    """Langevin force strength D = rho0 V Gamma_n k T, N^2 s."""
    return (scenario.gas.density * scenario.cell.volume
            * scenario.detector.noise_damping
            * scenario.constants.k_boltzmann * scenario.gas.temperature)


def velocity_correlation(scenario: Scenario, lag: float) -> float:
    """Stationary <u(t) u(t + lag)> of the mode velocity, m^2/s^2.

    Equals [D / ((rho0 V)^2 Gamma_n)] exp(-Gamma_n |lag|); at zero lag this
    is k T / (rho0 V), the equipartition value.
    """
    rho_v = scenario.gas.density * scenario.cell.volume
    d = diffusion_coefficient(scenario)
    gamma_n = scenario.detector.noise_damping
    return d / (rho_v**2 * gamma_n) * math.exp(-gamma_n * abs(lag))


def _thermal_psd(omega, mode_omega: float, scenario: Scenario):
    gas = scenario.gas
    c2 = gas.gamma * gas.pressure / gas.density
    num = (gas.density * c2 * mode_omega**2 * scenario.detector.noise_damping
           * scenario.constants.k_boltzmann * gas.temperature)
    w = np.asarray(omega, dtype=float)
    den = scenario.cell.volume * ((mode_omega**2 - w**2) ** 2
                                  + (w * scenario.detector.noise_damping) ** 2)
    return num / den


@dataclass(frozen=True)
class NoiseSpectrumResult:
    """Thermal noise PSD of one detector mode on a frequency grid.

    variance_on_grid integrates the PSD over the grid with the package's
    dw / pi two-sided measure (even extension); it approaches the full
    variance rho0 c^2 k T / V as the grid covers the spectral support.
    """

    diffusion: float
    mode_omega: float
    spectrum: SpectrumSeries
    variance_on_grid: float


def noise_spectrum(mode_omega: float, scenario: Scenario,
                   omega_grid) -> NoiseSpectrumResult:
    """Thermal pressure-amplitude PSD of a detector mode at mode_omega."""
    if mode_omega < 0.0:
        raise ValueError("mode frequency cannot be negative")
    grid = np.asarray(omega_grid, dtype=float)
    values = _thermal_psd(grid, mode_omega, scenario)
    series = SpectrumSeries(grid, values, "power-density",
                            convention=CONVENTION_TWO_SIDED)
    variance = 2.0 / math.pi * float(np.trapezoid(values, grid))
    return NoiseSpectrumResult(
        diffusion=diffusion_coefficient(scenario),
        mode_omega=mode_omega,
        spectrum=series,
        variance_on_grid=variance,
    )


def mode_noise_budget(mode_omegas, scenario: Scenario,
                      analysis_omega: float) -> np.ndarray:
    """PSD contribution of each given mode at the analysis frequency.

    Diagnostic for the single-mode approximation: the first detector mode
    should dominate the sum at signal frequencies.
    """
    omegas = np.asarray(mode_omegas, dtype=float)
    return np.array([
        float(_thermal_psd(analysis_omega, wj, scenario)) for wj in omegas])


@dataclass(frozen=True)
class NepResult:
    """Noise-equivalent heating floor at a given modulation frequency.

    vh_nep  W s^(1/2), volume-integrated heating per root bandwidth
    h_nep   W m^-3 s^(1/2), heating density per root bandwidth
    """

    vh_nep: float
    h_nep: float
    modulation_omega: float
    small_modulation: bool
    warnings: tuple[str, ...]


def nep(scenario: Scenario, modulation_omega: float | None = None) -> NepResult:
    """Noise-equivalent volumetric heating, evaluated against the lowest
    detector mode's thermal noise floor."""
    if modulation_omega is None:
        modulation_omega = scenario.laser.modulation_omega
    if modulation_omega < 0.0:
        raise ValueError("modulation frequency cannot be negative")
    gas = scenario.gas
    det = scenario.detector
    c = sound_speed(gas)
    v = scenario.cell.volume
    vh = math.sqrt(v * det.noise_damping * gas.density * c**2
                   * scenario.constants.k_boltzmann * gas.temperature
                   * (modulation_omega**2 + det.signal_damping**2)) \
        / (det.noise_mode_omega * (gas.gamma - 1.0))
    small = modulation_omega <= _SMALL_MODULATION_FRACTION * det.noise_mode_omega
    warnings = () if small else (MODULATION_NOT_SMALL,)
    return NepResult(
        vh_nep=vh,
        h_nep=vh / v,
        modulation_omega=modulation_omega,
        small_modulation=small,
        warnings=warnings,
    )
