"""Time-domain reference implementations for the analytic spectra.

This module deliberately avoids the closed-form results it is meant to
check.  It integrates the mode dynamics

    dq/dt = u
    du/dt = -Gamma u - w_j^2 q + R(t) / (rho0 V),   <R R'> = 2 D delta

with the exact Gaussian transition of the linear SDE: over a step dt the
state propagates as x' = Phi x + xi with Phi = exp(A dt) and xi drawn from
the exact transition covariance Sigma(dt) = P_inf - Phi P_inf Phi^T.  The
update is distributionally exact for any dt, so timestep refinement changes
statistics only through sampling noise, never through bias; the stability
guard below merely keeps spectra well resolved.

Randomness: numpy Philox (counter-based) generators, one independent
stream per ensemble member derived with SeedSequence.spawn; Gaussian
variates from Generator.standard_normal (ziggurat).  Identical
configurations therefore reproduce bit-identical statistics.  Ensemble
reductions use compensated summation so results do not depend on member
order.

PSD estimates follow the package convention (see ``noise``): two-sided in
angular frequency, variance = two-sided integral of the PSD with measure
dw / pi.  ``series_variance`` is the discrete counterpart used for
Parseval checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sp_signal
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .acoustics import CONVENTION_TWO_SIDED, SpectrumSeries
from .quantities import Scenario, sound_speed

__all__ = [
    "ThermalForcing",
    "FreeDecay",
    "SdeRunConfig",
    "TrajectoryStats",
    "DrivenModeResult",
    "StabilityGuardViolated",
    "InsufficientStatistics",
    "SegmentTooShort",
    "NotConverged",
    "transition",
    "integrate_langevin",
    "estimate_psd",
    "series_variance",
    "trajectory_csv",
    "integrate_driven",
]

# dt * max(damping, mode frequency) must stay at or below this
STABILITY_LIMIT = 0.05

# run length required before stationary statistics are trusted
MIN_STATIONARY_DURATIONS = 50.0

_CHUNK_STEPS = 16384  # fixed so the random stream split never varies


class StabilityGuardViolated(ValueError):
    """Timestep too coarse for the fastest rate in the dynamics."""


class InsufficientStatistics(ValueError):
    """Ensemble or duration too small for stationary statistics."""


class SegmentTooShort(ValueError):
    """Not enough samples for the requested spectral segment length."""


class NotConverged(RuntimeError):
    """Driven steady state still drifting between demodulation windows."""


@dataclass(frozen=True)
class ThermalForcing:
    """Stochastic forcing, diffusion D = rho0 V Gamma k T unless overridden."""

    diffusion: float | None = None


@dataclass(frozen=True)
class FreeDecay:
    """No forcing: deterministic relaxation from an initial condition."""

    initial_position: float = 0.0
    initial_velocity: float = 0.0


@dataclass(frozen=True)
class SdeRunConfig:
    """One stochastic (or decay) integration run.

    mode_omega may be zero, in which case the velocity is an
    Ornstein-Uhlenbeck process and the position a free integral of it.
    burn_in defaults to 10 dampings for thermal runs and 0 for decay runs.
    psd_nperseg enables a Welch PSD of the run (pressure amplitude for
    mode_omega > 0, velocity otherwise).
    """

    timestep: float
    duration: float
    seed: int
    ensemble_size: int
    mode_omega: float
    damping: float
    forcing: ThermalForcing | FreeDecay = field(default_factory=ThermalForcing)
    burn_in: float | None = None
    acf_max_lag: float | None = None
    psd_nperseg: int | None = None
    keep_samples: bool = False

    def validate(self) -> None:
        if not (self.timestep > 0.0) or not (self.duration > 0.0):
            raise ValueError("timestep and duration must be positive")
        if not (self.damping > 0.0) or self.mode_omega < 0.0:
            raise ValueError("damping must be positive, mode_omega non-negative")
        rate = max(self.damping, self.mode_omega)
        if self.timestep * rate > STABILITY_LIMIT * (1.0 + 1e-12):
            raise StabilityGuardViolated(
                f"timestep {self.timestep:g} times fastest rate {rate:g} "
                f"exceeds the stability limit {STABILITY_LIMIT}")
        if isinstance(self.forcing, ThermalForcing):
            if self.ensemble_size < 2:
                raise InsufficientStatistics(
                    "need at least 2 ensemble members to estimate errors")
            if self.duration * self.damping < MIN_STATIONARY_DURATIONS:
                raise InsufficientStatistics(
                    f"duration {self.duration:g} s is below "
                    f"{MIN_STATIONARY_DURATIONS:g}/damping; stationary "
                    "statistics would not be trustworthy")
        elif self.ensemble_size < 1:
            raise ValueError("ensemble_size must be at least 1")


def transition(mode_omega: float, damping: float, sigma2: float,
               dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact transition (Phi, Sigma) of the state (q, u) over one step.

    sigma2 is the white-force PSD strength: du gets sigma dW with
    sigma^2 = 2 D / (rho0 V)^2.  For mode_omega > 0 the transition
    covariance comes from the stationary fixed point,
    Sigma = P_inf - Phi P_inf Phi^T; for mode_omega = 0 the closed
    integrated Ornstein-Uhlenbeck forms are used.
    """
    g = damping
    if mode_omega > 0.0:
        a = np.array([[0.0, 1.0], [-mode_omega**2, -g]])
        phi = expm(a * dt)
        p_inf = np.diag([sigma2 / (2.0 * g * mode_omega**2),
                         sigma2 / (2.0 * g)])
        sig = p_inf - phi @ p_inf @ phi.T
        sig = 0.5 * (sig + sig.T)
        return phi, sig
    decay = math.exp(-g * dt)
    phi = np.array([[1.0, (1.0 - decay) / g], [0.0, decay]])
    s_uu = sigma2 * (1.0 - decay**2) / (2.0 * g)
    s_qu = sigma2 * (1.0 - decay) ** 2 / (2.0 * g**2)
    s_qq = sigma2 / g**2 * (dt - 2.0 * (1.0 - decay) / g
                            + (1.0 - decay**2) / (2.0 * g))
    sig = np.array([[s_qq, s_qu], [s_qu, s_uu]])
    return phi, sig


def _noise_factor(sigma: np.ndarray) -> np.ndarray:
    """Matrix square root of the transition covariance, robust to rounding."""
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(sigma)
        vals = np.clip(vals, 0.0, None)
        return vecs * np.sqrt(vals)


@dataclass(frozen=True)
class TrajectoryStats:
    """Ensemble statistics of one run; arrays retained only if requested."""

    mean_u2: float
    mean_u2_stderr: float
    equipartition_ratio: float     # rho0 V <u^2> / (k T)
    member_mean_u2: np.ndarray
    acf_lags: np.ndarray
    acf: np.ndarray
    psd: SpectrumSeries | None
    n_members: int
    n_samples: int
    timestep: float
    metadata: dict
    velocity: np.ndarray | None = None   # (members, samples) if kept
    position: np.ndarray | None = None


def _member_generators(seed: int, count: int) -> list[np.random.Generator]:
    seq = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.Philox(child))
            for child in seq.spawn(count)]


def integrate_langevin(config: SdeRunConfig, scenario: Scenario) -> TrajectoryStats:
    """Integrate the mode SDE and reduce the ensemble to statistics."""
    config.validate()
    gas = scenario.gas
    k = scenario.constants
    rho_v = gas.density * scenario.cell.volume
    kt = k.k_boltzmann * gas.temperature

    if isinstance(config.forcing, ThermalForcing):
        diffusion = config.forcing.diffusion
        if diffusion is None:
            diffusion = rho_v * config.damping * kt
        sigma2 = 2.0 * diffusion / rho_v**2
        burn_default = 10.0 / config.damping
        x0 = np.zeros((2, config.ensemble_size))
    else:
        sigma2 = 0.0
        burn_default = 0.0
        x0 = np.tile(np.array([[config.forcing.initial_position],
                               [config.forcing.initial_velocity]]),
                     (1, config.ensemble_size))

    burn_in = config.burn_in if config.burn_in is not None else burn_default
    n_burn = int(round(burn_in / config.timestep))
    n_keep = int(round(config.duration / config.timestep))
    if n_keep < 2:
        raise ValueError("duration must cover at least two timesteps")

    phi, sig = transition(config.mode_omega, config.damping, sigma2,
                          config.timestep)
    noise_l = _noise_factor(sig) if sigma2 > 0.0 else None
    gens = _member_generators(config.seed, config.ensemble_size)

    m = config.ensemble_size
    q = np.empty((m, n_keep))
    u = np.empty((m, n_keep))
    x = x0.copy()
    total = n_burn + n_keep
    done = 0
    while done < total:
        span = min(_CHUNK_STEPS, total - done)
        if noise_l is not None:
            z = np.stack([g.standard_normal((span, 2)) for g in gens], axis=2)
        for i in range(span):
            x = phi @ x
            if noise_l is not None:
                x = x + noise_l @ z[i]
            t = done + i
            if t >= n_burn:
                q[:, t - n_burn] = x[0]
                u[:, t - n_burn] = x[1]
        done += span

    member_mean_u2 = np.mean(u**2, axis=1)
    mean_u2 = math.fsum(member_mean_u2.tolist()) / m
    if m > 1:
        stderr = float(np.std(member_mean_u2, ddof=1)) / math.sqrt(m)
    else:
        stderr = float("nan")

    acf_span = (config.acf_max_lag if config.acf_max_lag is not None
                else 5.0 / config.damping)
    n_lags = min(n_keep - 1, int(round(acf_span / config.timestep)))
    acf = _ensemble_acf(u, n_lags)
    lags = np.arange(n_lags + 1) * config.timestep

    psd = None
    if config.psd_nperseg is not None:
        if config.mode_omega > 0.0:
            c = sound_speed(gas)
            samples = gas.density * c * config.mode_omega * q
        else:
            samples = u
        psd = estimate_psd(samples, 1.0 / config.timestep,
                           nperseg=config.psd_nperseg)

    return TrajectoryStats(
        mean_u2=mean_u2,
        mean_u2_stderr=stderr,
        equipartition_ratio=rho_v * mean_u2 / kt,
        member_mean_u2=member_mean_u2,
        acf_lags=lags,
        acf=acf,
        psd=psd,
        n_members=m,
        n_samples=n_keep,
        timestep=config.timestep,
        metadata={
            "rng": "numpy.random.Philox, per-member SeedSequence.spawn",
            "normal_transform": "Generator.standard_normal (ziggurat)",
            "numpy_version": np.__version__,
        },
        velocity=u if config.keep_samples else None,
        position=q if config.keep_samples else None,
    )


def _ensemble_acf(u: np.ndarray, n_lags: int) -> np.ndarray:
    """Unbiased autocovariance averaged over ensemble members via FFT."""
    m, n = u.shape
    nfft = 1 << int(math.ceil(math.log2(2 * n)))
    spec = np.fft.rfft(u, nfft, axis=1)
    corr = np.fft.irfft(spec * np.conj(spec), nfft, axis=1)[:, :n_lags + 1]
    counts = n - np.arange(n_lags + 1)
    per_member = corr / counts
    return np.array([math.fsum(per_member[:, k].tolist()) / m
                     for k in range(n_lags + 1)])


def estimate_psd(samples, sample_rate: float, window: str = "hann",
                 nperseg: int | None = None,
                 noverlap: int | None = None) -> SpectrumSeries:
    """Welch PSD in the package's two-sided-angular convention.

    samples may be (n,) or (members, n); member periodograms are averaged.
    The returned density satisfies variance = integral PSD dw / pi
    (two-sided), i.e. ``series_variance`` of the result approximates the
    time-domain variance.
    """
    x = np.atleast_2d(np.asarray(samples, dtype=float))
    n = x.shape[1]
    if nperseg is None:
        nperseg = min(4096, n)
    if nperseg < 8:
        raise SegmentTooShort("nperseg below 8 cannot resolve anything")
    if nperseg > n:
        raise SegmentTooShort(
            f"nperseg {nperseg} exceeds the {n} samples available")
    freqs, pxx = sp_signal.welch(x, fs=sample_rate, window=window,
                                 nperseg=nperseg, noverlap=noverlap,
                                 detrend="constant", scaling="density",
                                 axis=1)
    mean_pxx = pxx.mean(axis=0)
    # scipy is one-sided per ordinary Hz; ours is two-sided with dw/pi measure
    return SpectrumSeries(2.0 * math.pi * freqs, mean_pxx / 4.0,
                          "power-density", convention=CONVENTION_TWO_SIDED)


def series_variance(series: SpectrumSeries) -> float:
    """Variance implied by a power density on a non-negative frequency grid."""
    if series.kind != "power-density":
        raise ValueError("variance is defined for power densities")
    omega = series.omega
    values = np.asarray(series.values, dtype=float)
    if len(omega) > 1:
        step = np.diff(omega)
        if np.allclose(step, step[0], rtol=1e-9):
            return 2.0 / math.pi * float(np.sum(values) * step[0])
    return 2.0 / math.pi * float(np.trapezoid(values, omega))


def trajectory_csv(stats: TrajectoryStats, member: int = 0) -> str:
    """CSV dump of one retained member trajectory, for diagnostics.

    Times are measured from the end of burn-in.  Requires a run made with
    ``keep_samples=True``.
    """
    if stats.velocity is None or stats.position is None:
        raise ValueError(
            "trajectories were not retained; rerun with keep_samples=True")
    u = stats.velocity[member]
    q = stats.position[member]
    lines = ["t_s,u_m_per_s,q_m"]
    for i in range(stats.n_samples):
        lines.append(f"{(i + 1) * stats.timestep!r},"
                     f"{float(u[i])!r},{float(q[i])!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DrivenModeResult:
    """Steady-state response extracted by quadrature demodulation.

    amplitude is the complex phasor in the exp(-i w t) convention:
    A(t) = Re[amplitude exp(-i w t)].  drift is the relative change of the
    phasor between the last two demodulation windows.
    """

    amplitude: complex
    drift: float
    drive_omega: float


def integrate_driven(mode_omega: float, damping: float, drive_strength: float,
                     drive_omega: float, periods_per_window: int = 20,
                     settle_time: float | None = None,
                     samples_per_period: int = 256,
                     rtol: float = 1e-11) -> DrivenModeResult:
    """Integrate A'' + Gamma A' + w_j^2 A = d/dt[S cos(w t)] to steady state.

    Uses an adaptive Runge-Kutta integration from rest, then demodulates two
    consecutive integer-period windows.  Raises NotConverged if the phasor
    still drifts by more than 0.1% between windows.
    """
    if not (drive_omega > 0.0) or not (damping > 0.0):
        raise ValueError("drive frequency and damping must be positive")
    period = 2.0 * math.pi / drive_omega
    if settle_time is None:
        settle_time = 30.0 / damping

    def rhs(t, y):
        return [y[1], -damping * y[1] - mode_omega**2 * y[0]
                - drive_strength * drive_omega * math.sin(drive_omega * t)]

    window = periods_per_window * period
    t_end = settle_time + 2.0 * window
    n_eval = 2 * periods_per_window * samples_per_period + 1
    t_eval = settle_time + np.linspace(0.0, 2.0 * window, n_eval)
    sol = solve_ivp(rhs, (0.0, t_end), [0.0, 0.0], method="RK45",
                    rtol=rtol, atol=1e-30, t_eval=t_eval, max_step=period / 16)
    if not sol.success:
        raise NotConverged(f"integration failed: {sol.message}")

    half = n_eval // 2
    phasors = []
    for sl in (slice(0, half + 1), slice(half, n_eval)):
        t = sol.t[sl]
        a = sol.y[0][sl]
        ci = 2.0 / window * np.trapezoid(a * np.cos(drive_omega * t), t)
        cq = 2.0 / window * np.trapezoid(a * np.sin(drive_omega * t), t)
        phasors.append(complex(ci, cq))
    drift = abs(phasors[1] - phasors[0]) / max(abs(phasors[1]), 1e-300)
    if drift > 1e-3:
        raise NotConverged(
            f"steady state drifting {drift:.2e} between windows")
    return DrivenModeResult(amplitude=phasors[1], drift=drift,
                            drive_omega=drive_omega)
