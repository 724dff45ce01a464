"""Downlink budget: shadowed free-space loss, EIRP, G/T, noise and CNR.

All quantities are in the dB domain. The stochastic shadowing term is an
additive dB offset drawn per Monte Carlo iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from leotco.errors import InvalidInputError
from leotco.geometry import DEFAULT_CONSTANTS, PhysicalConstants

# 20*log10(4*pi*1e3*1e9/c) rounded: the km/GHz form of the FSPL identity.
FSPL_CONSTANT_DB = 92.45


@dataclass(frozen=True)
class ShadowingModel:
    """Lognormal shadowing offset in dB.

    ``mu`` and ``sigma`` are the target mean and standard deviation of the
    dB offset itself (not of the underlying normal). The underlying normal is
    moment-matched to them::

        s² = ln(1 + (sigma/mu)²)
        m  = ln(mu) - s²/2

    and each draw ``exp(N(m, s))`` is clipped to ``[clip_low, clip_high]``.
    The clip bounds the heavy right tail, so the realised moments are lower
    than the targets: for mu=1, sigma=7.8 the clipped offset has mean
    ~0.881 dB and std ~3.11 dB (see :meth:`clipped_moments`).

    ``sigma == 0`` is the degenerate point mass at ``mu``.
    """

    mu: float = 1.0
    sigma: float = 7.8
    clip_low: float = 0.0
    clip_high: float = 40.0

    def __post_init__(self) -> None:
        if not self.sigma >= 0 or not math.isfinite(self.sigma):
            raise InvalidInputError(f"shadowing sigma must be >= 0, got {self.sigma}")
        if self.sigma > 0 and not self.mu > 0:
            raise InvalidInputError(f"lognormal shadowing needs mu > 0, got {self.mu}")
        if self.mu < 0:
            raise InvalidInputError(f"shadowing mu must be >= 0, got {self.mu}")
        if not self.clip_low <= self.clip_high:
            raise InvalidInputError("clip_low must not exceed clip_high")

    @property
    def log_sigma(self) -> float:
        return math.sqrt(math.log1p((self.sigma / self.mu) ** 2)) if self.sigma else 0.0

    @property
    def log_mu(self) -> float:
        return math.log(self.mu) - self.log_sigma**2 / 2 if self.sigma else 0.0

    def clipped_moments(self) -> tuple[float, float]:
        """Analytic mean and std of the clipped offset.

        Uses the lognormal partial moments
        ``E[X^k; a<X<b] = exp(k m + k² s²/2) [Φ((ln b - m - k s²)/s) - Φ((ln a - m - k s²)/s)]``
        plus the point masses at the clip bounds.
        """
        if self.sigma == 0:
            v = min(max(self.mu, self.clip_low), self.clip_high)
            return v, 0.0
        m, s = self.log_mu, self.log_sigma
        phi = NormalDist().cdf
        lo, hi = max(self.clip_low, 0.0), self.clip_high
        ln_lo = math.log(lo) if lo > 0 else -math.inf
        ln_hi = math.log(hi) if math.isfinite(hi) else math.inf

        def z(x: float, k: int) -> float:
            return phi((x - m - k * s * s) / s) if math.isfinite(x) else float(x > 0)

        def partial(k: int) -> float:
            return math.exp(k * m + k * k * s * s / 2) * (z(ln_hi, k) - z(ln_lo, k))

        p_lo, p_hi = z(ln_lo, 0), 1.0 - z(ln_hi, 0)
        m1 = partial(1) + lo * p_lo + (hi * p_hi if p_hi else 0.0)
        m2 = partial(2) + lo * lo * p_lo + (hi * hi * p_hi if p_hi else 0.0)
        return m1, math.sqrt(max(m2 - m1 * m1, 0.0))


@dataclass(frozen=True)
class ReceiverNoiseModel:
    noise_figure: float = 1.2  # dB
    ambient_temperature: float = 290.0  # K
    antenna_temperature: float = 290.0  # K
    other_losses: float = 18.84  # dB, aggregate of everything not itemised
    system_temperature: float = 290.0  # K
    bandwidth: float = 250e6  # Hz

    def __post_init__(self) -> None:
        for name in ("ambient_temperature", "antenna_temperature", "system_temperature", "bandwidth"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")
        if not self.other_losses >= 0:
            raise InvalidInputError("other_losses must be >= 0")
        if not math.isfinite(self.noise_figure):
            raise InvalidInputError("noise_figure must be finite")


@dataclass(frozen=True)
class LinkBudgetDraw:
    shadowing_db: float
    fspl_db: float
    eirp_dbw: float
    g_over_t: float
    other_losses_db: float
    noise_dbw: float
    cnr_db: float

    def reconstructed_cnr(self) -> float:
        return carrier_to_noise(self.eirp_dbw, self.g_over_t, self.fspl_db, self.other_losses_db, self.noise_dbw)


def draw_shadowing(rng: np.random.Generator, model: ShadowingModel) -> float:
    """One shadowing offset in dB, consuming a single normal variate from ``rng``."""
    if model.sigma == 0:
        return min(max(model.mu, model.clip_low), model.clip_high)
    x = float(rng.lognormal(model.log_mu, model.log_sigma))
    return min(max(x, model.clip_low), model.clip_high)


def free_space_path_loss(path_km: float, frequency_ghz: float, shadowing_db: float = 0.0) -> float:
    """FSPL in dB for a path in km and carrier in GHz, plus a shadowing offset."""
    if not path_km > 0:
        raise InvalidInputError(f"path must be positive, got {path_km}")
    if not frequency_ghz > 0:
        raise InvalidInputError(f"frequency must be positive, got {frequency_ghz}")
    return FSPL_CONSTANT_DB + 20 * math.log10(path_km) + 20 * math.log10(frequency_ghz) + shadowing_db


def eirp(transmit_gain: float, transmit_power_w: float) -> float:
    """EIRP in dBW from a linear antenna gain and transmit power in W."""
    if not transmit_gain > 0 or not transmit_power_w > 0:
        raise InvalidInputError("transmit gain and power must be positive")
    return 10 * math.log10(transmit_gain * transmit_power_w)


def figure_of_merit(
    receiver_gain_dbi: float,
    noise_figure_db: float,
    ambient_temp: float = 290.0,
    antenna_temp: float = 290.0,
) -> float:
    """Receiver G/T in dB/K.

    ``Gr + NF - 10 log10(T0 + (Ta - T0) 10^(-NF/10))``; with ``Ta == T0``
    the bracket is just ``T0``.
    """
    if not ambient_temp > 0 or not antenna_temp > 0:
        raise InvalidInputError("temperatures must be positive")
    t_eff = ambient_temp + (antenna_temp - ambient_temp) * 10 ** (-0.1 * noise_figure_db)
    return receiver_gain_dbi + noise_figure_db - 10 * math.log10(t_eff)


def noise_power(
    system_temperature: float,
    bandwidth_hz: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> float:
    """Thermal noise ``kTB`` in dBW."""
    if not system_temperature > 0 or not bandwidth_hz > 0:
        raise InvalidInputError("system temperature and bandwidth must be positive")
    return 10 * math.log10(constants.boltzmann * system_temperature * bandwidth_hz)


def carrier_to_noise(eirp_dbw: float, g_over_t: float, fspl_db: float, other_losses_db: float, noise_dbw: float) -> float:
    terms = (eirp_dbw, g_over_t, fspl_db, other_losses_db, noise_dbw)
    if not all(math.isfinite(t) for t in terms):
        raise InvalidInputError(f"CNR terms must be finite, got {terms}")
    return eirp_dbw + g_over_t - fspl_db - other_losses_db - noise_dbw


def link_budget_draw(
    rng: np.random.Generator,
    path_km: float,
    frequency_ghz: float,
    eirp_dbw: float,
    receiver_gain_dbi: float,
    noise: ReceiverNoiseModel,
    shadowing: ShadowingModel,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> LinkBudgetDraw:
    shadow = draw_shadowing(rng, shadowing)
    fspl = free_space_path_loss(path_km, frequency_ghz, shadow)
    gt = figure_of_merit(receiver_gain_dbi, noise.noise_figure, noise.ambient_temperature, noise.antenna_temperature)
    n_dbw = noise_power(noise.system_temperature, noise.bandwidth, constants)
    return LinkBudgetDraw(
        shadowing_db=shadow,
        fspl_db=fspl,
        eirp_dbw=eirp_dbw,
        g_over_t=gt,
        other_losses_db=noise.other_losses,
        noise_dbw=n_dbw,
        cnr_db=carrier_to_noise(eirp_dbw, gt, fspl, noise.other_losses, n_dbw),
    )
