"""Channel model and secrecy-rate evaluation for the symmetric two-user
Gaussian interference channel with artificial noise.

All quantities are linear scale. Rates are in bits per channel use.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

LN2 = math.log(2.0)


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""


class NoSecrecyError(DomainError):
    """Raised when the direct gain does not exceed the cross gain."""

    def __init__(self, msg: str = "direct gain must exceed cross gain"):
        super().__init__(msg)


@dataclass(frozen=True)
class ChannelParams:
    """Symmetric interference channel.

    Attributes
    ----------
    a : float
        Direct-channel power gain.
    a_c : float
        Cross-channel power gain.
    N : float
        Noise variance, in the same power units as the transmit power.
    """

    a: float
    a_c: float
    N: float = 1.0

    def __post_init__(self):
        for name in ("a", "a_c", "N"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v}")

    @property
    def has_secrecy(self) -> bool:
        return self.a > self.a_c

    def require_secrecy(self) -> None:
        if not self.has_secrecy:
            raise NoSecrecyError()


@dataclass(frozen=True)
class PowerConstraint:
    """Peak transmit power per user."""

    P: float

    def __post_init__(self):
        if not (math.isfinite(self.P) and self.P >= 0):
            raise DomainError(f"P must be nonnegative and finite, got {self.P}")


def as_power(P) -> float:
    """Accept either a PowerConstraint or a bare number."""
    if isinstance(P, PowerConstraint):
        return P.P
    return PowerConstraint(float(P)).P


@dataclass(frozen=True)
class Strategy:
    """Transmit powers and artificial-noise fractions of both users."""

    p1: float
    p2: float
    lambda1: float
    lambda2: float

    def __post_init__(self):
        for name in ("p1", "p2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be a nonnegative power, got {v}")
        for name in ("lambda1", "lambda2"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {v}")

    def check_power(self, P: float) -> None:
        if self.p1 > P or self.p2 > P:
            raise DomainError(f"powers ({self.p1}, {self.p2}) exceed P={P}")

    def swapped(self) -> "Strategy":
        return Strategy(self.p2, self.p1, self.lambda2, self.lambda1)

    def as_array(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.lambda1, self.lambda2])


@dataclass(frozen=True)
class RatePair:
    r1_raw: float
    r2_raw: float

    @property
    def r1(self) -> float:
        return max(0.0, self.r1_raw)

    @property
    def r2(self) -> float:
        return max(0.0, self.r2_raw)

    @classmethod
    def clamped(cls, r1: float, r2: float) -> "RatePair":
        """A pair of achievable (nonnegative) rates."""
        return cls(max(0.0, r1), max(0.0, r2))


@dataclass(frozen=True)
class RateGradient:
    d_p1: float
    d_p2: float
    d_lambda1: float
    d_lambda2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d_p1, self.d_p2, self.d_lambda1, self.d_lambda2])


def raw_rates(a, a_c, N, p1, p2, lam1, lam2):
    """Vectorised raw secrecy rates of both users.

    Works on scalars or broadcastable arrays; returns ``(r1_raw, r2_raw)``.
    Each rate is written as a difference of four logs, e.g. for user 1::

        log(N + a p1 + a_c p2) - log(N + a lam1 p1 + a_c p2)
        - log(N + a_c p1 + a lam2 p2) + log(N + a_c lam1 p1 + a lam2 p2)
    """
    return (_raw_rate(a, a_c, N, p1, p2, lam1, lam2),
            _raw_rate(a, a_c, N, p2, p1, lam2, lam1))


def _raw_rate(a, a_c, N, p_own, p_other, lam_own, lam_other):
    own_rx = N + a * p_own + a_c * p_other
    own_rx_noise = N + a * lam_own * p_own + a_c * p_other
    eve_rx = N + a_c * p_own + a * lam_other * p_other
    eve_rx_noise = N + a_c * lam_own * p_own + a * lam_other * p_other
    return (np.log(own_rx) - np.log(own_rx_noise)
            - np.log(eve_rx) + np.log(eve_rx_noise)) / LN2


def _warn_degenerate(ch: ChannelParams) -> None:
    if not ch.has_secrecy:
        warnings.warn("a <= a_c: no positive secrecy rate is achievable",
                      RuntimeWarning, stacklevel=3)


def secrecy_rates(ch: ChannelParams, s: Strategy) -> RatePair:
    """Raw and clamped secrecy rates of a single operating point."""
    _warn_degenerate(ch)
    r1, r2 = raw_rates(ch.a, ch.a_c, ch.N, s.p1, s.p2, s.lambda1, s.lambda2)
    return RatePair(float(r1), float(r2))


def symmetric_rate(ch: ChannelParams, p: float, lam: float) -> float:
    """Common secrecy rate when both users use power ``p`` and split ``lam``."""
    if p < 0:
        raise DomainError(f"p must be nonnegative, got {p}")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    a, a_c, N = ch.a, ch.a_c, ch.N
    num = (N + a_c * p + a * p) * (N + a_c * lam * p + a * lam * p)
    den = (N + a_c * p + a * lam * p) * (N + a * lam * p + a_c * p)
    return math.log2(num / den)


def symmetric_rate_gradient(ch: ChannelParams, p: float, lam: float):
    """Partial derivatives ``(dR/dp, dR/dlambda)`` of the symmetric rate."""
    a, a_c, N = ch.a, ch.a_c, ch.N
    s = a + a_c
    full = N + s * p
    noisy = N + s * lam * p
    mixed = N + (a_c + a * lam) * p
    d_p = (s / full + s * lam / noisy - 2 * (a_c + a * lam) / mixed) / LN2
    d_lam = (s * p / noisy - 2 * a * p / mixed) / LN2
    return d_p, d_lam


def rate_gradient(ch: ChannelParams, s: Strategy, which_user: int) -> RateGradient:
    """Analytic gradient of one user's raw secrecy rate.

    Boundary points use the interior formula.
    """
    if which_user == 1:
        g = _own_gradient(ch, s.p1, s.p2, s.lambda1, s.lambda2)
        return RateGradient(*g)
    if which_user == 2:
        d_own, d_other, dl_own, dl_other = _own_gradient(
            ch, s.p2, s.p1, s.lambda2, s.lambda1)
        return RateGradient(d_other, d_own, dl_other, dl_own)
    raise DomainError(f"which_user must be 1 or 2, got {which_user}")


def _own_gradient(ch, p_own, p_other, lam_own, lam_other):
    a, a_c, N = ch.a, ch.a_c, ch.N
    own_rx = N + a * p_own + a_c * p_other
    own_rx_noise = N + a * lam_own * p_own + a_c * p_other
    eve_rx = N + a_c * p_own + a * lam_other * p_other
    eve_rx_noise = N + a_c * lam_own * p_own + a * lam_other * p_other
    d_own = a / own_rx - a * lam_own / own_rx_noise - a_c / eve_rx + a_c * lam_own / eve_rx_noise
    d_other = (a_c / own_rx - a_c / own_rx_noise
               - a * lam_other / eve_rx + a * lam_other / eve_rx_noise)
    dl_own = -a * p_own / own_rx_noise + a_c * p_own / eve_rx_noise
    dl_other = -a * p_other / eve_rx + a * p_other / eve_rx_noise
    return d_own / LN2, d_other / LN2, dl_own / LN2, dl_other / LN2


def perturbation_product(ch: ChannelParams, base: Strategy, direction) -> float:
    """``(grad R1 . d) * (grad R2 . d)`` at ``base``.

    Negative means moving along ``d`` lowers one of the two rates.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (4,):
        raise DomainError("direction must be a 4-vector (p1, p2, lambda1, lambda2)")
    if not np.any(d):
        raise DomainError("direction must be nonzero")
    g1 = rate_gradient(ch, base, 1).as_array()
    g2 = rate_gradient(ch, base, 2).as_array()
    return float((g1 @ d) * (g2 @ d))
