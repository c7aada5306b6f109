"""Closed-form optimal operating points: max-min point, single-user
point and the critical power where time-sharing overtakes max-min."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (ChannelParams, DomainError, RatePair, Strategy, as_power,
                    symmetric_rate)

TIE_TOL = 1e-9


@dataclass(frozen=True)
class MaxMinSolution:
    r_min_star: float
    lambda_star_interval: tuple[float, float]
    chosen_lambda: float
    p_star: float
    power_limited: bool
    p_min_star: float

    @property
    def strategy(self) -> Strategy:
        lam = self.chosen_lambda
        return Strategy(self.p_star, self.p_star, lam, lam)

    @property
    def rates(self) -> RatePair:
        return RatePair(self.r_min_star, self.r_min_star)


@dataclass(frozen=True)
class SingleUserSolution:
    user: int
    r_su_star: float
    strategy: Strategy
    delta: float

    @property
    def rates(self) -> RatePair:
        if self.user == 1:
            return RatePair.clamped(self.r_su_star, 0.0)
        return RatePair.clamped(0.0, self.r_su_star)


@dataclass(frozen=True)
class ModeComparison:
    mode: str  # "maxmin", "timeshare" or "tie"
    r_maxmin: float
    r_timeshare: float


def maxmin_rate(ch: ChannelParams) -> float:
    """Max-min secrecy rate once power is not the bottleneck."""
    ch.require_secrecy()
    a, a_c = ch.a, ch.a_c
    return math.log2((a + a_c) ** 2 / (4 * a * a_c))


def min_maxmin_power(ch: ChannelParams) -> float:
    """Smallest per-user power reaching the max-min rate (with no noise)."""
    ch.require_secrecy()
    a, a_c, N = ch.a, ch.a_c, ch.N
    return N * (a - a_c) / (a_c * (a + a_c))


def p_of_lambda(ch: ChannelParams, lam: float) -> float:
    """Power that makes ``(lam, p)`` a stationary point of the symmetric rate."""
    ch.require_secrecy()
    a, a_c, N = ch.a, ch.a_c, ch.N
    if lam < 0:
        raise DomainError(f"lambda must be nonnegative, got {lam}")
    if a_c - a * lam <= 0:
        raise DomainError(f"lambda={lam} must be below a_c/a={a_c / a} (singular power)")
    return N * (a - a_c) / ((a + a_c) * (a_c - a * lam))


def lambda_max(ch: ChannelParams, P) -> float:
    """Upper end of the admissible noise-split interval (negative if P is too small)."""
    ch.require_secrecy()
    P = as_power(P)
    a, a_c, N = ch.a, ch.a_c, ch.N
    if P == 0:
        return -math.inf
    return a_c / a - N * (a - a_c) / (P * a * (a + a_c))


def maxmin_point(ch: ChannelParams, P, lambda_choice: float | None = None) -> MaxMinSolution:
    """Symmetric max-min operating point.

    With enough power every ``lambda`` in ``[0, lambda_max]`` paired with
    ``p_of_lambda(lambda)`` attains the same rate; ``lambda = 0`` is the
    minimum-power choice and the default. Below the minimum power both
    users transmit at full power without noise.
    """
    ch.require_secrecy()
    P = as_power(P)
    p_min = min_maxmin_power(ch)
    if P < p_min:
        if lambda_choice not in (None, 0, 0.0):
            raise DomainError("power-limited regime admits only lambda = 0")
        return MaxMinSolution(
            r_min_star=symmetric_rate(ch, P, 0.0),
            lambda_star_interval=(0.0, 0.0),
            chosen_lambda=0.0,
            p_star=P,
            power_limited=True,
            p_min_star=p_min,
        )
    lam_hi = max(0.0, lambda_max(ch, P))
    lam = 0.0 if lambda_choice is None else float(lambda_choice)
    if not 0.0 <= lam <= lam_hi:
        raise DomainError(f"lambda_choice={lam} outside admissible interval [0, {lam_hi}]")
    # p_of_lambda(lam_hi) == P up to rounding
    p_star = min(p_of_lambda(ch, lam), P)
    return MaxMinSolution(
        r_min_star=maxmin_rate(ch),
        lambda_star_interval=(0.0, lam_hi),
        chosen_lambda=lam,
        p_star=p_star,
        power_limited=False,
        p_min_star=p_min,
    )


def single_user_point(ch: ChannelParams, P, user: int = 1) -> SingleUserSolution:
    """Best rate for ``user`` when the other user only sends artificial noise."""
    ch.require_secrecy()
    if user not in (1, 2):
        raise DomainError(f"user must be 1 or 2, got {user}")
    P = as_power(P)
    a, a_c, N = ch.a, ch.a_c, ch.N
    delta = math.sqrt(N * N + (a + a_c) * N * P)
    helper_power = (delta - N) / (a + a_c)
    own = (a * N + a_c * delta) * (a_c * N + a * delta)
    num = own + a * (a + a_c) * (a_c * N + a * delta) * P
    den = own + a_c * (a + a_c) * (a * N + a_c * delta) * P
    r = math.log2(num / den)
    s = Strategy(p1=P, p2=helper_power, lambda1=0.0, lambda2=1.0)
    if user == 2:
        s = s.swapped()
    return SingleUserSolution(user=user, r_su_star=r, strategy=s, delta=delta)


def critical_power(ch: ChannelParams) -> float:
    """Power above which equal time-sharing of the single-user points beats max-min."""
    ch.require_secrecy()
    a, a_c, N = ch.a, ch.a_c, ch.N
    return N * (a - a_c) * (a * a + a_c * a_c + 6 * a * a_c) / (a_c * a_c + 3 * a * a_c) ** 2


def compare_operating_modes(ch: ChannelParams, P, tol: float = TIE_TOL) -> ModeComparison:
    r_mm = maxmin_point(ch, P).r_min_star
    r_ts = single_user_point(ch, P).r_su_star / 2
    if abs(r_mm - r_ts) <= tol:
        mode = "tie"
    elif r_mm > r_ts:
        mode = "maxmin"
    else:
        mode = "timeshare"
    return ModeComparison(mode, r_mm, r_ts)
