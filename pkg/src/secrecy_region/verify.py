"""Cross-checks of the closed forms against the grid oracle and the
analytic gradients against finite differences."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import optima
from .model import (ChannelParams, Strategy, perturbation_product, raw_rates,
                    rate_gradient, symmetric_rate, symmetric_rate_gradient)
from .oracle import GridSpec, oracle_maxmin, oracle_single_user
from .region import hull_contains, sample_region


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def finite_difference_gradient(ch: ChannelParams, s: Strategy, user: int,
                               rel_step: float = 1e-6) -> np.ndarray:
    """Central differences of one raw rate.

    Steps are ``rel_step`` times the coordinate magnitude (at least 1 for
    powers) or times the unit range for noise splits.
    """
    x = s.as_array()
    grad = np.empty(4)
    for i in range(4):
        h = rel_step * (max(abs(x[i]), 1.0) if i < 2 else 1.0)
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        f_up = raw_rates(ch.a, ch.a_c, ch.N, *up)[user - 1]
        f_dn = raw_rates(ch.a, ch.a_c, ch.N, *dn)[user - 1]
        grad[i] = (f_up - f_dn) / (2 * h)
    return grad


def gradient_relative_error(ch: ChannelParams, s: Strategy, user: int) -> float:
    """Worst per-component error of the analytic gradient, relative to the
    gradient norm."""
    ana = rate_gradient(ch, s, user).as_array()
    fd = finite_difference_gradient(ch, s, user)
    scale = max(np.linalg.norm(fd), 1e-12)
    return float(np.max(np.abs(ana - fd)) / scale)


def random_channel(rng: np.random.Generator) -> ChannelParams:
    a = float(rng.uniform(0.5, 2.0))
    return ChannelParams(a=a, a_c=a * float(rng.uniform(0.02, 0.9)),
                         N=float(rng.uniform(0.2, 3.0)))


def random_interior_strategy(rng: np.random.Generator, P: float) -> Strategy:
    p1, p2 = rng.uniform(0.01 * P, P, 2)
    l1, l2 = rng.uniform(0.01, 0.99, 2)
    return Strategy(float(p1), float(p2), float(l1), float(l2))


def check_maxmin_vs_oracle(ch, P, grid=None, maxmin_fn=optima.maxmin_point,
                           max_bound: float = 1e-3) -> CheckResult:
    closed = maxmin_fn(ch, P).r_min_star
    res = oracle_maxmin(ch, P, grid)
    gap = abs(closed - res.best_value)
    ok = gap <= res.resolution_bound and res.resolution_bound <= max_bound
    return CheckResult("maxmin-vs-oracle", ok,
                       f"closed={closed:.12g} oracle={res.best_value:.12g} "
                       f"gap={gap:.3g} bound={res.resolution_bound:.3g}")


def check_single_user_vs_oracle(ch, P, grid=None, single_user_fn=optima.single_user_point,
                                max_bound: float = 1e-4) -> CheckResult:
    sol = single_user_fn(ch, P, 1)
    res = oracle_single_user(ch, P, 1, grid)
    gap = abs(sol.r_su_star - res.best_value)
    b = res.best_strategy
    step = 2 * P * (grid or GridSpec()).zoom_factor ** (grid or GridSpec()).refine_rounds
    structure = (b.lambda1 <= 1e-9 and b.lambda2 >= 1 - 1e-9 and abs(b.p1 - P) <= 1e-9 * max(P, 1)
                 and abs(b.p2 - sol.strategy.p2) <= step)
    ok = gap <= res.resolution_bound <= max_bound and structure
    return CheckResult("single-user-vs-oracle", ok,
                       f"closed={sol.r_su_star:.12g} oracle={res.best_value:.12g} "
                       f"gap={gap:.3g} bound={res.resolution_bound:.3g} argmax=({b.p1:.6g}, "
                       f"{b.p2:.6g}, {b.lambda1:.3g}, {b.lambda2:.3g})")


def check_critical_power(ch, tol: float = 1e-9) -> CheckResult:
    P_c = optima.critical_power(ch)
    diff = optima.single_user_point(ch, P_c).r_su_star - 2 * optima.maxmin_point(ch, P_c).r_min_star
    return CheckResult("critical-power-identity", abs(diff) <= tol,
                       f"P_c={P_c:.12g} R_su-2R_min={diff:.3g}")


def check_lambda_family(ch, P, n: int = 20, rate_tol: float = 1e-9,
                        grad_tol: float = 1e-7) -> CheckResult:
    sol = optima.maxmin_point(ch, P)
    if sol.power_limited:
        return CheckResult("lambda-family", True, "power limited, family is the single point lambda=0")
    lo, hi = sol.lambda_star_interval
    worst_rate = worst_grad = 0.0
    for lam in np.linspace(lo, hi, n):
        p = optima.p_of_lambda(ch, float(lam))
        worst_rate = max(worst_rate, abs(symmetric_rate(ch, p, float(lam)) - sol.r_min_star))
        worst_grad = max(worst_grad, math.hypot(*symmetric_rate_gradient(ch, p, float(lam))))
    return CheckResult("lambda-family", worst_rate <= rate_tol and worst_grad <= grad_tol,
                       f"max rate dev={worst_rate:.3g} max grad norm={worst_grad:.3g}")


def check_gradients(ch, P, rng, n: int = 1000, tol: float = 1e-5) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        s = random_interior_strategy(rng, P)
        for user in (1, 2):
            worst = max(worst, gradient_relative_error(ch, s, user))
    return CheckResult("gradient-vs-finite-difference", worst <= tol, f"max rel err={worst:.3g}")


def check_perturbation(ch, P, rng, n: int = 100) -> CheckResult:
    sol = optima.maxmin_point(ch, P)
    lo, hi = sol.lambda_star_interval
    if hi <= lo:
        return CheckResult("perturbation-negative", True, "no interior lambda available, skipped")
    lam = 0.5 * (lo + hi)
    base = optima.maxmin_point(ch, P, lam).strategy
    worst = max(perturbation_product(ch, base, rng.standard_normal(4)) for _ in range(n))
    return CheckResult("perturbation-negative", worst < 0, f"max product={worst:.3g} at lambda={lam:.4g}")


def check_region_dominance(ch, P, grid=None) -> CheckResult:
    on = sample_region(ch, P, grid, True)
    off = sample_region(ch, P, grid, False)
    outside = [q for q in off.hull if not hull_contains(on, q, 1e-6)]
    return CheckResult("region-dominance", not outside,
                       f"{len(off.hull)} no-noise hull vertices, {len(outside)} outside")


def run_checks(ch: ChannelParams, P: float, grid: GridSpec | None = None, seed: int = 0,
               draws: int = 0, region: bool = True,
               maxmin_fn=optima.maxmin_point,
               single_user_fn=optima.single_user_point) -> list[CheckResult]:
    """Full verification suite for one channel, plus ``draws`` random channels.

    ``maxmin_fn`` and ``single_user_fn`` can be replaced to exercise the
    harness against deliberately wrong formulas.
    """
    rng = np.random.default_rng(seed)
    ch.require_secrecy()
    out = [
        check_critical_power(ch),
        check_maxmin_vs_oracle(ch, P, grid, maxmin_fn),
        check_single_user_vs_oracle(ch, P, grid, single_user_fn),
        check_lambda_family(ch, P),
        check_gradients(ch, P, rng),
        check_perturbation(ch, P, rng),
    ]
    if region:
        out.append(check_region_dominance(ch, P))
    for k in range(draws):
        rc = random_channel(rng)
        p_min = optima.min_maxmin_power(rc)
        rP = float(rng.uniform(p_min / 2, 4 * p_min))
        tag = f"[draw {k}: a={rc.a:.4g} ac={rc.a_c:.4g} N={rc.N:.4g} P={rP:.4g}]"
        for res in (check_maxmin_vs_oracle(rc, rP, grid, maxmin_fn),
                    check_single_user_vs_oracle(rc, rP, grid, single_user_fn),
                    check_critical_power(rc)):
            out.append(CheckResult(f"{res.name} {tag}", res.passed, res.detail))
    return out
