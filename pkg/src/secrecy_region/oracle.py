"""Brute-force grid search with zoom-in refinement over the strategy box
``[0, P]^2 x [0, 1]^2``.

Knows nothing about the closed-form optima; it only evaluates the rate
expressions. Used to cross-check the closed forms.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import ChannelParams, DomainError, Strategy, as_power, raw_rates

THREADS_ENV = "SECRECY_REGION_THREADS"


@dataclass(frozen=True)
class GridSpec:
    n_power: int = 25
    n_lambda: int = 25
    refine_rounds: int = 4
    zoom_factor: float = 0.2

    def __post_init__(self):
        if self.n_power < 2 or self.n_lambda < 2:
            raise DomainError("grids need at least 2 points per axis")
        if self.refine_rounds < 0:
            raise DomainError("refine_rounds must be nonnegative")
        if not 0 < self.zoom_factor < 1:
            raise DomainError("zoom_factor must lie in (0, 1)")


@dataclass(frozen=True)
class OracleResult:
    best_strategy: Strategy
    best_value: float
    resolution_bound: float
    # (best_value, resolution_bound) after each pass, coarse grid first
    history: tuple = field(default=(), compare=False)


def worker_count() -> int:
    env = os.environ.get(THREADS_ENV)
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cap))
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return min(4, cap)


class Objective:
    """Pointwise minimum of one or more smooth rate expressions.

    ``components`` maps broadcastable ``(p1, p2, lam1, lam2)`` arrays to a
    list of arrays; calling the objective returns their minimum.
    """

    def __init__(self, components):
        self.components = components

    def __call__(self, p1, p2, l1, l2):
        parts = self.components(p1, p2, l1, l2)
        out = parts[0]
        for part in parts[1:]:
            out = np.minimum(out, part)
        return out


def maxmin_objective(ch: ChannelParams) -> Objective:
    return Objective(lambda *x: list(raw_rates(ch.a, ch.a_c, ch.N, *x)))


def single_user_objective(ch: ChannelParams, user: int) -> Objective:
    if user not in (1, 2):
        raise DomainError(f"user must be 1 or 2, got {user}")
    return Objective(lambda *x: [raw_rates(ch.a, ch.a_c, ch.N, *x)[user - 1]])


def sum_objective(ch: ChannelParams) -> Objective:
    def parts(*x):
        r1, r2 = raw_rates(ch.a, ch.a_c, ch.N, *x)
        return [np.maximum(r1, 0.0) + np.maximum(r2, 0.0)]
    return Objective(parts)


def _grid_argmax(f, axes, workers: int):
    """Best value and its index on the tensor grid.

    Ties go to the first index in C order, i.e. the lexicographically
    smallest (p1, p2, lam1, lam2); chunking over p1 does not change that.
    """
    p1, p2, l1, l2 = axes
    b = (slice(None), None, None, None)
    p2b, l1b, l2b = p2[None, :, None, None], l1[None, None, :, None], l2[None, None, None, :]

    def chunk(rows):
        vals = f(p1[rows][b], p2b, l1b, l2b)
        k = int(np.argmax(vals))
        return float(vals.flat[k]), np.unravel_index(k, vals.shape), rows.start

    step = max(1, -(-len(p1) // workers))
    pieces = [slice(i, min(i + step, len(p1))) for i in range(0, len(p1), step)]
    if workers > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(chunk, pieces))
    else:
        results = [chunk(s) for s in pieces]
    best_v, best_idx = -np.inf, None
    for v, idx, offset in results:
        if v > best_v or best_idx is None:
            best_v = v
            best_idx = (idx[0] + offset, idx[1], idx[2], idx[3])
    return best_v, best_idx


def _zoom_axis(center: float, width: float, n: int, hi: float) -> np.ndarray:
    """``n`` points of spacing ``width/(n-1)`` containing ``center`` and
    shifted by whole steps to stay inside ``[0, hi]``."""
    if width >= hi:
        return np.linspace(0.0, hi, n)
    h = width / (n - 1)
    k = np.arange(n) - n // 2
    lo_shift = int(np.ceil(-(center + k[0] * h) / h - 1e-9)) if center + k[0] * h < 0 else 0
    k = k + lo_shift
    if center + k[-1] * h > hi:
        k = k - int(np.ceil((center + k[-1] * h - hi) / h - 1e-9))
    pts = center + k * h
    # exact boundaries where the incumbent sits on them
    return np.clip(pts, 0.0, hi)


ROUNDING_FLOOR = 1e-12


def _resolution_bound(f: Objective, x, uppers, spacings) -> float:
    """Estimate how far the true maximum may sit above ``f(x)``.

    Each smooth component gets a finite-difference linear model around the
    incumbent plus a curvature allowance from second and mixed differences
    at the grid spacing. The bound is the best value of the minimum of
    those models over the half-cell ``|t_i| <= h_i / 2`` clipped to the box,
    minus ``f(x)``, plus a small absolute rounding allowance.
    """
    x = np.asarray(x, dtype=float)
    hi = np.asarray(uppers, dtype=float)
    h = np.asarray(spacings, dtype=float)
    dim = len(x)

    def comps(y):
        return np.array([float(c) for c in f.components(*y)])

    def shifted(i, s):
        y = x.copy()
        y[i] += s
        return y

    c0 = comps(x)
    # per-axis sample offsets staying inside the box
    offsets = []
    for i in range(dim):
        if x[i] - h[i] >= 0 and x[i] + h[i] <= hi[i]:
            offsets.append((-h[i], h[i]))
        elif x[i] - h[i] < 0:
            offsets.append((h[i], 2 * h[i]))
        else:
            offsets.append((-h[i], -2 * h[i]))
    grads = np.zeros((len(c0), dim))
    curv = np.zeros((len(c0), dim, dim))
    for i, (s1, s2) in enumerate(offsets):
        f1, f2 = comps(shifted(i, s1)), comps(shifted(i, s2))
        if s1 < 0 < s2:
            grads[:, i] = (f2 - f1) / (2 * h[i])
            curv[:, i, i] = np.abs(f2 - 2 * c0 + f1) / h[i] ** 2
        else:
            sign = np.sign(s1)
            grads[:, i] = sign * (-3 * c0 + 4 * f1 - f2) / (2 * h[i])
            curv[:, i, i] = np.abs(f2 - 2 * f1 + c0) / h[i] ** 2
    for i in range(dim):
        for j in range(i + 1, dim):
            si, sj = offsets[i][0], offsets[j][0]
            y = x.copy()
            y[i] += si
            y[j] += sj
            fij = comps(y)
            fi, fj = comps(shifted(i, si)), comps(shifted(j, sj))
            mixed = np.abs(fij - fi - fj + c0) / (abs(si) * abs(sj))
            curv[:, i, j] = curv[:, j, i] = mixed
    lo_t = np.maximum(-h / 2, -x)
    hi_t = np.minimum(h / 2, hi - x)
    half = np.maximum(np.abs(lo_t), np.abs(hi_t))
    allowance = 0.5 * np.einsum("kij,i,j->k", curv, half, half)
    model_max = _max_min_linear(c0 + allowance, grads, lo_t, hi_t)
    return max(0.0, model_max - float(c0.min())) + ROUNDING_FLOOR


def _max_min_linear(c, G, lo, hi) -> float:
    """``max over lo <= t <= hi of min_k (c_k + G_k . t)`` for one or two rows.

    Two rows go through the dual ``min over theta in [0, 1]`` of a convex
    piecewise-linear function, evaluated at its breakpoints.
    """
    def box_max(w):
        return float(np.sum(np.maximum(w * lo, w * hi)))

    if len(c) == 1:
        return float(c[0]) + box_max(G[0])
    if len(c) != 2:
        raise ValueError("only one or two components are supported")
    d = G[0] - G[1]
    thetas = [0.0, 1.0]
    with np.errstate(divide="ignore", invalid="ignore"):
        roots = -G[1] / d
    thetas += [float(r) for r in roots[np.isfinite(roots)] if 0.0 < r < 1.0]
    return min(th * c[0] + (1 - th) * c[1] + box_max(th * G[0] + (1 - th) * G[1])
               for th in thetas)


def grid_maximize(f, P, grid: GridSpec = GridSpec(), workers: int | None = None) -> OracleResult:
    """Maximise ``f`` over the strategy box by grid search with refinement.

    The incumbent is always kept, so the best value never decreases from
    one pass to the next.
    """
    P = as_power(P)
    if not isinstance(f, Objective):
        f = Objective(lambda *x, _f=f: [_f(*x)])
    grid = grid or GridSpec()
    workers = workers or worker_count()
    uppers = (P, P, 1.0, 1.0)
    counts = (grid.n_power, grid.n_power, grid.n_lambda, grid.n_lambda)
    if P == 0:
        s = Strategy(0.0, 0.0, 0.0, 0.0)
        v = float(f(0.0, 0.0, 0.0, 0.0))
        return OracleResult(s, v, 0.0, ((v, 0.0),))
    axes = [np.linspace(0.0, hi, n) for hi, n in zip(uppers, counts)]
    widths = list(uppers)
    best_v, best_x = -np.inf, None
    history = []
    for rnd in range(grid.refine_rounds + 1):
        if rnd:
            widths = [w * grid.zoom_factor for w in widths]
            axes = [_zoom_axis(c, w, n, hi) for c, w, n, hi in zip(best_x, widths, counts, uppers)]
        v, idx = _grid_argmax(f, axes, workers)
        x = tuple(float(ax[i]) for ax, i in zip(axes, idx))
        if best_x is None or v > best_v:
            best_v, best_x = v, x
        spacings = [w / (n - 1) for w, n in zip(widths, counts)]
        bound = _resolution_bound(f, best_x, uppers, spacings)
        history.append((best_v, bound))
    p1, p2, l1, l2 = best_x
    s = Strategy(min(p1, P), min(p2, P), min(l1, 1.0), min(l2, 1.0))
    return OracleResult(s, float(best_v), float(history[-1][1]), tuple(history))


def oracle_maxmin(ch: ChannelParams, P, grid: GridSpec | None = None, workers=None) -> OracleResult:
    return grid_maximize(maxmin_objective(ch), P, grid or GridSpec(), workers)


def oracle_single_user(ch: ChannelParams, P, user: int = 1, grid: GridSpec | None = None,
                       workers=None) -> OracleResult:
    return grid_maximize(single_user_objective(ch, user), P, grid or GridSpec(), workers)


def oracle_max_sum(ch: ChannelParams, P, grid: GridSpec | None = None, workers=None) -> OracleResult:
    return grid_maximize(sum_objective(ch), P, grid or GridSpec(), workers)
