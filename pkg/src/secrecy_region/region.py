"""Achievable secrecy-rate region: Pareto frontier of grid-sampled
strategies and its time-sharing convex hull."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import (ChannelParams, DomainError, RatePair, Strategy, as_power,
                    raw_rates)
from .optima import maxmin_point, single_user_point
from .oracle import GridSpec, worker_count

COLLINEAR_TOL = 1e-12
# Dense power axes give smooth frontiers; lambda needs fewer samples.
REGION_GRID = GridSpec(n_power=101, n_lambda=21, refine_rounds=0)


@dataclass(frozen=True)
class RegionEstimate:
    """Sampled region.

    ``frontier`` is Pareto-maximal and sorted by ``r1`` ascending, with the
    generating strategy of each sample in ``frontier_strategies``.
    ``hull`` runs counterclockwise from the origin.
    """

    frontier: tuple
    frontier_strategies: tuple
    hull: tuple
    with_artificial_noise: bool
    channel: ChannelParams
    power: float
    grid: GridSpec

    def hull_array(self) -> np.ndarray:
        return np.array([[q.r1, q.r2] for q in self.hull]).reshape(-1, 2)

    def frontier_array(self) -> np.ndarray:
        return np.array([[q.r1, q.r2] for q in self.frontier]).reshape(-1, 2)


def timeshare(point_a: RatePair, point_b: RatePair, fraction: float) -> RatePair:
    """Rates when ``point_b`` is used a ``fraction`` of the time and ``point_a`` the rest."""
    if not 0.0 <= fraction <= 1.0:
        raise DomainError(f"fraction must lie in [0, 1], got {fraction}")
    if fraction == 0.0:
        return point_a
    if fraction == 1.0:
        return point_b
    return RatePair.clamped((1 - fraction) * point_a.r1 + fraction * point_b.r1,
                            (1 - fraction) * point_a.r2 + fraction * point_b.r2)


def pareto_indices(r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """Indices of Pareto-maximal points, ordered by ``r1`` ascending.

    Sort by ``r1`` descending (``r2`` descending, then index, on ties) and
    keep every point that raises the running maximum of ``r2``. Exact
    duplicates keep their first occurrence.
    """
    r1 = np.asarray(r1, dtype=float).ravel()
    r2 = np.asarray(r2, dtype=float).ravel()
    if r1.size == 0:
        return np.zeros(0, dtype=int)
    order = np.lexsort((np.arange(r1.size), -r2, -r1))
    ys = r2[order]
    prev_best = np.r_[-np.inf, np.maximum.accumulate(ys)[:-1]]
    keep = order[ys > prev_best]
    return keep[::-1]


def convex_hull(points) -> list[tuple[float, float]]:
    """Monotone-chain hull, counterclockwise, starting at the lowest-leftmost point.

    Collinear points are dropped.
    """
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= COLLINEAR_TOL:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= COLLINEAR_TOL:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _rotate_to_origin(hull):
    if (0.0, 0.0) in hull:
        k = hull.index((0.0, 0.0))
        return hull[k:] + hull[:k]
    return hull


def _enumerate(ch: ChannelParams, P: float, grid: GridSpec, allow_an: bool, extra):
    """Pareto-maximal samples of the grid plus ``extra`` strategies.

    Returns a list of ``(r1, r2, strategy)`` sorted by ``r1`` ascending.
    """
    powers = np.linspace(0.0, P, grid.n_power)
    lams = np.linspace(0.0, 1.0, grid.n_lambda) if allow_an else np.zeros(1)
    p2, l1, l2 = np.meshgrid(powers, lams, lams, indexing="ij")
    p2, l1, l2 = p2.ravel(), l1.ravel(), l2.ravel()

    def chunk(p1):
        r1, r2 = raw_rates(ch.a, ch.a_c, ch.N, p1, p2, l1, l2)
        r1, r2 = np.maximum(r1, 0.0), np.maximum(r2, 0.0)
        idx = pareto_indices(r1, r2)
        return [(float(r1[k]), float(r2[k]),
                  Strategy(float(p1), float(p2[k]), float(l1[k]), float(l2[k]))) for k in idx]

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(chunk, powers))
    else:
        parts = [chunk(p) for p in powers]
    cands = [c for part in parts for c in part]
    for s in extra:
        r1, r2 = raw_rates(ch.a, ch.a_c, ch.N, s.p1, s.p2, s.lambda1, s.lambda2)
        cands.append((max(0.0, float(r1)), max(0.0, float(r2)), s))
    idx = pareto_indices([c[0] for c in cands], [c[1] for c in cands])
    return [cands[k] for k in idx]


def _anchor_strategies(ch: ChannelParams, P: float, allow_an: bool) -> list[Strategy]:
    if not ch.has_secrecy or P == 0:
        return []
    out = [maxmin_point(ch, P).strategy]
    if allow_an:
        out += [single_user_point(ch, P, u).strategy for u in (1, 2)]
    return out


def sample_region(ch: ChannelParams, P, grid: GridSpec | None = None,
                  allow_artificial_noise: bool = True) -> RegionEstimate:
    """Sample the secrecy-rate region and convexify it.

    The grid covers ``[0, P]^2`` in power and ``[0, 1]^2`` in noise split
    (split pinned to zero when artificial noise is disallowed). The
    closed-form max-min strategy and, with artificial noise, both
    single-user strategies are added to the samples so the exact corner
    points and axis intercepts are present.
    """
    P = as_power(P)
    grid = grid or REGION_GRID
    samples = _enumerate(ch, P, grid, allow_artificial_noise,
                         _anchor_strategies(ch, P, allow_artificial_noise))
    frontier = tuple(RatePair(r1, r2) for r1, r2, _ in samples)
    strategies = tuple(s for _, _, s in samples)
    x_max = max(q.r1 for q in frontier)
    y_max = max(q.r2 for q in frontier)
    anchors = [(0.0, 0.0), (x_max, 0.0), (0.0, y_max)]
    hull = _rotate_to_origin(convex_hull([(q.r1, q.r2) for q in frontier] + anchors))
    return RegionEstimate(
        frontier=frontier,
        frontier_strategies=strategies,
        hull=tuple(RatePair(x, y) for x, y in hull),
        with_artificial_noise=allow_artificial_noise,
        channel=ch,
        power=P,
        grid=grid,
    )


def _segment_distance(p, a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0 else min(1.0, max(0.0, float((p - a) @ ab) / denom))
    return float(np.linalg.norm(p - (a + t * ab)))


def hull_distance(region: RegionEstimate, point: RatePair) -> float:
    """Euclidean distance from ``point`` to the region hull (0 inside)."""
    verts = region.hull_array()
    p = np.array([point.r1, point.r2], dtype=float)
    n = len(verts)
    if n >= 3:
        edges = np.roll(verts, -1, axis=0) - verts
        rel = p - verts
        cross = edges[:, 0] * rel[:, 1] - edges[:, 1] * rel[:, 0]
        if np.all(cross >= -COLLINEAR_TOL):
            return 0.0
    if n == 1:
        return float(np.linalg.norm(p - verts[0]))
    pairs = [(verts[i], verts[(i + 1) % n]) for i in range(n if n >= 3 else n - 1)]
    return min(_segment_distance(p, a, b) for a, b in pairs)


def hull_contains(region: RegionEstimate, point: RatePair, tol: float = 1e-9) -> bool:
    return hull_distance(region, point) <= tol


def axis_intercepts(region: RegionEstimate) -> tuple[float, float]:
    """Largest single-user rates on the hull, ``(r1 on the r1 axis, r2 on the r2 axis)``."""
    verts = region.hull_array()
    return float(verts[:, 0].max()), float(verts[:, 1].max())
