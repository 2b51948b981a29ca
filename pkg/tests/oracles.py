"""Independent reference computations used to cross-check the library.

Nothing here calls the library's solvers: formulas are re-derived with numpy and
roots are found by brute force or generic scipy routines.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import least_squares

GRID = 800
CANDIDATE_NORM = 0.05
ROOT_NORM = 1e-6
POSITIVE = 1e-9
DISTINCT = 1e-6


def bounds(n):
    return 2 * math.sin(math.pi / (2 * n)), 2 * math.sin(math.pi / n)


def aperture(n, l, x):
    r = np.sqrt(1.0 - np.asarray(x, dtype=float) ** 2)
    return r * np.sin(n * np.arcsin(np.clip(l / (2 * r), -1.0, 1.0)))


def xmax_by_bisection(n, l):
    """Zero of x -> aperture(n, l, x), found by bisection on a bracket."""
    hi = math.sqrt(1.0 - (l / 2) ** 2) * (1 - 1e-15)
    lo = 0.0
    # the aperture changes sign where n * asin(l / 2r) passes pi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r = math.sqrt(1 - mid * mid)
        arg = l / (2 * r)
        if arg >= 1 or n * math.asin(arg) >= math.pi:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def lengths(n, x, xt):
    r, rt = math.sqrt(1 - x * x), math.sqrt(1 - xt * xt)
    l = 2 * r * math.sin(math.pi / n - math.asin(xt / r) / n)
    lt = 2 * rt * math.sin(math.pi / n - math.asin(x / rt) / n)
    return l, lt


def in_domain(n, x, xt):
    """Membership in U: positive heights inside the ball with both lengths in range."""
    if x < 0 or xt < 0 or x * x + xt * xt >= 1:
        return False
    if xt / math.sqrt(1 - x * x) > 1 or x / math.sqrt(1 - xt * xt) > 1:
        return False
    lo, hi = bounds(n)
    return all(lo < v < hi for v in lengths(n, x, xt))


def interior_sample(n, count, seed):
    """Random points of U kept away from its boundary, where the partials blow up."""
    rng = np.random.default_rng(seed)
    lo, _ = bounds(n)
    out = []
    while len(out) < count:
        x, xt = rng.uniform(0.0, 0.9, 2)
        if 1 - x * x - xt * xt < 0.05:
            continue
        if max(xt / math.sqrt(1 - x * x), x / math.sqrt(1 - xt * xt)) >= 0.97:
            continue
        if min(lengths(n, x, xt)) - lo > 1e-3:
            out.append((x, xt))
    return out


def fd_jacobian(n, x, xt, h=1e-6):
    cols = []
    for dx, dy in ((h, 0.0), (0.0, h)):
        p = np.array(lengths(n, x + dx, xt + dy))
        m = np.array(lengths(n, x - dx, xt - dy))
        cols.append((p - m) / (2 * h))
    return np.array(cols).T


def grid_solutions(n, l, lt, grid=GRID):
    """Positive solutions of the closing system by 2D brute force.

    The residual norm is sampled on a grid x grid lattice over the box
    [0, xmax(l)] x [0, xmax(lt)]. Every local minimum over its 3x3 neighbourhood
    (edges replicated) with norm below CANDIDATE_NORM is pushed by a batch of
    projected Newton steps. Candidates that land on a root are deduplicated and
    each distinct root gets a final bounded least-squares polish.
    """
    xm, xmt = xmax_by_bisection(n, l), xmax_by_bisection(n, lt)
    xs, ys = np.linspace(0, xm, grid), np.linspace(0, xmt, grid)
    f, g = aperture(n, l, xs), aperture(n, lt, ys)

    def lattice_norm(j, i):
        j = np.clip(j, 0, grid - 1)  # edge replication at the box boundary
        i = np.clip(i, 0, grid - 1)
        return (ys[j] - f[i]) ** 2 + (xs[i] - g[j]) ** 2

    # only lattice nodes with |x~ - f(x)| below the threshold can be candidates,
    # so scan a band of rows around the graph of f in each column
    dy = ys[1] - ys[0]
    width = int(math.ceil(2 * CANDIDATE_NORM / dy)) + 3
    start = np.clip(np.floor((f - CANDIDATE_NORM) / dy).astype(int) - 1, 0, grid - 1)
    rows = (start[:, None] + np.arange(width)[None, :]).ravel()
    cols = np.repeat(np.arange(grid), width)
    inside = rows < grid
    rows, cols = rows[inside], cols[inside]
    val = lattice_norm(rows, cols)
    sel = val < CANDIDATE_NORM ** 2
    rows, cols, val = rows[sel], cols[sel], val[sel]
    keep = np.ones(len(rows), dtype=bool)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr or dc:
                keep &= lattice_norm(rows + dr, cols + dc) >= val
    rows, cols = rows[keep], cols[keep]
    X, Y = xs[cols].copy(), ys[rows].copy()

    def res(p):
        return [p[1] - aperture(n, l, p[0]), p[0] - aperture(n, lt, p[1])]

    h = 1e-8
    for _ in range(40):
        fx, gy = aperture(n, l, X), aperture(n, lt, Y)
        dfx = (aperture(n, l, np.minimum(X + h, xm)) - aperture(n, l, np.maximum(X - h, 0))) / (
            np.minimum(X + h, xm) - np.maximum(X - h, 0))
        dgy = (aperture(n, lt, np.minimum(Y + h, xmt)) - aperture(n, lt, np.maximum(Y - h, 0))) / (
            np.minimum(Y + h, xmt) - np.maximum(Y - h, 0))
        r1, r2 = Y - fx, X - gy
        det = dfx * dgy - 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            dX = (dgy * r1 + r2) / det
            dY = (r1 + dfx * r2) / det
        ok = np.isfinite(dX) & np.isfinite(dY)
        X = np.clip(np.where(ok, X + dX, X), 0.0, xm)
        Y = np.clip(np.where(ok, Y + dY, Y), 0.0, xmt)

    found = []
    for x0, y0 in zip(X, Y):
        if np.hypot(*res((x0, y0))) > 1e-8:
            continue
        if any(math.hypot(x0 - p, y0 - q) < DISTINCT for p, q in found):
            continue
        sol = least_squares(res, [x0, y0], bounds=([0, 0], [xm, xmt]),
                            xtol=1e-15, ftol=1e-15, gtol=1e-15)
        x, y = (float(v) for v in sol.x)
        if np.hypot(*res(sol.x)) < ROOT_NORM and x > POSITIVE and y > POSITIVE:
            if all(math.hypot(x - p, y - q) > DISTINCT for p, q in found):
                found.append((x, y))
    return sorted(found)


def polyline_distance(points, p):
    """Euclidean distance from ``p`` to the polyline through ``points``."""
    a, b = points[:-1], points[1:]
    d = b - a
    t = np.clip(np.einsum("ij,ij->i", np.asarray(p) - a, d) / np.einsum("ij,ij->i", d, d), 0, 1)
    return float(np.min(np.linalg.norm(a + t[:, None] * d - np.asarray(p), axis=1)))
