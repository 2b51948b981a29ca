"""Almost flexions of three-isomeric equifacial Siamese dipyramids.

The natural deformation joins the three isomers P1, P2, P3 of the plan (n, l0, l0)
along the level curve l + l~ = 2 l0 in U. Its image in V is the segment between
the hat points, covered twice, so the edge lengths vary by at most delta_i while
the heights vary by delta_e.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import continuation
from .atlas import characteristic_points, singular_height
from .errors import (NotAdmissibleError, TraceError, UndefinedMeasureError,
                     WrongRegimeError, DomainError)
from .geometry import FaceParams, _check_n, _lengths, domain_membership
from .io import csv_text, dumps17
from .roots import refine_root, solve_heights

DEFAULT_EPSILON = 1e-3
PATH_COLUMNS = ("t", "x", "x_tilde", "l", "l_tilde", "rel_dl", "rel_dlt")


def admissible_interval(n):
    """Open interval ((l_H + l_K)/2, l_M) of admissible equifacial base lengths."""
    atlas = characteristic_points(n)
    l_H, l_K = atlas.points_V["H"][0], atlas.points_V["K"][0]
    return 0.5 * (l_H + l_K), atlas.points_V["M"][0]


def admissible(n, l0):
    FaceParams(n, l0, l0)
    lo, hi = admissible_interval(n)
    return bool(lo < l0 < hi)


def recommended_base(n):
    n = _check_n(n)
    if n == 3:
        return 1.6
    if n == 4:
        return 1.25
    return 2.0 * math.sin(5.0 * math.pi / (6.0 * n))


def _fold_crossing(n, l0, x_from, x_to, curve):
    """Fold point with l + l~ = 2 l0 on the part of the fold curve between two abscissae."""
    pts = curve.points
    lo, hi = min(x_from, x_to), max(x_from, x_to)
    sel = pts[(pts[:, 0] >= lo) & (pts[:, 0] <= hi)]
    guess = lambda x: float(np.interp(x, pts[:, 0], pts[:, 1]))

    def q(x):
        xt = singular_height(n, x, guess(x))
        l, lt = _lengths(n, x, xt)
        return l + lt - 2.0 * l0

    vals = np.array([sum(_lengths(n, x, xt)) - 2.0 * l0 for x, xt in sel])
    idx = [i for i in range(len(vals) - 1) if vals[i] * vals[i + 1] <= 0]
    if not idx:
        raise NotAdmissibleError(f"l + l~ = {2 * l0} does not cross the fold arc for n = {n}")
    i = idx[0]
    x = refine_root(q, (sel[i, 0], sel[i + 1, 0]))
    return np.array([x, singular_height(n, x, guess(x))])


def hat_points(n, l0):
    """Points where the line l + l~ = 2 l0 meets the fold arcs H-M and K-M.

    Returns ``(H_hat, K_hat)`` in the V plane. Each is located independently, so
    the swap symmetry between them is a check rather than an assumption.
    """
    atlas = characteristic_points(n)
    curve = atlas.singular_curve
    x_M = atlas.points_U["M"][0]
    pre_H = _fold_crossing(n, l0, x_M + 1e-9, atlas.points_U["H"][0], curve)
    pre_K = _fold_crossing(n, l0, atlas.points_U["K"][0], x_M - 1e-9, curve)
    H_hat = np.array(_lengths(n, *pre_H))
    K_hat = np.array(_lengths(n, *pre_K))
    if np.linalg.norm(H_hat - K_hat[::-1]) > 1e-8:
        raise NotAdmissibleError("hat points are not mirror images; fold arcs inconsistent")
    return H_hat, K_hat


def delta_intrinsic(n, l0):
    """Maximal relative edge-length variation along the natural deformation."""
    H_hat, K_hat = hat_points(n, l0)
    return float(np.linalg.norm(H_hat - K_hat) / (2.0 * math.sqrt(2.0) * l0))


def delta_extrinsic(solutions):
    """Maximal relative spread max |x_i - x_j| / x_j over the isomer heights."""
    xs = [s.x for s in solutions]
    if len(xs) < 2:
        raise UndefinedMeasureError("need at least two isomers to compare heights")
    return max(abs(a - b) / b for a in xs for b in xs)


@dataclass
class DeformationPath:
    n: int
    l0: float
    samples: np.ndarray  # columns follow PATH_COLUMNS
    anchors: tuple
    anchor_points: np.ndarray
    hat_points: tuple
    dense_max_rel: float = None
    extra: dict = field(default_factory=dict)

    def column(self, name):
        return self.samples[:, PATH_COLUMNS.index(name)]

    @property
    def heights(self):
        return self.samples[:, 1:3]

    @property
    def lengths(self):
        return self.samples[:, 3:5]

    def max_rel_deviation(self):
        return float(np.max(self.samples[:, 5:7]))

    def to_csv(self):
        return csv_text(PATH_COLUMNS, self.samples.tolist())

    def to_json(self):
        return dumps17({
            "n": self.n,
            "l0": self.l0,
            "anchors": {f"P{i + 1}": {"index": int(k), "heights": list(self.anchor_points[i])}
                        for i, k in enumerate(self.anchors)},
            "hat_points": {"H_hat": list(self.hat_points[0]), "K_hat": list(self.hat_points[1])},
            "samples": [dict(zip(PATH_COLUMNS, row)) for row in self.samples.tolist()],
        })


def _record(n, l0, t, x, xt):
    l, lt = _lengths(n, x, xt)
    return [t, x, xt, l, lt, abs(l - l0) / l0, abs(lt - l0) / l0]


def natural_path(n, l0, sample_count=512, step=1e-3):
    """Natural deformation through the three equifacial isomers, uniform in arclength."""
    n = _check_n(n)
    if not admissible(n, l0):
        lo, hi = admissible_interval(n)
        raise NotAdmissibleError(f"l0 = {l0} outside the admissible interval ({lo}, {hi})")
    sols = solve_heights(FaceParams(n, l0, l0))
    if sols.regime != 3:
        raise WrongRegimeError(f"plan ({n}, {l0}, {l0}) has {sols.regime} isomers, need 3")
    P = np.array(sols.heights())
    G = lambda x, y: n * (sum(_lengths(n, x, y)) - 2.0 * l0)

    seen_P2 = []

    def stop(prev, new):
        if _seg_dist(P[1], prev, new) < 1e-6:
            seen_P2.append(True)
        return bool(seen_P2) and np.linalg.norm(new - P[2]) < step

    pts, _ = continuation.trace(G, P[0], P[1] - P[0], step=step, stop=stop)
    if not seen_P2:
        raise TraceError("level curve through P1 misses P2: anchors on different components",
                         last_point=pts[-1])
    pts = pts[:-1] if np.linalg.norm(pts[-1] - P[2]) < 0.5 * step else pts
    pts = np.vstack([pts, P[2]])

    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, s[-1], sample_count)
    rows = []
    for k, sk in enumerate(targets):
        if k == 0:
            p = P[0]
        elif k == sample_count - 1:
            p = P[2]
        else:
            p = np.array([np.interp(sk, s, pts[:, 0]), np.interp(sk, s, pts[:, 1])])
            p = continuation.project(G, p)
            if p is None:
                raise TraceError("could not project a resampled point onto the level curve")
        rows.append(_record(n, l0, sk / s[-1], float(p[0]), float(p[1])))
    # the sample nearest to P2 in arclength is moved onto P2 itself, so all
    # three anchors are exact isomers
    k2 = int(np.argmin(np.linalg.norm(pts - P[1], axis=1)))
    s2 = s[k2] + float(np.dot(P[1] - pts[k2], _unit_tangent(pts, k2)))
    i2 = int(np.argmin(np.abs(targets - s2)))
    rows[i2] = _record(n, l0, s2 / s[-1], float(P[1][0]), float(P[1][1]))
    samples = np.array(rows)
    dense = max(abs(_lengths(n, *p)[0] - l0) / l0 for p in pts)
    return DeformationPath(n, l0, samples, (0, i2, sample_count - 1), P, hat_points(n, l0), dense)


def _unit_tangent(pts, k):
    a, b = pts[max(k - 1, 0)], pts[min(k + 1, len(pts) - 1)]
    d = b - a
    return d / np.linalg.norm(d)


def _seg_dist(p, a, b):
    d = b - a
    t = np.clip(np.dot(p - a, d) / np.dot(d, d), 0.0, 1.0)
    return float(np.linalg.norm(a + t * d - p))


@dataclass(frozen=True)
class FlexionReport:
    n: int
    l0: float
    epsilon: float
    delta_i: float
    delta_e: float
    admissible: bool
    verdict: bool

    def to_dict(self):
        return {"n": self.n, "l0": self.l0, "epsilon": self.epsilon, "delta_i": self.delta_i,
                "delta_e": self.delta_e, "admissible": self.admissible, "verdict": self.verdict}

    def to_json(self):
        return dumps17(self.to_dict())


def flexion_report(n, l0, epsilon=DEFAULT_EPSILON):
    """Admissibility, delta_i, delta_e and the almost-flexion verdict delta_i <= epsilon."""
    if not admissible(n, l0):
        return FlexionReport(n, l0, epsilon, None, None, False, False)
    d_i = delta_intrinsic(n, l0)
    d_e = delta_extrinsic(solve_heights(FaceParams(n, l0, l0)))
    return FlexionReport(n, l0, epsilon, d_i, d_e, True, bool(d_i <= epsilon))
