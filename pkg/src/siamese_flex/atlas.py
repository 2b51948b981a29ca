"""Rigidity map phi: (x, x~) -> (l, l~), its fold curve and the characteristic points.

The fold (singular) curve {det J = 0} is traced from its symmetry point M on the
diagonal towards the boundary arcs l~ = 2 sin(pi/2n) (point B) and
l = 2 sin(pi/2n) (point D).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import continuation
from .errors import AtlasIncompleteError, DomainError, NearSingularDomainError
from .geometry import RELAXED_TOL, _check_n, _lengths, aperture, base_length_bounds, edge_lengths
from .roots import bracket_scan, refine_root, solve_heights

U_LABELS = ("A", "C", "F", "O", "B", "D", "M", "E1", "E2", "E3", "H", "K")
V_LABELS = ("A", "C", "F", "O", "B", "D", "M", "E", "H", "K")
#: U-point whose image defines each V-point
V_SOURCE = {"A": "A", "C": "C", "F": "F", "O": "O", "B": "B", "D": "D", "M": "M",
            "E": "E1", "H": "H", "K": "K"}
MIRROR_PAIRS = (("A", "C"), ("B", "D"), ("H", "K"), ("E1", "E2"))
DIAGONAL = ("F", "O", "M", "E3")
BOUNDARY_GUARD = 1e-10
DIAGONAL_GUARD = 1e-6


@dataclass(frozen=True)
class RigidityJacobian:
    dl_dx: float
    dl_dxt: float
    dlt_dx: float
    dlt_dxt: float
    det: float

    def matrix(self):
        return np.array([[self.dl_dx, self.dl_dxt], [self.dlt_dx, self.dlt_dxt]])


def _partials(n, x, xt):
    r = math.sqrt(1.0 - x * x)
    rt = math.sqrt(1.0 - xt * xt)
    s = math.sqrt(1.0 - x * x - xt * xt)
    th = math.pi / n - math.asin(xt / r) / n
    tht = math.pi / n - math.asin(x / rt) / n
    dl_dx = -2.0 * x * math.sin(th) / r - (2.0 / n) * x * xt * math.cos(th) / (r * s)
    dl_dxt = -(2.0 / n) * r * math.cos(th) / s
    dlt_dxt = -2.0 * xt * math.sin(tht) / rt - (2.0 / n) * x * xt * math.cos(tht) / (rt * s)
    dlt_dx = -(2.0 / n) * rt * math.cos(tht) / s
    return dl_dx, dl_dxt, dlt_dx, dlt_dxt


def jacobian(n, x, x_tilde):
    """Analytic 2x2 derivative of the rigidity map at an interior point of U."""
    n = _check_n(n)
    if x < 0 or x_tilde < 0 or x * x + x_tilde * x_tilde >= 1.0:
        raise DomainError(f"({x}, {x_tilde}) outside the unit quarter disc")
    u = x_tilde / math.sqrt(1.0 - x * x)
    ut = x / math.sqrt(1.0 - x_tilde * x_tilde)
    if max(u, ut) > 1.0 - BOUNDARY_GUARD:
        raise NearSingularDomainError(f"arcsin argument {max(u, ut)!r} within {BOUNDARY_GUARD} of 1")
    a, b, c, d = _partials(n, x, x_tilde)
    return RigidityJacobian(a, b, c, d, a * d - b * c)


def scaled_det(n, x, xt):
    """n^2 det J: the Jacobian entries scale like 1/n, this keeps the fold condition O(1)."""
    a, b, c, d = _partials(n, x, xt)
    return n * n * (a * d - b * c)


@dataclass
class PlanarPath:
    """Ordered polyline in the height plane (``"U"``) or the edge-length plane (``"V"``)."""

    space_tag: str
    points: np.ndarray
    tags: dict = field(default_factory=dict)
    arclength: np.ndarray = None

    def __post_init__(self):
        if self.space_tag not in ("U", "V"):
            raise ValueError(f"unknown plane {self.space_tag!r}")
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        seg = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        if np.any(seg <= 0):
            raise ValueError("consecutive path points must be distinct")
        self.arclength = np.concatenate([[0.0], np.cumsum(seg)])

    def __len__(self):
        return len(self.points)

    def tagged(self, label):
        for i, t in self.tags.items():
            if t == label:
                return self.points[i]
        raise KeyError(label)


def singular_height(n, x, guess, width=0.02):
    """x~ on the fold curve above ``x``, found by bracketing det J(x, .) around ``guess``."""
    G = lambda t: scaled_det(n, x, t)
    upper = math.sqrt(1.0 - x * x) * (1.0 - 1e-9)
    for _ in range(8):
        a, b = max(1e-12, guess - width), min(upper, guess + width)
        try:
            ga, gb = G(a), G(b)
        except (ValueError, DomainError):
            width *= 0.5
            continue
        if ga * gb <= 0:
            return refine_root(G, (a, b))
        width *= 2.0
    raise DomainError(f"no fold point above x = {x}")


def _boundary_B(n):
    """Fold point on the limit arc l~ = 2 sin(pi/2n), parametrized by its height x~."""
    lmin, _ = base_length_bounds(n)
    xt_A = _xt_A(n)
    xt_F = _diagonal_root(n, lambda x: _lengths(n, x, x)[0] - lmin, "F")

    def on_arc(t):
        return aperture(n, lmin, t, tol=RELAXED_TOL)

    G = lambda t: scaled_det(n, on_arc(t), t)
    brackets = bracket_scan(G, xt_F, xt_A * (1.0 - 1e-12), 400)
    if not brackets:
        raise AtlasIncompleteError("B", "det J keeps its sign along the limit arc")
    t = refine_root(G, brackets[-1])
    return (on_arc(t), t)


def _xt_A(n):
    return math.sqrt(1.0 - 1.0 / (4.0 * math.cos(math.pi / (2 * n)) ** 2))


def _diagonal_root(n, f, label, hi=None):
    hi = hi if hi is not None else (1.0 / math.sqrt(2.0)) * (1.0 - 1e-9)
    brackets = bracket_scan(f, 1e-9, hi, 800)
    if not brackets:
        raise AtlasIncompleteError(label, "no sign change along the diagonal")
    return refine_root(f, brackets[0])


def _seed_M(n):
    lmin, _ = base_length_bounds(n)
    x_F = _diagonal_root(n, lambda x: _lengths(n, x, x)[0] - lmin, "F")
    x_M = _diagonal_root(n, lambda x: scaled_det(n, x, x), "M", hi=x_F)
    return x_M, x_F


def trace_singular_curve(n, step=1e-3):
    """Fold curve B -> M -> D as a U-plane path tagged at B, M and D."""
    n = _check_n(n)
    lmin, _ = base_length_bounds(n)
    x_M, _ = _seed_M(n)
    B = np.array(_boundary_B(n))
    D = B[::-1].copy()
    G = lambda x, y: scaled_det(n, x, y)

    def leg(direction, end, which):
        def stop(prev, new):
            return _lengths(n, *new)[which] <= lmin
        pts, _ = continuation.trace(G, (x_M, x_M), direction, step=step, stop=stop)
        pts = pts[:-1]
        # the overshooting point is replaced by the exact boundary hit
        while len(pts) > 1 and np.linalg.norm(pts[-1] - end) < 1e-12:
            pts = pts[:-1]
        return np.vstack([pts, end])

    to_D = leg((1.0, -1.0), D, 0)
    to_B = leg((-1.0, 1.0), B, 1)
    points = np.vstack([to_B[::-1], to_D[1:]])
    iM = len(to_B) - 1
    return PlanarPath("U", points, tags={0: "B", iM: "M", len(points) - 1: "D"})


def fold_image(n, curve):
    """Pointwise image of a U-plane path under the rigidity map."""
    if curve.space_tag != "U":
        raise ValueError("fold_image expects a U-plane path")
    pts = np.array([edge_lengths(n, x, xt, tol=RELAXED_TOL) for x, xt in curve.points])
    return PlanarPath("V", pts, tags=dict(curve.tags))


def _axis_image_l(n, lt):
    """l-coordinate of the point of phi({x = 0}) whose l~-coordinate is ``lt``."""
    _, lmax = base_length_bounds(n)
    t = math.sqrt(max(0.0, 1.0 - (lt / lmax) ** 2))
    return 2.0 * math.sin(math.pi / n - math.asin(t) / n)


def _locate_H(n, curve):
    """Fold point whose image lies on phi({x = 0}), on the D-side of M."""
    i_M = next(i for i, t in curve.tags.items() if t == "M")
    pts = curve.points[i_M:]
    guess = lambda x: float(np.interp(x, pts[:, 0], pts[:, 1]))

    def h(x):
        xt = singular_height(n, x, guess(x))
        l, lt = _lengths(n, x, xt)
        return l - _axis_image_l(n, lt)

    vals = []
    for x, xt in pts:
        if abs(x - xt) < DIAGONAL_GUARD:
            vals.append(np.nan)
            continue
        l, lt = _lengths(n, x, xt)
        vals.append(l - _axis_image_l(n, lt))
    vals = np.array(vals)
    idx = [i for i in range(len(vals) - 1)
           if np.isfinite(vals[i]) and np.isfinite(vals[i + 1]) and vals[i] * vals[i + 1] <= 0]
    if not idx:
        raise AtlasIncompleteError("H", "fold image does not meet the image of the x = 0 axis")
    i = idx[0]
    x = refine_root(h, (pts[i, 0], pts[i + 1, 0]))
    return (x, singular_height(n, x, guess(x)))


@dataclass
class CharacteristicAtlas:
    n: int
    points_U: dict
    points_V: dict
    singular_curve: PlanarPath
    fold_image: PlanarPath
    # crossings of the traced fold image, kept for inspection only
    fold_self_intersections: tuple = ()

    def to_dict(self):
        return {
            "n": self.n,
            "points_U": {k: list(v) for k, v in self.points_U.items()},
            "points_V": {k: list(v) for k, v in self.points_V.items()},
            "singular_curve": self.singular_curve.points.tolist(),
            "fold_image": self.fold_image.points.tolist(),
        }

    def to_json(self):
        from .io import dumps17

        return dumps17(self.to_dict())


def characteristic_points(n, step=1e-3):
    """All labelled points of the cell decomposition of U and of phi(U)."""
    return _characteristic_points(_check_n(n), step)


@lru_cache(maxsize=64)
def _characteristic_points(n, step):
    lmin, lmax = base_length_bounds(n)
    L = lambda x, xt: _lengths(n, x, xt)

    U = {"O": (0.0, 0.0)}
    xt_A = _xt_A(n)
    U["A"] = (0.0, xt_A)
    U["C"] = (xt_A, 0.0)

    x_F = _diagonal_root(n, lambda x: L(x, x)[0] - lmin, "F")
    U["F"] = (x_F, x_F)

    curve = trace_singular_curve(n, step)
    U["B"] = tuple(curve.points[0])
    U["D"] = tuple(curve.points[-1])
    U["M"] = tuple(curve.tagged("M"))

    # E: the images of the two axes cross on the diagonal of V
    axis_gap = lambda t: L(0.0, t)[0] - L(0.0, t)[1]
    brackets = bracket_scan(axis_gap, 1e-3 * xt_A, xt_A, 800)
    if not brackets:
        raise AtlasIncompleteError("E1", "axis images do not cross")
    t_E = refine_root(axis_gap, brackets[0])
    U["E1"] = (0.0, t_E)
    U["E2"] = (t_E, 0.0)
    l_E = L(0.0, t_E)[0]
    x_E3 = _diagonal_root(n, lambda x: L(x, x)[0] - l_E, "E3", hi=x_F)
    U["E3"] = (x_E3, x_E3)

    H = _locate_H(n, curve)
    U["H"] = H
    U["K"] = (H[1], H[0])

    V = {}
    for label, src in V_SOURCE.items():
        V[label] = edge_lengths(n, *U[src], tol=RELAXED_TOL)
    V["O"] = (lmax, lmax)
    image = fold_image(n, curve)
    crossings = tuple((i, j, tuple(p)) for i, j, p in self_intersections(image))
    return CharacteristicAtlas(n, {k: U[k] for k in U_LABELS}, {k: V[k] for k in V_LABELS},
                               curve, image, crossings)


def self_intersections(path, skip=2):
    """Crossings between non-adjacent segments of a polyline, as (i, j, point) triples."""
    p = path.points
    a, b = p[:-1], p[1:]
    d = b - a
    out = []
    for i in range(len(a)):
        j = np.arange(i + skip, len(a))
        if len(j) == 0:
            break
        e = d[j]
        denom = d[i, 0] * e[:, 1] - d[i, 1] * e[:, 0]
        w = a[j] - a[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]) / denom
            u = (w[:, 0] * d[i, 1] - w[:, 1] * d[i, 0]) / denom
        hit = (denom != 0) & (s >= 0) & (s <= 1) & (u >= 0) & (u <= 1)
        for k in np.nonzero(hit)[0]:
            out.append((i, int(j[k]), a[i] + s[k] * d[i]))
    return out


def isomer_count(plan, samples=None):
    """Number of mutually isomeric dipyramids with the given edge lengths (0 to 3)."""
    return solve_heights(plan, samples).regime


def equifacial_count_rule(n, l):
    """Isomer count an equifacial plan must have according to the position of (l, l)
    relative to E-bar and M-bar on the diagonal of V."""
    atlas = characteristic_points(n)
    l_E, l_M = atlas.points_V["E"][0], atlas.points_V["M"][0]
    return 3 if l_E < l < l_M else 1
