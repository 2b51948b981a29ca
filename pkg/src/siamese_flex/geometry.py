"""Closed-form geometry of Goldberg and Siamese dipyramids.

All lengths are in leg units: every lateral edge of every triangle has length 1.
A Goldberg dipyramid with base length ``l`` has half-height ``x`` and half-aperture
``y``; two of them close up into a Siamese dipyramid when the height of one equals
the aperture of the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ClosureError, DomainError, InvalidGonCountError

#: arcsin arguments this close beyond +-1 are clamped, anything further is rejected
ASIN_SLACK = 1e-12
#: tolerance used by atlas call sites that need the closure of the domain
RELAXED_TOL = 1e-12
SOLVER_TOL = 1e-10
MESH_TOL = 1e-9


def _check_n(n):
    if int(n) != n or n < 3:
        raise InvalidGonCountError(f"gon count must be an integer >= 3, got {n!r}")
    return int(n)


def _asin(v, what="arcsin argument"):
    """arcsin with the clamping rule: within ASIN_SLACK of +-1 is clamped, beyond is rejected."""
    if isinstance(v, np.ndarray):
        if np.any(np.abs(v) > 1.0 + ASIN_SLACK) or np.any(np.isnan(v)):
            raise DomainError(f"{what} outside [-1, 1]")
        return np.arcsin(np.clip(v, -1.0, 1.0))
    if not abs(v) <= 1.0 + ASIN_SLACK:
        raise DomainError(f"{what} = {v!r} outside [-1, 1]")
    return math.asin(min(1.0, max(-1.0, v)))


def base_length_bounds(n):
    """Open interval ``(2 sin(pi/2n), 2 sin(pi/n))`` of admissible base lengths."""
    n = _check_n(n)
    return 2.0 * math.sin(math.pi / (2 * n)), 2.0 * math.sin(math.pi / n)


def validate_base_length(n, l, tol=0.0):
    """True iff ``l`` lies strictly inside the admissible base-length interval.

    A positive ``tol`` widens the interval on both sides (relaxed membership).
    """
    lo, hi = base_length_bounds(n)
    return bool(lo - tol < l < hi + tol)


@dataclass(frozen=True)
class FaceParams:
    """Metric plan of a Siamese dipyramid: gon count and the two base lengths."""

    n: int
    l: float
    l_tilde: float

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))
        for name in ("l", "l_tilde"):
            value = getattr(self, name)
            if not validate_base_length(self.n, value):
                lo, hi = base_length_bounds(self.n)
                raise DomainError(
                    f"{name} = {value!r} violates 2 sin(pi/2n) = {lo:.6f} < {name} < 2 sin(pi/n) = {hi:.6f}"
                )

    def swapped(self):
        return FaceParams(self.n, self.l_tilde, self.l)


@dataclass(frozen=True)
class HeightsPair:
    x: float
    x_tilde: float

    def __post_init__(self):
        if self.x < 0 or self.x_tilde < 0:
            raise DomainError(f"heights must be non-negative, got ({self.x}, {self.x_tilde})")
        if self.x ** 2 + self.x_tilde ** 2 > 1.0 + ASIN_SLACK:
            raise DomainError("heights violate x^2 + x_tilde^2 <= 1")

    def swapped(self):
        return HeightsPair(self.x_tilde, self.x)

    def as_tuple(self):
        return (self.x, self.x_tilde)


def height_max(n, l):
    """Largest half-height of the Goldberg dipyramid D(l); the aperture vanishes there."""
    n = _check_n(n)
    return math.sqrt(max(0.0, 1.0 - l * l / (4.0 * math.sin(math.pi / n) ** 2)))


def aperture_max(n, l):
    """Half-aperture of the flat (x = 0) Goldberg dipyramid."""
    n = _check_n(n)
    return math.sin(n * _asin(l / 2.0))


def aperture(n, l, x, tol=0.0):
    """Half-aperture y of the Goldberg dipyramid D(l) with half-height x.

    Accepts a scalar or an ndarray of heights. ``tol`` relaxes the base-length
    check for atlas call sites working on the closure of the domain.
    """
    n = _check_n(n)
    if not validate_base_length(n, l, tol):
        lo, hi = base_length_bounds(n)
        raise DomainError(f"base length {l!r} outside ({lo:.6f}, {hi:.6f})")
    xm = height_max(n, l)
    scalar = np.ndim(x) == 0
    xs = np.asarray(x, dtype=float)
    if np.any(xs < -ASIN_SLACK):
        raise DomainError(f"height below lower bound 0: min x = {xs.min()!r}")
    if np.any(xs > xm + ASIN_SLACK):
        raise DomainError(f"height above upper bound x_max = {xm!r}: max x = {xs.max()!r}")
    xs = np.clip(xs, 0.0, xm)
    r = np.sqrt(1.0 - xs * xs)
    theta = _asin(l / (2.0 * r), "l / (2 sqrt(1 - x^2))")
    y = r * np.sin(n * theta)
    return float(y) if scalar else y


def _lengths(n, x, xt):
    """Unchecked rigidity map (x, x~) -> (l, l~); raises DomainError only on arcsin overflow."""
    r = math.sqrt(1.0 - x * x)
    rt = math.sqrt(1.0 - xt * xt)
    l = 2.0 * r * math.sin(math.pi / n - _asin(xt / r) / n)
    lt = 2.0 * rt * math.sin(math.pi / n - _asin(x / rt) / n)
    return l, lt


def edge_lengths(n, x, x_tilde, tol=0.0):
    """Base lengths (l, l~) of the Siamese dipyramid with heights (x, x~).

    Raises DomainError when the point lies outside the domain U (widened by ``tol``).
    """
    n = _check_n(n)
    if x < -tol or x_tilde < -tol or x * x + x_tilde * x_tilde > 1.0 + ASIN_SLACK:
        raise DomainError(f"heights ({x!r}, {x_tilde!r}) outside the unit quarter disc")
    l, lt = _lengths(n, max(x, 0.0), max(x_tilde, 0.0))
    for name, value in (("l", l), ("l_tilde", lt)):
        if not validate_base_length(n, value, tol):
            raise DomainError(f"{name} = {value!r} leaves the admissible interval at ({x!r}, {x_tilde!r})")
    return l, lt


def system_residual(plan, heights):
    """Residuals of the two closing conditions; both vanish iff the dipyramid closes."""
    x, xt = heights.x, heights.x_tilde
    for h in (x, xt):
        if not 0.0 <= h < 1.0:
            raise DomainError(f"height {h!r} outside [0, 1)")
    r = math.sqrt(1.0 - x * x)
    rt = math.sqrt(1.0 - xt * xt)
    r1 = xt - r * math.sin(plan.n * _asin(plan.l / (2.0 * r)))
    r2 = x - rt * math.sin(plan.n * _asin(plan.l_tilde / (2.0 * rt)))
    return r1, r2


def domain_membership(n, x, x_tilde, tol=0.0):
    """True iff (x, x~) represents a Siamese dipyramid, i.e. lies in U."""
    if x < 0 or x_tilde < 0:
        return False
    try:
        edge_lengths(n, x, x_tilde, tol)
    except DomainError:
        return False
    return True


@dataclass(frozen=True)
class SiameseConfig:
    plan: FaceParams
    heights: HeightsPair
    residual: tuple
    multiplicity: int = 1

    def __post_init__(self):
        if max(abs(self.residual[0]), abs(self.residual[1])) >= SOLVER_TOL:
            raise ClosureError(f"residual {self.residual} exceeds {SOLVER_TOL}")

    @classmethod
    def from_heights(cls, plan, x, x_tilde, multiplicity=1):
        heights = HeightsPair(x, x_tilde)
        return cls(plan, heights, system_residual(plan, heights), multiplicity)

    @property
    def x(self):
        return self.heights.x

    @property
    def x_tilde(self):
        return self.heights.x_tilde

    def swapped(self):
        return SiameseConfig(self.plan.swapped(), self.heights.swapped(),
                             (self.residual[1], self.residual[0]), self.multiplicity)


LEG, BASE_L, BASE_LT = "leg", "base_l", "base_l_tilde"


@dataclass
class TriMesh:
    """Explicit triangulated surface of a realized Siamese dipyramid."""

    vertices: np.ndarray
    faces: np.ndarray
    edge_classes: dict
    plan: FaceParams = None
    heights: HeightsPair = None
    targets: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.vertices) == 0 or len(self.faces) == 0:
            raise ValueError("empty mesh")

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_edges(self):
        return len(self.edge_classes)

    def edge_length_errors(self):
        """Map edge -> |length - class target|."""
        out = {}
        for (i, j), cls in self.edge_classes.items():
            d = float(np.linalg.norm(self.vertices[i] - self.vertices[j]))
            out[(i, j)] = abs(d - self.targets[cls])
        return out


def build_mesh(config):
    """Explicit vertices and faces of a closing configuration in the fixed frame.

    First dipyramid: apexes (+-x, 0, 0), ring in the plane x = 0. Second dipyramid:
    apexes at the first ring's endpoints, ring in the plane y = 0 centred at
    (0, 0, z_c) with z_c = -sqrt(1 - x^2 - x~^2). Faces are wound with outward normals.
    """
    if not isinstance(config, SiameseConfig):
        raise TypeError("build_mesh expects a SiameseConfig")
    n, l, lt = config.plan.n, config.plan.l, config.plan.l_tilde
    x, xt = config.x, config.x_tilde
    if x <= 0 or xt <= 0:
        raise ClosureError("degenerate configuration: both heights must be positive")
    if max(abs(v) for v in config.residual) >= SOLVER_TOL:
        raise ClosureError(f"residual {config.residual} exceeds {SOLVER_TOL}")

    r1 = math.sqrt(1.0 - x * x)
    step1 = 2.0 * _asin(l / (2.0 * r1))
    psi = -n * step1 / 2.0 + step1 * np.arange(n + 1)
    ring1 = np.column_stack([np.zeros(n + 1), r1 * np.sin(psi), r1 * np.cos(psi)])
    z_c = ring1[0, 2]

    r2 = math.sqrt(1.0 - xt * xt)
    step2 = 2.0 * _asin(lt / (2.0 * r2))
    phi = -n * step2 / 2.0 + step2 * np.arange(1, n)
    ring2_inner = np.column_stack([r2 * np.sin(phi), np.zeros(n - 1), z_c - r2 * np.cos(phi)])

    apexes = np.array([[x, 0.0, 0.0], [-x, 0.0, 0.0]])
    vertices = np.vstack([apexes, ring1, ring2_inner])

    # index maps: first ring k -> 2 + k; second ring k -> 1 (k = 0), 0 (k = n), else n + 2 + k
    ring1_idx = [2 + k for k in range(n + 1)]
    ring2_idx = [1] + [n + 2 + k for k in range(1, n)] + [0]
    x1, x2 = ring1_idx[0], ring1_idx[-1]

    faces = []
    edge_classes = {}

    def add_edge(i, j, cls):
        key = (min(i, j), max(i, j))
        edge_classes.setdefault(key, cls)

    for k in range(n):
        a, b = ring1_idx[k], ring1_idx[k + 1]
        faces.append((0, b, a))
        faces.append((1, a, b))
        add_edge(a, b, BASE_L)
        for apex in (0, 1):
            add_edge(apex, a, LEG)
            add_edge(apex, b, LEG)
    for k in range(n):
        a, b = ring2_idx[k], ring2_idx[k + 1]
        faces.append((x2, b, a))
        faces.append((x1, a, b))
        add_edge(a, b, BASE_LT)
        for apex in (x1, x2):
            add_edge(apex, a, LEG)
            add_edge(apex, b, LEG)

    return TriMesh(vertices=vertices, faces=np.array(faces, dtype=int), edge_classes=edge_classes,
                   plan=config.plan, heights=config.heights,
                   targets={LEG: 1.0, BASE_L: l, BASE_LT: lt})


def export_obj(mesh):
    """Wavefront OBJ text with 17 significant digits and 1-based face indices."""
    if mesh.n_vertices == 0:
        raise ValueError("empty mesh")
    lines = []
    if mesh.plan is not None and mesh.heights is not None:
        p, h = mesh.plan, mesh.heights
        lines.append(f"# siamese dipyramid n={p.n} l={p.l:.17g} l_tilde={p.l_tilde:.17g} "
                     f"x={h.x:.17g} x_tilde={h.x_tilde:.17g}")
    else:
        lines.append("# siamese dipyramid")
    for v in mesh.vertices:
        lines.append("v {:.17g} {:.17g} {:.17g}".format(*v))
    for f in mesh.faces:
        lines.append("f {} {} {}".format(*(int(i) + 1 for i in f)))
    return "\n".join(lines) + "\n"


def parse_obj(text):
    """Read back ``v`` and ``f`` records; returns (vertices, faces) with 0-based faces."""
    verts, faces = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(t) for t in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(t.split("/")[0]) - 1 for t in parts[1:4]])
    return np.array(verts), np.array(faces, dtype=int)
