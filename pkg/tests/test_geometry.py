import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siamese_flex.errors import ClosureError, DomainError, InvalidGonCountError
from siamese_flex.geometry import (BASE_L, BASE_LT, LEG, FaceParams, HeightsPair, SiameseConfig,
                                   aperture, aperture_max, base_length_bounds, build_mesh,
                                   domain_membership, edge_lengths, export_obj, height_max,
                                   parse_obj, system_residual, validate_base_length)
from siamese_flex.roots import solve_heights

import oracles

SETTINGS = settings(max_examples=300, derandomize=True, deadline=None)


@st.composite
def interior_points(draw, n_values=range(3, 13)):
    n = draw(st.sampled_from(list(n_values)))
    x = draw(st.floats(0.0, 0.95))
    xt = draw(st.floats(0.0, 0.95))
    return n, x, xt


# --- base lengths -------------------------------------------------------------------------

def test_validate_base_length_examples():
    assert validate_base_length(5, 1.0)
    assert not validate_base_length(5, 2 * math.sin(math.pi / 10))
    assert not validate_base_length(5, 2 * math.sin(math.pi / 5))
    assert not validate_base_length(5, 1.2)


def test_invalid_gon_count():
    with pytest.raises(InvalidGonCountError):
        validate_base_length(2, 1.0)
    with pytest.raises(InvalidGonCountError):
        FaceParams(2, 1.0, 1.0)


def test_face_params_rejects_out_of_range_lengths():
    with pytest.raises(DomainError, match="2 sin"):
        FaceParams(5, 1.2, 1.0)
    with pytest.raises(DomainError, match="l_tilde"):
        FaceParams(5, 1.0, 0.5)


# --- aperture and its extremes ------------------------------------------------------------

def test_aperture_examples():
    assert aperture(5, 1.0, 0.0) == pytest.approx(0.5, abs=1e-15)
    assert abs(aperture(5, 1.0, height_max(5, 1.0))) < 1e-12
    assert aperture(5, 1.0, 0.07118) == pytest.approx(0.49237, abs=1e-4)


def test_aperture_domain_errors_name_the_bound():
    with pytest.raises(DomainError, match="lower bound 0"):
        aperture(5, 1.0, -0.1)
    with pytest.raises(DomainError, match="upper bound x_max"):
        aperture(5, 1.0, 0.6)


def test_aperture_vectorized_matches_scalar():
    xs = np.linspace(0, height_max(6, 0.9), 50)
    ys = aperture(6, 0.9, xs)
    assert np.allclose(ys, [aperture(6, 0.9, float(x)) for x in xs], rtol=0, atol=1e-15)


def test_height_max_examples():
    assert height_max(5, 1.0) == pytest.approx(math.sqrt(1 - 1 / (4 * math.sin(math.pi / 5) ** 2)))
    assert height_max(5, 1.0) == pytest.approx(0.52573, abs=1e-5)
    assert height_max(5, 2 * math.sin(math.pi / 5) * (1 - 1e-15)) < 1e-6
    assert aperture_max(5, 1.0) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("n", range(3, 11))
def test_height_max_against_bisection(n):
    lo, hi = base_length_bounds(n)
    for l in np.linspace(lo, hi, 22)[1:-1]:
        assert height_max(n, l) == pytest.approx(oracles.xmax_by_bisection(n, l), abs=1e-12)


@pytest.mark.parametrize("n", [3, 5, 8, 12])
def test_aperture_strictly_decreasing(n):
    lo, hi = base_length_bounds(n)
    for l in np.linspace(lo, hi, 12)[1:-1]:
        ys = aperture(n, l, np.linspace(0, height_max(n, l), 2000))
        assert np.all(np.diff(ys) < 0)


def test_pentagonal_rational_identity():
    xs = np.linspace(0.0, height_max(5, 1.0), 1000)
    lhs = aperture(5, 1.0, xs)
    rhs = (5 * xs ** 4 - 5 * xs ** 2 + 1) / (2 * (1 - xs ** 2) ** 2)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


# --- rigidity map -------------------------------------------------------------------------

def test_edge_lengths_examples():
    l, lt = edge_lengths(5, 0.32726, 0.32726)
    assert (l, lt) == (pytest.approx(1.0, abs=1e-4), pytest.approx(1.0, abs=1e-4))
    l, lt = edge_lengths(5, 0.28677, 0.28677)
    assert l == pytest.approx(1.02992, abs=1e-4) and lt == pytest.approx(1.02992, abs=1e-4)


def test_edge_lengths_outside_domain():
    with pytest.raises(DomainError):
        edge_lengths(5, 0.9, 0.9)
    with pytest.raises(DomainError):
        edge_lengths(5, 0.7, 0.7)  # beyond F: l drops below the lower bound


@SETTINGS
@given(interior_points())
def test_swap_symmetry(p):
    n, x, xt = p
    if not domain_membership(n, x, xt):
        return
    l, lt = edge_lengths(n, x, xt)
    m, mt = edge_lengths(n, xt, x)
    assert abs(l - mt) <= 1e-14 and abs(lt - m) <= 1e-14


@SETTINGS
@given(interior_points())
def test_inversion(p):
    n, x, xt = p
    if not domain_membership(n, x, xt):
        return
    l, lt = edge_lengths(n, x, xt)
    r1, r2 = system_residual(FaceParams(n, l, lt), HeightsPair(x, xt))
    assert abs(r1) < 1e-12 and abs(r2) < 1e-12


@SETTINGS
@given(interior_points())
def test_ball_bound(p):
    n, x, xt = p
    if domain_membership(n, x, xt):
        assert x * x + xt * xt < 1


@SETTINGS
@given(interior_points())
def test_edge_lengths_match_independent_formula(p):
    n, x, xt = p
    if domain_membership(n, x, xt):
        assert np.allclose(edge_lengths(n, x, xt), oracles.lengths(n, x, xt), rtol=0, atol=1e-14)


def test_system_residual_examples():
    plan = FaceParams(5, 1.0, 1.0)
    for h in ((0.32726, 0.32726), (0.07118, 0.49237)):
        r = system_residual(plan, HeightsPair(*h))
        assert max(map(abs, r)) < 1e-4


def test_domain_membership_examples():
    assert domain_membership(5, 0.32726, 0.32726)
    assert not domain_membership(5, 0.9, 0.9)
    assert not domain_membership(5, 0.64458 * 1.05, 0.64458 * 1.05)
    assert not domain_membership(5, -0.1, 0.2)


def test_closure_error_on_bad_residual():
    with pytest.raises(ClosureError):
        SiameseConfig.from_heights(FaceParams(5, 1.0, 1.0), 0.3, 0.3)


# --- meshes -------------------------------------------------------------------------------

def _example1():
    return solve_heights(FaceParams(5, 1.0, 1.0)).solutions


def _edges_of(faces):
    return {tuple(sorted((f[i], f[(i + 1) % 3]))) for f in faces for i in range(3)}


@pytest.mark.parametrize("k", [0, 1, 2])
def test_mesh_counts_and_lengths(k):
    cfg = _example1()[k]
    mesh = build_mesh(cfg)
    assert (mesh.n_vertices, mesh.n_faces, mesh.n_edges) == (12, 20, 30)
    assert mesh.n_vertices - mesh.n_edges + mesh.n_faces == 2
    assert _edges_of(mesh.faces) == set(mesh.edge_classes)
    assert max(mesh.edge_length_errors().values()) < 1e-9
    classes = list(mesh.edge_classes.values())
    assert classes.count(LEG) == 20 and classes.count(BASE_L) == 5 and classes.count(BASE_LT) == 5


def test_mesh_frame_contract():
    cfg = _example1()[1]
    v = build_mesh(cfg).vertices
    x, xt = cfg.x, cfg.x_tilde
    assert np.allclose(v[0], [x, 0, 0]) and np.allclose(v[1], [-x, 0, 0])
    ring = v[2:2 + 6]
    assert np.allclose(ring[:, 0], 0.0)
    assert np.allclose(np.hypot(ring[:, 1], ring[:, 2]), math.sqrt(1 - x * x))
    # ring endpoints differ only in y
    assert np.allclose(ring[0, [0, 2]], ring[-1, [0, 2]]) and ring[0, 1] == pytest.approx(-ring[-1, 1])
    zc = -math.sqrt(1 - x * x - xt * xt)
    second = v[8:]
    assert np.allclose(second[:, 1], 0.0)
    assert np.allclose(np.hypot(second[:, 0], second[:, 2] - zc), math.sqrt(1 - xt * xt))


def test_mesh_is_consistently_oriented_closed_surface():
    mesh = build_mesh(_example1()[0])
    directed = [(f[i], f[(i + 1) % 3]) for f in mesh.faces for i in range(3)]
    assert len(set(directed)) == len(directed)
    assert all((b, a) in set(directed) for a, b in directed)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_mesh_normals_point_outward(k):
    mesh = build_mesh(_example1()[k])
    v = mesh.vertices
    volume = sum(np.dot(v[a], np.cross(v[b], v[c])) for a, b, c in mesh.faces) / 6.0
    assert volume > 0


def _distance_signature(vertices):
    d = np.linalg.norm(vertices[:, None] - vertices[None, :], axis=-1)
    return np.sort(d.ravel())


def test_mirror_solutions_give_congruent_meshes():
    a, _, c = _example1()
    assert np.allclose(_distance_signature(build_mesh(a).vertices),
                       _distance_signature(build_mesh(c).vertices), atol=1e-9)


def test_degenerate_height_refused():
    cfg = SiameseConfig(FaceParams(5, 1.0, 1.0), HeightsPair(0.0, 0.5), (0.0, 0.0))
    with pytest.raises(ClosureError):
        build_mesh(cfg)


def test_obj_export_and_round_trip():
    mesh = build_mesh(_example1()[1])
    text = export_obj(mesh)
    lines = text.splitlines()
    assert lines[0].startswith("#") and "n=5" in lines[0].replace(" ", "")
    assert sum(1 for s in lines if s.startswith("v ")) == 12
    assert sum(1 for s in lines if s.startswith("f ")) == 20
    verts, faces = parse_obj(text)
    assert np.array_equal(verts, mesh.vertices)
    assert np.array_equal(faces, mesh.faces)
    assert export_obj(mesh) == text


def test_empty_mesh_refused():
    from siamese_flex.geometry import TriMesh

    with pytest.raises(ValueError):
        TriMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=int), {})
