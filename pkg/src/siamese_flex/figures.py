"""Static SVG figures of the atlas and of natural deformations."""
from __future__ import annotations

import io

import numpy as np
from matplotlib import rc_context
from matplotlib.figure import Figure

from .atlas import U_LABELS, V_LABELS, characteristic_points
from .geometry import _lengths, aperture, base_length_bounds

FOLIATION_LEVELS = 24
GRID = 400

_SVG_RC = {"svg.fonttype": "none", "svg.hashsalt": "siamese-flex", "font.size": 8}

_U_TEX = {"E1": r"$E_1$", "E2": r"$E_2$", "E3": r"$E_3$"}


def _svg_text(fig):
    buf = io.StringIO()
    with rc_context(_SVG_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def _length_grid(n, xmax):
    xs = np.linspace(0.0, xmax, GRID)
    X, Y = np.meshgrid(xs, xs)
    r2 = 1.0 - X ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        inside = X ** 2 + Y ** 2 < 1.0
        r = np.sqrt(np.where(inside, r2, np.nan))
        rt = np.sqrt(np.where(inside, 1.0 - Y ** 2, np.nan))
        L = 2 * r * np.sin(np.pi / n - np.arcsin(np.clip(Y / r, -1, 1)) / n)
        Lt = 2 * rt * np.sin(np.pi / n - np.arcsin(np.clip(X / rt, -1, 1)) / n)
    lmin, _ = base_length_bounds(n)
    outside = ~inside | (L < lmin) | (Lt < lmin)
    return X, Y, np.where(outside, np.nan, L), np.where(outside, np.nan, Lt)


def atlas_figure(n):
    """Two-panel figure: domain U with foliations and fold curve, and its image in V."""
    atlas = characteristic_points(n)
    lmin, lmax = base_length_bounds(n)
    fig = Figure(figsize=(10, 5))
    axU, axV = fig.subplots(1, 2)

    xmax = max(p[1] for p in atlas.points_U.values()) * 1.02
    X, Y, L, Lt = _length_grid(n, xmax)
    levels = np.linspace(lmin, lmax, FOLIATION_LEVELS + 2)[1:-1]
    cs = axU.contour(X, Y, L, levels=levels, colors="#4c72b0", linewidths=0.4)
    cs.set_gid("foliation-gamma")
    cst = axU.contour(X, Y, Lt, levels=levels, colors="#dd8452", linewidths=0.4)
    cst.set_gid("foliation-gamma-tilde")
    xA = atlas.points_U["A"][1]
    # limit curves l = lmin (F to C) and l~ = lmin (F to A)
    t = np.linspace(atlas.points_U["F"][0], xA, 200)
    arc = aperture(n, lmin, t, tol=1e-12)
    axU.plot(t, arc, "k-", lw=1.0, gid="boundary-limit-l")
    axU.plot(arc, t, "k-", lw=1.0, gid="boundary-limit-l-tilde")
    axU.plot([0, 0], [0, xA], "k-", lw=1.0, gid="boundary-axis-x")
    axU.plot([0, xA], [0, 0], "k-", lw=1.0, gid="boundary-axis-x-tilde")

    c = atlas.singular_curve.points
    axU.plot(c[:, 0], c[:, 1], "r-", lw=1.5, gid="singular-curve")
    for label in U_LABELS:
        x, y = atlas.points_U[label]
        axU.plot([x], [y], "ko", ms=2.5)
        axU.annotate(_U_TEX.get(label, label), (x, y), textcoords="offset points",
                     xytext=(3, 3), gid=f"label-U-{label}")
    axU.set_xlabel(r"$x$")
    axU.set_ylabel(r"$\tilde x$")
    axU.set_aspect("equal")
    axU.set_title(f"U, n = {n}")

    t = np.linspace(0.0, xA, 300)
    ax_img = np.array([_lengths(n, 0.0, v) for v in t])
    axV.plot(ax_img[:, 0], ax_img[:, 1], "k-", lw=1.0, gid="boundary-image-axis-x")
    axV.plot(ax_img[:, 1], ax_img[:, 0], "k-", lw=1.0, gid="boundary-image-axis-x-tilde")
    lA = atlas.points_V["A"][0]
    axV.plot([lmin, lmin], [lmin, lA], "k-", lw=1.0, gid="boundary-image-limit-l")
    axV.plot([lmin, lA], [lmin, lmin], "k-", lw=1.0, gid="boundary-image-limit-l-tilde")
    f = atlas.fold_image.points
    axV.plot(f[:, 0], f[:, 1], "r-", lw=1.5, gid="fold-image")
    axV.plot([lmin, lmax], [lmin, lmax], color="0.7", lw=0.5, gid="diagonal")
    for label in V_LABELS:
        x, y = atlas.points_V[label]
        axV.plot([x], [y], "ko", ms=2.5)
        axV.annotate(rf"$\bar{{{label}}}$", (x, y), textcoords="offset points",
                     xytext=(3, 3), gid=f"label-V-{label}")
    axV.set_xlabel(r"$l$")
    axV.set_ylabel(r"$\tilde l$")
    axV.set_aspect("equal")
    axV.set_title(f"V, n = {n}")
    fig.tight_layout()
    return fig


def atlas_svg(n):
    return _svg_text(atlas_figure(n))


def deformation_figure(path):
    """Natural path in U, its image in V, and the relative length deviations."""
    n, l0 = path.n, path.l0
    atlas = characteristic_points(n)
    fig = Figure(figsize=(12, 4))
    axU, axV, axD = fig.subplots(1, 3)

    c = atlas.singular_curve.points
    axU.plot(c[:, 0], c[:, 1], "r-", lw=0.8, gid="singular-curve")
    axU.plot(path.column("x"), path.column("x_tilde"), "b-", lw=1.2, gid="path-U")
    for i, (x, y) in enumerate(path.anchor_points):
        axU.plot([x], [y], "ko", ms=3)
        axU.annotate(f"$P_{i + 1}$", (x, y), textcoords="offset points", xytext=(3, 3),
                     gid=f"anchor-P{i + 1}")
    axU.set_xlabel(r"$x$")
    axU.set_ylabel(r"$\tilde x$")
    axU.set_aspect("equal")

    f = atlas.fold_image.points
    axV.plot(f[:, 0], f[:, 1], "r-", lw=0.8, gid="fold-image")
    axV.plot(path.column("l"), path.column("l_tilde"), "b-", lw=1.2, gid="path-V")
    for name, p in zip(("H", "K"), path.hat_points):
        axV.plot([p[0]], [p[1]], "ko", ms=3)
        axV.annotate(rf"$\hat{{{name}}}$", tuple(p), textcoords="offset points",
                     xytext=(3, 3), gid=f"hat-{name}")
    pad = 4 * abs(path.hat_points[0][0] - l0) + 1e-3
    axV.set_xlim(l0 - pad, l0 + pad)
    axV.set_ylim(l0 - pad, l0 + pad)
    axV.set_xlabel(r"$l$")
    axV.set_ylabel(r"$\tilde l$")
    axV.set_aspect("equal")

    t = path.column("t")
    axD.plot(t, path.column("rel_dl"), label=r"$|l-l_0|/l_0$", gid="rel-dl")
    axD.plot(t, path.column("rel_dlt"), label=r"$|\tilde l-l_0|/l_0$", gid="rel-dlt")
    axD.set_xlabel("arclength parameter")
    axD.legend()
    fig.suptitle(f"natural deformation, n = {n}, l0 = {l0:.5f}")
    fig.tight_layout()
    return fig


def deformation_svg(path):
    return _svg_text(deformation_figure(path))

