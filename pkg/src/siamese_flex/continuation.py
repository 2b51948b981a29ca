"""Pseudo-arclength tracing of planar implicit curves G(x, y) = 0."""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, TraceError

FD_STEP = 1e-7


def gradient(G, p, h=FD_STEP):
    x, y = p
    gx = (G(x + h, y) - G(x - h, y)) / (2 * h)
    gy = (G(x, y + h) - G(x, y - h)) / (2 * h)
    return np.array([gx, gy])


def correct(G, q, normal, tol=1e-12, max_iter=12):
    """Newton on G restricted to the line through ``q`` along ``normal``."""
    z = np.array(q, dtype=float)
    for _ in range(max_iter):
        g = G(*z)
        if abs(g) < tol:
            return z
        dg = (G(*(z + FD_STEP * normal)) - G(*(z - FD_STEP * normal))) / (2 * FD_STEP)
        if dg == 0.0 or not math.isfinite(dg):
            return None
        z = z - (g / dg) * normal
    return z if abs(G(*z)) < tol else None


def project(G, p, tol=1e-12):
    """Move ``p`` onto G = 0 along the local gradient direction."""
    g = gradient(G, p)
    nrm = np.linalg.norm(g)
    if nrm == 0.0:
        return None
    return correct(G, p, g / nrm, tol)


def trace(G, start, direction, step=1e-3, stop=None, max_steps=100000, tol=1e-12,
          max_halvings=50, max_turn=0.2):
    """Follow the zero set of ``G`` from ``start``, heading along ``direction``.

    Predictor: a step of length ``step`` along the unit tangent. Corrector: Newton
    in the hyperplane normal to the predictor. A failed corrector (no convergence,
    leaving the domain, or turning by more than ``max_turn`` radians) halves the
    step; after ``max_halvings`` consecutive halvings a TraceError is raised.

    ``stop(prev, new)`` is called after every accepted step; a truthy return
    ends the trace and is returned alongside the points.
    """
    p = np.array(start, dtype=float)
    points = [p.copy()]
    t_prev = np.asarray(direction, dtype=float)
    t_prev = t_prev / np.linalg.norm(t_prev)
    h = step
    halvings = 0
    for _ in range(max_steps):
        try:
            g = gradient(G, p)
        except DomainError as exc:
            raise TraceError(f"gradient unavailable: {exc}", last_point=p) from exc
        nrm = np.linalg.norm(g)
        if nrm == 0.0:
            raise TraceError("singular point on the traced curve", last_point=p)
        normal = g / nrm
        tangent = np.array([-normal[1], normal[0]])
        if tangent @ t_prev < 0:
            tangent = -tangent

        z = None
        try:
            z = correct(G, p + h * tangent, normal, tol)
        except DomainError:
            z = None
        if z is not None:
            d = z - p
            dn = np.linalg.norm(d)
            if dn == 0.0 or (d / dn) @ tangent < math.cos(max_turn):
                z = None
        if z is None:
            h *= 0.5
            halvings += 1
            if halvings > max_halvings:
                raise TraceError("corrector failed to converge", last_point=p)
            continue

        halvings = 0
        points.append(z)
        t_prev = tangent
        hit = stop(p, z) if stop is not None else None
        p = z
        if hit:
            return np.array(points), hit
        h = min(step, 2 * h)
    raise TraceError("maximum number of continuation steps reached", last_point=p)
