"""Gauss-Legendre rules for radial integrals on the half line."""

from __future__ import annotations

from functools import lru_cache

from scipy.special import roots_legendre


@lru_cache(maxsize=None)
def unit_rule(order: int):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    if order < 2:
        raise ValueError("quadrature order must be at least 2")
    x, w = roots_legendre(order)
    u = 0.5 * (x + 1.0)
    w = 0.5 * w
    u.setflags(write=False)
    w.setflags(write=False)
    return u, w


def semi_infinite_rule(order: int, scale: float = 1.0):
    """Rule for integrals over [0, inf) via the map y = scale * u / (1 - u).

    ``scale`` sets where the nodes concentrate: half of them land below y = scale.
    """
    if not scale > 0.0:
        raise ValueError("map scale must be positive")
    u, w = unit_rule(order)
    y = scale * u / (1.0 - u)
    wy = scale * w / (1.0 - u) ** 2
    return y, wy
