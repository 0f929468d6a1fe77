"""Gauss-Legendre rules shared by the measure, solver and
distributional code.

Everything here works on numpy arrays; rules are cached since the
same orders are requested over and over by the panel loops.
"""

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre


@lru_cache(maxsize=None)
def gauss_legendre(order: int):
    """Return the nodes and weights of the `order` point rule on [-1, 1]."""
    nodes, weights = legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def map_rule(order: int, lo: float, hi: float):
    """Map the rule on [-1, 1] onto [lo, hi]."""
    nodes, weights = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    return lo + half * (nodes + 1.0), half * weights


def refine(lo: float, hi: float, max_width: float) -> np.ndarray:
    """Uniform breakpoints from lo to hi with spacing <= max_width."""
    count = max(1, int(np.ceil((hi - lo) / max_width - 1e-9)))
    return np.linspace(lo, hi, count + 1)


def composite_rule(breaks, order: int):
    """Nodes and weights of the `order` point rule repeated on every
    panel [breaks[i], breaks[i + 1]].

    Returned arrays are flat, panel after panel.
    """
    breaks = np.asarray(breaks, dtype=float)
    nodes, weights = gauss_legendre(order)
    lo = breaks[:-1, None]
    half = 0.5 * np.diff(breaks)[:, None]
    return (lo + half * (nodes + 1.0)).ravel(), (half * weights).ravel()


def merge_breaks(*groups) -> np.ndarray:
    """Sorted union of breakpoints with near duplicates dropped."""
    points = np.sort(np.concatenate([np.atleast_1d(np.asarray(g, dtype=float))
                                     for g in groups]))
    if points.size == 0:
        return points
    scale = max(1.0, float(np.max(np.abs(points))))
    keep = np.concatenate(([True], np.diff(points) > 1e-13 * scale))
    return points[keep]


@lru_cache(maxsize=None)
def _inverse_vandermonde(order: int) -> np.ndarray:
    nodes, _ = gauss_legendre(order)
    return np.linalg.inv(legendre.legvander(nodes, order - 1))


def interpolation_matrix(order: int, targets) -> np.ndarray:
    """Matrix taking values at the `order` Gauss nodes on [-1, 1] to the
    values of their interpolating polynomial at `targets` (also on [-1, 1]).

    The last axis of the result indexes the nodes.
    """
    targets = np.asarray(targets, dtype=float)
    vander = legendre.legvander(targets, order - 1)
    return vander @ _inverse_vandermonde(order)
