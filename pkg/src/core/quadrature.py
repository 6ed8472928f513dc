"""Composite Gauss-Legendre rules shared by projection, decay clocks and moments."""

import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

PANEL_ORDER = 16


@lru_cache(maxsize=8)
def _reference_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_rule(a: float, b: float, n_points: int, order: int = PANEL_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of ceil(n_points / order) equal Gauss-Legendre panels on [a, b].

    Nodes come out in increasing order, so sums over them are bit-reproducible.
    """
    panels = max(1, math.ceil(n_points / order))
    ref_nodes, ref_weights = _reference_rule(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
    weights = (half[:, None] * ref_weights[None, :]).ravel()
    return nodes, weights


def integrate(func, a: float, b: float, n_points: int) -> float:
    """Integrate a vectorised callable over [a, b]."""
    if b == a:
        return 0.0
    nodes, weights = composite_rule(a, b, n_points)
    return float(np.dot(weights, func(nodes)))
