"""Composite Gauss-Legendre panel quadrature with pinned panel boundaries.

All integrals in this package go through :func:`integrate`.  Panels are
pinned at declared trouble points (jumps, kinks, poles, interpolation
nodes) so that sample abscissae never land on them: Gauss-Legendre nodes
are strictly interior to each panel.  Refinement doubles the panel count
until two consecutive levels agree to the requested tolerance.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureFailure

GAUSS_ORDER = 16
MAX_DOUBLINGS = 12

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)


def _panel_samples(edges):
    """Map the reference Gauss rule onto every panel described by `edges`.

    Returns (x, w) flat arrays of sample abscissae and weights.
    """
    lo = edges[:-1]
    half = 0.5 * (edges[1:] - lo)
    mid = lo + half
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    w = half[:, None] * _WEIGHTS[None, :]
    return x.ravel(), w.ravel()


def _initial_edges(lo, hi, pins, base_panels):
    pins = np.asarray(sorted(p for p in pins if lo < p < hi), dtype=float)
    anchors = np.concatenate(([lo], pins, [hi]))
    pieces = []
    for a, b in zip(anchors[:-1], anchors[1:]):
        pieces.append(np.linspace(a, b, base_panels + 1)[:-1])
    pieces.append(np.array([hi]))
    return np.concatenate(pieces)


def _refine(edges):
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(edges.size + mids.size)
    out[0::2] = edges
    out[1::2] = mids
    return out


def integrate(fn, lo, hi, pins=(), tol=1e-10, base_panels=1,
              max_doublings=MAX_DOUBLINGS):
    """Integrate `fn` over [lo, hi] with panel boundaries pinned at `pins`.

    Parameters
    ----------
    fn : callable
        Vectorized integrand, ndarray in, ndarray out.
    lo, hi : float
        Integration limits, lo < hi.
    pins : iterable of float
        Points that must coincide with panel boundaries.  Only pins
        strictly inside (lo, hi) matter; the limits are boundaries anyway.
    tol : float
        Absolute tolerance on the difference of two consecutive
        refinement levels.
    base_panels : int
        Panels per pin-delimited segment at the coarsest level.

    Returns
    -------
    (value, estimate) : tuple of float
        The integral and the last inter-level difference.

    Raises
    ------
    QuadratureFailure
        If the doubling budget is exhausted before the estimate drops
        below `tol`.
    """
    edges = _initial_edges(lo, hi, pins, base_panels)
    x, w = _panel_samples(edges)
    value = float(np.dot(w, fn(x)))
    estimate = np.inf
    for _ in range(max_doublings):
        edges = _refine(edges)
        x, w = _panel_samples(edges)
        new = float(np.dot(w, fn(x)))
        estimate = abs(new - value)
        value = new
        if estimate <= tol:
            return value, estimate
    raise QuadratureFailure(
        f"panel refinement exhausted ({max_doublings} doublings), "
        f"estimate {estimate:.3e} > tol {tol:.3e}",
        value=value, estimate=estimate)


def integrate_many(fns_weight_fn, lo, hi, pins=(), tol=1e-10, base_panels=1,
                   max_doublings=MAX_DOUBLINGS):
    """Shared-sample variant: integrate a whole family of integrands at once.

    `fns_weight_fn(x)` must return a 2-D array, one row per integrand,
    evaluated at the flat sample array `x`.  All rows share the same
    panels; convergence is judged on the worst row.  Returns
    (values, estimate) with `values` a 1-D array.
    """
    edges = _initial_edges(lo, hi, pins, base_panels)
    x, w = _panel_samples(edges)
    values = fns_weight_fn(x) @ w
    estimate = np.inf
    for _ in range(max_doublings):
        edges = _refine(edges)
        x, w = _panel_samples(edges)
        new = fns_weight_fn(x) @ w
        estimate = float(np.max(np.abs(new - values)))
        values = new
        if estimate <= tol:
            return values, estimate
    raise QuadratureFailure(
        f"panel refinement exhausted ({max_doublings} doublings), "
        f"estimate {estimate:.3e} > tol {tol:.3e}",
        value=values, estimate=estimate)
