"""Deciding whether a function equals its own vanishing-window limit.

A function is *combed* when the shrinking-window averages recover its
pointwise value wherever it has one, with jump points carrying the
midpoint of their lateral limits.  Anything that breaks this (a
finite-height spike, a jump assigned a non-midpoint value) is *ragged*.
Raggedness is removable: the limit function itself is combed, and three
independent routes compute it (direct shrinking-window limits, series
reconstruction from coefficients, radial limits from inside the disk).

Verdicts are per grid node; grid density is an explicit parameter of
the report, not a claim about all points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._extrap import mass_signature, neville_to_zero
from .catalog import make
from .disk import DEFAULT_DELTA_SCHEDULE, _sinc, boundary_value_grid
from .errors import (CircleCombError, DomainError, NoConvergence,
                     QuadratureFailure, UndefinedHere)
from .realfilter import (DEFAULT_EPS_SCHEDULE, GridFunction,
                         _check_eps_schedule, extrapolated_limit,
                         kernel_filter_eval)
from .spectrum import (DEFAULT_N, CoefficientSequence, EvaluatorFunction,
                       circle_distance, compute_coefficients, grid_nodes,
                       partial_sum_grid, wrap_angle)

COMBED = "combed"
RAGGED = "ragged"

RECOVERED = "recovered"
SPIKE_MISMATCH = "spike_mismatch"
JUMP_MIDPOINT_MISMATCH = "jump_midpoint_mismatch"
UNDEFINED = "undefined"

DEFAULT_TOL = 1e-6

# Nodes closer than this to a declared singular point sit on it: their
# windows straddle the point symmetrically instead of shrinking away.
_SNAP = 1e-9


@dataclass(frozen=True)
class NodeReport:
    theta: float
    verdict: str
    value: Optional[float]
    residual: Optional[float]


@dataclass(frozen=True)
class ClassificationReport:
    overall: str
    params: dict
    nodes: tuple


@dataclass(frozen=True)
class CoefficientCertificate:
    """Always-combed verdict for coefficient data, with the spot check
    that the filter multiplier returns to 1 as the window shrinks."""

    verdict: str
    checked_k: tuple
    eps_values: tuple
    multipliers: tuple
    max_final_gap: float


def _node_schedule(es: np.ndarray, dist: float) -> np.ndarray:
    """Shrink the whole schedule so windows clear a singular point at
    the given distance; at the point itself keep the symmetric base."""
    if dist <= _SNAP or dist >= 2.0 * es[0]:
        return es
    return es * (dist / (2.0 * es[0]))


def _node_samples(f: EvaluatorFunction, theta: float, es: np.ndarray,
                  quad_tol: float):
    """Window averages along the (possibly shrunk) schedule at one node."""
    dists = [float(circle_distance(theta, s.theta))
             for s in f.singular_points]
    sched = _node_schedule(es, min(dists)) if dists else es
    vals = np.array([kernel_filter_eval(f, theta, float(e), tol=quad_tol)
                     for e in sched])
    return sched, vals


def _node_limit(f: EvaluatorFunction, theta: float, es: np.ndarray,
                quad_tol: float):
    """Shrinking-window limit at one node; returns (value, correction)."""
    sched, vals = _node_samples(f, theta, es, quad_tol)
    return extrapolated_limit(sched, vals)


def _lateral_limits(f: EvaluatorFunction, theta: float, h: float):
    """One-sided value estimates from samples at theta +- {2h, h, h/2}.

    Returns (plus, minus, err) with err the summed last extrapolation
    corrections — the probes' own error scale, used so that their
    truncation error is never mistaken for a genuine lateral gap.
    """
    offs = np.array([2.0 * h, h, 0.5 * h])
    plus = f.sample(wrap_angle(theta + offs))
    minus = f.sample(wrap_angle(theta - offs))
    lp, cp = neville_to_zero(offs, plus)
    lm, cm = neville_to_zero(offs, minus)
    return float(lp), float(lm), float(cp[-1]) + float(cm[-1])


def classify_pointwise(f: EvaluatorFunction, n_grid: int = 256,
                       eps_schedule: Sequence[float] = DEFAULT_EPS_SCHEDULE,
                       tol: float = DEFAULT_TOL) -> ClassificationReport:
    """Per-node comparison of f against its shrinking-window limit.

    A node is `recovered` when |f(theta) - limit| <= tol, a mismatch
    otherwise (`jump_midpoint_mismatch` when lateral-limit estimates
    differ by more than tol, `spike_mismatch` when they agree), and
    `undefined` when f has no value there, the window is inadmissible,
    or the limit itself is numerically inconclusive (extrapolation
    correction above tol/4).  Undefined nodes never make the function
    ragged: the comparison only applies where f is defined.

    When f has a finite value at a node but the window averages diverge
    as the window shrinks (concentrated mass right at the node, e.g. an
    outlier sample in interpolated grid data), the value is not
    recoverable and the node is a mismatch, split by the same
    lateral-limit probe.  Declared singular points are exempt: windows
    near them shrink with the distance, so genuine jumps and kinks do
    not trip this.
    """
    if n_grid < 16:
        raise DomainError(f"classification grid needs >= 16 nodes, "
                          f"got {n_grid}")
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    es = _check_eps_schedule(eps_schedule)
    h_lateral = 2.0 * (2.0 * math.pi / n_grid)
    quad_tol = min(1e-12, tol * 1e-3)

    nodes = []
    for theta in grid_nodes(n_grid):
        theta = float(theta)
        f_val = f(theta)
        if not np.isfinite(f_val):
            nodes.append(NodeReport(theta, UNDEFINED, None, None))
            continue
        try:
            sched, samples = _node_samples(f, theta, es, quad_tol)
        except (UndefinedHere, QuadratureFailure):
            nodes.append(NodeReport(theta, UNDEFINED, None, None))
            continue
        try:
            limit, corr = extrapolated_limit(sched, samples)
        except NoConvergence:
            limit, corr = None, math.inf
        if limit is not None and corr <= 0.25 * tol:
            residual = abs(f_val - limit)
            if residual <= tol:
                nodes.append(NodeReport(theta, RECOVERED, limit, residual))
                continue
        elif mass_signature(sched, samples, tol):
            # The averages do not settle: the node value rides on
            # concentrated mass the vanishing window can never keep,
            # so recovery fails outright.
            limit, residual = None, None
        else:
            nodes.append(NodeReport(theta, UNDEFINED, None, None))
            continue
        if limit is not None:
            residual = abs(f_val - limit)
        lp, lm, lerr = _lateral_limits(f, theta, h_lateral)
        if np.isfinite(lp) and np.isfinite(lm) \
                and abs(lp - lm) > tol + 4.0 * lerr:
            verdict = JUMP_MIDPOINT_MISMATCH
        else:
            verdict = SPIKE_MISMATCH
        nodes.append(NodeReport(theta, verdict, limit, residual))

    ragged = any(r.verdict in (SPIKE_MISMATCH, JUMP_MIDPOINT_MISMATCH)
                 for r in nodes)
    params = {"method": "pointwise", "n_grid": int(n_grid),
              "eps_schedule": [float(e) for e in es], "tol": float(tol)}
    return ClassificationReport(overall=RAGGED if ragged else COMBED,
                                params=params, nodes=tuple(nodes))


DEFAULT_CERT_EPS = (0.1, 0.05, 0.025, 0.0125)


def classify_coefficients(seq: CoefficientSequence,
                          eps_values: Sequence[float] = DEFAULT_CERT_EPS
                          ) -> CoefficientCertificate:
    """Coefficient data is combed unconditionally: its partial sums are
    trigonometric polynomials and the window average acts term-wise.
    The certificate records the multiplier sin(k eps)/(k eps) returning
    to 1 at a low, a middle and the top harmonic."""
    es = np.asarray(eps_values, dtype=float)
    if es.size < 2 or np.any(es <= 0) or np.any(es > math.pi) \
            or np.any(np.diff(es) >= 0):
        raise DomainError("certificate needs >= 2 strictly decreasing "
                          "half-widths in (0, pi]")
    if seq.n >= 1:
        ks = sorted({1, max(1, seq.n // 2), seq.n})
    else:
        ks = []
    mults = tuple(tuple(float(_sinc(np.asarray(k * e))) for e in es)
                  for k in ks)
    gap = max((abs(1.0 - row[-1]) for row in mults), default=0.0)
    return CoefficientCertificate(verdict=COMBED, checked_k=tuple(ks),
                                  eps_values=tuple(float(e) for e in es),
                                  multipliers=mults, max_final_gap=gap)


def certificate_report(cert: CoefficientCertificate) -> ClassificationReport:
    """Report form of the coefficient verdict, for serialization."""
    params = {"method": "coefficients",
              "checked_k": list(cert.checked_k),
              "eps_values": list(cert.eps_values),
              "multipliers": [list(row) for row in cert.multipliers],
              "max_final_gap": cert.max_final_gap}
    return ClassificationReport(overall=cert.verdict, params=params,
                                nodes=())


# ----------------------------------------------------------------- combing

def comb_by_filter_limit(f: EvaluatorFunction, n_grid: int = 256,
                         eps_schedule: Sequence[float] = DEFAULT_EPS_SCHEDULE
                         ) -> GridFunction:
    """The limit function itself, node by node; failures become mask
    holes instead of errors."""
    es = _check_eps_schedule(eps_schedule)
    thetas = grid_nodes(n_grid)
    values = np.full(n_grid, np.nan)
    defined = np.zeros(n_grid, dtype=bool)
    for i, theta in enumerate(thetas):
        try:
            values[i], _ = _node_limit(f, float(theta), es, 1e-12)
            defined[i] = True
        except (UndefinedHere, NoConvergence, QuadratureFailure):
            pass
    return GridFunction(
        values=values, defined=defined,
        singular_points=tuple(s.theta for s in f.singular_points),
        note="combed by shrinking-window limits")


@dataclass(frozen=True)
class FourierCombResult:
    """Reconstruction grid plus its own convergence diagnostic."""

    grid: GridFunction
    sup_change: float
    non_convergent: bool


def _generator_singulars(seq: CoefficientSequence) -> tuple:
    """Singular points of the function a tagged sequence came from.

    Combing removes spikes but keeps jumps and kinks, so a combed grid
    inherits the generator's singular points; they let classification
    keep its windows clear of the steep interpolated stretches there.
    Untagged sequences get no declarations.
    """
    if seq.generator is None:
        return ()
    try:
        entry = make(seq.generator["name"], **seq.generator["params"])
    except (CircleCombError, KeyError, TypeError):
        return ()
    if entry.evaluator is None:
        return ()
    return tuple(s.theta for s in entry.evaluator.singular_points)


def comb_from_coefficients(seq: CoefficientSequence, n_grid: int = 256,
                           diagnostic_tol: float = DEFAULT_TOL,
                           singular_points=None) -> FourierCombResult:
    """Partial-sum reconstruction at the grid nodes.

    The diagnostic is the sup-norm change between the half and full
    truncations; a large value flags a series still in motion at this
    order (non-convergent or just too short a truncation).
    `singular_points` defaults to whatever the generator tag implies.
    """
    if singular_points is None:
        singular_points = _generator_singulars(seq)
    full = partial_sum_grid(seq, n_grid)
    half = partial_sum_grid(seq, n_grid, m=seq.n // 2)
    sup = float(np.max(np.abs(full - half))) if seq.n else 0.0
    grid = GridFunction(
        values=full, defined=np.ones(n_grid, dtype=bool),
        singular_points=tuple(singular_points),
        note=f"series reconstruction at n={seq.n}")
    return FourierCombResult(grid=grid, sup_change=sup,
                             non_convergent=sup > diagnostic_tol)


def comb_by_fourier(f: EvaluatorFunction, n: int = DEFAULT_N,
                    n_grid: int = 256, coeff_tol: float = 1e-10,
                    diagnostic_tol: float = DEFAULT_TOL) -> FourierCombResult:
    """Comb through the coefficient route: integrate, then resum.

    Isolated spikes are invisible here by construction: their points
    are quadrature panel edges, never sample abscissae, so the
    coefficients (and everything downstream) match the spike-free
    function bit for bit.  NonIntegrableInput propagates.
    """
    seq = compute_coefficients(f, n=n, tol=coeff_tol)
    return comb_from_coefficients(
        seq, n_grid, diagnostic_tol,
        singular_points=tuple(s.theta for s in f.singular_points))


def comb_by_disk(seq: CoefficientSequence, n_grid: int = 256,
                 delta_schedule: Sequence[float] = DEFAULT_DELTA_SCHEDULE
                 ) -> GridFunction:
    """Comb through the disk route: radial boundary values at the nodes.

    Nodes whose ring values blow up (boundary singular points) are left
    undefined in the mask."""
    thetas = grid_nodes(n_grid)
    values, _, defined = boundary_value_grid(seq, thetas, delta_schedule)
    return GridFunction(values=values, defined=defined,
                        singular_points=_generator_singulars(seq),
                        note=f"radial boundary values at n={seq.n}")
