"""Affine transport between a physical interval [a, b] and the circle.

The map is x = a + (b - a)(theta + pi) / (2 pi), a pure stretch: window
averages commute with it exactly, with the half-width scaled by the
same factor.  Interval functions are not periodic, so their pullbacks
mask the wrap-around seam: both endpoints are declared non-integrable
boundary points, and any window average whose window crosses the seam
is refused rather than silently blending g(a) with g(b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _quad
from .errors import DomainError, OutOfDomain, UndefinedHere
from .realfilter import GridFunction, grid_evaluator, kernel_filter_grid
from .spectrum import (TWO_PI, EvaluatorFunction, SingularPoint,
                       circle_distance, wrap_angle)


@dataclass(frozen=True)
class IntervalMap:
    """Affine chart [a, b] <-> [-pi, pi] with a -> -pi and b -> +pi."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)) or not b > a:
            raise DomainError(f"need finite b > a, got [{self.a}, {self.b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def to_canonical(self, x):
        xs = np.asarray(x, dtype=float)
        if np.any(xs < self.a) or np.any(xs > self.b):
            raise OutOfDomain(f"point outside [{self.a}, {self.b}]")
        th = TWO_PI * (xs - self.a) / self.length - math.pi
        return float(th) if np.ndim(x) == 0 else th

    def from_canonical(self, theta):
        th = np.asarray(theta, dtype=float)
        if np.any(th < -math.pi) or np.any(th > math.pi):
            raise OutOfDomain("angle outside [-pi, pi]")
        x = self.a + self.length * (th + math.pi) / TWO_PI
        return float(x) if np.ndim(theta) == 0 else x

    def epsilon_map(self, eps_canonical: float) -> float:
        """Physical window half-width matching a canonical one."""
        if not (0.0 < eps_canonical <= math.pi):
            raise DomainError(f"canonical half-width {eps_canonical} "
                              "outside (0, pi]")
        return self.length / TWO_PI * eps_canonical

    def epsilon_to_canonical(self, eps_physical: float) -> float:
        if not (0.0 < eps_physical <= 0.5 * self.length):
            raise DomainError(f"physical half-width {eps_physical} outside "
                              f"(0, {0.5 * self.length}]")
        return TWO_PI / self.length * eps_physical


def _interval_map_of(g: EvaluatorFunction) -> IntervalMap:
    if g.periodic:
        raise DomainError("evaluator already lives on the circle; "
                          "transport applies to interval domains")
    return IntervalMap(*g.domain)


def pullback(g: EvaluatorFunction) -> EvaluatorFunction:
    """Canonical-circle version of an interval evaluator.

    Declared trouble points move along with the map, and both interval
    endpoints become non-integrable boundary points at the seam, so no
    window average ever blends values from the two ends.
    """
    m = _interval_map_of(g)

    def rule(th):
        th = np.asarray(th, dtype=float)
        return g.rule(m.from_canonical(wrap_angle(th)))

    seam = (SingularPoint(-math.pi, integrable=False),
            SingularPoint(math.pi, integrable=False))
    return EvaluatorFunction(
        rule=rule,
        singular_points=tuple(
            SingularPoint(m.to_canonical(s.theta), s.integrable)
            for s in g.singular_points) + seam,
        defect_points=tuple(m.to_canonical(p) for p in g.defect_points),
        quadrature_pins=tuple(m.to_canonical(p) for p in g.quadrature_pins),
        name=f"pullback-{g.name}" if g.name else "pullback")


def transport_filter(g: EvaluatorFunction, x: float, eps_physical: float,
                     tol: float = 1e-10) -> float:
    """Window average of an interval evaluator in its own coordinate.

    The whole window must fit inside [a, b]; averages have no meaning
    past the boundary.  Matches the canonical filter of the pullback at
    the mapped point and half-width, because the map is affine.
    """
    m = _interval_map_of(g)
    if not 0.0 < eps_physical:
        raise DomainError(f"window half-width must be positive, "
                          f"got {eps_physical}")
    lo, hi = x - eps_physical, x + eps_physical
    if lo < m.a or hi > m.b:
        raise OutOfDomain(
            f"window [{lo}, {hi}] leaves the domain [{m.a}, {m.b}]")
    for s in g.singular_points:
        if not s.integrable and lo <= s.theta <= hi:
            raise UndefinedHere(
                f"non-integrable singular point at {s.theta} inside "
                f"the window around {x}")
    pins = tuple(sorted(p for p in g.pin_points() if lo < p < hi))
    value, _ = _quad.integrate(lambda u: g.sample(u), lo, hi, pins=pins,
                               tol=tol * 2.0 * eps_physical)
    return value / (2.0 * eps_physical)


def grid_pullback_evaluator(grid: GridFunction, m: IntervalMap
                            ) -> EvaluatorFunction:
    """Interpolant of a physical-domain grid, seam masked.

    Rows of a domain-tagged grid sample g at the images of the
    canonical nodes, so the values carry over node for node; only the
    seam bookkeeping differs from a plain circle grid.
    """
    ev = grid_evaluator(grid)
    seam = (SingularPoint(-math.pi, integrable=False),
            SingularPoint(math.pi, integrable=False))
    return replace(ev, singular_points=ev.singular_points + seam,
                   name=f"interval-{ev.name}")


def mask_boundary_windows(grid: GridFunction, eps: float) -> GridFunction:
    """Undefine filtered nodes whose window reached across the seam.

    The circular grid filter wraps around; on interval data wrapping
    means blending the two ends, so every node whose stencil (window
    plus one interpolation cell on each side) touches the seam loses
    its value.
    """
    h = TWO_PI / grid.n
    thetas = grid.thetas()
    keep = circle_distance(thetas, math.pi) > eps + h
    return GridFunction(
        values=np.where(keep, grid.values, np.nan),
        defined=grid.defined & keep,
        singular_points=grid.singular_points,
        note=grid.note + " boundary-masked")


def filter_physical_grid(grid: GridFunction, domain, eps_physical: float
                         ) -> GridFunction:
    """Window-average a domain-tagged grid with a physical half-width."""
    m = IntervalMap(*domain)
    eps = m.epsilon_to_canonical(eps_physical)
    return mask_boundary_windows(kernel_filter_grid(grid, eps), eps)
