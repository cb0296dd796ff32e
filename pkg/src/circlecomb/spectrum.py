"""Coefficient sequences of periodic functions and operations on them.

Conventions used across the whole package:

    f(theta) = a0 + sum_{k>=1} (a_k cos(k theta) + b_k sin(k theta))

with theta on [-pi, pi).  The complex view pairs the two real
coefficients of each harmonic as c_k = a_k - i b_k, so that
f = a0 + Re sum_k c_k e^{i k theta}.  The mean a0 is kept separate and
is never part of the complex sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _quad
from .errors import DomainError, NonIntegrableInput, QuadratureFailure

TWO_PI = 2.0 * math.pi

DEFAULT_N = 256
DEFAULT_COEFF_TOL = 1e-10

# k-block size for chunked trigonometric sums; bounds temporary arrays.
_CHUNK = 8192


def wrap_angle(theta):
    """Map angles to the principal branch [-pi, pi)."""
    th = np.asarray(theta, dtype=float)
    wrapped = th - TWO_PI * np.round(th / TWO_PI)
    wrapped = np.where(wrapped >= math.pi, wrapped - TWO_PI, wrapped)
    if np.ndim(theta) == 0:
        return float(wrapped)
    return wrapped


def circle_distance(x, y):
    """Arc distance between two angles on the circle."""
    return np.abs(wrap_angle(np.asarray(x, dtype=float) - y))


@dataclass(frozen=True)
class SingularPoint:
    """A declared trouble point of an evaluator.

    `integrable` is True for jumps, kinks and integrable blowups, False
    for poles that defeat every window integral containing them.
    """
    theta: float
    integrable: bool = True


@dataclass(frozen=True)
class EvaluatorFunction:
    """A pointwise evaluation rule on the circle (or on an interval).

    `rule` maps angles to values; it must accept a float ndarray and
    return one of the same shape (scalars also work).  It returns NaN
    wherever the function has no value.  `singular_points` declares
    jumps, kinks and poles so quadrature can pin panels there and
    classification can keep its windows clear.  `defect_points` are
    removable single-point defects (spikes): quadrature pins panels at
    them so no sample abscissa ever lands on one, which makes them
    invisible to every integral.  `quadrature_pins` are additional panel
    anchors with no analytic meaning, e.g. interpolation nodes.
    """
    rule: Callable
    singular_points: tuple = ()
    defect_points: tuple = ()
    quadrature_pins: tuple = ()
    domain: tuple = (-math.pi, math.pi)
    name: str = ""

    def __call__(self, theta):
        out = self.rule(np.asarray(theta, dtype=float))
        if np.ndim(theta) == 0:
            return float(out)
        return out

    def sample(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        out = np.asarray(self.rule(thetas), dtype=float)
        if out.shape != thetas.shape:
            out = np.array([self.rule(float(t)) for t in thetas], dtype=float)
        return out

    @property
    def periodic(self):
        return self.domain == (-math.pi, math.pi)

    def pin_points(self):
        """All abscissae that quadrature must place panel edges at."""
        pts = [s.theta for s in self.singular_points]
        pts.extend(self.defect_points)
        pts.extend(self.quadrature_pins)
        return pts


@dataclass(frozen=True)
class CoefficientSequence:
    """Truncated coefficient sequence: a0 plus harmonics k = 1..n, dense.

    `a` and `b` are read-only float arrays with a[j], b[j] the
    coefficients of harmonic k = j + 1.  There are no gaps: an absent
    harmonic is stored as an explicit zero.  `generator`, when present,
    is a catalog tag {"name": ..., "params": {...}} that can regenerate
    the sequence exactly at any truncation order.  `quadrature_error` is
    the inter-level error estimate when the sequence came out of
    numerical integration, None otherwise.
    """
    a0: float
    a: np.ndarray
    b: np.ndarray
    generator: Optional[dict] = None
    quadrature_error: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        if a.ndim != 1 or a.shape != b.shape:
            raise DomainError("coefficient arrays must be 1-D and equal length")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self):
        return self.a.size

    def complex_view(self):
        """c_k = a_k - i b_k as a complex array, k = 1..n."""
        return self.a - 1j * self.b

    def k_values(self):
        return np.arange(1, self.n + 1, dtype=float)


def from_complex(a0, c):
    """Inverse of complex_view: rebuild (a, b) from c_k = a_k - i b_k."""
    c = np.asarray(c, dtype=complex)
    return CoefficientSequence(a0=a0, a=c.real.copy(), b=(-c.imag).copy())


def compute_coefficients(f, n=DEFAULT_N, panels_per_interval=4,
                         tol=DEFAULT_COEFF_TOL):
    """Project an evaluator on the first `n` harmonics by panel quadrature.

    Parameters
    ----------
    f : EvaluatorFunction
        Must be integrable over the circle: no singular point may be
        flagged non-integrable.
    n : int
        Truncation order.
    panels_per_interval : int
        Panels per pin-delimited segment at the coarsest level.
    tol : float
        Absolute tolerance on the worst coefficient, judged between
        consecutive refinement levels.

    Returns
    -------
    CoefficientSequence
        With `quadrature_error` set to the final error estimate.

    Raises
    ------
    NonIntegrableInput
        If any singular point is flagged non-integrable.
    QuadratureFailure
        If the refinement budget runs out above `tol`.
    """
    for s in f.singular_points:
        if not s.integrable:
            raise NonIntegrableInput(
                f"cannot integrate across the point theta={s.theta!r}")
    lo, hi = f.domain
    edges = _quad._initial_edges(lo, hi, f.pin_points(), panels_per_interval)

    def level_values(edges):
        x, w = _quad._panel_samples(edges)
        fw = f.sample(x) * w
        a0 = fw.sum() / TWO_PI
        a = np.empty(n)
        b = np.empty(n)
        for k0 in range(0, n, _CHUNK):
            k = np.arange(k0 + 1, min(k0 + _CHUNK, n) + 1, dtype=float)
            kx = np.multiply.outer(k, x)
            a[k0:k0 + k.size] = np.cos(kx) @ fw / math.pi
            b[k0:k0 + k.size] = np.sin(kx) @ fw / math.pi
        return a0, a, b

    a0, a, b = level_values(edges)
    estimate = np.inf
    for _ in range(_quad.MAX_DOUBLINGS):
        edges = _quad._refine(edges)
        a0n, an, bn = level_values(edges)
        estimate = max(abs(a0n - a0),
                       float(np.max(np.abs(an - a))) if n else 0.0,
                       float(np.max(np.abs(bn - b))) if n else 0.0)
        a0, a, b = a0n, an, bn
        if estimate <= tol:
            return CoefficientSequence(a0=a0, a=a, b=b,
                                       quadrature_error=estimate)
    raise QuadratureFailure(
        f"coefficient quadrature did not reach tol {tol:.3e}, "
        f"estimate {estimate:.3e}", value=None, estimate=estimate)


def partial_sum_eval(seq, theta, m=None):
    """Evaluate the order-`m` partial sum at `theta` (scalar or array).

    `m` defaults to the full truncation order and must not exceed it.
    """
    m = seq.n if m is None else int(m)
    if not 0 <= m <= seq.n:
        raise DomainError(f"partial sum order {m} outside [0, {seq.n}]")
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    acc = np.full(th.shape, seq.a0)
    for k0 in range(0, m, _CHUNK):
        k = np.arange(k0 + 1, min(k0 + _CHUNK, m) + 1, dtype=float)
        kth = np.multiply.outer(th, k)
        acc = acc + np.cos(kth) @ seq.a[k0:k0 + k.size] \
                  + np.sin(kth) @ seq.b[k0:k0 + k.size]
    if np.ndim(theta) == 0:
        return float(acc[0])
    return acc


def grid_nodes(n_nodes):
    """Uniform circle grid theta_i = -pi + 2 pi i / n, i = 0..n-1.

    Computed as ((2 i - n) / n) * pi: the ratio is exactly -1 at i = 0
    and exactly 0 at i = n/2, so the seam node is bit-exact -pi for
    every n (and the origin exact for even n), and no node ever rounds
    outside [-pi, pi).
    """
    n = int(n_nodes)
    i = np.arange(n)
    return ((2 * i - n) / n) * math.pi


def partial_sum_grid(seq, n_nodes, m=None):
    """Partial sums on a uniform grid, by recursive powers of e^{i theta}.

    Equivalent to partial_sum_eval at grid_nodes(n_nodes) but linear in
    memory and fast for very large truncation orders.
    """
    m = seq.n if m is None else int(m)
    if not 0 <= m <= seq.n:
        raise DomainError(f"partial sum order {m} outside [0, {seq.n}]")
    theta = grid_nodes(n_nodes)
    z = np.exp(1j * theta)
    acc = np.zeros(theta.size, dtype=complex)
    c = seq.complex_view()
    p_start = z.copy()
    for k0 in range(0, m, _CHUNK):
        size = min(_CHUNK, m - k0)
        powers = np.ones((size, theta.size), dtype=complex)
        powers[1:] = z
        np.cumprod(powers, axis=0, out=powers)
        powers *= p_start
        acc += powers.T @ c[k0:k0 + size]
        p_start = powers[-1] * z
    return seq.a0 + acc.real


def angular_derivative(seq, order=1):
    """Differentiate `order` times with respect to the angle.

    One application maps (a_k, b_k) to (k b_k, -k a_k) and zeroes the
    mean.  Higher orders are computed by repeating the single step, so
    applying order m and then order n performs exactly the same float
    operations as applying order m + n at once.
    """
    order = int(order)
    if order < 0:
        raise DomainError("derivative order must be >= 0")
    a0, a, b = seq.a0, seq.a, seq.b
    k = seq.k_values()
    for _ in range(order):
        a, b = k * b, -(k * a)
        a0 = 0.0
    return CoefficientSequence(a0=a0, a=a, b=b)


def fourier_conjugate(seq):
    """The conjugate series: (a_k, b_k) -> (-b_k, a_k), mean dropped."""
    return CoefficientSequence(a0=0.0, a=-seq.b, b=seq.a.copy())


def rotate(seq, alpha):
    """Coefficients of f(theta - alpha)."""
    k = seq.k_values()
    ca, sa = np.cos(k * alpha), np.sin(k * alpha)
    return CoefficientSequence(a0=seq.a0,
                               a=seq.a * ca - seq.b * sa,
                               b=seq.a * sa + seq.b * ca)


def linear_combination(x, y, sx=1.0, sy=1.0):
    """sx * x + sy * y, zero-padding the shorter sequence."""
    n = max(x.n, y.n)
    xa = np.zeros(n); xb = np.zeros(n)
    ya = np.zeros(n); yb = np.zeros(n)
    xa[:x.n], xb[:x.n] = x.a, x.b
    ya[:y.n], yb[:y.n] = y.a, y.b
    return CoefficientSequence(a0=sx * x.a0 + sy * y.a0,
                               a=sx * xa + sy * ya,
                               b=sx * xb + sy * yb)
