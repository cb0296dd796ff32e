"""Shared helpers: independent oracles and reproducible randomness.

Oracle rule: expected values come either from closed forms evaluated
right here (never from the code under test) or from brute-force
numerics (dense trapezoid sums, explicit partial sums) that share no
code path with the package.
"""

import numpy as np
import pytest

from circlecomb.spectrum import CoefficientSequence

TWO_PI = 2.0 * np.pi


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)


def oracle_coefficients(fn, n, breakpoints=(), samples_per_piece=2 ** 17):
    """Brute-force Fourier coefficients by composite trapezoid sums.

    Splits [-pi, pi] at the given breakpoints so each piece is smooth;
    accuracy is O(h^2) per piece, around 1e-10 at the default density.
    Completely independent of the package's quadrature.
    """
    edges = np.concatenate(([-np.pi], np.sort(np.asarray(breakpoints, float)),
                            [np.pi]))
    k = np.arange(1, n + 1)
    a0 = 0.0
    a = np.zeros(n)
    b = np.zeros(n)
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 0.0:
            continue
        x = np.linspace(lo, hi, samples_per_piece + 1)
        fx = fn(x)
        a0 += np.trapezoid(fx, x) / TWO_PI
        a += np.trapezoid(fx[None, :] * np.cos(k[:, None] * x[None, :]),
                          x, axis=1) / np.pi
        b += np.trapezoid(fx[None, :] * np.sin(k[:, None] * x[None, :]),
                          x, axis=1) / np.pi
    return a0, a, b


def square_coefficients(n):
    """Unit square wave sign(theta): b_k = 4/(k pi) for odd k, else 0."""
    k = np.arange(1, n + 1)
    b = np.where(k % 2 == 1, 4.0 / (k * np.pi), 0.0)
    return CoefficientSequence(a0=0.0, a=np.zeros(n), b=b)


def delta_coefficients(theta0, n):
    """Unit point mass at theta0: a_k = cos(k theta0)/pi, b_k = sin/pi."""
    k = np.arange(1, n + 1)
    return CoefficientSequence(a0=1.0 / TWO_PI,
                               a=np.cos(k * theta0) / np.pi,
                               b=np.sin(k * theta0) / np.pi)


def random_trig_poly(rng, degree):
    """Random trigonometric polynomial returned as (a0, a, b, callable)."""
    a0 = float(rng.normal())
    a = rng.normal(size=degree)
    b = rng.normal(size=degree)
    k = np.arange(1, degree + 1)

    def fn(theta):
        theta = np.asarray(theta, dtype=float)
        return (a0
                + np.cos(np.multiply.outer(theta, k)) @ a
                + np.sin(np.multiply.outer(theta, k)) @ b)

    return a0, a, b, fn
