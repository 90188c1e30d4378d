"""Self-contained cylinder and spherical Bessel kernels.

Provides J0, J1, J2, Y0, Y1, the Hankel function H_n^(1) = J_n + i*Y_n
(n = 0, 1), and the spherical Bessel functions j0, j1, j2.  These are the
only special functions the field synthesis and the closed-form moment
oracles need, so they are implemented here directly instead of pulling in
an external special-function dependency.

Evaluation strategy
-------------------
* t < 12 : ascending power series, accumulated in extended precision
  (``numpy.longdouble``) so the alternating-series cancellation near the
  crossover does not eat into the absolute-error budget.
* t >= 12 : integral representations evaluated with spectrally accurate
  quadrature.  For J_n the full-period trapezoidal sum of the Bessel
  integral is exact up to an aliasing term J_{M-n}(t), which is driven
  below 1e-14 by choosing the node count M from t.  For Y_n the standard
  oscillatory + monotone-tail split is integrated with composite
  Gauss-Legendre panels.
* spherical j_n : closed trigonometric forms, with a short power series
  below t = 0.5 guarding against cancellation.

Arguments above t = 1e4 are rejected rather than evaluated with silently
degraded accuracy.  All functions are pure and reentrant.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "EULER_GAMMA",
    "T_MAX",
    "bessel_j",
    "bessel_y",
    "hankel1",
    "spherical_j",
]

# Euler-Mascheroni constant to 20 digits (enters the Y_n series).
EULER_GAMMA = 0.57721566490153286061

# Domain cap: larger arguments are rejected, not silently degraded.
T_MAX = 1.0e4

# Branch crossovers.
_SERIES_CUTOFF = 12.0
_SPHERICAL_SERIES_CUTOFF = 0.5


def _check_t(t: float, name: str, positive: bool = False) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"{name} requires a finite argument, got {t!r}")
    if positive:
        if t <= 0.0:
            raise ValueError(f"{name} requires t > 0, got {t!r}")
    elif t < 0.0:
        raise ValueError(f"{name} requires t >= 0, got {t!r}")
    if t > T_MAX:
        raise ValueError(f"{name} is only supported for t <= {T_MAX:g}, got {t!r}")
    return t


def _check_order(order: int, allowed: tuple[int, ...], name: str) -> int:
    if order not in allowed:
        raise ValueError(f"{name} supports orders {allowed}, got {order!r}")
    return int(order)


# ----------------------------------------------------------------------
# small-argument series (longdouble accumulation)
# ----------------------------------------------------------------------

def _j_series(n: int, t: float) -> float:
    x = np.longdouble(t) / 2
    x2 = x * x
    term = x**n / math.factorial(n)
    total = term
    for p in range(1, 120):
        term = term * (-x2) / (p * (n + p))
        total += term
        if abs(term) < np.longdouble(1e-24):
            break
    return float(total)


def _y0_series(t: float) -> float:
    x = np.longdouble(t) / 2
    x2 = x * x
    s = np.longdouble(0)
    term = np.longdouble(1)  # x^(2k) / (k!)^2
    harmonic = np.longdouble(0)
    for kk in range(1, 200):
        term = term * x2 / (kk * kk)
        harmonic += np.longdouble(1) / kk
        contrib = term * harmonic
        s += contrib if kk % 2 == 1 else -contrib
        if abs(contrib) < np.longdouble(1e-24):
            break
    lead = (np.log(x) + np.longdouble(EULER_GAMMA)) * np.longdouble(_j_series(0, t))
    return float((2 / np.pi) * (lead + s))


def _y1_series(t: float) -> float:
    x = np.longdouble(t) / 2
    x2 = x * x
    g = np.longdouble(EULER_GAMMA)
    s = np.longdouble(0)
    term = np.longdouble(1)  # (-x^2)^k / (k! (k+1)!)
    harmonic = np.longdouble(0)  # H_k
    for kk in range(0, 200):
        if kk > 0:
            term = term * (-x2) / (kk * (kk + 1))
            harmonic += np.longdouble(1) / kk
        # psi(k+1) + psi(k+2) = -2*gamma + 2*H_k + 1/(k+1)
        contrib = term * (-2 * g + 2 * harmonic + np.longdouble(1) / (kk + 1))
        s += contrib
        if kk > 3 and abs(contrib) < np.longdouble(1e-24):
            break
    lead = np.log(x) * np.longdouble(_j_series(1, t))
    t_ld = np.longdouble(t)
    return float((2 / np.pi) * lead - 2 / (np.pi * t_ld) - (t_ld / (2 * np.pi)) * s)


# ----------------------------------------------------------------------
# large-argument integral representations
# ----------------------------------------------------------------------

@lru_cache(maxsize=64)
def _trapezoid_angles(node_count: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(node_count) / node_count


def _j_node_count(t: float) -> int:
    # Aliasing error of the full-period trapezoid sum is ~|J_{M-n}(t)|,
    # superexponentially small once M - t outruns the Airy transition width.
    return int(2 * math.ceil((t + 60.0 + 10.0 * t ** (1.0 / 3.0)) / 2.0))


def _j_integral(n: int, t: float) -> float:
    node_count = _j_node_count(t)
    theta = _trapezoid_angles(node_count)
    return float(np.sum(np.cos(t * np.sin(theta) - n * theta)) / node_count)


@lru_cache(maxsize=8)
def _gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _y_integral(n: int, t: float) -> float:
    # Oscillatory part: (1/pi) * int_0^pi sin(t sin(theta) - n theta) dtheta,
    # composite 16-point Gauss panels sized to a few oscillations each.
    xg, wg = _gauss_nodes(16)
    panels = max(4, int(math.ceil(t / 3.0)))
    edges = np.linspace(0.0, np.pi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    theta = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weight = (half[:, None] * wg[None, :]).ravel()
    oscillatory = np.sum(weight * np.sin(t * np.sin(theta) - n * theta)) / np.pi

    # Monotone tail: (1/pi) * int_0^inf (e^{n tau} + (-1)^n e^{-n tau})
    # e^{-t sinh tau} dtau, truncated where the decay hits e^{-60}.
    xg2, wg2 = _gauss_nodes(64)
    tau_max = math.asinh(60.0 / t)
    tau = 0.5 * tau_max * (xg2 + 1.0)
    wt = 0.5 * tau_max * wg2
    tail = (np.exp(n * tau) + (-1) ** n * np.exp(-n * tau)) * np.exp(-t * np.sinh(tau))
    return float(oscillatory - np.sum(wt * tail) / np.pi)


# ----------------------------------------------------------------------
# public API
# ----------------------------------------------------------------------

def bessel_j(order: int, t: float) -> float:
    """Bessel function of the first kind J_order(t) for order in {0, 1, 2}.

    Absolute error stays below 1e-12 on [0, 200]; arguments up to 1e4 are
    accepted, larger ones rejected.
    """
    order = _check_order(order, (0, 1, 2), "bessel_j")
    t = _check_t(t, "bessel_j")
    if t < _SERIES_CUTOFF:
        return _j_series(order, t)
    return _j_integral(order, t)


def bessel_y(order: int, t: float) -> float:
    """Bessel function of the second kind Y_order(t) for order in {0, 1}.

    Requires t > 0 (logarithmic singularity at the origin); absolute error
    stays below 1e-10 on [1e-3, 200].
    """
    order = _check_order(order, (0, 1), "bessel_y")
    t = _check_t(t, "bessel_y", positive=True)
    if t < _SERIES_CUTOFF:
        return _y0_series(t) if order == 0 else _y1_series(t)
    return _y_integral(order, t)


def hankel1(order: int, t: float) -> complex:
    """Hankel function of the first kind, H_order^(1)(t) = J + i*Y, order in {0, 1}."""
    order = _check_order(order, (0, 1), "hankel1")
    t = _check_t(t, "hankel1", positive=True)
    return complex(bessel_j(order, t), bessel_y(order, t))


def _spherical_series(n: int, t: float) -> float:
    # j_n(t) = sum_p (-1)^p t^(n+2p) / (2^p p! (2n+2p+1)!!)
    double_fact = 1.0
    for m in range(1, 2 * n + 2, 2):
        double_fact *= m
    term = t**n / double_fact
    total = term
    t2 = t * t
    for p in range(1, 60):
        term *= -t2 / (2.0 * p * (2 * n + 2 * p + 1))
        total += term
        if abs(term) < 1e-20:
            break
    return total


def spherical_j(order: int, t: float) -> float:
    """Spherical Bessel function j_order(t) for order in {0, 1, 2}.

    Closed trigonometric forms, with a series branch below t = 0.5 that
    avoids the small-argument cancellation; absolute error below 1e-12.
    """
    order = _check_order(order, (0, 1, 2), "spherical_j")
    t = _check_t(t, "spherical_j")
    if t < _SPHERICAL_SERIES_CUTOFF:
        return _spherical_series(order, t)
    s, c = math.sin(t), math.cos(t)
    if order == 0:
        return s / t
    if order == 1:
        return s / (t * t) - c / t
    return (3.0 / t**3 - 1.0 / t) * s - 3.0 * c / (t * t)
