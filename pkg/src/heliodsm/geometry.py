"""Direction sets, measurement surfaces, and rectangular sampling grids.

Direction sets carry quadrature weights for integrals over the unit circle
or unit sphere; measurement surfaces carry points, outward normals, and
surface-quadrature weights for boundary integrals.  Weights always travel
with the nodes so no downstream computation has to invent them.

The sphere rule is a Gauss-Legendre x uniform-azimuth product grid: exact
for spherical harmonics of degree < min(2*n_theta, n_phi).  The benchmark
configuration 42 x 43 = 1806 nodes reproduces the standard measurement
layout of the built-in presets.

Sampling-grid point ordering is deterministic: the first axis varies
fastest, then the second, then the third.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DirectionSet",
    "MeasurementSurface",
    "SamplingGrid",
    "circle_directions",
    "sphere_directions",
    "circle_surface",
    "sphere_surface",
    "make_grid",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class DirectionSet:
    """Unit vectors d on S^(dims-1) with quadrature weights in surface measure."""

    dims: int
    nodes: np.ndarray  # (n, dims), |d| = 1
    weights: np.ndarray  # (n,), sums to |S^(dims-1)|

    def __post_init__(self):
        object.__setattr__(self, "nodes", _readonly(np.asarray(self.nodes, dtype=float)))
        object.__setattr__(self, "weights", _readonly(np.asarray(self.weights, dtype=float)))
        if self.dims not in (2, 3):
            raise ValueError(f"dims must be 2 or 3, got {self.dims}")
        if self.nodes.ndim != 2 or self.nodes.shape[1] != self.dims:
            raise ValueError("nodes must have shape (n, dims)")
        if self.weights.shape != (self.nodes.shape[0],):
            raise ValueError("weights must match node count")
        norms = np.linalg.norm(self.nodes, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-14:
            raise ValueError("direction nodes must be unit vectors")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def __len__(self) -> int:
        return self.nodes.shape[0]


@dataclass(frozen=True)
class MeasurementSurface:
    """Points on the measurement boundary with outward normals and weights."""

    dims: int
    points: np.ndarray  # (m, dims)
    normals: np.ndarray  # (m, dims), unit outward
    weights: np.ndarray  # (m,), surface quadrature weights
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "points", _readonly(np.asarray(self.points, dtype=float)))
        object.__setattr__(self, "normals", _readonly(np.asarray(self.normals, dtype=float)))
        object.__setattr__(self, "weights", _readonly(np.asarray(self.weights, dtype=float)))
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        m = self.points.shape[0]
        if self.normals.shape != (m, self.dims) or self.weights.shape != (m,):
            raise ValueError("points, normals and weights must be consistent")
        norms = np.linalg.norm(self.normals, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-14:
            raise ValueError("normals must be unit vectors")
        if np.any(np.einsum("ij,ij->i", self.points, self.normals) <= 0):
            raise ValueError("normals must point radially outward")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class SamplingGrid:
    """Axis-aligned rectangular lattice of probe points, endpoints included.

    Ordering: first axis fastest.  Point i has per-axis indices
    (i % n1, (i // n1) % n2, ...).
    """

    dims: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    counts: tuple[int, ...]
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.dims not in (2, 3):
            raise ValueError(f"dims must be 2 or 3, got {self.dims}")
        if not (len(self.lower) == len(self.upper) == len(self.counts) == self.dims):
            raise ValueError("lower/upper/counts must all have length dims")
        if any(c < 2 for c in self.counts):
            raise ValueError("need at least 2 points per axis")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("lower corner must be strictly below upper corner")
        axes = self.axes()
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack([m.ravel(order="F") for m in mesh], axis=1)
        object.__setattr__(self, "points", _readonly(points))

    def axes(self) -> list[np.ndarray]:
        return [
            np.linspace(self.lower[i], self.upper[i], self.counts[i])
            for i in range(self.dims)
        ]

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(
            (self.upper[i] - self.lower[i]) / (self.counts[i] - 1)
            for i in range(self.dims)
        )

    def __len__(self) -> int:
        return int(np.prod(self.counts))


def circle_directions(count: int) -> DirectionSet:
    """Uniform angular nodes on S^1 with trapezoid weights 2*pi/count.

    Exact for trigonometric polynomials e^{i m theta} with |m| < count.
    """
    if count < 4:
        raise ValueError(f"need at least 4 directions, got {count}")
    theta = 2.0 * np.pi * np.arange(count) / count
    nodes = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    weights = np.full(count, 2.0 * np.pi / count)
    return DirectionSet(dims=2, nodes=nodes, weights=weights)


def sphere_directions(n_theta: int, n_phi: int) -> DirectionSet:
    """Gauss-Legendre (in cos theta) x uniform azimuth product rule on S^2."""
    if n_theta < 2:
        raise ValueError(f"need n_theta >= 2, got {n_theta}")
    if n_phi < 4:
        raise ValueError(f"need n_phi >= 4, got {n_phi}")
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    sin_theta = np.sqrt(1.0 - x * x)
    nodes = np.stack(
        [
            np.outer(sin_theta, np.cos(phi)).ravel(),
            np.outer(sin_theta, np.sin(phi)).ravel(),
            np.outer(x, np.ones(n_phi)).ravel(),
        ],
        axis=1,
    )
    # Renormalize rows: sqrt(1-x^2) rounding can leave |d| off by ~1e-16.
    nodes /= np.linalg.norm(nodes, axis=1)[:, None]
    weights = np.outer(w, np.full(n_phi, 2.0 * np.pi / n_phi)).ravel()
    return DirectionSet(dims=3, nodes=nodes, weights=weights)


def circle_surface(radius: float, count: int) -> MeasurementSurface:
    """Measurement circle of given radius: count equally spaced points."""
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if count < 8:
        raise ValueError(f"need at least 8 measurement points, got {count}")
    directions = circle_directions(max(count, 4))
    return MeasurementSurface(
        dims=2,
        points=radius * directions.nodes,
        normals=directions.nodes,
        weights=radius * directions.weights,
        radius=float(radius),
    )


def sphere_surface(radius: float, n_theta: int, n_phi: int) -> MeasurementSurface:
    """Measurement sphere of given radius on the product direction grid."""
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    directions = sphere_directions(n_theta, n_phi)
    return MeasurementSurface(
        dims=3,
        points=radius * directions.nodes,
        normals=directions.nodes,
        weights=radius * radius * directions.weights,
        radius=float(radius),
    )


def make_grid(lower, upper, counts) -> SamplingGrid:
    """Rectangular sampling grid over the box [lower, upper], endpoints included."""
    lower = tuple(float(v) for v in lower)
    upper = tuple(float(v) for v in upper)
    counts = tuple(int(c) for c in counts)
    return SamplingGrid(dims=len(lower), lower=lower, upper=upper, counts=counts)
