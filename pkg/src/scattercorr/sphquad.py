"""Quadrature over the unit sphere S^{d-1} for d = 2, 3.

d = 2 uses the equispaced trapezoid rule on the circle, which integrates
trigonometric polynomials of degree < N exactly. d = 3 uses a
Gauss-Legendre x trapezoid product rule in (cos(polar), azimuth), exact
for spherical harmonics of degree < min(2 N_polar, N_azimuth). All
integrands in this package are band-limited, so the rules are exact up
to roundoff once sized from the angular bandwidth.

Node ordering is fixed (angle-major for the circle, polar-major for the
sphere) so that reductions are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["SphereRule", "circle_rule", "sphere_rule", "integrate", "plane_wave_order"]


@dataclass(frozen=True)
class SphereRule:
    """Quadrature rule on the unit sphere: unit-vector nodes and positive weights."""

    dimension: int
    nodes: np.ndarray   # (N, d) unit vectors
    weights: np.ndarray  # (N,) positive, summing to the sphere volume

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError("sphere rules support d = 2 or 3 only")
        if self.nodes.ndim != 2 or self.nodes.shape[1] != self.dimension:
            raise ValueError("nodes must have shape (N, d)")
        if self.weights.shape != (self.nodes.shape[0],):
            raise ValueError("weights must have shape (N,)")

    @property
    def size(self) -> int:
        return self.weights.shape[0]


def circle_rule(n_nodes: int) -> SphereRule:
    """Equispaced trapezoid rule on the unit circle with uniform weight 2 pi / N.

    Exact (to roundoff) for e^{i m theta} whenever 0 < |m| < n_nodes.
    """
    if n_nodes < 1:
        raise ValueError("circle rule needs at least one node")
    theta = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    nodes = np.column_stack([np.cos(theta), np.sin(theta)])
    weights = np.full(n_nodes, 2.0 * np.pi / n_nodes)
    return SphereRule(2, nodes, weights)


def sphere_rule(n_polar: int, n_azimuth: int) -> SphereRule:
    """Gauss-Legendre (cos polar) x trapezoid (azimuth) product rule on S^2.

    Exact for spherical harmonics of degree < min(2 n_polar, n_azimuth).
    """
    if n_polar < 1 or n_azimuth < 1:
        raise ValueError("sphere rule needs positive node counts")
    mu, w_mu = np.polynomial.legendre.leggauss(n_polar)
    phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    w_phi = 2.0 * np.pi / n_azimuth

    sin_th = np.sqrt(1.0 - mu * mu)
    # polar-major ordering: all azimuths of the first polar node, then the next
    cos_phi = np.cos(phi)
    sin_phi = np.sin(phi)
    nodes = np.empty((n_polar * n_azimuth, 3))
    weights = np.empty(n_polar * n_azimuth)
    for i in range(n_polar):
        sl = slice(i * n_azimuth, (i + 1) * n_azimuth)
        nodes[sl, 0] = sin_th[i] * cos_phi
        nodes[sl, 1] = sin_th[i] * sin_phi
        nodes[sl, 2] = mu[i]
        weights[sl] = w_mu[i] * w_phi
    return SphereRule(3, nodes, weights)


def integrate(rule: SphereRule, f):
    """Integrate ``f`` over the sphere with the rule's fixed node order.

    ``f`` is either vectorized (maps the (N, d) node array to an (N, ...)
    array of values) or a per-node callable. The weighted reduction runs
    in the fixed node order, so results are reproducible.
    """
    try:
        values = np.asarray(f(rule.nodes))
        if values.shape[0] != rule.size:
            raise ValueError
    except (TypeError, ValueError, IndexError):
        values = np.asarray([f(rule.nodes[i]) for i in range(rule.size)])
    return np.tensordot(rule.weights, values, axes=(0, 0))


def plane_wave_order(z: float) -> int:
    """Angular bandwidth of e^{i z cos(angle)} at double precision.

    Mode coefficients of a plane wave at dimensionless radius z are
    J_m(z)-like and fall below ~1e-15 once m exceeds the returned order
    (Debye transition plus an Airy-scale safety margin).
    """
    z = abs(float(z))
    return int(math.ceil(z + 10.5 * z ** (1.0 / 3.0) + 12.0))
