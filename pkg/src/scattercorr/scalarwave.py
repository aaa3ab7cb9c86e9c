"""Incident, scattered, total, and far-field scalar waves.

Stationary waves at angular frequency omega and speed v satisfy
v^2 lap(u) + omega^2 u = 0 with wavenumber k = omega / v. Plane waves are
e0(x, k) = e^{i <k|x>}. Outside a sound-hard (Neumann) or sound-soft
(Dirichlet) disk of radius a centered at the origin (d = 2), the unique
outgoing solution is the partial-wave series

    e(x, k) = e^{i k.x} + sum_n c_n i^n H_n^(1)(k |x|) e^{i n (th_x - th_k)}

with the Jacobi-Anger phase convention e^{i k.x} =
sum_n i^n J_n(k|x|) e^{i n (th_x - th_k)} and reflection coefficients

    Dirichlet: c_n = -J_n(ka) / H_n^(1)(ka)
    Neumann:   c_n = -J_n'(ka) / H_n^(1)'(ka)

For a lossless obstacle the scattering matrix entries 1 + 2 c_n are
unimodular. The far field follows the outgoing normalization
e^s ~ e^{i k r} / r^{(d-1)/2} (e_inf + O(1/r)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import specfun

__all__ = [
    "WaveContext",
    "ScattererSpec",
    "PartialWaveCoefficients",
    "wave_vector",
    "truncation_order",
    "disk_coefficients",
    "incident",
    "scattered",
    "total",
    "far_field",
    "total_radial_derivative",
]

BOUNDARY_SNAP = 1e-12  # points this close (relative) to r = a count as boundary

_I_POWERS = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])


# ---------------------------------------------------------------------------
# context and obstacle description
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class WaveContext:
    """Frequency omega > 0, speed v > 0, and dimension d in {2, 3}."""

    omega: float
    v: float
    d: int

    def __post_init__(self):
        if not (np.isfinite(self.omega) and self.omega > 0.0):
            raise ValueError("omega must be a positive finite number")
        if not (np.isfinite(self.v) and self.v > 0.0):
            raise ValueError("wave speed must be a positive finite number")
        if self.d not in (2, 3):
            raise ValueError("dimension must be 2 or 3")

    @property
    def k(self) -> float:
        """Wavenumber omega / v."""
        return self.omega / self.v


@dataclass(frozen=True)
class ScattererSpec:
    """Obstacle description: free space, or a disk at the origin (d = 2).

    ``bc`` selects the self-adjoint boundary condition: "neumann"
    (sound-hard, normal derivative vanishes) or "dirichlet" (sound-soft).
    """

    kind: str = "none"
    radius: float | None = None
    bc: str | None = None

    def __post_init__(self):
        if self.kind not in ("none", "disk"):
            raise ValueError("scatterer kind must be 'none' or 'disk'")
        if self.kind == "disk":
            if self.radius is None or not (np.isfinite(self.radius) and self.radius > 0):
                raise ValueError("disk radius must be positive")
            if self.bc not in ("neumann", "dirichlet"):
                raise ValueError("boundary condition must be 'neumann' or 'dirichlet'")

    @staticmethod
    def none() -> "ScattererSpec":
        return ScattererSpec("none")

    @staticmethod
    def disk(radius: float, bc: str) -> "ScattererSpec":
        return ScattererSpec("disk", radius, bc)


@dataclass
class PartialWaveCoefficients:
    """Disk reflection coefficients c_n for n = -n_max .. n_max.

    Only n >= 0 is stored; c_{-n} = c_n by the even symmetry of the disk.
    """

    values: np.ndarray  # complex, index n = 0 .. n_max
    n_max: int
    ka: float
    bc: str

    def coefficient(self, n: int) -> complex:
        if abs(n) > self.n_max:
            raise ValueError(f"order {n} beyond the stored range {self.n_max}")
        return complex(self.values[abs(n)])

    def full_orders(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    def full_values(self) -> np.ndarray:
        return np.concatenate([self.values[:0:-1], self.values])


# ---------------------------------------------------------------------------
# geometry helpers
# ---------------------------------------------------------------------------
def wave_vector(ctx: WaveContext, direction) -> np.ndarray:
    """On-shell wave vector k * direction/|direction|."""
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (ctx.d,):
        raise ValueError(f"direction must be a {ctx.d}-vector")
    norm = np.linalg.norm(direction)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("direction must be a nonzero finite vector")
    return (ctx.k / norm) * direction


def _check_on_shell(ctx: WaveContext, kvec) -> np.ndarray:
    kvec = np.asarray(kvec, dtype=float)
    if kvec.shape != (ctx.d,):
        raise ValueError(f"wave vector must be a {ctx.d}-vector")
    norm = np.linalg.norm(kvec)
    if abs(norm - ctx.k) > 1e-12 * ctx.k:
        raise ValueError(f"wave vector is off shell: |k| = {norm:g}, expected {ctx.k:g}")
    return kvec


def _polar(x) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    return float(np.hypot(x[0], x[1])), float(np.arctan2(x[1], x[0]))


def _classify_radius(r: float, a: float) -> str:
    tol = BOUNDARY_SNAP * max(a, 1.0)
    if r > a + tol:
        return "exterior"
    if r >= a - tol:
        return "boundary"
    return "interior"


def require_exterior(scat: ScattererSpec, x, allow_boundary: bool = True) -> None:
    """Reject points inside the obstacle (optionally also boundary points)."""
    if scat.kind != "disk":
        return
    r = float(np.linalg.norm(np.asarray(x, dtype=float)[:2]))
    where = _classify_radius(r, scat.radius)
    if where == "interior" or (where == "boundary" and not allow_boundary):
        raise ValueError(f"point at radius {r:g} is not exterior to the disk of radius {scat.radius:g}")


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------
def truncation_order(ka: float, tol: float = 1e-12) -> int:
    """Series truncation order for dimensionless size ka at tail tolerance tol.

    N = ceil(ka + 6 ka^{1/3} + 12) reaches a ~1e-12 coefficient tail; the
    Debye-regime decay is super-exponential, so smaller tolerances only add
    a logarithmic number of extra orders.
    """
    if not (np.isfinite(ka) and ka >= 0.0):
        raise ValueError("ka must be a non-negative finite number")
    if not (0.0 < tol < 1.0):
        raise ValueError("tolerance must lie in (0, 1)")
    n = math.ceil(ka + 6.0 * ka ** (1.0 / 3.0) + 12.0)
    if tol < 1e-12:
        n += math.ceil(2.0 * math.log10(1e-12 / tol))
    return n


@lru_cache(maxsize=512)
def _cached_coefficients(ka: float, bc: str, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    if bc == "dirichlet":
        num = specfun.bessel_j(n, ka)
        den = specfun.hankel1(n, ka)
    else:
        num = specfun.bessel_j_prime(n, ka)
        den = specfun.hankel1_prime(n, ka)
    c = -num / den
    c.setflags(write=False)
    return c


def disk_coefficients(ctx: WaveContext, scat: ScattererSpec, n_max: int | None = None) -> PartialWaveCoefficients:
    """Partial-wave reflection coefficients of the disk at ka = omega a / v."""
    if scat.kind != "disk":
        raise ValueError("coefficients are defined for disk scatterers only")
    if ctx.d != 2:
        raise ValueError("disk scattering is implemented for d = 2 only "
                         "(3D sphere scattering is not part of this package)")
    ka = ctx.k * scat.radius
    if n_max is None:
        n_max = truncation_order(ka)
    if n_max < 0 or n_max > specfun.ORDER_CAP:
        raise ValueError(f"n_max must lie in [0, {specfun.ORDER_CAP}]")
    values = _cached_coefficients(ka, scat.bc, int(n_max))
    return PartialWaveCoefficients(values, int(n_max), ka, scat.bc)


# ---------------------------------------------------------------------------
# fields (vectorized cores over direction batches)
# ---------------------------------------------------------------------------
def incident_many(ctx: WaveContext, x, kvecs: np.ndarray) -> np.ndarray:
    """Plane waves e^{i k.x} for a batch of wave vectors, shape (M, d) -> (M,)."""
    x = np.asarray(x, dtype=float)
    kvecs = np.asarray(kvecs, dtype=float)
    return np.exp(1j * (kvecs @ x))


def scattered_many(
    ctx: WaveContext,
    scat: ScattererSpec,
    x,
    kvecs: np.ndarray,
    n_max: int | None = None,
) -> np.ndarray:
    """Scattered field at x for a batch of on-shell wave vectors."""
    kvecs = np.atleast_2d(np.asarray(kvecs, dtype=float))
    if scat.kind == "none":
        return np.zeros(kvecs.shape[0], dtype=complex)
    if ctx.d != 2:
        raise ValueError("disk scattering is implemented for d = 2 only")
    require_exterior(scat, x)
    r, th_x = _polar(x)
    r = max(r, scat.radius)  # snap boundary-tolerance points onto r = a

    coeffs = disk_coefficients(ctx, scat, n_max)
    n = np.arange(coeffs.n_max + 1)
    radial = specfun.hankel1(n, ctx.k * r)
    base = coeffs.values * _I_POWERS[n % 4] * radial

    th_k = np.arctan2(kvecs[:, 1], kvecs[:, 0])
    phase = np.exp(1j * np.outer(th_x - th_k, n))  # (M, n_max+1)
    # fold n and -n: i^{-n} H_{-n} = i^n H_n, so both share the same base
    return phase @ base + np.conj(phase[:, 1:]) @ base[1:]


def total_many(
    ctx: WaveContext,
    scat: ScattererSpec,
    x,
    kvecs: np.ndarray,
    n_max: int | None = None,
) -> np.ndarray:
    """Total field (incident + scattered) for a batch of wave vectors."""
    return incident_many(ctx, x, kvecs) + scattered_many(ctx, scat, x, kvecs, n_max)


# ---------------------------------------------------------------------------
# single-evaluation operations
# ---------------------------------------------------------------------------
def incident(ctx: WaveContext, x, kvec) -> complex:
    """Incident plane wave e^{i <k|x>}."""
    kvec = _check_on_shell(ctx, kvec)
    return complex(np.exp(1j * float(np.dot(kvec, np.asarray(x, dtype=float)))))


def scattered(ctx: WaveContext, scat: ScattererSpec, x, kvec, n_max: int | None = None) -> complex:
    """Outgoing scattered field at x; zero in free space."""
    kvec = _check_on_shell(ctx, kvec)
    return complex(scattered_many(ctx, scat, x, kvec[None, :], n_max)[0])


def total(ctx: WaveContext, scat: ScattererSpec, x, kvec, n_max: int | None = None) -> complex:
    """Total wave generated by the full scattering of the incident plane wave."""
    return incident(ctx, x, kvec) + scattered(ctx, scat, x, kvec, n_max)


def far_field(ctx: WaveContext, scat: ScattererSpec, xhat, kvec, n_max: int | None = None) -> complex:
    """Scattering amplitude e_inf(xhat, k) of the outgoing far field (d = 2).

    Normalized so that e^s(R xhat) ~ e^{i k R} R^{-1/2} e_inf(xhat) as
    R -> infinity.
    """
    if scat.kind == "none":
        raise ValueError("free space has no scattering amplitude")
    if ctx.d != 2:
        raise ValueError("disk scattering is implemented for d = 2 only")
    kvec = _check_on_shell(ctx, kvec)
    xhat = np.asarray(xhat, dtype=float)
    norm = np.linalg.norm(xhat)
    if norm == 0.0:
        raise ValueError("xhat must be a nonzero direction")
    th_x = math.atan2(xhat[1], xhat[0])
    th_k = math.atan2(kvec[1], kvec[0])

    coeffs = disk_coefficients(ctx, scat, n_max)
    n = np.arange(coeffs.n_max + 1)
    phase = np.exp(1j * n * (th_x - th_k))
    series = coeffs.values[0] + np.sum(coeffs.values[1:] * (phase[1:] + np.conj(phase[1:])))
    return complex(math.sqrt(2.0 / (math.pi * ctx.k)) * np.exp(-1j * math.pi / 4.0) * series)


def total_radial_derivative(ctx: WaveContext, scat: ScattererSpec, x, kvec, n_max: int | None = None) -> complex:
    """Radial derivative d/d|x| of the total field (boundary-condition checks)."""
    kvec = _check_on_shell(ctx, kvec)
    x = np.asarray(x, dtype=float)
    r, th_x = _polar(x)
    xhat = x / np.linalg.norm(x)
    d_inc = 1j * float(np.dot(kvec, xhat)) * incident(ctx, x, kvec)
    if scat.kind == "none":
        return complex(d_inc)
    if ctx.d != 2:
        raise ValueError("disk scattering is implemented for d = 2 only")
    require_exterior(scat, x)
    r = max(r, scat.radius)

    coeffs = disk_coefficients(ctx, scat, n_max)
    n = np.arange(coeffs.n_max + 1)
    radial = ctx.k * specfun.hankel1_prime(n, ctx.k * r)
    th_k = math.atan2(kvec[1], kvec[0])
    phase = np.exp(1j * n * (th_x - th_k))
    base = coeffs.values * _I_POWERS[n % 4] * radial
    return complex(d_inc + np.sum(phase * base) + np.sum(np.conj(phase[1:]) * base[1:]))
