"""Free-space elastic plane waves, polarization projectors, and the Green tensor.

An isotropic medium with density rho and Lame coefficients (lambda, mu)
propagates compressional (P) and shear (S) waves with speeds
v_P = sqrt(a + b) and v_S = sqrt(a), where a = mu/rho and
b = (lambda + mu)/rho. The wave operator H u = -a lap(u) - b grad div u
acts on plane waves e^{i k.x} d as multiplication by v_P^2 k^2 on d || khat
and v_S^2 k^2 on d _|_ khat, so the resolvent kernel (elastic Green tensor)
G = (omega^2 - H + i0)^{-1} splits over the polarization projectors.
Carrying out the Fourier integral gives the classical two-speed form

    G(x, y) = g_S(r)/v_S^2 * Id - (1/omega^2) grad grad [g_P(r) - g_S(r)]

where g_c is the scalar outgoing Helmholtz kernel at speed c
(g_c(r) = -(i/4) H_0^(1)(k_c r) in 2D, -e^{i k_c r}/(4 pi r) in 3D,
k_c = omega/c) and r = |x - y|. Its imaginary part is smooth, finite at
r = 0, and proportional to the direction-averaged correlation tensor of
P and S plane waves weighted by v_P^{-d} and v_S^{-d}; that identity is
what :mod:`verify` checks numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .sphquad import SphereRule, circle_rule, plane_wave_order, sphere_rule

__all__ = [
    "ElasticMedium",
    "PolarizationBasis",
    "ProjectorPair",
    "CorrelationTensor",
    "polarization_basis",
    "projectors",
    "plane_wave_p",
    "plane_wave_s",
    "default_correlation_rules",
    "correlation_tensor_free",
    "correlation_tensor_closed",
    "green_tensor_free",
    "im_green_tensor_free",
]

_SERIES_CUT = 0.5  # switch radius for the small-argument series of the radial kernels
_ROTATED_ANGLE = 0.7  # fixed tangent-frame rotation of the alternative basis rule


# ---------------------------------------------------------------------------
# medium and polarization types
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ElasticMedium:
    """Isotropic medium: density rho and Lame coefficients lam, mu."""

    rho: float
    lam: float
    mu: float

    def __post_init__(self):
        if not (np.isfinite(self.rho) and self.rho > 0.0):
            raise ValueError("density must be positive")
        if not (np.isfinite(self.mu) and self.mu > 0.0):
            raise ValueError("shear modulus mu must be positive")
        if not (np.isfinite(self.lam) and self.lam + self.mu > 0.0):
            raise ValueError("lambda + mu must be positive (v_P > v_S required)")

    @property
    def a(self) -> float:
        return self.mu / self.rho

    @property
    def b(self) -> float:
        return (self.lam + self.mu) / self.rho

    @property
    def v_s(self) -> float:
        return math.sqrt(self.a)

    @property
    def v_p(self) -> float:
        return math.sqrt(self.a + self.b)


@dataclass(frozen=True)
class PolarizationBasis:
    """Orthonormal frame (khat, tangents) attached to a propagation direction."""

    khat: np.ndarray
    tangents: np.ndarray  # (d-1, d)


@dataclass(frozen=True)
class ProjectorPair:
    """Orthogonal projectors onto the P (along khat) and S (transverse) polarizations."""

    p_p: np.ndarray
    p_s: np.ndarray


@dataclass
class CorrelationTensor:
    """d x d correlation tensor with the evaluation metadata attached."""

    matrix: np.ndarray
    omega: float
    medium: ElasticMedium
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)


# ---------------------------------------------------------------------------
# polarization frames
# ---------------------------------------------------------------------------
def _tangent_frames(khat: np.ndarray, variant: str = "axis") -> np.ndarray:
    """Deterministic tangent frames for unit directions, shape (N, d-1, d).

    The "axis" rule orthonormalizes the coordinate axis least aligned with
    khat (ties broken toward the lowest axis index). The "rotated" variant
    applies a fixed in-plane rotation; the S projector it generates is
    identical, which downstream code relies on.
    """
    khat = np.atleast_2d(np.asarray(khat, dtype=float))
    n, d = khat.shape
    idx = np.argmin(np.abs(khat), axis=1)
    e = np.zeros_like(khat)
    e[np.arange(n), idx] = 1.0
    t1 = e - (np.sum(e * khat, axis=1, keepdims=True)) * khat
    t1 /= np.linalg.norm(t1, axis=1, keepdims=True)
    if d == 2:
        frames = t1[:, None, :]
        if variant == "rotated":
            frames = -frames
        return frames
    t2 = np.cross(khat, t1)
    if variant == "rotated":
        c, s = math.cos(_ROTATED_ANGLE), math.sin(_ROTATED_ANGLE)
        t1, t2 = c * t1 + s * t2, -s * t1 + c * t2
    return np.stack([t1, t2], axis=1)


def polarization_basis(kvec, variant: str = "axis") -> PolarizationBasis:
    """Orthonormal basis (khat, khat_1, ..., khat_{d-1}) for a wave vector."""
    kvec = np.asarray(kvec, dtype=float)
    if kvec.ndim != 1 or kvec.shape[0] not in (2, 3):
        raise ValueError("wave vector must be a 2- or 3-vector")
    norm = np.linalg.norm(kvec)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("wave vector must be nonzero and finite")
    if variant not in ("axis", "rotated"):
        raise ValueError("basis variant must be 'axis' or 'rotated'")
    khat = kvec / norm
    return PolarizationBasis(khat, _tangent_frames(khat, variant)[0])


def projectors(kvec) -> ProjectorPair:
    """P/S polarization projectors; p_p + p_s = Id, p_p = khat khat^T."""
    basis = polarization_basis(kvec)
    p_p = np.outer(basis.khat, basis.khat)
    p_s = np.einsum("ja,jb->ab", basis.tangents, basis.tangents)
    return ProjectorPair(p_p, p_s)


def plane_wave_p(x, kvec) -> np.ndarray:
    """Compressional plane wave e^{i k.x} khat."""
    basis = polarization_basis(kvec)
    phase = np.exp(1j * float(np.dot(np.asarray(kvec, float), np.asarray(x, float))))
    return phase * basis.khat


def plane_wave_s(x, kvec, j: int, variant: str = "axis") -> np.ndarray:
    """Shear plane wave e^{i k.x} khat_j for j = 1 .. d-1."""
    basis = polarization_basis(kvec, variant)
    if not 1 <= j <= basis.tangents.shape[0]:
        raise ValueError(f"shear index j must lie in 1..{basis.tangents.shape[0]}")
    phase = np.exp(1j * float(np.dot(np.asarray(kvec, float), np.asarray(x, float))))
    return phase * basis.tangents[j - 1]


# ---------------------------------------------------------------------------
# direction-sphere quadrature of the correlation tensor
# ---------------------------------------------------------------------------
def default_correlation_rules(omega: float, medium: ElasticMedium, x, y, d: int) -> tuple[SphereRule, SphereRule]:
    """Direction rules for the P and S spheres sized from the angular bandwidth."""
    r = float(np.linalg.norm(np.asarray(x, float) - np.asarray(y, float)))
    rules = []
    for speed in (medium.v_p, medium.v_s):
        band = plane_wave_order(omega / speed * r) + 2  # +2 for the khat x khat tensor
        if d == 2:
            rules.append(circle_rule(2 * band + 16))
        else:
            rules.append(sphere_rule(band + 8, 2 * band + 16))
    return rules[0], rules[1]


def correlation_tensor_free(
    omega: float,
    medium: ElasticMedium,
    x,
    y,
    rules: tuple[SphereRule, SphereRule] | None = None,
    basis_variant: str = "axis",
) -> CorrelationTensor:
    """Direction-averaged correlation tensor of free-space P and S plane waves.

    Averages |e_P(x, k)><e_P(y, k)| over the sphere v_P k = omega and the
    shear sum over v_S k = omega, with weights v_P^{-d} and v_S^{-d} and
    the 1/sigma_{d-1} normalization of the direction average.
    """
    if omega <= 0.0 or not np.isfinite(omega):
        raise ValueError("omega must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.shape[0] not in (2, 3):
        raise ValueError("points must be 2- or 3-vectors of equal dimension")
    d = x.shape[0]
    if rules is None:
        rule_p, rule_s = default_correlation_rules(omega, medium, x, y, d)
    else:
        rule_p, rule_s = rules
    if rule_p.dimension != d or rule_s.dimension != d:
        raise ValueError("quadrature rule dimension does not match the points")

    sphere_volume = 2.0 * math.pi if d == 2 else 4.0 * math.pi

    k_p = omega / medium.v_p
    nodes = rule_p.nodes
    px = np.exp(1j * k_p * (nodes @ x))
    py = np.exp(1j * k_p * (nodes @ y))
    weights = rule_p.weights * px * np.conj(py)
    part_p = np.einsum("n,na,nb->ab", weights, nodes, nodes)

    k_s = omega / medium.v_s
    nodes = rule_s.nodes
    tang = _tangent_frames(nodes, basis_variant)
    px = np.exp(1j * k_s * (nodes @ x))
    py = np.exp(1j * k_s * (nodes @ y))
    weights = rule_s.weights * px * np.conj(py)
    part_s = np.einsum("n,nja,njb->ab", weights, tang, tang)

    matrix = (part_p / medium.v_p ** d + part_s / medium.v_s ** d) / sphere_volume
    return CorrelationTensor(matrix, omega, medium, x, y)


# ---------------------------------------------------------------------------
# closed-form radial kernels (shared by the analytic tensors)
# ---------------------------------------------------------------------------
def _sinc(x: float) -> float:
    return float(np.sinc(x / math.pi))


def _f1(x: float) -> float:
    """(sin x - x cos x)/x^3, regular at 0 with value 1/3."""
    if abs(x) < _SERIES_CUT:
        total, term = 0.0, 1.0
        for m in range(1, 12):
            term_m = 2.0 * m / math.factorial(2 * m + 1) * x ** (2 * m - 2)
            total += term_m if m % 2 == 1 else -term_m
            if abs(term_m) < 1e-18:
                break
        return total
    return (math.sin(x) - x * math.cos(x)) / x ** 3


def _f2(x: float) -> float:
    """((x^2 - 2) sin x + 2 x cos x)/x^3, regular at 0 with value 1/3."""
    if abs(x) < _SERIES_CUT:
        total = 0.0
        for m in range(1, 12):
            term_m = 2.0 * m * (2.0 * m - 1.0) / math.factorial(2 * m + 1) * x ** (2 * m - 2)
            total += term_m if m % 2 == 1 else -term_m
            if abs(term_m) < 1e-18:
                break
        return total
    return ((x * x - 2.0) * math.sin(x) + 2.0 * x * math.cos(x)) / x ** 3


def _g1(x: float) -> float:
    """J_1(x)/x, regular at 0 with value 1/2."""
    if x == 0.0:
        return 0.5
    return float(specfun.bessel_j(1, x)) / x


def _h2(x: float) -> float:
    """J_0(x) - 2 J_1(x)/x; vanishes like -x^2/8 at 0 (series guards cancellation)."""
    if abs(x) < _SERIES_CUT:
        total = 0.0
        q = 0.25 * x * x
        for m in range(1, 12):
            term_m = q ** m / (math.factorial(m) ** 2) * (m / (m + 1.0))
            total += -term_m if m % 2 == 1 else term_m
            if term_m < 1e-18:
                break
        return total
    return float(specfun.bessel_j(0, x)) - 2.0 * _g1(x)


def _moment_tensor(d: int, r_vec: np.ndarray, kappa: float) -> np.ndarray:
    """Closed form of the sphere integral of e^{i kappa khat.r} khat khat^T.

    Real and symmetric; obtained from second derivatives of the scalar
    direction average (J_0 in 2D, sinc in 3D).
    """
    r = float(np.linalg.norm(r_vec))
    if d == 2:
        if kappa * r == 0.0:
            return math.pi * np.eye(2)
        x = kappa * r
        rhat = r_vec / r
        g1 = _g1(x)
        g2 = float(specfun.bessel_j(0, x)) - g1
        return 2.0 * math.pi * (g2 * np.outer(rhat, rhat) + g1 * (np.eye(2) - np.outer(rhat, rhat)))
    if kappa * r == 0.0:
        return (4.0 * math.pi / 3.0) * np.eye(3)
    x = kappa * r
    rhat = r_vec / r
    return 4.0 * math.pi * (_f2(x) * np.outer(rhat, rhat) + _f1(x) * (np.eye(3) - np.outer(rhat, rhat)))


def correlation_tensor_closed(omega: float, medium: ElasticMedium, x, y) -> CorrelationTensor:
    """Analytic evaluation of :func:`correlation_tensor_free` (quadrature oracle).

    The P sphere integral is the moment tensor above; the S sum equals the
    scalar direction average times Id minus the same moment tensor at the
    shear radius.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x.shape[0]
    r_vec = x - y
    r = float(np.linalg.norm(r_vec))
    sphere_volume = 2.0 * math.pi if d == 2 else 4.0 * math.pi

    k_p = omega / medium.v_p
    k_s = omega / medium.v_s
    if d == 2:
        scal_s = 2.0 * math.pi * float(specfun.bessel_j(0, k_s * r))
    else:
        scal_s = 4.0 * math.pi * _sinc(k_s * r)
    part_p = _moment_tensor(d, r_vec, k_p)
    part_s = scal_s * np.eye(d) - _moment_tensor(d, r_vec, k_s)
    matrix = (part_p / medium.v_p ** d + part_s / medium.v_s ** d) / sphere_volume
    return CorrelationTensor(matrix.astype(complex), omega, medium, x, y)


# ---------------------------------------------------------------------------
# elastic Green tensor
# ---------------------------------------------------------------------------
def _scalar_kernel_parts(d: int, k: float, r: float) -> tuple[complex, complex, complex]:
    """(g, g'/r, g'' - g'/r) for the outgoing Helmholtz kernel at wavenumber k."""
    z = k * r
    if d == 2:
        h0 = complex(specfun.hankel1(0, z))
        h1 = complex(specfun.hankel1(1, z))
        g = -0.25j * h0
        gp_over_r = 0.25j * k * k * h1 / z
        gpp_minus = 0.25j * k * k * (h0 - 2.0 * h1 / z)
        return g, gp_over_r, gpp_minus
    e = np.exp(1j * z)
    g = -e / (4.0 * math.pi * r)
    coef = k ** 3 / (4.0 * math.pi)
    gp_over_r = coef * e * (1.0 - 1j * z) / z ** 3
    gpp_minus = coef * e * (z * z - 3.0 + 3j * z) / z ** 3
    return complex(g), complex(gp_over_r), complex(gpp_minus)


def green_tensor_free(omega: float, medium: ElasticMedium, x, y) -> np.ndarray:
    """Free-space elastic resolvent kernel (d x d complex); singular at x = y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.shape[0] not in (2, 3):
        raise ValueError("points must be 2- or 3-vectors of equal dimension")
    if omega <= 0.0 or not np.isfinite(omega):
        raise ValueError("omega must be positive")
    d = x.shape[0]
    r_vec = x - y
    r = float(np.linalg.norm(r_vec))
    if r == 0.0:
        raise ValueError("elastic kernel is singular at coincident points "
                         "(the imaginary part has a finite limit, see im_green_tensor_free)")
    rhat = r_vec / r
    k_p = omega / medium.v_p
    k_s = omega / medium.v_s
    g_s, gp_s, gq_s = _scalar_kernel_parts(d, k_s, r)
    _, gp_p, gq_p = _scalar_kernel_parts(d, k_p, r)

    alpha = g_s / medium.v_s ** 2 - (gp_p - gp_s) / omega ** 2
    beta = -(gq_p - gq_s) / omega ** 2
    return alpha * np.eye(d) + beta * np.outer(rhat, rhat)


def im_green_tensor_free(omega: float, medium: ElasticMedium, x, y) -> np.ndarray:
    """Imaginary part of the elastic kernel; smooth, defined also at x = y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.shape[0] not in (2, 3):
        raise ValueError("points must be 2- or 3-vectors of equal dimension")
    if omega <= 0.0 or not np.isfinite(omega):
        raise ValueError("omega must be positive")
    d = x.shape[0]
    r_vec = x - y
    r = float(np.linalg.norm(r_vec))
    k_p = omega / medium.v_p
    k_s = omega / medium.v_s
    z_p, z_s = k_p * r, k_s * r

    if d == 2:
        alpha = (
            -float(specfun.bessel_j(0, z_s)) / (4.0 * medium.v_s ** 2)
            - (k_p ** 2 * _g1(z_p) - k_s ** 2 * _g1(z_s)) / (4.0 * omega ** 2)
        )
        beta = -(k_p ** 2 * _h2(z_p) - k_s ** 2 * _h2(z_s)) / (4.0 * omega ** 2)
    else:
        alpha = (
            -k_s * _sinc(z_s) / (4.0 * math.pi * medium.v_s ** 2)
            - (k_p ** 3 * _f1(z_p) - k_s ** 3 * _f1(z_s)) / (4.0 * math.pi * omega ** 2)
        )
        beta = -(
            k_p ** 3 * (_f2(z_p) - _f1(z_p)) - k_s ** 3 * (_f2(z_s) - _f1(z_s))
        ) / (4.0 * math.pi * omega ** 2)

    if r == 0.0:
        return alpha * np.eye(d)
    rhat = r_vec / r
    return alpha * np.eye(d) + beta * np.outer(rhat, rhat)
