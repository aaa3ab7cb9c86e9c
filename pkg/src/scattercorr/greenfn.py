"""Scalar resolvent kernels (Green's functions) for free space and the disk exterior.

Convention: G is the kernel of (omega^2 + v^2 lap + i0)^{-1}, the boundary
value from the upper half plane Im(omega) > 0. This pins the outgoing
realizations

    d = 2:  G(x, y) = -(i / (4 v^2)) H_0^(1)(k |x - y|)
    d = 3:  G(x, y) = -e^{i k |x - y|} / (4 pi v^2 |x - y|)

whose imaginary parts are smooth even at x = y (Im G(x,x) = -1/(4 v^2) in
2D and -k/(4 pi v^2) in 3D). Outside a disk (d = 2) the kernel gains the
image series

    G_sc(x, y) = -(i / (4 v^2)) sum_n c_n H_n^(1)(k r_x) H_n^(1)(k r_y)
                 e^{i n (th_x - th_y)}

with the same reflection coefficients c_n as plane-wave scattering; it
satisfies the boundary condition in each variable. The image terms decay
like (a^2 / (r_x r_y))^n, so near-boundary pairs need orders where plain
double precision over/underflows; those tail terms are evaluated through
the log-domain large-order path of :mod:`specfun`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .scalarwave import ScattererSpec, WaveContext, require_exterior, truncation_order

__all__ = [
    "GreenValue",
    "green_free",
    "green_disk",
    "im_green",
    "green_disk_radial_derivative",
    "default_image_terms",
]

MAX_IMAGE_TERMS = 4000


@dataclass(frozen=True)
class GreenValue:
    """Resolvent kernel value with its branch convention tag."""

    value: complex
    convention: str = "resolvent-upper-half-plane"


# ---------------------------------------------------------------------------
# free space
# ---------------------------------------------------------------------------
def _separation(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("points must share a dimension")
    return float(np.linalg.norm(x - y))


def green_free(ctx: WaveContext, x, y) -> GreenValue:
    """Free-space outgoing kernel; singular at coincident points."""
    r = _separation(x, y)
    if r == 0.0:
        raise ValueError("free-space kernel is singular at coincident points "
                         "(its imaginary part has a finite limit, see im_green)")
    k = ctx.k
    if ctx.d == 2:
        val = -0.25j / (ctx.v ** 2) * complex(specfun.hankel1(0, k * r))
    else:
        val = -np.exp(1j * k * r) / (4.0 * math.pi * ctx.v ** 2 * r)
    return GreenValue(complex(val))


def _im_green_free(ctx: WaveContext, r: float) -> float:
    k = ctx.k
    if ctx.d == 2:
        return float(-specfun.bessel_j(0, k * r) / (4.0 * ctx.v ** 2))
    return float(-k / (4.0 * math.pi * ctx.v ** 2) * np.sinc(k * r / math.pi))


# ---------------------------------------------------------------------------
# disk exterior: image series with extended-range tail
# ---------------------------------------------------------------------------
def default_image_terms(ka: float, a: float, rx: float, ry: float) -> int:
    """Truncation order for the image series at radii rx, ry.

    Terms decay like q^n with q = a^2/(rx ry); the rule targets a ~1e-16
    tail and never drops below the plane-wave truncation order for ka.
    """
    q = (a * a) / (rx * ry)
    if q >= 1.0 - 1e-9:
        return MAX_IMAGE_TERMS
    n_geom = math.ceil(37.0 / -math.log(q))
    return min(MAX_IMAGE_TERMS, max(truncation_order(ka), n_geom) + 16)


def _image_mode_terms(
    k: float,
    a: float,
    bc: str,
    rx: float,
    ry: float,
    n_terms: int,
    dr_x: bool = False,
) -> np.ndarray:
    """Image-series mode terms t_n = c_n H_n(k rx) H_n(k ry), n = 0..n_terms.

    With ``dr_x`` the H_n(k rx) factor is replaced by k H_n'(k rx)
    (radial derivative at the first point). Terms are grouped as
    (num_a H_x) (H_y / den_a) so intermediates stay inside double range;
    orders past the overflow switch use log-domain magnitudes.
    """
    za, zx, zy = k * a, k * rx, k * ry
    n_switch = specfun.log_switch_order(za)
    n_direct = min(n_terms, n_switch - 1)

    terms = np.zeros(n_terms + 1, dtype=complex)

    # --- plain double-precision block ------------------------------------
    n_ext = np.arange(n_direct + 2)  # one past, for derivative recurrences
    ja, ya = specfun.bessel_j(n_ext, za), specfun.bessel_y(n_ext, za)
    jx, yx = specfun.bessel_j(n_ext, zx), specfun.bessel_y(n_ext, zx)
    jy_, yy = specfun.bessel_j(n_ext, zy), specfun.bessel_y(n_ext, zy)

    def prime(f: np.ndarray) -> np.ndarray:
        # (F_{n-1} - F_{n+1})/2 for n = 0..n_direct, with F_{-1} = -F_1
        return (np.concatenate([[-f[1]], f[:-2]]) - f[1:]) / 2.0

    sl = slice(0, n_direct + 1)
    ha_x = (jx + 1j * yx)[sl]
    ha_y = (jy_ + 1j * yy)[sl]
    if bc == "dirichlet":
        num_a = ja[sl].astype(complex)
        den_a = (ja + 1j * ya)[sl]
    else:
        num_a = prime(ja).astype(complex)
        den_a = prime(ja) + 1j * prime(ya)
    if dr_x:
        ha_x = k * (prime(jx) + 1j * prime(yx))
    terms[sl] = -(num_a * ha_x) * (ha_y / den_a)

    # --- log-domain tail ---------------------------------------------------
    if n_terms >= n_switch:
        orders = np.arange(n_switch, n_terms + 2)
        lja, sja, lya, sya = specfun.bessel_jy_log(orders, za)
        _, _, lyx, syx = specfun.bessel_jy_log(orders, zx)
        _, _, lyy, syy = specfun.bessel_jy_log(orders, zy)
        nf = orders[:-1].astype(float)

        log_t = lja[:-1] - lya[:-1] + lyx[:-1] + lyy[:-1]
        sign = sja[:-1] * sya[:-1] * syx[:-1] * syy[:-1]

        if bc == "neumann":
            # J'_n/Y'_n = (J_n/Y_n) (n/z - J_{n+1}/J_n) / (n/z - Y_{n+1}/Y_n)
            r_j = np.exp(lja[1:] - lja[:-1]) * sja[1:] * sja[:-1]
            r_y = np.exp(lya[1:] - lya[:-1]) * sya[1:] * sya[:-1]
            factor = (nf / za - r_j) / (nf / za - r_y)
            log_t = log_t + np.log(np.abs(factor))
            sign = sign * np.sign(factor)
        if dr_x:
            r_yx = np.exp(lyx[1:] - lyx[:-1]) * syx[1:] * syx[:-1]
            dfac = k * (nf / zx - r_yx)
            log_t = log_t + np.log(np.abs(dfac))
            sign = sign * np.sign(dfac)

        with np.errstate(under="ignore"):
            mags = np.where(log_t < -745.0, 0.0, np.exp(np.minimum(log_t, 700.0)))
        # here H ~ i Y on all arguments, so t_n = -i (J_a/Y_a)[...] Y_x Y_y
        terms[n_switch:] = -1j * sign * mags

    return terms


def _geometry(scat: ScattererSpec, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rx, thx = float(np.hypot(x[0], x[1])), float(math.atan2(x[1], x[0]))
    ry, thy = float(np.hypot(y[0], y[1])), float(math.atan2(y[1], y[0]))
    rx = max(rx, scat.radius)
    ry = max(ry, scat.radius)
    return rx, ry, thx - thy


def _image_series(ctx: WaveContext, scat: ScattererSpec, x, y,
                  n_terms: int | None, dr_x: bool = False) -> complex:
    require_exterior(scat, x)
    require_exterior(scat, y)
    rx, ry, dth = _geometry(scat, x, y)
    if n_terms is None:
        n_terms = default_image_terms(ctx.k * scat.radius, scat.radius, rx, ry)
    t = _image_mode_terms(ctx.k, scat.radius, scat.bc, rx, ry, int(n_terms), dr_x=dr_x)
    n = np.arange(1, t.shape[0])
    angular = t[0] + 2.0 * np.sum(t[1:] * np.cos(n * dth))
    return complex(-0.25j / (ctx.v ** 2) * angular)


def _require_disk(ctx: WaveContext, scat: ScattererSpec) -> None:
    if scat.kind != "disk":
        raise ValueError("disk kernel requested for a non-disk scatterer")
    if ctx.d != 2:
        raise ValueError("the disk kernel is implemented for d = 2 only")


def green_disk(ctx: WaveContext, scat: ScattererSpec, x, y, n_terms: int | None = None) -> GreenValue:
    """Exterior-disk kernel: free-space part plus the image series."""
    _require_disk(ctx, scat)
    if _separation(x, y) == 0.0:
        raise ValueError("kernel is singular at coincident points (see im_green)")
    return GreenValue(green_free(ctx, x, y).value + _image_series(ctx, scat, x, y, n_terms))


def green_disk_radial_derivative(ctx: WaveContext, scat: ScattererSpec, x, y,
                                 n_terms: int | None = None) -> complex:
    """d/d|x| of the disk kernel at x (used for boundary-condition residuals)."""
    _require_disk(ctx, scat)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sep = x - y
    dist = float(np.linalg.norm(sep))
    if dist == 0.0:
        raise ValueError("kernel derivative is singular at coincident points")
    rx = float(np.hypot(x[0], x[1]))
    if rx == 0.0:
        raise ValueError("radial derivative undefined at the origin")
    ddist_drx = float(np.dot(sep, x / rx)) / dist
    k = ctx.k
    d_free = -0.25j / (ctx.v ** 2) * (-k * complex(specfun.hankel1(1, k * dist))) * ddist_drx
    return complex(d_free + _image_series(ctx, scat, x, y, n_terms, dr_x=True))


def im_green(ctx: WaveContext, scat: ScattererSpec, x, y, n_terms: int | None = None) -> float:
    """Imaginary part of the kernel; finite and smooth also at x = y."""
    r = _separation(x, y)
    if scat.kind == "none":
        return _im_green_free(ctx, r)
    _require_disk(ctx, scat)
    return _im_green_free(ctx, r) + float(np.imag(_image_series(ctx, scat, x, y, n_terms)))
