"""Identity engine: correlations, spectral projectors, and residual reports.

The stationary wave field outside an obstacle admits two independent
descriptions of the same spectral projector kernel Pi_I(x, y) of the
operator -v^2 lap with its boundary conditions:

* Stone route: Pi_I = -(2/pi) Im int_{om-}^{om+} G(om + i0, x, y) om d(om),
  a frequency integral of the resolvent kernel.
* Scattering route: Pi_I = (2 pi)^{-d} int over the shell om- <= v k <= om+
  of e(x, k) conj(e(y, k)), reduced to a radial integral of the
  direction-averaged correlation

      C_om(x, y) = (1/sigma_{d-1}) int_{v k = om} e(x, k) conj(e(y, k)) dsig.

Differentiating both routes in the upper window edge yields the exact
pointwise identity

      C_om(x, y) = -gamma_d v^d om^{2-d} Im G(om + i0, x, y),
      gamma_d = 2^{d+1} pi^{d-1} / sigma_{d-1},

and its elastic counterpart with the P/S spheres weighted by v_P^{-d} and
v_S^{-d}. This module evaluates both sides by independent numerical
routes and reports the residuals.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from . import elastic as _elastic
from . import greenfn, scalarwave
from .sphquad import SphereRule, circle_rule, plane_wave_order, sphere_rule

__all__ = [
    "sigma",
    "gamma",
    "SpectralWindow",
    "VerificationReport",
    "DerivativeIdentityReport",
    "default_correlation_rule",
    "correlation_scalar",
    "verify_scalar_identity",
    "verify_scalar_identity_many",
    "projector_kernel_scattering",
    "projector_kernel_stone",
    "projector_derivative_check",
    "verify_elastic_identity",
    "convergence_study",
]

RESIDUAL_FLOOR = 1e-300


# ---------------------------------------------------------------------------
# dimensional constants
# ---------------------------------------------------------------------------
def sigma(d_minus_1: int) -> float:
    """Volume of the unit sphere S^{d-1} in R^d: sigma_0 = 2, sigma_1 = 2 pi, sigma_2 = 4 pi."""
    if d_minus_1 < 0 or d_minus_1 != int(d_minus_1):
        raise ValueError("sphere index must be a non-negative integer")
    d = d_minus_1 + 1
    return float(2.0 * math.pi ** (d / 2.0) / math.exp(gammaln(d / 2.0)))


def gamma(d: int) -> float:
    """Dimensional constant 2^{d+1} pi^{d-1} / sigma_{d-1} of the correlation identity."""
    if d < 1 or d != int(d):
        raise ValueError("dimension must be a positive integer")
    return float(2.0 ** (d + 1) * math.pi ** (d - 1) / sigma(d - 1))


# ---------------------------------------------------------------------------
# report types
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SpectralWindow:
    """Spectral window I = [omega_minus^2, omega_plus^2] strictly inside (0, inf)."""

    omega_minus: float
    omega_plus: float

    def __post_init__(self):
        if not (np.isfinite(self.omega_minus) and np.isfinite(self.omega_plus)):
            raise ValueError("window edges must be finite")
        if self.omega_minus <= 0.0:
            raise ValueError("the window must stay away from zero frequency")
        if self.omega_plus < self.omega_minus:
            raise ValueError("window edges must satisfy omega_minus <= omega_plus")


@dataclass
class VerificationReport:
    """Two independently computed values with their residuals and parameters."""

    lhs: object
    rhs: object
    abs_residual: float
    rel_residual: float
    parameters: dict = field(default_factory=dict)


@dataclass
class DerivativeIdentityReport:
    """Finite-difference window-edge derivative against both closed forms."""

    fd_value: complex
    stone_value: complex
    scattering_value: complex
    vs_stone: VerificationReport
    vs_scattering: VerificationReport
    closed_forms: VerificationReport
    parameters: dict = field(default_factory=dict)


def _residuals(lhs, rhs) -> tuple[float, float]:
    diff = np.max(np.abs(np.asarray(lhs) - np.asarray(rhs)))
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)), RESIDUAL_FLOOR)
    return float(diff), float(diff / scale)


# ---------------------------------------------------------------------------
# scalar correlation
# ---------------------------------------------------------------------------
def default_correlation_rule(ctx: scalarwave.WaveContext, scat: scalarwave.ScattererSpec,
                             x, y, n_max: int | None = None) -> SphereRule:
    """Direction rule sized from the angular bandwidth of e(x, .) conj(e(y, .))."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    k = ctx.k
    if scat.kind == "none":
        band = plane_wave_order(k * float(np.linalg.norm(x - y)))
        if ctx.d == 2:
            return circle_rule(band + 8)
        return sphere_rule(math.ceil((band + 1) / 2.0) + 2, band + 6)
    n_sc = n_max if n_max is not None else scalarwave.truncation_order(k * scat.radius)
    m_x = max(plane_wave_order(k * float(np.linalg.norm(x[:2]))), n_sc)
    m_y = max(plane_wave_order(k * float(np.linalg.norm(y[:2]))), n_sc)
    return circle_rule(m_x + m_y + 9)


def correlation_scalar(
    ctx: scalarwave.WaveContext,
    scat: scalarwave.ScattererSpec,
    x,
    y,
    rule: SphereRule | None = None,
    n_max: int | None = None,
) -> complex:
    """Direction-averaged two-point correlation C_om(x, y) of the total field."""
    scalarwave.require_exterior(scat, x)
    scalarwave.require_exterior(scat, y)
    if scat.kind == "disk" and ctx.d != 2:
        raise ValueError("disk scattering is implemented for d = 2 only")
    if rule is None:
        rule = default_correlation_rule(ctx, scat, x, y, n_max)
    if rule.dimension != ctx.d:
        raise ValueError("quadrature rule dimension does not match the context")
    kvecs = ctx.k * rule.nodes
    ex = scalarwave.total_many(ctx, scat, x, kvecs, n_max)
    ey = scalarwave.total_many(ctx, scat, y, kvecs, n_max)
    return complex(np.dot(rule.weights, ex * np.conj(ey)) / sigma(ctx.d - 1))


# ---------------------------------------------------------------------------
# the scalar identity
# ---------------------------------------------------------------------------
def verify_scalar_identity(
    ctx: scalarwave.WaveContext,
    scat: scalarwave.ScattererSpec,
    x,
    y,
    rule: SphereRule | None = None,
    n_max: int | None = None,
    green_terms: int | None = None,
) -> VerificationReport:
    """Residual of C_om(x, y) = -gamma_d v^d om^{2-d} Im G(om + i0, x, y).

    The left side is a direction-sphere quadrature of scattered plane
    waves; the right side evaluates the resolvent kernel analytically
    (closed form in free space, image series for the disk). The two
    routes share no numerical machinery beyond the Bessel backend.
    """
    if rule is None:
        rule = default_correlation_rule(ctx, scat, x, y, n_max)
    lhs = correlation_scalar(ctx, scat, x, y, rule, n_max)
    img = greenfn.im_green(ctx, scat, x, y, n_terms=green_terms)
    rhs = -gamma(ctx.d) * ctx.v ** ctx.d * ctx.omega ** (2 - ctx.d) * img
    abs_res, rel_res = _residuals(lhs, rhs)
    params = {
        "d": ctx.d,
        "omega": ctx.omega,
        "v": ctx.v,
        "kind": scat.kind,
        "nodes": rule.size,
        "x": list(np.asarray(x, dtype=float)),
        "y": list(np.asarray(y, dtype=float)),
    }
    if scat.kind == "disk":
        params.update(
            radius=scat.radius,
            bc=scat.bc,
            ka=ctx.k * scat.radius,
            n_max=n_max if n_max is not None else scalarwave.truncation_order(ctx.k * scat.radius),
            green_terms=green_terms,
        )
    return VerificationReport(lhs, rhs, abs_res, rel_res, params)


def verify_scalar_identity_many(
    ctx: scalarwave.WaveContext,
    scat: scalarwave.ScattererSpec,
    pairs: Sequence[tuple],
    threads: int | None = None,
    n_max: int | None = None,
    green_terms: int | None = None,
) -> list[VerificationReport]:
    """Run the scalar identity over point pairs, optionally in a thread pool.

    Reports come back in input order; each pair is evaluated independently,
    so results do not depend on the thread count.
    """
    def run(pair):
        return verify_scalar_identity(ctx, scat, pair[0], pair[1],
                                      n_max=n_max, green_terms=green_terms)

    if threads is None or threads <= 1 or len(pairs) <= 1:
        return [run(p) for p in pairs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, pairs))


# ---------------------------------------------------------------------------
# projector kernels by both routes
# ---------------------------------------------------------------------------
def _gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * nodes, half * weights


def projector_kernel_scattering(
    ctx: scalarwave.WaveContext,
    scat: scalarwave.ScattererSpec,
    window: SpectralWindow,
    x,
    y,
    radial_nodes: int = 64,
    n_max: int | None = None,
    nodes: int | None = None,
) -> complex:
    """Projector kernel Pi_I(x, y) from the generalized plane-wave transform.

    Radial Gauss-Legendre over k in [om-/v, om+/v] of
    (2 pi)^{-d} k^{d-1} sigma_{d-1} C_{v k}(x, y).
    """
    if radial_nodes < 1:
        raise ValueError("radial node count must be positive")
    k_lo, k_hi = window.omega_minus / ctx.v, window.omega_plus / ctx.v
    if k_hi == k_lo:
        return 0.0 + 0.0j
    ks, ws = _gauss_legendre(k_lo, k_hi, radial_nodes)
    sig = sigma(ctx.d - 1)
    total = 0.0 + 0.0j
    for k_i, w_i in zip(ks, ws):
        ctx_i = scalarwave.WaveContext(ctx.v * k_i, ctx.v, ctx.d)
        rule = circle_rule(nodes) if (nodes is not None and ctx.d == 2) else None
        c_i = correlation_scalar(ctx_i, scat, x, y, rule=rule, n_max=n_max)
        total += w_i * k_i ** (ctx.d - 1) * sig * c_i
    return complex(total / (2.0 * math.pi) ** ctx.d)


def projector_kernel_stone(
    ctx: scalarwave.WaveContext,
    scat: scalarwave.ScattererSpec,
    window: SpectralWindow,
    x,
    y,
    omega_nodes: int = 64,
    green_terms: int | None = None,
) -> complex:
    """Projector kernel Pi_I(x, y) from the Stone formula.

    Gauss-Legendre in omega of -(2/pi) omega Im G(omega + i0, x, y).
    """
    if omega_nodes < 1:
        raise ValueError("frequency node count must be positive")
    if window.omega_plus == window.omega_minus:
        return 0.0 + 0.0j
    oms, ws = _gauss_legendre(window.omega_minus, window.omega_plus, omega_nodes)
    total = 0.0
    for om_i, w_i in zip(oms, ws):
        ctx_i = scalarwave.WaveContext(om_i, ctx.v, ctx.d)
        total += w_i * om_i * greenfn.im_green(ctx_i, scat, x, y, n_terms=green_terms)
    return complex(-2.0 / math.pi * total)


def projector_derivative_check(
    ctx: scalarwave.WaveContext,
    scat: scalarwave.ScattererSpec,
    x,
    y,
    h_rel: float = 1e-4,
    lower_factor: float = 0.8,
    radial_nodes: int = 64,
) -> DerivativeIdentityReport:
    """Window-edge derivative of the projector against both closed forms.

    Central finite difference (step h = h_rel * omega) of the scattering
    route in the upper edge, compared with -(2 omega/pi) Im G and with
    (2 pi)^{-d} omega^{d-1} sigma_{d-1} v^{-d} C_omega. The two closed
    forms agreeing with each other is the correlation identity itself.
    """
    om = ctx.omega
    h = h_rel * om
    lo = lower_factor * om

    pi_hi = projector_kernel_scattering(ctx, scat, SpectralWindow(lo, om + h), x, y, radial_nodes)
    pi_lo = projector_kernel_scattering(ctx, scat, SpectralWindow(lo, om - h), x, y, radial_nodes)
    fd = (pi_hi - pi_lo) / (2.0 * h)

    stone_form = complex(-2.0 * om / math.pi * greenfn.im_green(ctx, scat, x, y))
    corr = correlation_scalar(ctx, scat, x, y)
    scatt_form = complex(
        om ** (ctx.d - 1) * sigma(ctx.d - 1) / ctx.v ** ctx.d / (2.0 * math.pi) ** ctx.d * corr
    )

    params = {"omega": om, "h": h, "lower_edge": lo, "radial_nodes": radial_nodes}
    return DerivativeIdentityReport(
        fd_value=fd,
        stone_value=stone_form,
        scattering_value=scatt_form,
        vs_stone=VerificationReport(fd, stone_form, *_residuals(fd, stone_form), dict(params)),
        vs_scattering=VerificationReport(fd, scatt_form, *_residuals(fd, scatt_form), dict(params)),
        closed_forms=VerificationReport(stone_form, scatt_form, *_residuals(stone_form, scatt_form), dict(params)),
        parameters=params,
    )


# ---------------------------------------------------------------------------
# elastic identity
# ---------------------------------------------------------------------------
def verify_elastic_identity(
    omega: float,
    medium: _elastic.ElasticMedium,
    x,
    y,
    rules: tuple[SphereRule, SphereRule] | None = None,
) -> VerificationReport:
    """Residual of Im G = -gamma_d^{-1} om^{d-2} (weighted P/S sphere averages).

    The left side is the two-speed elastic kernel evaluated analytically;
    the right side averages free-space P and S plane-wave outer products
    over their direction spheres by quadrature. The report records the
    least-squares proportionality constant between the sides, which the
    identity fixes to 1.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x.shape[0]
    lhs = _elastic.im_green_tensor_free(omega, medium, x, y)
    corr = _elastic.correlation_tensor_free(omega, medium, x, y, rules)
    rhs = -(omega ** (d - 2) / gamma(d)) * corr.matrix
    abs_res, rel_res = _residuals(lhs, rhs)
    denom = float(np.sum(np.abs(rhs) ** 2))
    fitted = float(np.real(np.sum(np.conj(rhs) * lhs)) / denom) if denom > 0 else float("nan")
    params = {
        "d": d,
        "omega": omega,
        "v_p": medium.v_p,
        "v_s": medium.v_s,
        "x": list(x),
        "y": list(y),
        "fitted_scale": fitted,
    }
    return VerificationReport(lhs, rhs, abs_res, rel_res, params)


# ---------------------------------------------------------------------------
# convergence discipline
# ---------------------------------------------------------------------------
def convergence_study(
    ctx: scalarwave.WaveContext,
    scat: scalarwave.ScattererSpec,
    x,
    y,
    levels: int = 3,
) -> list[VerificationReport]:
    """Scalar-identity residuals on a ladder of doubled discretizations.

    Starts deliberately under-resolved (series truncation, direction
    nodes, and image-series length all scale with 2^level) so the
    residual decay exposes whether the error is discretization-limited.
    """
    if scat.kind != "disk":
        raise ValueError("the convergence study targets the disk identity")
    ka = ctx.k * scat.radius
    base = max(3, math.ceil(ka))
    reports = []
    for level in range(levels):
        n_max = base * 2 ** level
        nodes = 2 * (n_max + 4)
        green_terms = n_max + 6
        rep = verify_scalar_identity(
            ctx, scat, x, y,
            rule=circle_rule(nodes), n_max=n_max, green_terms=green_terms,
        )
        rep.parameters.update(level=level, n_max=n_max, nodes=nodes, green_terms=green_terms)
        reports.append(rep)
    return reports
