"""Cylindrical and spherical Bessel family plus Legendre polynomials.

Thin, validated layer over ``scipy.special`` providing exactly the special
functions the wave kernels need (J_n, Y_n, H_n^(1), their derivatives, the
spherical j_n / h_n^(1) pair, and Legendre P_n), together with a log-domain
evaluation path for very large orders where double precision over/underflows.

Conventions
-----------
    H_n^(1)(x) = J_n(x) + i Y_n(x)
    F_n'(x)    = (F_{n-1}(x) - F_{n+1}(x)) / 2      for F in {J, Y, H}
    J_{-n}(x)  = (-1)^n J_n(x)   (same for Y, H)

Accuracy envelope: relative error <= ~1e-12 for |n| <= 512 and x <= 1000
away from zeros of the functions (absolute error ~1e-15 near zeros).
Larger arguments are accepted but carry no accuracy guarantee beyond what
the backing library provides.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp
from scipy.special import gammaln

ORDER_CAP = 512
ARGUMENT_ACCURACY_CAP = 1000.0

# Log-domain series for J_n / Y_n are used only where the magnitude of Y_n
# exceeds this bound; below it plain double precision is safe.
_LOG_SWITCH = 100.0 * np.log(10.0)


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------
def _check_order(n) -> np.ndarray:
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        if not np.all(n == np.floor(n)):
            raise ValueError("Bessel order must be an integer")
        n = n.astype(int)
    if np.any(np.abs(n) > ORDER_CAP):
        raise ValueError(f"order cap exceeded: |n| <= {ORDER_CAP} required")
    return n


def _check_argument(x, positive: bool = False) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite argument")
    if positive:
        if np.any(x <= 0.0):
            raise ValueError("argument must be > 0 (singular at x = 0)")
    elif np.any(x < 0.0):
        raise ValueError("argument must be >= 0")
    return x


def _scalar_like(value, *inputs):
    if all(np.isscalar(i) or np.ndim(i) == 0 for i in inputs):
        return value.item() if hasattr(value, "item") else value
    return value


# ---------------------------------------------------------------------------
# cylindrical family
# ---------------------------------------------------------------------------
def bessel_j(n, x):
    """Bessel function of the first kind J_n(x), integer n (may be negative)."""
    n = _check_order(n)
    x = _check_argument(x)
    sign = np.where(n % 2 == 0, 1.0, np.where(n < 0, -1.0, 1.0))
    val = sign * _sp.jv(np.abs(n), x)
    return _scalar_like(val, n, x)


def bessel_y(n, x):
    """Bessel function of the second kind Y_n(x); requires x > 0."""
    n = _check_order(n)
    x = _check_argument(x, positive=True)
    sign = np.where(n % 2 == 0, 1.0, np.where(n < 0, -1.0, 1.0))
    val = sign * _sp.yv(np.abs(n), x)
    return _scalar_like(val, n, x)


def hankel1(n, x):
    """Outgoing Hankel function H_n^(1)(x) = J_n(x) + i Y_n(x); x > 0."""
    n = _check_order(n)
    x = _check_argument(x, positive=True)
    sign = np.where(n % 2 == 0, 1.0, np.where(n < 0, -1.0, 1.0))
    # built from the real pair so the stated identity holds bit for bit
    val = sign * (_sp.jv(np.abs(n), x) + 1j * _sp.yv(np.abs(n), x))
    return _scalar_like(val, n, x)


def bessel_j_prime(n, x):
    """dJ_n/dx via the two-sided recurrence (J_{n-1} - J_{n+1}) / 2."""
    n = _check_order(n)
    return _scalar_like((bessel_j(n - 1, x) - bessel_j(n + 1, x)) / 2.0, n, x)


def bessel_y_prime(n, x):
    """dY_n/dx via the two-sided recurrence."""
    n = _check_order(n)
    return _scalar_like((bessel_y(n - 1, x) - bessel_y(n + 1, x)) / 2.0, n, x)


def hankel1_prime(n, x):
    """dH_n^(1)/dx via the two-sided recurrence."""
    n = _check_order(n)
    return _scalar_like((hankel1(n - 1, x) - hankel1(n + 1, x)) / 2.0, n, x)


# ---------------------------------------------------------------------------
# spherical family
# ---------------------------------------------------------------------------
def spherical_j(n, x):
    """Spherical Bessel function j_n(x), n >= 0."""
    n = _check_order(n)
    if np.any(n < 0):
        raise ValueError("spherical order must be >= 0")
    x = _check_argument(x)
    return _scalar_like(_sp.spherical_jn(n, x), n, x)


def spherical_y(n, x):
    """Spherical Bessel function y_n(x), n >= 0, x > 0."""
    n = _check_order(n)
    if np.any(n < 0):
        raise ValueError("spherical order must be >= 0")
    x = _check_argument(x, positive=True)
    return _scalar_like(_sp.spherical_yn(n, x), n, x)


def spherical_h1(n, x):
    """Outgoing spherical Hankel function h_n^(1)(x) = j_n(x) + i y_n(x)."""
    return spherical_j(n, x) + 1j * spherical_y(n, x)


def spherical_j_prime(n, x):
    """dj_n/dx."""
    n = _check_order(n)
    if np.any(n < 0):
        raise ValueError("spherical order must be >= 0")
    x = _check_argument(x)
    return _scalar_like(_sp.spherical_jn(n, x, derivative=True), n, x)


def spherical_h1_prime(n, x):
    """dh_n^(1)/dx."""
    n = _check_order(n)
    if np.any(n < 0):
        raise ValueError("spherical order must be >= 0")
    x = _check_argument(x, positive=True)
    return _scalar_like(
        _sp.spherical_jn(n, x, derivative=True)
        + 1j * _sp.spherical_yn(n, x, derivative=True),
        n,
        x,
    )


# ---------------------------------------------------------------------------
# Legendre polynomials
# ---------------------------------------------------------------------------
def legendre_p(n: int, t):
    """Legendre polynomial P_n(t) for n >= 0 and t in [-1, 1]."""
    if n < 0 or n != int(n):
        raise ValueError("Legendre degree must be a non-negative integer")
    if n > ORDER_CAP:
        raise ValueError(f"order cap exceeded: n <= {ORDER_CAP} required")
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("non-finite argument")
    if np.any(np.abs(t) > 1.0 + 1e-14):
        raise ValueError("Legendre argument must lie in [-1, 1]")
    val = _sp.eval_legendre(int(n), np.clip(t, -1.0, 1.0))
    return _scalar_like(val, t)


# ---------------------------------------------------------------------------
# log-domain large-order path
# ---------------------------------------------------------------------------
def log_switch_order(x: float) -> int:
    """First order n at which |Y_n(x)| outgrows the safe double range.

    Below the returned order, plain double-precision J_n/Y_n are used;
    from it on, callers should switch to :func:`bessel_jy_log`.
    """
    x = float(x)
    if x <= 0.0:
        raise ValueError("argument must be > 0")
    n = np.arange(1, 4 * ORDER_CAP + 2, dtype=float)
    logy = gammaln(n) + n * np.log(2.0 / x) - np.log(np.pi)
    hit = np.nonzero(logy > _LOG_SWITCH)[0]
    return int(n[hit[0]]) if hit.size else int(n[-1]) + 1


def bessel_jy_log(orders: np.ndarray, x: float):
    """log-magnitude/sign form of (J_n(x), Y_n(x)) for large orders.

    Returns ``(log_j, sign_j, log_y, sign_y)`` with
    J_n(x) = sign_j * exp(log_j) and likewise for Y. Valid in the regime
    x^2/4 <= 0.7 (min(n)+1), where the ascending series for J and the
    dominant finite sum for Y converge without cancellation and the
    dropped Y-series remainder is far below double precision. Intended
    for orders past :func:`log_switch_order`, where the plain functions
    over/underflow.
    """
    orders = np.asarray(orders, dtype=int)
    if orders.size == 0:
        z = np.zeros(0)
        return z, z, z, z
    if np.any(orders < 1):
        raise ValueError("large-order path requires n >= 1")
    x = float(x)
    if x <= 0.0:
        raise ValueError("argument must be > 0")
    q = 0.25 * x * x
    nmin = int(orders.min())
    if q > 0.7 * (nmin + 1):
        raise ValueError(
            "large-order series out of its convergence envelope: "
            f"need x^2/4 <= 0.7 (n+1), got x={x:g}, n={nmin}"
        )

    nf = orders.astype(float)

    # J_n: ascending series, terms (-q)^k / (k! (n+1)...(n+k)); the k=0
    # normalization keeps the sum O(1) so only the prefactor needs logs.
    s = np.ones_like(nf)
    term = np.ones_like(nf)
    for k in range(200):
        term = term * (-q) / ((k + 1.0) * (nf + k + 1.0))
        s = s + term
        if np.all(np.abs(term) < 1e-18 * np.abs(s)):
            break
    log_j = nf * np.log(x / 2.0) - gammaln(nf + 1.0) + np.log(np.abs(s))
    sign_j = np.sign(s)

    # Y_n: dominant finite sum sum_{k<n} (n-k-1)!/k! q^k, normalized by its
    # k=0 term (n-1)!. All terms positive, no cancellation. The logarithmic
    # and ascending-series companions are smaller by ~(x/2)^{2n}/(n!)^2 and
    # are dropped.
    sy = np.ones_like(nf)
    term = np.ones_like(nf)
    kmax = int(orders.max()) - 1
    for k in range(min(kmax, 400)):
        alive = nf - 1.0 - k > 0
        step = np.where(alive, q / ((k + 1.0) * np.maximum(nf - 1.0 - k, 1.0)), 0.0)
        term = term * step
        sy = sy + term
        if np.all(term < 1e-18 * sy):
            break
    log_y = gammaln(nf) + nf * np.log(2.0 / x) - np.log(np.pi) + np.log(sy)
    sign_y = -np.ones_like(nf)

    return log_j, sign_j, log_y, sign_y
