"""Scattered plane waves, Green's functions, and spectral projectors.

Numerical kernels for stationary scalar and elastic waves outside
canonical obstacles, together with a verification engine for the exact
identity between direction-averaged wave correlations and the imaginary
part of the Green's function.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .elastic import (
    CorrelationTensor,
    ElasticMedium,
    PolarizationBasis,
    ProjectorPair,
    correlation_tensor_closed,
    correlation_tensor_free,
    green_tensor_free,
    im_green_tensor_free,
    plane_wave_p,
    plane_wave_s,
    polarization_basis,
    projectors,
)
from .greenfn import GreenValue, green_disk, green_disk_radial_derivative, green_free, im_green
from .scalarwave import (
    PartialWaveCoefficients,
    ScattererSpec,
    WaveContext,
    disk_coefficients,
    far_field,
    incident,
    scattered,
    total,
    total_radial_derivative,
    truncation_order,
    wave_vector,
)
from .sphquad import SphereRule, circle_rule, integrate, plane_wave_order, sphere_rule
from .verify import (
    DerivativeIdentityReport,
    SpectralWindow,
    VerificationReport,
    convergence_study,
    correlation_scalar,
    default_correlation_rule,
    gamma,
    projector_derivative_check,
    projector_kernel_scattering,
    projector_kernel_stone,
    sigma,
    verify_elastic_identity,
    verify_scalar_identity,
    verify_scalar_identity_many,
)

__all__ = [
    "__version__",
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
    "GreenValue",
    "green_free",
    "green_disk",
    "green_disk_radial_derivative",
    "im_green",
    "ElasticMedium",
    "PolarizationBasis",
    "ProjectorPair",
    "CorrelationTensor",
    "polarization_basis",
    "projectors",
    "plane_wave_p",
    "plane_wave_s",
    "correlation_tensor_free",
    "correlation_tensor_closed",
    "green_tensor_free",
    "im_green_tensor_free",
    "SphereRule",
    "circle_rule",
    "sphere_rule",
    "integrate",
    "plane_wave_order",
    "SpectralWindow",
    "VerificationReport",
    "DerivativeIdentityReport",
    "sigma",
    "gamma",
    "correlation_scalar",
    "default_correlation_rule",
    "verify_scalar_identity",
    "verify_scalar_identity_many",
    "projector_kernel_scattering",
    "projector_kernel_stone",
    "projector_derivative_check",
    "verify_elastic_identity",
    "convergence_study",
]
