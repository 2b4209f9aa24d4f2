"""
Admissible kernel families, their Fourier responses and admissibility checks.
"""

from sparse_mkr.kernels.families import (
    BesselPotential,
    Exponential,
    KernelSpec,
    Transformed,
    eval_kernel,
    gaussian,
    kernel_matrix,
)
from sparse_mkr.kernels.fourier import (
    FOURIER_CONVENTION,
    GreensFunctionTable,
    fourier_greens_table,
    fourier_response,
    response_resolution,
)
from sparse_mkr.kernels.admissibility import (
    AdmissibilityReport,
    ProbeConfig,
    check_admissibility,
    default_probe,
)

__all__ = [
    'AdmissibilityReport',
    'BesselPotential',
    'Exponential',
    'FOURIER_CONVENTION',
    'GreensFunctionTable',
    'KernelSpec',
    'ProbeConfig',
    'Transformed',
    'check_admissibility',
    'default_probe',
    'eval_kernel',
    'fourier_greens_table',
    'fourier_response',
    'gaussian',
    'kernel_matrix',
    'response_resolution',
]
