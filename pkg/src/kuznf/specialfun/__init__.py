"""Special functions: Bessel (complex order), Whittaker, SU(2), kernels."""

from .bessel import (
    bessel_i,
    bessel_i_grid,
    bessel_j,
    bessel_j_orders,
    bessel_k,
    bessel_k_grid,
    cal_j_star,
    j_star,
    j_star_orders,
)
from .kernels import kernel_complex, kernel_complex_nus, kernel_real, kernel_real_nus
from .params import SpectralParam, WeightSpec
from .su2 import su2_coeff, su2_compose, su2_matrix
from .whittaker import (
    whittaker_real_norm,
    whittaker_real_norm_integral,
    whittaker_w,
    whittaker_w_grid,
)

__all__ = [
    "bessel_k", "bessel_i", "bessel_j", "bessel_k_grid", "bessel_i_grid",
    "bessel_j_orders", "j_star", "j_star_orders", "cal_j_star",
    "whittaker_w", "whittaker_w_grid", "whittaker_real_norm",
    "whittaker_real_norm_integral",
    "su2_coeff", "su2_matrix", "su2_compose",
    "kernel_real", "kernel_real_nus", "kernel_complex", "kernel_complex_nus",
    "SpectralParam", "WeightSpec",
]
