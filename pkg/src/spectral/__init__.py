from .operators import (
    apply_fractional_laplacian,
    dealias,
    dealiased_product,
    divergence,
    fractional_symbol,
    gradient,
    gradient_sup,
    hdot_norm,
    hessian,
    hessian_sup,
    lambda_lp_norm,
    lp_norm,
    riesz_force,
    sobolev_seminorm,
)

__all__ = [
    "apply_fractional_laplacian",
    "dealias",
    "dealiased_product",
    "divergence",
    "fractional_symbol",
    "gradient",
    "gradient_sup",
    "hdot_norm",
    "hessian",
    "hessian_sup",
    "lambda_lp_norm",
    "lp_norm",
    "riesz_force",
    "sobolev_seminorm",
]
