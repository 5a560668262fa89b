"""First-order error expansion calculus for median estimators.

Every estimator in the catalogue is a smooth function of the two sample
medians.  Writing the relative errors as

    e0 = (sample_median_y - median_y) / median_y
    e1 = (sample_median_x - median_x) / median_x

each estimator T admits an expansion

    T - median_y = c0 + c_e0*e0 + c_e1*e1 + c_e1sq*e1^2 + c_e0e1*e0*e1 + ...

whose coefficients live in :class:`ExpansionCoeffs` (absolute scale, units of
y).  Under SRSWOR the sample medians are asymptotically normal with

    var(e0) = gamma * cv_y^2
    var(e1) = gamma * cv_x^2
    cov(e0, e1) = gamma * rho_c * cv_y * cv_x

which :func:`error_moments` packages as :class:`ErrorMoments`.  Bias and MSE
to first order then follow mechanically:

    bias = c0 + c_e1sq * var(e1) + c_e0e1 * cov(e0, e1)
    mse  = c0^2 + c_e0^2 var(e0) + c_e1^2 var(e1) + 2 c_e0 c_e1 cov(e0, e1)

The MSE deliberately drops products involving the second-order coefficients;
those terms are one order smaller and are excluded from every closed form in
:mod:`medaux.mse` as well, so the two routes stay consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, SingularityError
from .population import MedianParams

__all__ = [
    "ExpansionCoeffs",
    "ErrorMoments",
    "ExpConstants",
    "k_const",
    "exp_constants",
    "error_moments",
    "bias_from_coeffs",
    "mse_from_coeffs",
]


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Expansion coefficients of one estimator, in units of y."""

    c0: float
    c_e0: float
    c_e1: float
    c_e1sq: float
    c_e0e1: float

    def __post_init__(self) -> None:
        for name in ("c0", "c_e0", "c_e1", "c_e1sq", "c_e0e1"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"coefficient {name} must be finite")


@dataclass(frozen=True)
class ErrorMoments:
    """Second moments of the relative errors (e0, e1)."""

    var_e0: float
    var_e1: float
    cov_e0e1: float

    def __post_init__(self) -> None:
        if self.var_e0 < 0 or self.var_e1 < 0:
            raise DomainError("variances must be nonnegative")
        bound = math.sqrt(self.var_e0 * self.var_e1)
        if abs(self.cov_e0e1) > bound * (1 + 1e-12) + 1e-300:
            raise DomainError(
                f"|cov|={abs(self.cov_e0e1)!r} exceeds sqrt(var*var)={bound!r}"
            )


class ExpConstants(NamedTuple):
    a: float
    b: float
    d: float


def k_const(eta: float, lam: float, median_x: float) -> float:
    """Exponential-adjustment constant k = eta*Mx / (2*(eta*Mx + lam)).

    The pair (eta, lam) parameterises the damping factor
    exp(eta*(Mx - mx_hat) / (eta*(Mx + mx_hat) + 2*lam)); k is its first-order
    slope in e1.
    """
    den = eta * median_x + lam
    if den == 0.0:
        raise SingularityError(
            f"eta*median_x + lam is zero for eta={eta!r}, lam={lam!r}"
        )
    return eta * median_x / (2.0 * den)


def exp_constants(
    alpha: float, k: float, median_y: float, median_x: float
) -> ExpConstants:
    """Constants of the weighted ratio-exponential expansion.

    a = alpha + k is the total first-order ratio slope, b is the gap between
    the two medians, and d collects the e1^2 coefficient
    (3/2)k^2 + alpha*k + alpha*(alpha + 1)/2.
    """
    return ExpConstants(
        a=alpha + k,
        b=median_y - median_x,
        d=1.5 * k * k + alpha * k + alpha * (alpha + 1.0) / 2.0,
    )


def error_moments(params: MedianParams) -> ErrorMoments:
    """First-order moments of (e0, e1) implied by the population parameters."""
    g = params.gamma
    return ErrorMoments(
        var_e0=g * params.cv_y**2,
        var_e1=g * params.cv_x**2,
        cov_e0e1=g * params.rho_c * params.cv_y * params.cv_x,
    )


def bias_from_coeffs(coeffs: ExpansionCoeffs, moments: ErrorMoments) -> float:
    """First-order bias: E[e0] = E[e1] = 0, so only the constant and the
    second-order coefficients contribute."""
    return (
        coeffs.c0
        + coeffs.c_e1sq * moments.var_e1
        + coeffs.c_e0e1 * moments.cov_e0e1
    )


def mse_from_coeffs(coeffs: ExpansionCoeffs, moments: ErrorMoments) -> float:
    """First-order MSE of the expansion (second-order coefficients excluded)."""
    return (
        coeffs.c0**2
        + coeffs.c_e0**2 * moments.var_e0
        + coeffs.c_e1**2 * moments.var_e1
        + 2.0 * coeffs.c_e0 * coeffs.c_e1 * moments.cov_e0e1
    )
