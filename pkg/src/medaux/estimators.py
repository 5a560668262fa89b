"""Catalogue of median estimators built on a known auxiliary median.

Every estimator combines the sample medians ``my_hat``/``mx_hat`` with the
known population median of the auxiliary variable.  Families:

=====================  ======================================================
``sample_median``      my_hat
``ratio``              my_hat * (Mx / mx_hat)
``product``            my_hat * (mx_hat / Mx)
``difference``         my_hat + d * (Mx - mx_hat)
``shifted_product``    my_hat * (a - mx_hat) / (a - Mx)
``shifted_ratio``      my_hat * (a + Mx) / (a + mx_hat)
``power_ratio``        my_hat * (Mx / mx_hat) ** alpha
``damped_ratio``       my_hat * Mx / (Mx + beta * (mx_hat - Mx))
``dual_power``         my_hat * (2 - (Mx / mx_hat) ** v)
``mix_product``        w * my_hat + (1 - w) * my_hat * (mx_hat / Mx)
``mix_ratio``          w * my_hat + (1 - w) * my_hat * (Mx / mx_hat)
``regression``         my_hat + d_hat * (Mx - mx_hat),
                       d_hat = (fx_hat / fy_hat) * (4 * p11_hat - 1)
``shrink_diff_tied``   d1 * my_hat + (1 - d1) * (Mx - mx_hat)
``shrink_diff``        d1 * my_hat + d2 * (Mx - mx_hat)
``shrink_convex``      d1 * my_hat + d2 * mx_hat + (1 - d1 - d2) * Mx
``shrink_diff_scaled`` [d1 * my_hat + d2 * (Mx - mx_hat)]
                       * ((phi * Mx + delta) / (phi * mx_hat + delta)) ** beta
``ratio_exp``          w1 * my_hat * (Mx / mx_hat) ** alpha
                       * exp(eta * (Mx - mx_hat) / (eta * (Mx + mx_hat) + 2 * lam))
                       + w2 * mx_hat + (1 - w1 - w2) * Mx
``ratio_exp_fixed``    the same with (w1, w2) pinned to (1, 0)
``ratio_exp_shrunk``   the same with w2 pinned to 0 and w1 free
=====================  ======================================================

Weight-like scalars may be left ``None`` ("free") and resolved against
population parameters with :func:`resolve_weights`, which plugs in the value
minimising the first-order MSE.  :func:`preset` builds the named estimators
used throughout the comparison tables, e.g. ``t_mq7`` or ``M_d3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .errors import DomainError, SingularityError, UnknownEstimatorError
from .expansion import ExpansionCoeffs, error_moments, exp_constants, k_const
from .population import MedianParams

__all__ = [
    "EstimatorSpec",
    "SampleStats",
    "FAMILIES",
    "PRESET_NAMES",
    "evaluate",
    "coeffs_of",
    "preset",
    "resolve_weights",
    "free_scalars",
]


SAMPLE_MEDIAN = "sample_median"
RATIO = "ratio"
PRODUCT = "product"
DIFFERENCE = "difference"
SHIFTED_PRODUCT = "shifted_product"
SHIFTED_RATIO = "shifted_ratio"
POWER_RATIO = "power_ratio"
DAMPED_RATIO = "damped_ratio"
DUAL_POWER = "dual_power"
MIX_PRODUCT = "mix_product"
MIX_RATIO = "mix_ratio"
REGRESSION = "regression"
SHRINK_DIFF_TIED = "shrink_diff_tied"
SHRINK_DIFF = "shrink_diff"
SHRINK_CONVEX = "shrink_convex"
SHRINK_DIFF_SCALED = "shrink_diff_scaled"
RATIO_EXP = "ratio_exp"
RATIO_EXP_FIXED = "ratio_exp_fixed"
RATIO_EXP_SHRUNK = "ratio_exp_shrunk"

# family -> (resolvable weight fields, structural fields that must be concrete)
_FAMILY_FIELDS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    SAMPLE_MEDIAN: ((), ()),
    RATIO: ((), ()),
    PRODUCT: ((), ()),
    DIFFERENCE: (("d",), ()),
    SHIFTED_PRODUCT: (("shift",), ()),
    SHIFTED_RATIO: (("shift",), ()),
    POWER_RATIO: (("alpha",), ()),
    DAMPED_RATIO: (("beta",), ()),
    DUAL_POWER: (("v",), ()),
    MIX_PRODUCT: (("w",), ()),
    MIX_RATIO: (("w",), ()),
    REGRESSION: ((), ()),
    SHRINK_DIFF_TIED: (("d1",), ()),
    SHRINK_DIFF: (("d1", "d2"), ()),
    SHRINK_CONVEX: (("d1", "d2"), ()),
    SHRINK_DIFF_SCALED: (("d1", "d2"), ("phi", "delta", "beta")),
    RATIO_EXP: (("w1", "w2"), ("alpha", "eta", "lam")),
    RATIO_EXP_FIXED: ((), ("alpha", "eta", "lam")),
    RATIO_EXP_SHRUNK: (("w1",), ("alpha", "eta", "lam")),
}

FAMILIES = frozenset(_FAMILY_FIELDS)

_SCALAR_FIELDS = (
    "w1",
    "w2",
    "alpha",
    "eta",
    "lam",
    "d",
    "shift",
    "beta",
    "v",
    "w",
    "d1",
    "d2",
    "phi",
    "delta",
)


@dataclass(frozen=True)
class EstimatorSpec:
    """One estimator: a family tag plus its scalars. ``None`` means free."""

    family: str
    label: str = ""
    w1: float | None = None
    w2: float | None = None
    alpha: float | None = None
    eta: float | None = None
    lam: float | None = None
    d: float | None = None
    shift: float | None = None
    beta: float | None = None
    v: float | None = None
    w: float | None = None
    d1: float | None = None
    d2: float | None = None
    phi: float | None = None
    delta: float | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise DomainError(f"unknown estimator family {self.family!r}")
        if not self.label:
            object.__setattr__(self, "label", self.family)
        _, structural = _FAMILY_FIELDS[self.family]
        for name in structural:
            if getattr(self, name) is None:
                raise DomainError(
                    f"{self.family} requires a concrete value for {name!r}"
                )
        for name in _SCALAR_FIELDS:
            value = getattr(self, name)
            if value is not None:
                value = float(value)
                if not math.isfinite(value):
                    raise DomainError(f"scalar {name!r} must be finite")
                object.__setattr__(self, name, value)


@dataclass(frozen=True)
class SampleStats:
    """Per-sample statistics feeding estimator evaluation.

    Density estimates are optional; they are only needed by the regression
    estimator and by plug-in weight resolution.
    """

    median_y: float
    median_x: float
    p11: float | None = None
    fy_at_median: float | None = None
    fx_at_median: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.median_y) and math.isfinite(self.median_x)):
            raise DomainError("sample medians must be finite")
        if self.p11 is not None and not 0.0 <= self.p11 <= 1.0:
            raise DomainError(f"p11 must lie in [0, 1], got {self.p11!r}")


def free_scalars(spec: EstimatorSpec) -> tuple[str, ...]:
    """Names of the spec's weight fields still left free."""
    weights, _ = _FAMILY_FIELDS[spec.family]
    return tuple(name for name in weights if getattr(spec, name) is None)


def _require_resolved(spec: EstimatorSpec) -> None:
    missing = free_scalars(spec)
    if missing:
        raise DomainError(
            f"estimator {spec.label!r} has unresolved scalars {missing}; "
            "call resolve_weights first"
        )


def _ratio_power(mx_known: float, mx_hat: float, alpha: float) -> float:
    """(Mx / mx_hat) ** alpha with exact fast paths for alpha in {-1, 0, 1}.

    The fast paths keep the algebraic reductions to the plain ratio and
    product estimators exact in floating point, not just approximate.
    """
    if alpha == 0.0:
        return 1.0
    if mx_hat == 0.0:
        raise SingularityError("sample median of x is zero in a ratio factor")
    if alpha == 1.0:
        return mx_known / mx_hat
    if alpha == -1.0:
        return mx_hat / mx_known
    r = mx_known / mx_hat
    if r < 0 and alpha != round(alpha):
        raise DomainError(
            f"ratio {r!r} is negative; non-integer exponent {alpha!r} undefined"
        )
    return r**alpha


def _exp_adjustment(mx_known: float, mx_hat: float, eta: float, lam: float) -> float:
    den = eta * (mx_known + mx_hat) + 2.0 * lam
    if den == 0.0:
        raise SingularityError(
            "eta*(Mx + mx_hat) + 2*lam is zero in the exponential adjustment"
        )
    return math.exp(eta * (mx_known - mx_hat) / den)


def evaluate(spec: EstimatorSpec, stats: SampleStats, known: MedianParams) -> float:
    """Point estimate of the study median for one sample.

    Raises :class:`SingularityError` naming the offending denominator when a
    precondition fails, and :class:`DomainError` when the spec still has free
    scalars (except the regression estimator, whose slope is always plug-in).
    """
    my, mx = stats.median_y, stats.median_x
    Mx = known.median_x
    fam = spec.family

    if fam == SAMPLE_MEDIAN:
        return my
    if fam == RATIO:
        return my * _ratio_power(Mx, mx, 1.0)
    if fam == PRODUCT:
        return my * _ratio_power(Mx, mx, -1.0)

    _require_resolved(spec)

    if fam == DIFFERENCE:
        return my + spec.d * (Mx - mx)
    if fam == SHIFTED_PRODUCT:
        if spec.shift == Mx:
            raise SingularityError("shift equals the known auxiliary median")
        return my * (spec.shift - mx) / (spec.shift - Mx)
    if fam == SHIFTED_RATIO:
        if spec.shift + mx == 0.0:
            raise SingularityError("shift + sample median of x is zero")
        return my * (spec.shift + Mx) / (spec.shift + mx)
    if fam == POWER_RATIO:
        return my * _ratio_power(Mx, mx, spec.alpha)
    if fam == DAMPED_RATIO:
        den = Mx + spec.beta * (mx - Mx)
        if den == 0.0:
            raise SingularityError("damped ratio denominator is zero")
        return my * Mx / den
    if fam == DUAL_POWER:
        return my * (2.0 - _ratio_power(Mx, mx, spec.v))
    if fam == MIX_PRODUCT:
        return spec.w * my + (1.0 - spec.w) * my * (mx / Mx)
    if fam == MIX_RATIO:
        return spec.w * my + (1.0 - spec.w) * my * _ratio_power(Mx, mx, 1.0)
    if fam == REGRESSION:
        if stats.fy_at_median is None or stats.fx_at_median is None or stats.p11 is None:
            raise DomainError(
                "regression estimator needs sample p11 and density estimates"
            )
        if stats.fy_at_median == 0.0:
            raise SingularityError("sample density of y at its median is zero")
        d_hat = (stats.fx_at_median / stats.fy_at_median) * (4.0 * stats.p11 - 1.0)
        return my + d_hat * (Mx - mx)
    if fam == SHRINK_DIFF_TIED:
        return spec.d1 * my + (1.0 - spec.d1) * (Mx - mx)
    if fam == SHRINK_DIFF:
        return spec.d1 * my + spec.d2 * (Mx - mx)
    if fam == SHRINK_CONVEX:
        return spec.d1 * my + spec.d2 * mx + (1.0 - spec.d1 - spec.d2) * Mx
    if fam == SHRINK_DIFF_SCALED:
        den = spec.phi * mx + spec.delta
        if den == 0.0:
            raise SingularityError("phi*mx_hat + delta is zero")
        base = (spec.phi * Mx + spec.delta) / den
        if base < 0 and spec.beta != round(spec.beta):
            raise DomainError("negative scaling base with non-integer exponent")
        return (spec.d1 * my + spec.d2 * (Mx - mx)) * base**spec.beta
    if fam in (RATIO_EXP, RATIO_EXP_FIXED, RATIO_EXP_SHRUNK):
        w1, w2 = spec.w1, spec.w2
        if fam == RATIO_EXP_FIXED:
            w1, w2 = 1.0, 0.0
        elif fam == RATIO_EXP_SHRUNK:
            w2 = 0.0
        base = (
            my
            * _ratio_power(Mx, mx, spec.alpha)
            * _exp_adjustment(Mx, mx, spec.eta, spec.lam)
        )
        return w1 * base + w2 * mx + (1.0 - w1 - w2) * Mx

    raise DomainError(f"unknown estimator family {fam!r}")


def coeffs_of(spec: EstimatorSpec, params: MedianParams) -> ExpansionCoeffs:
    """First-order expansion coefficients of ``spec`` at ``params``."""
    My, Mx, b = params.median_y, params.median_x, params.median_gap
    fam = spec.family

    if fam == SAMPLE_MEDIAN:
        return ExpansionCoeffs(0.0, My, 0.0, 0.0, 0.0)
    if fam == RATIO:
        return ExpansionCoeffs(0.0, My, -My, My, -My)
    if fam == PRODUCT:
        return ExpansionCoeffs(0.0, My, My, 0.0, My)

    _require_resolved(spec)

    if fam == DIFFERENCE:
        return ExpansionCoeffs(0.0, My, -spec.d * Mx, 0.0, 0.0)
    if fam == SHIFTED_PRODUCT:
        if spec.shift == Mx:
            raise SingularityError("shift equals the known auxiliary median")
        theta = Mx / (spec.shift - Mx)
        return ExpansionCoeffs(0.0, My, -theta * My, 0.0, -theta * My)
    if fam == SHIFTED_RATIO:
        if spec.shift + Mx == 0.0:
            raise SingularityError("shift + auxiliary median is zero")
        theta = Mx / (spec.shift + Mx)
        return ExpansionCoeffs(0.0, My, -theta * My, theta**2 * My, -theta * My)
    if fam == POWER_RATIO:
        a = spec.alpha
        return ExpansionCoeffs(0.0, My, -a * My, a * (a + 1.0) / 2.0 * My, -a * My)
    if fam == DAMPED_RATIO:
        bt = spec.beta
        return ExpansionCoeffs(0.0, My, -bt * My, bt**2 * My, -bt * My)
    if fam == DUAL_POWER:
        v = spec.v
        return ExpansionCoeffs(0.0, My, v * My, -v * (v + 1.0) / 2.0 * My, v * My)
    if fam == MIX_PRODUCT:
        c = (1.0 - spec.w) * My
        return ExpansionCoeffs(0.0, My, c, 0.0, c)
    if fam == MIX_RATIO:
        c = (1.0 - spec.w) * My
        return ExpansionCoeffs(0.0, My, -c, c, -c)
    if fam == REGRESSION:
        # slope at its population limit, the optimal difference coefficient
        d_opt = params.rho_c * My * params.cv_y / (Mx * params.cv_x)
        return ExpansionCoeffs(0.0, My, -d_opt * Mx, 0.0, 0.0)
    if fam == SHRINK_DIFF_TIED:
        return ExpansionCoeffs(
            (spec.d1 - 1.0) * My, spec.d1 * My, -(1.0 - spec.d1) * Mx, 0.0, 0.0
        )
    if fam == SHRINK_DIFF:
        return ExpansionCoeffs(
            (spec.d1 - 1.0) * My, spec.d1 * My, -spec.d2 * Mx, 0.0, 0.0
        )
    if fam == SHRINK_CONVEX:
        return ExpansionCoeffs(
            (spec.d1 - 1.0) * b, spec.d1 * My, spec.d2 * Mx, 0.0, 0.0
        )
    if fam == SHRINK_DIFF_SCALED:
        den = spec.phi * Mx + spec.delta
        if den == 0.0:
            raise SingularityError("phi*Mx + delta is zero")
        g = spec.phi * Mx / den
        u = spec.beta * g
        return ExpansionCoeffs(
            (spec.d1 - 1.0) * My,
            spec.d1 * My,
            -(spec.d2 * Mx + spec.d1 * My * u),
            spec.d2 * Mx * u + spec.d1 * My * spec.beta * (spec.beta + 1.0) / 2.0 * g**2,
            -spec.d1 * My * u,
        )
    if fam in (RATIO_EXP, RATIO_EXP_FIXED, RATIO_EXP_SHRUNK):
        w1, w2 = spec.w1, spec.w2
        if fam == RATIO_EXP_FIXED:
            w1, w2 = 1.0, 0.0
        elif fam == RATIO_EXP_SHRUNK:
            w2 = 0.0
        k = k_const(spec.eta, spec.lam, Mx)
        a, gap, d2nd = exp_constants(spec.alpha, k, My, Mx)
        return ExpansionCoeffs(
            (w1 - 1.0) * gap,
            w1 * My,
            -w1 * My * a + w2 * Mx,
            w1 * My * d2nd,
            -w1 * My * a,
        )

    raise DomainError(f"unknown estimator family {fam!r}")


# ---------------------------------------------------------------------------
# Optimal weight resolution
# ---------------------------------------------------------------------------


def _second_moments(params: MedianParams) -> tuple[float, float, float, float]:
    """(V_y, V_x, C_yx, V_res): absolute-scale variances, covariance and the
    residual variance V_y*(1 - rho_c^2)."""
    m = error_moments(params)
    My, Mx = params.median_y, params.median_x
    vy = My**2 * m.var_e0
    vx = Mx**2 * m.var_e1
    cyx = My * Mx * m.cov_e0e1
    return vy, vx, cyx, vy * (1.0 - params.rho_c**2)


def resolve_weights(spec: EstimatorSpec, params: MedianParams) -> EstimatorSpec:
    """Fill every free scalar with its first-order MSE minimiser.

    Each family's optimum is the closed-form minimiser of the MSE implied by
    its own expansion coefficients, so the resolved spec is internally
    consistent with :func:`coeffs_of` and :func:`medaux.expansion.mse_from_coeffs`.
    """
    missing = free_scalars(spec)
    if not missing:
        return spec
    My, Mx = params.median_y, params.median_x
    kc = params.k_c
    vy, vx, cyx, vres = _second_moments(params)
    b = params.median_gap
    fam = spec.family

    if fam == DIFFERENCE:
        return replace(spec, d=cyx / vx)
    if fam == POWER_RATIO:
        return replace(spec, alpha=kc)
    if fam == DAMPED_RATIO:
        return replace(spec, beta=kc)
    if fam == DUAL_POWER:
        return replace(spec, v=-kc)
    if fam == MIX_PRODUCT:
        return replace(spec, w=1.0 + kc)
    if fam == MIX_RATIO:
        return replace(spec, w=1.0 - kc)
    if fam == SHIFTED_PRODUCT:
        if kc == 0.0:
            raise SingularityError("optimal shift undefined when k_c is zero")
        return replace(spec, shift=Mx * (1.0 + 1.0 / kc))
    if fam == SHIFTED_RATIO:
        if kc == 0.0:
            raise SingularityError("optimal shift undefined when k_c is zero")
        return replace(spec, shift=Mx * (1.0 - kc) / kc)
    if fam == SHRINK_DIFF_TIED:
        d1 = (My**2 + vx - cyx) / (My**2 + vy + vx - 2.0 * cyx)
        return replace(spec, d1=d1)
    if fam == SHRINK_DIFF:
        d1 = My**2 / (My**2 + vres)
        return replace(spec, d1=d1, d2=d1 * cyx / vx)
    if fam == SHRINK_CONVEX:
        d1 = b**2 / (b**2 + vres)
        return replace(spec, d1=d1, d2=-d1 * cyx / vx)
    if fam == SHRINK_DIFF_SCALED:
        den = spec.phi * Mx + spec.delta
        if den == 0.0:
            raise SingularityError("phi*Mx + delta is zero")
        u = spec.beta * spec.phi * Mx / den
        d1 = My**2 / (My**2 + vres)
        s = d1 * My * params.rho_c * params.cv_y / params.cv_x
        return replace(spec, d1=d1, d2=(s - d1 * My * u) / Mx)
    if fam == RATIO_EXP:
        from .mse import quadratic_weights  # local import breaks the cycle

        qw = quadratic_weights(params, alpha=spec.alpha, eta=spec.eta, lam=spec.lam)
        return replace(spec, w1=qw.w1_opt, w2=qw.w2_opt)
    if fam == RATIO_EXP_SHRUNK:
        k = k_const(spec.eta, spec.lam, Mx)
        a = spec.alpha + k
        w_term = params.gamma * My**2 * (
            params.cv_y**2
            + a * a * params.cv_x**2
            - 2.0 * a * params.rho_c * params.cv_y * params.cv_x
        )
        return replace(spec, w1=b**2 / (b**2 + w_term))

    raise DomainError(f"family {fam!r} has no free scalars to resolve")


# ---------------------------------------------------------------------------
# Named presets
# ---------------------------------------------------------------------------


def _needs_params(name: str) -> Callable[[MedianParams | None], MedianParams]:
    def _check(params: MedianParams | None) -> MedianParams:
        if params is None:
            raise DomainError(f"preset {name!r} pulls scalars from params")
        return params

    return _check


def _preset_builders() -> dict[str, Callable[[MedianParams | None], EstimatorSpec]]:
    def fixed(family: str, label: str, **kw) -> Callable:
        return lambda _params: EstimatorSpec(family=family, label=label, **kw)

    builders: dict[str, Callable[[MedianParams | None], EstimatorSpec]] = {
        "M_y": fixed(SAMPLE_MEDIAN, "M_y"),
        "M_r": fixed(RATIO, "M_r"),
        "M_p": fixed(PRODUCT, "M_p"),
        "M_d": fixed(DIFFERENCE, "M_d"),
        "M_1": fixed(SHIFTED_PRODUCT, "M_1"),
        "M_2": fixed(SHIFTED_RATIO, "M_2"),
        "M_3": fixed(POWER_RATIO, "M_3"),
        "M_4": fixed(DAMPED_RATIO, "M_4"),
        "M_5": fixed(DUAL_POWER, "M_5"),
        "M_6": fixed(MIX_PRODUCT, "M_6"),
        "M_7": fixed(MIX_RATIO, "M_7"),
        "M_lr": fixed(REGRESSION, "M_lr"),
        "M_d1": fixed(SHRINK_DIFF_TIED, "M_d1"),
        "M_d2": fixed(SHRINK_DIFF, "M_d2"),
        "M_d3": fixed(SHRINK_CONVEX, "M_d3"),
        "M_d4": fixed(SHRINK_DIFF_SCALED, "M_d4", phi=1.0, delta=0.0, beta=1.0),
        # two-weight class and the generated single-weight subsets
        "t_m": fixed(RATIO_EXP, "t_m", alpha=0.0, eta=0.0, lam=1.0),
        "t_m1": fixed(RATIO_EXP_FIXED, "t_m1", w1=1.0, w2=0.0, alpha=0.0, eta=0.0, lam=1.0),
        "t_m2": fixed(RATIO_EXP_FIXED, "t_m2", w1=1.0, w2=0.0, alpha=1.0, eta=0.0, lam=1.0),
        "t_m3": fixed(POWER_RATIO, "t_m3"),
        "t_m4": fixed(RATIO_EXP_FIXED, "t_m4", w1=1.0, w2=0.0, alpha=-1.0, eta=0.0, lam=1.0),
        "t_m5": fixed(RATIO_EXP_SHRUNK, "t_m5", alpha=1.0, eta=0.0, lam=1.0),
        "t_m6": fixed(RATIO_EXP_SHRUNK, "t_m6", alpha=-1.0, eta=0.0, lam=1.0),
        "t_m7": fixed(RATIO_EXP_SHRUNK, "t_m7", alpha=0.0, eta=0.0, lam=1.0),
        "t_m8": fixed(RATIO_EXP, "t_m8", alpha=0.0, eta=0.0, lam=1.0),
        "t_mq1": fixed(RATIO_EXP_SHRUNK, "t_mq1", alpha=1.0, eta=1.0, lam=1.0),
        "t_mq4": fixed(RATIO_EXP_SHRUNK, "t_mq4", alpha=1.0, eta=1.0, lam=0.0),
        "t_mq5": fixed(RATIO_EXP_SHRUNK, "t_mq5", alpha=-1.0, eta=1.0, lam=1.0),
    }

    def from_params(name: str, label: str, alpha: float, eta_field: str | None, lam_field: str | None, eta: float | None = None, lam: float | None = None) -> None:
        need = _needs_params(label)

        def build(params: MedianParams | None) -> EstimatorSpec:
            p = need(params)
            return EstimatorSpec(
                family=RATIO_EXP_SHRUNK,
                label=label,
                alpha=alpha,
                eta=getattr(p, eta_field) if eta_field else eta,
                lam=getattr(p, lam_field) if lam_field else lam,
            )

        builders[name] = build

    # rows whose (eta, lam) pull rho_c or the auxiliary median from params
    from_params("t_mq2", "t_mq2", alpha=1.0, eta_field=None, lam_field="rho_c", eta=1.0)
    from_params("t_mq3", "t_mq3", alpha=1.0, eta_field=None, lam_field="median_x", eta=1.0)
    from_params("t_mq6", "t_mq6", alpha=1.0, eta_field="median_x", lam_field="rho_c")
    from_params("t_mq7", "t_mq7", alpha=0.0, eta_field="median_x", lam_field="rho_c")
    from_params("t_mq8", "t_mq8", alpha=1.0, eta_field="rho_c", lam_field="median_x")
    from_params("t_mq9", "t_mq9", alpha=-1.0, eta_field="rho_c", lam_field="median_x")
    return builders


_PRESETS = _preset_builders()
_PRESETS_LOWER = {name.lower(): name for name in _PRESETS}

PRESET_NAMES = tuple(_PRESETS)


def canonical_name(name: str) -> str:
    """Canonical spelling of a preset name, case-insensitively."""
    canonical = _PRESETS_LOWER.get(name.strip().lower())
    if canonical is None:
        raise UnknownEstimatorError(
            f"unknown estimator {name!r}; valid names: {', '.join(PRESET_NAMES)}"
        )
    return canonical


def preset(name: str, params: MedianParams | None = None) -> EstimatorSpec:
    """Build a named estimator, case-insensitively.

    Presets whose scalars are population quantities (e.g. ``t_mq7``) require
    ``params``.  Unknown names raise :class:`UnknownEstimatorError`.
    """
    return _PRESETS[canonical_name(name)](params)
