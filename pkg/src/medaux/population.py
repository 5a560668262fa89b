"""Finite populations and the parameter vector driving every analytic formula.

The estimation problem pairs a study variable y (median unknown) with an
auxiliary variable x (median known for the whole population).  Everything the
closed-form machinery needs is condensed into :class:`MedianParams`:

* the two finite-population medians and the marginal densities at them,
* the median coefficients of variation ``cv = 1 / (median * density)``,
* the concordance correlation ``rho_c = 4 * p11 - 1`` where ``p11`` is the
  share of units at or below both medians,
* the design factor ``gamma = (1 - n/N) / (4n)`` that scales all
  first-order variances under simple random sampling without replacement.

Parameters can be extracted from raw ``(x, y)`` data or loaded from a small
JSON document holding just the seven primitive quantities; every other field
is always derived, never stored.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .errors import (
    DegenerateSampleError,
    DomainError,
    ParseError,
    SchemaError,
)

__all__ = [
    "PopulationFrame",
    "ProportionMatrix",
    "MedianParams",
    "KernelDensity",
    "HistogramDensity",
    "KnownDensity",
    "DensityMethod",
    "load_population",
    "finite_median",
    "proportion_matrix",
    "density_at",
    "compute_params",
    "load_params",
]


# ---------------------------------------------------------------------------
# Core value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PopulationFrame:
    """Paired (x, y) values for all N units of a finite population."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or y.ndim != 1:
            raise DomainError("population columns must be one-dimensional")
        if x.shape != y.shape:
            raise DomainError(
                f"x and y must have equal length, got {x.size} and {y.size}"
            )
        if x.size < 2:
            raise DomainError(f"population needs at least 2 units, got {x.size}")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise DomainError("population values must be finite")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def N(self) -> int:
        return int(self.x.size)


@dataclass(frozen=True)
class ProportionMatrix:
    """2x2 split of the population around a pair of cut points.

    ``p11`` counts units with both values at or below the cuts, ``p21`` the
    x-low/y-high cell, ``p12`` the x-high/y-low cell and ``p22`` the rest.
    Comparisons are inclusive, so ties land in the low cells.
    """

    p11: float
    p12: float
    p21: float
    p22: float

    def __post_init__(self) -> None:
        cells = (self.p11, self.p12, self.p21, self.p22)
        if any(not (0.0 <= c <= 1.0) for c in cells):
            raise DomainError(f"proportions must lie in [0, 1], got {cells}")
        if abs(sum(cells) - 1.0) > 1e-12:
            raise DomainError(f"proportions must sum to 1, got {sum(cells)!r}")

    @property
    def x_low_margin(self) -> float:
        return self.p11 + self.p21

    @property
    def y_low_margin(self) -> float:
        return self.p11 + self.p12


@dataclass(frozen=True)
class MedianParams:
    """Population parameter vector consumed by all analytic formulas.

    Only the first seven fields are primitive; the rest are derived in
    :meth:`from_primitives` and validated for mutual consistency here.
    """

    N: int
    n: int
    median_y: float
    median_x: float
    fy_at_median: float
    fx_at_median: float
    rho_c: float
    # derived
    p11: float
    f: float
    gamma: float
    cv_y: float
    cv_x: float
    median_ratio: float
    median_gap: float
    k_c: float

    def __post_init__(self) -> None:
        if self.N < 2 or not (0 < self.n < self.N):
            raise DomainError(f"need 0 < n < N with N >= 2, got n={self.n}, N={self.N}")
        for name in ("median_y", "median_x"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and positive, got {v!r}")
        for name in ("fy_at_median", "fx_at_median"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive density, got {v!r}")
        if not -1.0 <= self.rho_c <= 1.0:
            raise DomainError(f"rho_c must lie in [-1, 1], got {self.rho_c!r}")
        for name in ("cv_y", "cv_x"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and positive, got {v!r}")
        checks = (
            ("f", self.n / self.N),
            ("gamma", (1.0 - self.n / self.N) / (4.0 * self.n)),
            ("cv_y", 1.0 / (self.median_y * self.fy_at_median)),
            ("cv_x", 1.0 / (self.median_x * self.fx_at_median)),
            ("p11", (1.0 + self.rho_c) / 4.0),
            ("median_ratio", self.median_x / self.median_y),
            ("median_gap", self.median_y - self.median_x),
            ("k_c", self.rho_c * self.cv_y / self.cv_x),
        )
        for name, expected in checks:
            got = getattr(self, name)
            if not math.isclose(got, expected, rel_tol=1e-9, abs_tol=1e-12):
                raise DomainError(
                    f"inconsistent derived field {name}: got {got!r}, expected {expected!r}"
                )

    @classmethod
    def from_primitives(
        cls,
        N: int,
        n: int,
        median_y: float,
        median_x: float,
        fy_at_median: float,
        fx_at_median: float,
        rho_c: float,
    ) -> "MedianParams":
        """Build the full vector from the seven primitive quantities."""
        if not (0 < n < N):
            raise DomainError(f"need 0 < n < N, got n={n}, N={N}")
        f = n / N
        cv_y = 1.0 / (median_y * fy_at_median) if median_y * fy_at_median != 0 else math.inf
        cv_x = 1.0 / (median_x * fx_at_median) if median_x * fx_at_median != 0 else math.inf
        return cls(
            N=int(N),
            n=int(n),
            median_y=float(median_y),
            median_x=float(median_x),
            fy_at_median=float(fy_at_median),
            fx_at_median=float(fx_at_median),
            rho_c=float(rho_c),
            p11=(1.0 + rho_c) / 4.0,
            f=f,
            gamma=(1.0 - f) / (4.0 * n),
            cv_y=cv_y,
            cv_x=cv_x,
            median_ratio=median_x / median_y,
            median_gap=median_y - median_x,
            k_c=rho_c * cv_y / cv_x,
        )

    def as_dict(self) -> dict[str, float]:
        """All fields, primitives first, in a stable order."""
        return {
            "N": self.N,
            "n": self.n,
            "median_y": self.median_y,
            "median_x": self.median_x,
            "fy_at_median": self.fy_at_median,
            "fx_at_median": self.fx_at_median,
            "rho_c": self.rho_c,
            "p11": self.p11,
            "f": self.f,
            "gamma": self.gamma,
            "cv_y": self.cv_y,
            "cv_x": self.cv_x,
            "median_ratio": self.median_ratio,
            "median_gap": self.median_gap,
            "k_c": self.k_c,
        }


# ---------------------------------------------------------------------------
# Density estimation at a point
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelDensity:
    """Gaussian kernel estimate with Silverman's bandwidth by default.

    ``bandwidth`` may be the rule name ``"silverman"`` or an explicit h > 0.
    The rule is h = 0.9 * min(sd, IQR / 1.34) * n ** (-1/5) with the
    sample standard deviation (ddof=1).
    """

    bandwidth: str | float = "silverman"


@dataclass(frozen=True)
class HistogramDensity:
    """Density read off a histogram; ``bins`` as accepted by numpy."""

    bins: int | str = "fd"


@dataclass(frozen=True)
class KnownDensity:
    """Inject an externally known density value, bypassing estimation."""

    value: float


DensityMethod = Union[KernelDensity, HistogramDensity, KnownDensity]


def _silverman_bandwidth(values: np.ndarray) -> float:
    sd = float(np.std(values, ddof=1))
    q75, q25 = np.percentile(values, [75, 25])
    iqr = float(q75 - q25)
    return 0.9 * min(sd, iqr / 1.34) * values.size ** (-0.2)


def density_at(values, point: float, method: DensityMethod) -> float:
    """Estimate the density of ``values`` at ``point`` with ``method``.

    ``KnownDensity`` returns its value unchanged.  The kernel method needs at
    least two observations and nonzero spread; zero spread raises
    :class:`DegenerateSampleError`.
    """
    if isinstance(method, KnownDensity):
        return float(method.value)

    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise DomainError("cannot estimate a density from an empty sample")
    if not np.isfinite(arr).all():
        raise DomainError("density estimation requires finite values")

    if isinstance(method, KernelDensity):
        if arr.size < 2:
            raise DomainError("kernel density needs at least 2 observations")
        if isinstance(method.bandwidth, str):
            if method.bandwidth != "silverman":
                raise DomainError(f"unknown bandwidth rule {method.bandwidth!r}")
            h = _silverman_bandwidth(arr)
            if not (math.isfinite(h) and h > 0):
                raise DegenerateSampleError(
                    f"sample has no spread, bandwidth {h!r} is unusable"
                )
        else:
            h = float(method.bandwidth)
            if not (math.isfinite(h) and h > 0):
                raise DomainError(f"bandwidth must be positive, got {h!r}")
        z = (point - arr) / h
        return float(np.mean(np.exp(-0.5 * z * z)) / (h * math.sqrt(2.0 * math.pi)))

    if isinstance(method, HistogramDensity):
        counts, edges = np.histogram(arr, bins=method.bins, density=True)
        if point < edges[0] or point > edges[-1]:
            return 0.0
        idx = min(int(np.searchsorted(edges, point, side="right")) - 1, counts.size - 1)
        return float(counts[max(idx, 0)])

    raise DomainError(f"unsupported density method {method!r}")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def finite_median(values) -> float:
    """Median of a finite list: middle order statistic, or the mean of the
    two central order statistics when the count is even."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise DomainError("median of an empty collection is undefined")
    if not np.isfinite(arr).all():
        raise DomainError("median requires finite values")
    return float(np.median(arr))


def proportion_matrix(frame: PopulationFrame, mx: float, my: float) -> ProportionMatrix:
    """Split ``frame`` around the cut points (mx, my) with inclusive compares."""
    x_low = frame.x <= mx
    y_low = frame.y <= my
    n = float(frame.N)
    return ProportionMatrix(
        p11=float(np.count_nonzero(x_low & y_low)) / n,
        p21=float(np.count_nonzero(x_low & ~y_low)) / n,
        p12=float(np.count_nonzero(~x_low & y_low)) / n,
        p22=float(np.count_nonzero(~x_low & ~y_low)) / n,
    )


def compute_params(
    frame: PopulationFrame,
    n: int,
    fy_method: DensityMethod | None = None,
    fx_method: DensityMethod | None = None,
) -> MedianParams:
    """Extract the full parameter vector from a population frame.

    Densities default to the Gaussian kernel estimate at each median; pass
    :class:`KnownDensity` to inject published values instead.
    """
    if not (0 < n < frame.N):
        raise DomainError(f"need 0 < n < N, got n={n}, N={frame.N}")
    fy_method = fy_method if fy_method is not None else KernelDensity()
    fx_method = fx_method if fx_method is not None else KernelDensity()

    my = finite_median(frame.y)
    mx = finite_median(frame.x)
    props = proportion_matrix(frame, mx, my)
    # inclusive tie counting can push p11 past 1/2 on finite populations;
    # the concordance correlation is capped at its continuum bound
    rho_c = min(1.0, max(-1.0, 4.0 * props.p11 - 1.0))

    fy = density_at(frame.y, my, fy_method)
    fx = density_at(frame.x, mx, fx_method)
    if fy <= 0 or fx <= 0:
        raise DomainError(
            f"density at a median must be positive, got fy={fy!r}, fx={fx!r}"
        )
    return MedianParams.from_primitives(frame.N, n, my, mx, fy, fx, rho_c)


# ---------------------------------------------------------------------------
# Input parsing
# ---------------------------------------------------------------------------

Source = Union[str, bytes, os.PathLike, IO]


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return _read_text(fh.read())
    data = source.read()
    if isinstance(data, bytes):
        return _read_text(data)
    return data


def load_population(source: Source) -> PopulationFrame:
    """Parse a population CSV with header ``x,y``.

    One pair per line, ``.`` decimal separator, ``#``-prefixed comment lines
    skipped.  Malformed rows raise :class:`ParseError` with the 1-based line
    number; fewer than two data rows raise :class:`DomainError`.
    """
    text = _read_text(source)
    columns: dict[str, list[float]] = {"x": [], "y": []}
    order: list[str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if order is None:
            if sorted(fields) != ["x", "y"]:
                raise ParseError(
                    f"expected header with columns x,y, got {raw!r}", line=lineno
                )
            order = fields
            continue
        if len(fields) != 2:
            raise ParseError(
                f"expected 2 columns, got {len(fields)}", line=lineno
            )
        for name, field in zip(order, fields):
            try:
                columns[name].append(float(field))
            except ValueError:
                raise ParseError(
                    f"column {name!r} has non-numeric value {field!r}", line=lineno
                ) from None
    if order is None:
        raise ParseError("input has no header row")
    if len(columns["x"]) < 2:
        raise DomainError(
            f"population needs at least 2 rows, got {len(columns['x'])}"
        )
    return PopulationFrame(x=np.array(columns["x"]), y=np.array(columns["y"]))


_PARAM_KEYS = (
    "N",
    "n",
    "median_y",
    "median_x",
    "fy_at_median",
    "fx_at_median",
    "rho_c",
)
# Derived keys tolerated in lenient mode; values are cross-checked, not stored.
_DERIVED_KEYS = (
    "p11",
    "f",
    "gamma",
    "cv_y",
    "cv_x",
    "median_ratio",
    "median_gap",
    "k_c",
)


def load_params(source: Source, strict: bool = True) -> MedianParams:
    """Load :class:`MedianParams` from a flat JSON object.

    Exactly the seven primitive keys are expected.  Unknown keys raise
    :class:`SchemaError` in strict mode; in lenient mode they only warn, and
    recognised derived keys are additionally cross-checked against the values
    computed from the primitives.
    """
    text = _read_text(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise SchemaError("params document must be a JSON object")

    missing = [k for k in _PARAM_KEYS if k not in doc]
    if missing:
        raise SchemaError(f"params file is missing required keys: {missing}")
    extra = [k for k in doc if k not in _PARAM_KEYS]
    if extra:
        if strict:
            raise SchemaError(f"params file carries unknown keys: {extra}")
        warnings.warn(f"ignoring extra params keys: {extra}", stacklevel=2)

    values = {}
    for key in _PARAM_KEYS:
        v = doc[key]
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise SchemaError(f"params key {key!r} must be numeric, got {v!r}")
        values[key] = v
    for key in ("N", "n"):
        if values[key] != int(values[key]):
            raise SchemaError(f"params key {key!r} must be an integer")
        values[key] = int(values[key])
    if not (0 < values["n"] < values["N"]):
        raise DomainError(
            f"need 0 < n < N, got n={values['n']}, N={values['N']}"
        )

    params = MedianParams.from_primitives(**values)
    if not strict:
        for key in _DERIVED_KEYS:
            if key in doc and isinstance(doc[key], (int, float)):
                derived = getattr(params, key)
                if not math.isclose(doc[key], derived, rel_tol=1e-4, abs_tol=1e-9):
                    warnings.warn(
                        f"stored {key}={doc[key]!r} disagrees with derived "
                        f"{derived!r}; derived value wins",
                        stacklevel=2,
                    )
    return params
