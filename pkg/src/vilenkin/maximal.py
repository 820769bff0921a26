"""Truncated maximal operators for Fejer and Riesz means, with weights.

Two operator shapes coexist: the concrete weighted forms (divide |R_n f|
by log(n+1), or multiply by log(n+1) and divide by a power of n+1) and
the generic form dividing by a nondecreasing weight phi(n) >= 1.  Both
are first-class weight kinds; the generic kinds get the phi >= 1 and
monotonicity validation, the concrete forms are exempt since log(2) < 1.

Logarithms are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .functions import LevelFunction
from .hardy import Martingale, hardy_quasinorm, martingale_from_function
from .kernels import HarmonicSums, KernelConvention
from .transform import CharacterSampler, forward

__all__ = [
    "WeightSpec",
    "MaximalReport",
    "OperatorSpec",
    "RatioReport",
    "TrendTable",
    "sigma_star",
    "riesz_star",
    "weighted_riesz_star",
    "weight_trend",
    "hp_to_lp_ratio",
    "abel_domination_constant",
]

_GENERIC_KINDS = ("unit", "power_log_sq", "custom_table")
_OPERATOR_FORMS = ("log", "power_log")


@dataclass(frozen=True)
class WeightSpec:
    """Divisor applied to |R_n f| before the sup over n.

    Kinds:
      unit          1
      log           log(n+1)
      power_log     (n+1)^(1/p-2) / log(n+1)   (the multiplied-log form)
      power_log_sq  (n+1)^(1/p-2) * log(n+1)^(2*floor(1/2+p))
      custom_table  explicit per-n table (index n-1)
    """

    kind: str
    p: float | None = None
    table: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in _GENERIC_KINDS + _OPERATOR_FORMS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind in ("power_log", "power_log_sq") and (self.p is None or self.p <= 0):
            raise ValueError(f"weight kind {self.kind!r} needs a positive exponent p")
        if self.kind == "custom_table" and not self.table:
            raise ValueError("custom_table weight needs a table")

    @classmethod
    def unit(cls) -> "WeightSpec":
        return cls("unit")

    @classmethod
    def log(cls) -> "WeightSpec":
        return cls("log")

    @classmethod
    def power_log(cls, p: float) -> "WeightSpec":
        return cls("power_log", p=p)

    @classmethod
    def power_log_sq(cls, p: float) -> "WeightSpec":
        return cls("power_log_sq", p=p)

    @classmethod
    def custom(cls, values: Sequence[float]) -> "WeightSpec":
        return cls("custom_table", table=tuple(float(v) for v in values))

    @property
    def is_concrete_form(self) -> bool:
        """Operator-defining forms, exempt from the phi >= 1 hypothesis."""
        return self.kind in _OPERATOR_FORMS

    def divisors(self, n_max: int) -> np.ndarray:
        """Divisor table for n = 1..n_max (index n-1)."""
        n = np.arange(1, n_max + 1, dtype=np.float64)
        if self.kind == "unit":
            return np.ones(n_max)
        if self.kind == "log":
            return np.log(n + 1)
        if self.kind == "power_log":
            return (n + 1) ** (1.0 / self.p - 2.0) / np.log(n + 1)
        if self.kind == "power_log_sq":
            expo = 2 * math.floor(0.5 + self.p)
            return (n + 1) ** (1.0 / self.p - 2.0) * np.log(n + 1) ** expo
        if len(self.table) < n_max:
            raise ValueError(f"custom table covers n <= {len(self.table)}, need {n_max}")
        return np.asarray(self.table[:n_max], dtype=np.float64)

    def validate_on(self, n_max: int) -> None:
        """Hypotheses a divergence-condition weight must satisfy."""
        d = self.divisors(n_max)
        if np.min(d) < 1.0 - 1e-12:
            raise ValueError(f"weight dips below 1 on [1, {n_max}] (min {np.min(d):.6g})")
        if np.any(np.diff(d) < -1e-12):
            raise ValueError(f"weight is not nondecreasing on [1, {n_max}]")


@dataclass(frozen=True, eq=False)
class MaximalReport:
    """Pointwise sup over the truncated index range, with per-point argmax."""

    operator: str
    n_max: int
    result: LevelFunction
    argmax: np.ndarray

    def argmax_counts(self) -> dict[int, int]:
        idx, counts = np.unique(self.argmax, return_counts=True)
        return {int(i): int(c) for i, c in zip(idx, counts)}


def _stream_sup(
    f: LevelFunction,
    n_max: int,
    mode: str,
    convention: KernelConvention,
    divisors: np.ndarray | None,
    label: str,
) -> MaximalReport:
    """Shared streaming engine for the truncated maximal operators.

    Walks n = 1..n_max keeping the running partial sum S_n f and the mean
    accumulators; computation happens at the function's effective level
    (means of a level-R function are level-R functions for every n).
    """
    if not 1 <= n_max <= f.base.orders[f.level]:
        raise ValueError(f"n_max {n_max} outside [1, {f.base.orders[f.level]}]")
    g = f.compress()
    total = g.base.orders[g.level]
    coeffs = forward(g).coeffs
    sampler = CharacterSampler(g.base, g.level)
    s = np.zeros(total, dtype=np.complex128)
    acc = np.zeros(total, dtype=np.complex128)  # sum of S_k (sigma) or S_k / k (riesz)
    harm = 0.0
    best = np.full(total, -1.0)
    arg = np.zeros(total, dtype=np.int64)
    for n in range(1, n_max + 1):
        j = n - 1
        if j < total and coeffs[j] != 0:
            s = s + coeffs[j] * sampler.character(j)
        if mode == "sigma":
            acc = acc + s
            if convention is KernelConvention.SHIFTED:
                vals = np.abs(acc) / n
            else:
                vals = np.abs(acc - s) / n
        else:
            acc = acc + s / n
            harm += 1.0 / n
            vals = np.abs(acc) / harm
        if divisors is not None:
            vals = vals / divisors[n - 1]
        better = vals > best
        best[better] = vals[better]
        arg[better] = n
    reps = f.base.orders[f.level] // total
    result = LevelFunction(f.base, f.level, np.repeat(best, reps))
    return MaximalReport(label, n_max, result, np.repeat(arg, reps))


def sigma_star(
    f: LevelFunction,
    n_max: int,
    convention: KernelConvention = KernelConvention.SHIFTED,
) -> MaximalReport:
    """sup over n = 1..n_max of |sigma_n f|."""
    return _stream_sup(f, n_max, "sigma", convention, None, "sigma_star")


def riesz_star(f: LevelFunction, n_max: int) -> MaximalReport:
    """sup over n = 1..n_max of |R_n f|."""
    return _stream_sup(f, n_max, "riesz", KernelConvention.SHIFTED, None, "riesz_star")


def weighted_riesz_star(f: LevelFunction, weight: WeightSpec, n_max: int) -> MaximalReport:
    """sup over n = 1..n_max of |R_n f| / weight(n).

    Generic weight kinds are validated against the phi >= 1 and
    monotonicity hypotheses on the evaluated range.
    """
    divisors = weight.divisors(n_max)
    if not weight.is_concrete_form:
        weight.validate_on(n_max)
    return _stream_sup(
        f, n_max, "riesz", KernelConvention.SHIFTED, divisors, f"riesz_star/{weight.kind}"
    )


def abel_domination_constant(n_max: int) -> float:
    """Numeric constant in the pointwise bound R* f <= c sigma* f.

    The Abel rearrangement of the Riesz mean gives
    |R_n f| <= max_j |sigma_j f| * (1/l_n) (sum_{j=1}^{n-1} 1/(j+1) + 1);
    this evaluates the max of the bracket over n = 1..n_max.
    """
    harm = HarmonicSums.upto(n_max + 1)
    best = 0.0
    for n in range(1, n_max + 1):
        inner = (harm[n] - 1.0) + 1.0  # sum_{j=1}^{n-1} 1/(j+1) == l_n - 1
        best = max(best, inner / harm[n])
    return best


@dataclass(frozen=True)
class TrendTable:
    """Finite-range diagnostic of a divergence condition; never a limit claim."""

    condition: str
    n_grid: tuple[int, ...]
    ratios: tuple[float, ...]
    flag: str  # diverging-trend | flat | decreasing


_FLAT_BAND = 0.01


def _classify_trend(ratios: np.ndarray) -> str:
    r0 = ratios[0]
    if r0 > 0 and np.max(np.abs(ratios / r0 - 1.0)) <= _FLAT_BAND:
        return "flat"
    diffs = np.diff(ratios)
    if np.all(diffs >= -1e-12) and ratios[-1] > ratios[0]:
        return "diverging-trend"
    if np.all(diffs <= 1e-12) and ratios[-1] < ratios[0]:
        return "decreasing"
    if ratios[-1] > ratios[0] * (1.0 + _FLAT_BAND):
        return "diverging-trend"
    if ratios[-1] < ratios[0] * (1.0 - _FLAT_BAND):
        return "decreasing"
    return "flat"


def weight_trend(
    weight: WeightSpec,
    p: float,
    n_grid: Sequence[int],
    condition: str,
) -> TrendTable:
    """Ratio of a divergence condition's numerator to the weight along a grid.

    Conditions: "log" checks log(n+1)/phi(n); "power_over_log" checks
    (n+1)^(1/p-2) / (log(n+1) phi(n)); "power_log_sq" checks
    (n+1)^(1/p-2) log(n+1)^(2 floor(1/2+p)) / phi(n).
    """
    grid = np.asarray(sorted(n_grid), dtype=np.int64)
    if grid.size < 2 or grid[0] < 1:
        raise ValueError("need an increasing grid of indices >= 1")
    n = grid.astype(np.float64)
    phi = weight.divisors(int(grid[-1]))[grid - 1]
    if condition == "log":
        num = np.log(n + 1)
    elif condition == "power_over_log":
        num = (n + 1) ** (1.0 / p - 2.0) / np.log(n + 1)
    elif condition == "power_log_sq":
        expo = 2 * math.floor(0.5 + p)
        num = (n + 1) ** (1.0 / p - 2.0) * np.log(n + 1) ** expo
    else:
        raise ValueError(f"unknown condition {condition!r}")
    ratios = num / phi
    return TrendTable(condition, tuple(int(v) for v in grid), tuple(map(float, ratios)), _classify_trend(ratios))


@dataclass(frozen=True)
class OperatorSpec:
    """Named truncated maximal operator, applyable to a function."""

    op: str  # sigma | riesz | weighted_riesz
    n_max: int
    weight: WeightSpec | None = None
    convention: KernelConvention = KernelConvention.SHIFTED

    def apply(self, f: LevelFunction) -> MaximalReport:
        if self.op == "sigma":
            return sigma_star(f, self.n_max, self.convention)
        if self.op == "riesz":
            return riesz_star(f, self.n_max)
        if self.op == "weighted_riesz":
            if self.weight is None:
                raise ValueError("weighted_riesz needs a weight")
            return weighted_riesz_star(f, self.weight, self.n_max)
        raise ValueError(f"unknown operator {self.op!r}")


@dataclass(frozen=True)
class RatioReport:
    """Operator-norm witnesses for one input.

    strong = ||Tf||_p / ||f||_Hp; weak = (sup_l l^p mu(|Tf| > l)) / ||f||_Hp^p.
    Both are invariant under scaling the input.
    """

    strong: float
    weak: float
    hardy_norm: float


def hp_to_lp_ratio(
    source: Martingale | LevelFunction,
    operator: OperatorSpec,
    p: float,
) -> RatioReport:
    """Strong and weak operator ratios against the Hardy quasi-norm.

    Martingale input applies the operator to the top component, whose
    coefficients carry the stabilized values of every resolvable index.
    """
    if isinstance(source, Martingale):
        mart = source
        f = source.top
    else:
        mart = martingale_from_function(source)
        f = source
    hp = hardy_quasinorm(mart, p)
    if hp == 0.0:
        raise ValueError("Hardy quasi-norm is zero")
    out = operator.apply(f).result
    return RatioReport(
        strong=out.lp_quasinorm(p) / hp,
        weak=out.weak_lp(p) / hp**p,
        hardy_norm=hp,
    )
