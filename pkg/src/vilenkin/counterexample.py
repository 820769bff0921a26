"""Extremal spectral-block martingales and their blow-up diagnostics.

The stage-k instance is the difference of two Dirichlet kernels at
consecutive even/odd generalized powers, so its spectrum is the indicator
of one dyadic-style block of indices.  Probing its Riesz means at the
block-start-plus-M_{2s} indices isolates a single shifted Dirichlet sum,
which is what defeats weights growing slower than the critical rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .functions import LevelFunction
from .group import VilenkinBase
from .hardy import hardy_quasinorm, martingale_from_function
from .kernels import HarmonicSums, dirichlet, partial_sum, riesz_mean
from .maximal import WeightSpec
from .transform import CharacterSampler, forward

__all__ = [
    "CounterexampleInstance",
    "build_instance",
    "partial_sum_closed_form",
    "shift_identity_check",
    "riesz_at_q",
    "RieszProbe",
    "blowup_table",
    "BlowupRow",
    "BlowupTable",
    "hardy_norm_scaling",
]

_SPECTRUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CounterexampleInstance:
    """Stage-k extremal function with its probe index table."""

    base: VilenkinBase
    k: int
    n_k: int
    f: LevelFunction  # resolved at level 2 n_k + 1
    probe_indices: tuple[int, ...]  # M_{2 n_k} + M_{2s} for s = 0 .. n_k - 1

    @property
    def block_start(self) -> int:
        return self.base.orders[2 * self.n_k]

    @property
    def block_stop(self) -> int:
        return self.base.orders[2 * self.n_k + 1]


def build_instance(k: int, base: VilenkinBase) -> CounterexampleInstance:
    """Difference of Dirichlet kernels D_{M_{2k+1}} - D_{M_{2k}}.

    Both kernels are cylinder blocks, so the difference has exact integer
    values: M_{2k+1} - M_{2k} on the deep zero cylinder, -M_{2k} on the
    rest of the coarser one, zero elsewhere.  Storing those keeps the
    small-p quasi-norms exact (synthesis noise raised to a small power
    would not be harmless).  The defining spectrum property, the
    indicator of [M_{2k}, M_{2k+1}), is verified against the transform.
    """
    n_k = k
    level = 2 * n_k + 1
    if level > base.depth:
        raise ValueError(f"stage {k} needs depth >= {level}, base has {base.depth}")
    lo = base.orders[2 * n_k]
    hi = base.orders[2 * n_k + 1]
    vals = np.zeros(hi, dtype=np.complex128)
    vals[: hi // lo] = -lo
    vals[0] = hi - lo
    f = LevelFunction(base, level, vals)
    coeffs = forward(f).coeffs
    expected = np.zeros_like(coeffs)
    expected[lo:hi] = 1.0
    residual = np.max(np.abs(coeffs - expected))
    if residual > _SPECTRUM_TOL:
        raise AssertionError(f"spectrum indicator violated (residual {residual:.3e})")
    probes = tuple(lo + base.orders[2 * s] for s in range(n_k))
    return CounterexampleInstance(base, k, n_k, f, probes)


def partial_sum_closed_form(inst: CounterexampleInstance, i: int) -> LevelFunction:
    """Case value of S_i f: zero below the block, a Dirichlet difference
    inside it, the function itself beyond.  Asserts agreement with the
    transform-computed partial sum."""
    base = inst.base
    if i < 0 or i > base.size:
        raise ValueError(f"index {i} outside [0, {base.size}]")
    level = inst.f.level
    while base.orders[level] < i:  # deepen until i is resolvable
        level += 1
    f = inst.f.at_level(level)
    if i <= inst.block_start:
        closed = LevelFunction(base, level, np.zeros(base.orders[level], dtype=np.complex128))
    elif i < inst.block_stop:
        closed = dirichlet(base, i, level) - dirichlet(base, inst.block_start, level)
    else:
        closed = f
    direct = partial_sum(f, i)
    residual = closed.max_abs_diff(direct)
    if residual > 1e-10:
        raise AssertionError(f"partial-sum case value disagrees with transform ({residual:.3e})")
    return closed


def shift_identity_check(inst: CounterexampleInstance, j: int) -> float:
    """Residual of D_{j + M} - D_M = psi_M * D_j for the block start M.

    Exact for 1 <= j <= M - 1 because the digit expansions of j and M do
    not overlap there, so the characters factor.
    """
    m = inst.block_start
    if not 1 <= j <= m - 1:
        raise ValueError(f"shift index {j} outside [1, {m - 1}]")
    base = inst.base
    level = inst.f.level
    lhs = dirichlet(base, j + m, level) - dirichlet(base, m, level)
    sampler = CharacterSampler(base, level)
    rhs_vals = sampler.character(m) * dirichlet(base, j, level).values
    return float(np.max(np.abs(lhs.values - rhs_vals)))


@dataclass(frozen=True, eq=False)
class RieszProbe:
    """Weighted Riesz mean of the instance at one probe index.

    The modulus-sum identity (weighted modulus equals the harmonic sum of
    |D_j| over the shifted block) holds pointwise on the cylinder where
    all the low Dirichlet kernels are nonnegative, i.e. on I_{2s}; off it
    the sum still dominates by the triangle inequality.  Both facts are
    reported.  The shell value is the constant the mean takes on
    I_{2s} \\ I_{2s+1}, compared to the constant-free lower-bound shape
    M_{2s}^2 / (phi(q) l_q M_{2k}).
    """

    s: int
    q: int
    weighted: LevelFunction  # |R_q f| / phi(q)
    identity_residual_on_support: float
    triangle_slack: float  # max over all points of weighted - bound (should be <= 0)
    shell_value: float
    lower_bound_expr: float

    @property
    def shell_ratio(self) -> float:
        return self.shell_value / self.lower_bound_expr


def riesz_at_q(inst: CounterexampleInstance, s: int, weight: WeightSpec) -> RieszProbe:
    """Evaluate |R_q f| / phi(q) at probe q = M_{2k} + M_{2s} exactly."""
    if not 0 <= s < inst.n_k:
        raise ValueError(f"probe stage {s} outside [0, {inst.n_k})")
    base = inst.base
    q = inst.probe_indices[s]
    level = inst.f.level
    phi = float(weight.divisors(q)[q - 1])
    harm = HarmonicSums.upto(q)
    weighted = (1.0 / phi) * riesz_mean(inst.f, q).modulus()

    m = inst.block_start
    m2s = base.orders[2 * s]
    total = base.orders[level]
    sampler = CharacterSampler(base, level)
    d = np.zeros(total, dtype=np.complex128)
    bound_vals = np.zeros(total, dtype=np.float64)
    for j in range(1, m2s + 1):
        d = d + sampler.character(j - 1)
        bound_vals += np.abs(d) / (j + m)
    bound_vals /= phi * harm[q]

    support_width = total // base.orders[2 * s]
    diff = np.real(weighted.values) - bound_vals
    identity_residual = float(np.max(np.abs(diff[:support_width])))
    triangle_slack = float(np.max(diff))

    shell_start = support_width // base.moduli[2 * s]  # past the zero level-(2s+1) block
    shell_value = float(np.real(weighted.values[shell_start]))
    lower = m2s**2 / (phi * harm[q] * m)
    return RieszProbe(s, q, weighted, identity_residual, triangle_slack, shell_value, lower)


@dataclass(frozen=True)
class BlowupRow:
    k: int
    probe_indices: tuple[int, ...]
    hardy_norm: float
    numerator: float
    ratio: float
    analytic_lower_bound: float
    hardy_scaling: float  # ||f_k||_{H_p} / M_{2k}^{1 - 1/p}


@dataclass(frozen=True)
class BlowupTable:
    """Stage table with a finite-range trend label, never a limit claim.

    ``monotone`` records plain strict increase of the ratio column.  The
    ``flag`` is "increasing" only when the column grows at a
    nondecreasing rate (accelerating growth is the finite-range signature
    of the blow-up mechanism); a column rising toward a plateau, which is
    what a boundedness-side weight produces, gets "flat-or-bounded".
    """

    p: float
    weight: WeightSpec
    rows: tuple[BlowupRow, ...]
    monotone: bool
    flag: str  # increasing | flat-or-bounded

    def ratios(self) -> list[float]:
        return [r.ratio for r in self.rows]


def _sup_over_probes(inst: CounterexampleInstance, weight: WeightSpec) -> LevelFunction:
    """Pointwise sup over the probe table of |R_q f| / phi(q)."""
    acc = None
    for s in range(inst.n_k):
        probe = riesz_at_q(inst, s, weight)
        vals = np.real(probe.weighted.values)
        acc = vals if acc is None else np.maximum(acc, vals)
    return LevelFunction(inst.base, inst.f.level, acc)


def blowup_table(
    base: VilenkinBase,
    weight: WeightSpec,
    p: float,
    k_range: range,
) -> BlowupTable:
    """Exact blow-up diagnostics per stage k.

    The operator is the sup over the probe table of the weighted Riesz
    mean moduli.  For p = 1/2 the numerator is the strong expression
    (integral of |T f|^(1/2))^2; otherwise the weak threshold expression
    lambda * mu(|T f| >= lambda)^(1/p) at the first-probe threshold
    lambda = 1 / (phi(q0) l_{q0} q0).  The ratio column divides by the
    exact Hardy quasi-norm; the flag says whether it strictly increases.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    rows = []
    for k in k_range:
        if k < 1:
            raise ValueError("stages start at k = 1")
        inst = build_instance(k, base)
        mart = martingale_from_function(inst.f)
        hp = hardy_quasinorm(mart, p)
        sup_fn = _sup_over_probes(inst, weight)
        if p == 0.5:
            numerator = sup_fn.lp_quasinorm(0.5)  # equals (integral |T f|^(1/2))^2
        else:
            q0 = inst.probe_indices[0]
            phi0 = float(weight.divisors(q0)[q0 - 1])
            lam = 1.0 / (phi0 * HarmonicSums.upto(q0)[q0] * q0)
            numerator = sup_fn.weak_lp_at(p, lam)
        m2k = base.orders[2 * k]
        phi_top = float(weight.divisors(base.orders[2 * k + 1])[-1])
        if p == 0.5:
            analytic = k / phi_top
        else:
            phi_q = float(weight.divisors(m2k + 1)[-1])
            analytic = (m2k + 1) ** (1.0 / p - 2.0) / (phi_q * np.log(m2k + 1))
        rows.append(
            BlowupRow(
                k=k,
                probe_indices=inst.probe_indices,
                hardy_norm=hp,
                numerator=numerator,
                ratio=numerator / hp,
                analytic_lower_bound=float(analytic),
                hardy_scaling=hp / m2k ** (1.0 - 1.0 / p),
            )
        )
    ratios = np.array([r.ratio for r in rows])
    monotone = bool(np.all(np.diff(ratios) > 0)) if len(ratios) > 1 else True
    steps = np.diff(ratios)
    accelerating = monotone and (len(steps) < 2 or bool(np.all(np.diff(steps) >= 0)))
    return BlowupTable(
        p, weight, tuple(rows), monotone, "increasing" if accelerating else "flat-or-bounded"
    )


def hardy_norm_scaling(base: VilenkinBase, p: float, k_range: range) -> list[float]:
    """||f_k||_{H_p} / M_{2k}^(1 - 1/p) per stage, by brute force."""
    out = []
    for k in k_range:
        inst = build_instance(k, base)
        hp = hardy_quasinorm(martingale_from_function(inst.f), p)
        out.append(hp / base.orders[2 * k] ** (1.0 - 1.0 / p))
    return out
