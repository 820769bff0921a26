"""Dirichlet, Fejer, and Riesz logarithmic kernels and means.

Summation-convention note: the classical definitions average Dirichlet
kernels either as (1/n) sum_{k=0}^{n-1} D_k or as (1/n) sum_{k=1}^{n} D_k.
The two differ by exactly D_n / n.  The Abel rearrangements relating
Riesz means to Fejer means, and the dyadic closed form, are exact
identities only under the shifted (k = 1..n) convention; desk expansion
at small n fixes this once and the unit tests pin it.  Shifted is the
default for kernel work; the zero-based form stays available.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .functions import LevelFunction
from .group import GroupPoint, VilenkinBase, point_of, subtract_rank_table
from .transform import CharacterSampler, Spectrum, forward, inverse

__all__ = [
    "HarmonicSums",
    "KernelConvention",
    "dirichlet",
    "fejer_kernel",
    "gat_closed_form",
    "gat_kernel",
    "riesz_kernel",
    "riesz_kernel_abel",
    "partial_sum",
    "all_partial_sums",
    "fejer_mean",
    "riesz_mean",
    "riesz_mean_abel",
    "convolve",
    "kernel_integral_sweep",
    "KernelIntegralSweep",
    "localization_sweep",
    "LocalizationCell",
    "LocalizationSweep",
]


@dataclass(frozen=True)
class HarmonicSums:
    """Partial sums l_n = 1 + 1/2 + ... + 1/n, with l_0 = 0 as sentinel."""

    values: np.ndarray

    @classmethod
    def upto(cls, n_max: int) -> "HarmonicSums":
        if n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {n_max}")
        vals = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, n_max + 1))])
        vals.setflags(write=False)
        return cls(vals)

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


class KernelConvention(enum.Enum):
    """Index range of the Dirichlet-kernel average."""

    ZERO_BASED = "zero_based"  # (1/n) sum_{k=0}^{n-1}
    SHIFTED = "shifted"  # (1/n) sum_{k=1}^{n}


def _require_resolvable(base: VilenkinBase, n: int, level: int) -> None:
    base.require_level(level)
    if n > base.orders[level]:
        raise ValueError(f"index {n} not resolvable at level {level} (max {base.orders[level]})")


def dirichlet(base: VilenkinBase, n: int, level: int) -> LevelFunction:
    """Dirichlet kernel D_n: the sum of the first n characters; D_0 = 0."""
    if n < 0:
        raise ValueError(f"kernel index must be >= 0, got {n}")
    _require_resolvable(base, n, level)
    coeffs = np.zeros(base.orders[level], dtype=np.complex128)
    coeffs[:n] = 1.0
    return inverse(Spectrum(base, level, coeffs))


def _mean_weights(n: int, convention: KernelConvention) -> np.ndarray:
    """Per-character weights of the averaged kernel, index j < n.

    sum_{k=a}^{b} D_k collects character j exactly (count of k > j in the
    range) times, so the average has closed spectral weights.
    """
    j = np.arange(n, dtype=np.float64)
    if convention is KernelConvention.SHIFTED:
        return (n - j) / n
    return (n - 1 - j) / n


def fejer_kernel(
    base: VilenkinBase,
    n: int,
    level: int,
    convention: KernelConvention = KernelConvention.SHIFTED,
) -> LevelFunction:
    """Average of Dirichlet kernels under the chosen convention."""
    if n < 1:
        raise ValueError(f"kernel index must be >= 1, got {n}")
    _require_resolvable(base, n, level)
    coeffs = np.zeros(base.orders[level], dtype=np.complex128)
    coeffs[:n] = _mean_weights(n, convention)
    return inverse(Spectrum(base, level, coeffs))


def gat_closed_form(base: VilenkinBase, exponent: int, x: GroupPoint) -> float:
    """Closed form of the shifted dyadic Fejer kernel at n = 2^exponent.

    With t the position of x's first nonzero digit:
      (2^A + 1) / 2   if x has no nonzero digit below A (x in I_A),
      2^(t-1)         if x agrees with e_t on all digits below A,
      0               otherwise.
    """
    if not base.is_dyadic:
        raise ValueError("closed form requires an all-2 base")
    if not 0 <= exponent <= base.depth:
        raise ValueError(f"exponent {exponent} outside [0, {base.depth}]")
    t = next((j for j, c in enumerate(x.coords) if c), None)
    if t is None or t >= exponent:
        return (2.0**exponent + 1.0) / 2.0
    if any(x.coords[j] for j in range(t + 1, exponent)):
        return 0.0
    return 2.0 ** (t - 1)


def gat_kernel(base: VilenkinBase, exponent: int, level: int) -> LevelFunction:
    """The dyadic closed form sampled on all level cylinders."""
    if level < exponent:
        raise ValueError(f"level {level} cannot resolve exponent {exponent}")
    vals = np.array(
        [
            gat_closed_form(base, exponent, point_of(base, r, level))
            for r in range(base.orders[level])
        ],
        dtype=np.complex128,
    )
    return LevelFunction(base, level, vals)


def riesz_kernel(base: VilenkinBase, n: int, level: int) -> LevelFunction:
    """Riesz logarithmic kernel L_n = (1/l_n) sum_{k=1}^{n} D_k / k.

    Character j is collected with total weight (l_n - l_j)/l_n, which is
    what gets synthesized here; the literal sum is the test oracle.
    """
    if n < 1:
        raise ValueError(f"kernel index must be >= 1, got {n}")
    _require_resolvable(base, n, level)
    harm = HarmonicSums.upto(n)
    coeffs = np.zeros(base.orders[level], dtype=np.complex128)
    coeffs[:n] = 1.0 - harm.values[:n] / harm[n]
    return inverse(Spectrum(base, level, coeffs))


def riesz_kernel_abel(base: VilenkinBase, n: int, level: int) -> LevelFunction:
    """Abel-transform route: (1/l_n) sum_{j=1}^{n-1} K_j/(j+1) + K_n/l_n.

    Exact identity with the shifted Fejer convention; agreement with
    :func:`riesz_kernel` is asserted by the verification suite.
    """
    if n < 1:
        raise ValueError(f"kernel index must be >= 1, got {n}")
    _require_resolvable(base, n, level)
    harm = HarmonicSums.upto(n)
    total = base.orders[level]
    sampler = CharacterSampler(base, level)
    d = np.zeros(total, dtype=np.complex128)  # D_j
    cum = np.zeros(total, dtype=np.complex128)  # sum_{k<=j} D_k
    acc = np.zeros(total, dtype=np.complex128)  # sum_{j<n} K_j/(j+1)
    for j in range(1, n + 1):
        d = d + sampler.character(j - 1)
        cum = cum + d
        if j < n:
            acc = acc + cum / (j * (j + 1))
    return LevelFunction(base, level, (acc + cum / n) / harm[n])


def partial_sum(f: LevelFunction, n: int) -> LevelFunction:
    """Fourier partial sum S_n f (S_0 f = 0), synthesized exactly."""
    if n < 0:
        raise ValueError(f"partial-sum index must be >= 0, got {n}")
    _require_resolvable(f.base, n, f.level)
    coeffs = forward(f).coeffs.copy()
    coeffs[n:] = 0.0
    return inverse(Spectrum(f.base, f.level, coeffs))


def all_partial_sums(f: LevelFunction) -> list[LevelFunction]:
    """Every S_k f for k = 0..M_N via cumulative sums in the sample domain.

    Quadratic time and memory in M_N; meant for small levels.
    """
    total = f.base.orders[f.level]
    coeffs = forward(f).coeffs
    sampler = CharacterSampler(f.base, f.level)
    out = [LevelFunction(f.base, f.level, np.zeros(total, dtype=np.complex128))]
    acc = np.zeros(total, dtype=np.complex128)
    for k in range(total):
        if coeffs[k] != 0:
            acc = acc + coeffs[k] * sampler.character(k)
        out.append(LevelFunction(f.base, f.level, acc))
    return out


def fejer_mean(
    f: LevelFunction,
    n: int,
    convention: KernelConvention = KernelConvention.SHIFTED,
) -> LevelFunction:
    """Average of partial sums under the chosen convention."""
    if n < 1:
        raise ValueError(f"mean index must be >= 1, got {n}")
    _require_resolvable(f.base, n, f.level)
    coeffs = forward(f).coeffs.copy()
    coeffs[:n] *= _mean_weights(n, convention)
    coeffs[n:] = 0.0
    return inverse(Spectrum(f.base, f.level, coeffs))


def riesz_mean(f: LevelFunction, n: int) -> LevelFunction:
    """Riesz logarithmic mean (1/l_n) sum_{k=1}^{n} S_k f / k."""
    if n < 1:
        raise ValueError(f"mean index must be >= 1, got {n}")
    _require_resolvable(f.base, n, f.level)
    harm = HarmonicSums.upto(n)
    coeffs = forward(f).coeffs.copy()
    coeffs[:n] *= 1.0 - harm.values[:n] / harm[n]
    coeffs[n:] = 0.0
    return inverse(Spectrum(f.base, f.level, coeffs))


def riesz_mean_abel(
    f: LevelFunction,
    n: int,
) -> LevelFunction:
    """Abel route for the Riesz mean:
    (1/l_n) sum_{j=1}^{n-1} sigma_j f / (j+1) + sigma_n f / l_n
    with shifted Fejer means; exact-identity partner of :func:`riesz_mean`.
    """
    if n < 1:
        raise ValueError(f"mean index must be >= 1, got {n}")
    _require_resolvable(f.base, n, f.level)
    harm = HarmonicSums.upto(n)
    total = f.base.orders[f.level]
    coeffs = forward(f).coeffs
    sampler = CharacterSampler(f.base, f.level)
    s = np.zeros(total, dtype=np.complex128)
    cum = np.zeros(total, dtype=np.complex128)
    acc = np.zeros(total, dtype=np.complex128)
    for j in range(1, n + 1):
        if coeffs[j - 1] != 0:
            s = s + coeffs[j - 1] * sampler.character(j - 1)
        cum = cum + s
        if j < n:
            acc = acc + cum / (j * (j + 1))
    return LevelFunction(f.base, f.level, (acc + cum / n) / harm[n])


def convolve(f: LevelFunction, g: LevelFunction) -> LevelFunction:
    """Group convolution (f * g)(x) = integral of f(t) g(x - t) dmu(t).

    Evaluated literally through rank subtraction, O(M^2); this is the
    sample-domain partner that ties kernels to means in the tests.
    """
    if f.base != g.base:
        raise ValueError("mismatched bases")
    level = max(f.level, g.level)
    fv = f.at_level(level).values
    gv = g.at_level(level).values
    total = f.base.orders[level]
    out = np.empty(total, dtype=np.complex128)
    for r in range(total):
        out[r] = fv @ gv[subtract_rank_table(f.base, level, r)]
    return LevelFunction(f.base, level, out / total)


# ----------------------------------------------------------------------
# exhaustive kernel sweeps


@dataclass(frozen=True)
class KernelIntegralSweep:
    """Per-n integrals of |K_n| with their running maximum."""

    convention: KernelConvention
    integrals: np.ndarray  # index n-1 holds the integral of |K_n|
    running_max: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.integrals)

    def growth(self, n_lo: int, n_hi: int) -> float:
        """Relative growth of the running max between two indices."""
        return float(self.running_max[n_hi - 1] / self.running_max[n_lo - 1] - 1.0)


def kernel_integral_sweep(
    base: VilenkinBase,
    level: int,
    n_max: int,
    convention: KernelConvention = KernelConvention.SHIFTED,
) -> KernelIntegralSweep:
    """Integral of |K_n| for every n = 1..n_max in one streaming pass."""
    _require_resolvable(base, n_max, level)
    total = base.orders[level]
    sampler = CharacterSampler(base, level)
    d = np.zeros(total, dtype=np.complex128)
    cum = np.zeros(total, dtype=np.complex128)
    integrals = np.empty(n_max, dtype=np.float64)
    for n in range(1, n_max + 1):
        d = d + sampler.character(n - 1)
        cum = cum + d
        if convention is KernelConvention.SHIFTED:
            kn = cum
        else:
            kn = cum - d
        integrals[n - 1] = np.mean(np.abs(kn)) / n
    return KernelIntegralSweep(convention, integrals, np.maximum.accumulate(integrals))


@dataclass(frozen=True)
class LocalizationCell:
    """One cylinder class of the coset partition, with its bound scales.

    kind "pair": level-N cylinder anchored at x_k e_k + x_l e_l; the
    kernel-integral bound scales like M_k M_l / (n M_N) and the tail-sum
    bound like M_k M_l / M_N^2.  kind "single": anchored at x_k e_k;
    scales M_k / M_N and (M_k / M_N) l_n.
    """

    kind: str
    k: int
    x_k: int
    l: int | None
    x_l: int | None
    block_start: int
    block_stop: int


@dataclass(frozen=True)
class LocalizationSweep:
    """Ratios of exact kernel mass on cylinder classes to their bound
    expressions (constants stripped), for n = start..n_max."""

    base: VilenkinBase
    level_n: int
    n_start: int
    n_values: np.ndarray
    cells: tuple[LocalizationCell, ...]
    kernel_ratios: np.ndarray  # shape (cells, n)
    tail_ratios: np.ndarray  # shape (cells, n)

    def family_ratios(self, which: str, kind: str) -> np.ndarray:
        table = self.kernel_ratios if which == "kernel" else self.tail_ratios
        rows = [i for i, c in enumerate(self.cells) if c.kind == kind]
        return table[rows]

    def family_max_series(self, which: str, kind: str) -> np.ndarray:
        """Running max over n of the per-n max across the family's cells."""
        per_n = self.family_ratios(which, kind).max(axis=0)
        return np.maximum.accumulate(per_n)

    def c_emp(self, which: str, kind: str) -> float:
        return float(self.family_max_series(which, kind)[-1])

    def stability(self, which: str, kind: str) -> float:
        """Relative running-max growth over the top octave of n."""
        series = self.family_max_series(which, kind)
        half = np.searchsorted(self.n_values, self.n_values[-1] // 2)
        return float(series[-1] / series[half] - 1.0)


def localization_sweep(
    base: VilenkinBase,
    cylinder_level: int,
    n_max: int,
    level: int | None = None,
    convention: KernelConvention = KernelConvention.SHIFTED,
    sampler: CharacterSampler | None = None,
) -> LocalizationSweep:
    """Exact kernel mass per coset-partition class against bound shapes.

    For each class cylinder and each n >= M_N computes the integral of
    |K_n(x - t)| over the zero level-N cylinder (constant in x across the
    class, so one representative block suffices) and the cumulative tail
    sum over j = M_N+1..n of the same integrals divided by j+1.  Ratios
    against the constant-free bound expressions estimate the constants.
    """
    if not 1 <= cylinder_level <= base.depth:
        raise ValueError(f"cylinder level {cylinder_level} outside [1, {base.depth}]")
    if level is None:
        level = base.depth
    _require_resolvable(base, n_max, level)
    n_cells = cylinder_level
    m_n = base.orders[n_cells]
    if n_max < m_n:
        raise ValueError(f"n_max {n_max} below the first admissible index {m_n}")
    total = base.orders[level]
    width = total // m_n

    cells: list[LocalizationCell] = []
    for k in range(n_cells - 1):
        for xk in range(1, base.moduli[k]):
            for l in range(k + 1, n_cells):
                for xl in range(1, base.moduli[l]):
                    rank = xk * (m_n // base.orders[k + 1]) + xl * (m_n // base.orders[l + 1])
                    cells.append(
                        LocalizationCell("pair", k, xk, l, xl, rank * width, (rank + 1) * width)
                    )
    for k in range(n_cells):
        for xk in range(1, base.moduli[k]):
            rank = xk * (m_n // base.orders[k + 1])
            cells.append(LocalizationCell("single", k, xk, None, None, rank * width, (rank + 1) * width))

    n_values = np.arange(m_n, n_max + 1)
    harm = HarmonicSums.upto(n_max)
    if sampler is None:
        sampler = CharacterSampler(base, level)
    d = np.zeros(total, dtype=np.complex128)
    cum = np.zeros(total, dtype=np.complex128)
    kernel_ratios = np.empty((len(cells), len(n_values)), dtype=np.float64)
    tail_ratios = np.empty_like(kernel_ratios)
    tails = np.zeros(len(cells), dtype=np.float64)

    scale_kernel = np.empty(len(cells))
    scale_tail_const = np.empty(len(cells))
    for i, c in enumerate(cells):
        mk = base.orders[c.k]
        if c.kind == "pair":
            ml = base.orders[c.l]
            scale_kernel[i] = mk * ml / m_n  # divide further by n per step
            scale_tail_const[i] = mk * ml / m_n**2
        else:
            scale_kernel[i] = mk / m_n
            scale_tail_const[i] = mk / m_n  # times l_n per step

    for n in range(1, n_max + 1):
        d = d + sampler.character(n - 1)
        cum = cum + d
        if n < m_n:
            continue
        kn_abs = np.abs(cum if convention is KernelConvention.SHIFTED else cum - d) / n
        col = n - m_n
        for i, c in enumerate(cells):
            mass = kn_abs[c.block_start : c.block_stop].sum() / total
            if c.kind == "pair":
                kernel_ratios[i, col] = mass / (scale_kernel[i] / n)
            else:
                kernel_ratios[i, col] = mass / scale_kernel[i]
            if n > m_n:
                tails[i] += mass / (n + 1)
            if c.kind == "pair":
                tail_ratios[i, col] = tails[i] / scale_tail_const[i]
            else:
                tail_ratios[i, col] = tails[i] / (scale_tail_const[i] * harm[n])
    return LocalizationSweep(
        base, n_cells, m_n, n_values, tuple(cells), kernel_ratios, tail_ratios
    )
