"""Step functions on the group with exact integration and quasi-norms.

A :class:`LevelFunction` stores one complex value per level-N cylinder.
Refining to a deeper level replicates values and changes no integral or
norm, so every function measurable at its level is represented exactly.

Instances are immutable (the value array is marked read-only) and all
operations are pure.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .group import Cylinder, VilenkinBase

__all__ = [
    "LevelFunction",
    "constant",
    "indicator",
    "pointwise_sup",
    "write_csv",
]


@dataclass(frozen=True, eq=False)
class LevelFunction:
    """Complex function resolved at ``level``: one value per cylinder rank."""

    base: VilenkinBase
    level: int
    values: np.ndarray

    def __post_init__(self) -> None:
        self.base.require_level(self.level)
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.base.orders[self.level],):
            raise ValueError(
                f"expected {self.base.orders[self.level]} values at level {self.level}, "
                f"got shape {vals.shape}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    # ------------------------------------------------------------------
    # resolution changes

    def at_level(self, level: int) -> "LevelFunction":
        """Exact refinement to a deeper level (value replication)."""
        if level == self.level:
            return self
        if level < self.level:
            raise ValueError(f"cannot coarsen from level {self.level} to {level} via refinement")
        self.base.require_level(level)
        reps = self.base.orders[level] // self.base.orders[self.level]
        return LevelFunction(self.base, level, np.repeat(self.values, reps))

    def effective_level(self) -> int:
        """Coarsest level at which the stored values are constant on blocks."""
        level = self.level
        vals = self.values
        while level > 0:
            m = self.base.moduli[level - 1]
            blocks = vals.reshape(-1, m)
            if not (blocks == blocks[:, :1]).all():
                break
            vals = blocks[:, 0]
            level -= 1
        return level

    def compress(self) -> "LevelFunction":
        """Equivalent representation at the effective level."""
        lv = self.effective_level()
        if lv == self.level:
            return self
        step = self.base.orders[self.level] // self.base.orders[lv]
        return LevelFunction(self.base, lv, self.values[::step])

    # ------------------------------------------------------------------
    # integration and norms

    def integrate(self) -> complex:
        """Haar integral; exact for level-measurable functions."""
        return complex(np.mean(self.values))

    def lp_quasinorm(self, p: float) -> float:
        """(integral of |f|^p)^(1/p) for any p > 0."""
        if p <= 0:
            raise ValueError(f"p must be positive, got {p}")
        return float(np.mean(np.abs(self.values) ** p) ** (1.0 / p))

    def weak_lp(self, p: float) -> float:
        """sup over lambda > 0 of lambda^p * mu(|f| > lambda).

        |f| takes finitely many values, so the supremum is attained in the
        limit from below at a distinct value v and equals
        max_v v^p * mu(|f| >= v).  No outer 1/p root is applied.
        """
        if p <= 0:
            raise ValueError(f"p must be positive, got {p}")
        mods = np.abs(self.values)
        uniq, counts = np.unique(mods, return_counts=True)
        if uniq[-1] == 0.0:
            return 0.0
        # mu(|f| >= uniq[i]) via a reversed cumulative count
        ge = np.cumsum(counts[::-1])[::-1] / mods.size
        positive = uniq > 0
        return float(np.max(uniq[positive] ** p * ge[positive]))

    def weak_lp_at(self, p: float, threshold: float) -> float:
        """Threshold form lambda * mu(|f| >= lambda)^(1/p)."""
        if p <= 0:
            raise ValueError(f"p must be positive, got {p}")
        if threshold <= 0:
            raise ValueError(f"threshold must be positive, got {threshold}")
        measure = np.count_nonzero(np.abs(self.values) >= threshold) / self.values.size
        return float(threshold * measure ** (1.0 / p))

    def conditional_expectation(self, level: int) -> "LevelFunction":
        """Average over each level-``level`` cylinder; result at that level."""
        if level > self.level:
            raise ValueError(
                f"conditional expectation level {level} exceeds resolution {self.level}"
            )
        self.base.require_level(level)
        blocks = self.values.reshape(self.base.orders[level], -1)
        return LevelFunction(self.base, level, blocks.mean(axis=1))

    # ------------------------------------------------------------------
    # pointwise algebra (operands auto-refine to the common level)

    def _align(self, other: "LevelFunction") -> tuple["LevelFunction", "LevelFunction"]:
        if self.base != other.base:
            raise ValueError("mismatched bases")
        lv = max(self.level, other.level)
        return self.at_level(lv), other.at_level(lv)

    def __add__(self, other: "LevelFunction") -> "LevelFunction":
        a, b = self._align(other)
        return LevelFunction(a.base, a.level, a.values + b.values)

    def __radd__(self, other: "LevelFunction | int") -> "LevelFunction":
        if isinstance(other, int) and other == 0:  # lets builtin sum() fold families
            return self
        return self.__add__(other)

    def __sub__(self, other: "LevelFunction") -> "LevelFunction":
        a, b = self._align(other)
        return LevelFunction(a.base, a.level, a.values - b.values)

    def __mul__(self, scalar: complex) -> "LevelFunction":
        return LevelFunction(self.base, self.level, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "LevelFunction":
        return LevelFunction(self.base, self.level, -self.values)

    def modulus(self) -> "LevelFunction":
        """|f| as a (real-valued) function."""
        return LevelFunction(self.base, self.level, np.abs(self.values))

    def allclose(self, other: "LevelFunction", tol: float = 1e-9) -> bool:
        a, b = self._align(other)
        return bool(np.max(np.abs(a.values - b.values)) <= tol)

    def max_abs_diff(self, other: "LevelFunction") -> float:
        a, b = self._align(other)
        return float(np.max(np.abs(a.values - b.values)))


def constant(base: VilenkinBase, level: int, value: complex = 1.0) -> LevelFunction:
    return LevelFunction(base, level, np.full(base.orders[level], value, dtype=np.complex128))


def indicator(cell: Cylinder, level: int | None = None, amplitude: complex = 1.0) -> LevelFunction:
    """Indicator of a cylinder, optionally resolved deeper and scaled."""
    if level is None:
        level = cell.level
    cell.base.require_level(level)
    if level < cell.level:
        raise ValueError(f"level {level} cannot resolve a level-{cell.level} cylinder")
    vals = np.zeros(cell.base.orders[level], dtype=np.complex128)
    blk = cell.block(level)
    vals[blk.start : blk.stop] = amplitude
    return LevelFunction(cell.base, level, vals)


def pointwise_sup(functions: Sequence[LevelFunction] | Iterable[LevelFunction]) -> LevelFunction:
    """Pointwise maximum of the real parts of a family.

    Intended for real-valued families (moduli, component envelopes);
    imaginary parts are ignored.
    """
    fs = list(functions)
    if not fs:
        raise ValueError("empty family")
    base = fs[0].base
    level = max(f.level for f in fs)
    acc = np.real(fs[0].at_level(level).values).copy()
    for f in fs[1:]:
        if f.base != base:
            raise ValueError("mismatched bases")
        np.maximum(acc, np.real(f.at_level(level).values), out=acc)
    return LevelFunction(base, level, acc)


def write_csv(f: LevelFunction, out: IO[str] | str | Path) -> None:
    """Dump as rows (rank, real, imag) with full double precision."""
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="") as handle:
            write_csv(f, handle)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rank", "real", "imag"])
    for r, v in enumerate(f.values):
        writer.writerow([r, f"{v.real:.17g}", f"{v.imag:.17g}"])
