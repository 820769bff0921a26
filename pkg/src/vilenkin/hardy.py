"""Martingales on the cylinder filtration, Hardy quasi-norms, and atoms.

A martingale here is the finite adapted sequence of components at levels
0..N; the infinite index set of the classical theory truncates at the
base depth, which is exact for everything resolvable at that depth.
Only the assembly direction of the atomic characterization is provided:
given atoms and coefficients, build the martingale components and report
the coefficient budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .functions import LevelFunction, pointwise_sup
from .group import Cylinder, VilenkinBase, make_base
from .transform import Spectrum, forward

__all__ = [
    "Martingale",
    "PAtom",
    "AtomCheck",
    "AtomAssembly",
    "martingale_from_function",
    "martingale_spectrum",
    "maximal_function",
    "hardy_quasinorm",
    "validate_atom",
    "assemble_from_atoms",
    "random_atom",
    "CorpusSpec",
]

_ADAPTED_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Martingale:
    """Adapted component sequence f^(0)..f^(N), one level each.

    Construction verifies adaptedness: averaging a component over the
    coarser cylinders must reproduce the previous component.
    """

    base: VilenkinBase
    components: tuple[LevelFunction, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ValueError("martingale needs at least one component")
        for n, comp in enumerate(self.components):
            if comp.base != self.base:
                raise ValueError("mismatched bases")
            if comp.level != n:
                raise ValueError(f"component {n} resolved at level {comp.level}, expected {n}")
        for n in range(len(self.components) - 1):
            stepped = self.components[n + 1].conditional_expectation(n)
            if stepped.max_abs_diff(self.components[n]) > _ADAPTED_TOL:
                raise ValueError(f"components {n} and {n + 1} violate adaptedness")

    @property
    def top_level(self) -> int:
        return len(self.components) - 1

    @property
    def top(self) -> LevelFunction:
        return self.components[-1]


def martingale_from_function(f: LevelFunction) -> Martingale:
    """Conditional expectations of f at every level up to its own."""
    comps = tuple(f.conditional_expectation(n) for n in range(f.level + 1))
    return Martingale(f.base, comps)


def martingale_spectrum(m: Martingale) -> Spectrum:
    """Fourier coefficients of the martingale.

    The coefficient of index i stabilizes once a component resolves i, so
    the top component's coefficients are exact for every representable i.
    """
    return forward(m.top)


def maximal_function(m: Martingale) -> LevelFunction:
    """Pointwise supremum of the component moduli, at the top level."""
    return pointwise_sup([c.modulus() for c in m.components])


def hardy_quasinorm(m: Martingale, p: float) -> float:
    """L_p quasi-norm of the maximal function."""
    return maximal_function(m).lp_quasinorm(p)


@dataclass(frozen=True)
class PAtom:
    """Mean-zero function supported on one cylinder with the sup-norm cap
    mu(I)^(-1/p)."""

    p: float
    support: Cylinder
    values: LevelFunction


@dataclass(frozen=True)
class AtomCheck:
    ok: bool
    failures: tuple[str, ...]
    mean_residual: float
    sup_excess: float
    off_support_max: float


def validate_atom(atom: PAtom, tol: float = 1e-9) -> AtomCheck:
    """Check the three atom conditions; diagnostics name violations.

    Conditions: zero mean over the support, sup norm at most
    mu(I)^(-1/p), and vanishing off the support.
    """
    if atom.p <= 0:
        raise ValueError(f"atom exponent must be positive, got {atom.p}")
    f = atom.values
    if f.base != atom.support.base:
        raise ValueError("mismatched bases")
    level = max(f.level, atom.support.level)
    vals = f.at_level(level).values
    blk = atom.support.block(level)
    inside = vals[blk.start : blk.stop]
    outside_max = 0.0
    if blk.start > 0 or blk.stop < len(vals):
        outside = np.concatenate([vals[: blk.start], vals[blk.stop :]])
        outside_max = float(np.max(np.abs(outside))) if outside.size else 0.0
    mean_residual = abs(inside.sum() / len(vals))  # the integral over the support
    bound = atom.support.measure ** (-1.0 / atom.p)
    sup_excess = float(np.max(np.abs(vals)) - bound) if vals.size else -bound
    failures = []
    if mean_residual > tol:
        failures.append("mean_not_zero")
    if sup_excess > tol:
        failures.append("sup_bound_exceeded")
    if outside_max > tol:
        failures.append("support_violated")
    return AtomCheck(not failures, tuple(failures), float(mean_residual), sup_excess, outside_max)


@dataclass(frozen=True)
class AtomAssembly:
    component: LevelFunction
    budget: float  # sum of |mu_k|^p across the decomposition


def assemble_from_atoms(
    base: VilenkinBase,
    atoms: Sequence[PAtom],
    coeffs: Sequence[float],
    level: int,
) -> AtomAssembly:
    """Level-``level`` martingale component of the atomic series:
    the coefficient-weighted sum of each atom's level partial state."""
    if len(atoms) != len(coeffs):
        raise ValueError(f"{len(atoms)} atoms but {len(coeffs)} coefficients")
    base.require_level(level)
    total = base.orders[level]
    acc = np.zeros(total, dtype=np.complex128)
    budget = 0.0
    p = atoms[0].p if atoms else None
    for atom, mu in zip(atoms, coeffs):
        if atom.values.base != base:
            raise ValueError("mismatched bases")
        if atom.p != p:
            raise ValueError("atoms in one decomposition must share the exponent")
        if level <= atom.values.level:
            part = atom.values.conditional_expectation(level)
            acc += mu * part.values
        else:
            acc += mu * atom.values.at_level(level).values
        budget += abs(mu) ** p
    return AtomAssembly(LevelFunction(base, level, acc), budget)


def random_atom(
    base: VilenkinBase,
    p: float,
    rng: np.random.Generator,
    support_level: int | None = None,
    extra_depth: int = 2,
    level_range: tuple[int, int] | None = None,
) -> PAtom:
    """Draw a saturated random atom.

    Support level uniform over ``level_range`` (or fixed), values i.i.d.
    uniform in [-1, 1] on the sub-cylinders ``extra_depth`` levels below
    the support, projected to zero mean and rescaled so the sup norm hits
    mu(I)^(-1/p) exactly.  Two levels keeps dyadic draws nondegenerate
    (one level down a dyadic mean-zero draw is a Haar shape up to sign).
    """
    if support_level is None:
        lo, hi = level_range if level_range else (0, base.depth - 1)
        hi = min(hi, base.depth - extra_depth)
        support_level = int(rng.integers(lo, hi + 1))
    resolution = support_level + extra_depth
    if resolution > base.depth:
        raise ValueError(f"resolution {resolution} exceeds base depth {base.depth}")
    support = Cylinder.from_rank(base, support_level, 0)
    cells = base.orders[resolution] // base.orders[support_level]
    draw = rng.uniform(-1.0, 1.0, size=cells)
    draw -= draw.mean()
    while np.max(np.abs(draw)) < 1e-12:  # degenerate draw, retry
        draw = rng.uniform(-1.0, 1.0, size=cells)
        draw -= draw.mean()
    draw *= base.orders[support_level] ** (1.0 / p) / np.max(np.abs(draw))
    vals = np.zeros(base.orders[resolution], dtype=np.complex128)
    vals[:cells] = draw
    return PAtom(p, support, LevelFunction(base, resolution, vals))


@dataclass(frozen=True)
class CorpusSpec:
    """Reproducible description of a random atom corpus.

    The corpus is regenerated from this record alone, so two runs with
    the same spec produce identical atoms.
    """

    moduli: tuple[int, ...]
    depth: int
    p: float
    count: int
    seed: int
    support_level_min: int
    support_level_max: int
    extra_depth: int = 2

    def base(self) -> VilenkinBase:
        return make_base(self.moduli, self.depth)

    def generate(self) -> list[PAtom]:
        base = self.base()
        rng = np.random.default_rng(self.seed)
        return [
            random_atom(
                base,
                self.p,
                rng,
                level_range=(self.support_level_min, self.support_level_max),
                extra_depth=self.extra_depth,
            )
            for _ in range(self.count)
        ]

    def to_json(self) -> str:
        payload = {
            "kind": "atom-corpus",
            "version": 1,
            "moduli": list(self.moduli),
            "depth": self.depth,
            "p": self.p,
            "count": self.count,
            "seed": self.seed,
            "support_level_min": self.support_level_min,
            "support_level_max": self.support_level_max,
            "extra_depth": self.extra_depth,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CorpusSpec":
        raw = json.loads(text)
        if raw.get("kind") != "atom-corpus":
            raise ValueError("not an atom corpus descriptor")
        return cls(
            moduli=tuple(raw["moduli"]),
            depth=int(raw["depth"]),
            p=float(raw["p"]),
            count=int(raw["count"]),
            seed=int(raw["seed"]),
            support_level_min=int(raw["support_level_min"]),
            support_level_max=int(raw["support_level_max"]),
            extra_depth=int(raw.get("extra_depth", 2)),
        )

    @classmethod
    def from_path(cls, path: str | Path) -> "CorpusSpec":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))
