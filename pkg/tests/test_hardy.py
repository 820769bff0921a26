import numpy as np
import pytest

from vilenkin.functions import LevelFunction, constant, indicator
from vilenkin.group import Cylinder, make_base
from vilenkin.hardy import (
    CorpusSpec,
    Martingale,
    PAtom,
    assemble_from_atoms,
    hardy_quasinorm,
    martingale_from_function,
    martingale_spectrum,
    maximal_function,
    random_atom,
    validate_atom,
)
from vilenkin.kernels import partial_sum
from vilenkin.transform import character_samples, forward


def _psi(base, n, level):
    return LevelFunction(base, level, character_samples(base, n, level))


def test_martingale_from_character():
    base = make_base((2,), 4)
    m = martingale_from_function(_psi(base, 1, 4))
    assert np.max(np.abs(m.components[0].values)) < 1e-15  # mean of psi_1 is zero
    for n in range(1, 5):
        assert m.components[n].max_abs_diff(_psi(base, 1, n)) < 1e-13


def test_martingale_from_constant():
    base = make_base((2, 3), 3)
    m = martingale_from_function(constant(base, 3, 2.5))
    for comp in m.components:
        assert np.allclose(comp.values, 2.5)


def test_martingale_adaptedness_enforced():
    base = make_base((2,), 2)
    good = martingale_from_function(LevelFunction(base, 2, [1.0, 2.0, 3.0, 4.0]))
    assert good.top_level == 2
    bad = (
        constant(base, 0, 5.0),  # inconsistent with the finer components
        LevelFunction(base, 1, [0.0, 0.0]),
        LevelFunction(base, 2, [0.0, 0.0, 0.0, 0.0]),
    )
    with pytest.raises(ValueError, match="adaptedness"):
        Martingale(base, bad)


def test_maximal_function_examples():
    base = make_base((2,), 3)
    single = Martingale(base, (constant(base, 0, -2.0 + 1.5j),))
    assert np.allclose(maximal_function(single).values, 2.5)
    m = martingale_from_function(_psi(base, 1, 3))
    assert np.allclose(maximal_function(m).values, 1.0)


def test_maximal_function_dominates_components():
    rng = np.random.default_rng(3)
    base = make_base((2, 3), 4)
    f = LevelFunction(base, 4, rng.standard_normal(36) + 1j * rng.standard_normal(36))
    m = martingale_from_function(f)
    star = maximal_function(m)
    for comp in m.components:
        gap = star - comp.modulus()
        assert np.min(gap.values.real) >= -1e-12


def test_maximal_function_matches_averaging_oracle():
    # brute-force oracle: max over levels of |block average around each point|
    rng = np.random.default_rng(13)
    base = make_base((2, 3, 2), 3)
    f = LevelFunction(base, 3, rng.standard_normal(12))
    star = maximal_function(martingale_from_function(f))
    for r in range(base.size):
        best = 0.0
        for n in range(base.depth + 1):
            width = base.size // base.orders[n]
            block = f.values[(r // width) * width : (r // width + 1) * width]
            best = max(best, abs(block.mean()))
        assert star.values[r].real == pytest.approx(best)


def test_hardy_quasinorm_examples():
    base = make_base((2,), 4)
    m = martingale_from_function(_psi(base, 1, 4))
    for p in (0.3, 0.5, 1.0, 2.0):
        assert hardy_quasinorm(m, p) == pytest.approx(1.0)
    c = martingale_from_function(constant(base, 4, -3.0))
    assert hardy_quasinorm(c, 0.5) == pytest.approx(3.0)


def test_hardy_dominates_l1_for_function_martingales():
    rng = np.random.default_rng(23)
    base = make_base((2, 3), 4)
    for _ in range(10):
        f = LevelFunction(base, 4, rng.standard_normal(36) + 1j * rng.standard_normal(36))
        m = martingale_from_function(f)
        assert hardy_quasinorm(m, 1.0) >= f.lp_quasinorm(1.0) - 1e-12


def test_martingale_spectrum_stabilizes():
    base = make_base((2,), 4)
    rng = np.random.default_rng(31)
    f = LevelFunction(base, 4, rng.standard_normal(16))
    m = martingale_from_function(f)
    top = martingale_spectrum(m).coeffs
    # indices resolvable at a coarser level already carry the same coefficient
    for n in range(1, 5):
        part = forward(m.components[n]).coeffs
        assert np.max(np.abs(part - top[: base.orders[n]])) < 1e-12


# ----------------------------------------------------------------------
# atoms


def test_character_atom_on_whole_group_is_valid():
    base = make_base((2,), 3)
    atom = PAtom(0.5, Cylinder.from_rank(base, 0, 0), _psi(base, 1, 3))
    check = validate_atom(atom)
    assert check.ok, check.failures


def test_constant_function_is_not_an_atom():
    base = make_base((2,), 3)
    atom = PAtom(0.5, Cylinder.from_rank(base, 0, 0), constant(base, 3))
    check = validate_atom(atom)
    assert not check.ok
    assert "mean_not_zero" in check.failures


def test_child_difference_atom():
    base = make_base((2,), 4)
    level = 2
    p = 0.5
    support = Cylinder.from_rank(base, level, 0)
    amp = base.orders[level] ** (1 / p)
    kids = base.moduli[level]
    child0 = Cylinder.from_rank(base, level + 1, 0)
    child1 = Cylinder.from_rank(base, level + 1, 1)
    f = indicator(child0, 4, amp) - indicator(child1, 4, amp)
    atom = PAtom(p, support, f)
    assert validate_atom(atom).ok
    # exceeding the sup bound flips exactly that diagnostic
    too_big = PAtom(p, support, f * 1.5)
    check = validate_atom(too_big)
    assert check.failures == ("sup_bound_exceeded",)


def test_support_violation_detected():
    base = make_base((2,), 3)
    atom = PAtom(1.0, Cylinder.from_rank(base, 1, 0), constant(base, 3, 0.5))
    check = validate_atom(atom)
    assert "support_violated" in check.failures


def test_random_atoms_always_validate():
    rng = np.random.default_rng(77)
    for moduli, depth in (((2,), 8), ((2, 3), 5), ((3,), 4)):
        base = make_base(moduli, depth)
        for p in (0.3, 0.5, 1.0):
            for _ in range(10):
                atom = random_atom(base, p, rng, level_range=(0, depth - 1))
                check = validate_atom(atom)
                assert check.ok, check.failures
                # saturation is exact
                bound = atom.support.measure ** (-1 / p)
                assert np.max(np.abs(atom.values.values)) == pytest.approx(bound)


def test_assemble_single_atom_resolves_to_itself():
    base = make_base((2,), 5)
    rng = np.random.default_rng(5)
    atom = random_atom(base, 0.5, rng, support_level=1)
    out = assemble_from_atoms(base, [atom], [1.0], 5)
    assert out.component.max_abs_diff(atom.values.at_level(5)) < 1e-12
    assert out.budget == pytest.approx(1.0)


def test_assemble_empty_is_zero():
    base = make_base((2,), 3)
    out = assemble_from_atoms(base, [], [], 2)
    assert np.max(np.abs(out.component.values)) == 0.0
    assert out.budget == 0.0


def test_assemble_length_mismatch():
    base = make_base((2,), 3)
    with pytest.raises(ValueError):
        assemble_from_atoms(base, [], [1.0], 2)


def test_assemble_components_match_partial_sums():
    # the level-n component of the series is S_{M_n} of the full sum
    base = make_base((2,), 6)
    rng = np.random.default_rng(8)
    atoms = [random_atom(base, 0.5, rng, level_range=(0, 3)) for _ in range(5)]
    coeffs = rng.uniform(-2, 2, size=5).tolist()
    full = sum(mu * a.values.at_level(6) for mu, a in zip(coeffs, atoms))
    for n in (0, 2, 4, 6):
        comp = assemble_from_atoms(base, atoms, coeffs, n).component
        assert comp.at_level(6).max_abs_diff(partial_sum(full, base.orders[n])) < 1e-10


def test_assembled_martingale_is_adapted_and_budgeted():
    base = make_base((2, 3), 4)
    rng = np.random.default_rng(9)
    atoms = [random_atom(base, 0.5, rng, level_range=(0, 2)) for _ in range(6)]
    coeffs = rng.uniform(0.2, 1.5, size=6).tolist()
    comps = tuple(
        assemble_from_atoms(base, atoms, coeffs, n).component for n in range(base.depth + 1)
    )
    mart = Martingale(base, comps)  # adaptedness enforced on construction
    budget = sum(abs(mu) ** 0.5 for mu in coeffs)
    ratio = hardy_quasinorm(mart, 0.5) / budget**2
    assert np.isfinite(ratio) and ratio > 0


def test_corpus_spec_roundtrip_and_determinism():
    spec = CorpusSpec(
        moduli=(2, 3), depth=6, p=0.5, count=4, seed=99, support_level_min=1, support_level_max=3
    )
    again = CorpusSpec.from_json(spec.to_json())
    assert again == spec
    a = spec.generate()
    b = spec.generate()
    for x, y in zip(a, b):
        assert x.support == y.support
        assert x.values.max_abs_diff(y.values) == 0.0
