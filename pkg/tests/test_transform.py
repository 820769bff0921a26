import numpy as np
import pytest

from vilenkin.functions import LevelFunction, constant, indicator
from vilenkin.group import Cylinder, GroupPoint, make_base, point_add, point_of, zero_point
from vilenkin.kernels import dirichlet
from vilenkin.transform import (
    Spectrum,
    character,
    character_matrix,
    character_samples,
    forward,
    forward_naive,
    inverse,
    rademacher,
)


def _random(base, level, rng):
    n = base.orders[level]
    return LevelFunction(base, level, rng.standard_normal(n) + 1j * rng.standard_normal(n))


def test_rademacher_values():
    b = make_base((2, 2))
    assert rademacher(0, GroupPoint(b, (1, 0))) == pytest.approx(-1.0)
    b3 = make_base((3, 2))
    assert rademacher(0, GroupPoint(b3, (1, 0))) == pytest.approx(np.exp(2j * np.pi / 3))
    assert rademacher(1, zero_point(b3)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        rademacher(2, zero_point(b))


def test_character_examples():
    b = make_base((2, 2, 2))
    for r in range(8):
        x = point_of(b, r, 3)
        assert character(0, x) == pytest.approx(1.0)
        assert character(1, x) == pytest.approx((-1.0) ** x.coords[0])
    for n in range(8):
        assert character(n, zero_point(b)) == pytest.approx(1.0)


@pytest.mark.parametrize("moduli,depth", [((2,), 4), ((2, 3), 3), ((3,), 3)])
def test_character_group_law_exhaustive(moduli, depth):
    base = make_base(moduli, depth)
    points = [point_of(base, r, base.depth) for r in range(base.size)]
    for n in range(base.size):
        vals = {p.coords: character(n, p) for p in points}
        for x in points[: min(6, len(points))]:
            for y in points:
                lhs = character(n, point_add(x, y))
                assert lhs == pytest.approx(vals[x.coords] * vals[y.coords])


@pytest.mark.parametrize("moduli,depth", [((2,), 8), ((2, 3, 2), 3), ((3, 3), 2)])
def test_orthonormality_exhaustive(moduli, depth):
    base = make_base(moduli, depth)
    psi = character_matrix(base, base.depth)
    gram = psi @ psi.conj().T / base.size
    assert np.max(np.abs(gram - np.eye(base.size))) < 1e-12


def test_character_samples_agree_with_pointwise():
    base = make_base((2, 3, 4), 3)
    for n in (0, 1, 5, 17, 23):
        sampled = character_samples(base, n, 3)
        direct = [character(n, point_of(base, r, 3)) for r in range(base.size)]
        assert np.max(np.abs(sampled - direct)) < 1e-14


def test_forward_of_character_is_indicator():
    base = make_base((2, 3), 4)
    for j in (0, 1, 7, 35):
        f = LevelFunction(base, 4, character_samples(base, j, 4))
        coeffs = forward(f).coeffs
        expected = np.zeros(base.size)
        expected[j] = 1.0
        assert np.max(np.abs(coeffs - expected)) < 1e-12


def test_forward_constant():
    base = make_base((3, 2), 2)
    coeffs = forward(constant(base, 2, 2.5)).coeffs
    assert coeffs[0] == pytest.approx(2.5)
    assert np.max(np.abs(coeffs[1:])) < 1e-15


def test_forward_of_scaled_block_is_all_ones():
    base = make_base((2, 3, 2), 3)
    f = indicator(Cylinder.from_rank(base, 3, 0), 3, base.size)
    coeffs = forward(f).coeffs
    assert np.max(np.abs(coeffs - 1.0)) < 1e-12
    # same statement through the naive oracle
    naive = forward_naive(f).coeffs
    assert np.max(np.abs(naive - 1.0)) < 1e-12


def test_all_ones_spectrum_synthesizes_dirichlet_block():
    base = make_base((2, 3), 4)
    s = Spectrum(base, 4, np.ones(base.size))
    f = inverse(s)
    block = indicator(Cylinder.from_rank(base, 4, 0), 4, base.size)
    assert f.max_abs_diff(block) < 1e-12
    assert f.max_abs_diff(dirichlet(base, base.size, 4)) < 1e-12


def test_indicator_spectrum_synthesizes_character():
    base = make_base((3, 2), 2)
    for n in range(base.size):
        coeffs = np.zeros(base.size)
        coeffs[n] = 1.0
        f = inverse(Spectrum(base, 2, coeffs))
        assert np.max(np.abs(f.values - character_samples(base, n, 2))) < 1e-14


@pytest.mark.parametrize(
    "moduli,depth", [((2,), 10), ((2, 3), 8), ((3,), 6), ((6, 5, 4), 3)]
)
def test_fast_matches_naive(moduli, depth):
    base = make_base(moduli, depth)
    rng = np.random.default_rng(42)
    f = _random(base, base.depth, rng)
    fast = forward(f).coeffs
    naive = forward_naive(f).coeffs
    scale = np.max(np.abs(naive))
    assert np.max(np.abs(fast - naive)) / scale < 1e-10


def test_naive_matches_pure_python_double_loop():
    base = make_base((2, 3, 2), 3)
    rng = np.random.default_rng(8)
    f = _random(base, 3, rng)
    slow = np.array(
        [
            sum(
                f.values[r] * np.conj(character(k, point_of(base, r, 3)))
                for r in range(base.size)
            )
            / base.size
            for k in range(base.size)
        ]
    )
    assert np.max(np.abs(forward(f).coeffs - slow)) < 1e-12


def test_round_trip():
    rng = np.random.default_rng(0)
    for moduli, depth in (((2,), 9), ((2, 3), 6), ((4, 3, 5), 3)):
        base = make_base(moduli, depth)
        f = _random(base, base.depth, rng)
        assert inverse(forward(f)).max_abs_diff(f) < 1e-9
        g = _random(base, base.depth - 1, rng)
        assert inverse(forward(g)).max_abs_diff(g) < 1e-9


def test_parseval():
    rng = np.random.default_rng(17)
    base = make_base((2, 3), 6)
    for _ in range(20):
        f = _random(base, 6, rng)
        lhs = np.sum(np.abs(forward(f).coeffs) ** 2)
        rhs = np.mean(np.abs(f.values) ** 2)
        assert abs(lhs - rhs) / rhs < 1e-10


def test_level_zero_edge_case():
    base = make_base((2,), 2)
    f = constant(base, 0, 3.0 - 1j)
    s = forward(f)
    assert s.coeffs[0] == pytest.approx(3.0 - 1j)
    assert inverse(s).max_abs_diff(f) == 0.0


def test_spectrum_shape_validation():
    base = make_base((2,), 2)
    with pytest.raises(ValueError):
        Spectrum(base, 2, np.ones(3))
    with pytest.raises(ValueError):
        character_samples(base, 4, 2)
