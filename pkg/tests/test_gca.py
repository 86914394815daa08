from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from ratmap.errors import MixedAlgebras, NonPositiveDegreeGenerator
from ratmap.gca import Derivation, FreeAlgebra, enumerate_basis, hilbert_coefficients, substitute

from conftest import free_algebras, homogeneous


def test_odd_generators_anticommute():
    R = FreeAlgebra([("x", 3), ("y", 5), ("z", 2)])
    x, y, z = R.gen("x"), R.gen("y"), R.gen("z")
    assert x * y == -(y * x)
    assert x * x == 0
    assert x * z == z * x
    assert str(y * x) == "-x*y"
    assert (z ** 3).degree() == 6


def test_mixed_rings_rejected():
    R, S = FreeAlgebra([("x", 2)]), FreeAlgebra([("y", 2)])
    with pytest.raises(MixedAlgebras):
        R.gen(0) * S.gen(0)
    with pytest.raises(NonPositiveDegreeGenerator):
        enumerate_basis(FreeAlgebra([("t", 0)]).gens, 2)


@given(st.data(), free_algebras())
def test_graded_commutativity(data, R):
    a, b = data.draw(st.integers(0, 8)), data.draw(st.integers(0, 8))
    u, v = data.draw(homogeneous(R, a)), data.draw(homogeneous(R, b))
    assert u * v == (v * u).scale(-1 if a * b % 2 else 1)


@given(st.data(), free_algebras())
def test_associativity(data, R):
    u, v, w = (data.draw(homogeneous(R, data.draw(st.integers(0, 6)))) for _ in range(3))
    assert (u * v) * w == u * (v * w)


@given(free_algebras(max_gens=4, max_degree=5), st.integers(0, 14))
def test_basis_counts_match_hilbert_series(R, n):
    assert len(R.basis(n)) == hilbert_coefficients([g.degree for g in R.gens], n)[n]


@given(free_algebras(max_gens=3, max_degree=4), st.integers(0, 10))
def test_basis_matches_brute_force(R, n):
    ranges = [range(2) if g.odd else range(n // g.degree + 1) for g in R.gens]
    brute = set()
    for exps in product(*ranges):
        if sum(e * g.degree for e, g in zip(exps, R.gens)) == n:
            brute.add(tuple((i, e) for i, e in enumerate(exps) if e))
    assert set(R.basis(n)) == brute


@given(st.data(), free_algebras(max_gens=3, max_degree=4))
def test_derivation_is_graded_leibniz(data, R):
    values = {g.ordinal: data.draw(homogeneous(R, g.degree + 1)) for g in R.gens}
    d = Derivation(R, values)
    a, b = data.draw(st.integers(0, 6)), data.draw(st.integers(0, 6))
    u, v = data.draw(homogeneous(R, a)), data.draw(homogeneous(R, b))
    sign = -1 if a % 2 else 1
    assert d(u * v) == d(u) * v + (u * d(v)).scale(sign)


def test_substitute_is_multiplicative():
    R = FreeAlgebra([("x", 2), ("y", 3)])
    S = FreeAlgebra([("a", 2), ("b", 3), ("c", 1)])
    a, b, c = S.gen(0), S.gen(1), S.gen(2)
    images = {0: a + c * c, 1: b + a * c}
    u = R.gen(0) ** 2 * R.gen(1)
    assert substitute(u, images, S) == images[0] ** 2 * images[1]
    # unmapped generators go to zero
    assert substitute(R.gen(1), {0: a}, S) == 0


def test_elem_arithmetic_helpers():
    R = FreeAlgebra([("x", 2), ("y", 3)])
    x, y = R.gen("x"), R.gen("y")
    u = x * y + (x ** 3).scale(Fraction(1, 2))
    assert u.word_lengths() == {2, 3}
    assert u.word_component(3) == (x ** 3) / 2
    assert u.component(5) == x * y
    assert u.support() == {0, 1}
    assert u - u == 0
