from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from ratmap.linalg import LinSystem, Reducer, complement, quotient_dim, rank, rref

matrices = st.integers(1, 6).flatmap(
    lambda r: st.lists(st.lists(st.integers(-3, 3), min_size=r, max_size=r), min_size=1, max_size=7))


def _vecs(rows):
    return [{i: Fraction(x) for i, x in enumerate(r) if x} for r in rows]


@given(matrices)
def test_reducer_rank_matches_sympy(rows):
    red = Reducer()
    for v in _vecs(rows):
        red.add(v)
    assert red.rank == sympy.Matrix(rows).rank()


@given(matrices)
def test_kernel_relations_are_relations(rows):
    vecs = _vecs(rows)
    red = Reducer()
    for v in vecs:
        rel = red.add(v)
        if rel is not None:
            total = {}
            for j, c in rel.items():
                for k, x in vecs[j].items():
                    total[k] = total.get(k, 0) + c * x
            assert not any(total.values())


@given(matrices, st.lists(st.integers(-2, 2), min_size=7, max_size=7))
def test_coords_reconstruct(rows, coeffs):
    vecs = _vecs(rows)
    red = Reducer()
    for v in vecs:
        red.add(v)
    target = {}
    for c, v in zip(coeffs, vecs):
        for k, x in v.items():
            target[k] = target.get(k, 0) + c * x
    target = {k: x for k, x in target.items() if x}
    x = red.coords(target)
    assert x is not None
    back = {}
    for j, c in x.items():
        for k, y in vecs[j].items():
            back[k] = back.get(k, 0) + c * y
    assert {k: y for k, y in back.items() if y} == target


@given(matrices)
def test_solve_rank_nullity(cols):
    nrows = len(cols[0])
    sys_ = LinSystem(nrows, _vecs(cols))
    sol = sys_.solve()
    assert sol.rank + len(sol.kernel) == len(cols)
    for z in sol.kernel:
        assert not sys_.apply(z)
    assert sol.rank == sympy.Matrix(cols).T.rank()


@given(matrices)
def test_rref_matches_sympy(rows):
    ncols = len(rows[0])
    ours, pivots = rref(rows, ncols)
    theirs, tp = sympy.Matrix(rows).rref()
    assert list(pivots) == list(tp)
    for i, r in enumerate(ours):
        assert [Fraction(x) for x in r] == [Fraction(int(sympy.fraction(y)[0]), int(sympy.fraction(y)[1]))
                                            for y in theirs.row(i)]


def test_complement_and_quotient():
    sub = [{0: Fraction(1), 1: Fraction(1)}]
    comp = complement(3, sub)
    assert len(comp) == 2
    assert quotient_dim(3, sub) == 2
    assert rank(sub + [{j: Fraction(1)} for j in comp]) == 3
