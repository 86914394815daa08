"""Sparse exact linear algebra over the rationals.

Vectors are plain dicts ``{index: Fraction}`` with no zero entries.  All
elimination uses the leftmost-lowest pivot rule, so every basis this module
returns is a deterministic function of its input.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

Vec = Dict[int, Fraction]


def vec_axpy(y: Vec, a, x: Vec) -> None:
    """In place ``y += a * x``."""
    if not a:
        return
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def vec_scale(a, x: Vec) -> Vec:
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


def vec_clean(x) -> Vec:
    return {k: Fraction(v) for k, v in x.items() if v}


def dense_to_vec(values: Sequence) -> Vec:
    return {i: Fraction(v) for i, v in enumerate(values) if v}


def vec_to_dense(x: Vec, n: int) -> List[Fraction]:
    out = [Fraction(0)] * n
    for k, v in x.items():
        out[k] = v
    return out


class Reducer:
    """Incremental column echelon form.

    Vectors are added one at a time; each added vector is reduced against the
    current pivots.  A vector that reduces to zero yields a linear relation
    among the added vectors (a kernel vector); otherwise it becomes a new
    pivot at its lowest nonzero index.  ``combo`` records every pivot as a
    combination of the added vectors, which is what makes coordinate queries
    possible.
    """

    def __init__(self):
        self.pivots: Dict[int, tuple] = {}  # row -> (vec, combo)
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Vec, combo: Optional[Vec] = None):
        """Return ``(residual, combo)`` with ``vec - residual = sum combo * added``.

        When ``combo`` is given it is updated in place with the negated
        reduction coefficients (used while adding).
        """
        v = dict(vec)
        if combo is None:
            combo = {}
        heap = [k for k in v if k in self.pivots]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = v.get(k)
            if not c:
                continue
            pvec, pcombo = self.pivots[k]
            for j, x in pvec.items():
                s = v.get(j, 0) - c * x
                if s:
                    if j not in v and j in self.pivots:
                        heapq.heappush(heap, j)
                    v[j] = s
                else:
                    v.pop(j, None)
            vec_axpy(combo, -c, pcombo)
        return v, combo

    def add(self, vec: Vec):
        """Add a vector; return a kernel relation (dict) if it was dependent, else None."""
        idx = self.count
        self.count += 1
        combo = {idx: Fraction(1)}
        v, combo = self.reduce(vec, combo)
        if not v:
            return combo
        row = min(v)
        inv = 1 / v[row]
        self.pivots[row] = ({k: x * inv for k, x in v.items()},
                            {k: x * inv for k, x in combo.items()})
        return None

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)[0]

    def coords(self, vec: Vec) -> Optional[Vec]:
        """Coefficients ``x`` with ``vec = sum_j x_j * added_j``, or None."""
        v, combo = self.reduce(vec, {})
        if v:
            return None
        return {k: -x for k, x in combo.items() if x}


@dataclass
class Solution:
    rank: int
    kernel: List[Vec]
    image: List[Vec]
    pivot_columns: List[int]
    _reducer: Reducer = field(repr=False)

    def coords(self, target: Vec) -> Optional[Vec]:
        """Some ``x`` with ``M x = target``, or None if target is not in the image."""
        return self._reducer.coords(target)

    def in_image(self, target: Vec) -> bool:
        return self._reducer.contains(target)


@dataclass
class LinSystem:
    """A sparse matrix stored by columns: ``columns[j]`` is ``M e_j``."""

    nrows: int
    columns: List[Vec]

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: Optional[int] = None) -> "LinSystem":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: List[Vec] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x:
                    cols[j][i] = Fraction(x)
        return cls(len(rows), cols)

    def apply(self, x: Vec) -> Vec:
        out: Vec = {}
        for j, c in x.items():
            vec_axpy(out, c, self.columns[j])
        return out

    def solve(self) -> Solution:
        red = Reducer()
        kernel, pivots = [], []
        for j, col in enumerate(self.columns):
            rel = red.add(col)
            if rel is None:
                pivots.append(j)
            else:
                kernel.append(rel)
        image = [self.columns[j] for j in pivots]
        return Solution(red.rank, kernel, image, pivots, red)


def solve(sys: LinSystem) -> Solution:
    return sys.solve()


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form of a dense matrix; returns ``(rows, pivot_columns)``."""
    m = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(vectors: Iterable[Vec]) -> int:
    red = Reducer()
    for v in vectors:
        red.add(v)
    return red.rank


def quotient_dim(n: int, vectors: Iterable[Vec]) -> int:
    """Dimension of ``Q^n / span(vectors)``."""
    return n - rank(vectors)


def complement(n: int, subspace: Iterable[Vec]) -> List[int]:
    """Standard basis indices spanning a complement of ``subspace`` in ``Q^n``.

    Greedy in index order, so the choice is deterministic.
    """
    red = Reducer()
    for v in subspace:
        red.add(v)
    chosen = []
    for i in range(n):
        if red.add({i: Fraction(1)}) is None:
            chosen.append(i)
    return chosen
