"""Degreewise cohomology of free models and finite algebras.

The differential is homogeneous, so every computation splits by degree: for
each n we materialize the basis in degrees n and n+1, reduce the matrix of d
and keep cocycle representatives that are independent modulo boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .cdga import FiniteAlgebra, FreeModel
from .gca import Elem, hilbert_coefficients
from .linalg import LinSystem, Reducer, Vec


class _FreeAdapter:
    def __init__(self, model: FreeModel):
        self.model = model
        self.ring = model.ring
        self._bases: Dict[int, list] = {}
        self._index: Dict[int, dict] = {}

    def basis(self, n: int) -> list:
        if n not in self._bases:
            b = self.ring.basis(n) if n >= 0 else []
            self._bases[n] = b
            self._index[n] = {m: i for i, m in enumerate(b)}
        return self._bases[n]

    def to_vec(self, u: Elem, n: int) -> Vec:
        self.basis(n)
        idx = self._index[n]
        return {idx[m]: c for m, c in u.terms.items()}

    def to_elem(self, v: Vec, n: int) -> Elem:
        b = self.basis(n)
        return Elem(self.ring, {b[i]: c for i, c in v.items()})

    def d_columns(self, n: int) -> List[Vec]:
        self.basis(n + 1)
        d = self.model.d
        return [self.to_vec(d.on_monomial(m), n + 1) for m in self.basis(n)]

    def product(self, u: Vec, a: int, v: Vec, b: int) -> Vec:
        return self.to_vec(self.to_elem(u, a) * self.to_elem(v, b), a + b)

    def label(self, v: Vec, n: int) -> str:
        return str(self.to_elem(v, n))


class _FiniteAdapter:
    def __init__(self, alg: FiniteAlgebra):
        self.alg = alg

    def basis(self, n: int) -> list:
        return self.alg.in_degree(n)

    def _local(self, n):
        return {g: i for i, g in enumerate(self.alg.in_degree(n))}

    def to_global(self, v: Vec, n: int) -> Vec:
        b = self.alg.in_degree(n)
        return {b[i]: c for i, c in v.items()}

    def to_local(self, v: Vec, n: int) -> Vec:
        loc = self._local(n)
        return {loc[i]: c for i, c in v.items()}

    def d_columns(self, n: int) -> List[Vec]:
        return [self.to_local(self.alg.d({i: Fraction(1)}), n + 1) for i in self.alg.in_degree(n)]

    def product(self, u: Vec, a: int, v: Vec, b: int) -> Vec:
        return self.to_local(self.alg.mul(self.to_global(u, a), self.to_global(v, b)), a + b)

    def label(self, v: Vec, n: int) -> str:
        return self.alg.vec_str(self.to_global(v, n))


@dataclass
class CohomReport:
    """Betti numbers, representatives and decomposable dimensions through ``max_degree``.

    Vectors are in per-degree coordinates (monomial basis for free models,
    basis elements of that degree for finite algebras).
    """

    max_degree: int
    betti: List[int]
    reps: List[List[Vec]]
    decomposable: List[int]
    _adapter: object = field(repr=False)
    _class_red: List[Reducer] = field(repr=False)
    _slots: List[Dict[int, int]] = field(repr=False)  # reducer add-index -> rep position
    boundaries: List[List[Vec]] = field(repr=False, default_factory=list)

    @property
    def indecomposable(self) -> List[int]:
        return [0] + [self.betti[n] - self.decomposable[n] for n in range(1, self.max_degree + 1)]

    def class_coords(self, n: int, v: Vec) -> Optional[List[Fraction]]:
        """Coordinates of the class of the cocycle ``v`` in the rep basis (None if not a cocycle mod boundaries)."""
        c = self._class_red[n].coords(v)
        if c is None:
            return None
        slots = self._slots[n]
        out = [Fraction(0)] * self.betti[n]
        for j, x in c.items():
            if j in slots:
                out[slots[j]] = x
        return out

    def is_zero_class(self, n: int, v: Vec) -> bool:
        c = self.class_coords(n, v)
        return c is not None and not any(c)

    def rep_labels(self, n: int) -> List[str]:
        return [self._adapter.label(v, n) for v in self.reps[n]]

    def product(self, u: Vec, a: int, v: Vec, b: int) -> Vec:
        return self._adapter.product(u, a, v, b)

    def betti_dict(self) -> Dict[int, int]:
        return {n: b for n, b in enumerate(self.betti) if b}


def _adapter_for(alg):
    if isinstance(alg, FreeModel):
        return _FreeAdapter(alg)
    if isinstance(alg, FiniteAlgebra):
        return _FiniteAdapter(alg)
    model = getattr(alg, "model", None)
    if isinstance(model, FreeModel):
        return _FreeAdapter(model)
    raise TypeError(f"cannot compute cohomology of {type(alg).__name__}")


def cohomology(alg, max_degree: Optional[int] = None, products: bool = True) -> CohomReport:
    """Cohomology through ``max_degree`` (required for free models)."""
    ad = _adapter_for(alg)
    if max_degree is None:
        if isinstance(ad, _FiniteAdapter):
            max_degree = alg.top_degree
        else:
            raise ValueError("a degree bound is required for free models")
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    betti, reps, class_red, slots, bounds = [], [], [], [], []
    prev_image: List[Vec] = []
    for n in range(max_degree + 1):
        sol = LinSystem(len(ad.basis(n + 1)), ad.d_columns(n)).solve()
        red = Reducer()
        for v in prev_image:
            red.add(v)
        bounds.append(prev_image)
        hs, slot = [], {}
        for z in sol.kernel:
            idx = red.count
            if red.add(z) is None:
                slot[idx] = len(hs)
                hs.append(z)
        slots.append(slot)
        betti.append(len(hs))
        reps.append(hs)
        class_red.append(red)
        prev_image = sol.image
    rep = CohomReport(max_degree, betti, reps, [0] * (max_degree + 1), ad, class_red, slots, bounds)
    if products:
        rep.decomposable = _decomposables(rep)
    return rep


def _decomposables(rep: CohomReport) -> List[int]:
    out = [0] * (rep.max_degree + 1)
    for n in range(2, rep.max_degree + 1):
        if not rep.betti[n]:
            continue
        # boundaries first, then products; the rank increase counts decomposable classes
        span = Reducer()
        for z in rep.boundaries[n]:
            span.add(z)
        start = span.rank
        for a in range(1, n // 2 + 1):
            b = n - a
            for u in rep.reps[a]:
                for v in rep.reps[b]:
                    w = rep.product(u, a, v, b)
                    if w:
                        span.add(w)
        out[n] = span.rank - start
    return out


@dataclass
class FreenessVerdict:
    free: bool
    max_degree: int
    failure_degree: Optional[int]
    generator_degrees: List[int]
    expected: List[int]
    betti: List[int]

    @property
    def label(self) -> str:
        return "FREE" if self.free else "NOT_FREE"


def freeness_check(report: CohomReport, max_degree: Optional[int] = None) -> FreenessVerdict:
    """Compare Betti numbers with the free algebra on the indecomposables."""
    N = report.max_degree if max_degree is None else max_degree
    if N > report.max_degree:
        raise ValueError("report does not reach the requested degree")
    gens = []
    ind = report.indecomposable
    for n in range(1, N + 1):
        gens.extend([n] * ind[n])
    expected = hilbert_coefficients(gens, N)
    failure = None
    for n in range(N + 1):
        if expected[n] != report.betti[n]:
            failure = n
            break
    return FreenessVerdict(failure is None, N, failure, gens, expected, report.betti[:N + 1])


def cup_length(alg: FiniteAlgebra, report: Optional[CohomReport] = None) -> int:
    """Maximal length of a nonzero product of positive-degree classes (0 if H⁺ = 0)."""
    if report is None:
        report = cohomology(alg, products=False)
    top = report.max_degree
    reps = {n: report.reps[n] for n in range(1, top + 1) if report.reps[n]}
    if not reps:
        return 0
    layer = dict(reps)
    length = 1
    while True:
        nxt: Dict[int, List[Vec]] = {}
        reds: Dict[int, Reducer] = {}
        for a, us in layer.items():
            for b, hs in reps.items():
                n = a + b
                if n > top:
                    continue
                for u in us:
                    for h in hs:
                        w = report.product(u, a, h, b)
                        if not w or report.is_zero_class(n, w):
                            continue
                        red = reds.get(n)
                        if red is None:
                            red = reds[n] = Reducer()
                            for z in report.boundaries[n]:
                                red.add(z)
                        if red.add(w) is None:
                            nxt.setdefault(n, []).append(w)
        if not nxt:
            return length
        layer = nxt
        length += 1
