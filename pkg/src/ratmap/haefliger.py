"""Free models of pointed mapping spaces.

Given a finite cdga A (a model of the source X) and a minimal model ΛV of
the target Y, the algebra Λ((A⁺)^∨ ⊗ V) carries a unique differential D
making

    φ : ΛV → A ⊗ Λ((A⁺)^∨ ⊗ V),   φ(v) = Σ_s a_s ⊗ (a^s ⊗ v)

a cdga morphism.  We never derive the signs of D by hand: D(a^s ⊗ v) is
read off from the a_s-component of the identity (d_A ⊗ 1 ± 1 ⊗ D)φ(v) = φ(dv).
Generators of degree ≤ 0, and the D-images of the degree-0 ones, are then
set to zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Dict, List, Optional, Tuple

from . import errors
from .cdga import BasisSplit, FiniteAlgebra, FreeModel, split_basis
from .gca import Elem, FreeAlgebra, GenSym, linear_combination

KIND_ORDER = {"h": 0, "e": 1, "b": 2}

# an element of A ⊗ Λ(B⊗V): A-basis index -> coefficient in Λ(B⊗V)
TensorElem = Dict[int, Elem]


@dataclass(frozen=True)
class DualGen:
    label: str
    kind: str
    degree: int
    index: int  # position of the dual basis element in the split algebra


@dataclass(frozen=True)
class ZGen:
    dual: DualGen
    v: GenSym
    name: str

    @property
    def degree(self) -> int:
        return self.v.degree + self.dual.degree

    @property
    def kind(self) -> str:
        return self.dual.kind


def zgen_name(dual: DualGen, v: GenSym) -> str:
    return f"{dual.kind}_{dual.label}__{v.name}"


def dualize(alg: FiniteAlgebra, split: Optional[BasisSplit] = None) -> List[DualGen]:
    """Dual basis of A⁺ with respect to the split basis; degrees negated."""
    if split is None:
        split = split_basis(alg)
    sa = split.algebra
    return [DualGen(sa.labels[i], split.kinds[i], -sa.degrees[i], i) for i in sa.positive]


@dataclass
class MapModel:
    """A degree-bounded free model (ΛZ, D) of a pointed mapping space.

    ``model`` is the free cdga on the surviving generators; its differential
    is exact on generators of degree ≤ bound, so cohomology through
    ``bound`` is exact.  ``full_ring``/``full_diff`` keep the untruncated
    Λ(B⊗V) with its solved differential.
    """

    zgens: List[ZGen]
    model: FreeModel
    bound: int
    provenance: Tuple[str, str]
    split: Optional[BasisSplit] = None
    y: Optional[FreeModel] = None
    full_ring: Optional[FreeAlgebra] = field(default=None, repr=False)
    full_diff: Dict[int, Elem] = field(default_factory=dict, repr=False)
    full_zgens: List[ZGen] = field(default_factory=list, repr=False)

    @property
    def ring(self) -> FreeAlgebra:
        return self.model.ring

    @property
    def diff(self) -> Dict[int, Elem]:
        return self.model.diff

    def degrees(self) -> List[int]:
        return [z.degree for z in self.zgens]

    def zgen(self, name: str) -> ZGen:
        return self.zgens[self.ring.index[name]]

    def D(self, name: str) -> Elem:
        return self.model.dgen(name)

    def is_zero_differential(self, through: Optional[int] = None) -> bool:
        through = self.bound if through is None else through
        return all(not u for i, u in self.diff.items() if self.zgens[i].degree <= through)


class _Tensor:
    """Arithmetic in A ⊗ Λ(B⊗V) with the Koszul rule (a⊗w)(a'⊗w') = ±aa'⊗ww'."""

    def __init__(self, alg: FiniteAlgebra, ring: FreeAlgebra):
        self.alg = alg
        self.ring = ring

    def mul(self, x: TensorElem, y: TensorElem) -> TensorElem:
        out: Dict[int, Dict] = {}
        alg, ring = self.alg, self.ring
        for s, w in x.items():
            odd_part = Elem(ring, {m: c for m, c in w.terms.items() if ring.mono_degree(m) % 2})
            for t, w2 in y.items():
                p = alg.basis_product(s, t)
                if not p:
                    continue
                left = w - odd_part.scale(2) if alg.degrees[t] % 2 else w
                term = left * w2
                if not term:
                    continue
                for k, c in p.items():
                    acc = out.setdefault(k, {})
                    for m, x_ in term.terms.items():
                        v = acc.get(m, 0) + c * x_
                        if v:
                            acc[m] = v
                        else:
                            acc.pop(m, None)
        return {k: Elem(ring, terms) for k, terms in out.items() if terms}

    def add_into(self, acc: TensorElem, x: TensorElem, c=1) -> None:
        for k, w in x.items():
            acc[k] = acc[k] + w.scale(c) if k in acc else w.scale(c)
            if not acc[k]:
                del acc[k]

    def unit(self) -> TensorElem:
        return {0: self.ring.one()}


class HaefligerBuilder:
    """Solves D on the untruncated Λ(B⊗V) for a split finite model and a free model."""

    def __init__(self, alg: FiniteAlgebra, y: FreeModel, split: Optional[BasisSplit] = None):
        self.source = alg
        self.y = y
        self.split = split or split_basis(alg)
        self.alg = self.split.algebra
        self.duals = dualize(alg, self.split)
        order = sorted(self.duals, key=lambda g: (KIND_ORDER[g.kind], g.index))
        zgens = [ZGen(dg, v, zgen_name(dg, v)) for v in y.gens for dg in order]
        self.zgens = zgens
        self.ring = FreeAlgebra([(z.name, z.degree) for z in zgens])
        self.at: Dict[Tuple[int, int], int] = {
            (z.dual.index, z.v.ordinal): k for k, z in enumerate(zgens)}
        self.tensor = _Tensor(self.alg, self.ring)
        self._phi_mono: Dict[tuple, TensorElem] = {(): self.tensor.unit()}
        # dcoef[s] = [(t, c)]: d_A(a_t) has coefficient c on a_s
        self.dcoef: Dict[int, List[Tuple[int, Fraction]]] = {}
        for t, vec in self.alg.diff.items():
            for s, c in vec.items():
                self.dcoef.setdefault(s, []).append((t, c))
        self._D: Dict[int, Elem] = {}

    # -- φ -------------------------------------------------------------------
    def phi_gen(self, ordinal: int) -> TensorElem:
        out = {}
        for s in self.alg.positive:
            out[s] = self.ring.gen(self.at[(s, ordinal)])
        return out

    def phi_monomial(self, mono) -> TensorElem:
        hit = self._phi_mono.get(mono)
        if hit is not None:
            return hit
        i, e = mono[-1]
        rest = mono[:-1] if e == 1 else mono[:-1] + ((i, e - 1),)
        out = self.tensor.mul(self.phi_monomial(rest), self.phi_gen(i))
        self._phi_mono[mono] = out
        return out

    def phi(self, u: Elem) -> TensorElem:
        out: TensorElem = {}
        for m, c in u.terms.items():
            self.tensor.add_into(out, self.phi_monomial(m), c)
        return out

    # -- D --------------------------------------------------------------------
    def solve_D(self, s: int, ordinal: int) -> Elem:
        key = self.at[(s, ordinal)]
        if key in self._D:
            return self._D[key]
        dv = self.y.dgen(ordinal)
        late = [j for j in dv.support() if j >= ordinal]
        if late:
            raise errors.UnsolvedPredecessor(
                f"d({self.y.gens[ordinal].name}) involves {self.y.gens[late[0]].name}, "
                "which is not earlier in the well-order")
        phidv = self._phi_dv(ordinal)
        pairs = [(1, phidv[s])] if s in phidv else []
        for t, c in self.dcoef.get(s, []):
            pairs.append((-c, self.ring.gen(self.at[(t, ordinal)])))
        val = linear_combination(self.ring, pairs)
        if self.alg.degrees[s] % 2:
            val = -val
        self._D[key] = val
        return val

    def _phi_dv(self, ordinal: int) -> TensorElem:
        cache = self.__dict__.setdefault("_phidv", {})
        if ordinal not in cache:
            phidv = self.phi(self.y.dgen(ordinal))
            if 0 in phidv:
                raise errors.ModelError("d(v) has a constant term")
            cache[ordinal] = phidv
        return cache[ordinal]

    def full_diff(self) -> Dict[int, Elem]:
        out = {}
        for z in self.zgens:
            k = self.at[(z.dual.index, z.v.ordinal)]
            val = self.solve_D(z.dual.index, z.v.ordinal)
            if val:
                out[k] = val
        return out

    def closed_form(self, s: int, ordinal: int) -> Elem:
        """Nonlinear part of D(a^s⊗v) by direct expansion over tuples of basis elements.

        Independent of the φ-product machinery: each word v_{i1}⋯v_{ir} of
        d(v) is expanded as Σ ⟨a^s; a_{s1}⋯a_{sr}⟩ ± (a^{s1}⊗v_{i1})⋯(a^{sr}⊗v_{ir}),
        the sign collected by moving every a_{sj} to the left across the
        preceding dual factors.
        """
        alg, ring = self.alg, self.ring
        pos = alg.positive
        pairs = []
        for mono, c in self.y.dgen(ordinal).terms.items():
            word = [i for i, e in mono for _ in range(e)]
            for choice in cartesian(pos, repeat=len(word)):
                prod = {0: Fraction(1)}
                for t in choice:
                    prod = alg.mul(prod, {t: Fraction(1)})
                coeff = prod.get(s)
                if not coeff:
                    continue
                sign = 0
                for j, t in enumerate(choice):
                    for k in range(j):
                        wdeg = self.y.gens[word[k]].degree - alg.degrees[choice[k]]
                        sign += alg.degrees[t] * wdeg
                w = ring.one()
                for t, i in zip(choice, word):
                    w = w * ring.gen(self.at[(t, i)])
                pairs.append(((-1 if sign % 2 else 1) * c * coeff, w))
        val = linear_combination(ring, pairs)
        return -val if alg.degrees[s] % 2 else val


def phi(builder: HaefligerBuilder, v: GenSym) -> TensorElem:
    return builder.phi_gen(v.ordinal)


def solve_D(builder: HaefligerBuilder, zg: ZGen) -> Elem:
    return builder.solve_D(zg.dual.index, zg.v.ordinal)


def survives(zg: ZGen) -> bool:
    if zg.kind == "e":
        return zg.degree >= 2
    return zg.degree >= 1


def build_map_model(alg: FiniteAlgebra, y: FreeModel, N: int,
                    split: Optional[BasisSplit] = None) -> MapModel:
    """Truncated mapping-space model, exact through degree ``N``."""
    if N < 0:
        raise errors.InvalidParameter("degree bound must be >= 0")
    hb = HaefligerBuilder(alg, y, split)
    full = hb.full_diff()
    keep = [k for k, z in enumerate(hb.zgens) if survives(z) and z.degree <= N + 1]
    zgens = [hb.zgens[k] for k in keep]
    ring = FreeAlgebra([(z.name, z.degree) for z in zgens])
    newpos = {k: i for i, k in enumerate(keep)}
    diff = {}
    for k in keep:
        val = full.get(k)
        if val:
            proj = project(val, newpos, ring)
            if proj:
                diff[newpos[k]] = proj
    model = FreeModel(f"map({alg.name},{y.name})", ring, diff)
    return MapModel(zgens, model, N, (alg.name, y.name), hb.split, y, hb.ring, full, hb.zgens)


def project(u: Elem, newpos: Dict[int, int], ring: FreeAlgebra) -> Elem:
    """Send generators outside ``newpos`` to zero; order-preserving relabel of the rest."""
    terms = {}
    for m, c in u.terms.items():
        try:
            terms[tuple((newpos[i], e) for i, e in m)] = c
        except KeyError:
            continue
    return Elem(ring, terms)


def verify_morphism(alg: FiniteAlgebra, y: FreeModel, mm: MapModel) -> bool:
    """Check φ∘d = D_⊗∘φ on every generator of V (untruncated) and that the
    truncated D is the projection of the untruncated one."""
    if mm.full_ring is None:
        raise errors.PreconditionFailed("map model carries no untruncated data")
    hb = HaefligerBuilder(alg, y, mm.split)
    if hb.ring != mm.full_ring:
        return False
    D = mm.full_diff
    tensor = hb.tensor
    sa = hb.alg
    for v in y.gens:
        lhs: TensorElem = {}
        for s in sa.positive:
            w = hb.ring.gen(hb.at[(s, v.ordinal)])
            dvec = sa.diff.get(s, {})
            for t, c in dvec.items():
                tensor.add_into(lhs, {t: w}, c)
            dw = D.get(hb.at[(s, v.ordinal)])
            if dw:
                tensor.add_into(lhs, {s: dw}, -1 if sa.degrees[s] % 2 else 1)
        rhs = hb.phi(y.dgen(v.ordinal))
        if {k: w for k, w in lhs.items() if w} != {k: w for k, w in rhs.items() if w}:
            return False
    keep = {z.name: i for i, z in enumerate(mm.zgens)}
    newpos = {}
    for k, z in enumerate(mm.full_zgens):
        if z.name in keep:
            newpos[k] = keep[z.name]
    for k, i in newpos.items():
        expected = project(D.get(k, mm.full_ring.zero()), newpos, mm.ring)
        if expected != mm.diff.get(i, mm.ring.zero()):
            return False
    return True


def square_zero_through(mm: MapModel, N: Optional[int] = None) -> bool:
    """D∘D = 0 on every generator of degree ≤ N."""
    N = mm.bound if N is None else N
    d = mm.model.d
    for i, u in mm.diff.items():
        if mm.zgens[i].degree <= N and d(u):
            return False
    return True
