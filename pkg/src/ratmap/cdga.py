"""Validated cdga values and their numerical invariants.

Two kinds of algebra appear throughout: `FreeModel`, a free graded
commutative algebra with a triangular differential (a Sullivan model), and
`FiniteAlgebra`, a finite-dimensional cdga given by structure constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import errors
from .gca import Derivation, Elem, FreeAlgebra
from .linalg import Reducer, Vec, vec_axpy

INFINITY = math.inf


# ---------------------------------------------------------------------------
# free models
# ---------------------------------------------------------------------------

class FreeModel:
    """A free cdga ``(ΛV, d)`` on well-ordered generators.

    Build instances through `validate_free`; the constructor trusts its input.
    """

    def __init__(self, name: str, ring: FreeAlgebra, diff: Dict[int, Elem]):
        self.name = name
        self.ring = ring
        self.diff = {i: u for i, u in diff.items() if u}
        self.d = Derivation(ring, self.diff)

    @property
    def gens(self):
        return self.ring.gens

    @cached_property
    def minimal(self) -> bool:
        return all(1 not in u.word_lengths() for u in self.diff.values())

    def dgen(self, name) -> Elem:
        i = self.ring.index[name] if isinstance(name, str) else name
        return self.diff.get(i, self.ring.zero())

    def __repr__(self):
        parts = [f"{g.name}:{g.degree}" for g in self.gens]
        ds = [f"d{self.gens[i].name} = {u}" for i, u in sorted(self.diff.items())]
        return f"FreeModel({self.name}; {', '.join(parts)}; {'; '.join(ds)})"


def validate_free(gens: Sequence[Tuple[str, int]], diff: Mapping, name: str = "Y",
                  ring: Optional[FreeAlgebra] = None,
                  square_zero_through: Optional[int] = None) -> FreeModel:
    """Check the free-model invariants and return a `FreeModel`.

    ``diff`` maps generator names (or ordinals) to elements of ``ring``.
    ``square_zero_through`` limits the d∘d check to generators of degree at
    most that bound (used for degree-truncated models).
    """
    if ring is None:
        ring = FreeAlgebra(gens)
    for g in ring.gens:
        if g.degree < 1:
            raise errors.NonPositiveDegreeGenerator(
                f"generator {g.name} has degree {g.degree}; free models need degrees >= 1")
    values: Dict[int, Elem] = {}
    for key, u in diff.items():
        i = ring.index[key] if isinstance(key, str) else key
        if not isinstance(u, Elem):
            raise TypeError(f"differential of {key} must be an Elem")
        ring.check_same(u.ring)
        values[i] = u
    for i, u in values.items():
        g = ring.gens[i]
        for deg in u.degrees():
            if deg != g.degree + 1:
                raise errors.DegreeMismatch(
                    f"d({g.name}) has a term of degree {deg}, expected {g.degree + 1}")
        bad = [j for j in u.support() if j >= i]
        if bad:
            raise errors.NotTriangular(
                f"d({g.name}) involves {ring.gens[bad[0]].name}, which is not earlier in the order")
    model = FreeModel(name, ring, values)
    for i, u in model.diff.items():
        g = ring.gens[i]
        if square_zero_through is not None and g.degree > square_zero_through:
            continue
        dd = model.d(u)
        if dd:
            raise errors.NotSquareZero(f"d(d({g.name})) = {dd} != 0")
    return model


def differential_length(m: FreeModel):
    """Least word length occurring in d(v) over all generators; INFINITY if d = 0."""
    if not m.minimal:
        raise errors.NotMinimal(f"{m.name} has a nonzero linear part in its differential")
    lengths = [w for u in m.diff.values() for w in u.word_lengths()]
    return min(lengths) if lengths else INFINITY


def connectivity(y: FreeModel) -> int:
    if not y.gens:
        return INFINITY
    return min(g.degree for g in y.gens) - 1


# ---------------------------------------------------------------------------
# finite-dimensional algebras
# ---------------------------------------------------------------------------

class FiniteAlgebra:
    """A finite-dimensional cdga; the unit is basis element 0.

    ``mul`` maps index pairs to product vectors (both orders stored, zero
    products omitted) and ``diff`` maps indices to vectors.
    """

    def __init__(self, name: str, labels: Sequence[str], degrees: Sequence[int],
                 mul: Dict[Tuple[int, int], Vec], diff: Dict[int, Vec]):
        self.name = name
        self.labels = tuple(labels)
        self.degrees = tuple(degrees)
        self.mul_table = {k: v for k, v in mul.items() if v}
        self.diff = {k: v for k, v in diff.items() if v}
        self.index = {l: i for i, l in enumerate(self.labels)}

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"FiniteAlgebra({self.name}; {', '.join(f'{l}:{d}' for l, d in zip(self.labels, self.degrees))})"

    @property
    def unit_label(self) -> str:
        return self.labels[0]

    @cached_property
    def top_degree(self) -> int:
        return max(self.degrees)

    @cached_property
    def by_degree(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out

    def in_degree(self, n: int) -> List[int]:
        return self.by_degree.get(n, [])

    @property
    def positive(self) -> List[int]:
        return [i for i, d in enumerate(self.degrees) if d > 0]

    def basis_product(self, i: int, j: int) -> Vec:
        if i == 0:
            return {j: Fraction(1)}
        if j == 0:
            return {i: Fraction(1)}
        return self.mul_table.get((i, j), {})

    def mul(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                p = self.basis_product(i, j)
                if p:
                    vec_axpy(out, a * b, p)
        return out

    def d(self, u: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            dv = self.diff.get(i)
            if dv:
                vec_axpy(out, a, dv)
        return out

    def vec_degree(self, u: Vec) -> Optional[int]:
        ds = {self.degrees[i] for i in u}
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError("inhomogeneous vector")
        return ds.pop()

    def vec_str(self, u: Vec) -> str:
        if not u:
            return "0"
        parts = []
        for i in sorted(u):
            c = u[i]
            lab = self.labels[i]
            parts.append(lab if c == 1 else (f"-{lab}" if c == -1 else f"{c}*{lab}"))
        return " + ".join(parts).replace("+ -", "- ")


def _as_vec(alg_index: Dict[str, int], value, where: str) -> Vec:
    if isinstance(value, dict):
        items = value.items()
    elif isinstance(value, str):
        items = [(value, 1)]
    elif value in (0, None):
        items = []
    else:
        items = value
    out: Vec = {}
    for lab, c in items:
        if lab not in alg_index:
            raise errors.UnknownIdentifier(f"unknown basis element {lab!r} in {where}")
        vec_axpy(out, Fraction(c), {alg_index[lab]: Fraction(1)})
    return out


def validate_finite(basis: Sequence[Tuple[str, int]], mul_table: Mapping = (),
                    diff: Mapping = (), unit: Optional[str] = None,
                    name: str = "A") -> FiniteAlgebra:
    """Check the finite-algebra invariants and return a `FiniteAlgebra`.

    ``mul_table`` maps label pairs to vectors (``{label: coeff}``); a pair
    given in one order only is completed by graded commutativity, and absent
    pairs are zero.  ``diff`` maps labels to vectors.  Without an explicit
    ``unit`` a unit labelled ``"1"`` is added.
    """
    basis = [(str(l), int(d)) for l, d in basis]
    if unit is None:
        unit = "1"
        if any(l == unit for l, _ in basis):
            raise errors.NoUnit("a basis element is named '1' but no unit was declared")
        basis = [(unit, 0)] + basis
    else:
        if unit not in {l for l, _ in basis}:
            basis = [(unit, 0)] + basis
    degrees = dict(basis)
    if len(degrees) != len(basis):
        raise errors.ModelError("duplicate basis label")
    if degrees[unit] != 0:
        raise errors.NoUnit(f"unit {unit} must have degree 0")
    for l, d in basis:
        if d < 0:
            raise errors.DegreeMismatch(f"basis element {l} has negative degree {d}")
        if d == 0 and l != unit:
            raise errors.NoUnit(f"degree-0 part must be spanned by the unit; found {l}")
    ordered = [(unit, 0)] + [(l, d) for l, d in basis if l != unit]
    labels = [l for l, _ in ordered]
    degs = [d for _, d in ordered]
    index = {l: i for i, l in enumerate(labels)}

    def sgn(i, j):
        return -1 if (degs[i] * degs[j]) % 2 else 1

    table: Dict[Tuple[int, int], Vec] = {}
    given = {}
    for key, value in dict(mul_table).items():
        a, b = key
        for lab in (a, b):
            if lab not in index:
                raise errors.UnknownIdentifier(f"unknown basis element {lab!r} in product table")
        i, j = index[a], index[b]
        vec = _as_vec(index, value, f"{a}*{b}")
        for k in vec:
            if degs[k] != degs[i] + degs[j]:
                raise errors.DegreeMismatch(
                    f"{a}*{b} has a term {labels[k]} of degree {degs[k]}, expected {degs[i] + degs[j]}")
        if i == 0 or j == 0:
            other = j if i == 0 else i
            if vec != {other: 1}:
                raise errors.NoUnit(f"product {a}*{b} contradicts the unit")
            continue
        given[(i, j)] = vec
    for (i, j), vec in given.items():
        table[(i, j)] = vec
        swapped = {k: sgn(i, j) * c for k, c in vec.items()}
        if (j, i) in given:
            if given[(j, i)] != swapped:
                raise errors.NotGradedCommutative(
                    f"{labels[i]}*{labels[j]} != (-1)^({degs[i]}*{degs[j]}) {labels[j]}*{labels[i]}")
        else:
            table[(j, i)] = swapped
    for i in range(1, len(labels)):
        if degs[i] % 2 and (i, i) in table:
            # odd square must vanish in characteristic 0
            raise errors.NotGradedCommutative(f"{labels[i]}^2 must be 0 for odd degree")

    dvals: Dict[int, Vec] = {}
    for lab, value in dict(diff).items():
        if lab not in index:
            raise errors.UnknownIdentifier(f"unknown basis element {lab!r} in differential")
        i = index[lab]
        vec = _as_vec(index, value, f"d {lab}")
        for k in vec:
            if degs[k] != degs[i] + 1:
                raise errors.DegreeMismatch(
                    f"d({lab}) has a term {labels[k]} of degree {degs[k]}, expected {degs[i] + 1}")
        if vec:
            dvals[i] = vec
    if 0 in dvals:
        raise errors.LeibnizFailure("the unit must be a cocycle")

    alg = FiniteAlgebra(name, labels, degs, table, dvals)
    _check_finite(alg)
    return alg


def _check_finite(alg: FiniteAlgebra) -> None:
    n = len(alg)
    degs = alg.degrees
    unit_vecs = [{i: Fraction(1)} for i in range(n)]
    # associativity: a triple can only fail if one of its adjacent pairs multiplies to nonzero
    nonzero = [(i, j) for (i, j) in alg.mul_table]
    checked = set()
    for (i, j) in nonzero:
        for k in range(1, n):
            for trip in ((i, j, k), (k, i, j)):
                if trip in checked:
                    continue
                checked.add(trip)
                a, b, c = (unit_vecs[t] for t in trip)
                if alg.mul(alg.mul(a, b), c) != alg.mul(a, alg.mul(b, c)):
                    raise errors.NotAssociative(
                        "({0}*{1})*{2} != {0}*({1}*{2})".format(*(alg.labels[t] for t in trip)))
    for i in range(n):
        dd = alg.d(alg.diff.get(i, {}))
        if dd:
            raise errors.NotSquareZero(f"d(d({alg.labels[i]})) != 0")
    for i in range(1, n):
        for j in range(1, n):
            if degs[i] + degs[j] > alg.top_degree + 1:
                continue
            a, b = unit_vecs[i], unit_vecs[j]
            lhs = alg.d(alg.mul(a, b))
            rhs = alg.mul(alg.d(a), b)
            vec_axpy(rhs, -1 if degs[i] % 2 else 1, alg.mul(a, alg.d(b)))
            if lhs != rhs:
                raise errors.LeibnizFailure(
                    f"Leibniz rule fails on {alg.labels[i]}, {alg.labels[j]}")


def nilpotency(alg: FiniteAlgebra) -> int:
    """Largest p with a nonzero p-fold product of positive-degree elements."""
    p = 0
    layer = power_ideal_layers(alg)
    for k, sub in enumerate(layer, start=1):
        if any(sub.values()):
            p = k
    return p


def power_ideal_layers(alg: FiniteAlgebra) -> List[Dict[int, List[Vec]]]:
    """Bases of (A⁺)^1, (A⁺)^2, ... per degree, stopping before the first zero power."""
    current: Dict[int, List[Vec]] = {}
    for i in alg.positive:
        current.setdefault(alg.degrees[i], []).append({i: Fraction(1)})
    layers = []
    gens = [(alg.degrees[i], {i: Fraction(1)}) for i in alg.positive]
    while any(current.values()):
        layers.append(current)
        nxt_red: Dict[int, Reducer] = {}
        nxt: Dict[int, List[Vec]] = {}
        for deg, vecs in current.items():
            for v in vecs:
                for gdeg, g in gens:
                    if deg + gdeg > alg.top_degree:
                        continue
                    w = alg.mul(v, g)
                    if not w:
                        continue
                    red = nxt_red.setdefault(deg + gdeg, Reducer())
                    if red.add(w) is None:
                        nxt.setdefault(deg + gdeg, []).append(w)
        current = nxt
    return layers


def power_ideal(alg: FiniteAlgebra, k: int) -> Dict[int, List[Vec]]:
    """Basis of (A⁺)^k per degree (empty when k exceeds the nilpotency)."""
    if k < 1:
        raise errors.InvalidParameter("power ideal exponent must be >= 1")
    layers = power_ideal_layers(alg)
    return layers[k - 1] if k <= len(layers) else {}


def dimension(alg: FiniteAlgebra) -> int:
    return alg.top_degree


def conn_and_dim(y: FreeModel, x: FiniteAlgebra) -> Tuple[int, int]:
    return connectivity(y), dimension(x)


# ---------------------------------------------------------------------------
# basis split
# ---------------------------------------------------------------------------

@dataclass
class BasisSplit:
    """A basis of A⁺ made of cocycle representatives h, a complement e of the
    cocycles, and b = d(e).  ``algebra`` is the same cdga rewritten in that
    basis, with ``kinds[i]`` giving the kind of its basis element i."""

    h: List[Vec]
    e: List[Vec]
    b: List[Vec]
    algebra: FiniteAlgebra
    kinds: Dict[int, str]
    partner: Dict[int, int] = field(default_factory=dict)  # b index -> e index in `algebra`

    def labels(self, kind: str) -> List[str]:
        return [self.algebra.labels[i] for i, k in sorted(self.kinds.items()) if k == kind]


def split_basis(alg: FiniteAlgebra) -> BasisSplit:
    hs, es, bs = {}, {}, {}
    for n in sorted(d for d in alg.by_degree if d > 0):
        idx = alg.in_degree(n)
        cols = [alg.d({i: Fraction(1)}) for i in idx]
        red = Reducer()
        cocycles = []
        kred = Reducer()
        for j, c in enumerate(cols):
            rel = kred.add(c)
            if rel is not None:
                cocycles.append({idx[k]: x for k, x in rel.items()})
        for z in cocycles:
            red.add(z)
        es[n] = []
        for i in idx:
            if red.add({i: Fraction(1)}) is None:
                es[n].append({i: Fraction(1)})
        bs.setdefault(n + 1, [])
        for e in es[n]:
            bs[n + 1].append(alg.d(e))
        hred = Reducer()
        for b in bs.get(n, []):
            hred.add(b)
        hs[n] = [z for z in cocycles if hred.add(z) is None]

    taken = set(alg.labels)
    new_labels, new_degs, kinds, vecs = [alg.labels[0]], [0], {}, [{0: Fraction(1)}]
    partner = {}
    e_pos = {}
    counter: Dict[Tuple[str, int], int] = {}

    def label_for(kind, n, v):
        if len(v) == 1:
            (i, c), = v.items()
            if c == 1:
                return alg.labels[i]
        k = counter.get((kind, n), 0)
        while True:
            lab = f"{kind}{n}_{k}"
            k += 1
            if lab not in taken:
                break
        counter[(kind, n)] = k
        taken.add(lab)
        return lab

    for n in sorted(d for d in alg.by_degree if d > 0):
        for kind, group in (("h", hs.get(n, [])), ("e", es.get(n, [])), ("b", bs.get(n, []))):
            for pos, v in enumerate(group):
                new_labels.append(label_for(kind, n, v))
                new_degs.append(n)
                kinds[len(vecs)] = kind
                if kind == "e":
                    e_pos[(n, pos)] = len(vecs)
                if kind == "b":
                    partner[len(vecs)] = e_pos[(n - 1, pos)]
                vecs.append(v)
    if len(vecs) != len(alg):
        raise AssertionError("basis split does not have the right size")
    rebased = rebase(alg, vecs, new_labels, new_degs)
    return BasisSplit(
        h=[v for n in sorted(hs) for v in hs[n]],
        e=[v for n in sorted(es) for v in es[n]],
        b=[v for n in sorted(bs) for v in bs[n]],
        algebra=rebased, kinds=kinds, partner=partner)


def rebase(alg: FiniteAlgebra, vecs: Sequence[Vec], labels: Sequence[str],
           degrees: Sequence[int], name: Optional[str] = None) -> FiniteAlgebra:
    """The same cdga written in a new basis ``vecs`` (old coordinates)."""
    red = Reducer()
    for v in vecs:
        if red.add(v) is not None:
            raise errors.ModelError("rebase: vectors are not independent")

    def to_new(u: Vec) -> Vec:
        c = red.coords(u)
        if c is None:
            raise AssertionError("vector outside the new span")
        return c

    table = {}
    n = len(vecs)
    for i in range(1, n):
        for j in range(1, n):
            if degrees[i] + degrees[j] > alg.top_degree:
                continue
            p = alg.mul(vecs[i], vecs[j])
            if p:
                table[(i, j)] = to_new(p)
    dvals = {}
    for i in range(n):
        dv = alg.d(vecs[i])
        if dv:
            dvals[i] = to_new(dv)
    return FiniteAlgebra(name or alg.name, labels, degrees, table, dvals)


def subquotient(alg: FiniteAlgebra, ideal: Dict[int, List[Vec]], sub: Dict[int, List[Vec]],
                name: str) -> FiniteAlgebra:
    """Q ⊕ ideal/sub as a cdga (sub ⊂ ideal d-stable ideals of A; sub may be empty).

    With ``ideal`` the whole of A⁺ this is A/sub.
    """
    vecs, labels, degs = [{0: Fraction(1)}], [alg.labels[0]], [0]
    chosen: Dict[int, Reducer] = {}
    slot: Dict[int, Dict[int, int]] = {}  # degree -> reducer add-index -> position in vecs
    for n in sorted(set(ideal) | set(sub)):
        r = Reducer()
        for v in sub.get(n, []):
            r.add(v)
        slot[n] = {}
        for v in ideal.get(n, []):
            k = r.count
            if r.add(v) is None:
                slot[n][k] = len(vecs)
                vecs.append(v)
                degs.append(n)
                labels.append(_vec_label(alg, v, set(labels)))
        chosen[n] = r

    def reduce_to(u: Vec, n: int) -> Vec:
        if not u:
            return {}
        r = chosen.get(n)
        c = r.coords(u) if r is not None else None
        if c is None:
            raise errors.NotDifferentialIdeal("subquotient: element leaves the ideal")
        return {slot[n][j]: x for j, x in c.items() if j in slot[n]}

    table, dvals = {}, {}
    for i in range(1, len(vecs)):
        for j in range(1, len(vecs)):
            p = alg.mul(vecs[i], vecs[j])
            if p:
                q = reduce_to(p, degs[i] + degs[j])
                if q:
                    table[(i, j)] = q
        dv = alg.d(vecs[i])
        if dv:
            q = reduce_to(dv, degs[i] + 1)
            if q:
                dvals[i] = q
    return FiniteAlgebra(name, labels, degs, table, dvals)


def _vec_label(alg: FiniteAlgebra, v: Vec, taken: set) -> str:
    if len(v) == 1:
        (i, c), = v.items()
        if c == 1 and alg.labels[i] not in taken:
            return alg.labels[i]
    k = 0
    while f"u{alg.vec_degree(v)}_{k}" in taken:
        k += 1
    return f"u{alg.vec_degree(v)}_{k}"
