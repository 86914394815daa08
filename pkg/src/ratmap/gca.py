"""Free graded-commutative algebras over Q.

A `FreeAlgebra` is polynomial on its even generators and exterior on its odd
ones.  Monomials are tuples of ``(ordinal, exponent)`` pairs sorted by
ordinal; every product is brought to that canonical order at the time it is
formed, picking up the Koszul sign of the sort, so two elements are equal
exactly when their term dictionaries are.
"""
from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import MixedAlgebras, NonPositiveDegreeGenerator

Monomial = Tuple[Tuple[int, int], ...]
ONE: Monomial = ()


class GenSym(NamedTuple):
    name: str
    degree: int
    ordinal: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class FreeAlgebra:
    """The free graded-commutative algebra on a well-ordered list of generators."""

    def __init__(self, gens: Sequence[Tuple[str, int]]):
        self.gens: Tuple[GenSym, ...] = tuple(
            GenSym(str(name), int(deg), i) for i, (name, deg) in enumerate(gens))
        self.index: Dict[str, int] = {}
        for g in self.gens:
            if g.name in self.index:
                raise ValueError(f"duplicate generator {g.name!r}")
            self.index[g.name] = g.ordinal
        self._odd = tuple(g.odd for g in self.gens)
        self._deg = tuple(g.degree for g in self.gens)
        self._mul_cache: Dict[Tuple[Monomial, Monomial], Optional[Tuple[int, Monomial]]] = {}
        self._key = tuple((g.name, g.degree) for g in self.gens)

    def __eq__(self, other):
        return isinstance(other, FreeAlgebra) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.gens)
        return f"FreeAlgebra({inner})"

    def __len__(self):
        return len(self.gens)

    # -- elements ---------------------------------------------------------
    def zero(self) -> "Elem":
        return Elem(self, {})

    def one(self) -> "Elem":
        return Elem(self, {ONE: Fraction(1)})

    def gen(self, name_or_ordinal) -> "Elem":
        i = self.index[name_or_ordinal] if isinstance(name_or_ordinal, str) else name_or_ordinal
        return Elem(self, {((i, 1),): Fraction(1)})

    def monomial(self, mono: Monomial, coeff=1) -> "Elem":
        return Elem(self, {mono: Fraction(coeff)} if coeff else {})

    # -- monomial arithmetic ---------------------------------------------
    def mono_degree(self, m: Monomial) -> int:
        return sum(self._deg[i] * e for i, e in m)

    @staticmethod
    def word_length(m: Monomial) -> int:
        return sum(e for _, e in m)

    def mono_mul(self, m1: Monomial, m2: Monomial) -> Optional[Tuple[int, Monomial]]:
        """Canonical product of two monomials as ``(sign, monomial)``; None if zero."""
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        key = (m1, m2)
        try:
            return self._mul_cache[key]
        except KeyError:
            pass
        odd = self._odd
        odd1 = [i for i, _ in m1 if odd[i]]
        sign = 0
        out = []
        a = b = 0
        res = None
        while a < len(m1) and b < len(m2):
            i, e = m1[a]
            j, f = m2[b]
            if i < j:
                out.append((i, e))
                a += 1
            elif j < i:
                out.append((j, f))
                b += 1
            else:
                if odd[i]:
                    break
                out.append((i, e + f))
                a += 1
                b += 1
        else:
            out.extend(m1[a:])
            out.extend(m2[b:])
            # each odd factor of m2 moves left past the odd factors of m1 with larger ordinal
            for j, _ in m2:
                if odd[j]:
                    sign += len(odd1) - bisect_right(odd1, j)
            res = (-1 if sign & 1 else 1, tuple(out))
        self._mul_cache[key] = res
        return res

    def mono_str(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for i, e in m:
            name = self.gens[i].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    # -- bases -----------------------------------------------------------
    def basis(self, n: int) -> List[Monomial]:
        return enumerate_basis(self.gens, n)

    def check_same(self, other: "FreeAlgebra") -> None:
        if self is not other and self != other:
            raise MixedAlgebras(f"{self!r} vs {other!r}")


class Elem:
    """An element of a `FreeAlgebra`: a dict from monomials to nonzero rationals."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: FreeAlgebra, terms: Dict[Monomial, Fraction]):
        self.ring = ring
        self.terms = terms

    @classmethod
    def from_terms(cls, ring: FreeAlgebra, items: Iterable[Tuple[Monomial, object]]) -> "Elem":
        terms: Dict[Monomial, Fraction] = {}
        for m, c in items:
            s = terms.get(m, 0) + Fraction(c)
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return cls(ring, terms)

    # -- predicates --------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Elem):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Elem":
        if isinstance(other, Elem):
            self.ring.check_same(other.ring)
            return other
        return Elem(self.ring, {ONE: Fraction(other)} if other else {})

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Elem(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Elem(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Elem":
        c = Fraction(c)
        if not c:
            return Elem(self.ring, {})
        return Elem(self.ring, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Elem):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(1 / Fraction(c))

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    # -- grading -------------------------------------------------------------
    def degrees(self) -> set:
        return {self.ring.mono_degree(m) for m in self.terms}

    def degree(self) -> Optional[int]:
        """Degree of a homogeneous element (None for zero)."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous element {self}")
        return ds.pop()

    def component(self, degree: int) -> "Elem":
        return Elem(self.ring, {m: c for m, c in self.terms.items()
                                if self.ring.mono_degree(m) == degree})

    def word_component(self, length: int) -> "Elem":
        return Elem(self.ring, {m: c for m, c in self.terms.items()
                                if FreeAlgebra.word_length(m) == length})

    def word_lengths(self) -> set:
        return {FreeAlgebra.word_length(m) for m in self.terms}

    def support(self) -> set:
        """Ordinals of generators occurring in some term."""
        return {i for m in self.terms for i, _ in m}

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            ms = self.ring.mono_str(m)
            if ms == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(ms)
            elif c == -1:
                parts.append("-" + ms)
            else:
                parts.append(f"{c}*{ms}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def mul(u: Elem, v: Elem) -> Elem:
    """Product with Koszul signs; raises MixedAlgebras across different rings."""
    u.ring.check_same(v.ring)
    ring = u.ring
    terms: Dict[Monomial, Fraction] = {}
    for m1, c1 in u.terms.items():
        for m2, c2 in v.terms.items():
            r = ring.mono_mul(m1, m2)
            if r is None:
                continue
            sign, m = r
            s = terms.get(m, 0) + sign * c1 * c2
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
    return Elem(ring, terms)


def enumerate_basis(gens: Sequence[GenSym], n: int) -> List[Monomial]:
    """Canonical monomial basis in degree ``n``, lexicographic in ordinals."""
    for g in gens:
        if g.degree <= 0:
            raise NonPositiveDegreeGenerator(f"generator {g.name} has degree {g.degree}")
    if n < 0:
        return []
    gs = sorted(gens, key=lambda g: g.ordinal)
    out: List[Monomial] = []

    def rec(k: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if k == len(gs):
            return
        g = gs[k]
        emax = 1 if g.odd else remaining // g.degree
        for e in range(min(emax, remaining // g.degree), 0, -1):
            acc.append((g.ordinal, e))
            rec(k + 1, remaining - e * g.degree, acc)
            acc.pop()
        rec(k + 1, remaining, acc)

    rec(0, n, [])
    out.sort()
    return out


def hilbert_coefficients(degrees: Iterable[int], n_max: int) -> List[int]:
    """Coefficients of prod_even (1-t^d)^-1 prod_odd (1+t^d) through t^n_max."""
    coeffs = [0] * (n_max + 1)
    coeffs[0] = 1
    for d in degrees:
        if d <= 0:
            raise NonPositiveDegreeGenerator(f"degree {d}")
        if d % 2:
            for n in range(n_max, d - 1, -1):
                coeffs[n] += coeffs[n - d]
        else:
            for n in range(d, n_max + 1):
                coeffs[n] += coeffs[n - d]
    return coeffs


def _accumulate(terms: Dict[Monomial, Fraction], u: Elem, c) -> None:
    for m, x in u.terms.items():
        s = terms.get(m, 0) + c * x
        if s:
            terms[m] = s
        else:
            terms.pop(m, None)


def linear_combination(ring: FreeAlgebra, pairs: Iterable[Tuple[object, Elem]]) -> Elem:
    terms: Dict[Monomial, Fraction] = {}
    for c, u in pairs:
        _accumulate(terms, u, c)
    return Elem(ring, terms)


# -- maps between free algebras ----------------------------------------------

def substitute(u: Elem, images: Dict[int, Elem], target: FreeAlgebra) -> Elem:
    """Apply the algebra morphism sending generator ``i`` to ``images[i]``.

    Generators missing from ``images`` are sent to zero.
    """
    terms: Dict[Monomial, Fraction] = {}
    cache: Dict[Monomial, Elem] = {}
    for m, c in u.terms.items():
        img = cache.get(m)
        if img is None:
            img = target.one()
            for i, e in m:
                g = images.get(i)
                if g is None or not g:
                    img = target.zero()
                    break
                for _ in range(e):
                    img = img * g
            cache[m] = img
        _accumulate(terms, img, c)
    return Elem(target, terms)


class Derivation:
    """A degree-odd derivation of a free algebra given by its values on generators."""

    def __init__(self, ring: FreeAlgebra, values: Dict[int, Elem]):
        self.ring = ring
        self.values = values
        self._cache: Dict[Monomial, Elem] = {}

    def on_monomial(self, m: Monomial) -> Elem:
        if not m:
            return self.ring.zero()
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        i, e = m[0]
        rest = m[1:] if e == 1 else ((i, e - 1),) + m[1:]
        g = self.ring.gen(i)
        r = self.ring.monomial(rest)
        dg = self.values.get(i)
        out = self.ring.zero()
        if dg is not None and dg:
            out = dg * r
        drest = self.on_monomial(rest)
        if drest:
            t = g * drest
            out = out - t if self.ring.gens[i].odd else out + t
        self._cache[m] = out
        return out

    def __call__(self, u: Elem) -> Elem:
        terms: Dict[Monomial, Fraction] = {}
        for m, c in u.terms.items():
            _accumulate(terms, self.on_monomial(m), c)
        return Elem(self.ring, terms)
