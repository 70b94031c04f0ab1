"""Free graded-commutative algebras over the rationals.

Elements are exact linear combinations of canonical monomials.  A monomial is
an exponent vector aligned with the generator order of its ambient algebra;
generators are kept sorted by ``(degree, insertion index)`` so that equal
elements have equal term dictionaries.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Serialize as ``"p/q"`` (or ``"p"`` for integers)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if not self.name.isidentifier():
            raise ValueError(f"invalid generator name {self.name!r}")
        if self.degree < 1:
            raise ValueError(f"generator {self.name} has degree {self.degree} < 1")

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


class FreeGCA:
    """The free graded-commutative algebra on a finite list of generators."""

    def __init__(self, generators: Iterable[Generator]):
        gens = list(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        order = sorted(range(len(gens)), key=lambda i: (gens[i].degree, i))
        self.generators: Tuple[Generator, ...] = tuple(gens[i] for i in order)
        self.index: Dict[str, int] = {g.name: i for i, g in enumerate(self.generators)}
        self.degrees: Tuple[int, ...] = tuple(g.degree for g in self.generators)
        self.odd: Tuple[bool, ...] = tuple(g.is_odd for g in self.generators)
        self._basis_cache: Dict[int, List[Monomial]] = {}

    @classmethod
    def from_degrees(cls, spec: Mapping[str, int] | Sequence[Tuple[str, int]]) -> "FreeGCA":
        items = spec.items() if isinstance(spec, Mapping) else spec
        return cls(Generator(name, deg) for name, deg in items)

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        return isinstance(other, FreeGCA) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        inner = ", ".join(f"{g.name}_{g.degree}" for g in self.generators)
        return f"FreeGCA({inner})"

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def generator(self, name: str) -> Generator:
        try:
            return self.generators[self.index[name]]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree_of(self, name: str) -> int:
        return self.generator(name).degree

    # ---- elements -------------------------------------------------------

    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.generators)

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {self.unit_monomial(): Fraction(1)})

    def scalar(self, c) -> "Element":
        return Element(self, {self.unit_monomial(): as_rational(c)})

    def gen(self, name: str) -> "Element":
        exps = [0] * len(self.generators)
        exps[self._idx(name)] = 1
        return Element(self, {tuple(exps): Fraction(1)})

    def gens(self, names: str) -> Tuple["Element", ...]:
        return tuple(self.gen(n) for n in names.replace(",", " ").split())

    def monomial_element(self, mono: Monomial, coeff=1) -> "Element":
        return Element(self, {mono: coeff})

    def _idx(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    # ---- monomial arithmetic -----------------------------------------

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def multiply_monomials(self, a: Monomial, b: Monomial) -> Tuple[int, Optional[Monomial]]:
        """Return ``(sign, a*b)``; sign 0 when an odd generator repeats.

        The sign counts the odd generators of ``b`` that move left past odd
        generators of ``a`` with larger index.
        """
        odd = self.odd
        sign = 1
        odd_in_a_above = 0
        out = [0] * len(a)
        for i in range(len(a) - 1, -1, -1):
            ea, eb = a[i], b[i]
            if odd[i]:
                if ea and eb:
                    return 0, None
                if eb and odd_in_a_above % 2:
                    sign = -sign
                if ea:
                    odd_in_a_above += 1
            out[i] = ea + eb
        return sign, tuple(out)

    def degree_basis(self, n: int) -> List[Monomial]:
        """All canonical monomials of total degree ``n``.

        Ordered by exponent vector, descending lexicographically (higher powers
        of earlier generators first).
        """
        if n < 0:
            return []
        cached = self._basis_cache.get(n)
        if cached is not None:
            return cached
        degs, odd = self.degrees, self.odd
        k = len(degs)
        out: List[Monomial] = []
        exps = [0] * k

        def rec(i: int, remaining: int):
            if remaining == 0:
                out.append(tuple(exps))
                return
            if i == k:
                return
            cap = 1 if odd[i] else remaining // degs[i]
            for e in range(min(cap, remaining // degs[i]), -1, -1):
                exps[i] = e
                rec(i + 1, remaining - e * degs[i])
            exps[i] = 0

        rec(0, n)
        self._basis_cache[n] = out
        return out

    def format_monomial(self, mono: Monomial) -> str:
        parts = []
        for g, e in zip(self.generators, mono):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"


def _coeff_is_zero(c) -> bool:
    return not c


class Element:
    """An immutable linear combination of canonical monomials.

    Coefficients are Fractions; the arithmetic only relies on ``+``, ``*``
    and truthiness, so polynomial coefficient rings work too.
    """

    __slots__ = ("algebra", "_terms", "_hash")

    def __init__(self, algebra: FreeGCA, terms: Mapping[Monomial, object]):
        self.algebra = algebra
        self._terms: Dict[Monomial, object] = {m: c for m, c in terms.items() if c}
        self._hash = None

    @property
    def terms(self) -> Mapping[Monomial, object]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def coefficient(self, mono: Monomial):
        return self._terms.get(mono, 0)

    def degrees(self) -> set:
        return {self.algebra.monomial_degree(m) for m in self._terms}

    @property
    def degree(self) -> Optional[int]:
        """Degree when homogeneous and nonzero, else None."""
        degs = self.degrees()
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def _check(self, other: "Element"):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ValueError("elements live in different ambient algebras")

    def _lift(self, other) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            return other
        return Element(self.algebra, {self.algebra.unit_monomial(): other})

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Element(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Element":
        return Element(self.algebra, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        self._check(other)
        mul = self.algebra.multiply_monomials
        terms: Dict[Monomial, object] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                sign, m = mul(ma, mb)
                if not sign:
                    continue
                c = ca * cb if sign > 0 else -(ca * cb)
                terms[m] = terms[m] + c if m in terms else c
        return Element(self.algebra, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        result = self.algebra.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra == other.algebra and self._terms == other._terms
        if other == 0:
            return not self._terms
        return self == self._lift(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def map_coefficients(self, fn) -> "Element":
        return Element(self.algebra, {m: fn(c) for m, c in self._terms.items()})

    def sorted_terms(self) -> List[Tuple[Monomial, object]]:
        """Terms by descending degree, then canonical basis order."""
        alg = self.algebra
        return sorted(self._terms.items(),
                      key=lambda t: (-alg.monomial_degree(t[0]), tuple(-e for e in t[0])))

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            body = self.algebra.format_monomial(mono)
            if isinstance(c, int):
                c = Fraction(c)
            if isinstance(c, Fraction):
                neg = c < 0
                mag = -c if neg else c
                if body == "1":
                    text = format_rational(mag)
                elif mag == 1:
                    text = body
                else:
                    text = f"{format_rational(mag)}*{body}"
            else:
                neg = False
                text = f"({c})" if body == "1" else f"({c})*{body}"
            if not pieces:
                pieces.append(f"-{text}" if neg else text)
            else:
                pieces.append(f"- {text}" if neg else f"+ {text}")
        return " ".join(pieces)

    def __repr__(self):
        return f"Element({self})"


def normalize(algebra: FreeGCA, raw: Sequence[Tuple[str, int]], coeff=1) -> Element:
    """Canonical element for the ordered product ``coeff * g1^e1 * g2^e2 ...``.

    Reordering into canonical order introduces the Koszul sign; an odd
    generator occurring twice gives zero.
    """
    result = algebra.scalar(coeff)
    for name, power in raw:
        if power < 0:
            raise ValueError(f"negative exponent on {name}")
        result = result * (algebra.gen(name) ** power)
    return result


def multiply(a: Element, b: Element) -> Element:
    return a * b


def degree_basis(algebra: FreeGCA, n: int) -> List[Monomial]:
    return algebra.degree_basis(n)


def substitute(e: Element, assignment: Mapping[str, Element],
               target: Optional[FreeGCA] = None) -> Element:
    """Apply the algebra map determined by ``assignment``.

    Generators missing from ``assignment`` map to the generator of the same
    name in ``target`` (the source algebra by default).
    """
    src = e.algebra
    tgt = target if target is not None else src
    images: List[Element] = []
    for g in src.generators:
        if g.name in assignment:
            img = assignment[g.name]
            if img.algebra != tgt:
                raise ValueError(f"image of {g.name} lives in the wrong algebra")
            if img and img.degree != g.degree:
                raise ValueError(
                    f"image of {g.name} must be homogeneous of degree {g.degree}, got {img}")
        else:
            img = tgt.gen(g.name)
            if tgt.degree_of(g.name) != g.degree:
                raise ValueError(f"generator {g.name} changes degree under the identity map")
        images.append(img)

    powers: Dict[Tuple[int, int], Element] = {}

    def power(i: int, k: int) -> Element:
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] ** k
        return powers[key]

    result: Dict[Monomial, object] = {}
    for mono, c in e.items():
        acc = Element(tgt, {tgt.unit_monomial(): c})
        for i, k in enumerate(mono):
            if k:
                acc = acc * power(i, k)
                if not acc:
                    break
        for m, v in acc.items():
            result[m] = result[m] + v if m in result else v
    return Element(tgt, result)


def embed(e: Element, target: FreeGCA) -> Element:
    """Re-express ``e`` in a larger algebra containing its generators by name."""
    return substitute(e, {}, target)


def extend_derivation(e: Element, values: Mapping[str, Element], degree: int) -> Element:
    """Evaluate on ``e`` the derivation of the given degree fixed by ``values``.

    Uses theta(ab) = theta(a) b + (-1)^(|theta||a|) a theta(b).  Generators not
    listed are sent to zero.
    """
    alg = e.algebra
    gens = alg.generators
    result = alg.zero()
    for mono, c in e.items():
        prefix_deg = 0
        for i, k in enumerate(mono):
            if not k:
                continue
            name = gens[i].name
            val = values.get(name)
            if val is not None and val:
                prefix = tuple(mono[:i]) + (0,) * (len(mono) - i)
                suffix = (0,) * (i + 1) + tuple(mono[i + 1:])
                rest = [0] * len(mono)
                rest[i] = k - 1
                sign = -1 if (degree * prefix_deg) % 2 else 1
                piece = (Element(alg, {prefix: c})
                         * (Element(alg, {tuple(rest): k}) * val)
                         * Element(alg, {suffix: 1}))
                result = result + (piece if sign > 0 else -piece)
            prefix_deg += k * gens[i].degree
    return result


def tensor(a: FreeGCA, b: FreeGCA) -> FreeGCA:
    """Free algebra on the disjoint union of generators."""
    clash = set(a.index) & set(b.index)
    if clash:
        raise ValueError(f"generator names clash: {sorted(clash)}")
    return FreeGCA(list(a.generators) + list(b.generators))


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"
