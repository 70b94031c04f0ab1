"""Finitely presented graded-commutative algebras (cohomology rings).

Quotients are computed one degree at a time: the ideal slice in degree ``n``
is spanned by ``m * f`` for relations ``f`` and monomials ``m``, and is row
reduced exactly.  Basis representatives of the quotient are the earliest
monomials in canonical order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .gca import Element, FreeGCA, Generator, Monomial, tensor
from .linalg import EchelonBasis


class _DegreeSlice:
    __slots__ = ("monomials", "column", "ideal", "basis", "basis_index")

    def __init__(self, monomials: List[Monomial], ideal: EchelonBasis):
        self.monomials = monomials
        self.column = {m: i for i, m in enumerate(monomials)}
        self.ideal = ideal
        self.basis = [m for i, m in enumerate(monomials) if i not in ideal.rows]
        self.basis_index = {m: i for i, m in enumerate(self.basis)}


class FPAlgebra:
    """``ambient / (relations)`` for a free graded-commutative ``ambient``.

    The cohomology-ring role requires even generators (``is_evenly_graded``);
    odd generators are accepted so that wedges of odd spheres can be fed to
    the minimal model builder.
    """

    def __init__(self, ambient: FreeGCA, relations: Sequence[Element] = ()):
        rels = []
        for f in relations:
            if f.algebra != ambient:
                raise ValueError("relation lives in a different algebra")
            if not f:
                continue
            if not f.is_homogeneous():
                raise ValueError(f"relation {f} is not homogeneous")
            if f.degree < 2:
                raise ValueError(f"relation {f} has degree < 2")
            rels.append(f)
        self.ambient = ambient
        self.relations: Tuple[Element, ...] = tuple(rels)
        self._slices: Dict[int, _DegreeSlice] = {}

    @classmethod
    def truncated_polynomial(cls, name: str, degree: int, height: int) -> "FPAlgebra":
        """``Q[x]/(x^height)`` with ``|x| = degree``."""
        amb = FreeGCA([Generator(name, degree)])
        return cls(amb, [amb.gen(name) ** height])

    @classmethod
    def trivial(cls) -> "FPAlgebra":
        return cls(FreeGCA([]), [])

    def __repr__(self):
        rels = ", ".join(str(r) for r in self.relations)
        return f"FPAlgebra({self.ambient!r} / ({rels}))"

    @property
    def is_evenly_graded(self) -> bool:
        return not any(self.ambient.odd)

    def _slice(self, n: int) -> _DegreeSlice:
        sl = self._slices.get(n)
        if sl is not None:
            return sl
        amb = self.ambient
        monos = amb.degree_basis(n)
        column = {m: i for i, m in enumerate(monos)}
        ideal = EchelonBasis()
        for f in self.relations:
            for m in amb.degree_basis(n - f.degree):
                prod = amb.monomial_element(m) * f
                ideal.add({column[mono]: c for mono, c in prod.items()})
        sl = _DegreeSlice(monos, ideal)
        self._slices[n] = sl
        return sl

    def quotient_basis(self, n: int) -> List[Monomial]:
        if n < 0:
            return []
        return self._slice(n).basis

    def dimension(self, n: int) -> int:
        return len(self.quotient_basis(n))

    def normal_form(self, e: Element, degree: Optional[int] = None) -> Tuple[Fraction, ...]:
        """Coordinates of the class of ``e`` over ``quotient_basis(deg e)``."""
        if e.algebra != self.ambient:
            raise ValueError("element lives in a different algebra")
        if degree is None:
            if not e:
                raise ValueError("the zero element needs an explicit degree")
            if not e.is_homogeneous():
                raise ValueError(f"{e} is not homogeneous")
            degree = e.degree
        elif e and e.degree != degree:
            raise ValueError(f"{e} is not homogeneous of degree {degree}")
        if degree < 0:
            return ()
        sl = self._slice(degree)
        rem = sl.ideal.reduce({sl.column[m]: c for m, c in e.items()})
        coords = [Fraction(0)] * len(sl.basis)
        for col, c in rem.items():
            coords[sl.basis_index[sl.monomials[col]]] = c
        return tuple(coords)

    def reduce(self, e: Element, degree: Optional[int] = None) -> Element:
        """Canonical representative of the class of ``e``."""
        if not e and degree is None:
            return e
        degree = e.degree if degree is None else degree
        coords = self.normal_form(e, degree)
        return Element(self.ambient, dict(zip(self.quotient_basis(degree), coords)))

    def is_zero(self, e: Element, degree: Optional[int] = None) -> bool:
        if not e:
            return True
        return not any(self.normal_form(e, degree))

    def from_coordinates(self, n: int, coords: Sequence) -> Element:
        return Element(self.ambient, {m: Fraction(c) for m, c in zip(self.quotient_basis(n), coords)})

    def tensor(self, other: "FPAlgebra") -> "FPAlgebra":
        amb = tensor(self.ambient, other.ambient)
        from .gca import embed
        rels = [embed(r, amb) for r in self.relations] + [embed(r, amb) for r in other.relations]
        return FPAlgebra(amb, rels)

    def max_generator_degree(self) -> int:
        return max(self.ambient.degrees, default=0)


@dataclass
class BettiTable:
    """Quotient dimensions in degrees ``0..max_degree``."""

    dims: Dict[int, int]
    max_degree: int
    finite: bool = field(default=True)

    def __getitem__(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def top_degree(self) -> int:
        nz = [d for d, b in self.dims.items() if b]
        return max(nz) if nz else -1

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    @property
    def reduced(self) -> Dict[int, int]:
        return {d: b for d, b in self.dims.items() if d > 0 and b}

    def as_list(self) -> List[int]:
        return [self.dims.get(n, 0) for n in range(self.max_degree + 1)]

    @classmethod
    def from_dict(cls, dims: Dict[int, int]) -> "BettiTable":
        top = max(dims, default=0)
        return cls({n: dims.get(n, 0) for n in range(top + 1)}, top, True)


def betti_table(A: FPAlgebra, max_degree: int) -> BettiTable:
    """Dimensions per degree, plus whether finiteness is certified in range.

    Finiteness is certified once a run of zero degrees as long as the largest
    generator degree appears: every longer monomial factors through it.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    dims = {n: A.dimension(n) for n in range(max_degree + 1)}
    width = A.max_generator_degree()
    finite = width == 0
    run = 0
    for n in range(1, max_degree + 1):
        run = run + 1 if dims[n] == 0 else 0
        if width and run >= width:
            finite = True
            break
    return BettiTable(dims, max_degree, finite)
