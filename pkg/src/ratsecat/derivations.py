"""Degree-lowering derivations of evenly graded cohomology algebras.

A derivation of (signed) degree ``k`` sends a generator of degree ``d`` into
degree ``d + k``.  Degree-lowering derivations have ``k < 0``; the classical
``Der_{>0}`` (indexed by the amount of lowering) is the union of our
``Der_k`` for ``k <= -1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .fp_algebra import FPAlgebra, betti_table
from .gca import Element, extend_derivation
from .linalg import nullspace


@dataclass(frozen=True)
class Derivation:
    degree: int
    values: Dict[str, Element]

    def __post_init__(self):
        if self.degree == 0:
            raise ValueError("derivation degree must be nonzero")

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "values": {k: str(v) for k, v in sorted(self.values.items()) if v}}


def _require_even(A: FPAlgebra):
    if not A.is_evenly_graded:
        raise ValueError("derivation spaces are only computed for evenly graded algebras")


def apply_derivation(theta: Derivation, e: Element, A: FPAlgebra) -> Element:
    """Leibniz extension of ``theta`` evaluated on ``e``, reduced modulo the ideal."""
    if e and not e.is_homogeneous():
        raise ValueError(f"{e} is not homogeneous")
    if not e:
        return e
    raw = extend_derivation(e, theta.values, theta.degree)
    target = e.degree + theta.degree
    if target < 0:
        return A.ambient.zero()
    return A.reduce(raw, target)


def derivation_space(A: FPAlgebra, k: int) -> List[Derivation]:
    """Basis of the derivations of degree ``k < 0`` that are well defined on ``A``.

    Unknowns are the quotient-basis coordinates of each generator's image;
    each relation ``f`` must map into the ideal.
    """
    if k >= 0:
        raise ValueError("only degree-lowering derivations (k < 0) are handled")
    _require_even(A)
    amb = A.ambient
    unknowns: List[Tuple[str, Element]] = []
    for g in amb.generators:
        for mono in A.quotient_basis(g.degree + k):
            unknowns.append((g.name, amb.monomial_element(mono)))
    if not unknowns:
        return []

    rows: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for ri, f in enumerate(A.relations):
        target = f.degree + k
        if target < 0:
            continue
        for col, (name, img) in enumerate(unknowns):
            image = extend_derivation(f, {name: img}, k)
            if not image:
                continue
            for bi, c in enumerate(A.normal_form(image, target)):
                if c:
                    rows.setdefault((ri, bi), {})[col] = c

    out = []
    for vec in nullspace(rows.values(), len(unknowns)):
        values: Dict[str, Element] = {g.name: amb.zero() for g in amb.generators}
        for col, c in vec.items():
            name, img = unknowns[col]
            values[name] = values[name] + img * c
        out.append(Derivation(k, values))
    return out


def is_well_defined(theta: Derivation, A: FPAlgebra) -> bool:
    """Independent re-check that every relation is sent into the ideal."""
    for f in A.relations:
        if not A.is_zero(extend_derivation(f, theta.values, theta.degree), f.degree + theta.degree):
            return False
    return True


@dataclass
class HalperinResult:
    holds: bool
    witness: Optional[Derivation]
    scanned_degrees: List[int]
    top_degree: int
    max_degree: int

    def to_json(self) -> dict:
        return {
            "halperin": self.holds,
            "witness": self.witness.to_json() if self.witness else None,
            "scanned_degrees": self.scanned_degrees,
            "top_degree": self.top_degree,
            "degree_convention": "signed shift; degree-lowering derivations have negative degree",
        }


def halperin_check(A: FPAlgebra, max_degree: int = 64) -> HalperinResult:
    """Decide whether ``A`` has no nonzero degree-lowering derivation.

    Scans ``k = -1 .. -top`` where ``top`` is the top nonzero degree of
    ``A``; lower shifts kill every element for degree reasons.
    """
    _require_even(A)
    table = betti_table(A, max_degree)
    if not table.finite:
        raise ValueError(
            f"finite dimensionality is not certified up to degree {max_degree}; "
            "raise max_degree")
    top = table.top_degree
    scanned = []
    for k in range(-1, -top - 1, -1):
        scanned.append(k)
        basis = derivation_space(A, k)
        if basis:
            return HalperinResult(False, basis[0], scanned, top, max_degree)
    return HalperinResult(True, None, scanned, top, max_degree)


def derivation_summary(theta: Derivation) -> str:
    parts = [f"{k}->{v}" for k, v in sorted(theta.values.items()) if v]
    return f"deg {theta.degree}: " + ", ".join(parts)


__all__ = ["Derivation", "apply_derivation", "derivation_space", "halperin_check",
           "HalperinResult", "is_well_defined"]
