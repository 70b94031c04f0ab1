"""Sullivan algebras: differentials, truncated cohomology, pure and minimal
models, and the derivation complex.

``cutoff`` is the degree up to which a model's generator list is known to be
complete.  ``None`` marks a model whose generators are all present (pure
models, finite hand-built models); a truncated model only certifies
statements that never need a generator above its cutoff.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .fp_algebra import FPAlgebra
from .gca import (Element, FreeGCA, Generator, Monomial, extend_derivation,
                  fresh_name, substitute)
from .linalg import EchelonBasis, nullspace

log = logging.getLogger(__name__)


class SullivanAlgebra:
    """Free graded-commutative algebra with a degree +1 differential."""

    def __init__(self, algebra: FreeGCA, differential: Optional[Mapping[str, Element]] = None,
                 cutoff: Optional[int] = None):
        differential = dict(differential or {})
        unknown = set(differential) - set(algebra.index)
        if unknown:
            raise KeyError(f"differential given for unknown generators {sorted(unknown)}")
        d = {}
        for g in algebra.generators:
            val = differential.get(g.name)
            if val is None:
                val = algebra.zero()
            elif val.algebra != algebra:
                raise ValueError(f"d({g.name}) lives in a different algebra")
            d[g.name] = val
        self.algebra = algebra
        self.differential: Dict[str, Element] = d
        self.cutoff = cutoff
        self._dmono: Dict[Monomial, Element] = {}

    def __repr__(self):
        parts = [f"d{n}={v}" for n, v in self.differential.items() if v]
        return f"SullivanAlgebra({self.algebra!r}; {', '.join(parts)}; cutoff={self.cutoff})"

    @property
    def generators(self) -> Tuple[Generator, ...]:
        return self.algebra.generators

    @property
    def is_complete(self) -> bool:
        return self.cutoff is None

    def d(self, e: Element) -> Element:
        if e.algebra != self.algebra:
            raise ValueError("element lives in a different algebra")
        out: Dict[Monomial, object] = {}
        for mono, c in e.items():
            for m, v in self.d_monomial(mono).items():
                v = c * v
                out[m] = out[m] + v if m in out else v
        return Element(self.algebra, out)

    def d_monomial(self, mono: Monomial) -> Element:
        cached = self._dmono.get(mono)
        if cached is None:
            cached = extend_derivation(self.algebra.monomial_element(mono), self.differential, 1)
            self._dmono[mono] = cached
        return cached

    def certifies(self, degree: int) -> bool:
        return self.cutoff is None or degree <= self.cutoff

    def is_minimal(self) -> bool:
        """True when no differential has a linear (single-generator) term."""
        for val in self.differential.values():
            for mono in val.terms:
                if sum(mono) == 1:
                    return False
        return True

    def restrict(self, cutoff: int) -> "SullivanAlgebra":
        """Sub-algebra on the generators of degree <= cutoff."""
        keep = [g for g in self.generators if g.degree <= cutoff]
        alg = FreeGCA(keep)
        diff = {g.name: substitute_into(self.differential[g.name], alg) for g in keep}
        return SullivanAlgebra(alg, diff, cutoff)


def substitute_into(e: Element, target: FreeGCA) -> Element:
    """Re-express ``e`` in ``target``; every generator used must exist there."""
    missing = {g.name for g in e.algebra.generators if g.name not in target.index}
    used = set()
    for mono in e.terms:
        used.update(e.algebra.generators[i].name for i, k in enumerate(mono) if k)
    if used & missing:
        raise ValueError(f"{e} uses generators {sorted(used & missing)} absent from target")
    return substitute(e, {n: target.zero() for n in missing}, target)


@dataclass(frozen=True)
class Diagnostic:
    generator: str
    degree: int
    reason: str

    def to_json(self) -> dict:
        return {"generator": self.generator, "degree": self.degree, "reason": self.reason}

    def __str__(self):
        return f"{self.generator} (degree {self.degree}): {self.reason}"


def validate_sullivan(S: SullivanAlgebra) -> Optional[Diagnostic]:
    """Return None when ``S`` is a valid Sullivan algebra, else the first problem."""
    for g in S.generators:
        dg = S.differential[g.name]
        if dg and not dg.is_homogeneous():
            return Diagnostic(g.name, g.degree, f"d({g.name}) = {dg} is not homogeneous")
        if dg and dg.degree != g.degree + 1:
            return Diagnostic(g.name, g.degree,
                              f"d({g.name}) has degree {dg.degree}, expected {g.degree + 1}")
    for g in S.generators:
        if not S.certifies(g.degree + 2):
            continue
        dd = S.d(S.differential[g.name])
        if dd:
            return Diagnostic(g.name, g.degree, f"d^2({g.name}) = {dd} is not zero")
    return None


# ---------------------------------------------------------------- cohomology

@dataclass
class CohomologySlice:
    degree: int
    dimension: int
    representatives: List[Element]


@dataclass
class CohomologyReport:
    cutoff: Optional[int]
    dims: Dict[int, int] = field(default_factory=dict)
    representatives: Dict[int, List[Element]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "dimensions": {str(n): d for n, d in sorted(self.dims.items())},
            "representatives": {str(n): [str(r) for r in reps]
                                for n, reps in sorted(self.representatives.items()) if reps},
        }


def _coords(e: Element, column: Dict[Monomial, int]) -> Dict[int, Fraction]:
    return {column[m]: c for m, c in e.items()}


def differential_matrix(S: SullivanAlgebra, n: int) -> Tuple[List[Monomial], List[Monomial], List[Dict[int, Fraction]]]:
    """Columns: d of each degree-n monomial, in degree-(n+1) coordinates."""
    alg = S.algebra
    src = alg.degree_basis(n)
    tgt = alg.degree_basis(n + 1)
    column = {m: i for i, m in enumerate(tgt)}
    cols = [_coords(S.d_monomial(m), column) for m in src]
    return src, tgt, cols


def _transpose(cols: List[Dict[int, Fraction]]) -> List[Dict[int, Fraction]]:
    rows: Dict[int, Dict[int, Fraction]] = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    return list(rows.values())


def cocycles(S: SullivanAlgebra, n: int) -> List[Element]:
    src, _, cols = differential_matrix(S, n)
    kernel = nullspace(_transpose(cols), len(src))
    return [Element(S.algebra, {src[i]: c for i, c in v.items()}) for v in kernel]


def boundaries(S: SullivanAlgebra, n: int) -> EchelonBasis:
    """Echelon basis of d(degree n-1) in degree-n monomial coordinates."""
    _, _, cols = differential_matrix(S, n - 1)
    ech = EchelonBasis()
    for c in cols:
        ech.add(c)
    return ech


def cohomology(S: SullivanAlgebra, n: int) -> CohomologySlice:
    """Exact dimension of H^n with cocycle representatives."""
    if n < 0:
        raise ValueError("negative degree")
    if not S.certifies(n + 1):
        raise ValueError(f"degree {n} is beyond the certified range (cutoff {S.cutoff})")
    column = {m: i for i, m in enumerate(S.algebra.degree_basis(n))}
    ech = boundaries(S, n)
    reps = []
    for z in cocycles(S, n):
        if ech.add(_coords(z, column)):
            reps.append(z)
    return CohomologySlice(n, len(reps), reps)


def cohomology_report(S: SullivanAlgebra, max_degree: int) -> CohomologyReport:
    rep = CohomologyReport(S.cutoff)
    for n in range(max_degree + 1):
        sl = cohomology(S, n)
        rep.dims[n] = sl.dimension
        rep.representatives[n] = sl.representatives
    return rep


# ---------------------------------------------------------------- models

def pure_model(A: FPAlgebra, odd_name: str = "y") -> SullivanAlgebra:
    """``Lambda(x_i) (x) Lambda(y_j)`` with ``dy_j = f_j`` for a complete intersection.

    The relations are assumed to form a regular sequence; this is not checked.
    """
    if not A.is_evenly_graded:
        raise ValueError("pure models need an evenly graded presentation")
    k = len(A.ambient.generators)
    if len(A.relations) != k:
        raise ValueError(f"{len(A.relations)} relations for {k} generators; "
                         "a complete intersection needs equal counts")
    taken = set(A.ambient.index)
    names = []
    for j in range(len(A.relations)):
        base = odd_name if len(A.relations) == 1 else f"{odd_name}{j + 1}"
        name = fresh_name(base, taken)
        taken.add(name)
        names.append(name)
    gens = list(A.ambient.generators) + [Generator(nm, f.degree - 1)
                                         for nm, f in zip(names, A.relations)]
    alg = FreeGCA(gens)
    diff = {nm: substitute(f, {}, alg) for nm, f in zip(names, A.relations)}
    return SullivanAlgebra(alg, diff, None)


def _apply_map(z: Element, phi: Mapping[str, Element], A: FPAlgebra) -> Element:
    return substitute(z, phi, A.ambient)


def build_minimal_model(A: FPAlgebra, cutoff: int) -> Tuple[SullivanAlgebra, Dict[str, Element]]:
    """Minimal model of the formal algebra ``A`` through degree ``cutoff``.

    Returns the model and the comparison map (generator -> element of the
    ambient of ``A``).  Generators are added degree by degree: closed ones
    for classes of ``A`` not yet hit, and ones killing cocycles that map to
    zero.
    """
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2 for a simply connected model")
    if A.dimension(1):
        raise ValueError("the algebra is not simply connected (nonzero degree 1)")
    gens: List[Generator] = []
    diff: Dict[str, Element] = {}
    phi: Dict[str, Element] = {}

    def current() -> SullivanAlgebra:
        alg = FreeGCA(gens)
        return SullivanAlgebra(alg, {k: substitute_into(v, alg) for k, v in diff.items()}, cutoff)

    S = current()
    for n in range(2, cutoff + 1):
        new: List[Tuple[str, Element, Element]] = []
        count = 0

        # classes of A^n not yet in the image
        dim_a = A.dimension(n)
        if dim_a:
            image = EchelonBasis()
            for z in cocycles(S, n):
                image.add(dict(enumerate(A.normal_form(_apply_map(z, phi, A), n))))
            for i in range(dim_a):
                if image.add({i: Fraction(1)}):
                    count += 1
                    new.append((f"g{n}_{count}", None,
                                A.from_coordinates(n, [1 if j == i else 0 for j in range(dim_a)])))

        # cocycles of degree n+1 sent to zero but not yet exact
        zs = cocycles(S, n + 1)
        if zs:
            imgs = [A.normal_form(_apply_map(z, phi, A), n + 1) for z in zs]
            rows = _transpose([{i: c for i, c in enumerate(v) if c} for v in imgs])
            killers = nullspace(rows, len(zs))
            if killers:
                column = {m: i for i, m in enumerate(S.algebra.degree_basis(n + 1))}
                ech = boundaries(S, n + 1)
                for vec in killers:
                    z = S.algebra.zero()
                    for i, c in vec.items():
                        z = z + zs[i] * c
                    if ech.add(_coords(z, column)):
                        count += 1
                        new.append((f"g{n}_{count}", z, A.ambient.zero()))

        if new:
            for name, dz, img in new:
                gens.append(Generator(name, n))
                phi[name] = img
                if dz is not None:
                    diff[name] = dz
            S = current()
    log.debug("minimal model through %d: %d generators", cutoff, len(gens))
    return S, phi


def minimal_model(A: FPAlgebra, cutoff: int) -> SullivanAlgebra:
    return build_minimal_model(A, cutoff)[0]


def comparison_is_quasi_iso(S: SullivanAlgebra, phi: Mapping[str, Element], A: FPAlgebra,
                            max_degree: int) -> bool:
    """Check that ``phi`` is a chain map inducing isomorphisms through ``max_degree``."""
    for g in S.generators:
        if not A.is_zero(_apply_map(S.differential[g.name], phi, A), g.degree + 1):
            return False
    for n in range(max_degree + 1):
        sl = cohomology(S, n)
        if sl.dimension != A.dimension(n):
            return False
        ech = EchelonBasis()
        for z in sl.representatives:
            if not ech.add(dict(enumerate(A.normal_form(_apply_map(z, phi, A), n)))):
                return False
    return True


# ---------------------------------------------------------------- derivations

@dataclass
class DerivationHomology:
    degree: int
    dimension: int
    chain_dims: Tuple[int, int, int]


def _derivation_basis(S: SullivanAlgebra, k: int) -> List[Tuple[str, Monomial]]:
    alg = S.algebra
    return [(g.name, m) for g in alg.generators for m in alg.degree_basis(g.degree - k)]


def derivation_boundary(S: SullivanAlgebra, k: int) -> Tuple[List[Tuple[str, Monomial]],
                                                           List[Tuple[str, Monomial]],
                                                           List[Dict[int, Fraction]]]:
    """Matrix of theta -> [d, theta] from degree-k to degree-(k-1) derivations.

    Degree-k derivations lower degree by k; ``[d, theta] = d theta -
    (-1)^k theta d``.
    """
    alg = S.algebra
    src = _derivation_basis(S, k)
    tgt = _derivation_basis(S, k - 1)
    index = {key: i for i, key in enumerate(tgt)}
    sign = -1 if k % 2 else 1
    cols = []
    for name, mono in src:
        theta = {name: alg.monomial_element(mono)}
        col: Dict[int, Fraction] = {}
        for g in alg.generators:
            val = S.d(theta[name]) if g.name == name else alg.zero()
            val = val - extend_derivation(S.differential[g.name], theta, -k) * sign
            for m, c in val.items():
                col[index[(g.name, m)]] = col.get(index[(g.name, m)], 0) + c
        cols.append({i: c for i, c in col.items() if c})
    return src, tgt, cols


def derivation_complex_homology(S: SullivanAlgebra, n: int) -> int:
    """dim H_n of the derivation complex; rationally pi_n of the identity component."""
    return derivation_homology(S, n).dimension


def derivation_homology(S: SullivanAlgebra, n: int) -> DerivationHomology:
    if n < 1:
        raise ValueError("derivation homology is computed in degrees >= 1")
    if not S.is_complete:
        raise ValueError("derivation homology is only certified on complete models "
                         f"(this model is truncated at {S.cutoff})")
    src, _, cols = derivation_boundary(S, n)
    rank_out = len(_rank_basis(cols))
    kernel = len(src) - rank_out
    up_src, _, up_cols = derivation_boundary(S, n + 1)
    rank_in = len(_rank_basis(up_cols))
    low = len(_derivation_basis(S, n - 1))
    return DerivationHomology(n, kernel - rank_in, (len(up_src), len(src), low))


def _rank_basis(cols: List[Dict[int, Fraction]]) -> EchelonBasis:
    ech = EchelonBasis()
    for c in cols:
        ech.add(c)
    return ech


def top_gottlieb_degree(S: SullivanAlgebra) -> int:
    """Largest degree carrying a generator of a complete (elliptic) model."""
    if not S.generators:
        raise ValueError("the model has no generators")
    if not S.is_complete:
        raise ValueError("top generator degree is unknown for a truncated model")
    return max(g.degree for g in S.generators)
