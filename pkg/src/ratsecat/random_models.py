"""Seeded random relative models over an evenly graded base with ``d = 0``
and fibre the truncated minimal model of a wedge of two odd spheres.

Generation runs in two stages.  Stage one gives every fibre generator, in
increasing degree, random mixed terms (both base and fibre factors) and
enforces ``D^2 = 0`` on it by solving for free coefficients.  Stage two adds
unknown pure-base parts to every generator at once and picks a random point
of the (linear) solution space of ``D^2 = 0``.  The fibre is built two
degrees past the requested cutoff so that the top kept generators are still
constrained by ``D^2`` of their neighbours; the result is then restricted.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .fp_algebra import FPAlgebra
from .gca import Element, FreeGCA, Generator, Monomial, embed, extend_derivation, tensor
from .linalg import nullspace, solve_affine
from .relmodel import RelativeModel
from .sullivan import SullivanAlgebra, build_minimal_model, substitute_into

LOOKAHEAD = 2


@dataclass
class GenerationInfo:
    seed: int
    base_degrees: Tuple[int, ...]
    sphere_degrees: Tuple[int, int]
    mixed_terms: int
    pure_base_freedom: int  # solution dimension for pure-base parts on kept generators


def wedge_cohomology(p: int, q: int) -> FPAlgebra:
    """``H*(S^p v S^q)`` for odd ``p, q``: two classes with zero products."""
    amb = FreeGCA([Generator("a", p), Generator("b", q)])
    a, b = amb.gen("a"), amb.gen("b")
    return FPAlgebra(amb, [a * b])


@lru_cache(maxsize=None)
def wedge_fibre(p: int, q: int, cutoff: int) -> SullivanAlgebra:
    return build_minimal_model(wedge_cohomology(p, q), cutoff)[0]


def _small_rational(rng: random.Random) -> Fraction:
    num = rng.choice([-3, -2, -1, 1, 2, 3])
    return Fraction(num, rng.choice([1, 1, 1, 2, 3]))


def _mixed_monomials(total: FreeGCA, degree: int, base_idx: List[int]) -> List[Monomial]:
    bset = set(base_idx)
    out = []
    for m in total.degree_basis(degree):
        has_base = any(m[i] for i in bset)
        has_fibre = any(k for i, k in enumerate(m) if i not in bset)
        if has_base and has_fibre:
            out.append(m)
    return out


def _coords(e: Element, column: Dict[Monomial, int]) -> Dict[int, Fraction]:
    out = {}
    for m, c in e.items():
        if m not in column:
            column[m] = len(column)
        out[column[m]] = c
    return out


def _random_point(rng: random.Random, particular: Dict[int, Fraction],
                  kernel: List[Dict[int, Fraction]]) -> Dict[int, Fraction]:
    point = dict(particular)
    for vec in kernel:
        t = _small_rational(rng) if rng.random() < 0.8 else Fraction(0)
        for i, c in vec.items():
            point[i] = point.get(i, Fraction(0)) + t * c
    return point


def _stage_one(rng: random.Random, total: FreeGCA, fibre: SullivanAlgebra,
               base_idx: List[int]) -> Tuple[Dict[str, Element], int]:
    D: Dict[str, Element] = {}
    mixed_count = 0
    for g in fibre.generators:
        dx = embed(fibre.differential[g.name], total)
        cands = _mixed_monomials(total, g.degree + 1, base_idx)
        for attempt in range(4):
            if attempt < 3 and cands:
                fixed = rng.sample(cands, min(len(cands), rng.randint(0, 2)))
                rest = [m for m in cands if m not in fixed]
                free = rng.sample(rest, min(len(rest), rng.randint(1, 4))) if rest else []
            else:
                fixed, free = [], list(cands)
            seed_val = dx + Element(total, {m: _small_rational(rng) for m in fixed})
            column: Dict[Monomial, int] = {}
            rhs_vec = _coords(-extend_derivation(seed_val, D, 1), column)
            cols = [_coords(extend_derivation(total.monomial_element(m), D, 1), column)
                    for m in free]
            by_row: List[Dict[int, Fraction]] = [{} for _ in column]
            for j, col in enumerate(cols):
                for i, c in col.items():
                    by_row[i][j] = c
            rhs = [rhs_vec.get(i, Fraction(0)) for i in range(len(column))]
            sol = solve_affine(by_row, rhs, len(free))
            if sol is None:
                continue
            point = _random_point(rng, *sol)
            val = seed_val + Element(total, {free[j]: c for j, c in point.items()})
            D[g.name] = val
            cset = set(cands)
            mixed_count += sum(1 for m in val.terms if m in cset)
            break
        else:
            raise RuntimeError(f"could not extend D over {g.name}")
    return D, mixed_count


def _stage_two(rng: random.Random, total: FreeGCA, base: FreeGCA, fibre: SullivanAlgebra,
               D: Dict[str, Element], keep_degree: int) -> Tuple[Dict[str, Element], int]:
    # unknowns: coefficients of pure-base monomials added to each D(v)
    unknowns: List[Tuple[str, Monomial]] = []
    for g in fibre.generators:
        for m in base.degree_basis(g.degree + 1):
            unknowns.append((g.name, embed(base.monomial_element(m), total)))
    if not unknowns:
        return D, 0
    users = {n: [g.name for g in fibre.generators
                 if any(m[total.index[n]] for m in D[g.name].terms)]
             for n in fibre.algebra.index}
    column: Dict[Monomial, int] = {}
    cols = []
    for name, p in unknowns:
        # D^2 is linear in the pure-base parts: perturbing D(name) by p changes
        # D(D(g)) by the derivation sending name -> p evaluated on D(g)
        col: Dict[int, Fraction] = {}
        for user in users[name]:
            delta = extend_derivation(D[user], {name: p}, 1)
            for k, c in _coords(delta, column).items():
                col[(user, k)] = c
        cols.append(col)
    rows: Dict[object, Dict[int, Fraction]] = {}
    for j, col in enumerate(cols):
        for key, c in col.items():
            rows.setdefault(key, {})[j] = c
    kernel = nullspace(rows.values(), len(unknowns))
    point = _random_point(rng, {}, kernel)
    out = dict(D)
    for j, c in point.items():
        name, p = unknowns[j]
        out[name] = out[name] + p * c
    kept = {j for j, (name, _) in enumerate(unknowns)
            if fibre.algebra.degree_of(name) <= keep_degree}
    freedom = sum(1 for vec in kernel if set(vec) & kept)
    return out, freedom


def random_relative_model(seed: int, cutoff: int = 14,
                          sphere_degrees: Optional[Tuple[int, int]] = None
                          ) -> Tuple[RelativeModel, GenerationInfo]:
    """A valid relative model with base ``(LW, 0)``, ``W`` even, 2-3 generators
    of degree <= 8, and fibre the minimal model of ``S^p v S^q`` through ``cutoff``."""
    rng = random.Random(seed)
    if sphere_degrees is None:
        sphere_degrees = rng.choice([(3, 3), (3, 5)])
    nbase = rng.randint(2, 3)
    degrees = tuple(sorted(rng.choice([2, 4, 6, 8]) for _ in range(nbase)))
    base_alg = FreeGCA([Generator(f"w{i + 1}", d) for i, d in enumerate(degrees)])
    fibre_big = wedge_fibre(*sphere_degrees, cutoff + LOOKAHEAD)
    total = tensor(base_alg, fibre_big.algebra)
    base_idx = [total.index[g.name] for g in base_alg.generators]
    D, mixed = _stage_one(rng, total, fibre_big, base_idx)
    D, freedom = _stage_two(rng, total, base_alg, fibre_big, D, cutoff)
    big = RelativeModel(SullivanAlgebra(base_alg), fibre_big, D, cutoff + LOOKAHEAD)
    M = restrict_relative(big, cutoff)
    return M, GenerationInfo(seed, degrees, sphere_degrees, mixed, freedom)


def restrict_relative(M: RelativeModel, cutoff: int) -> RelativeModel:
    """Drop fibre generators above ``cutoff``."""
    fibre = M.fibre.restrict(cutoff)
    total = tensor(M.base.algebra, fibre.algebra)
    D = {g.name: substitute_into(M.D(g.name), total) for g in fibre.generators}
    return RelativeModel(M.base, fibre, D, cutoff)
