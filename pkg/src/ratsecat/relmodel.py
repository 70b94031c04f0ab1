"""Relative Sullivan models ``(LW, d_B) -> (LW (x) LV, D) -> (LV, d_X)`` and
their sections.

A section is an algebra map ``S: LW (x) LV -> LW`` restricting to the
identity on ``LW`` and commuting with the differentials.  ``solve_section``
introduces unknown coefficients for each ``S(v)`` in increasing degree,
eliminates linear constraints exactly, and settles a leftover univariate
constraint by the rational root test.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .gca import Element, FreeGCA, Monomial, embed, substitute, tensor
from .linalg import EchelonBasis, nullspace
from .polys import ParamPoly, format_univariate, rational_roots, root_candidates, evaluate
from .sullivan import (Diagnostic, SullivanAlgebra, cohomology, substitute_into,
                       validate_sullivan)

log = logging.getLogger(__name__)


class RelativeModel:
    """Base algebra, fibre algebra and total differential on fibre generators."""

    def __init__(self, base: SullivanAlgebra, fibre: SullivanAlgebra,
                 D: Mapping[str, Element], cutoff: Optional[int] = None):
        total_alg = tensor(base.algebra, fibre.algebra)
        unknown = set(D) - set(fibre.algebra.index)
        if unknown:
            raise KeyError(f"D given for non-fibre generators {sorted(unknown)}")
        diff: Dict[str, Element] = {}
        for w in base.generators:
            diff[w.name] = embed(base.differential[w.name], total_alg)
        for v in fibre.generators:
            val = D.get(v.name)
            if val is None:
                val = embed(fibre.differential[v.name], total_alg)
            elif val.algebra != total_alg:
                val = substitute_into(val, total_alg)
            diff[v.name] = val
        if cutoff is None:
            cuts = [c for c in (base.cutoff, fibre.cutoff) if c is not None]
            cutoff = min(cuts) if cuts else None
        self.base = base
        self.fibre = fibre
        self.cutoff = cutoff
        self.total = SullivanAlgebra(total_alg, diff, cutoff)
        self._fibre_mask = tuple(g.name in fibre.algebra.index for g in total_alg.generators)

    def __repr__(self):
        parts = [f"D{v.name}={self.D(v.name)}" for v in self.fibre.generators]
        return f"RelativeModel(base={self.base!r}, {', '.join(parts)}, cutoff={self.cutoff})"

    @property
    def total_algebra(self) -> FreeGCA:
        return self.total.algebra

    @property
    def fibre_names(self) -> List[str]:
        return [v.name for v in self.fibre.generators]

    @property
    def base_names(self) -> List[str]:
        return [w.name for w in self.base.generators]

    def D(self, name: str) -> Element:
        return self.total.differential[name]

    def include(self, e: Element) -> Element:
        """The inclusion ``J`` of the base into the total algebra."""
        return embed(e, self.total_algebra)

    def to_fibre(self, e: Element) -> Element:
        """Reduce modulo the base augmentation ideal."""
        return substitute(e, {w: self.fibre.algebra.zero() for w in self.base_names},
                          self.fibre.algebra)

    def base_part(self, e: Element) -> Element:
        """Component of ``e`` in ``LW (x) L^0 V``."""
        mask = self._fibre_mask
        return Element(self.total_algebra,
                       {m: c for m, c in e.items()
                        if not any(k for k, f in zip(m, mask) if f)})

    def fibre_word_length(self, mono: Monomial) -> int:
        return sum(k for k, f in zip(mono, self._fibre_mask) if f)

    def base_word_length(self, mono: Monomial) -> int:
        return sum(k for k, f in zip(mono, self._fibre_mask) if not f)

    def certifies(self, degree: int) -> bool:
        return self.cutoff is None or degree <= self.cutoff


def product_model(base: SullivanAlgebra, fibre: SullivanAlgebra,
                  cutoff: Optional[int] = None) -> RelativeModel:
    return RelativeModel(base, fibre, {}, cutoff)


def validate_relative(M: RelativeModel) -> Optional[Diagnostic]:
    """None when the three relative-model conditions hold within the cutoff."""
    for label, alg in (("base", M.base), ("fibre", M.fibre)):
        diag = validate_sullivan(alg)
        if diag is not None:
            return Diagnostic(diag.generator, diag.degree, f"{label}: {diag.reason}")
    for v in M.fibre.generators:
        Dv = M.D(v.name)
        if Dv and not Dv.is_homogeneous():
            return Diagnostic(v.name, v.degree, f"D({v.name}) = {Dv} is not homogeneous")
        if Dv and Dv.degree != v.degree + 1:
            return Diagnostic(v.name, v.degree,
                              f"D({v.name}) has degree {Dv.degree}, expected {v.degree + 1}")
        if M.to_fibre(Dv) != M.fibre.differential[v.name]:
            return Diagnostic(v.name, v.degree,
                              f"D({v.name}) does not reduce to d_X({v.name}) modulo the base")
    for g in M.total_algebra.generators:
        if not M.certifies(g.degree + 2):
            continue
        dd = M.total.d(M.D(g.name))
        if dd:
            return Diagnostic(g.name, g.degree, f"D^2({g.name}) = {dd} is not zero")
    return None


# ---------------------------------------------------------------- ideals

@dataclass
class StabilityResult:
    stable: bool
    failing: List[str]

    def __bool__(self):
        return self.stable


def ideal_stability_check(M: RelativeModel) -> StabilityResult:
    """Is the ideal generated by all fibre generators closed under ``D``?

    ``D(v)`` lies in that ideal exactly when its pure-base component vanishes.
    """
    failing = [v for v in M.fibre_names if M.base_part(M.D(v))]
    return StabilityResult(not failing, failing)


def _ideal_is_stable(M: RelativeModel, names: Sequence[str]) -> List[str]:
    alg = M.total_algebra
    idx = [alg.index[n] for n in names]
    bad = []
    for n in names:
        for mono in M.D(n).terms:
            if not any(mono[i] for i in idx):
                bad.append(n)
                break
    return bad


def quotient_model(M: RelativeModel, t: int) -> RelativeModel:
    """Divide out the ideal generated by the first ``t - 1`` fibre generators.

    Generators are numbered from 1 in canonical (non-decreasing degree) order.
    """
    if t < 1:
        raise ValueError("t counts fibre generators from 1")
    names = M.fibre_names
    killed = names[:t - 1]
    bad = _ideal_is_stable(M, killed)
    if bad:
        raise ValueError(f"the ideal of {killed} is not D-stable (fails at {bad})")
    keep = [M.fibre.algebra.generator(n) for n in names[t - 1:]]
    fib_alg = FreeGCA(keep)
    zero_f = {n: fib_alg.zero() for n in killed}
    d_x = {g.name: substitute(M.fibre.differential[g.name], zero_f, fib_alg) for g in keep}
    fibre = SullivanAlgebra(fib_alg, d_x, M.fibre.cutoff)
    total_alg = tensor(M.base.algebra, fib_alg)
    zero_t = {n: total_alg.zero() for n in killed}
    D = {g.name: substitute(M.D(g.name), zero_t, total_alg) for g in keep}
    return RelativeModel(M.base, fibre, D, M.cutoff)


@dataclass
class InductionStep:
    index: int
    generator: str
    degree: int
    reduced_differential: str
    base_part_zero: bool


def odd_spheres_hypotheses(M: RelativeModel) -> List[str]:
    """Hypotheses of the odd-spheres section theorem that ``M`` fails, if any.

    The claim that ``D(v_k)`` has no mixed term is re-verified termwise.
    """
    problems = []
    if any(M.base.differential[w] for w in M.base_names):
        problems.append("base differential is not zero")
    if any(g.is_odd for g in M.base.generators):
        problems.append("base has odd generators")
    if any(not g.is_odd for g in M.fibre.generators):
        problems.append("fibre has even generators")
    names = M.fibre_names
    if len(names) < 2:
        problems.append("fibre has fewer than two generators")
        return problems
    v1, v2 = names[0], names[1]
    if M.fibre.differential[v1] or M.fibre.differential[v2]:
        problems.append("the two lowest fibre generators are not closed")
        return problems
    fib = M.fibre.algebra
    prod = fib.gen(v1) * fib.gen(v2)
    mono = next(iter(prod.terms))
    carriers = [n for n in names if M.fibre.differential[n].coefficient(mono)]
    if not carriers:
        problems.append(f"no generator with {v1}*{v2} in its differential within the cutoff")
        return problems
    vk = carriers[0]
    tm = substitute_into(prod, M.total_algebra)
    tmono = next(iter(tm.terms))
    for m in M.D(vk).terms:
        if m != tmono and M.base_word_length(m) and M.fibre_word_length(m):
            problems.append(f"D({vk}) has a mixed term")
            break
    return problems


def inductive_stability(M: RelativeModel) -> List[InductionStep]:
    """Run the induction over fibre generators: quotient by ``v_1..v_{t-1}``
    and check that the reduced ``D(v_t)`` has no base component.

    Stops at the first generator whose check fails.
    """
    problems = odd_spheres_hypotheses(M)
    if problems:
        log.warning("odd-spheres hypotheses fail: %s", "; ".join(problems))
    steps = []
    for t, name in enumerate(M.fibre_names, start=1):
        Q = quotient_model(M, t)
        red = Q.D(name)
        ok = not Q.base_part(red)
        steps.append(InductionStep(t, name, M.fibre.algebra.degree_of(name), str(red), ok))
        if not ok:
            break
    return steps


# ---------------------------------------------------------------- sections

@dataclass
class SectionWitness:
    values: Dict[str, Element]

    def to_json(self) -> dict:
        return {"values": {k: str(v) for k, v in sorted(self.values.items())}}


@dataclass
class NoSectionCertificate:
    reason: str  # "degree_obstruction" | "non_injective" | "no_rational_root" | "linear_obstruction"
    evidence: dict

    def to_json(self) -> dict:
        return {"reason": self.reason, "evidence": self.evidence}


@dataclass
class Undecided:
    reason: str
    residual: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"reason": self.reason, "residual": self.residual}


SectionResult = Union[SectionWitness, NoSectionCertificate, Undecided]


def zero_section(M: RelativeModel) -> SectionWitness:
    """``S(w) = w``, ``S(v) = 0``; valid exactly when the fibre ideal is stable."""
    res = ideal_stability_check(M)
    if not res.stable:
        raise ValueError(f"fibre ideal is not D-stable (fails at {res.failing})")
    base = M.base.algebra
    return SectionWitness({v: base.zero() for v in M.fibre_names})


def apply_section(M: RelativeModel, values: Mapping[str, Element], e: Element) -> Element:
    base = M.base.algebra
    assignment = {v: values.get(v, base.zero()) for v in M.fibre_names}
    return substitute(e, assignment, base)


def verify_section(M: RelativeModel, S: SectionWitness) -> bool:
    """Check ``S o J = id`` and ``S o D = d_B o S`` on every certified generator."""
    base = M.base.algebra
    for name, val in S.values.items():
        if name not in M.fibre.algebra.index:
            return False
        if val.algebra != base:
            return False
        if val and val.degree != M.fibre.algebra.degree_of(name):
            return False
    for w in M.base_names:
        if apply_section(M, S.values, M.include(base.gen(w))) != base.gen(w):
            return False
    for g in M.total_algebra.generators:
        if not M.certifies(g.degree + 1):
            continue
        img = apply_section(M, S.values, M.total_algebra.gen(g.name))
        lhs = apply_section(M, S.values, M.D(g.name))
        if lhs != M.base.d(img):
            return False
    return True


class _LinearSystem:
    """Polynomial constraints with linear ones eliminated by substitution."""

    def __init__(self):
        self.subst: Dict[int, ParamPoly] = {}
        self.residual: List[ParamPoly] = []

    def copy(self) -> "_LinearSystem":
        out = _LinearSystem()
        out.subst = dict(self.subst)
        out.residual = list(self.residual)
        return out

    def assign(self, var: int, value: ParamPoly):
        step = {var: value}
        self.subst = {k: v.substitute(step) for k, v in self.subst.items()}
        self.subst[var] = value

    def add(self, eqs: Sequence[ParamPoly]) -> Optional[ParamPoly]:
        """Add equations; return an inconsistent constant equation, if any."""
        queue = list(eqs) + self.residual
        self.residual = []
        while True:
            progress = False
            rest = []
            for e in queue:
                e = e.substitute(self.subst)
                if not e:
                    continue
                if e.is_constant():
                    self.residual = rest
                    return e
                if e.total_degree() == 1:
                    lin = e.linear_part()
                    var = min(lin)
                    value = (ParamPoly.var(var) * lin[var] - e) * (1 / lin[var])
                    self.assign(var, value)
                    progress = True
                else:
                    rest.append(e)
            queue = rest
            if not progress:
                self.residual = rest
                return None


def _base_values(values: Mapping[str, Element], system: _LinearSystem,
                 free_value: Fraction = Fraction(0)) -> Dict[str, Element]:
    """Concrete Fraction-valued section values, unresolved unknowns set to 0."""
    out = {}
    for name, val in values.items():
        def settle(c):
            p = ParamPoly.lift(c).substitute(system.subst)
            rest = {v: ParamPoly.const(free_value) for v in p.variables()}
            return p.substitute(rest).constant_term()
        out[name] = val.map_coefficients(settle)
    return out


def solve_section(M: RelativeModel) -> SectionResult:
    """Search for a section, or produce a certificate that none exists."""
    base = M.base.algebra
    values: Dict[str, Element] = {}
    system = _LinearSystem()
    nvars = 0
    for name in M.fibre_names:
        deg = M.fibre.algebra.degree_of(name)
        slot = base.degree_basis(deg)
        terms = {}
        for mono in slot:
            terms[mono] = ParamPoly.var(nvars)
            nvars += 1
        values[name] = Element(base, terms)
        if not M.certifies(deg + 1):
            continue
        defect = (apply_section(M, values, M.D(name)) - M.base.d(values[name]))
        bad = system.add([c if isinstance(c, ParamPoly) else ParamPoly.const(c)
                          for _, c in defect.items()])
        if bad is not None:
            return _obstruction(M, name, deg, slot, values, system, bad)
    return _finish(M, values, system, top_level=True)


def _obstruction(M, name, deg, slot, values, system, bad) -> SectionResult:
    defect = apply_section(M, _base_values(values, system), M.D(name))
    if not slot and all(not ParamPoly.lift(c).substitute(system.subst).variables()
                        for v in values.values() for _, c in v.items()):
        return NoSectionCertificate("degree_obstruction", {
            "generator": name,
            "degree": deg,
            "image_of_differential": str(defect),
            "note": f"the base has no nonzero element of degree {deg}",
        })
    bound = (M.cutoff - 1) if M.cutoff is not None else _default_injectivity_range(M)
    inj = pullback_injectivity_check(M, bound)
    if not inj.injective:
        return NoSectionCertificate("non_injective", inj.to_json())
    return NoSectionCertificate("linear_obstruction", {
        "generator": name,
        "degree": deg,
        "inconsistent_equation": f"{bad.constant_term()} = 0",
    })


def _default_injectivity_range(M: RelativeModel) -> int:
    return max((g.degree for g in M.total_algebra.generators), default=0) + 2


def _finish(M: RelativeModel, values: Dict[str, Element], system: _LinearSystem,
            top_level: bool) -> SectionResult:
    if not system.residual:
        witness = SectionWitness(_base_values(values, system))
        if not verify_section(M, witness):
            raise AssertionError("internal error: solved section fails verification")
        return witness
    univariate = [e for e in system.residual if len(e.variables()) == 1]
    if not univariate:
        return Undecided("multivariate nonlinear constraints",
                         [str(e) for e in system.residual])
    var, coeffs = univariate[0].univariate()
    roots = set(rational_roots(coeffs))
    for e in univariate[1:]:
        v2, c2 = e.univariate()
        if v2 == var:
            roots &= set(rational_roots(c2))
    if not roots:
        if top_level and all(e.univariate()[0] == var for e in univariate) \
                and len(system.residual) == len(univariate):
            polys = [format_univariate(e.univariate()[1]) for e in univariate]
            return NoSectionCertificate("no_rational_root", {
                "unknown": f"q{var}",
                "polynomials": polys,
                "coefficients": [[str(c) for c in e.univariate()[1]] for e in univariate],
                "candidates_tested": [str(c) for c in root_candidates(coeffs)],
            })
        return Undecided("univariate constraint without a common rational root "
                         "alongside other constraints", [str(e) for e in system.residual])
    for r in sorted(roots, reverse=True):
        branch = system.copy()
        branch.assign(var, ParamPoly.const(r))
        if branch.add([]) is not None:
            continue
        result = _finish(M, values, branch, top_level=False)
        if isinstance(result, SectionWitness):
            return result
    return Undecided("every rational candidate fails further constraints",
                     [str(e) for e in system.residual])


def check_certificate(M: RelativeModel, cert: NoSectionCertificate) -> bool:
    """Independently re-check a no-section certificate."""
    ev = cert.evidence
    if cert.reason == "no_rational_root":
        for coeffs in ev["coefficients"]:
            cs = [Fraction(c) for c in coeffs]
            if any(evaluate(cs, z) == 0 for z in root_candidates(cs)):
                return False
        return True
    if cert.reason == "degree_obstruction":
        deg = ev["degree"]
        if M.base.algebra.degree_basis(deg):
            return False
        # lower generators with empty slots are forced to zero as well
        forced = {v: M.base.algebra.zero() for v in M.fibre_names
                  if not M.base.algebra.degree_basis(M.fibre.algebra.degree_of(v))}
        if any(M.fibre.algebra.degree_of(v) < deg and v not in forced for v in M.fibre_names
               if _appears(M, ev["generator"], v)):
            return False
        return bool(apply_section(M, forced, M.D(ev["generator"])))
    if cert.reason == "non_injective":
        return _recheck_dying_class(M, ev)
    return False


def _appears(M: RelativeModel, target: str, name: str) -> bool:
    idx = M.total_algebra.index[name]
    return any(m[idx] for m in M.D(target).terms)


# ---------------------------------------------------------------- injectivity

@dataclass
class InjectivityResult:
    injective: bool
    degree: Optional[int]
    witness: Optional[Element]
    max_degree: int

    def to_json(self) -> dict:
        return {"injective": self.injective, "degree": self.degree,
                "witness_class": str(self.witness) if self.witness is not None else None,
                "max_degree": self.max_degree}


def _coords(e: Element, column: Dict[Monomial, int]) -> Dict[int, Fraction]:
    return {column[m]: c for m, c in e.items()}


def pullback_injectivity_check(M: RelativeModel, max_degree: int) -> InjectivityResult:
    """Find a nonzero base cohomology class that becomes exact in the total algebra."""
    if not M.certifies(max_degree + 1):
        raise ValueError(f"degree {max_degree} is beyond the certified range (cutoff {M.cutoff})")
    total = M.total
    for n in range(1, max_degree + 1):
        reps = cohomology(M.base, n).representatives if M.base.certifies(n + 1) else []
        if not reps:
            continue
        column = {m: i for i, m in enumerate(M.total_algebra.degree_basis(n))}
        bnd = EchelonBasis()
        for m in M.total_algebra.degree_basis(n - 1):
            bnd.add(_coords(total.d_monomial(m), column))
        rems = [bnd.reduce(_coords(M.include(z), column)) for z in reps]
        rows: Dict[int, Dict[int, Fraction]] = {}
        for j, r in enumerate(rems):
            for i, c in r.items():
                rows.setdefault(i, {})[j] = c
        kernel = nullspace(rows.values(), len(reps))
        if kernel:
            vec = kernel[0]
            witness = M.base.algebra.zero()
            for j, c in vec.items():
                witness = witness + reps[j] * c
            return InjectivityResult(False, n, witness, max_degree)
    return InjectivityResult(True, None, None, max_degree)


def _recheck_dying_class(M: RelativeModel, ev: dict) -> bool:
    from .parsing import parse_poly
    n = ev["degree"]
    z = parse_poly(ev["witness_class"], M.base.algebra)
    if M.base.d(z):
        return False
    base_column = {m: i for i, m in enumerate(M.base.algebra.degree_basis(n))}
    base_bnd = EchelonBasis()
    for m in M.base.algebra.degree_basis(n - 1):
        base_bnd.add(_coords(M.base.d_monomial(m), base_column))
    if base_bnd.contains(_coords(z, base_column)):
        return False
    column = {m: i for i, m in enumerate(M.total_algebra.degree_basis(n))}
    bnd = EchelonBasis()
    for m in M.total_algebra.degree_basis(n - 1):
        bnd.add(_coords(M.total.d_monomial(m), column))
    return bnd.contains(_coords(M.include(z), column))
