"""Commutative polynomials in solver unknowns, and exact rational roots."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

# A term key is a sorted tuple of (variable, exponent) pairs.
Key = Tuple[Tuple[int, int], ...]


def _mul_keys(a: Key, b: Key) -> Key:
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


class ParamPoly:
    """Polynomial with Fraction coefficients in integer-indexed unknowns."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Key, Fraction]] = None):
        self.terms: Dict[Key, Fraction] = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "ParamPoly":
        return cls({(): c})

    @classmethod
    def var(cls, i: int) -> "ParamPoly":
        return cls({((i, 1),): 1})

    @staticmethod
    def lift(x) -> "ParamPoly":
        return x if isinstance(x, ParamPoly) else ParamPoly.const(x)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return self.terms == ParamPoly.lift(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = ParamPoly.lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return ParamPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-ParamPoly.lift(other))

    def __rsub__(self, other):
        return ParamPoly.lift(other) - self

    def __mul__(self, other):
        other = ParamPoly.lift(other)
        out: Dict[Key, Fraction] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = _mul_keys(ka, kb)
                out[k] = out.get(k, 0) + ca * cb
        return ParamPoly(out)

    __rmul__ = __mul__

    def variables(self) -> set:
        return {v for k in self.terms for v, _ in k}

    def total_degree(self) -> int:
        return max((sum(e for _, e in k) for k in self.terms), default=0)

    def is_constant(self) -> bool:
        return all(not k for k in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def linear_part(self) -> Dict[int, Fraction]:
        return {k[0][0]: c for k, c in self.terms.items() if len(k) == 1 and k[0][1] == 1}

    def substitute(self, values: Mapping[int, "ParamPoly"]) -> "ParamPoly":
        if not self.variables() & set(values):
            return self
        out = ParamPoly()
        for k, c in self.terms.items():
            term = ParamPoly.const(c)
            for v, e in k:
                base = values[v] if v in values else ParamPoly.var(v)
                for _ in range(e):
                    term = term * base
            out = out + term
        return out

    def univariate(self) -> Tuple[int, List[Fraction]]:
        """``(variable, coefficients low->high)`` for a one-variable polynomial."""
        vs = self.variables()
        if len(vs) != 1:
            raise ValueError("not univariate")
        v = vs.pop()
        deg = self.total_degree()
        coeffs = [Fraction(0)] * (deg + 1)
        for k, c in self.terms.items():
            coeffs[k[0][1] if k else 0] += c
        return v, coeffs

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(f"q{v}" + (f"^{e}" if e > 1 else "") for v, e in k)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------- univariate

def trim(coeffs: Sequence[Fraction]) -> List[Fraction]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def evaluate(coeffs: Sequence[Fraction], z: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def primitive_integer(coeffs: Sequence[Fraction]) -> List[int]:
    """Scale to coprime integer coefficients with positive leading term."""
    cs = trim(coeffs)
    if not cs:
        raise ValueError("zero polynomial")
    lcm = 1
    for c in cs:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in cs]
    g = 0
    for i in ints:
        g = gcd(g, i)
    ints = [i // g for i in ints]
    if ints[-1] < 0:
        ints = [-i for i in ints]
    return ints


def root_candidates(coeffs: Sequence[Fraction]) -> List[Fraction]:
    """Every rational that could be a root, by the rational root test."""
    ints = primitive_integer(coeffs)
    cands = set()
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        cands.add(Fraction(0))
    const, lead = ints[low], ints[-1]
    if low < len(ints) - 1:
        for p in _divisors(const):
            for q in _divisors(lead):
                cands.add(Fraction(p, q))
                cands.add(Fraction(-p, q))
    return sorted(cands)


def rational_roots(coeffs: Sequence[Fraction]) -> List[Fraction]:
    """All distinct rational roots of a nonzero polynomial, ascending.

    ``coeffs`` run from the constant term upward.
    """
    cs = trim(coeffs)
    if not cs:
        raise ValueError("the zero polynomial has every rational as a root")
    return [z for z in root_candidates(cs) if evaluate(cs, z) == 0]


def format_univariate(coeffs: Sequence[Fraction], var: str = "z") -> str:
    from .gca import format_rational
    cs = trim(coeffs)
    if not cs:
        return "0"
    parts = []
    for e in range(len(cs) - 1, -1, -1):
        c = cs[e]
        if not c:
            continue
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        mag = abs(c)
        body = format_rational(mag) if not mono else (mono if mag == 1 else f"{format_rational(mag)}*{mono}")
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_coefficient_list(items: Iterable) -> List[Fraction]:
    from .gca import as_rational
    return [as_rational(x) for x in items]
