"""Ready-made relative models: the projective-space family and the three
standard obstructions to sections."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .gca import FreeGCA, Generator, as_rational, tensor
from .relmodel import RelativeModel
from .sullivan import SullivanAlgebra


def _free(*gens) -> FreeGCA:
    return FreeGCA([Generator(n, d) for n, d in gens])


def cpn_relative_model(m: int, n: int, coeffs: Sequence) -> RelativeModel:
    """``L(x2, y_{2n+1}) -> L(x, y) (x) L(u2, v_{2m+1})`` with
    ``Dv = u^{m+1} + a_m u^m x + ... + a_0 x^{m+1}``.

    ``coeffs`` lists ``(a_m, ..., a_0)``.
    """
    if len(coeffs) != m + 1:
        raise ValueError(f"expected {m + 1} coefficients (a_m .. a_0), got {len(coeffs)}")
    a = [as_rational(c) for c in coeffs]
    base_alg = _free(("x", 2), ("y", 2 * n + 1))
    x = base_alg.gen("x")
    base = SullivanAlgebra(base_alg, {"y": x ** (n + 1)})
    fib_alg = _free(("u", 2), ("v", 2 * m + 1))
    fibre = SullivanAlgebra(fib_alg, {"v": fib_alg.gen("u") ** (m + 1)})
    tot = tensor(base_alg, fib_alg)
    tx, tu = tot.gen("x"), tot.gen("u")
    Dv = tu ** (m + 1)
    for j, c in enumerate(a):
        i = m - j  # c = a_i multiplies u^i x^{m+1-i}
        Dv = Dv + (tu ** i) * (tx ** (m + 1 - i)) * c
    return RelativeModel(base, fibre, {"v": Dv})


def path_loop_model(k: int, cutoff=None) -> RelativeModel:
    """``K(Q, 2k-1) -> PK(Q, 2k) -> K(Q, 2k)``: ``Dv = x``."""
    base_alg = _free(("x", 2 * k))
    fib_alg = _free(("v", 2 * k - 1))
    tot = tensor(base_alg, fib_alg)
    return RelativeModel(SullivanAlgebra(base_alg), SullivanAlgebra(fib_alg),
                         {"v": tot.gen("x")}, cutoff)


def wedge_over_product_model(cutoff: int = 8) -> RelativeModel:
    """The inclusion ``S3 v S3 -> S3 x S3`` converted to a fibration.

    The total algebra is the minimal model of the wedge through degree 8.
    """
    base_alg = _free(("a", 3), ("b", 3))
    fib_alg = _free(("v", 5), ("u", 7), ("w", 7))
    tot = tensor(base_alg, fib_alg)
    a, b, v = tot.gen("a"), tot.gen("b"), tot.gen("v")
    D = {"v": a * b, "u": a * v, "w": b * v}
    return RelativeModel(SullivanAlgebra(base_alg), SullivanAlgebra(fib_alg), D, cutoff)


def even_sphere_wedge_model(k: int = 1, cutoff: int = 6) -> RelativeModel:
    """``X -> S^{2k} v S^3 -> K(Q, 2k)`` by pinching off ``S^3``.

    ``Dv = x^2`` kills the square of the base class, ``Du = x e`` kills the
    product with the 3-sphere class.
    """
    base_alg = _free(("x", 2 * k))
    fib_alg = _free(("v", 4 * k - 1), ("e", 3), ("u", 2 * k + 2))
    tot = tensor(base_alg, fib_alg)
    x, e = tot.gen("x"), tot.gen("e")
    D = {"v": x ** 2, "u": x * e}
    return RelativeModel(SullivanAlgebra(base_alg), SullivanAlgebra(fib_alg), D, cutoff)


def cpn_pure_model(n: int) -> SullivanAlgebra:
    alg = _free(("x", 2), ("y", 2 * n + 1))
    return SullivanAlgebra(alg, {"y": alg.gen("x") ** (n + 1)})


def even_sphere_pure_model(n: int) -> SullivanAlgebra:
    alg = _free(("x", 2 * n), ("y", 4 * n - 1))
    return SullivanAlgebra(alg, {"y": alg.gen("x") ** 2})
