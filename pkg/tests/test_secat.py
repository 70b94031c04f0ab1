from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from ratsecat.fp_algebra import BettiTable, FPAlgebra, betti_table
from ratsecat.gca import FreeGCA
from ratsecat.parsing import parse_poly
from ratsecat.relmodel import NoSectionCertificate, SectionWitness, solve_section, verify_section
from ratsecat.secat import (CPnFibration, baut_degrees, cpn_secat, depress, join_spheres,
                            universal_secat_verdict)

COEFF = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def sympy_depressed(m, coeffs):
    """Oracle: expand p(z - a_m/(m+1)) and return (a_m .. a_0) of the result."""
    z = sympy.symbols("z")
    a = [sympy.Rational(c.numerator, c.denominator) for c in coeffs]
    p = z ** (m + 1) + sum(a[m - i] * z ** i for i in range(m + 1))
    q = sympy.Poly(sympy.expand(p.subs(z, z - a[0] / (m + 1))), z)
    full = q.all_coeffs()  # high to low, leading 1
    return [Fraction(int(c.p), int(c.q)) for c in full[1:]]


class TestJoin:
    def test_cp2(self):
        assert join_spheres({0: 1, 2: 1, 4: 1}).dims == (5, 7, 7, 9)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_even_sphere(self, n):
        # S^{2n} * S^{2n} = S^{4n+1}
        assert join_spheres({0: 1, 2 * n: 1}).dims == (4 * n + 1,)

    def test_from_table(self):
        table = betti_table(FPAlgebra.truncated_polynomial("x", 2, 3), 8)
        assert join_spheres(table).to_json() == [5, 7, 7, 9]

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            join_spheres({0: 1, 3: 1})

    def test_point(self):
        assert len(join_spheres({0: 1})) == 0

    @given(st.dictionaries(st.integers(1, 8).map(lambda k: 2 * k), st.integers(0, 3), max_size=4))
    def test_cardinality_law(self, betti):
        table = BettiTable.from_dict({0: 1, **betti})
        assert len(join_spheres(table)) == sum(betti.values()) ** 2


class TestDepress:
    @given(st.integers(1, 3), st.lists(COEFF, min_size=4, max_size=4))
    def test_matches_sympy(self, m, coeffs):
        f = CPnFibration(m, m + 1, coeffs[:m + 1])
        assert list(depress(f).coeffs) == sympy_depressed(m, f.coeffs)

    @given(st.integers(1, 2), st.lists(COEFF, min_size=3, max_size=3))
    def test_verdict_invariant(self, m, coeffs):
        f = CPnFibration(m, m + 1, coeffs[:m + 1])
        assert cpn_secat(f).value == cpn_secat(depress(f)).value

    def test_depressed_example(self):
        assert depress(CPnFibration(2, 3, [3, 0, 0])).coeffs == (0, -3, 2)


class TestCPn:
    def test_no_root(self):
        v = cpn_secat(CPnFibration(1, 2, [0, 1]))
        assert v.value == 1 and v.evidence["polynomial"] == "z^2 + 1"

    def test_root_two(self):
        v = cpn_secat(CPnFibration(1, 2, [0, -4]))
        assert v.value == 0 and v.evidence["q"] == "2"
        assert v.evidence["witness"]["values"]["u"] == "2*x"

    def test_cubic(self):
        v = cpn_secat(CPnFibration(2, 3, [0, 0, -1]))
        assert v.value == 0 and v.evidence["q"] == "1"

    def test_shifted_cubic(self):
        v = cpn_secat(CPnFibration(2, 3, [3, 0, 0]))
        assert v.value == 0 and v.evidence["q"] == "1"
        assert v.evidence["witness"]["values"]["u"] == "0"

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (0, 2)])
    def test_family_bounds(self, m, n):
        with pytest.raises(ValueError):
            CPnFibration(m, n, [0] * (m + 1))

    def test_coefficient_count(self):
        with pytest.raises(ValueError):
            CPnFibration(1, 2, [0])

    @given(st.integers(1, 2), st.lists(COEFF, min_size=3, max_size=3))
    def test_agrees_with_solver(self, m, coeffs):
        f = CPnFibration(m, m + 1, coeffs[:m + 1])
        v = cpn_secat(f)
        res = solve_section(f.model())
        assert (v.value == 0) == isinstance(res, SectionWitness)
        if v.value == 1:
            assert isinstance(res, NoSectionCertificate)
        else:
            assert verify_section(f.model(), res)


class TestUniversal:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_projective_space(self, m):
        v = universal_secat_verdict(FPAlgebra.truncated_polynomial("x", 2, m + 1))
        assert v.value == 1
        steps = [s["value"] for s in v.evidence["stages"]]
        assert steps == ["at_least_1", 1]
        assert v.evidence["baut1_evenly_graded"]
        assert v.evidence["baut1_homotopy_degrees"] == list(range(4, 2 * m + 3, 2))

    def test_even_sphere(self):
        v = universal_secat_verdict(FPAlgebra.truncated_polynomial("x", 4, 2))
        assert v.value == 1 and v.evidence["join_spheres"] == [9]
        assert baut_degrees(FPAlgebra.truncated_polynomial("x", 4, 2)) == {8: 1}

    def test_not_complete_intersection(self):
        amb = FreeGCA.from_degrees({"x": 2, "y": 4})
        A = FPAlgebra(amb, [parse_poly(r, amb) for r in ["x^2", "x*y", "y^2"]])
        v = universal_secat_verdict(A)
        assert v.value == "undecided" and v.evidence["halperin"]["halperin"] is False

    def test_trivial(self):
        with pytest.raises(ValueError):
            universal_secat_verdict(FPAlgebra.trivial())

    def test_infinite(self):
        with pytest.raises(ValueError):
            universal_secat_verdict(FPAlgebra(FreeGCA.from_degrees({"x": 2}), []), 20)
