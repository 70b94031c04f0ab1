from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ratsecat.catalog import (cpn_relative_model, even_sphere_wedge_model, path_loop_model,
                              wedge_over_product_model)
from ratsecat.gca import FreeGCA, Generator, tensor
from ratsecat.random_models import random_relative_model
from ratsecat.relmodel import (NoSectionCertificate, RelativeModel, SectionWitness, Undecided,
                               check_certificate, ideal_stability_check, inductive_stability,
                               odd_spheres_hypotheses, product_model,
                               pullback_injectivity_check, quotient_model, solve_section,
                               validate_relative, verify_section, zero_section)
from ratsecat.sullivan import SullivanAlgebra, cohomology

COEFF = st.fractions(min_value=-3, max_value=3, max_denominator=2)


def has_rational_root(coeffs_high_to_low):
    z = sympy.symbols("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z ** i
               for i, c in enumerate(reversed(coeffs_high_to_low)))
    return bool(sympy.roots(sympy.Poly(expr, z), filter="Q"))


class TestValidation:
    @pytest.mark.parametrize("M", [cpn_relative_model(1, 2, [0, 1]), path_loop_model(1, 10),
                                   wedge_over_product_model(), even_sphere_wedge_model()],
                             ids=["cpn", "path", "wedge", "even"])
    def test_catalog_models_are_valid(self, M):
        assert validate_relative(M) is None

    def test_wrong_reduction(self):
        base = SullivanAlgebra(FreeGCA([Generator("x", 2)]))
        fib = SullivanAlgebra(FreeGCA([Generator("u", 2), Generator("v", 3)]),
                              {"v": FreeGCA([Generator("u", 2), Generator("v", 3)]).gen("u") ** 2})
        tot = tensor(base.algebra, fib.algebra)
        M = RelativeModel(base, fib, {"v": tot.gen("x") ** 2})
        diag = validate_relative(M)
        assert diag is not None and diag.generator == "v" and "reduce" in diag.reason

    def test_wrong_degree(self):
        base = SullivanAlgebra(FreeGCA([Generator("x", 2)]))
        fib = SullivanAlgebra(FreeGCA([Generator("v", 5)]))
        tot = tensor(base.algebra, fib.algebra)
        diag = validate_relative(RelativeModel(base, fib, {"v": tot.gen("x") ** 2}))
        assert diag is not None and "degree" in diag.reason

    def test_d_squared_failure(self):
        base = SullivanAlgebra(FreeGCA([Generator("x", 2)]))
        fib_alg = FreeGCA([Generator("v", 3), Generator("w", 4)])
        fib = SullivanAlgebra(fib_alg)
        tot = tensor(base.algebra, fib_alg)
        M = RelativeModel(base, fib, {"v": tot.gen("x") ** 2, "w": tot.gen("x") * tot.gen("v")})
        diag = validate_relative(M)
        assert diag is not None and diag.generator == "w"

    def test_unknown_generator(self):
        base = SullivanAlgebra(FreeGCA([Generator("x", 2)]))
        fib = SullivanAlgebra(FreeGCA([Generator("v", 3)]))
        with pytest.raises(KeyError):
            RelativeModel(base, fib, {"x": base.algebra.gen("x")})


class TestStability:
    def test_product_is_stable(self):
        base = SullivanAlgebra(FreeGCA([Generator("x", 2)]))
        M = product_model(base, SullivanAlgebra(FreeGCA([Generator("v", 3)])))
        assert ideal_stability_check(M)
        assert verify_section(M, zero_section(M))

    def test_path_loop_unstable(self):
        M = path_loop_model(1, 10)
        res = ideal_stability_check(M)
        assert not res and res.failing == ["v"]
        with pytest.raises(ValueError):
            zero_section(M)

    def test_quotient_first_is_identity(self):
        M, _ = random_relative_model(3)
        Q = quotient_model(M, 1)
        assert Q.fibre_names == M.fibre_names
        assert all(Q.D(n) == M.D(n) for n in M.fibre_names)

    def test_quotient_of_random_model(self):
        M, _ = random_relative_model(5)
        Q = quotient_model(M, 3)
        assert Q.fibre_names == M.fibre_names[2:]
        assert validate_relative(Q) is None

    def test_quotient_bounds(self):
        M, _ = random_relative_model(5)
        with pytest.raises(ValueError):
            quotient_model(M, 0)
        last = quotient_model(M, len(M.fibre_names) + 1)
        assert last.fibre_names == []

    def test_quotient_requires_stable_ideal(self):
        with pytest.raises(ValueError):
            quotient_model(path_loop_model(1, 10), 2)

    def test_inductive_stability_random(self):
        M, _ = random_relative_model(11)
        assert odd_spheres_hypotheses(M) == []
        steps = inductive_stability(M)
        assert len(steps) == len(M.fibre_names) and all(s.base_part_zero for s in steps)

    def test_hypotheses_reported(self, caplog):
        M = path_loop_model(1, 10)
        problems = odd_spheres_hypotheses(M)
        assert "fibre has fewer than two generators" in problems
        with caplog.at_level("WARNING"):
            steps = inductive_stability(M)
        assert not steps[-1].base_part_zero
        assert "hypotheses" in caplog.text


class TestSections:
    def test_verify_rejects_bad_value(self):
        M = cpn_relative_model(1, 2, [0, -4])
        x = M.base.algebra.gen("x")
        assert verify_section(M, SectionWitness({"u": x * 2, "v": M.base.algebra.zero()}))
        assert not verify_section(M, SectionWitness({"u": x, "v": M.base.algebra.zero()}))

    def test_verify_rejects_wrong_degree(self):
        M = cpn_relative_model(1, 2, [0, -4])
        x = M.base.algebra.gen("x")
        assert not verify_section(M, SectionWitness({"u": x * x}))
        assert not verify_section(M, SectionWitness({"q": x}))

    def test_cpn_witness(self):
        res = solve_section(cpn_relative_model(2, 3, [0, 0, -1]))
        assert isinstance(res, SectionWitness)
        assert str(res.values["u"]) == "x"

    def test_cpn_no_root_certificate(self):
        M = cpn_relative_model(1, 2, [0, 1])
        res = solve_section(M)
        assert isinstance(res, NoSectionCertificate) and res.reason == "no_rational_root"
        assert check_certificate(M, res)
        # tampered certificate must fail the recheck
        bad = NoSectionCertificate("no_rational_root", {"coefficients": [["-1", "0", "1"]]})
        assert not check_certificate(M, bad)

    @settings(max_examples=40)
    @given(st.integers(1, 2), st.lists(COEFF, min_size=3, max_size=3))
    def test_cpn_sections_match_root_oracle(self, m, coeffs):
        coeffs = coeffs[:m + 1]
        M = cpn_relative_model(m, m + 1, coeffs)
        res = solve_section(M)
        exists = has_rational_root([Fraction(1)] + coeffs)
        assert isinstance(res, SectionWitness) == exists
        if exists:
            assert verify_section(M, res)
        else:
            assert check_certificate(M, res)

    def test_path_loop_degree_obstruction(self):
        M = path_loop_model(1, 10)
        res = solve_section(M)
        assert isinstance(res, NoSectionCertificate) and res.reason == "degree_obstruction"
        assert res.evidence["generator"] == "v"
        assert check_certificate(M, res)

    def test_random_models_have_sections(self):
        for seed in range(3):
            M, _ = random_relative_model(seed, cutoff=10)
            res = solve_section(M)
            assert isinstance(res, SectionWitness) and verify_section(M, res)

    def test_json_shapes(self):
        res = solve_section(path_loop_model(1, 10))
        assert set(res.to_json()) == {"reason", "evidence"}
        assert Undecided("x").to_json() == {"reason": "x", "residual": []}


class TestInjectivity:
    def test_wedge_over_product(self):
        M = wedge_over_product_model()
        inj = pullback_injectivity_check(M, 7)
        assert not inj.injective and inj.degree == 6
        ab = M.base.algebra.gen("a") * M.base.algebra.gen("b")
        assert inj.witness and set(inj.witness.terms) == set(ab.terms)
        res = solve_section(M)
        assert isinstance(res, NoSectionCertificate)
        assert check_certificate(M, res)

    def test_even_sphere_wedge(self):
        M = even_sphere_wedge_model()
        inj = pullback_injectivity_check(M, 5)
        assert not inj.injective and inj.degree == 4
        res = solve_section(M)
        assert isinstance(res, NoSectionCertificate)
        assert check_certificate(M, res)

    def test_dying_class_really_dies(self):
        M = wedge_over_product_model()
        inj = pullback_injectivity_check(M, 7)
        # oracle: class is nonzero in the base, yet total cohomology in degree 6 is smaller
        assert cohomology(M.base, 6).dimension == 1
        assert cohomology(M.total, 6).dimension == 0
        assert inj.to_json()["witness_class"] == str(inj.witness)

    def test_product_is_injective(self):
        base = SullivanAlgebra(FreeGCA([Generator("x", 2)]))
        M = product_model(base, SullivanAlgebra(FreeGCA([Generator("v", 3)])), cutoff=10)
        assert pullback_injectivity_check(M, 8).injective

    def test_range_checked(self):
        with pytest.raises(ValueError):
            pullback_injectivity_check(wedge_over_product_model(), 8)

    def test_forged_certificate_rejected(self):
        M = wedge_over_product_model()
        forged = NoSectionCertificate("non_injective", {"degree": 3, "witness_class": "a",
                                                        "injective": False, "max_degree": 7})
        assert not check_certificate(M, forged)
