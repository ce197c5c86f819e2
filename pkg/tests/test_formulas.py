from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from commdom.commuting import proper_commuting_graph, proper_enhanced_power_graph
from commdom.domination import exact_domination_number, exact_total_domination_number
from commdom.formulas import (
    EXACT_GAMMA,
    NONEXISTENCE,
    FormulaIntegrityError,
    FormulaPrediction,
    bound_haji,
    bound_log,
    bound_lower_M,
    bound_upper_TU,
    classify_order2_centralizer,
    epg_nilpotent_min,
    equality_fingerprint,
    gen_dihedral_gamma,
    generalized_dihedral_base,
    group_facts,
    nilpotent_gamma,
    p4_gamma,
    pgl2_gamma,
    pq_gamma,
    predictions_for_group,
    psl2_gamma_t,
    quaternion_gamma_t,
    ratio_spectrum_witness,
    suzuki_gamma,
    suzuki_terms,
)
from commdom.groups.core import compute_invariants
from commdom.groups.families import abelian_product, build, cyclic, generalized_dihedral


def by_id(preds: list[FormulaPrediction]) -> dict[str, FormulaPrediction]:
    return {p.theorem_id: p for p in preds}


def gamma(text: str) -> int:
    return exact_domination_number(proper_commuting_graph(build(text))).value


def gamma_t(text: str):
    return exact_total_domination_number(proper_commuting_graph(build(text))).value


class TestBounds:
    def test_lower(self):
        assert bound_lower_M(compute_invariants(build("heisenberg(3)"))).value == 4
        assert bound_lower_M(compute_invariants(build("symmetric(3)"))).value == 3

    def test_cyclic_cover(self):
        assert bound_upper_TU(compute_invariants(build("quaternion(8)"))).value == 3
        assert bound_upper_TU(compute_invariants(build("dihedral(8)"))).value == 5
        assert bound_upper_TU(compute_invariants(build("symmetric(3)"))).value == 4

    @pytest.mark.parametrize("text,value,case", [("symmetric(3)", 4, "S3"), ("dihedral(8)", 3, "D8"), ("quaternion(8)", 3, "Q8")])
    def test_half_noncentral_equality_cases(self, text, value, case):
        g = build(text)
        p = bound_haji(compute_invariants(g), g)
        assert p.value == value == gamma(text)
        assert p.detail["equality_case"] == case

    def test_half_noncentral_strict(self):
        g = build("dihedral(10)")
        p = bound_haji(compute_invariants(g), g)
        assert p.value == 7 > gamma("dihedral(10)") == 6
        assert p.detail["equality_case"] is None

    def test_log_bound(self):
        q8 = bound_log(compute_invariants(build("quaternion(8)")), False)
        assert q8.value == pytest.approx(3.0)
        h5 = bound_log(compute_invariants(build("heisenberg(5)")), False)
        assert h5.detail["d"] == 20
        assert h5.value == pytest.approx(120 * (1 + math.log(21)) / 21)
        s4 = bound_log(compute_invariants(build("symmetric(4)")), False)
        assert s4.detail["floor"] >= gamma("symmetric(4)")

    def test_abelian_not_applicable(self):
        inv = compute_invariants(cyclic(6))
        assert not bound_lower_M(inv).applicable
        assert not bound_haji(inv).applicable


class TestGeneralizedDihedral:
    @pytest.mark.parametrize("base,value", [("cyclic(9)", 10), ("cyclic(15)", 16), ("abelian(2,4)", 3), ("abelian(3,3)", 10)])
    def test_formula_matches_solver(self, base, value):
        p = gen_dihedral_gamma(build(base))
        assert p.value == value
        assert gamma(f"gendihedral({base})") == value

    def test_base_detection(self):
        assert len(generalized_dihedral_base(build("symmetric(3)"))) == 3
        assert len(generalized_dihedral_base(generalized_dihedral(abelian_product([3, 3])))) == 9
        assert generalized_dihedral_base(build("quaternion(8)")) is None

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_spectrum(self, k):
        spec, ratio = ratio_spectrum_witness(k)
        g = spec.build()
        assert Fraction(gamma(spec.descriptor), g.order) == ratio == Fraction(k, 2 * k - 1)


class TestOrder2:
    def test_classifier(self):
        assert classify_order2_centralizer(build("symmetric(3)")).odd_part_size == 3
        rep = classify_order2_centralizer(build("dihedral(10)"))
        assert rep.odd_part_size == 5 and rep.verified
        assert classify_order2_centralizer(build("quaternion(8)")) is None

    def test_existence_predictions(self):
        preds = by_id(predictions_for_group(build("symmetric(3)")))
        assert preds["total-existence-gendihedral"].value is True
        assert preds["total-existence-centralizer"].value is True
        preds = by_id(predictions_for_group(build("dihedral(12)")))
        assert preds["total-existence-gendihedral"].value is False


class TestACGroups:
    def test_s3(self):
        preds = by_id(predictions_for_group(build("symmetric(3)")))
        assert preds["ac-exact"].value == 4
        assert not preds["ac-total-exact"].applicable

    def test_q8(self):
        preds = by_id(predictions_for_group(build("quaternion(8)")))
        assert preds["ac-exact"].value == 3 and preds["ac-total-exact"].value == 6

    def test_quaternion_total(self):
        assert quaternion_gamma_t(16).value == 10 == gamma_t("quaternion(16)")

    def test_central_codimension2(self):
        for text, pair in [("heisenberg(3)", (4, 8)), ("dihedral(8)", (3, 6)), ("direct(quaternion(8),cyclic(2))", (3, 6))]:
            preds = by_id(predictions_for_group(build(text)))
            assert (preds["central-codim2"].value, preds["central-codim2-total"].value) == pair
            assert (gamma(text), gamma_t(text)) == pair


class TestClosedForms:
    def test_pq(self):
        preds = by_id(pq_gamma(3, 7))
        assert (preds["pq-exact"].value, preds["pq-total"].value) == (8, 16)
        assert (gamma("pq(3,7)"), gamma_t("pq(3,7)")) == (8, 16)
        preds = by_id(pq_gamma(2, 5))
        assert preds["pq-exact"].value == 6
        assert preds["pq-total"].kind == NONEXISTENCE and preds["pq-total"].value is True
        assert by_id(pq_gamma(3, 13))["pq-exact"].value == 14
        with pytest.raises(ValueError):
            pq_gamma(3, 5)

    def test_projective(self):
        assert [p.value for p in pgl2_gamma(3, 1)] == [13, 26]
        assert psl2_gamma_t(3).value == 10 == gamma_t("alternating(4)")
        assert psl2_gamma_t(5).value == 42 == gamma_t("psl2(5)")

    def test_projective_small_case_disagrees_with_solver(self):
        # the closed form over-counts for PGL(2,3); the solver value is certified
        assert gamma("pgl2(3)") == 7 != pgl2_gamma(3, 1)[0].value

    def test_suzuki(self):
        assert suzuki_terms(1) == (65, 2080, 1456, 560)
        assert [p.value for p in suzuki_gamma(1)] == [4161, 8322]
        for n in range(1, 7):
            assert sum(suzuki_terms(n)) == suzuki_gamma(n)[0].value
        with pytest.raises(ValueError):
            suzuki_terms(0)
        assert issubclass(FormulaIntegrityError, ArithmeticError)

    def test_p4(self):
        assert p4_gamma(3, 1)[0].value == 4
        assert p4_gamma(3, 7)[0].value == 10
        assert [p.value for p in p4_gamma(5, 9)] == [26, 52]
        assert not p4_gamma(2, 1)[0].applicable


class TestNilpotent:
    def test_d8_z3(self):
        preds = by_id(nilpotent_gamma(build("direct(dihedral(8),cyclic(3))")))
        assert preds["nilpotent-min"].value == 3 == gamma("direct(dihedral(8),cyclic(3))")

    def test_h27_z5(self):
        preds = by_id(nilpotent_gamma(build("direct(heisenberg(3),cyclic(5))")))
        assert preds["nilpotent-min"].value == 4

    def test_not_nilpotent(self):
        assert not any(p.applicable for p in nilpotent_gamma(build("symmetric(3)")))

    def test_epg_min(self):
        g = build("direct(abelian(3,3),abelian(5,5))")
        p = epg_nilpotent_min(g)
        assert p.value == 4
        assert exact_domination_number(proper_enhanced_power_graph(g)).value == 4


class TestPredictionObject:
    def test_value_iff_applicable(self):
        with pytest.raises(ValueError):
            FormulaPrediction("x", True, "r", EXACT_GAMMA)
        with pytest.raises(ValueError):
            FormulaPrediction("x", False, "r", EXACT_GAMMA, 3)

    def test_json_round_trip(self):
        for p in predictions_for_group(build("dihedral(12)")):
            assert FormulaPrediction.from_json(p.to_json()) == p

    def test_fingerprints(self):
        assert equality_fingerprint(build("heisenberg(2)")) == "D8"
        assert equality_fingerprint(build("dihedral(10)")) is None

    def test_facts_cached(self):
        g = build("symmetric(4)")
        assert group_facts(g) is group_facts(g)


@given(st.integers(min_value=1, max_value=40))
def test_suzuki_summands_integral(n):
    terms = suzuki_terms(n)
    assert all(isinstance(t, int) and t > 0 for t in terms)
