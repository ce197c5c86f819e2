from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from commdom.groups.core import (
    GroupTable,
    GroupValidationError,
    SizeLimitError,
    center,
    centralizer,
    compute_invariants,
    direct_product,
    distinct_centralizers,
    element_order,
    is_ac_group,
    is_subgroup,
    load_group,
    maximal_cyclic_subgroups,
    nilpotent_decomposition,
    prime_factorization,
    save_group,
    set_max_order,
    validate,
)
from commdom.groups.families import (
    FamilySpec,
    abelian_product,
    alternating,
    build,
    cycle_string,
    cyclic,
    dihedral,
    direct,
    generalized_dihedral,
    generalized_quaternion,
    heisenberg,
    metacyclic_pq,
    parse_cycles,
    parse_descriptor,
    perm_closure,
    pgl2,
    psl2,
    symmetric,
)

Q8 = generalized_quaternion(8)
S3 = symmetric(3)
D8 = dihedral(8)


def brute_center(g: GroupTable) -> set[int]:
    return {z for z in range(g.order) if all(g.mul[z, y] == g.mul[y, z] for y in range(g.order))}


def brute_order(g: GroupTable, x: int) -> int:
    k, y = 1, x
    while y != g.identity:
        y = int(g.mul[y, x])
        k += 1
    return k


class TestValidation:
    def test_cyclic_is_a_group(self):
        assert validate(cyclic(6)) == []

    def test_identity_violation(self):
        table = cyclic(3).mul.copy()
        table[0, 0] = 1
        g = GroupTable(3, table, 0, np.array([0, 2, 1], dtype=np.int32))
        assert "identity violated at 0" in validate(g)

    def test_non_associative_latin_square(self):
        g = GroupTable.from_table([[0, 1, 2], [1, 2, 0], [2, 1, 0]])
        assert validate(g)

    def test_size_cap(self):
        set_max_order(10)
        try:
            with pytest.raises(SizeLimitError):
                cyclic(11)
        finally:
            set_max_order(4096)

    @pytest.mark.parametrize(
        "text",
        ["dihedral(12)", "quaternion(16)", "symmetric(4)", "alternating(5)", "heisenberg(3)",
         "pgl2(4)", "psl2(5)", "pq(3,7)", "gendihedral(abelian(3,3))", "direct(quaternion(8),cyclic(3))"],
    )
    def test_family_members_are_groups(self, text):
        assert validate(build(text)) == []


class TestCentralizers:
    def test_transposition_in_s3(self):
        assert len(centralizer(S3, 1)) == 2

    def test_abelian_full(self):
        g = abelian_product([2, 6])
        assert all(centralizer(g, x).is_full() for x in range(g.order))

    def test_q8_i(self):
        assert len(centralizer(Q8, 1)) == 4

    @pytest.mark.parametrize("g,size", [(S3, 1), (Q8, 2), (cyclic(12), 12), (D8, 2)])
    def test_center(self, g, size):
        assert len(center(g)) == size
        assert set(center(g).members()) == brute_center(g)

    def test_element_orders(self):
        assert element_order(Q8, Q8.identity) == 1
        assert element_order(Q8, 2) == 2  # a^2 = -1
        assert element_order(cyclic(12), 1) == 12
        g = symmetric(4)
        assert all(element_order(g, x) == brute_order(g, x) for x in range(g.order))

    @pytest.mark.parametrize("g,count", [(S3, 5), (abelian_product([3, 3]), 1), (alternating(4), 6)])
    def test_distinct_centralizers(self, g, count):
        cents = distinct_centralizers(g)
        assert len(cents) == count
        assert all(is_subgroup(g, c) for c in cents)

    @pytest.mark.parametrize("g,expected", [(S3, True), (Q8, True), (symmetric(4), False)])
    def test_ac(self, g, expected):
        assert is_ac_group(g) is expected

    @pytest.mark.parametrize("g,t,u", [(Q8, 3, 0), (cyclic(6), 1, 1), (D8, 5, 0), (S3, 4, 0)])
    def test_maximal_cyclic(self, g, t, u):
        _, T, U = maximal_cyclic_subgroups(g)
        assert (T, U) == (t, u)


class TestNilpotent:
    def test_d8_times_z3(self):
        parts = nilpotent_decomposition(direct(D8, cyclic(3)))
        assert [(p, len(m)) for p, m in parts] == [(2, 8), (3, 3)]

    def test_s3_not_nilpotent(self):
        assert nilpotent_decomposition(S3) is None

    def test_p_group(self):
        parts = nilpotent_decomposition(heisenberg(3))
        assert len(parts) == 1 and parts[0][0] == 3 and parts[0][1].is_full()

    def test_prime_factorization(self):
        assert prime_factorization(360) == {2: 3, 3: 2, 5: 1}


class TestDirectProduct:
    def test_z2_z3_is_cyclic(self):
        g = direct_product(cyclic(2), cyclic(3))
        assert validate(g) == []
        assert g.order_histogram() == cyclic(6).order_histogram() == {1: 1, 2: 1, 3: 2, 6: 2}

    def test_trivial_factor(self):
        g = direct_product(cyclic(1), S3)
        assert np.array_equal(g.mul, S3.mul)

    def test_q8_h27(self):
        g = direct(Q8, heisenberg(3))
        assert g.order == 216 and len(center(g)) == 6


class TestInvariants:
    def test_s3(self):
        inv = compute_invariants(S3)
        assert (inv.center_size, inv.least_prime, inv.cent_count) == (1, 2, 5)
        assert (inv.order2_centralizer_count, inv.max_cyclic_T, inv.max_cyclic_U) == (3, 4, 0)
        assert (inv.M, inv.d, inv.is_ac_group, inv.is_nilpotent) == (2, 1, True, False)

    def test_q8(self):
        inv = compute_invariants(Q8)
        assert (inv.center_size, inv.cent_count, inv.order2_centralizer_count) == (2, 4, 0)
        assert (inv.max_cyclic_T, inv.max_cyclic_U, inv.M, inv.d) == (3, 0, 2, 2)
        assert inv.is_ac_group and inv.is_nilpotent

    def test_heisenberg3(self):
        inv = compute_invariants(heisenberg(3))
        assert (inv.order, inv.center_size, inv.M, inv.d, inv.least_prime) == (27, 3, 6, 6, 3)

    def test_as_dict_is_json(self):
        json.dumps(compute_invariants(symmetric(4)).as_dict())


class TestFamilies:
    def test_small_constructions(self):
        assert cyclic(1).order == 1
        assert abelian_product([3, 3]).order_histogram() == {1: 1, 3: 8}
        assert abelian_product([9]).order_histogram() != abelian_product([3, 3]).order_histogram()

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_gendihedral_of_cyclic_is_dihedral(self, n):
        assert generalized_dihedral(cyclic(n)).order_histogram() == dihedral(2 * n).order_histogram()

    def test_gendihedral_over_z3_squared(self):
        g = generalized_dihedral(abelian_product([3, 3]))
        assert g.order == 18
        assert sum(1 for x in range(9, 18) if element_order(g, x) == 2) == 9

    def test_s3_histogram(self):
        assert S3.order_histogram() == {1: 1, 2: 3, 3: 2}

    def test_quaternion_unique_involution(self):
        for order in (8, 16, 32):
            g = generalized_quaternion(order)
            assert g.order_histogram()[2] == 1
            assert len(center(g)) == 2

    def test_symmetric4(self):
        assert symmetric(4).order_histogram() == {1: 1, 2: 9, 3: 8, 4: 6}
        assert len(center(alternating(4))) == 1

    def test_heisenberg(self):
        assert heisenberg(2).order_histogram() == D8.order_histogram()
        assert heisenberg(5).order_histogram() == {1: 1, 5: 124}

    def test_projective(self):
        assert pgl2(3).order_histogram() == symmetric(4).order_histogram()
        assert psl2(4).order_histogram() == alternating(5).order_histogram()
        assert pgl2(5).order == 120
        assert psl2(5).order == 60

    def test_perm_closure(self):
        assert perm_closure([[1, 0]]).order == 2
        assert perm_closure([[1, 2, 0], [1, 0, 2]]).order_histogram() == S3.order_histogram()
        g = perm_closure([parse_cycles("(0 1 2 3 4)", 5), parse_cycles("(1 4)(2 3)", 5)])
        assert g.order_histogram() == dihedral(10).order_histogram()

    def test_cycle_string_round_trip(self):
        p = parse_cycles("(0 2)(1 3 4)", 5)
        assert parse_cycles(cycle_string(p), 5) == p

    def test_pq(self):
        g = metacyclic_pq(3, 7)
        assert g.order == 21 and len(center(g)) == 1
        with pytest.raises(ValueError):
            metacyclic_pq(3, 5)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            dihedral(7)
        with pytest.raises(ValueError):
            generalized_quaternion(12)
        with pytest.raises(ValueError):
            build("nosuch(3)")

    def test_descriptor_round_trip(self):
        for text in ["direct(dihedral(8),cyclic(3))", "gendihedral(abelian(2,4))", "pq(3,7)"]:
            assert parse_descriptor(text).descriptor == text
            assert build(text).descriptor == text
        assert FamilySpec("dihedral", (10,)).build().order == 10


class TestSerialization:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "g.json"
        save_group(Q8, path)
        g = load_group(path)
        assert np.array_equal(g.mul, Q8.mul)
        assert g.labels == Q8.labels

    def test_load_rejects_bad_table(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"name": "bad", "order": 3, "table": [[0, 1, 2], [1, 2, 0], [2, 1, 0]]}))
        with pytest.raises(GroupValidationError):
            load_group(path)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=2, max_value=6), min_size=1, max_size=3))
def test_abelian_products_are_abelian_groups(ns):
    g = abelian_product(ns)
    assert validate(g) == []
    assert g.is_abelian
    assert len(center(g)) == g.order


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["dihedral(12)", "quaternion(16)", "symmetric(4)", "heisenberg(3)", "pq(3,7)"]),
       st.data())
def test_centralizer_matches_scan(text, data):
    g = build(text)
    x = data.draw(st.integers(min_value=0, max_value=g.order - 1))
    expected = {y for y in range(g.order) if g.mul[x, y] == g.mul[y, x]}
    assert set(centralizer(g, x).members()) == expected
