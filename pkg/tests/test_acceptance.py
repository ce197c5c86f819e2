"""End-to-end acceptance checks, one per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
Each criterion prints a single ``criterion N: PASS|FAIL ...`` line.
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from commdom.commuting import commuting_graph, proper_commuting_graph
from commdom.domination import exact_domination_number, exact_total_domination_number
from commdom.formulas import (
    classify_order2_centralizer,
    gen_dihedral_gamma,
    group_facts,
    nilpotent_gamma,
    p4_gamma,
    suzuki_gamma,
    suzuki_terms,
)
from commdom.graphs import SimpleGraph, strong_product
from commdom.groups.core import compute_invariants
from commdom.groups.families import build, cyclic, dihedral, direct, symmetric
from commdom.oracles import brute_force_gamma
from commdom.verify import load_corpus, run_family_sweep, strong_product_property_tests

SEED = 20240613


def solve(text: str):
    g = build(text)
    pc = proper_commuting_graph(g)
    return g, exact_domination_number(pc), exact_total_domination_number(pc)


@lru_cache(maxsize=1)
def corpus_rows():
    """(group, invariants, record) for every default-corpus group."""
    name, entries = load_corpus()
    report = run_family_sweep(entries, corpus_name=name)
    by_desc = {r.descriptor: r for r in report.records}
    rows = []
    for e in entries:
        g = build(e.descriptor)
        if g.is_abelian:
            continue
        rows.append((g, compute_invariants(g), by_desc[e.descriptor]))
    return report, rows


def timed(fn):
    start = time.monotonic()
    ok, detail = fn()
    return ok, detail, time.monotonic() - start


# -- criteria -----------------------------------------------------------------------


def criterion_1():
    bad = []
    for text, want in [("symmetric(3)", 4), ("dihedral(8)", 3), ("quaternion(8)", 3)]:
        g, r, _ = solve(text)
        inv = compute_invariants(g)
        half = Fraction(inv.order - inv.center_size + inv.order2_centralizer_count, 2)
        if not (r.exact and r.value == want == half):
            bad.append(f"{text}: gamma {r.value}, bound {half}")
    return not bad, "; ".join(bad) or "gamma = 4, 3, 3 equal to (|G|-|Z|+t)/2"


def criterion_2():
    bad = []
    for p, texts in [(2, ["heisenberg(2)", "dihedral(8)", "quaternion(8)"]), (3, ["heisenberg(3)"]), (5, ["heisenberg(5)"])]:
        for text in texts:
            _, r, t = solve(text)
            if not (r.exact and t.exact and r.value == p + 1 and t.value == 2 * (p + 1)):
                bad.append(f"{text}: ({r.value}, {t.value}) != ({p + 1}, {2 * (p + 1)})")
    return not bad, "; ".join(bad) or "gamma = p+1, gamma_t = 2(p+1) for p = 2, 3, 5"


def criterion_3():
    bad = []
    _, r, t = solve("pgl2(3)")
    if (r.value, t.value) != (13, 26):
        bad.append(f"PGL(2,3): solver ({r.value}, {t.value}) vs claimed (13, 26)")
    _, _, t = solve("alternating(4)")
    if t.value != 10:
        bad.append(f"A4: gamma_t {t.value} != 10")
    _, r, t = solve("psl2(5)")
    if (r.value, t.value) != (21, 42):
        bad.append(f"PSL(2,5): ({r.value}, {t.value}) != (21, 42)")
    exact_everywhere = all(x.exact for text in ("pgl2(3)", "alternating(4)", "psl2(5)", "pgl2(5)") for x in solve(text)[1:])
    if not exact_everywhere:
        bad.append("solver not exact")
    return not bad, "; ".join(bad) or "PGL/PSL values confirmed"


def criterion_4():
    bad = []
    for base in ["cyclic(9)", "cyclic(15)", "abelian(2,4)", "abelian(3,3)"]:
        a = build(base)
        involutions = sum(1 for x in range(a.order) if a.mul[x, x] == a.identity)
        want = 1 + a.order // involutions
        pred = gen_dihedral_gamma(a).value
        _, r, _ = solve(f"gendihedral({base})")
        if not (r.exact and r.value == want == pred):
            bad.append(f"D({base}): solver {r.value}, formula {pred}, 1+|A|/|T| = {want}")
    for k in range(2, 7):
        g, r, _ = solve(f"dihedral({4 * k - 2})")
        if Fraction(r.value, g.order) != Fraction(k, 2 * k - 1):
            bad.append(f"dihedral({4 * k - 2}): ratio {Fraction(r.value, g.order)}")
    return not bad, "; ".join(bad) or "generalized dihedral values and spectrum k = 2..6"


def criterion_5():
    _, r, t = solve("pq(3,7)")
    _, r10, t10 = solve("pq(2,5)")
    ok = (r.value, t.value) == (8, 16) and r10.value == 6 and t10.exact and t10.value is None
    return ok, f"order 21: ({r.value}, {t.value}); order 10: gamma {r10.value}, gamma_t {'absent' if t10.value is None else t10.value}"


def criterion_6():
    bad = []
    for text, want_g, want_t in [
        ("direct(dihedral(8),cyclic(3))", 3, None),
        ("direct(heisenberg(3),cyclic(5))", 4, None),
        ("direct(quaternion(8),heisenberg(3))", 3, 4),
    ]:
        g, r, t = solve(text)
        preds = {p.theorem_id: p for p in nilpotent_gamma(g) if p.applicable}
        if not (r.exact and r.value == want_g == preds["nilpotent-min"].value):
            bad.append(f"{text}: solver {r.value}, formula {preds['nilpotent-min'].value}")
        if want_t is not None:
            formula_t = preds.get("nilpotent-total-exact")
            if not (t.exact and t.value == want_t and formula_t is not None and formula_t.value == want_t):
                bad.append(f"{text}: gamma_t {t.value}")
    return not bad, "; ".join(bad) or "nilpotent reductions confirmed"


def criterion_7():
    _, rows = corpus_rows()
    bad = []
    for g, inv, rec in rows:
        exists = rec.gamma_t is not None
        if exists == (inv.order2_centralizer_count > 0):
            bad.append(f"{rec.descriptor}: gamma_t exists={exists}, order-2 centralizers={inv.order2_centralizer_count}")
        if not exists:
            rep = classify_order2_centralizer(g)
            if rep is None or not rep.verified or not group_facts(g).is_gd_odd:
                bad.append(f"{rec.descriptor}: structure check failed")
    absent = sum(1 for *_, rec in rows if rec.gamma_t is None)
    return not bad, "; ".join(bad) or f"{len(rows)} groups, {absent} without total domination, 0 mismatches"


def criterion_8():
    _, rows = corpus_rows()
    bad = []
    for g, inv, rec in rows:
        noncentral = inv.order - inv.center_size
        lower = max(3, inv.least_prime + 1, -(-noncentral // inv.M))
        uppers = [inv.max_cyclic_T - inv.max_cyclic_U, Fraction(noncentral + inv.order2_centralizer_count, 2)]
        if not group_facts(g).is_generalized_dihedral:
            d = inv.d
            uppers.append(math.floor(noncentral * min((1 + math.log(d + 1)) / (d + 1), 0.5) + 1e-9))
        if not lower <= rec.gamma <= min(uppers):
            bad.append(f"{rec.descriptor}: {lower} <= {rec.gamma} <= {min(uppers)} fails")
    return not bad, "; ".join(bad) or f"{len(rows)} groups, 0 violations"


def criterion_9():
    _, rows = corpus_rows()
    bad = []
    ac_count = 0
    for g, inv, rec in rows:
        ac_count += inv.is_ac_group
        if (rec.gamma == inv.cent_count - 1) != inv.is_ac_group:
            bad.append(f"{rec.descriptor}: gamma {rec.gamma}, |cent| {inv.cent_count}, AC {inv.is_ac_group}")
        if not group_facts(g).is_generalized_dihedral:
            if (rec.gamma_t == 2 * inv.cent_count - 2) != inv.is_ac_group:
                bad.append(f"{rec.descriptor}: gamma_t {rec.gamma_t}, |cent| {inv.cent_count}")
    return not bad, "; ".join(bad) or f"{ac_count} AC groups of {len(rows)}, 0 violations"


def criterion_10():
    start = time.monotonic()
    two = strong_product_property_tests(SEED, 200, 2)
    three = strong_product_property_tests(SEED, 50, 3)
    bad = two.counterexamples + three.counterexamples
    for a, b in [(cyclic(2), symmetric(3)), (symmetric(3), symmetric(3)), (dihedral(8), cyclic(3))]:
        if not commuting_graph(direct(a, b)).same_graph(strong_product(commuting_graph(a), commuting_graph(b))):
            bad.append(f"C({a.descriptor} x {b.descriptor}) differs from the strong product")
    elapsed = time.monotonic() - start
    if elapsed >= 60:
        bad.append(f"took {elapsed:.1f}s")
    return not bad, "; ".join(bad[:3]) or "250 trials and 3 group pairs, 0 counterexamples"


def criterion_11():
    rng = random.Random(SEED)
    start = time.monotonic()
    bad = []
    for i in range(300):
        n = rng.randint(1, 16)
        p = rng.uniform(0.1, 0.6)
        g = SimpleGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
        r = exact_domination_number(g)
        t = exact_total_domination_number(g)
        if not (r.exact and r.value == brute_force_gamma(g)):
            bad.append(f"graph {i}: gamma {r.value}")
        if not (t.exact and t.value == brute_force_gamma(g, total=True)):
            bad.append(f"graph {i}: gamma_t {t.value}")
    elapsed = time.monotonic() - start
    if elapsed >= 120:
        bad.append(f"took {elapsed:.1f}s")
    return not bad, "; ".join(bad[:3]) or "300 graphs, 0 mismatches"


def criterion_12():
    report, rows = corpus_rows()
    ratios = [(Fraction(rec.gamma, inv.order), rec) for _, inv, rec in rows]
    best = max(r for r, _ in ratios)
    at_max = [rec for r, rec in ratios if r == best]
    ok = best == Fraction(2, 3) and all(rec.fingerprint == "S3" for rec in at_max)
    return ok, f"max {best} at {', '.join(rec.descriptor for rec in at_max)}"


def criterion_13():
    bad = []
    if [p.value for p in suzuki_gamma(1)] != [4161, 8322]:
        bad.append("Suzuki n = 1")
    for n in range(1, 7):
        q, r = 2 ** (2 * n + 1), 2**n
        parts = [Fraction(q * q + 1), Fraction(q * q * (q * q + 1), 2),
                 Fraction(q * q * (q - 1) * (q * q + 1), 4 * (q - 2 * r + 1)),
                 Fraction(q * q * (q - 1) * (q * q + 1), 4 * (q + 2 * r + 1))]
        if any(x.denominator != 1 for x in parts) or list(suzuki_terms(n)) != [int(x) for x in parts]:
            bad.append(f"Suzuki n = {n}")
    for p in (3, 5, 7):
        for i in range(1, 11):
            want = p + 1 if i <= 6 else p * p + 1
            if [x.value for x in p4_gamma(p, i)] != [want, 2 * want]:
                bad.append(f"p4 p = {p} class {i}")
    return not bad, "; ".join(bad) or "Suzuki n = 1..6 integral, 4161 / 8322; p^4 table for p = 3, 5, 7"


CRITERIA = {
    1: (criterion_1, 1.0),
    2: (criterion_2, 10.0),
    3: (criterion_3, 30.0),
    4: (criterion_4, 10.0),
    5: (criterion_5, 5.0),
    6: (criterion_6, 120.0),
    7: (criterion_7, None),
    8: (criterion_8, None),
    9: (criterion_9, None),
    10: (criterion_10, 60.0),
    11: (criterion_11, 120.0),
    12: (criterion_12, None),
    13: (criterion_13, None),
}


def evaluate(n: int) -> tuple[bool, str]:
    fn, limit = CRITERIA[n]
    ok, detail, elapsed = timed(fn)
    if limit is not None and elapsed >= limit:
        ok, detail = False, f"{detail}; took {elapsed:.2f}s (limit {limit:g}s)"
    return ok, detail


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, detail = evaluate(n)
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n in sorted(CRITERIA):
        ok, detail = evaluate(n)
        results.append(ok)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)
    sys.exit(0 if all(results) else 1)
