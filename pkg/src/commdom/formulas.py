"""Closed-form values and bounds for domination numbers of proper commuting graphs.

Every evaluator returns a :class:`FormulaPrediction` carrying an explicit
applicability gate. Gates follow the hypotheses of each statement literally;
where a statement is known to hold more widely the extension is a separate
formula id so the two are never confused.

Formula ids
-----------
lower-centralizer            max(ceil((n - |Z|) / M), p + 1, 3) <= gamma
upper-cyclic-cover           gamma <= T - U
upper-half-noncentral        gamma <= (n - |Z| + t) / 2, equality exactly for S3, D8, Q8
upper-log-greedy             gamma <= (n - |Z|) min((1 + ln(d + 1)) / (d + 1), 1/2), non generalized dihedral
gendihedral-exact            gamma(D(A)) = 1 + |A| / |{a : a^2 = 1}|, A not elementary abelian
gendihedral-exact-elementary same value for elementary abelian A of odd exponent
order2-centralizer-structure a noncentral x with |C(x)| = 2 forces D(A), |A| odd
total-existence-gendihedral  gamma_t missing iff G is D(A) with |A| odd
total-existence-centralizer  gamma_t missing iff some noncentral |C(x)| = 2
total-upper-cyclic-cover     gamma_t <= 2 (T - U)
ac-exact / ac-total-exact    |cent| - 1 and 2 |cent| - 2 for AC-groups
two-prime-index[-total]      [G : Z] a product of two primes forces AC and the values above
two-nonabelian-centralizers-total  gamma_t = 2 (|cent(G)| - |cent(C(a))|) when |nacent| = 2
central-codim2[-total]       p + 1 and 2 (p + 1) for |G| = p^r, |Z| = p^(r - 2)
pq-exact / pq-total          q + 1 and 2 (q + 1) for non-abelian groups of order pq
pgl2-exact / pgl2-total      p^2n + p^n + 1 and twice that for PGL(2, p^n), p odd
psl2-total                   10, 42, 2 (q^2 + q + 1) for PSL(2, q)
quaternion-total             2^(m - 1) + 2 for generalized quaternion groups
nilpotent-min                min of gamma over non-abelian Sylow subgroups
nilpotent-total-upper        gamma_t <= that minimum + 1 when all Sylows are non-abelian
nilpotent-total-exact        equality above when every Sylow has gamma_t > gamma
nilpotent-order8             gamma = 3 when all Sylows are non-abelian and one has order 8
epg-nilpotent-min            proper enhanced power graph: min number of order-p_i subgroups
suzuki / order-p4            formula-only families
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .groups.core import (
    GroupInvariants,
    GroupTable,
    compute_invariants,
    distinct_centralizers,
    is_abelian_subset,
    is_prime,
    nilpotent_decomposition,
    prime_factorization,
    prime_power,
    subgroup,
)
from .groups.families import FamilySpec, parse_descriptor
from .masks import SubsetMask

EXACT_GAMMA = "exact_gamma"
EXACT_GAMMA_T = "exact_gamma_t"
LOWER = "lower_bound"
UPPER = "upper_bound"
NONEXISTENCE = "nonexistence"

Value = Union[int, Fraction, float, bool, None]


@dataclass(frozen=True)
class FormulaPrediction:
    theorem_id: str
    applicable: bool
    reason: str
    kind: str
    value: Value = None
    # which graph the value refers to, plus any extra flags
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.applicable and self.value is None:
            raise ValueError(f"{self.theorem_id}: applicable prediction needs a value")
        if not self.applicable and self.value is not None:
            raise ValueError(f"{self.theorem_id}: inapplicable prediction carries a value")

    def to_json(self) -> dict:
        v = self.value
        if isinstance(v, Fraction):
            v = str(v) if v.denominator != 1 else v.numerator
        return {
            "theorem_id": self.theorem_id,
            "applicable": self.applicable,
            "reason": self.reason,
            "kind": self.kind,
            "value": v,
            "detail": self.detail,
        }

    @classmethod
    def from_json(cls, obj: dict) -> FormulaPrediction:
        v = obj["value"]
        if isinstance(v, str):
            v = Fraction(v)
        return cls(obj["theorem_id"], obj["applicable"], obj["reason"], obj["kind"], v, obj.get("detail", {}))


def _na(theorem_id: str, kind: str, reason: str) -> FormulaPrediction:
    return FormulaPrediction(theorem_id, False, reason, kind)


def _ok(theorem_id: str, kind: str, value: Value, reason: str = "gate holds", **detail) -> FormulaPrediction:
    return FormulaPrediction(theorem_id, True, reason, kind, value, detail)


# -- structural facts -------------------------------------------------------------


@dataclass(frozen=True)
class Order2Report:
    """Outcome of checking the structure forced by an order-2 centralizer."""

    involution: int
    odd_part: SubsetMask
    odd_part_size: int
    verified: bool
    reason: str


@dataclass(frozen=True)
class GroupFacts:
    group: GroupTable
    inv: GroupInvariants
    gd_base: Optional[SubsetMask]
    order2: Optional[Order2Report]
    sylows: Optional[list[tuple[int, SubsetMask]]]
    family: Optional[FamilySpec]

    @property
    def is_generalized_dihedral(self) -> bool:
        return self.gd_base is not None

    @property
    def is_gd_odd(self) -> bool:
        return self.gd_base is not None and (self.group.order // 2) % 2 == 1


_facts_cache: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def group_facts(g: GroupTable) -> GroupFacts:
    cached = _facts_cache.get(g)
    if cached is None:
        try:
            family = parse_descriptor(g.descriptor)
        except ValueError:
            family = None
        cached = GroupFacts(
            g,
            compute_invariants(g),
            generalized_dihedral_base(g),
            classify_order2_centralizer(g),
            nilpotent_decomposition(g),
            family,
        )
        _facts_cache[g] = cached
    return cached


def generalized_dihedral_base(g: GroupTable) -> Optional[SubsetMask]:
    """An abelian index-2 subgroup ``A`` with every element outside ``A`` an involution.

    Such an ``A`` exists iff ``g`` is a non-abelian generalized dihedral group;
    it is then the centralizer of any ``a`` in ``A`` with ``a^2 != 1``, so the
    candidates are the distinct centralizers of size ``n / 2``.
    """
    n = g.order
    if g.is_abelian or n % 2:
        return None
    orders = g.element_orders
    for c in distinct_centralizers(g):
        if len(c) != n // 2 or not is_abelian_subset(g, c):
            continue
        outside = np.array(c.complement().members())
        if np.all(orders[outside] == 2):
            return c
    return None


def classify_order2_centralizer(g: GroupTable) -> Optional[Order2Report]:
    """Check the structure forced by a noncentral element with centralizer of order 2.

    Returns None when no such element exists. Otherwise ``N`` is the set of
    odd-order elements; the report is verified when ``N`` is an abelian
    subgroup of index 2 inverted by the involution.
    """
    sizes = g.commute.sum(axis=1)
    candidates = np.flatnonzero(sizes == 2)
    if len(candidates) == 0:
        return None
    x = int(candidates[0])
    odd = SubsetMask.from_bools(g.element_orders % 2 == 1)
    members = odd.members()
    n = len(members)

    def report(ok: bool, why: str) -> Order2Report:
        return Order2Report(x, odd, n, ok, why)

    if 2 * n != g.order:
        return report(False, f"odd-order elements number {n}, not half of {g.order}")
    idx = np.array(members)
    if not np.isin(g.mul[np.ix_(idx, idx)], idx).all():
        return report(False, "odd-order elements are not closed")
    if not is_abelian_subset(g, odd):
        return report(False, "odd-order subgroup is not abelian")
    conj = g.mul[g.mul[x, idx], g.inverse[x]]
    if not np.array_equal(conj, g.inverse[idx]):
        return report(False, "involution does not invert the odd-order subgroup")
    return report(True, "abelian odd-order subgroup of index 2 inverted by an involution")


def _is_elementary_abelian(g: GroupTable, mask: SubsetMask) -> bool:
    orders = {int(g.element_orders[x]) for x in mask if x != g.identity}
    return len(orders) <= 1 and all(is_prime(o) for o in orders)


def _big_omega(n: int) -> int:
    return sum(prime_factorization(n).values())


def _is_generalized_quaternion(g: GroupTable) -> bool:
    pp = prime_power(g.order)
    if pp is None or pp[0] != 2 or pp[1] < 3 or g.is_abelian:
        return False
    return int(np.count_nonzero(g.element_orders == 2)) == 1


_EQUALITY_FINGERPRINTS = {
    "S3": (6, {1: 1, 2: 3, 3: 2}, 1),
    "D8": (8, {1: 1, 2: 5, 4: 2}, 2),
    "Q8": (8, {1: 1, 2: 1, 4: 6}, 2),
}


def equality_fingerprint(g: GroupTable) -> Optional[str]:
    """Name among S3, D8, Q8 matched by order, order histogram and center size."""
    hist = g.order_histogram()
    zsize = int(g.commute.all(axis=1).sum())
    for name, (n, h, z) in _EQUALITY_FINGERPRINTS.items():
        if g.order == n and hist == h and zsize == z:
            return name
    return None


# -- bounds from invariants -------------------------------------------------------


def bound_lower_M(inv: GroupInvariants) -> FormulaPrediction:
    tid = "lower-centralizer"
    if inv.is_abelian:
        return _na(tid, LOWER, "abelian group")
    noncentral = inv.order - inv.center_size
    by_m = -(-noncentral // inv.M)
    value = max(by_m, inv.least_prime + 1, 3)
    return _ok(tid, LOWER, value, by_centralizer=by_m, by_prime=inv.least_prime + 1, universal=3)


def bound_upper_TU(inv: GroupInvariants) -> FormulaPrediction:
    tid = "upper-cyclic-cover"
    if inv.is_abelian:
        return _na(tid, UPPER, "abelian group")
    return _ok(tid, UPPER, inv.max_cyclic_T - inv.max_cyclic_U, T=inv.max_cyclic_T, U=inv.max_cyclic_U)


def bound_haji(inv: GroupInvariants, g: Optional[GroupTable] = None) -> FormulaPrediction:
    """Upper bound ``(n - |Z| + t) / 2``; ``detail['equality_case']`` names S3/D8/Q8 matches."""
    tid = "upper-half-noncentral"
    if inv.is_abelian:
        return _na(tid, UPPER, "abelian group")
    value = Fraction(inv.order - inv.center_size + inv.order2_centralizer_count, 2)
    match = equality_fingerprint(g) if g is not None else None
    return _ok(tid, UPPER, value, t=inv.order2_centralizer_count, equality_case=match)


def bound_log(inv: GroupInvariants, is_generalized_dihedral: bool) -> FormulaPrediction:
    """Real-valued bound; compare ``gamma <= floor(value)``."""
    tid = "upper-log-greedy"
    if inv.is_abelian:
        return _na(tid, UPPER, "abelian group")
    if is_generalized_dihedral:
        return _na(tid, UPPER, "generalized dihedral group")
    d = inv.d
    factor = min((1 + math.log(d + 1)) / (d + 1), 0.5)
    value = (inv.order - inv.center_size) * factor
    return _ok(tid, UPPER, value, d=d, floor=math.floor(value + 1e-9))


# -- generalized dihedral groups ----------------------------------------------------


def gen_dihedral_gamma(a: GroupTable) -> FormulaPrediction:
    """``gamma(C**(D(A))) = 1 + |A| / |{x in A : x^2 = 1}|`` for an abelian ``A``.

    Returns the strict-gate prediction unless only the elementary-abelian
    extension applies.
    """
    if not a.is_abelian:
        raise ValueError("generalized dihedral formula needs an abelian group")
    preds = _gd_prediction(
        a.order,
        int(np.count_nonzero(a.element_orders <= 2)),
        _is_elementary_abelian(a, SubsetMask.full(a.order)),
        int(a.element_orders.max()),
    )
    return next((p for p in preds if p.applicable), preds[0])


def _gd_prediction(size: int, involutions: int, elementary: bool, exponent: int) -> list[FormulaPrediction]:
    value = 1 + size // involutions
    base = dict(base_order=size, base_involutions=involutions)
    if exponent <= 2:
        why = "D(A) is abelian for elementary abelian 2-groups"
        return [_na("gendihedral-exact", EXACT_GAMMA, why), _na("gendihedral-exact-elementary", EXACT_GAMMA, why)]
    if not elementary:
        return [
            _ok("gendihedral-exact", EXACT_GAMMA, value, **base),
            _na("gendihedral-exact-elementary", EXACT_GAMMA, "base is not elementary abelian"),
        ]
    return [
        _na("gendihedral-exact", EXACT_GAMMA, "base is elementary abelian"),
        _ok("gendihedral-exact-elementary", EXACT_GAMMA, value, "elementary abelian base of odd exponent", **base),
    ]


def gd_group_predictions(facts: GroupFacts) -> list[FormulaPrediction]:
    g = facts.group
    if facts.gd_base is None:
        why = "not generalized dihedral"
        return [_na("gendihedral-exact", EXACT_GAMMA, why), _na("gendihedral-exact-elementary", EXACT_GAMMA, why)]
    base = facts.gd_base
    members = np.array(base.members())
    involutions = int(np.count_nonzero(g.element_orders[members] <= 2))
    exponent = int(g.element_orders[members].max())
    return _gd_prediction(len(base), involutions, _is_elementary_abelian(g, base), exponent)


# -- existence of total domination ---------------------------------------------------


def total_existence_predictions(facts: GroupFacts) -> list[FormulaPrediction]:
    inv = facts.inv
    if inv.is_abelian:
        why = "abelian group"
        return [
            _na("total-existence-gendihedral", NONEXISTENCE, why),
            _na("total-existence-centralizer", NONEXISTENCE, why),
            _na("total-upper-cyclic-cover", UPPER, why),
        ]
    out = [
        _ok("total-existence-gendihedral", NONEXISTENCE, facts.is_gd_odd, "non-abelian group"),
        _ok("total-existence-centralizer", NONEXISTENCE, facts.order2 is not None, "non-abelian group"),
    ]
    if facts.is_gd_odd:
        out.append(_na("total-upper-cyclic-cover", UPPER, "total domination does not exist"))
    else:
        out.append(_ok("total-upper-cyclic-cover", UPPER, 2 * (inv.max_cyclic_T - inv.max_cyclic_U)))
    return out


def order2_structure_prediction(facts: GroupFacts) -> FormulaPrediction:
    tid = "order2-centralizer-structure"
    if facts.order2 is None:
        return _na(tid, NONEXISTENCE, "no noncentral element has a centralizer of order 2")
    rep = facts.order2
    return _ok(
        tid,
        NONEXISTENCE,
        True,
        "order-2 centralizer present",
        verified=rep.verified,
        odd_part_size=rep.odd_part_size,
        involution=rep.involution,
        check=rep.reason,
    )


# -- AC-groups and relatives ----------------------------------------------------------


def ac_group_gamma(inv: GroupInvariants, is_generalized_dihedral: bool) -> list[FormulaPrediction]:
    if inv.is_abelian:
        return [_na("ac-exact", EXACT_GAMMA, "abelian group"), _na("ac-total-exact", EXACT_GAMMA_T, "abelian group")]
    if not inv.is_ac_group:
        return [_na("ac-exact", EXACT_GAMMA, "not an AC-group"), _na("ac-total-exact", EXACT_GAMMA_T, "not an AC-group")]
    out = [_ok("ac-exact", EXACT_GAMMA, inv.cent_count - 1, cent=inv.cent_count)]
    if is_generalized_dihedral:
        out.append(_na("ac-total-exact", EXACT_GAMMA_T, "generalized dihedral group"))
    else:
        out.append(_ok("ac-total-exact", EXACT_GAMMA_T, 2 * inv.cent_count - 2, cent=inv.cent_count))
    return out


def two_prime_index_predictions(facts: GroupFacts) -> list[FormulaPrediction]:
    """``[G : Z]`` a product of exactly two primes (with multiplicity).

    The total-domination value is only claimed when total domination exists,
    i.e. away from generalized dihedral groups with odd ``|A|``.
    """
    inv = facts.inv
    if inv.is_abelian:
        why = "abelian group"
        return [_na("two-prime-index", EXACT_GAMMA, why), _na("two-prime-index-total", EXACT_GAMMA_T, why)]
    index = inv.order // inv.center_size
    if _big_omega(index) != 2:
        why = f"[G:Z] = {index} is not a product of two primes"
        return [_na("two-prime-index", EXACT_GAMMA, why), _na("two-prime-index-total", EXACT_GAMMA_T, why)]
    note = "index read as a product of two primes"
    out = [_ok("two-prime-index", EXACT_GAMMA, inv.cent_count - 1, note, implies_ac=True, index=index)]
    if facts.is_gd_odd:
        out.append(_na("two-prime-index-total", EXACT_GAMMA_T, "generalized dihedral of order 2m with m odd"))
    else:
        out.append(_ok("two-prime-index-total", EXACT_GAMMA_T, 2 * inv.cent_count - 2, note, implies_ac=True))
    return out


def two_nonabelian_centralizers_prediction(facts: GroupFacts) -> FormulaPrediction:
    tid = "two-nonabelian-centralizers-total"
    g, inv = facts.group, facts.inv
    if inv.is_abelian:
        return _na(tid, EXACT_GAMMA_T, "abelian group")
    if facts.is_generalized_dihedral:
        return _na(tid, EXACT_GAMMA_T, "generalized dihedral group")
    if inv.nacent_count != 2:
        return _na(tid, EXACT_GAMMA_T, f"{inv.nacent_count} non-abelian centralizers, not 2")
    proper = [c for c in distinct_centralizers(g) if not c.is_full() and not is_abelian_subset(g, c)]
    inner = len(distinct_centralizers(subgroup(g, proper[0])))
    return _ok(tid, EXACT_GAMMA_T, 2 * (inv.cent_count - inner), cent=inv.cent_count, inner_cent=inner)


def central_codimension2_gamma(inv: GroupInvariants) -> list[FormulaPrediction]:
    pp = prime_power(inv.order)
    ids = ("central-codim2", "central-codim2-total")
    if inv.is_abelian:
        return [_na(ids[0], EXACT_GAMMA, "abelian group"), _na(ids[1], EXACT_GAMMA_T, "abelian group")]
    if pp is None:
        return [_na(ids[0], EXACT_GAMMA, "order is not a prime power"), _na(ids[1], EXACT_GAMMA_T, "order is not a prime power")]
    p, r = pp
    if inv.center_size != p ** (r - 2):
        why = f"|Z| = {inv.center_size}, not {p}^{r - 2}"
        return [_na(ids[0], EXACT_GAMMA, why), _na(ids[1], EXACT_GAMMA_T, why)]
    return [_ok(ids[0], EXACT_GAMMA, p + 1, p=p), _ok(ids[1], EXACT_GAMMA_T, 2 * (p + 1), p=p)]


# -- named families -----------------------------------------------------------------


def pq_gamma(p: int, q: int) -> list[FormulaPrediction]:
    """Non-abelian groups of order ``pq`` (``p < q`` primes, ``q = 1 mod p``)."""
    if not (is_prime(p) and is_prime(q) and p < q and (q - 1) % p == 0):
        raise ValueError(f"no non-abelian group of order {p}*{q}")
    gamma = _ok("pq-exact", EXACT_GAMMA, q + 1, p=p, q=q)
    if p == 2:
        return [gamma, _ok("pq-total", NONEXISTENCE, True, "p = 2: dihedral, total domination absent")]
    return [gamma, _ok("pq-total", EXACT_GAMMA_T, 2 * (q + 1), p=p, q=q)]


def _pq_group_predictions(inv: GroupInvariants) -> list[FormulaPrediction]:
    f = prime_factorization(inv.order)
    if inv.is_abelian or len(f) != 2 or any(e != 1 for e in f.values()):
        why = "not a non-abelian group of order pq"
        return [_na("pq-exact", EXACT_GAMMA, why), _na("pq-total", EXACT_GAMMA_T, why)]
    p, q = sorted(f)
    return pq_gamma(p, q)


def pgl2_gamma(p: int, n: int) -> list[FormulaPrediction]:
    if not is_prime(p) or p == 2 or n < 1:
        raise ValueError("PGL(2, p^n) formula needs an odd prime p and n >= 1")
    gamma = p ** (2 * n) + p**n + 1
    return [_ok("pgl2-exact", EXACT_GAMMA, gamma, q=p**n), _ok("pgl2-total", EXACT_GAMMA_T, 2 * gamma, q=p**n)]


def psl2_gamma_t(q: int) -> FormulaPrediction:
    if prime_power(q) is None or q < 3:
        raise ValueError(f"PSL(2, q) formula needs a prime power q >= 3, got {q}")
    if q == 3:
        value = 10
    elif q in (4, 5):
        value = 42
    else:
        value = 2 * (q * q + q + 1)
    return _ok("psl2-total", EXACT_GAMMA_T, value, q=q)


def _projective_family(facts: GroupFacts) -> tuple[Optional[str], Optional[int]]:
    """Recognise PGL/PSL groups from the construction descriptor (including the small isomorphs)."""
    fam = facts.family
    if fam is None:
        return None, None
    if fam.family in ("pgl2", "psl2"):
        return fam.family, fam.params[0]
    if fam.family == "symmetric" and fam.params == (4,):
        return "pgl2", 3
    if fam.family == "alternating" and fam.params == (4,):
        return "psl2", 3
    if fam.family == "alternating" and fam.params == (5,):
        return "psl2", 5
    return None, None


def projective_predictions(facts: GroupFacts) -> list[FormulaPrediction]:
    kind, q = _projective_family(facts)
    out = []
    if kind == "pgl2" and q % 2 == 1:
        p, n = prime_power(q)
        out.extend(pgl2_gamma(p, n))
    else:
        why = "not PGL(2, q) with q odd"
        out += [_na("pgl2-exact", EXACT_GAMMA, why), _na("pgl2-total", EXACT_GAMMA_T, why)]
    if kind == "psl2":
        out.append(psl2_gamma_t(q))
    else:
        out.append(_na("psl2-total", EXACT_GAMMA_T, "not PSL(2, q)"))
    return out


def quaternion_gamma_t(order: int) -> FormulaPrediction:
    pp = prime_power(order)
    if pp is None or pp[0] != 2 or pp[1] < 3:
        raise ValueError("generalized quaternion order must be 2^m with m >= 3")
    return _ok("quaternion-total", EXACT_GAMMA_T, 2 ** (pp[1] - 1) + 2, m=pp[1])


def _quaternion_prediction(g: GroupTable) -> FormulaPrediction:
    if not _is_generalized_quaternion(g):
        return _na("quaternion-total", EXACT_GAMMA_T, "not generalized quaternion")
    return quaternion_gamma_t(g.order)


@dataclass(frozen=True)
class SuzukiParams:
    n: int

    @property
    def q(self) -> int:
        return 2 ** (2 * self.n + 1)

    @property
    def r(self) -> int:
        return 2**self.n

    def subgroup_orders(self) -> tuple[int, int, int, int]:
        q, r = self.q, self.r
        return q * q, q - 1, q - 2 * r + 1, q + 2 * r + 1

    def group_order(self) -> int:
        q = self.q
        return q * q * (q * q + 1) * (q - 1)


class FormulaIntegrityError(ArithmeticError):
    pass


def suzuki_terms(n: int) -> tuple[int, int, int, int]:
    """The four summands of the Suzuki-group value, each checked to be an integer."""
    if n < 1:
        raise ValueError("Suzuki parameter n must be >= 1")
    s = SuzukiParams(n)
    q, r = s.q, s.r
    parts = [
        Fraction(q * q + 1),
        Fraction(q * q * (q * q + 1), 2),
        Fraction(q * q * (q - 1) * (q * q + 1), 4 * (q - 2 * r + 1)),
        Fraction(q * q * (q - 1) * (q * q + 1), 4 * (q + 2 * r + 1)),
    ]
    for i, part in enumerate(parts):
        if part.denominator != 1:
            raise FormulaIntegrityError(f"summand {i} is not integral for n = {n}: {part}")
    return tuple(int(p) for p in parts)


def suzuki_gamma(n: int) -> list[FormulaPrediction]:
    terms = suzuki_terms(n)
    gamma = sum(terms)
    s = SuzukiParams(n)
    return [
        _ok("suzuki", EXACT_GAMMA, gamma, q=s.q, r=s.r, terms=list(terms)),
        _ok("suzuki-total", EXACT_GAMMA_T, 2 * gamma, q=s.q, r=s.r),
    ]


def p4_gamma(p: int, class_index: int) -> list[FormulaPrediction]:
    """Groups of order ``p^4`` with ``p`` odd, indexed 1..10 in the standard listing."""
    if not 1 <= class_index <= 10:
        raise ValueError("class index must be in 1..10")
    if not is_prime(p) or p == 2:
        why = "needs an odd prime"
        return [_na("order-p4", EXACT_GAMMA, why), _na("order-p4-total", EXACT_GAMMA_T, why)]
    gamma = p + 1 if class_index <= 6 else p * p + 1
    return [
        _ok("order-p4", EXACT_GAMMA, gamma, p=p, class_index=class_index),
        _ok("order-p4-total", EXACT_GAMMA_T, 2 * gamma, p=p, class_index=class_index),
    ]


def ratio_spectrum_witness(k: int) -> tuple[FamilySpec, Fraction]:
    """Dihedral group of order ``4k - 2`` whose domination ratio is ``k / (2k - 1)``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return FamilySpec("dihedral", (4 * k - 2,)), Fraction(k, 2 * k - 1)


# -- nilpotent groups -------------------------------------------------------------------


def nilpotent_gamma(g: GroupTable, budget: float = 60.0) -> list[FormulaPrediction]:
    """Reduce a nilpotent group to its Sylow subgroups, solved exactly."""
    from .commuting import proper_commuting_graph
    from .domination import exact_domination_number, exact_total_domination_number

    facts = group_facts(g)
    ids = [
        ("nilpotent-min", EXACT_GAMMA),
        ("nilpotent-total-upper", UPPER),
        ("nilpotent-total-exact", EXACT_GAMMA_T),
        ("nilpotent-order8", EXACT_GAMMA),
    ]

    def none_apply(why: str) -> list[FormulaPrediction]:
        return [_na(tid, kind, why) for tid, kind in ids]

    if g.is_abelian:
        return none_apply("abelian group")
    if facts.sylows is None:
        return none_apply("not nilpotent")
    factors = []
    for p, mask in facts.sylows:
        s = subgroup(g, mask, f"sylow({p},{g.descriptor})")
        if s.is_abelian:
            factors.append((p, len(mask), True, None, None))
            continue
        graph = proper_commuting_graph(s)
        gamma = exact_domination_number(graph, budget)
        total = exact_total_domination_number(graph, budget)
        if not gamma.exact or not total.exact:
            return none_apply(f"Sylow {p}-subgroup not solved within budget")
        factors.append((p, len(mask), False, gamma.value, total.value))
    nonab = [f for f in factors if not f[2]]
    best = min(f[3] for f in nonab)
    detail = {"sylow_gamma": {str(p): v for p, _, _, v, _ in nonab}}
    out = [_ok("nilpotent-min", EXACT_GAMMA, best, **detail)]
    all_nonabelian = len(nonab) == len(factors)
    if all_nonabelian and len(factors) >= 2:
        out.append(_ok("nilpotent-total-upper", UPPER, best + 1, **detail))
        if all(t is None or t > v for _, _, _, v, t in nonab):
            out.append(_ok("nilpotent-total-exact", EXACT_GAMMA_T, best + 1, **detail))
        else:
            out.append(_na("nilpotent-total-exact", EXACT_GAMMA_T, "some Sylow has gamma_t = gamma"))
    else:
        why = "needs at least two Sylow subgroups, all non-abelian"
        out += [_na("nilpotent-total-upper", UPPER, why), _na("nilpotent-total-exact", EXACT_GAMMA_T, why)]
    if all_nonabelian and any(size == 8 for _, size, _, _, _ in factors):
        out.append(_ok("nilpotent-order8", EXACT_GAMMA, 3))
    else:
        out.append(_na("nilpotent-order8", EXACT_GAMMA, "needs all Sylows non-abelian, one of order 8"))
    return out


def epg_nilpotent_min(g: GroupTable) -> FormulaPrediction:
    """Proper enhanced power graph of a product of non-cyclic, non-quaternion ``p``-groups."""
    tid = "epg-nilpotent-min"
    facts = group_facts(g)
    if facts.sylows is None or len(facts.sylows) < 2:
        return _na(tid, EXACT_GAMMA, "needs a nilpotent group with at least two prime divisors")
    counts = {}
    orders = g.element_orders
    for p, mask in facts.sylows:
        s = subgroup(g, mask)
        if int(s.element_orders.max()) == s.order:
            return _na(tid, EXACT_GAMMA, f"Sylow {p}-subgroup is cyclic")
        if _is_generalized_quaternion(s):
            return _na(tid, EXACT_GAMMA, f"Sylow {p}-subgroup is generalized quaternion")
        counts[str(p)] = int(np.count_nonzero(orders == p)) // (p - 1)
    return _ok(tid, EXACT_GAMMA, min(counts.values()), graph="proper-epg", subgroup_counts=counts)


# -- everything at once -------------------------------------------------------------------


def predictions_for_group(g: GroupTable, budget: float = 60.0) -> list[FormulaPrediction]:
    """Every group-level prediction, applicable or not, in a fixed order."""
    facts = group_facts(g)
    inv = facts.inv
    out = [
        bound_lower_M(inv),
        bound_upper_TU(inv),
        bound_haji(inv, g),
        bound_log(inv, facts.is_generalized_dihedral),
    ]
    out += gd_group_predictions(facts)
    out.append(order2_structure_prediction(facts))
    out += total_existence_predictions(facts)
    out += ac_group_gamma(inv, facts.is_generalized_dihedral)
    out += two_prime_index_predictions(facts)
    out.append(two_nonabelian_centralizers_prediction(facts))
    out += central_codimension2_gamma(inv)
    out += _pq_group_predictions(inv)
    out += projective_predictions(facts)
    out.append(_quaternion_prediction(g))
    out += nilpotent_gamma(g, budget)
    out.append(epg_nilpotent_min(g))
    return out
