"""Offline optimum: forced sets, feasibility, polynomial vs exhaustive."""

from fractions import Fraction as F

import pytest

from querysort import (
    InvariantViolation,
    MissingRealization,
    TooLarge,
    brute_force_optimum,
    cpcp_brute_force_optimum,
    feasible_query_set,
    fig1_instance,
    forced_query_set,
    gen_cpcp_adversary,
    gen_lemma4_pair,
    gen_nested_star,
    gen_random,
    interval,
    oblivious_query_set,
    optimum_query_set,
    resolved_by,
)
from querysort.core import Instance
from querysort.offline import BRUTE_FORCE_LIMIT


def test_forced_set_fig1():
    assert forced_query_set(fig1_instance("a")) == frozenset({0, 2})
    assert forced_query_set(fig1_instance("b")) == frozenset()


def test_forced_set_lemma4():
    a, b = gen_lemma4_pair(F(0))
    assert forced_query_set(a) == frozenset({1})
    assert forced_query_set(b) == frozenset({0})


def test_resolved_by():
    a, b = interval(2, 7), interval(0, 4)
    assert not resolved_by(a, b, None, None, F(0))
    # revealing b at 3 leaves the pair dependent (3 sits inside a)
    assert not resolved_by(a, b, None, F(3), F(0))
    # revealing a at 5.5 resolves it (5.5 is above b entirely)
    assert resolved_by(a, b, F(11, 2), None, F(0))
    assert resolved_by(a, b, F(11, 2), F(3), F(0))


def test_feasible_query_set_basics():
    inst = fig1_instance("a")
    assert feasible_query_set(inst, frozenset(range(inst.n)))
    assert not feasible_query_set(inst, frozenset())
    assert feasible_query_set(inst, frozenset({0, 2}))
    # querying only interval 1 leaves 0-2 unresolved? 0 and 2 are dependent
    # and neither is queried, so no
    assert not feasible_query_set(inst, frozenset({1}))
    with pytest.raises(MissingRealization):
        feasible_query_set(inst.without_values(), frozenset())


def test_optimum_contains_forced_and_is_feasible():
    for s in range(80):
        inst = gen_random(s, 2 + s % 8, (F(0), F(1))[s % 2], cost_model="rational-range")
        qs, cost = optimum_query_set(inst)
        assert forced_query_set(inst) <= qs
        assert feasible_query_set(inst, qs)
        assert cost == sum((inst.intervals[i].cost for i in qs), start=F(0))


def test_optimum_equals_brute_force():
    for s in range(150):
        inst = gen_random(s, 2 + s % 8, (F(0), F(1), F(2))[s % 3], cost_model="rational-range")
        _, cost = optimum_query_set(inst)
        bcost, minimizers = brute_force_optimum(inst)
        assert cost == bcost, (s, cost, bcost)
        assert minimizers  # at least one witness
        # canonical minimizer is lexicographically least by sorted index tuple
        keys = [tuple(sorted(m)) for m in minimizers]
        assert keys[0] == min(keys)
        for m in minimizers:
            assert feasible_query_set(inst, m)


def test_brute_force_guard():
    inst = Instance(F(0), tuple(interval(i, i + 2) for i in range(BRUTE_FORCE_LIMIT + 1)),
                    tuple(F(i) + 1 for i in range(BRUTE_FORCE_LIMIT + 1)))
    with pytest.raises(TooLarge):
        brute_force_optimum(inst)


def test_oblivious_query_set():
    star = gen_nested_star(6)
    assert oblivious_query_set(star) == frozenset(range(6))
    edgeless = Instance(F(0), (interval(0, 1), interval(5, 6)), (F(0), F(5)))
    assert oblivious_query_set(edgeless) == frozenset()
    # trivial intervals are never queried obliviously, even when dependent
    inst = Instance(F(2), (interval(0, 1), interval(-5, 6)), (F(0), F(-5)))
    assert oblivious_query_set(inst) == frozenset({1})


def test_cpcp_brute_force_hand_case():
    inst = gen_cpcp_adversary(1, 2)
    cost, prefix = cpcp_brute_force_optimum(inst)
    # querying the second item to the end (2 steps) resolves the pair
    assert prefix == (0, 2)
    assert cost == 2
    cost8, prefix8 = cpcp_brute_force_optimum(gen_cpcp_adversary(2, 8))
    assert cost8 == 10 and prefix8 == (1, 1, 0, 8)


def test_cpcp_brute_force_embeds_exact_model():
    inst = fig1_instance("a")
    cost, prefix = cpcp_brute_force_optimum(inst)
    assert cost == 2
    assert prefix == (1, 0, 1)


def test_cpcp_enumeration_guard():
    inst = gen_cpcp_adversary(4, 12)  # (13)^2 * 2^6 combinations > guard? no: keep under
    # build something genuinely too large: many long scripts
    big = gen_cpcp_adversary(1, 2)
    from querysort.offline import CPCP_ENUMERATION_LIMIT

    # (M+1)^2 must exceed the limit to trip the guard
    M = 1100
    too_big = gen_cpcp_adversary(1, M)
    if (M + 1) ** 2 > CPCP_ENUMERATION_LIMIT:
        with pytest.raises(TooLarge):
            cpcp_brute_force_optimum(too_big)
    assert cpcp_brute_force_optimum(big)[0] == 2


def test_optimum_requires_values():
    with pytest.raises(MissingRealization):
        optimum_query_set(fig1_instance("a").without_values())
