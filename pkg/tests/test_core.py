"""Interval arithmetic, predicates, instance validation, permutations."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from querysort import (
    CycleDetected,
    Instance,
    InvariantViolation,
    KnowledgeState,
    MissingRealization,
    Permutation,
    UncertainInterval,
    UnresolvedDependency,
    build_permutation,
    dependent,
    interval,
    is_trivial,
    isqrt_bounds,
    scalar,
    scalar_str,
    shrink_delta,
    singleton_witness_static,
    singleton_witness_value,
    valid_permutation,
)

# Small exact rationals for property tests.
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=8)
thresholds = st.fractions(min_value=0, max_value=5, max_denominator=4)


def ivs(lo, width):
    return UncertainInterval(lo, lo + width)


intervals_st = st.builds(
    ivs, rationals, st.fractions(min_value=0, max_value=10, max_denominator=8)
)


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


def test_scalar_accepts_exact_inputs():
    assert scalar(3) == F(3)
    assert scalar("7/2") == F(7, 2)
    assert scalar(F(1, 3)) == F(1, 3)


def test_scalar_rejects_floats_and_bools():
    with pytest.raises(InvariantViolation):
        scalar(0.5)
    with pytest.raises(InvariantViolation):
        scalar(True)


def test_scalar_str_round_trips():
    for x in (F(3), F(-7, 2), F(0)):
        assert scalar(scalar_str(x)) == x


def test_isqrt_bounds_encloses_sqrt3():
    lo, hi = isqrt_bounds(3, F(1, 10**12))
    assert lo <= hi
    assert hi - lo <= F(1, 10**12)
    assert lo * lo <= 3 <= hi * hi


def test_isqrt_bounds_exact_square():
    lo, hi = isqrt_bounds(4, F(1, 1000))
    assert lo <= 2 <= hi
    assert hi - lo <= F(1, 1000)


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


def test_interval_validation():
    with pytest.raises(InvariantViolation):
        interval(3, 2)
    with pytest.raises(InvariantViolation):
        interval(0, 1, -1)


def test_interval_accessors():
    a = interval(1, 4, 2)
    assert a.width == 3
    assert not a.is_point
    assert a.contains(F(1)) and a.contains(F(4)) and not a.contains(F(5))
    pt = a.collapse(F(2))
    assert pt.is_point and pt.lo == 2 and pt.cost == a.cost
    with pytest.raises(InvariantViolation):
        a.collapse(F(9))


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def test_dependent_hand_cases():
    a, b = interval(0, 10), interval(4, 14)
    assert dependent(a, b, F(0))
    assert dependent(a, b, F(5))
    assert not dependent(a, b, F(6))  # overlap exactly 6: not strict
    assert not dependent(interval(0, 3), interval(5, 8), F(0))


@given(intervals_st, intervals_st, thresholds)
def test_dependent_symmetric(a, b, d):
    assert dependent(a, b, d) == dependent(b, a, d)


@given(intervals_st, intervals_st, thresholds)
def test_trivial_pair_never_dependent(a, b, d):
    if is_trivial(a, d) and is_trivial(b, d):
        assert not dependent(a, b, d)


def test_is_trivial_boundary():
    assert is_trivial(interval(0, 2), F(2))
    assert not is_trivial(interval(0, 2), F(1))


def test_static_witness_hand_cases():
    big, small = interval(0, 10), interval(3, 6)
    assert singleton_witness_static(big, small, F(0))
    assert singleton_witness_static(big, small, F(2))
    assert not singleton_witness_static(big, small, F(3))  # padding reaches lo
    assert not singleton_witness_static(small, big, F(0))


@given(intervals_st, intervals_st, thresholds, st.fractions(min_value=0, max_value=1, max_denominator=16))
def test_static_witness_implies_value_witness_everywhere(a, b, d, t):
    # If a strictly straddles b's padded interval, it straddles every value b
    # could reveal.
    if singleton_witness_static(a, b, d):
        v = b.lo + (b.hi - b.lo) * t
        assert singleton_witness_value(a, v, d)


@given(intervals_st, intervals_st, thresholds, st.fractions(min_value=0, max_value=1, max_denominator=16))
def test_value_witness_implies_dependent(a, b, d, t):
    # Flushing on a value witness is always safe: the witnessing interval was
    # dependent on the revealed item to begin with.
    v = b.lo + (b.hi - b.lo) * t
    if singleton_witness_value(a, v, d):
        assert dependent(a, b, d)


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


def test_instance_validation_rejects_bad_values():
    with pytest.raises(InvariantViolation):
        Instance(F(0), (interval(0, 2),), (F(5),))
    with pytest.raises(InvariantViolation):
        Instance(F(-1), (interval(0, 2),), (F(1),))
    with pytest.raises(InvariantViolation):
        Instance(F(0), (interval(0, 2), interval(3, 4)), (F(1),))


def test_instance_script_validation():
    itv = interval(0, 10)
    good = Instance(
        F(0),
        (itv,),
        (F(4),),
        refinements=((UncertainInterval(F(2), F(6)), UncertainInterval(F(4), F(4))),),
    )
    assert good.refinements[0][-1].is_point
    # script not nested
    with pytest.raises(InvariantViolation):
        Instance(
            F(0),
            (itv,),
            (F(4),),
            refinements=((UncertainInterval(F(2), F(12)), UncertainInterval(F(4), F(4))),),
        )
    # script must end in the value point
    with pytest.raises(InvariantViolation):
        Instance(
            F(0),
            (itv,),
            (F(4),),
            refinements=((UncertainInterval(F(3), F(5)),),),
        )
    # time costs must match script length
    with pytest.raises(InvariantViolation):
        Instance(
            F(0),
            (itv,),
            (F(4),),
            refinements=((UncertainInterval(F(4), F(4)),),),
            time_costs=((F(1), F(1)),),
        )


def test_instance_helpers():
    inst = Instance(F(1), (interval(0, 4), interval(2, 6)), (F(1), F(5)))
    assert inst.n == 2
    assert inst.costs == (F(1), F(1))
    assert inst.without_values().values is None
    re = inst.without_values().with_values((F(2), F(3)))
    assert re.values == (F(2), F(3))


def test_shrink_delta_preserves_dependencies():
    inst = Instance(F(2), (interval(0, 10), interval(4, 14), interval(13, 20)))
    flat = shrink_delta(inst)
    assert flat.delta == 0
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            assert dependent(inst.intervals[i], inst.intervals[j], inst.delta) == dependent(
                flat.intervals[i], flat.intervals[j], F(0)
            )


@given(
    st.lists(
        st.tuples(rationals, st.fractions(min_value=3, max_value=10, max_denominator=4)),
        min_size=1,
        max_size=6,
    ),
    st.fractions(min_value=0, max_value=2, max_denominator=2),
)
def test_shrink_delta_equivalence_property(raw, d):
    ivs_ = tuple(UncertainInterval(lo, lo + w) for lo, w in raw)
    inst = Instance(d, ivs_)
    flat = shrink_delta(inst)
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            assert dependent(ivs_[i], ivs_[j], d) == dependent(
                flat.intervals[i], flat.intervals[j], F(0)
            )


def test_shrink_delta_rejects_trivial_members():
    inst = Instance(F(2), (interval(0, 1), interval(0, 10)))
    with pytest.raises(InvariantViolation):
        shrink_delta(inst)


def test_knowledge_state_known_values():
    state = KnowledgeState(
        (UncertainInterval(F(3), F(3)), interval(0, 5)), (1, 0), F(1)
    )
    assert state.known_values == {0: F(3)}


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------


def test_permutation_validation():
    with pytest.raises(InvariantViolation):
        Permutation((0, 0, 1))
    p = Permutation((2, 0, 1))
    assert p.position(0) == 1
    assert list(p) == [2, 0, 1]


def test_valid_permutation_hand_cases():
    inst = Instance(F(0), (interval(0, 4), interval(0, 6)), (F(3), F(1)))
    assert valid_permutation(inst, None, (1, 0))
    assert not valid_permutation(inst, None, (0, 1))
    # threshold tolerance: out-of-order by exactly delta is fine
    inst2 = Instance(F(2), (interval(0, 4), interval(0, 6)), (F(3), F(1)))
    assert valid_permutation(inst2, None, (0, 1))
    assert valid_permutation(inst2, (F(3), F(1)), (0, 1))
    with pytest.raises(MissingRealization):
        valid_permutation(inst.without_values(), None, (0, 1))
    with pytest.raises(InvariantViolation):
        valid_permutation(inst, None, (0, 0))


def test_build_permutation_orders_points():
    order = build_permutation(
        [UncertainInterval(F(5), F(5)), UncertainInterval(F(1), F(1)), UncertainInterval(F(3), F(3))],
        F(0),
    )
    assert list(order) == [1, 2, 0]


def test_build_permutation_rejects_dependent_pairs():
    with pytest.raises(UnresolvedDependency):
        build_permutation([interval(0, 4), interval(2, 6)], F(0))


@given(
    st.lists(rationals, min_size=1, max_size=7),
    thresholds,
)
def test_build_permutation_on_points_is_valid(points, d):
    state = [UncertainInterval(v, v) for v in points]
    order = build_permutation(state, d)
    inst = Instance(d, tuple(interval(v - 1, v + 1) for v in points), tuple(points))
    assert valid_permutation(inst, tuple(points), order)


@settings(max_examples=60)
@given(
    st.lists(
        st.tuples(rationals, st.fractions(min_value=0, max_value=6, max_denominator=4)),
        min_size=1,
        max_size=6,
    ),
    thresholds,
)
def test_build_permutation_fuzz_independent_states(raw, d):
    # mix of points and intervals; only keep states with no dependent pair
    state = [UncertainInterval(lo, lo + w) for lo, w in raw]
    for i in range(len(state)):
        for j in range(i + 1, len(state)):
            if dependent(state[i], state[j], d):
                return
    order = build_permutation(state, d)
    # The guarantee: whatever true values the intervals hide, the order is
    # threshold-consistent.  For independent intervals that means every
    # earlier item's high end is within the threshold of every later item's
    # low end.
    placed = list(order)
    for a in range(len(placed)):
        for b in range(a + 1, len(placed)):
            i, j = placed[a], placed[b]
            assert state[i].hi <= state[j].lo + d
