"""Intervals, instances, knowledge states, and the predicates that drive everything.

The object of study: ``n`` hidden values, each known only to lie in a closed
interval.  Querying an interval reveals its value (at a cost) and collapses
the interval to a point.  The goal is an ordering of the items in which every
earlier value exceeds every later value by at most a threshold ``delta``;
queries should cost as little as possible.

All numbers are exact rationals (`fractions.Fraction`).  Floats are rejected
at the boundary: binary floating point silently misrepresents values such as
0.1, and the comparisons below (strict versus non-strict by exactly zero
margin) are meaningful only under exact arithmetic.

Vocabulary used throughout the package:

* *dependent*: two intervals whose order cannot be fixed without more
  information -- each one could still hold the larger value by more than
  ``delta``.  Formally ``a.hi - b.lo > delta and b.hi - a.lo > delta``
  (both strict).
* *trivial*: an interval of width at most ``delta``.  Trivial intervals are
  never dependent on anything and never need to be queried.
* *witness*: a one-sided proof that some single interval must be queried in
  every feasible query set (see `singleton_witness_static` /
  `singleton_witness_value`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    CycleDetected,
    InvariantViolation,
    MissingRealization,
    UnresolvedDependency,
)

#: The one numeric type used for endpoints, values, costs and probabilities.
Scalar = Fraction

ScalarLike = Union[int, str, Fraction]


def scalar(x: ScalarLike) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Accepts ints, `Fraction`s, and strings in the forms ``"7"``, ``"-3/4"``,
    ``"2.5"`` (decimal strings are exact).  Floats and bools are rejected.
    """
    if isinstance(x, bool) or isinstance(x, float):
        raise InvariantViolation(
            f"floats are not allowed as scalars (got {x!r}); "
            "pass an int, Fraction, or string like '5/2'"
        )
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvariantViolation(f"not a rational number: {x!r}") from exc
    raise InvariantViolation(f"cannot interpret {type(x).__name__} as a scalar")


def scalar_str(x: Fraction) -> str:
    """Canonical string form: ``"7"`` for integers, ``"25/2"`` otherwise."""
    return str(x)


def isqrt_bounds(m: int, precision: Fraction) -> tuple[Fraction, Fraction]:
    """Rational enclosure ``lo <= sqrt(m) <= hi`` with ``hi - lo <= precision``.

    Newton iteration from an integer seed; every iterate stays an upper
    bound, and ``m / upper`` is a matching lower bound.  Used where an
    irrational constant (``sqrt(3)``) must enter an otherwise exact
    computation as a certified interval.
    """
    if m < 0:
        raise InvariantViolation("square root of a negative number requested")
    m = Fraction(m)
    if m == 0:
        return Fraction(0), Fraction(0)
    upper = Fraction(max(1, int(m) + 1))
    while True:
        lower = m / upper
        if upper - lower <= precision:
            return lower, upper
        upper = (upper + lower) / 2


@dataclass(frozen=True)
class UncertainInterval:
    """A closed interval ``[lo, hi]`` with a non-negative query cost.

    ``lo == hi`` is allowed and models an already-known value ("point").
    Instances are immutable; refining an interval produces a new one.
    """

    lo: Fraction
    hi: Fraction
    cost: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "lo", scalar(self.lo))
        object.__setattr__(self, "hi", scalar(self.hi))
        object.__setattr__(self, "cost", scalar(self.cost))
        if self.lo > self.hi:
            raise InvariantViolation(
                f"empty interval: lo={self.lo} > hi={self.hi}"
            )
        if self.cost < 0:
            raise InvariantViolation(f"negative query cost {self.cost}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, v: Fraction) -> bool:
        return self.lo <= v <= self.hi

    def collapse(self, v: Fraction) -> "UncertainInterval":
        """The point interval left behind once the value ``v`` is revealed."""
        if not self.contains(v):
            raise InvariantViolation(
                f"value {v} lies outside [{self.lo}, {self.hi}]"
            )
        return UncertainInterval(v, v, self.cost)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def interval(lo: ScalarLike, hi: ScalarLike, cost: ScalarLike = 1) -> UncertainInterval:
    """Shorthand constructor accepting ints / strings / Fractions."""
    return UncertainInterval(scalar(lo), scalar(hi), scalar(cost))


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------

def dependent(a: UncertainInterval, b: UncertainInterval, delta: Fraction) -> bool:
    """True when neither order of ``a`` and ``b`` is certain yet.

    Each side must be able to beat the other by strictly more than ``delta``;
    with either inequality non-strict one order is already safe.  Symmetric,
    and false whenever either interval is trivial (width <= delta) -- in
    particular a point is never dependent on a point.
    """
    return a.hi - b.lo > delta and b.hi - a.lo > delta


def is_trivial(a: UncertainInterval, delta: Fraction) -> bool:
    """Width at most ``delta``: the interval can be placed without querying."""
    return a.width <= delta


def singleton_witness_static(
    a: UncertainInterval, b: UncertainInterval, delta: Fraction
) -> bool:
    """``a`` strictly contains ``b`` padded by ``delta`` on both sides.

    Whatever value ``b`` turns out to have, ``a`` still straddles it by more
    than the threshold, so querying ``b`` alone cannot separate the pair:
    ``a`` is in every feasible query set.  Decidable from endpoints only.
    """
    return a.lo < b.lo - delta and a.hi > b.hi + delta


def singleton_witness_value(
    a: UncertainInterval, v: Fraction, delta: Fraction
) -> bool:
    """``a`` strictly contains the known value ``v`` padded by ``delta``.

    The value-level analogue of `singleton_witness_static`: any interval that
    straddles a revealed value by more than the threshold must itself be
    queried.  Equivalent to ``dependent(a, [v, v], delta)``.
    """
    return a.lo < v - delta and a.hi > v + delta


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

RefinementScript = tuple[UncertainInterval, ...]


@dataclass(frozen=True)
class Instance:
    """A problem instance: threshold, intervals, and optional hidden data.

    ``values`` is the hidden realization -- present on generated instances so
    an environment can answer queries, absent on instances meant purely for
    structural analysis.

    ``refinements`` (optional, per interval) are scripts for the model where
    a query returns a narrower interval instead of the value: each entry is
    nested in its predecessor and the final entry is the point holding the
    value.  ``time_costs`` (optional, same shape) price each script step;
    without them every step of an interval costs its flat ``cost``.
    """

    delta: Fraction
    intervals: tuple[UncertainInterval, ...]
    values: Optional[tuple[Fraction, ...]] = None
    refinements: Optional[tuple[Optional[RefinementScript], ...]] = None
    time_costs: Optional[tuple[Optional[tuple[Fraction, ...]], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "delta", scalar(self.delta))
        object.__setattr__(self, "intervals", tuple(self.intervals))
        if self.delta < 0:
            raise InvariantViolation(f"negative threshold {self.delta}")
        for item in self.intervals:
            if not isinstance(item, UncertainInterval):
                raise InvariantViolation(
                    f"intervals must be UncertainInterval, got {type(item).__name__}"
                )
        n = len(self.intervals)
        if self.values is not None:
            values = tuple(scalar(v) for v in self.values)
            object.__setattr__(self, "values", values)
            if len(values) != n:
                raise InvariantViolation(
                    f"{len(values)} values for {n} intervals"
                )
            for i, (itv, v) in enumerate(zip(self.intervals, values)):
                if not itv.contains(v):
                    raise InvariantViolation(
                        f"value {v} of item {i} lies outside {itv}"
                    )
        if self.refinements is not None:
            object.__setattr__(
                self, "refinements", tuple(
                    tuple(script) if script is not None else None
                    for script in self.refinements
                )
            )
            if len(self.refinements) != n:
                raise InvariantViolation(
                    f"{len(self.refinements)} refinement scripts for {n} intervals"
                )
            for i, script in enumerate(self.refinements):
                if script is None:
                    continue
                self._check_script(i, script)
        if self.time_costs is not None:
            costs = tuple(
                tuple(scalar(c) for c in row) if row is not None else None
                for row in self.time_costs
            )
            object.__setattr__(self, "time_costs", costs)
            if len(costs) != n:
                raise InvariantViolation(
                    f"{len(costs)} time-cost rows for {n} intervals"
                )
            for i, row in enumerate(costs):
                if row is None:
                    continue
                if self.refinements is None or self.refinements[i] is None:
                    raise InvariantViolation(
                        f"item {i} has time costs but no refinement script"
                    )
                if len(row) != len(self.refinements[i]):
                    raise InvariantViolation(
                        f"item {i}: {len(row)} time costs for a "
                        f"{len(self.refinements[i])}-step script"
                    )
                for c in row:
                    if c < 0:
                        raise InvariantViolation(f"negative time cost {c}")

    def _check_script(self, i: int, script: RefinementScript) -> None:
        if not script:
            raise InvariantViolation(f"item {i} has an empty refinement script")
        prev = self.intervals[i]
        for step, nxt in enumerate(script):
            if not isinstance(nxt, UncertainInterval):
                raise InvariantViolation(
                    f"item {i} step {step}: script entries must be intervals"
                )
            if nxt.lo < prev.lo or nxt.hi > prev.hi:
                raise InvariantViolation(
                    f"item {i} step {step}: {nxt} is not nested in {prev}"
                )
            prev = nxt
        last = script[-1]
        if not last.is_point:
            raise InvariantViolation(
                f"item {i}: refinement script must end in a point, got {last}"
            )
        if self.values is None:
            raise InvariantViolation(
                f"item {i} has a refinement script but the instance has no values"
            )
        if last.lo != self.values[i]:
            raise InvariantViolation(
                f"item {i}: script ends at {last.lo} but the value is {self.values[i]}"
            )

    @property
    def n(self) -> int:
        return len(self.intervals)

    @property
    def costs(self) -> tuple[Fraction, ...]:
        return tuple(itv.cost for itv in self.intervals)

    def with_values(self, values: Iterable[ScalarLike]) -> "Instance":
        """A copy of this instance with the given hidden realization."""
        return Instance(
            self.delta,
            self.intervals,
            tuple(scalar(v) for v in values),
            self.refinements,
            self.time_costs,
        )

    def without_values(self) -> "Instance":
        return Instance(self.delta, self.intervals, None, None, None)


def shrink_delta(inst: Instance) -> Instance:
    """Rewrite a positive-threshold instance as an equivalent zero-threshold one.

    Pulling both endpoints of every interval inward by ``delta/2`` maps each
    dependency at threshold ``delta`` to a dependency at threshold zero and
    vice versa, so the query-set structure carries over unchanged.  Requires
    every interval to be non-trivial (a trivial interval would turn inside
    out).  Values are dropped: a shrunken interval need not contain them.
    """
    if inst.delta == 0:
        return inst.without_values() if inst.values is not None else inst
    half = inst.delta / 2
    shrunk = []
    for i, itv in enumerate(inst.intervals):
        if is_trivial(itv, inst.delta):
            raise InvariantViolation(
                f"cannot shrink: item {i} ({itv}) has width <= threshold"
            )
        shrunk.append(UncertainInterval(itv.lo + half, itv.hi - half, itv.cost))
    return Instance(Fraction(0), tuple(shrunk))


# ---------------------------------------------------------------------------
# Knowledge states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KnowledgeState:
    """What an algorithm knows mid-run: current intervals, queries, spend.

    ``queried`` counts queries per item (the refinement model may query the
    same item several times).  ``known_values`` lists every value that is
    certain right now -- exactly the values of current point intervals.
    """

    current: tuple[UncertainInterval, ...]
    queried: tuple[int, ...]
    spent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "current", tuple(self.current))
        object.__setattr__(self, "queried", tuple(self.queried))
        object.__setattr__(self, "spent", scalar(self.spent))
        if len(self.current) != len(self.queried):
            raise InvariantViolation("queried counts do not match intervals")
        if any(q < 0 for q in self.queried):
            raise InvariantViolation("negative query count")

    @property
    def n(self) -> int:
        return len(self.current)

    @property
    def known_values(self) -> dict[int, Fraction]:
        """Index -> value for every item whose value is certain right now."""
        return {i: itv.lo for i, itv in enumerate(self.current) if itv.is_point}


# ---------------------------------------------------------------------------
# Orderings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """An ordering of item indices, first-to-last."""

    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise InvariantViolation(
                f"not a permutation of 0..{len(self.order) - 1}: {self.order}"
            )

    def position(self, i: int) -> int:
        return self.order.index(i)

    def __iter__(self):
        return iter(self.order)

    def __len__(self):
        return len(self.order)


def valid_permutation(
    inst: Instance,
    values: Optional[Sequence[ScalarLike]],
    pi: Union[Permutation, Sequence[int]],
) -> bool:
    """Does the ordering respect the given values up to the threshold?

    True iff for every pair placed ``i`` before ``j``,
    ``values[i] <= values[j] + delta``.  Pass ``values=None`` to check
    against the instance's own hidden realization.
    """
    if values is None:
        values = inst.values
    if values is None:
        raise MissingRealization(
            "cannot validate an ordering without values to compare"
        )
    vals = tuple(scalar(v) for v in values)
    if len(vals) != inst.n:
        raise InvariantViolation(f"{len(vals)} values for {inst.n} items")
    order = tuple(pi)
    if sorted(order) != list(range(inst.n)):
        raise InvariantViolation(f"not a permutation of 0..{inst.n - 1}: {order}")
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if vals[order[a]] > vals[order[b]] + inst.delta:
                return False
    return True


def build_permutation(
    state: Union[KnowledgeState, Sequence[UncertainInterval]],
    delta: Fraction,
) -> Permutation:
    """Order pairwise-independent intervals into a guaranteed-valid sequence.

    Precondition: no two intervals are dependent (raises
    `UnresolvedDependency` otherwise).  Item ``i`` is forced before ``j``
    when ``i`` certainly cannot exceed ``j`` by more than the threshold while
    the reverse is not certain; ties -- neither direction forced -- are
    broken by scheduling greedily among available items, smallest
    ``(lo, index)`` first, which keeps the output deterministic.

    The forced relation on an independent family cannot contain 2- or
    3-cycles; `CycleDetected` guards against anything longer.
    """
    if isinstance(state, KnowledgeState):
        items = list(state.current)
    else:
        items = list(state)
    n = len(items)
    delta = scalar(delta)
    for i in range(n):
        for j in range(i + 1, n):
            if dependent(items[i], items[j], delta):
                raise UnresolvedDependency(
                    f"items {i} and {j} are still dependent: "
                    f"{items[i]} vs {items[j]}"
                )

    def before(a: UncertainInterval, b: UncertainInterval) -> bool:
        # a certainly <= b + delta, and b possibly > a + delta.
        return a.hi - b.lo <= delta and not (b.hi - a.lo <= delta)

    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and before(items[i], items[j]):
                succ[i].append(j)
                indeg[j] += 1

    ready: list[tuple[Fraction, int]] = []
    for i in range(n):
        if indeg[i] == 0:
            heappush(ready, (items[i].lo, i))
    out: list[int] = []
    while ready:
        _, i = heappop(ready)
        out.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heappush(ready, (items[j].lo, j))
    if len(out) != n:
        stuck = sorted(set(range(n)) - set(out))
        raise CycleDetected(f"precedence cycle among items {stuck}")
    return Permutation(tuple(out))
