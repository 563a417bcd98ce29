"""Offline (full-information) solvers and the exhaustive oracles tests lean on.

The offline player sees the hidden values and must pick, in advance, a
cheapest query set whose answers are guaranteed to leave no dependent pair.
That problem decomposes cleanly: some intervals are forced into *every*
feasible set (they strictly straddle some other item's value by more than
the threshold), and what remains is a minimum-cost vertex cover on a chordal
graph -- so the exact optimum is polynomial.

`brute_force_optimum` / `cpcp_brute_force_optimum` recompute optima by plain
enumeration.  They exist to ground-truth everything else and are deliberately
unclever.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Optional, Union

from .core import (
    Instance,
    KnowledgeState,
    UncertainInterval,
    dependent,
    is_trivial,
    scalar,
    singleton_witness_value,
)
from .errors import MissingRealization, TooLarge
from .graph import DependencyGraph, build_graph, min_cost_vertex_cover

#: Guard for the 2^n subset enumeration.
BRUTE_FORCE_LIMIT = 20

#: Guard for the refinement-model enumeration (product of script lengths + 1).
CPCP_ENUMERATION_LIMIT = 10 ** 6


def forced_query_set(inst: Instance) -> frozenset[int]:
    """Intervals that belong to every feasible query set.

    Item ``j`` is forced when its interval strictly straddles some other
    item's value by more than the threshold: even after everything else is
    known, ``j`` still blocks a safe ordering.  One pass over ordered pairs
    suffices because the trigger values are realization constants.
    """
    if inst.values is None:
        raise MissingRealization("the forced set needs the hidden values")
    forced = set()
    for j in range(inst.n):
        for i in range(inst.n):
            if i == j:
                continue
            if singleton_witness_value(
                inst.intervals[j], inst.values[i], inst.delta
            ) and dependent(inst.intervals[i], inst.intervals[j], inst.delta):
                forced.add(j)
                break
    return frozenset(forced)


def resolved_by(
    a: UncertainInterval,
    b: UncertainInterval,
    va: Optional[Fraction],
    vb: Optional[Fraction],
    delta: Fraction,
) -> bool:
    """Is the pair independent once the chosen members are revealed?

    ``va`` / ``vb`` are the revealed values (None = not queried).
    """
    ca = a if va is None else UncertainInterval(va, va, a.cost)
    cb = b if vb is None else UncertainInterval(vb, vb, b.cost)
    return not dependent(ca, cb, delta)


def feasible_query_set(inst: Instance, query_set) -> bool:
    """Does revealing exactly these items leave no dependent pair?"""
    if inst.values is None:
        raise MissingRealization("feasibility needs the hidden values")
    chosen = set(query_set)
    cur = [
        UncertainInterval(inst.values[i], inst.values[i], itv.cost)
        if i in chosen
        else itv
        for i, itv in enumerate(inst.intervals)
    ]
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            if dependent(cur[i], cur[j], inst.delta):
                return False
    return True


def optimum_query_set(inst: Instance) -> tuple[frozenset[int], Fraction]:
    """Exact cheapest feasible query set, in polynomial time.

    The forced set F is in every solution; an edge not touching F can only
    be resolved by querying one of its own endpoints, and (because a
    straddled endpoint would itself be forced) querying either endpoint
    always works.  So the rest of the optimum is exactly a minimum-cost
    vertex cover of the dependency graph induced on the unforced vertices.
    """
    forced = forced_query_set(inst)
    rest = [v for v in range(inst.n) if v not in forced]
    sub_intervals = tuple(inst.intervals[v] for v in rest)
    sub = build_graph(sub_intervals, inst.delta)
    cover = min_cost_vertex_cover(sub)
    chosen = frozenset(forced | {rest[k] for k in cover})
    cost = sum(
        (inst.intervals[v].cost for v in chosen), start=Fraction(0)
    )
    return chosen, cost


def brute_force_optimum(
    inst: Instance,
) -> tuple[Fraction, tuple[frozenset[int], ...]]:
    """Minimum feasible query cost and ALL minimizers, by 2^n enumeration.

    The ground-truth oracle.  Guarded at n <= 20; tests stay well below.
    Minimizers are returned sorted by their sorted index tuples, so the
    first entry is the canonical (lexicographically smallest) optimum.
    """
    n = inst.n
    if n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force over 2^{n} subsets refused (limit 2^{BRUTE_FORCE_LIMIT})")
    if inst.values is None:
        raise MissingRealization("brute force needs the hidden values")
    iv = inst.intervals
    vals = inst.values
    delta = inst.delta

    # Per original edge: bits of the endpoints and whether querying only one
    # endpoint resolves the pair (the other side must not straddle its value).
    edge_rules = []
    for i in range(n):
        for j in range(i + 1, n):
            if dependent(iv[i], iv[j], delta):
                ok_i_only = not singleton_witness_value(iv[j], vals[i], delta)
                ok_j_only = not singleton_witness_value(iv[i], vals[j], delta)
                edge_rules.append((1 << i, 1 << j, ok_i_only, ok_j_only))

    # Subset-sum costs by dynamic programming on the lowest set bit.
    cost = [Fraction(0)] * (1 << n)
    bit_cost = [iv[i].cost for i in range(n)]
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        cost[mask] = cost[mask & (mask - 1)] + bit_cost[low]

    best: Optional[Fraction] = None
    minimizers: list[frozenset[int]] = []
    for mask in range(1 << n):
        if best is not None and cost[mask] > best:
            continue
        feasible = True
        for bi, bj, ok_i, ok_j in edge_rules:
            has_i = mask & bi
            has_j = mask & bj
            if has_i and has_j:
                continue
            if has_i and ok_i:
                continue
            if has_j and ok_j:
                continue
            feasible = False
            break
        if not feasible:
            continue
        c = cost[mask]
        members = frozenset(i for i in range(n) if mask & (1 << i))
        if best is None or c < best:
            best = c
            minimizers = [members]
        elif c == best:
            minimizers.append(members)
    assert best is not None  # mask with everything queried is always feasible
    minimizers.sort(key=lambda s: tuple(sorted(s)))
    return best, tuple(minimizers)


def oblivious_query_set(
    source: Union[Instance, KnowledgeState, DependencyGraph], delta=None
) -> frozenset[int]:
    """Every non-trivial interval with at least one dependency.

    The best a strategy that never looks at answers can do: any non-trivial
    interval with a dependency might be needed, and an adversary can make
    each one needed.  Trivial intervals are skipped even when dependent: a
    revealed point can never be dependent on a trivial interval (that would
    force its width above twice the threshold), so querying the non-trivial
    side of each edge always suffices.
    """
    if isinstance(source, DependencyGraph):
        g = source
    else:
        g = build_graph(source, delta)
    if isinstance(source, Instance) and delta is None:
        d: Optional[Fraction] = source.delta
    elif delta is not None:
        d = scalar(delta)
    else:
        d = None
    active = g.active_vertices()
    if d is None or g.intervals is None:
        return frozenset(active)
    return frozenset(v for v in active if not is_trivial(g.intervals[v], d))


def cpcp_brute_force_optimum(
    inst: Instance,
) -> tuple[Fraction, tuple[int, ...]]:
    """Optimal refinement-model spend by enumerating script-prefix vectors.

    Each item may be queried 0..len(script) times; a vector of prefix
    lengths is feasible when the resulting current intervals are pairwise
    independent.  Returns the minimum total cost and the lexicographically
    smallest minimizing vector.  Items without a script get the 1-step
    script that jumps to their value.
    """
    n = inst.n
    scripts: list[tuple[UncertainInterval, ...]] = []
    for i in range(n):
        if inst.refinements is not None and inst.refinements[i] is not None:
            scripts.append(inst.refinements[i])
        else:
            if inst.values is None:
                raise MissingRealization(
                    f"item {i} has neither a refinement script nor a value"
                )
            v = inst.values[i]
            scripts.append((UncertainInterval(v, v, inst.intervals[i].cost),))

    total = 1
    for s in scripts:
        total *= len(s) + 1
        if total > CPCP_ENUMERATION_LIMIT:
            raise TooLarge(
                f"prefix enumeration exceeds {CPCP_ENUMERATION_LIMIT} vectors"
            )

    def step_cost(i: int, t: int) -> Fraction:
        if inst.time_costs is not None and inst.time_costs[i] is not None:
            return inst.time_costs[i][t]
        return inst.intervals[i].cost

    prefix_cost: list[list[Fraction]] = []
    for i in range(n):
        row = [Fraction(0)]
        for t in range(len(scripts[i])):
            row.append(row[-1] + step_cost(i, t))
        prefix_cost.append(row)

    best: Optional[Fraction] = None
    best_vec: Optional[tuple[int, ...]] = None
    for vec in product(*(range(len(s) + 1) for s in scripts)):
        c = sum((prefix_cost[i][k] for i, k in enumerate(vec)), start=Fraction(0))
        # product() runs in lexicographic order, so the first vector seen at
        # any given cost is the lexicographically smallest one.
        if best is not None and c >= best:
            continue
        cur = [
            scripts[i][k - 1] if k >= 1 else inst.intervals[i]
            for i, k in enumerate(vec)
        ]
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                if dependent(cur[i], cur[j], inst.delta):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            best = c
            best_vec = vec
    assert best is not None and best_vec is not None  # full prefixes are feasible
    return best, best_vec
