"""Sorting uncertain data with queries: exact offline optima, adaptive and
randomized online strategies, advice-driven strategies, and the interval
machinery underneath them.

Every number is an exact rational; every strategy ends by producing a
provably correct order from what it queried.
"""

from .core import (
    Instance,
    KnowledgeState,
    Permutation,
    Scalar,
    UncertainInterval,
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
from .errors import (
    CycleDetected,
    DeltaNotZero,
    InvariantViolation,
    MissingRealization,
    NotChordal,
    NotSimplicial,
    NotTree,
    ParseError,
    QuerysortError,
    RepeatQuery,
    ScriptExhausted,
    TooLarge,
    TooManyBranches,
    UnresolvedDependency,
)
from .graph import (
    CoTTFunctions,
    DependencyGraph,
    build_graph,
    components,
    cott_graph,
    cott_to_instance,
    find_triangle,
    instance_to_cott,
    is_chordal,
    longest_path_caterpillar,
    max_weight_independent_set,
    mcs_peo,
    min_cost_vertex_cover,
    peo_min_right,
    verify_peo,
)
from .offline import (
    brute_force_optimum,
    cpcp_brute_force_optimum,
    feasible_query_set,
    forced_query_set,
    oblivious_query_set,
    optimum_query_set,
    resolved_by,
)
from .online import (
    FIXED,
    HALF,
    SQRT3,
    AdviceOracle,
    CpcpEnvironment,
    Environment,
    ProbabilityRule,
    RandomCoin,
    ReplayCoin,
    RunReport,
    Sqrt3Prob,
    advice_half,
    advice_lg3,
    algorithm1,
    algorithm2,
    algorithm3_cpcp,
    expected_cost_exact,
    no_2component_after_preprocess,
    residual_component_sizes,
    run_oblivious,
    simple_adaptive,
    simple_adaptive_stable_sort,
    vc_adaptive,
)
from .instances import (
    adversarial_search,
    asteroid_expected_edges,
    asteroid_realization,
    deserialize,
    fig1_instance,
    gen_advice_triangles,
    gen_cost_path,
    gen_cpcp_adversary,
    gen_figure3_chain,
    gen_independent_pairs,
    gen_laminar,
    gen_lemma4_pair,
    gen_lemma7_two_triangles,
    gen_nested_star,
    gen_random,
    gen_random_scripted,
    gen_triangle_chain,
    serialize,
)

__version__ = "1.0.0"

__all__ = [
    "AdviceOracle",
    "CoTTFunctions",
    "CpcpEnvironment",
    "CycleDetected",
    "DeltaNotZero",
    "DependencyGraph",
    "Environment",
    "FIXED",
    "HALF",
    "Instance",
    "InvariantViolation",
    "KnowledgeState",
    "MissingRealization",
    "NotChordal",
    "NotSimplicial",
    "NotTree",
    "ParseError",
    "Permutation",
    "ProbabilityRule",
    "QuerysortError",
    "RandomCoin",
    "RepeatQuery",
    "ReplayCoin",
    "RunReport",
    "SQRT3",
    "Scalar",
    "ScriptExhausted",
    "Sqrt3Prob",
    "TooLarge",
    "TooManyBranches",
    "UncertainInterval",
    "UnresolvedDependency",
    "advice_half",
    "advice_lg3",
    "adversarial_search",
    "algorithm1",
    "algorithm2",
    "algorithm3_cpcp",
    "asteroid_expected_edges",
    "asteroid_realization",
    "brute_force_optimum",
    "build_graph",
    "build_permutation",
    "components",
    "cott_graph",
    "cott_to_instance",
    "cpcp_brute_force_optimum",
    "dependent",
    "deserialize",
    "expected_cost_exact",
    "feasible_query_set",
    "fig1_instance",
    "find_triangle",
    "forced_query_set",
    "gen_advice_triangles",
    "gen_cost_path",
    "gen_cpcp_adversary",
    "gen_figure3_chain",
    "gen_independent_pairs",
    "gen_laminar",
    "gen_lemma4_pair",
    "gen_lemma7_two_triangles",
    "gen_nested_star",
    "gen_random",
    "gen_random_scripted",
    "gen_triangle_chain",
    "instance_to_cott",
    "interval",
    "is_chordal",
    "is_trivial",
    "isqrt_bounds",
    "longest_path_caterpillar",
    "max_weight_independent_set",
    "mcs_peo",
    "min_cost_vertex_cover",
    "no_2component_after_preprocess",
    "oblivious_query_set",
    "optimum_query_set",
    "peo_min_right",
    "resolved_by",
    "residual_component_sizes",
    "run_oblivious",
    "scalar",
    "scalar_str",
    "serialize",
    "shrink_delta",
    "simple_adaptive",
    "simple_adaptive_stable_sort",
    "singleton_witness_static",
    "singleton_witness_value",
    "valid_permutation",
    "vc_adaptive",
    "verify_peo",
]
