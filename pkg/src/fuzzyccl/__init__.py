"""Consistency/consensus optimization of fuzzy preference relations."""
from .annealer import (
    OptimizationResult,
    SAParams,
    SuggestedChange,
    Termination,
    anneal,
    anneal_restarts,
    cost,
    neighbor,
    suggest_changes,
)
from .completion import EstimateBundle, candidate_estimates, complete, complete_panel
from .fpr import (
    CompleteFPR,
    ExpertPanel,
    IncompleteFPR,
    WeightConfig,
    is_additively_consistent,
    is_reciprocal,
    validate_complete,
    validate_incomplete,
)
from .metrics import (
    AnalysisReport,
    ConsensusReport,
    ConsistencyReport,
    analyze_panel,
    ccl,
    collective_similarity,
    consensus_degrees,
    consistency_level,
    consistency_pair,
    global_consistency,
    pair_similarity,
)

__version__ = "0.1.0"
