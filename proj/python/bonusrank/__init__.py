"""Explain a ranking by a linear scoring function plus a few additive bonuses."""

from ._core import (
    ContractError,
    Dataset,
    Error,
    Explanation,
    Group,
    InputError,
    InternalConsistencyError,
    InvariantError,
    RefusalError,
    bonus_count_for,
    count_regions,
    explain_milp,
    explain_multigroup,
    explain_singleton,
    export_model,
    forced_bonus_tuples,
    gen_synthetic,
    lis,
    max1in2sat,
    pairwise_logistic,
    ranking_from_weights,
    read_ranking,
    sampling_baseline,
    verify,
)

__all__ = [
    "ContractError",
    "Dataset",
    "Error",
    "Explanation",
    "Group",
    "InputError",
    "InternalConsistencyError",
    "InvariantError",
    "RefusalError",
    "bonus_count_for",
    "count_regions",
    "explain_milp",
    "explain_multigroup",
    "explain_singleton",
    "export_model",
    "forced_bonus_tuples",
    "gen_synthetic",
    "lis",
    "max1in2sat",
    "pairwise_logistic",
    "ranking_from_weights",
    "read_ranking",
    "sampling_baseline",
    "verify",
]
