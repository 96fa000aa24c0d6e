"""Optimal alignment scores under perturbed scoring matrices."""

from ._core import (
    AlignFluctError,
    Alphabet,
    AlphabetMismatch,
    ConfigError,
    InvalidAlignment,
    NoOccurrence,
    ScoringMatrix,
    SizeCapExceeded,
    SymbolError,
    brute_force_score,
    c_n,
    estimate,
    expected_change,
    group_change_T,
    lambda_margin,
    linear_combine,
    norm_delta,
    norm_inf,
    optimal_alignment,
    optimal_score,
    pvalue_bound,
    run_cli,
    single_letter_T,
)

__all__ = [name for name in dir() if not name.startswith("_")]
