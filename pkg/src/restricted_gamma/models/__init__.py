"""Core data models for restricted-gamma."""

from .data import (
    CanonicalForm,
    CellReport,
    Chain,
    CollinearityReport,
    Dataset,
    EstimatorTag,
    FitResult,
    GofReport,
    MleMode,
    PosteriorSummary,
    ProposalCovariance,
    ProposalMode,
    ScenarioReport,
)

__all__ = [
    "CanonicalForm",
    "CellReport",
    "Chain",
    "CollinearityReport",
    "Dataset",
    "EstimatorTag",
    "FitResult",
    "GofReport",
    "MleMode",
    "PosteriorSummary",
    "ProposalCovariance",
    "ProposalMode",
    "ScenarioReport",
]
