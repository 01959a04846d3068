"""Data models and structures for fibnormal"""

from fibnormal.data.models import (
    CATEGORIES,
    block_label,
    FibPair,
    DigitString,
    FibCursor,
    BlockPosition,
    StatReport,
    RegressionFit,
    TermDelta,
    CensusRow,
    BaselineRatio,
    EvolutionRow,
    CriterionCheck,
    RaggedColumn,
    CounterexampleStats,
    SigmaWitness,
    SigmaCensusRow,
    ReachabilityFlags,
    GoldenCheck,
)

__all__ = [
    "CATEGORIES", "block_label", "FibPair", "DigitString", "FibCursor", "BlockPosition",
    "StatReport", "RegressionFit", "TermDelta", "CensusRow", "BaselineRatio", "EvolutionRow",
    "CriterionCheck", "RaggedColumn", "CounterexampleStats", "SigmaWitness", "SigmaCensusRow",
    "ReachabilityFlags", "GoldenCheck",
]
