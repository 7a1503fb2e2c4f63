"""Domain types for rotated odometer analysis."""

from .diagram import Edge, HeightVector, OrderedDiagram, PathPrefix, TelescopedSystem
from .dyadic import Dyadic
from .matrix import IntegerMatrix
from .odometer import NConvention, RotatedOdometer, n_exponent
from .permutation import Permutation
from .renormalization import CellMap, LevelRecord, PeriodicRegionClass, RenormSeq
from .spectra import (
    AlphabetChoice,
    DivisibilityVerdict,
    DyadicScan,
    EntropyTerm,
    FrobeniusForm,
    MeasureCandidate,
    MeasureReport,
    PerronData,
    ScanSummary,
    SeedChoice,
)
from .substitution import Substitution, word_text
from .surface import FlowSpec

__all__ = [
    "AlphabetChoice",
    "CellMap",
    "DivisibilityVerdict",
    "Dyadic",
    "DyadicScan",
    "Edge",
    "EntropyTerm",
    "FlowSpec",
    "FrobeniusForm",
    "HeightVector",
    "IntegerMatrix",
    "LevelRecord",
    "MeasureCandidate",
    "MeasureReport",
    "NConvention",
    "OrderedDiagram",
    "PathPrefix",
    "PerronData",
    "PeriodicRegionClass",
    "Permutation",
    "RenormSeq",
    "RotatedOdometer",
    "ScanSummary",
    "SeedChoice",
    "Substitution",
    "TelescopedSystem",
    "n_exponent",
    "word_text",
]
