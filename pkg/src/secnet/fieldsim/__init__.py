"""Finite-field packet simulator for the secure-message schemes."""

from .gf import AES_POLY, GF, FieldElement, field
from .mds import FieldTooSmallError, mds_matrix
from .simulate import (
    CSV_COLUMNS,
    ConcentrationSummary,
    Packet,
    SimConfig,
    SimulationError,
    SimulationReport,
    arq_overhear_prob,
    measure_concentration,
    reports_to_csv,
    simulate,
    simulate_trials,
    summarize,
)

__all__ = [
    "AES_POLY",
    "CSV_COLUMNS",
    "ConcentrationSummary",
    "FieldElement",
    "FieldTooSmallError",
    "GF",
    "Packet",
    "SimConfig",
    "SimulationError",
    "SimulationReport",
    "arq_overhear_prob",
    "field",
    "mds_matrix",
    "measure_concentration",
    "reports_to_csv",
    "simulate",
    "simulate_trials",
    "summarize",
]
