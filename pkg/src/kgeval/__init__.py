"""Evaluation of generated knowledge graphs: exact matching, edit paths, soft matching."""

from .calibration import PerturbationPlan, perturb, recovery_check
from .exact import TripleMatchScore, graph_match_fraction, triple_match
from .ged import (
    CostModel,
    EditPair,
    EditResult,
    LegacyRates,
    RateReport,
    brute_force_ged,
    ged,
    legacy_rates,
    rates_from_path,
)
from .graph import KnowledgeGraph, NormalizationConfig, Triple, graph_from_triples, graphs_identical, normalize_label
from .parser import ParseOutcome, ParseStatus, extract_triples, is_well_formed, parse_rate
from .runner import aggregate, evaluate_dataset, evaluate_example, load_dataset, render_report
from .soft import GbsScore, gbs_score, gm_gbs, lexical_provider, remote_provider, serialize_edge

__version__ = "0.1.0"
