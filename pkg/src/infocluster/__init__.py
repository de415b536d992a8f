"""Clusters under information distance.

Exact finite complexity models (set model, description systems), cluster
and daisy machinery with referential cores, triple-information extraction,
and a compression-based distance for real byte corpora.
"""
from __future__ import annotations

from .clusters import Cluster, DistanceMatrix, distance_matrix, mine_clusters, validate_cluster
from .daisy import (
    CoreCertificate,
    ReferentialRegistry,
    certify_core,
    daisy_cluster_check,
    daisy_members,
    merge_check,
    multiplicity_check,
    path_lemma_check,
    referential_filter,
)
from .models import DescriptionSystem, Program, SetModel, SetString, Universe
from .ncd import CompressorHandle, cond_proxy, ncd, proxy_distance
from .pipeline import run_pipeline
from .triple import extract_triple_core, nonshannon_slack, triple_report
from .verify import DEFAULT_SEED, run_verify_suite

__all__ = [
    "Cluster", "DistanceMatrix", "distance_matrix", "mine_clusters", "validate_cluster",
    "CoreCertificate", "ReferentialRegistry", "certify_core", "daisy_cluster_check", "daisy_members",
    "merge_check", "multiplicity_check", "path_lemma_check", "referential_filter",
    "DescriptionSystem", "Program", "SetModel", "SetString", "Universe",
    "CompressorHandle", "cond_proxy", "ncd", "proxy_distance",
    "run_pipeline", "extract_triple_core", "nonshannon_slack", "triple_report",
    "DEFAULT_SEED", "run_verify_suite",
]
