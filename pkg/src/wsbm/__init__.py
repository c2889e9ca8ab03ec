"""Weighted stochastic block models fitted by variational Bayes."""
from .families import DomainError, SupportError, get_family
from .graph import WeightedGraph, bundle_index, load_graph
from .metrics import hard_assignment, vi
from .selection import log_bayes_factor, select_k
from .synth import GeneratorSpec, default_testbed, generate, two_block_demo
from .vb import FitConfig, FitResult, fit

__all__ = [
    "DomainError",
    "SupportError",
    "get_family",
    "WeightedGraph",
    "bundle_index",
    "load_graph",
    "hard_assignment",
    "vi",
    "log_bayes_factor",
    "select_k",
    "GeneratorSpec",
    "default_testbed",
    "generate",
    "two_block_demo",
    "FitConfig",
    "FitResult",
    "fit",
]
