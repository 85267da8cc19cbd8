"""Exact combinatorics of the tropical and compactified Torelli maps."""

from .errors import ComputationalLimitError, TorelliError, ValidationError
from .forms import QuadraticForm, arithmetically_equivalent, graph_form
from .graphs import WeightedGraph, enumerate_stable_weighted_graphs, genus, is_stable
from .tropical import NodalModel, TropicalCurve, jacobian

__all__ = [
    "ComputationalLimitError",
    "NodalModel",
    "QuadraticForm",
    "TorelliError",
    "TropicalCurve",
    "ValidationError",
    "WeightedGraph",
    "arithmetically_equivalent",
    "enumerate_stable_weighted_graphs",
    "genus",
    "graph_form",
    "is_stable",
    "jacobian",
]
