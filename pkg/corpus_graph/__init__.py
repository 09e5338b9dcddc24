"""
Corpus graph module initialization.

This module loads citation networks with bag-of-words node attributes.
"""

from corpus_graph.services import (
    Dataset,
    LoadReport,
    dump_cora_format,
    induced_subgraph,
    load_cora_format,
    load_dataset,
    load_report,
)

__all__ = [
    'Dataset', 'LoadReport', 'dump_cora_format', 'induced_subgraph',
    'load_cora_format', 'load_dataset', 'load_report',
]
