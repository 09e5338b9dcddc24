"""
Walk co-occurrence module initialization.

This module turns a graph into the co-occurrence counts that GVNR factorizes.
"""

from walk_cooc.services import (
    CoocMatrix,
    WalkConfig,
    count_cooccurrences,
    filter_min_count,
    from_entries,
    generate_walks,
    power_law_diagnostic,
    visit_frequencies,
)

__all__ = [
    'CoocMatrix', 'WalkConfig', 'count_cooccurrences', 'filter_min_count',
    'from_entries', 'generate_walks', 'power_law_diagnostic', 'visit_frequencies',
]
