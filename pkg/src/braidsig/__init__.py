"""Signatures, Seifert matrices and normal forms of positive braids."""
from __future__ import annotations

__version__ = "0.1.0"

from .braid import (  # noqa: E402
    BraidWord,
    RewriteMove,
    Syllable,
    apply_move,
    betti_number,
    bfs_equal,
    closure_components,
    enumerate_positive_words,
    exponent_sum,
    format_braid,
    parse_braid,
)

__all__ = [
    "BraidWord",
    "RewriteMove",
    "Syllable",
    "apply_move",
    "betti_number",
    "bfs_equal",
    "closure_components",
    "enumerate_positive_words",
    "exponent_sum",
    "format_braid",
    "parse_braid",
]
