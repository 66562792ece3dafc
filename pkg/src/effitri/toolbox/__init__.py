"""Supporting machinery: Pachner moves, signatures, census, homology, lint."""
from .census import census
from .homology import HomologyGroup, direct_sum, homology_h1
from .isosig import canonical_form, is_isomorphic, iso_signature
from .lint import EdgeOrderEntry, edge_order_report
from .pachner import pachner

__all__ = [
    "EdgeOrderEntry",
    "HomologyGroup",
    "canonical_form",
    "census",
    "direct_sum",
    "edge_order_report",
    "homology_h1",
    "is_isomorphic",
    "iso_signature",
    "pachner",
]
