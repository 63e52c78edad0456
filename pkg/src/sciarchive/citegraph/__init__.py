"""Reference resolution and the forward-link citation graph."""

from .resolve import (
    ResolverIndex,
    build_resolver_index,
    normalize_title,
    resolve_reference,
    trigram_similarity,
)
from .links import (
    add_reference,
    build_forward_links,
    cited_reference_search,
    cluster_forward_links,
    commit_resolution,
    forward_links,
    forward_links_of,
)

__all__ = [
    "ResolverIndex",
    "add_reference",
    "build_forward_links",
    "build_resolver_index",
    "cited_reference_search",
    "cluster_forward_links",
    "commit_resolution",
    "forward_links",
    "forward_links_of",
    "normalize_title",
    "resolve_reference",
    "trigram_similarity",
]
