from .model import (
    N_ORIGINAL_LABELS,
    UNCERTAIN,
    Issue,
    Label,
    Taxonomy,
    TaxonomyError,
    ValidationReport,
    default_taxonomy,
    default_taxonomy_text,
    derive_uncertain,
    load_taxonomy,
    parse_taxonomy,
    serialize,
    validate,
)

__all__ = [
    "N_ORIGINAL_LABELS",
    "UNCERTAIN",
    "Issue",
    "Label",
    "Taxonomy",
    "TaxonomyError",
    "ValidationReport",
    "default_taxonomy",
    "default_taxonomy_text",
    "derive_uncertain",
    "load_taxonomy",
    "parse_taxonomy",
    "serialize",
    "validate",
]
