"""Variants and local subsemigroups of full transformation semigroups."""

from .transformation import Transformation, compose, conjugate, enumerate_all, from_tabular, to_tabular
from .semigroup import FiniteSemigroup, ProductRule, closure, full_tn, local_subsemigroup, sandwich_set, variant
from .green import egg_box, green_structure
from .witness import Embedding, IsoWitness, Verdict, WitnessError, verify_embedding, verify_witness
from .constructions import (
    InversePair,
    canonical_inverse,
    idempotent_normalizer,
    local_as_variant,
    restriction_witness,
    variant_as_local,
    variant_embedding,
)
from .oracle import SearchBudget, are_isomorphic, find_embedding, minimal_degree

__version__ = "0.1.0"

__all__ = [
    "Transformation", "compose", "conjugate", "enumerate_all", "from_tabular", "to_tabular",
    "FiniteSemigroup", "ProductRule", "closure", "full_tn", "local_subsemigroup", "sandwich_set", "variant",
    "egg_box", "green_structure",
    "Embedding", "IsoWitness", "Verdict", "WitnessError", "verify_embedding", "verify_witness",
    "InversePair", "canonical_inverse", "idempotent_normalizer", "local_as_variant",
    "restriction_witness", "variant_as_local", "variant_embedding",
    "SearchBudget", "are_isomorphic", "find_embedding", "minimal_degree",
]
