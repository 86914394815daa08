"""Exact rational models of mapping spaces and related invariants."""
from .cdga import (INFINITY, FiniteAlgebra, FreeModel, connectivity, differential_length,
                   dimension, nilpotency, split_basis, validate_finite, validate_free)
from .cohomology import cohomology, cup_length, freeness_check
from .dsl import dump, load, load_file, parse
from .gca import Elem, FreeAlgebra
from .haefliger import MapModel, build_map_model, verify_morphism
from .reduction import (freeness_pipeline, hn_check, hn_structure, kill_acyclic,
                        nonfree_witness, postnikov_tower)

__all__ = [
    "INFINITY", "FiniteAlgebra", "FreeModel", "connectivity", "differential_length",
    "dimension", "nilpotency", "split_basis", "validate_finite", "validate_free",
    "cohomology", "cup_length", "freeness_check", "dump", "load", "load_file", "parse",
    "Elem", "FreeAlgebra", "MapModel", "build_map_model", "verify_morphism",
    "freeness_pipeline", "hn_check", "hn_structure", "kill_acyclic", "nonfree_witness",
    "postnikov_tower",
]
