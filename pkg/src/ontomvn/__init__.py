"""Build tooling for ontology projects: repositories, import resolution,
aspect weaving, EL reasoning, diffs, tests and reports."""

from .descriptor import Catalog, Coordinate, ProjectDescriptor, parse_catalog, parse_descriptor
from .model import Iri, Ontology
from .ofn import parse_ontology, serialize_ontology

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "Coordinate",
    "Iri",
    "Ontology",
    "ProjectDescriptor",
    "parse_catalog",
    "parse_descriptor",
    "parse_ontology",
    "serialize_ontology",
]
