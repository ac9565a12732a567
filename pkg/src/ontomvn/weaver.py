"""Aspect weaving: configure an ontology by picking the axiom modules whose
aspect annotations match the requested selectors."""

from __future__ import annotations

import dataclasses
import warnings
from collections import Counter
from dataclasses import dataclass

from .errors import ConfigError
from .model import Annotation, Iri, Literal, Ontology, axiom_aspects

DEFAULT_ASPECTS_IRI = "http://corporate-semantic-web.de/aspectOWL#hasAspect"
APPLIED_ASPECTS_IRI = "urn:ontomvn:appliedAspects"


class UnknownAspectWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AspectSelector:
    """Exact aspect IRI, or an IRI prefix when the pattern ends with ``*``."""

    pattern: str

    def __post_init__(self):
        Iri(self.pattern.rstrip("*") or "invalid")

    @property
    def is_prefix(self) -> bool:
        return self.pattern.endswith("*")

    def matches(self, aspect: Iri) -> bool:
        if self.is_prefix:
            return aspect.value.startswith(self.pattern[:-1])
        return aspect.value == self.pattern


@dataclass(frozen=True)
class WeaveConfig:
    user_aspects: tuple = ()
    aspects_iri: Iri = Iri(DEFAULT_ASPECTS_IRI)
    include_original_axioms: bool = True

    @classmethod
    def from_params(cls, params: dict) -> "WeaveConfig":
        """Build from goal parameters (``userAspects``, ``aspectsIRI``,
        ``includeOriginalAxioms``)."""
        raw = params.get("userAspects", [])
        if isinstance(raw, str):
            raw = [p.strip() for p in raw.split(",") if p.strip()]
        include = str(params.get("includeOriginalAxioms", "true")).strip().lower()
        if include not in ("true", "false"):
            raise ConfigError(f"includeOriginalAxioms must be true or false, not {include!r}")
        try:
            return cls(
                tuple(AspectSelector(p) for p in raw),
                Iri(params.get("aspectsIRI") or DEFAULT_ASPECTS_IRI),
                include == "true",
            )
        except ValueError as exc:
            raise ConfigError(f"apply-aspects: {exc}") from None


def list_aspects(ontology: Ontology, aspects_iri: Iri) -> dict:
    counts: Counter = Counter()
    for ax in ontology.axioms:
        counts.update(axiom_aspects(ax, aspects_iri))
    return {iri: counts[iri] for iri in sorted(counts)}


def apply_aspects(ontology: Ontology, config: WeaveConfig) -> Ontology:
    kept = []
    used = set()
    for ax in ontology.axioms:
        aspects = axiom_aspects(ax, config.aspects_iri)
        if not aspects:
            if config.include_original_axioms:
                kept.append(ax)
            continue
        hit = False
        for sel in config.user_aspects:
            if any(sel.matches(a) for a in aspects):
                used.add(sel)
                hit = True
        if hit:
            kept.append(ax)

    for sel in config.user_aspects:
        if sel not in used:
            warnings.warn(f"aspect selector {sel.pattern} matched no axiom",
                          UnknownAspectWarning, stacklevel=2)

    provenance = Annotation(Iri(APPLIED_ASPECTS_IRI),
                            Literal(",".join(s.pattern for s in config.user_aspects)))
    return dataclasses.replace(ontology, axioms=tuple(kept),
                               annotations=ontology.annotations | {provenance})
