"""Structural and semantic comparison of two ontology versions."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import Declaration, EntityKind, Ontology, axiom_sort_key, signature
from .reasoner import DEFAULT_ATOM_LIMIT, classify


class VerdictNote(enum.Enum):
    EXACT = "Exact"
    APPROXIMATE = "ApproximateDueToProfileViolations"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class DiffReport:
    structural_added: frozenset = frozenset()
    structural_removed: frozenset = frozenset()
    semantic_added: frozenset = frozenset()
    semantic_removed: frozenset = frozenset()
    verdict_note: VerdictNote = VerdictNote.EXACT
    imports_added: tuple = ()
    imports_removed: tuple = ()


def structural_diff(before: Ontology, after: Ontology) -> tuple[frozenset, frozenset]:
    b, a = before.axiom_set, after.axiom_set
    return a - b, b - a


def _with_classes(ontology: Ontology, classes) -> Ontology:
    decls = [Declaration(EntityKind.CLASS, c) for c in classes]
    return ontology.add(*decls)


def semantic_diff(before: Ontology, after: Ontology,
                  atom_limit: int = DEFAULT_ATOM_LIMIT) -> DiffReport:
    """Both structural and named-class subsumption differences.

    Each side is classified over the union of both class signatures, so a
    class that exists on one side only still takes part in the comparison.
    """
    classes = signature(before).classes | signature(after).classes
    cb = classify(_with_classes(before, classes), atom_limit)
    ca = classify(_with_classes(after, classes), atom_limit)
    pb, pa = cb.named_pairs(), ca.named_pairs()
    added, removed = structural_diff(before, after)
    note = VerdictNote.APPROXIMATE if (cb.profile_violations or ca.profile_violations) \
        else VerdictNote.EXACT
    return DiffReport(
        structural_added=added,
        structural_removed=removed,
        semantic_added=pa - pb,
        semantic_removed=pb - pa,
        verdict_note=note,
        imports_added=tuple(sorted(set(after.imports) - set(before.imports))),
        imports_removed=tuple(sorted(set(before.imports) - set(after.imports))),
    )


def render_diff(report: DiffReport) -> str:
    lines = ["== Structural =="]
    for ax in sorted(report.structural_added, key=axiom_sort_key):
        lines.append(f"+ {ax.ofn}")
    for ax in sorted(report.structural_removed, key=axiom_sort_key):
        lines.append(f"- {ax.ofn}")
    if report.imports_added or report.imports_removed:
        lines.append("== Imports ==")
        lines += [f"+ {iri.ofn}" for iri in report.imports_added]
        lines += [f"- {iri.ofn}" for iri in report.imports_removed]
    lines.append("== Semantic ==")
    lines.append(f"verdict: {report.verdict_note}")
    for sub, sup in sorted(report.semantic_added):
        lines.append(f"+ {sub.ofn} SubClassOf {sup.ofn}")
    for sub, sup in sorted(report.semantic_removed):
        lines.append(f"- {sub.ofn} SubClassOf {sup.ofn}")
    return "\n".join(lines) + "\n"
