"""Documentation goals: summary, technical report with concept groups, and a
DOT class hierarchy."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .model import (
    AnnotationAssertion,
    Axiom,
    ClassAssertion,
    Declaration,
    Existential,
    Iri,
    NamedClass,
    Ontology,
    PropertyAssertion,
    SubClassOf,
    axiom_expressions,
    expression_entities,
    signature,
)
from .ofn import FORMAT_NAME
from .reasoner import detect_profile

SUMMARY_FILE = "summary.md"
TECHNICAL_FILE = "technical.md"
GRAPH_FILE = "hierarchy.dot"


@dataclass(frozen=True)
class OntologyStats:
    class_count: int
    object_property_count: int
    data_property_count: int
    annotation_property_count: int
    individual_count: int
    axiom_count: int
    import_count: int
    detected_profile: str

    @classmethod
    def of(cls, ontology: Ontology) -> "OntologyStats":
        sig = signature(ontology)
        return cls(len(sig.classes), len(sig.object_properties), len(sig.data_properties),
                   len(sig.annotation_properties), len(sig.individuals),
                   len(ontology.axioms), len(ontology.imports), detect_profile(ontology))


@dataclass(frozen=True)
class ConceptGroup:
    representative: Iri
    members: frozenset
    cohesion: Fraction


def _mentions(axiom: Axiom) -> set:
    classes: set = set()
    roles: set = set()
    for expr in axiom_expressions(axiom):
        expression_entities(expr, classes, roles)
    found = classes | roles
    if isinstance(axiom, ClassAssertion):
        found.add(axiom.individual)
    elif isinstance(axiom, PropertyAssertion):
        found.update((axiom.role, axiom.subject, axiom.object))
    elif isinstance(axiom, AnnotationAssertion):
        found.update((axiom.property, axiom.subject))
    elif isinstance(axiom, Declaration):
        found.add(axiom.entity)
    return found


def told_edges(ontology: Ontology) -> set[tuple[Iri, Iri]]:
    """Atomic (sub, sup) pairs stated by SubClassOf axioms."""
    return {(ax.sub.iri, ax.sup.iri) for ax in ontology.axioms
            if isinstance(ax, SubClassOf) and isinstance(ax.sub, NamedClass)
            and isinstance(ax.sup, NamedClass) and ax.sub != ax.sup}


def _role_users(ontology: Ontology) -> dict:
    """role -> named classes occurring in axioms with an existential over it."""
    users = defaultdict(set)

    def roles_in(expr, out):
        if isinstance(expr, Existential):
            out.add(expr.role)
            roles_in(expr.filler, out)
        elif hasattr(expr, "operands"):
            for op in expr.operands:
                roles_in(op, out)

    for ax in ontology.axioms:
        roles: set = set()
        classes: set = set()
        for expr in axiom_expressions(ax):
            roles_in(expr, roles)
            expression_entities(expr, classes, set())
        for r in roles:
            users[r] |= classes
    return users


def grouping_graph(ontology: Ontology) -> tuple[set, set]:
    """Undirected graph over named classes: told subclass edges plus links
    between classes that use the same role in existential restrictions."""
    nodes = set(signature(ontology).classes)
    edges = {frozenset(e) for e in told_edges(ontology)}
    for r, classes in _role_users(ontology).items():
        for a, b in combinations(sorted(classes), 2):
            edges.add(frozenset((a, b)))
    return nodes, edges


def _representative(members, degree) -> Iri:
    return min(members, key=lambda m: (-degree[m], m))


def concept_groups(ontology: Ontology, max_groups: int = 10) -> list[ConceptGroup]:
    if max_groups < 1:
        raise ValueError("max_groups must be at least 1")
    nodes, edges = grouping_graph(ontology)
    adjacency = defaultdict(set)
    for e in edges:
        a, b = tuple(e)
        adjacency[a].add(b)
        adjacency[b].add(a)
    degree = {n: len(adjacency[n]) for n in nodes}

    components = []
    seen: set = set()
    for start in sorted(nodes):
        if start in seen:
            continue
        comp, stack = set(), [start]
        seen.add(start)
        while stack:
            n = stack.pop()
            comp.add(n)
            for m in adjacency[n]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        components.append(frozenset(comp))

    while len(components) > max_groups:
        components.sort(key=lambda c: (len(c), _representative(c, degree)))
        merged = components[0] | components[1]
        components = [merged] + components[2:]

    groups = []
    for comp in components:
        touching = [e for e in edges if e & comp]
        internal = [e for e in touching if e <= comp]
        cohesion = Fraction(len(internal), len(touching)) if touching else Fraction(1)
        groups.append(ConceptGroup(_representative(comp, degree), comp, cohesion))
    groups.sort(key=lambda g: (-len(g.members), g.representative))
    return groups


# -- documents ----------------------------------------------------------------


def summary_report(ontology: Ontology) -> str:
    stats = OntologyStats.of(ontology)
    lines = ["# Ontology summary", "", "## General", ""]
    lines.append(f"- Ontology IRI: {ontology.iri or '(none)'}")
    lines.append(f"- Version IRI: {ontology.version_iri or '(none)'}")
    anns = sorted(a.ofn for a in ontology.annotations)
    if anns:
        lines.append("- Annotations:")
        lines += [f"  - {a}" for a in anns]
    lines += ["", "## Format", "", FORMAT_NAME, "", "## Profile", "", stats.detected_profile,
              "", "## Imports", ""]
    lines += [f"- {iri}" for iri in ontology.imports]
    lines += ["", "## Statistics", "", "| Metric | Count |", "|---|---|"]
    rows = [("Classes", stats.class_count),
            ("Object properties", stats.object_property_count),
            ("Data properties", stats.data_property_count),
            ("Annotation properties", stats.annotation_property_count),
            ("Individuals", stats.individual_count),
            ("Axioms", stats.axiom_count),
            ("Imports", stats.import_count)]
    lines += [f"| {name} | {count} |" for name, count in rows]
    return "\n".join(lines) + "\n"


def technical_report(ontology: Ontology, max_groups: int = 10) -> str:
    sig = signature(ontology)
    edges = told_edges(ontology)
    supers, subs = defaultdict(set), defaultdict(set)
    for a, b in edges:
        supers[a].add(b)
        subs[b].add(a)
    usage = defaultdict(int)
    for ax in ontology.axioms:
        for iri in _mentions(ax):
            usage[iri] += 1
    annotations = defaultdict(list)
    for ax in ontology.axioms:
        if isinstance(ax, AnnotationAssertion):
            annotations[ax.subject].append(f"{ax.property.ofn} {ax.value.ofn}")

    lines = ["# Technical report", ""]
    for i, group in enumerate(concept_groups(ontology, max_groups), start=1):
        lines += [f"## Group {i}: {group.representative.local_name}", "",
                  f"cohesion: {group.cohesion}", ""]
        for cls in sorted(group.members):
            lines += [f"### Class {cls}", ""]
            lines.append("- superclasses: " + (", ".join(str(s) for s in sorted(supers[cls])) or "-"))
            lines.append("- subclasses: " + (", ".join(str(s) for s in sorted(subs[cls])) or "-"))
            for a in sorted(annotations[cls]):
                lines.append(f"- annotation: {a}")
            lines.append(f"- axioms: {usage[cls]}")
            lines.append("")
    props = sorted(sig.object_properties | sig.data_properties | sig.annotation_properties)
    if props:
        lines += ["## Properties", ""]
        for p in props:
            lines += [f"### Property {p}", "", f"- usage: {usage[p]}", ""]
    return "\n".join(lines).rstrip("\n") + "\n"


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_graph(ontology: Ontology) -> str:
    classes = sorted(signature(ontology).classes)
    ids: dict[Iri, str] = {}
    taken: set = set()
    for cls in classes:
        base = cls.local_name
        candidate, n = base, 1
        while candidate in taken:
            n += 1
            candidate = f"{base}_{n}"
        taken.add(candidate)
        ids[cls] = candidate
    lines = ["digraph hierarchy {", "  rankdir=BT;"]
    for cls in classes:
        lines.append(f"  {_dot_id(ids[cls])} [label={_dot_id(cls.local_name)}, "
                     f"tooltip={_dot_id(cls.value)}];")
    for a, b in sorted(told_edges(ontology)):
        lines.append(f"  {_dot_id(ids[a])} -> {_dot_id(ids[b])};")
    lines.append("}")
    return "\n".join(lines) + "\n"
