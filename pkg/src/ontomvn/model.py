"""In-memory ontology model: the EL constructors, the axiom kinds the toolchain
understands, and annotations (which carry aspect links).

Every value is immutable. Constructors bring their operands into canonical
order, so structural equality coincides with equality of the canonical
functional-style rendering exposed as ``.ofn``.
"""

from __future__ import annotations

import dataclasses
import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Union

from .errors import ConfigError

OWL_NS = "http://www.w3.org/2002/07/owl#"
OWL_THING = OWL_NS + "Thing"
OWL_NOTHING = OWL_NS + "Nothing"

_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|\\^`]+$")


class InvalidIri(ValueError):
    pass


class ConflictingDeclaration(ConfigError):
    def __init__(self, iri: "Iri", kinds):
        self.iri = iri
        self.kinds = tuple(sorted(k.value for k in kinds))
        super().__init__(f"{iri} declared as {' and '.join(self.kinds)}")


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str) or not _ABSOLUTE_IRI.match(self.value):
            raise InvalidIri(f"not an absolute IRI: {self.value!r}")

    def __str__(self) -> str:
        return self.value

    @property
    def ofn(self) -> str:
        return f"<{self.value}>"

    @property
    def local_name(self) -> str:
        v = self.value
        for sep in ("#", "/", ":"):
            head, found, tail = v.rpartition(sep)
            if found and tail:
                return tail
        return v


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


@dataclass(frozen=True)
class Literal:
    value: str
    lang: str | None = None
    datatype: Iri | None = None

    def __post_init__(self):
        if self.lang is not None and self.datatype is not None:
            raise ValueError("a literal has either a language tag or a datatype")

    @property
    def ofn(self) -> str:
        text = f'"{_escape(self.value)}"'
        if self.lang:
            return f"{text}@{self.lang}"
        if self.datatype is not None:
            return f"{text}^^{self.datatype.ofn}"
        return text


AnnotationValue = Union[Iri, Literal]


@dataclass(frozen=True)
class Annotation:
    property: Iri
    value: AnnotationValue

    @property
    def ofn(self) -> str:
        return f"Annotation({self.property.ofn} {self.value.ofn})"


def _render_arg(arg) -> str:
    if isinstance(arg, str):
        return arg
    return arg.ofn


# -- class expressions --------------------------------------------------------


class ClassExpression:
    """Base of the EL class constructors."""

    ofn: str


@dataclass(frozen=True)
class NamedClass(ClassExpression):
    iri: Iri

    def __post_init__(self):
        if self.iri.value in (OWL_THING, OWL_NOTHING):
            raise ValueError("use Top()/Bottom() for owl:Thing/owl:Nothing")

    @cached_property
    def ofn(self) -> str:
        return self.iri.ofn


@dataclass(frozen=True)
class Top(ClassExpression):
    @property
    def ofn(self) -> str:
        return f"<{OWL_THING}>"


@dataclass(frozen=True)
class Bottom(ClassExpression):
    @property
    def ofn(self) -> str:
        return f"<{OWL_NOTHING}>"


@dataclass(frozen=True)
class Conjunction(ClassExpression):
    operands: tuple

    def __post_init__(self):
        flat = []
        for op in self.operands:
            if isinstance(op, Conjunction):
                flat.extend(op.operands)
            else:
                flat.append(op)
        ops = {op.ofn: op for op in flat}
        if len(ops) < 2:
            raise ValueError("a conjunction needs two distinct operands; use intersection()")
        object.__setattr__(self, "operands", tuple(ops[k] for k in sorted(ops)))

    @cached_property
    def ofn(self) -> str:
        return "ObjectIntersectionOf(" + " ".join(op.ofn for op in self.operands) + ")"


def intersection(*operands: ClassExpression) -> ClassExpression:
    """Conjunction of ``operands``, collapsing to the operand when only one is distinct."""
    flat: dict[str, ClassExpression] = {}
    for op in operands:
        for part in op.operands if isinstance(op, Conjunction) else (op,):
            flat[part.ofn] = part
    if not flat:
        raise ValueError("empty intersection")
    if len(flat) == 1:
        return next(iter(flat.values()))
    return Conjunction(tuple(flat.values()))


@dataclass(frozen=True)
class Existential(ClassExpression):
    role: Iri
    filler: ClassExpression

    @cached_property
    def ofn(self) -> str:
        return f"ObjectSomeValuesFrom({self.role.ofn} {self.filler.ofn})"


@dataclass(frozen=True)
class UnsupportedExpression(ClassExpression):
    """An OWL construct outside the EL subset, carried verbatim.

    ``args`` holds IRIs, literals, bare tokens (numbers) and nested
    unsupported nodes in source order.
    """

    keyword: str
    args: tuple = ()

    @cached_property
    def ofn(self) -> str:
        inner = " ".join(_render_arg(a) for a in self.args)
        return f"{self.keyword}({inner})"


def named(iri: Iri | str) -> ClassExpression:
    iri = iri if isinstance(iri, Iri) else Iri(iri)
    if iri.value == OWL_THING:
        return Top()
    if iri.value == OWL_NOTHING:
        return Bottom()
    return NamedClass(iri)


# -- axioms -------------------------------------------------------------------


class EntityKind(enum.Enum):
    CLASS = "Class"
    OBJECT_PROPERTY = "ObjectProperty"
    DATA_PROPERTY = "DataProperty"
    ANNOTATION_PROPERTY = "AnnotationProperty"
    NAMED_INDIVIDUAL = "NamedIndividual"


@dataclass(frozen=True)
class Axiom:
    annotations: frozenset = field(default=frozenset(), kw_only=True)

    keyword = "Axiom"

    def __post_init__(self):
        object.__setattr__(self, "annotations", frozenset(self.annotations))

    def _args(self) -> list[str]:
        raise NotImplementedError

    @cached_property
    def ofn(self) -> str:
        parts = sorted(a.ofn for a in self.annotations)
        parts.extend(self._args())
        return f"{self.keyword}({' '.join(parts)})"

    def with_annotations(self, annotations: Iterable[Annotation]) -> "Axiom":
        return dataclasses.replace(self, annotations=frozenset(annotations))


@dataclass(frozen=True)
class SubClassOf(Axiom):
    sub: ClassExpression
    sup: ClassExpression

    keyword = "SubClassOf"

    def _args(self):
        return [self.sub.ofn, self.sup.ofn]


@dataclass(frozen=True)
class EquivalentClasses(Axiom):
    operands: tuple

    keyword = "EquivalentClasses"

    def __post_init__(self):
        super().__post_init__()
        ops = {op.ofn: op for op in self.operands}
        if len(ops) < 2:
            raise ValueError("EquivalentClasses needs two distinct operands")
        object.__setattr__(self, "operands", tuple(ops[k] for k in sorted(ops)))

    def _args(self):
        return [op.ofn for op in self.operands]


@dataclass(frozen=True)
class ClassAssertion(Axiom):
    class_expression: ClassExpression
    individual: Iri

    keyword = "ClassAssertion"

    def _args(self):
        return [self.class_expression.ofn, self.individual.ofn]


@dataclass(frozen=True)
class PropertyAssertion(Axiom):
    role: Iri
    subject: Iri
    object: Iri

    keyword = "ObjectPropertyAssertion"

    def _args(self):
        return [self.role.ofn, self.subject.ofn, self.object.ofn]


@dataclass(frozen=True)
class Declaration(Axiom):
    kind: EntityKind
    entity: Iri

    keyword = "Declaration"

    def _args(self):
        return [f"{self.kind.value}({self.entity.ofn})"]


@dataclass(frozen=True)
class AnnotationAssertion(Axiom):
    property: Iri
    subject: Iri
    value: AnnotationValue

    keyword = "AnnotationAssertion"

    def _args(self):
        return [self.property.ofn, self.subject.ofn, self.value.ofn]


@dataclass(frozen=True)
class UnsupportedAxiom(Axiom):
    """An OWL axiom kind outside the modelled subset, kept so that the
    reasoner can report it as a profile violation instead of dropping it."""

    construct: str
    args: tuple = ()

    @property
    def keyword(self):  # type: ignore[override]
        return self.construct

    def _args(self):
        return [_render_arg(a) for a in self.args]


# -- canonicalization ---------------------------------------------------------


def _canonical_expr(expr: ClassExpression) -> ClassExpression:
    if isinstance(expr, Conjunction):
        return intersection(*(_canonical_expr(op) for op in expr.operands))
    if isinstance(expr, Existential):
        return Existential(expr.role, _canonical_expr(expr.filler))
    if isinstance(expr, UnsupportedExpression):
        return UnsupportedExpression(
            expr.keyword,
            tuple(_canonical_expr(a) if isinstance(a, ClassExpression) else a for a in expr.args),
        )
    return expr


def canonicalize(axiom: Axiom) -> Axiom:
    """Rebuild ``axiom`` with operands sorted and deduplicated at every level."""
    if isinstance(axiom, SubClassOf):
        return SubClassOf(_canonical_expr(axiom.sub), _canonical_expr(axiom.sup),
                          annotations=axiom.annotations)
    if isinstance(axiom, EquivalentClasses):
        return EquivalentClasses(tuple(_canonical_expr(op) for op in axiom.operands),
                                 annotations=axiom.annotations)
    if isinstance(axiom, ClassAssertion):
        return ClassAssertion(_canonical_expr(axiom.class_expression), axiom.individual,
                              annotations=axiom.annotations)
    if isinstance(axiom, UnsupportedAxiom):
        return UnsupportedAxiom(
            axiom.construct,
            tuple(_canonical_expr(a) if isinstance(a, ClassExpression) else a for a in axiom.args),
            annotations=axiom.annotations,
        )
    return axiom


def axiom_sort_key(axiom: Axiom) -> str:
    return axiom.ofn


# -- ontology -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ontology:
    iri: Iri | None = None
    version_iri: Iri | None = None
    imports: tuple = ()
    annotations: frozenset = frozenset()
    axioms: tuple = ()
    prefixes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        imports = tuple(self.imports)
        if len(set(imports)) != len(imports):
            raise ValueError("duplicate import")
        if self.version_iri is not None and self.iri is None:
            raise ValueError("a version IRI requires an ontology IRI")
        seen = {}
        for ax in self.axioms:
            seen.setdefault(canonicalize(ax), None)
        object.__setattr__(self, "imports", imports)
        object.__setattr__(self, "axioms", tuple(seen))
        object.__setattr__(self, "annotations", frozenset(self.annotations))
        object.__setattr__(self, "prefixes", MappingProxyType(dict(self.prefixes)))

    def _key(self):
        return (self.iri, self.version_iri, self.imports, self.annotations,
                frozenset(self.axioms), frozenset(self.prefixes.items()))

    def __eq__(self, other):
        if not isinstance(other, Ontology):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"Ontology(iri={self.iri}, imports={len(self.imports)}, "
                f"axioms={len(self.axioms)})")

    @property
    def axiom_set(self) -> frozenset:
        return frozenset(self.axioms)

    def sorted_axioms(self) -> list[Axiom]:
        return sorted(self.axioms, key=axiom_sort_key)

    def add(self, *axioms: Axiom) -> "Ontology":
        return dataclasses.replace(self, axioms=self.axioms + axioms)

    def with_axioms(self, axioms: Iterable[Axiom]) -> "Ontology":
        return dataclasses.replace(self, axioms=tuple(axioms))


# -- signature ----------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    classes: frozenset = frozenset()
    object_properties: frozenset = frozenset()
    data_properties: frozenset = frozenset()
    annotation_properties: frozenset = frozenset()
    individuals: frozenset = frozenset()


def expression_entities(expr: ClassExpression, classes: set, roles: set) -> None:
    """Collect named classes and roles used in ``expr`` (Top/Bottom excluded)."""
    if isinstance(expr, NamedClass):
        classes.add(expr.iri)
    elif isinstance(expr, Conjunction):
        for op in expr.operands:
            expression_entities(op, classes, roles)
    elif isinstance(expr, Existential):
        roles.add(expr.role)
        expression_entities(expr.filler, classes, roles)


def axiom_expressions(axiom: Axiom) -> tuple:
    if isinstance(axiom, SubClassOf):
        return (axiom.sub, axiom.sup)
    if isinstance(axiom, EquivalentClasses):
        return axiom.operands
    if isinstance(axiom, ClassAssertion):
        return (axiom.class_expression,)
    return ()


def signature(ontology: Ontology) -> Signature:
    declared: dict[Iri, set] = {}
    for ax in ontology.axioms:
        if isinstance(ax, Declaration):
            declared.setdefault(ax.entity, set()).add(ax.kind)
    for iri, kinds in declared.items():
        if len(kinds) > 1:
            raise ConflictingDeclaration(iri, kinds)

    used: dict[EntityKind, set] = {k: set() for k in EntityKind}
    for ax in ontology.axioms:
        classes: set = set()
        roles: set = set()
        for expr in axiom_expressions(ax):
            expression_entities(expr, classes, roles)
        used[EntityKind.CLASS] |= classes
        used[EntityKind.OBJECT_PROPERTY] |= roles
        if isinstance(ax, ClassAssertion):
            used[EntityKind.NAMED_INDIVIDUAL].add(ax.individual)
        elif isinstance(ax, PropertyAssertion):
            used[EntityKind.OBJECT_PROPERTY].add(ax.role)
            used[EntityKind.NAMED_INDIVIDUAL].update((ax.subject, ax.object))
        elif isinstance(ax, AnnotationAssertion):
            used[EntityKind.ANNOTATION_PROPERTY].add(ax.property)
        for ann in ax.annotations:
            used[EntityKind.ANNOTATION_PROPERTY].add(ann.property)

    parts: dict[EntityKind, set] = {k: set() for k in EntityKind}
    for kind, iris in used.items():
        for iri in iris:
            # a declaration overrides whatever the usage suggested
            if iri in declared:
                parts[next(iter(declared[iri]))].add(iri)
            else:
                parts[kind].add(iri)
    for iri, kinds in declared.items():
        parts[next(iter(kinds))].add(iri)

    return Signature(
        classes=frozenset(parts[EntityKind.CLASS]),
        object_properties=frozenset(parts[EntityKind.OBJECT_PROPERTY]),
        data_properties=frozenset(parts[EntityKind.DATA_PROPERTY]),
        annotation_properties=frozenset(parts[EntityKind.ANNOTATION_PROPERTY]),
        individuals=frozenset(parts[EntityKind.NAMED_INDIVIDUAL]),
    )


def axiom_aspects(axiom: Axiom, aspect_property: Iri) -> frozenset:
    """IRI-valued annotations of ``axiom`` under ``aspect_property``."""
    return frozenset(
        a.value for a in axiom.annotations
        if a.property == aspect_property and isinstance(a.value, Iri)
    )
