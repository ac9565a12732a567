"""Reader and canonical writer for the functional-style ontology exchange format.

Accepted grammar::

    document   := Prefix(name:=<iri>)* Ontology(iri? versionIri? Import(iri)*
                  Annotation(...)* axiom*)
    axiom      := Keyword( Annotation(p v)* args )

IRIs are written in angle brackets or as prefixed names; ``//`` starts a
comment that runs to the end of the line.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .errors import DocumentParseError
from .model import (
    OWL_NS,
    Annotation,
    AnnotationAssertion,
    ClassAssertion,
    ClassExpression,
    Declaration,
    EntityKind,
    EquivalentClasses,
    Existential,
    InvalidIri,
    Iri,
    Literal,
    Ontology,
    PropertyAssertion,
    SubClassOf,
    UnsupportedAxiom,
    UnsupportedExpression,
    intersection,
    named,
)

FORMAT_NAME = "OWL functional-style syntax (EL subset with axiom annotations)"

PREDEFINED_PREFIXES = {
    "owl": OWL_NS,
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "xml": "http://www.w3.org/XML/1998/namespace",
}

# OWL 2 functional-syntax keywords that this toolchain does not model.
OUT_OF_SUBSET_KEYWORDS = frozenset({
    "ObjectUnionOf", "ObjectComplementOf", "ObjectOneOf", "ObjectAllValuesFrom",
    "ObjectHasValue", "ObjectHasSelf", "ObjectMinCardinality", "ObjectMaxCardinality",
    "ObjectExactCardinality", "ObjectInverseOf", "DataSomeValuesFrom", "DataAllValuesFrom",
    "DataHasValue", "DataMinCardinality", "DataMaxCardinality", "DataExactCardinality",
    "DataIntersectionOf", "DataUnionOf", "DataComplementOf", "DataOneOf",
    "DatatypeRestriction", "DisjointClasses", "DisjointUnion", "SubObjectPropertyOf",
    "ObjectPropertyChain", "EquivalentObjectProperties", "DisjointObjectProperties",
    "InverseObjectProperties", "ObjectPropertyDomain", "ObjectPropertyRange",
    "FunctionalObjectProperty", "InverseFunctionalObjectProperty",
    "ReflexiveObjectProperty", "IrreflexiveObjectProperty", "SymmetricObjectProperty",
    "AsymmetricObjectProperty", "TransitiveObjectProperty", "SubDataPropertyOf",
    "EquivalentDataProperties", "DisjointDataProperties", "DataPropertyDomain",
    "DataPropertyRange", "FunctionalDataProperty", "DatatypeDefinition", "HasKey",
    "SameIndividual", "DifferentIndividuals", "NegativeObjectPropertyAssertion",
    "DataPropertyAssertion", "NegativeDataPropertyAssertion", "SubAnnotationPropertyOf",
    "AnnotationPropertyDomain", "AnnotationPropertyRange", "Datatype",
})

AXIOM_KEYWORDS = frozenset({
    "SubClassOf", "EquivalentClasses", "ClassAssertion", "ObjectPropertyAssertion",
    "Declaration", "AnnotationAssertion",
})


class Severity(enum.Enum):
    ERROR = "Error"
    WARNING = "Warning"


@dataclass(frozen=True, order=True)
class SourcePosition:
    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError("positions are 1-based")

    def __str__(self):
        return f"line {self.line}, column {self.column}"


@dataclass(frozen=True)
class ParseDiagnostic:
    position: SourcePosition
    message: str
    severity: Severity = Severity.ERROR

    def __str__(self):
        return f"{self.position}: {self.severity.value.lower()}: {self.message}"


class ParseError(DocumentParseError):
    def __init__(self, message: str, position: SourcePosition):
        self.message = message
        self.position = position
        super().__init__(f"{position}: {message}")

    @property
    def diagnostic(self) -> ParseDiagnostic:
        return ParseDiagnostic(self.position, self.message, Severity.ERROR)


class UnknownConstruct(ParseError):
    """A genuine OWL keyword that lies outside the supported subset."""

    def __init__(self, keyword: str, position: SourcePosition):
        self.keyword = keyword
        super().__init__(f"construct {keyword} is outside the supported subset", position)


# -- lexer --------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<iri><[^<>\s"]*>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<datatype>\^\^)
  | (?P<langtag>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<pname>(?:[A-Za-z_][A-Za-z0-9_.\-]*)?:(?:[A-Za-z0-9_][A-Za-z0-9_.\-#/%]*)?)
  | (?P<equals>=)
  | (?P<keyword>[A-Za-z][A-Za-z0-9]*)
  | (?P<number>[0-9]+)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: SourcePosition


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        where = SourcePosition(line, pos - line_start + 1)
        if m is None:
            if text[pos] == '"':
                raise ParseError("unterminated string literal", where)
            if text[pos] == "<":
                raise ParseError("malformed IRI reference", where)
            raise ParseError(f"unexpected character {text[pos]!r}", where)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, where))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", SourcePosition(line, pos - line_start + 1)))
    return tokens


def _unescape(body: str) -> str:
    return re.sub(r"\\(.)", r"\1", body)


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, keep_unsupported: bool):
        self.tokens = tokenize(text)
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self.keep_unsupported = keep_unsupported
        self.warnings: list[ParseDiagnostic] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, message: str, token: Token | None = None):
        t = token or self.tok
        if t.kind == "eof":
            message += " (unbalanced parentheses or truncated document)"
        raise ParseError(message, t.position)

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            self.error(f"expected {what}, found {found}")
        return self.advance()

    def at_keyword(self, *names: str) -> bool:
        return self.tok.kind == "keyword" and self.tok.text in names and self.peek().kind == "lparen"

    # terminals
    def iri(self, what="IRI") -> Iri:
        t = self.tok
        if t.kind == "iri":
            self.advance()
            value = t.text[1:-1]
        elif t.kind == "pname":
            self.advance()
            prefix, _, local = t.text.partition(":")
            if prefix in self.prefixes:
                base = self.prefixes[prefix]
            elif prefix in PREDEFINED_PREFIXES:
                base = PREDEFINED_PREFIXES[prefix]
            else:
                raise ParseError(f"unknown prefix {prefix + ':'!r}", t.position)
            value = base + local
        else:
            found = "end of input" if t.kind == "eof" else repr(t.text)
            self.error(f"expected {what}, found {found}")
        try:
            return Iri(value)
        except InvalidIri:
            raise ParseError(f"not an absolute IRI: {value!r}", t.position) from None

    def is_iri(self) -> bool:
        return self.tok.kind in ("iri", "pname")

    def literal(self) -> Literal:
        t = self.expect("string", "literal")
        value = _unescape(t.text[1:-1])
        if self.tok.kind == "langtag":
            return Literal(value, lang=self.advance().text[1:])
        if self.tok.kind == "datatype":
            self.advance()
            return Literal(value, datatype=self.iri("datatype IRI"))
        return Literal(value)

    def annotation_value(self):
        if self.tok.kind == "string":
            return self.literal()
        return self.iri("annotation value")

    def annotation(self) -> Annotation:
        self.advance()
        self.expect("lparen", "'('")
        if self.at_keyword("Annotation"):
            self.error("nested annotations are not supported")
        prop = self.iri("annotation property")
        value = self.annotation_value()
        self.expect("rparen", "')'")
        return Annotation(prop, value)

    def annotations(self) -> list[Annotation]:
        anns = []
        while self.at_keyword("Annotation"):
            anns.append(self.annotation())
        return anns

    # document structure
    def document(self) -> Ontology:
        while self.at_keyword("Prefix"):
            self.prefix_declaration()
        if not self.at_keyword("Ontology"):
            self.error("expected Prefix(...) or Ontology(...)")
        onto = self.ontology()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r} after the ontology")
        return onto

    def prefix_declaration(self):
        self.advance()
        self.expect("lparen", "'('")
        t = self.expect("pname", "prefix name")
        if not t.text.endswith(":"):
            self.error("prefix name must end with ':'", t)
        self.expect("equals", "'='")
        target = self.expect("iri", "full IRI in angle brackets")
        name = t.text[:-1]
        if name in self.prefixes:
            self.warnings.append(ParseDiagnostic(
                t.position, f"prefix {name}: redeclared", Severity.WARNING))
        self.prefixes[name] = target.text[1:-1]
        self.expect("rparen", "')'")

    def ontology(self) -> Ontology:
        self.advance()
        self.expect("lparen", "'('")
        iri = version = None
        if self.is_iri():
            iri = self.iri()
            if self.is_iri():
                version = self.iri()
        imports: list[Iri] = []
        while self.at_keyword("Import"):
            self.advance()
            self.expect("lparen", "'('")
            t = self.tok
            target = self.iri("import IRI")
            if target in imports:
                self.warnings.append(ParseDiagnostic(
                    t.position, f"duplicate import {target} ignored", Severity.WARNING))
            else:
                imports.append(target)
            self.expect("rparen", "')'")
        onto_annotations = self.annotations()
        axioms = []
        seen = set()
        while self.tok.kind != "rparen":
            start = self.tok
            ax = self.axiom()
            if ax in seen:
                self.warnings.append(ParseDiagnostic(
                    start.position, "duplicate axiom ignored", Severity.WARNING))
                continue
            seen.add(ax)
            axioms.append(ax)
        self.expect("rparen", "')'")
        return Ontology(iri=iri, version_iri=version, imports=tuple(imports),
                        annotations=frozenset(onto_annotations), axioms=tuple(axioms),
                        prefixes=dict(self.prefixes))

    def axiom(self):
        t = self.tok
        if t.kind != "keyword":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            self.error(f"expected an axiom or ')', found {found}")
        if self.peek().kind != "lparen":
            self.error(f"expected '(' after {t.text}", self.peek())
        if t.text in OUT_OF_SUBSET_KEYWORDS:
            return self.unsupported_axiom()
        if t.text not in AXIOM_KEYWORDS:
            raise ParseError(f"unknown construct keyword {t.text!r}", t.position)
        self.advance()
        self.advance()
        anns = self.annotations()
        if t.text == "SubClassOf":
            sub = self.class_expression()
            sup = self.class_expression()
            ax = SubClassOf(sub, sup, annotations=anns)
        elif t.text == "EquivalentClasses":
            ops = [self.class_expression(), self.class_expression()]
            while self.tok.kind != "rparen":
                ops.append(self.class_expression())
            try:
                ax = EquivalentClasses(tuple(ops), annotations=anns)
            except ValueError as exc:
                raise ParseError(str(exc), t.position) from None
        elif t.text == "ClassAssertion":
            ce = self.class_expression()
            ax = ClassAssertion(ce, self.iri("individual"), annotations=anns)
        elif t.text == "ObjectPropertyAssertion":
            if self.at_keyword("ObjectInverseOf"):
                return self._unsupported_rest(t, anns)
            role = self.iri("object property")
            ax = PropertyAssertion(role, self.iri("individual"), self.iri("individual"),
                                   annotations=anns)
        elif t.text == "Declaration":
            if self.at_keyword("Datatype"):
                return self._unsupported_rest(t, anns)
            kt = self.expect("keyword", "entity kind")
            try:
                kind = EntityKind(kt.text)
            except ValueError:
                raise ParseError(f"unknown entity kind {kt.text!r}", kt.position) from None
            self.expect("lparen", "'('")
            entity = self.iri("entity IRI")
            self.expect("rparen", "')'")
            ax = Declaration(kind, entity, annotations=anns)
        else:
            prop = self.iri("annotation property")
            subject = self.iri("annotation subject")
            ax = AnnotationAssertion(prop, subject, self.annotation_value(), annotations=anns)
        self.expect("rparen", f"')' closing {t.text}")
        return ax

    def _unsupported_rest(self, head: Token, anns) -> UnsupportedAxiom:
        # an axiom whose keyword is supported but whose arguments are not
        if not self.keep_unsupported:
            raise UnknownConstruct(self.tok.text, self.tok.position)
        args = self.generic_args()
        self.expect("rparen", "')'")
        return UnsupportedAxiom(head.text, tuple(args), annotations=anns)

    def unsupported_axiom(self) -> UnsupportedAxiom:
        t = self.tok
        if not self.keep_unsupported:
            raise UnknownConstruct(t.text, t.position)
        self.advance()
        self.advance()
        anns = self.annotations()
        args = self.generic_args()
        self.expect("rparen", f"')' closing {t.text}")
        return UnsupportedAxiom(t.text, tuple(args), annotations=anns)

    def generic_args(self) -> list:
        args = []
        while self.tok.kind != "rparen":
            t = self.tok
            if t.kind in ("iri", "pname"):
                args.append(self.iri())
            elif t.kind == "string":
                args.append(self.literal())
            elif t.kind == "number":
                args.append(self.advance().text)
            elif t.kind == "keyword" and self.peek().kind == "lparen":
                args.append(self.generic_node())
            elif t.kind == "eof":
                self.error("unexpected end of input")
            else:
                self.error(f"unexpected {t.text!r}")
        return args

    def generic_node(self) -> UnsupportedExpression:
        t = self.tok
        if t.text not in OUT_OF_SUBSET_KEYWORDS and t.text not in (
                "ObjectIntersectionOf", "ObjectSomeValuesFrom", "Annotation"):
            raise ParseError(f"unknown construct keyword {t.text!r}", t.position)
        self.advance()
        self.advance()
        args = self.generic_args()
        self.expect("rparen", f"')' closing {t.text}")
        return UnsupportedExpression(t.text, tuple(args))

    def class_expression(self) -> ClassExpression:
        t = self.tok
        if self.is_iri():
            return named(self.iri("class"))
        if t.kind != "keyword" or self.peek().kind != "lparen":
            found = "end of input" if t.kind == "eof" else repr(t.text)
            self.error(f"expected a class expression, found {found}")
        if t.text == "ObjectIntersectionOf":
            self.advance()
            self.advance()
            ops = [self.class_expression()]
            while self.tok.kind != "rparen":
                ops.append(self.class_expression())
            if len(ops) < 2:
                self.error("ObjectIntersectionOf needs at least two operands")
            self.advance()
            return intersection(*ops)
        if t.text == "ObjectSomeValuesFrom":
            if self.peek(2).kind == "keyword":
                # role expression such as ObjectInverseOf(...)
                if not self.keep_unsupported:
                    raise UnknownConstruct(self.peek(2).text, self.peek(2).position)
                return self.generic_node()
            self.advance()
            self.advance()
            role = self.iri("object property")
            filler = self.class_expression()
            self.expect("rparen", "')' closing ObjectSomeValuesFrom")
            return Existential(role, filler)
        if t.text in OUT_OF_SUBSET_KEYWORDS:
            if not self.keep_unsupported:
                raise UnknownConstruct(t.text, t.position)
            return self.generic_node()
        raise ParseError(f"unknown construct keyword {t.text!r}", t.position)


def parse_ontology(text: str, keep_unsupported: bool = True) -> Ontology:
    """Parse a document into a canonical :class:`Ontology`.

    Out-of-subset OWL constructs are kept as opaque ``Unsupported*`` nodes by
    default; with ``keep_unsupported=False`` they raise :class:`UnknownConstruct`.
    """
    return _Parser(text, keep_unsupported).document()


def check_syntax(text: str, keep_unsupported: bool = True):
    """Total variant of :func:`parse_ontology`.

    Returns ``(ontology, diagnostics)``; exactly one error diagnostic and no
    ontology on failure, otherwise the ontology plus any warnings.
    """
    parser = None
    try:
        parser = _Parser(text, keep_unsupported)
        onto = parser.document()
    except ParseError as exc:
        return None, [exc.diagnostic]
    return onto, list(parser.warnings)


# -- writer -------------------------------------------------------------------


def serialize_ontology(ontology: Ontology) -> str:
    lines = [f"Prefix({name}:=<{ontology.prefixes[name]}>)" for name in sorted(ontology.prefixes)]
    head = " ".join(i.ofn for i in (ontology.iri, ontology.version_iri) if i is not None)
    body = [f"Import({imp.ofn})" for imp in ontology.imports]
    body += sorted(a.ofn for a in ontology.annotations)
    body += sorted(ax.ofn for ax in ontology.axioms)
    if not body:
        lines.append(f"Ontology({head})")
    else:
        lines.append(f"Ontology({head}")
        lines.extend(body)
        lines.append(")")
    return "\n".join(lines) + "\n"
