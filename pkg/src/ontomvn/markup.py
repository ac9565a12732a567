"""Minimal markup reader/writer for descriptors, catalogs, manifests and
repository metadata.

Backed by expat without namespace processing, so ``a:b`` names are kept
verbatim. DTDs and processing instructions are rejected; the XML
declaration is tolerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.parsers import expat
from xml.sax.saxutils import escape, quoteattr

from .errors import ConfigError


class MarkupError(ConfigError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass
class MarkupNode:
    name: str
    attributes: list = field(default_factory=list)
    children: list = field(default_factory=list)
    line: int = 0
    column: int = 0

    def attr(self, name: str, default=None):
        for key, value in self.attributes:
            if key == name:
                return value
        return default

    def elements(self, name: str | None = None) -> list["MarkupNode"]:
        return [c for c in self.children
                if isinstance(c, MarkupNode) and (name is None or c.name == name)]

    def find(self, name: str) -> "MarkupNode | None":
        for child in self.elements(name):
            return child
        return None

    def text(self) -> str:
        """Concatenated character data of this element and its descendants."""
        parts = []
        for c in self.children:
            parts.append(c if isinstance(c, str) else c.text())
        return "".join(parts)

    def child_text(self, name: str, default=None):
        node = self.find(name)
        return default if node is None else node.text().strip()


def read_markup(document: str | bytes) -> MarkupNode:
    parser = expat.ParserCreate()
    parser.ordered_attributes = True
    stack: list[MarkupNode] = []
    root: list[MarkupNode] = []

    def here():
        return parser.CurrentLineNumber, parser.CurrentColumnNumber + 1

    def start(name, attrs):
        line, col = here()
        pairs = list(zip(attrs[::2], attrs[1::2]))
        node = MarkupNode(name, pairs, [], line, col)
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)

    def end(name):
        stack.pop()

    def chars(data):
        if not stack:
            return
        kids = stack[-1].children
        if kids and isinstance(kids[-1], str):
            kids[-1] += data
        else:
            kids.append(data)

    def reject_pi(target, data):
        raise MarkupError(f"processing instruction <?{target}?> not supported", *here())

    def reject_doctype(*args):
        raise MarkupError("DTDs are not supported", *here())

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    parser.ProcessingInstructionHandler = reject_pi
    parser.StartDoctypeDeclHandler = reject_doctype
    try:
        if isinstance(document, str):
            document = document.encode("utf-8")
        parser.Parse(document, True)
    except expat.ExpatError as exc:
        raise MarkupError(expat.ErrorString(exc.code), exc.lineno, exc.offset + 1) from None
    return root[0]


def write_markup(node: MarkupNode, indent: int = 0, step: str = "  ") -> str:
    """Pretty-print ``node``; elements holding only text stay on one line."""
    pad = step * indent
    attrs = "".join(f" {k}={quoteattr(v)}" for k, v in node.attributes)
    if not node.children:
        return f"{pad}<{node.name}{attrs}/>"
    if all(isinstance(c, str) for c in node.children):
        return f"{pad}<{node.name}{attrs}>{escape(node.text())}</{node.name}>"
    lines = [f"{pad}<{node.name}{attrs}>"]
    for c in node.children:
        if isinstance(c, str):
            if c.strip():
                lines.append(pad + step + escape(c.strip()))
        else:
            lines.append(write_markup(c, indent + 1, step))
    lines.append(f"{pad}</{node.name}>")
    return "\n".join(lines)


def element(name: str, /, *children, **attributes) -> MarkupNode:
    """Small builder: ``element('a', element('b', 'x'))``."""
    return MarkupNode(name, list(attributes.items()), list(children))
