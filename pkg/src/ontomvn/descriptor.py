"""Project descriptor (``pom.xml``) and import catalog (``catalog.xml``)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from urllib.parse import urlparse

from .errors import ConfigError
from .markup import MarkupError, MarkupNode, element, read_markup, write_markup
from .model import InvalidIri, Iri

log = logging.getLogger(__name__)

ONTOLOGY_TYPES = frozenset({"owl", "ofn", "ofn.owl"})

# Plugins whose POM block lists no <goals> still bind to their usual goals.
PLUGIN_DEFAULT_GOALS = {
    "OntoMvnImport": ("owlimport",),
    "OntoMvnApplyAspects": ("apply-aspects",),
    "SVontPlugin": ("semantic-diff",),
    "OntoMvnTest": ("test",),
    "OntoMvnReport": ("ontologyreport", "technicalreport", "visualizer"),
}

PARAMETER_ALIASES = {"ifIncludeOriginalAxioms": "includeOriginalAxioms"}


class DescriptorError(ConfigError):
    pass


class CatalogError(ConfigError):
    pass


def _check_name(value: str, what: str) -> None:
    if not value or any(ch.isspace() for ch in value) or "/" in value or ".." in value \
            or "\\" in value:
        raise DescriptorError(f"invalid {what}: {value!r}")


@dataclass(frozen=True, order=True)
class Coordinate:
    group_id: str
    artifact_id: str
    version: str
    packaging: str = "owl"
    classifier: str | None = None

    def __post_init__(self):
        for seg in self.group_id.split("."):
            _check_name(seg, "groupId")
        _check_name(self.artifact_id, "artifactId")
        _check_name(self.version, "version")
        _check_name(self.packaging, "packaging type")
        if self.classifier is not None:
            _check_name(self.classifier, "classifier")

    @property
    def is_snapshot(self) -> bool:
        return self.version.endswith("-SNAPSHOT")

    @property
    def key(self) -> tuple:
        """Identity ignoring version, used for conflict mediation."""
        return (self.group_id, self.artifact_id, self.classifier)

    def __str__(self):
        parts = [self.group_id, self.artifact_id, self.packaging]
        if self.classifier:
            parts.append(self.classifier)
        parts.append(self.version)
        return ":".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Coordinate":
        """``group:artifact:version`` or ``group:artifact:type[:classifier]:version``."""
        parts = text.split(":")
        if len(parts) == 3:
            return cls(parts[0], parts[1], parts[2])
        if len(parts) == 4:
            return cls(parts[0], parts[1], parts[3], parts[2])
        if len(parts) == 5:
            return cls(parts[0], parts[1], parts[4], parts[2], parts[3])
        raise DescriptorError(f"not a coordinate: {text!r}")


@dataclass(frozen=True)
class Dependency:
    coordinate: Coordinate


@dataclass(frozen=True)
class RepositorySpec:
    id: str
    url: str
    name: str | None = None
    snapshots_enabled: bool = True

    def __post_init__(self):
        parsed = urlparse(self.url)
        if not parsed.scheme or not (parsed.netloc or parsed.scheme == "file"):
            raise DescriptorError(f"repository {self.id!r}: url must be absolute: {self.url!r}")

    @property
    def base_url(self) -> str:
        return self.url if self.url.endswith("/") else self.url + "/"


@dataclass(frozen=True)
class ProjectDescriptor:
    coordinate: Coordinate
    dependencies: tuple = ()
    repositories: tuple = ()
    plugin_params: dict = field(default_factory=dict, hash=False)
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        keys = [d.coordinate.key for d in self.dependencies]
        for k in keys:
            if keys.count(k) > 1:
                raise DescriptorError(f"duplicate dependency {':'.join(p for p in k if p)}")
        ids = [r.id for r in self.repositories]
        for i in ids:
            if ids.count(i) > 1:
                raise DescriptorError(f"duplicate repository id {i!r}")

    def params(self, goal: str) -> dict:
        return dict(self.plugin_params.get(goal, {}))


# -- descriptor ---------------------------------------------------------------


def _required(node: MarkupNode, name: str, where: str) -> str:
    value = node.child_text(name)
    if not value:
        raise DescriptorError(f"{where}: missing <{name}>")
    return value


def _coordinate_from(node: MarkupNode, where: str, packaging_tag: str) -> Coordinate:
    try:
        return Coordinate(
            _required(node, "groupId", where),
            _required(node, "artifactId", where),
            _required(node, "version", where),
            node.child_text(packaging_tag) or "owl",
            node.child_text("classifier") or None,
        )
    except DescriptorError as exc:
        raise DescriptorError(f"{where}: {exc}") from None


def _repository_from(node: MarkupNode) -> RepositorySpec:
    rid = node.child_text("id")
    url = node.child_text("url")
    if not rid or not url:
        raise DescriptorError("malformed repository: <id> and <url> are required")
    enabled = True
    snaps = node.find("snapshots")
    if snaps is not None:
        enabled = (snaps.child_text("enabled", "true") or "true").lower() == "true"
    return RepositorySpec(rid, url, node.child_text("name") or None, enabled)


def _config_value(node: MarkupNode):
    kids = node.elements()
    if kids:
        return [k.text().strip() for k in kids]
    return node.text().strip()


def _read_configuration(node: MarkupNode | None, warnings: list) -> dict:
    params: dict = {}
    if node is None:
        return params
    for child in node.elements():
        name = child.name
        if name in PARAMETER_ALIASES:
            canonical = PARAMETER_ALIASES[name]
            warnings.append(f"parameter {name} is deprecated; use {canonical}")
            name = canonical
        value = _config_value(child)
        if name in params:
            prev = params[name]
            prev = prev if isinstance(prev, list) else [prev]
            params[name] = prev + (value if isinstance(value, list) else [value])
        else:
            params[name] = value
    return params


def parse_descriptor(document: str | bytes) -> ProjectDescriptor:
    root = read_markup(document)
    if root.name != "project":
        raise DescriptorError(f"root element must be <project>, found <{root.name}>")
    coordinate = _coordinate_from(root, "project", "packaging")

    deps = []
    deps_node = root.find("dependencies")
    for i, dep in enumerate(deps_node.elements("dependency") if deps_node else []):
        deps.append(Dependency(_coordinate_from(dep, f"dependency #{i + 1}", "type")))

    repos = []
    sources = [root]
    profiles = root.find("profiles")
    for profile in profiles.elements("profile") if profiles else []:
        activation = profile.find("activation")
        if activation is not None and activation.child_text("activeByDefault") == "true":
            sources.append(profile)
    for src in sources:
        node = src.find("repositories")
        for repo in node.elements("repository") if node else []:
            repos.append(_repository_from(repo))

    warnings: list[str] = []
    plugin_params: dict = {}
    build = root.find("build")
    plugins = build.find("plugins") if build is not None else None
    for plugin in plugins.elements("plugin") if plugins else []:
        base = _read_configuration(plugin.find("configuration"), warnings)
        bound: list[tuple[str, dict]] = []
        executions = plugin.find("executions")
        for execution in executions.elements("execution") if executions else []:
            extra = _read_configuration(execution.find("configuration"), warnings)
            goals = execution.find("goals")
            for g in goals.elements("goal") if goals else []:
                bound.append((g.text().strip(), {**base, **extra}))
        if not bound:
            for g in PLUGIN_DEFAULT_GOALS.get(plugin.child_text("artifactId", ""), ()):
                bound.append((g, base))
        for goal, params in bound:
            plugin_params.setdefault(goal, {}).update(params)

    for w in warnings:
        log.warning("%s", w)
    return ProjectDescriptor(coordinate, tuple(deps), tuple(repos), plugin_params, tuple(warnings))


def _coordinate_nodes(c: Coordinate, packaging_tag: str) -> list:
    nodes = [element("groupId", c.group_id), element("artifactId", c.artifact_id),
             element("version", c.version)]
    if c.packaging != "owl" or packaging_tag == "type":
        nodes.append(element(packaging_tag, c.packaging))
    if c.classifier:
        nodes.append(element("classifier", c.classifier))
    return nodes


def write_descriptor(descriptor: ProjectDescriptor) -> str:
    """Render a descriptor that :func:`parse_descriptor` reads back equal."""
    kids = _coordinate_nodes(descriptor.coordinate, "packaging")
    if descriptor.repositories:
        repos = []
        for r in descriptor.repositories:
            body = [element("snapshots", element("enabled", str(r.snapshots_enabled).lower())),
                    element("id", r.id)]
            if r.name:
                body.append(element("name", r.name))
            body.append(element("url", r.url))
            repos.append(element("repository", *body))
        kids.append(element("repositories", *repos))
    if descriptor.dependencies:
        kids.append(element("dependencies", *(
            element("dependency", *_coordinate_nodes(d.coordinate, "type"))
            for d in descriptor.dependencies)))
    if descriptor.plugin_params:
        plugins = []
        for goal in sorted(descriptor.plugin_params):
            conf = []
            for name, value in descriptor.plugin_params[goal].items():
                if isinstance(value, list):
                    item = "aspect" if name == "userAspects" else "value"
                    conf.append(element(name, *(element(item, v) for v in value)))
                else:
                    conf.append(element(name, value))
            plugins.append(element(
                "plugin", element("artifactId", f"ontomvn-{goal}"),
                element("configuration", *conf),
                element("executions", element("execution", element("goals", element("goal", goal))))))
        kids.append(element("build", element("plugins", *plugins)))
    return write_markup(element("project", *kids)) + "\n"


# -- catalog ------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: Iri
    locator: str


@dataclass(frozen=True)
class Catalog:
    entries: tuple = ()
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        names = set()
        for e in self.entries:
            if e.name in names:
                raise CatalogError(f"duplicate catalog entry for {e.name}")
            names.add(e.name)

    def lookup(self, iri: Iri) -> str | None:
        for e in self.entries:
            if e.name == iri:
                return e.locator
        return None

    def __contains__(self, iri) -> bool:
        return self.lookup(iri) is not None

    def __len__(self):
        return len(self.entries)

    def extended(self, additions) -> "Catalog":
        """Append entries whose names are not yet present."""
        entries = list(self.entries)
        for e in additions:
            if e.name not in self:
                entries.append(e)
        return Catalog(tuple(entries))

    def updated(self, entry: CatalogEntry) -> "Catalog":
        """Replace the locator of ``entry.name`` in place, or append it."""
        entries = [entry if e.name == entry.name else e for e in self.entries]
        if entry.name not in self:
            entries.append(entry)
        return Catalog(tuple(entries))


CATALOG_HEADER = "<!-- ontomvn import catalog: external ontology IRI -> local artifact -->"


def parse_catalog(document: str | bytes) -> Catalog:
    root = read_markup(document)
    if root.name != "catalog":
        raise MarkupError(f"root element must be <catalog>, found <{root.name}>", root.line, root.column)
    entries, warnings = [], []
    for node in root.elements():
        if node.name != "uri":
            msg = f"line {node.line}: unsupported catalog entry <{node.name}> ignored"
            warnings.append(msg)
            log.warning("%s", msg)
            continue
        name, locator = node.attr("name"), node.attr("uri")
        if name is None or locator is None:
            raise CatalogError(f"line {node.line}: <uri> needs name and uri attributes")
        try:
            iri = Iri(name)
        except InvalidIri:
            raise CatalogError(f"line {node.line}: catalog name is not an absolute IRI: {name!r}") from None
        entries.append(CatalogEntry(iri, locator))
    return Catalog(tuple(entries), tuple(warnings))


def write_catalog(catalog: Catalog) -> str:
    if not catalog.entries:
        return CATALOG_HEADER + "\n<catalog></catalog>\n"
    body = element("catalog", *(element("uri", name=e.name.value, uri=e.locator)
                                 for e in catalog.entries))
    return CATALOG_HEADER + "\n" + write_markup(body) + "\n"
