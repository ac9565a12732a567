"""Dependency graphs, nearest-wins mediation, and import resolution through
the catalog and the local repository."""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlparse, unquote

from .descriptor import (
    ONTOLOGY_TYPES,
    Catalog,
    CatalogEntry,
    ConfigError,
    Coordinate,
    ProjectDescriptor,
    parse_catalog,
    parse_descriptor,
    write_catalog,
)
from .errors import ResolutionError
from .model import Iri, Ontology
from .ofn import parse_ontology
from .repository import (
    ArtifactRecord,
    HttpClient,
    LocalRepository,
    NotFound,
    OfflineMiss,
    coordinate_to_path,
    credentials_from_env,
    fetch,
)

log = logging.getLogger(__name__)

IMPORTED_VERSION = "0.0.0-IMPORTED"
CATALOG_FILE = "catalog.xml"


class ImportUnresolvable(ResolutionError):
    def __init__(self, iri: Iri, attempted: list[str]):
        self.iri = iri
        self.attempted = list(attempted)
        super().__init__(f"cannot resolve import {iri}; attempted: " + ", ".join(self.attempted))


@dataclass
class DependencyNode:
    coordinate: Coordinate
    depth: int = 0
    declaration_index: int = 0
    children: list = field(default_factory=list)
    record: ArtifactRecord | None = None

    def walk(self, path=()):
        """Yield ``(node, index_path)`` in depth-first preorder."""
        yield self, path
        for child in self.children:
            yield from child.walk(path + (child.declaration_index,))


@dataclass
class ResolutionReport:
    selected: tuple = ()
    displaced: list = field(default_factory=list)
    fetched: list = field(default_factory=list)
    catalog_delta: list = field(default_factory=list)
    closure: list = field(default_factory=list)

    def render(self) -> str:
        lines = ["== Selected =="]
        lines += [f"  {c}" for c in self.selected]
        lines.append("== Displaced ==")
        lines += [f"  {loser} -> {winner} ({reason})" for loser, winner, reason in self.displaced]
        lines.append("== Imports ==")
        lines += [f"  {iri}" for iri in self.closure]
        lines.append("== Catalog additions ==")
        lines += [f"  {e.name} -> {e.locator}" for e in self.catalog_delta]
        lines.append("== Fetched ==")
        lines += [f"  {r.coordinate} sha256={r.content_hash} {r.origin_label}" for r in self.fetched]
        return "\n".join(lines) + "\n"


# -- dependency graph ---------------------------------------------------------


def build_dependency_graph(descriptor: ProjectDescriptor, local: LocalRepository,
                           repositories=None, offline: bool = False,
                           client: HttpClient | None = None) -> DependencyNode:
    """Breadth-first expansion of the descriptor's dependencies.

    A node whose (groupId, artifactId) already occurs on its own root path is
    dropped, which cuts cycles.
    """
    repositories = descriptor.repositories if repositories is None else repositories
    client = client or HttpClient(credentials_from_env())
    root = DependencyNode(descriptor.coordinate, 0, 0)
    poms: dict[Coordinate, ProjectDescriptor | None] = {}

    queue = deque([(root, (descriptor.coordinate,), list(descriptor.dependencies))])
    while queue:
        parent, path, deps = queue.popleft()
        on_path = {(c.group_id, c.artifact_id) for c in path}
        for index, dep in enumerate(deps):
            c = dep.coordinate
            if (c.group_id, c.artifact_id) in on_path:
                continue
            node = DependencyNode(c, parent.depth + 1, index)
            try:
                _, node.record = fetch(c, repositories, local, offline, client)
            except NotFound as exc:
                chain = " -> ".join(str(p) for p in path + (c,))
                raise NotFound(f"{c} (required via {chain})", exc.tried) from None
            if c not in poms:
                pom = local.read_pom(c)
                poms[c] = parse_descriptor(pom) if pom else None
            parent.children.append(node)
            child_pom = poms[c]
            if child_pom is not None and child_pom.dependencies:
                queue.append((node, path + (c,), list(child_pom.dependencies)))
    return root


def mediate(root: DependencyNode) -> ResolutionReport:
    """Nearest wins; at equal depth the lexicographically smallest
    declaration path wins."""
    best: dict[tuple, tuple] = {}
    order = []
    for node, path in root.walk():
        key = node.coordinate.key
        rank = (node.depth, path)
        order.append((rank, node))
        if key not in best or rank < best[key][0]:
            best[key] = (rank, node)

    order.sort(key=lambda item: item[0])
    selected = []
    displaced = []
    seen_losers = set()
    for rank, node in order:
        win_rank, winner = best[node.coordinate.key]
        if winner.coordinate == node.coordinate:
            if node.coordinate not in selected:
                selected.append(node.coordinate)
            continue
        if node.coordinate in seen_losers:
            continue
        seen_losers.add(node.coordinate)
        if win_rank[0] < rank[0]:
            reason = f"nearer: depth {win_rank[0]} < {rank[0]}"
        else:
            reason = f"declared first at depth {rank[0]}"
        displaced.append((node.coordinate, winner.coordinate, reason))
    return ResolutionReport(selected=tuple(selected), displaced=displaced)


def resolve_dependencies(descriptor: ProjectDescriptor, local: LocalRepository,
                         offline: bool = False, client: HttpClient | None = None,
                         catalog: Catalog | None = None) -> ResolutionReport:
    """Graph + mediation, then point the catalog at every selected ontology artifact."""
    root = build_dependency_graph(descriptor, local, None, offline, client)
    report = mediate(root)
    catalog = catalog if catalog is not None else load_catalog(local)
    records = {}
    for node, _ in root.walk():
        if node.record is not None:
            records.setdefault(node.coordinate, node.record)
    for c in report.selected[1:]:
        report.fetched.append(records[c])
        if c.packaging not in ONTOLOGY_TYPES:
            continue
        data, _ = local.lookup(c)
        onto = parse_ontology(data.decode("utf-8"))
        for iri in (onto.iri, onto.version_iri):
            locator = coordinate_to_path(c)
            if iri is not None and catalog.lookup(iri) != locator:
                entry = CatalogEntry(iri, locator)
                catalog = catalog.updated(entry)
                report.catalog_delta.append(entry)
    if report.catalog_delta:
        save_catalog(local, catalog)
    return report


# -- imports ------------------------------------------------------------------

_UNSAFE = re.compile(r"[^A-Za-z0-9_\-]")


def _segment(text: str, keep_dots: bool = False) -> str:
    if keep_dots:
        cleaned = re.sub(r"[^A-Za-z0-9_.\-]", "_", text).replace("..", "_")
    else:
        cleaned = _UNSAFE.sub("_", text)
    return cleaned or "_"


def imported_coordinate(iri: Iri) -> Coordinate:
    """Repository coordinate under which a raw-IRI import is cached.

    groupId is the reversed host followed by the port and the directory
    segments, so distinct IRIs never share a coordinate; artifactId is the
    last path segment.
    """
    parsed = urlparse(iri.value)
    if parsed.netloc:
        groups = [_segment(label) for label in reversed((parsed.hostname or "_").split(".")) if label]
        if parsed.port:
            groups.append(f"p{parsed.port}")
        segments = [unquote(s) for s in parsed.path.split("/") if s]
    else:
        groups = [_segment(parsed.scheme)]
        segments = [s for s in re.split(r"[:/]", iri.value.split(":", 1)[1].split("#")[0]) if s]
    artifact = _segment(segments[-1], keep_dots=True) if segments else "index"
    groups += [_segment(s) for s in segments[:-1]]
    return Coordinate(".".join(groups), artifact, IMPORTED_VERSION)


def load_catalog(local: LocalRepository) -> Catalog:
    path = local.root / CATALOG_FILE
    if not path.is_file():
        return Catalog()
    return parse_catalog(path.read_bytes())


def save_catalog(local: LocalRepository, catalog: Catalog) -> None:
    local._write_atomic(local.root / CATALOG_FILE, write_catalog(catalog).encode("utf-8"))


def _locator_path(local: LocalRepository, locator: str) -> Path:
    if locator.startswith("file:"):
        return Path(unquote(urlparse(locator).path))
    p = Path(locator)
    return p if p.is_absolute() else local.root / p


@dataclass
class ImportResolution:
    closure: list
    iris: list
    catalog: Catalog
    catalog_delta: list
    fetched: list
    sources: dict


def resolve_imports(ontology: Ontology, catalog: Catalog, local: LocalRepository,
                    repositories=(), offline: bool = False, client: HttpClient | None = None,
                    cache: bool = True) -> ImportResolution:
    """Depth-first import closure (root excluded, first-visit order).

    Lookup order per import IRI: catalog, local repository under the
    synthesized coordinate, the IRI itself, then the configured repositories.
    With ``cache=False`` nothing is written to the repository or catalog.
    """
    client = client or HttpClient(credentials_from_env())
    closure: list[Ontology] = []
    closure_iris: list[Iri] = []
    delta: list[CatalogEntry] = []
    fetched: list[ArtifactRecord] = []
    sources: dict[Iri, str] = {}
    visited: set[Iri] = set()
    if ontology.iri is not None:
        visited.add(ontology.iri)

    def load(iri: Iri) -> Ontology:
        attempted = []
        locator = catalog.lookup(iri)
        if locator is not None:
            path = _locator_path(local, locator)
            attempted.append(f"catalog:{locator}")
            if path.is_file():
                sources[iri] = "catalog"
                return parse_ontology(path.read_text("utf-8"))
            log.warning("catalog entry for %s points at missing %s", iri, path)

        coord = imported_coordinate(iri)
        attempted.append(f"local:{coordinate_to_path(coord)}")
        hit = local.lookup(coord)
        if hit is not None:
            sources[iri] = "local"
            if locator is None and cache:
                delta.append(CatalogEntry(iri, coordinate_to_path(coord)))
            return parse_ontology(hit[0].decode("utf-8"))
        if offline:
            raise OfflineMiss(f"import {iri} is not cached locally (offline); tried "
                              + ", ".join(attempted))

        data = None
        if urlparse(iri.value).scheme in ("http", "https"):
            url = iri.value.split("#", 1)[0]
            attempted.append(url)
            try:
                data = client.get(url, accept="text/plain")
            except (OSError, ResolutionError) as exc:
                log.warning("direct fetch of %s failed: %s", url, exc)
        origin = "direct"
        if data is None and repositories:
            try:
                data, record = fetch(coord, repositories, local, False, client)
                origin = record.origin
                attempted.extend(r.base_url + coordinate_to_path(coord) for r in repositories)
            except NotFound as exc:
                attempted.extend(exc.tried)
        if data is None:
            raise ImportUnresolvable(iri, attempted)
        onto = parse_ontology(data.decode("utf-8"))
        sources[iri] = origin
        if cache:
            fetched.append(local.store(coord, data, None, origin=origin))
            if locator is None:
                delta.append(CatalogEntry(iri, coordinate_to_path(coord)))
        return onto

    def visit(onto: Ontology) -> None:
        for iri in onto.imports:
            if iri in visited:
                continue
            visited.add(iri)
            child = load(iri)
            if child.iri is not None:
                visited.add(child.iri)
            closure.append(child)
            closure_iris.append(iri)
            visit(child)

    visit(ontology)
    updated = catalog.extended(delta) if cache else catalog
    return ImportResolution(closure, closure_iris, updated, delta, fetched, sources)


def import_goal(owlfile: str | Path, local_flag: bool, local: LocalRepository,
                repositories=(), offline: bool = False,
                client: HttpClient | None = None) -> ResolutionReport:
    path = Path(owlfile)
    if not path.is_file():
        raise ConfigError(f"owlfile not found: {path}")
    ontology = parse_ontology(path.read_text("utf-8"))
    catalog = load_catalog(local)
    result = resolve_imports(ontology, catalog, local, repositories, offline, client,
                             cache=local_flag)
    if local_flag and result.catalog_delta:
        save_catalog(local, result.catalog)
    return ResolutionReport(fetched=result.fetched, catalog_delta=result.catalog_delta,
                            closure=list(result.iris))
