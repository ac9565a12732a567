"""Local artifact repository in the standard folder layout, plus the HTTP
client side of remote repositories (fetch and deploy).

Every artifact is stored next to a ``.sha256`` sidecar. An artifact counts
as present only when both files exist; a mismatch between them is reported
as tampering.
"""

from __future__ import annotations

import base64
import hashlib
import logging
import os
import tempfile
import urllib.error
import urllib.request
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from filelock import FileLock

from .descriptor import ONTOLOGY_TYPES, Coordinate, ProjectDescriptor, RepositorySpec, write_descriptor
from .errors import ConfigError, ResolutionError
from .markup import MarkupError, element, read_markup, write_markup
from .ofn import parse_ontology

log = logging.getLogger(__name__)

LOCAL = "local"
TIMESTAMP_FORMAT = "%Y%m%d%H%M%S"


class NotFound(ResolutionError):
    def __init__(self, what: str, tried: list[str]):
        self.tried = list(tried)
        listing = "\n  ".join(self.tried) if self.tried else "(no sources configured)"
        super().__init__(f"{what} not found; tried:\n  {listing}")


class OfflineMiss(ResolutionError):
    pass


class ChecksumMismatch(ResolutionError):
    pass


class IntegrityError(ResolutionError):
    pass


class RemoteRefused(ResolutionError):
    def __init__(self, message: str, status: int | None = None):
        self.status = status
        super().__init__(message)


class AuthError(ConfigError):
    def __init__(self, message: str, status: int):
        self.status = status
        super().__init__(message)


class SnapshotPolicyError(ConfigError):
    pass


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def format_timestamp(when: datetime) -> str:
    return when.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(text: str) -> datetime:
    return datetime.strptime(text.strip(), TIMESTAMP_FORMAT).replace(tzinfo=timezone.utc)


def utcnow() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


# -- layout -------------------------------------------------------------------


def coordinate_to_path(c: Coordinate) -> str:
    classifier = f"-{c.classifier}" if c.classifier else ""
    return (f"{c.group_id.replace('.', '/')}/{c.artifact_id}/{c.version}/"
            f"{c.artifact_id}-{c.version}{classifier}.{c.packaging}")


def pom_path(c: Coordinate) -> str:
    path = coordinate_to_path(c)
    return path[: -len(c.packaging)] + "pom"


def checksum_path(path: str) -> str:
    return path + ".sha256"


def metadata_path(group_id: str, artifact_id: str) -> str:
    return f"{group_id.replace('.', '/')}/{artifact_id}/maven-metadata.xml"


# -- records ------------------------------------------------------------------


@dataclass(frozen=True)
class ArtifactRecord:
    coordinate: Coordinate
    content_hash: str
    size_bytes: int
    stored_at: datetime
    origin: str = LOCAL

    @property
    def origin_label(self) -> str:
        return "Local" if self.origin == LOCAL else f"Remote({self.origin})"


@dataclass(frozen=True)
class VersionMetadata:
    group_id: str
    artifact_id: str
    versions: tuple = ()
    latest: str = ""
    last_updated: datetime = field(default_factory=utcnow)

    def __post_init__(self):
        if len(set(self.versions)) != len(self.versions):
            raise ValueError("duplicate versions in metadata")
        if self.versions and self.latest not in self.versions:
            raise ValueError("latest must be one of the versions")

    def with_version(self, version: str, when: datetime | None = None) -> "VersionMetadata":
        versions = self.versions if version in self.versions else self.versions + (version,)
        return replace(self, versions=versions, latest=version, last_updated=when or utcnow())

    def merged(self, other: "VersionMetadata") -> "VersionMetadata":
        versions = self.versions + tuple(v for v in other.versions if v not in self.versions)
        newer = other if other.last_updated >= self.last_updated else self
        return replace(self, versions=versions, latest=newer.latest,
                       last_updated=max(self.last_updated, other.last_updated))

    def to_text(self) -> str:
        node = element(
            "metadata",
            element("groupId", self.group_id),
            element("artifactId", self.artifact_id),
            element("versioning",
                    element("latest", self.latest),
                    element("versions", *(element("version", v) for v in self.versions)),
                    element("lastUpdated", format_timestamp(self.last_updated))),
        )
        return write_markup(node) + "\n"

    @classmethod
    def from_text(cls, text: str | bytes) -> "VersionMetadata":
        root = read_markup(text)
        versioning = root.find("versioning")
        if root.name != "metadata" or versioning is None:
            raise MarkupError("not a version metadata document")
        vs = versioning.find("versions")
        return cls(
            root.child_text("groupId", ""),
            root.child_text("artifactId", ""),
            tuple(v.text().strip() for v in vs.elements("version")) if vs else (),
            versioning.child_text("latest", ""),
            parse_timestamp(versioning.child_text("lastUpdated", "19700101000000")),
        )


# -- HTTP ---------------------------------------------------------------------


def credentials_from_env() -> tuple[str, str] | None:
    user = os.environ.get("ONTOMVN_REPO_USER")
    if not user:
        return None
    return user, os.environ.get("ONTOMVN_REPO_PASS", "")


class HttpClient:
    """Thin urllib wrapper; records every request in ``self.requests``."""

    def __init__(self, credentials: tuple[str, str] | None = None, timeout: float = 10.0):
        self.credentials = credentials
        self.timeout = timeout
        self.requests: list[tuple[str, str]] = []

    def _request(self, method: str, url: str, data: bytes | None = None, headers=None):
        headers = dict(headers or {})
        if self.credentials:
            token = base64.b64encode(":".join(self.credentials).encode()).decode()
            headers["Authorization"] = f"Basic {token}"
        self.requests.append((method, url))
        req = urllib.request.Request(url, data=data, method=method, headers=headers)
        with urllib.request.urlopen(req, timeout=self.timeout) as resp:
            return resp.status, resp.read()

    def get(self, url: str, accept: str | None = None) -> bytes | None:
        """Body of ``url``, or None when the server answers 404/410."""
        try:
            _, body = self._request("GET", url, headers={"Accept": accept} if accept else None)
            return body
        except urllib.error.HTTPError as exc:
            if exc.code in (404, 410):
                return None
            if exc.code in (401, 403):
                raise AuthError(f"GET {url}: HTTP {exc.code}", exc.code) from None
            raise RemoteRefused(f"GET {url}: HTTP {exc.code}", exc.code) from None

    def put(self, url: str, data: bytes) -> int:
        try:
            status, _ = self._request("PUT", url, data=data,
                                      headers={"Content-Type": "application/octet-stream"})
            return status
        except urllib.error.HTTPError as exc:
            if exc.code in (401, 403):
                raise AuthError(f"PUT {url}: HTTP {exc.code}", exc.code) from None
            raise RemoteRefused(f"PUT {url}: HTTP {exc.code}", exc.code) from None
        except urllib.error.URLError as exc:
            raise RemoteRefused(f"PUT {url}: {exc.reason}") from None


# -- local repository ---------------------------------------------------------


class LocalRepository:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    # Overridable seam so tests can inject crashes between write and rename.
    _replace = staticmethod(os.replace)

    def path_of(self, relative: str) -> Path:
        return self.root / relative

    def lock(self, coordinate: Coordinate) -> FileLock:
        path = self.path_of(coordinate_to_path(coordinate))
        path.parent.mkdir(parents=True, exist_ok=True)
        return FileLock(str(path) + ".lock")

    def _write_atomic(self, target: Path, data: bytes) -> None:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".tmp-" + target.name)
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            self._replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def lookup(self, coordinate: Coordinate) -> tuple[bytes, ArtifactRecord] | None:
        """Verified local copy, or None when absent or incompletely written."""
        rel = coordinate_to_path(coordinate)
        art, side = self.path_of(rel), self.path_of(checksum_path(rel))
        if not (art.is_file() and side.is_file()):
            return None
        data = art.read_bytes()
        expected = side.read_text().split()[0] if side.read_text().strip() else ""
        actual = sha256_hex(data)
        if actual != expected:
            raise ChecksumMismatch(f"{art}: sha256 {actual} does not match sidecar {expected}")
        stored = datetime.fromtimestamp(art.stat().st_mtime, timezone.utc).replace(microsecond=0)
        return data, ArtifactRecord(coordinate, actual, len(data), stored, LOCAL)

    def contains(self, coordinate: Coordinate) -> bool:
        return self.lookup(coordinate) is not None

    def read_pom(self, coordinate: Coordinate) -> bytes | None:
        p = self.path_of(pom_path(coordinate))
        return p.read_bytes() if p.is_file() else None

    def metadata(self, group_id: str, artifact_id: str) -> VersionMetadata | None:
        p = self.path_of(metadata_path(group_id, artifact_id))
        return VersionMetadata.from_text(p.read_bytes()) if p.is_file() else None

    def _record_version(self, coordinate: Coordinate, when: datetime) -> VersionMetadata:
        meta = self.metadata(coordinate.group_id, coordinate.artifact_id) or VersionMetadata(
            coordinate.group_id, coordinate.artifact_id)
        meta = meta.with_version(coordinate.version, when)
        self._write_atomic(self.path_of(metadata_path(coordinate.group_id, coordinate.artifact_id)),
                           meta.to_text().encode())
        return meta

    def store(self, coordinate: Coordinate, data: bytes, pom: bytes | None = None,
              origin: str = LOCAL) -> ArtifactRecord:
        rel = coordinate_to_path(coordinate)
        art = self.path_of(rel)
        digest = sha256_hex(data)
        with self.lock(coordinate):
            if art.is_file() and not coordinate.is_snapshot:
                existing = sha256_hex(art.read_bytes())
                if existing != digest:
                    raise IntegrityError(
                        f"{coordinate} is a release and already stored with different content")
            if pom is not None:
                self._write_atomic(self.path_of(pom_path(coordinate)), pom)
            # artifact first, sidecar last: the sidecar completes the write
            self._write_atomic(art, data)
            self._write_atomic(self.path_of(checksum_path(rel)),
                               f"{digest}  {art.name}\n".encode())
            when = utcnow()
            self._record_version(coordinate, when)
        return ArtifactRecord(coordinate, digest, len(data), when, origin)

    def install(self, artifact: bytes, descriptor: ProjectDescriptor,
                pom: bytes | None = None) -> ArtifactRecord:
        coordinate = descriptor.coordinate
        if coordinate.packaging in ONTOLOGY_TYPES:
            parse_ontology(artifact.decode("utf-8"))
        if pom is None:
            pom = write_descriptor(descriptor).encode()
        return self.store(coordinate, artifact, pom, LOCAL)


# -- remote operations --------------------------------------------------------


def _eligible(coordinate: Coordinate, repo: RepositorySpec) -> bool:
    return repo.snapshots_enabled or not coordinate.is_snapshot


def _download(coordinate: Coordinate, repo: RepositorySpec, client: HttpClient,
              tried: list[str]) -> tuple[bytes, bytes | None] | None:
    url = repo.base_url + coordinate_to_path(coordinate)
    tried.append(url)
    try:
        data = client.get(url)
    except urllib.error.URLError as exc:
        log.warning("repository %s unreachable: %s", repo.id, exc.reason)
        return None
    if data is None:
        return None
    sidecar = client.get(checksum_path(url))
    if sidecar is not None:
        expected = sidecar.decode().split()[0] if sidecar.strip() else ""
        if sha256_hex(data) != expected:
            raise ChecksumMismatch(f"{url}: content does not match the served sha256 sidecar")
    pom = client.get(repo.base_url + pom_path(coordinate))
    return data, pom


def _remote_is_newer(coordinate: Coordinate, repo: RepositorySpec, client: HttpClient,
                     local: ArtifactRecord) -> bool:
    meta_bytes = client.get(repo.base_url + metadata_path(coordinate.group_id, coordinate.artifact_id))
    if meta_bytes is None:
        return False
    meta = VersionMetadata.from_text(meta_bytes)
    if coordinate.version not in meta.versions or meta.last_updated < local.stored_at:
        return False
    # same-second updates are common; the sidecar settles whether content changed
    sidecar = client.get(checksum_path(repo.base_url + coordinate_to_path(coordinate)))
    return sidecar is not None and sidecar.decode().split()[0] != local.content_hash


def fetch(coordinate: Coordinate, repositories, local: LocalRepository, offline: bool = False,
          client: HttpClient | None = None) -> tuple[bytes, ArtifactRecord]:
    """Local copy when usable, else the first repository (in order) that has it."""
    cached = local.lookup(coordinate)
    if cached is not None and (not coordinate.is_snapshot or offline):
        return cached
    if offline:
        raise OfflineMiss(f"{coordinate} is not in the local repository {local.root} (offline)")
    client = client or HttpClient(credentials_from_env())
    repos = [r for r in repositories if _eligible(coordinate, r)]

    if cached is not None:
        for repo in repos:
            try:
                newer = _remote_is_newer(coordinate, repo, client, cached[1])
            except (urllib.error.URLError, ResolutionError, MarkupError) as exc:
                log.warning("cannot revalidate %s against %s: %s", coordinate, repo.id, exc)
                continue
            if newer:
                got = _download(coordinate, repo, client, [])
                if got is not None:
                    record = local.store(coordinate, got[0], got[1], origin=repo.id)
                    return got[0], record
        return cached

    tried: list[str] = []
    for repo in repos:
        got = _download(coordinate, repo, client, tried)
        if got is not None:
            record = local.store(coordinate, got[0], got[1], origin=repo.id)
            return got[0], record
    raise NotFound(str(coordinate), tried)


@dataclass(frozen=True)
class DeployConfirmation:
    coordinate: Coordinate
    repository: str
    urls: tuple
    metadata: VersionMetadata


def deploy(coordinate: Coordinate, artifact: bytes, descriptor: bytes, remote: RepositorySpec,
           credentials: tuple[str, str] | None = None,
           client: HttpClient | None = None) -> DeployConfirmation:
    if coordinate.is_snapshot and not remote.snapshots_enabled:
        raise SnapshotPolicyError(
            f"repository {remote.id} does not accept SNAPSHOT versions ({coordinate})")
    client = client or HttpClient(credentials if credentials is not None else credentials_from_env())
    base = remote.base_url
    art_url = base + coordinate_to_path(coordinate)
    uploads = [
        (art_url, artifact),
        (base + pom_path(coordinate), descriptor),
        (checksum_path(art_url), f"{sha256_hex(artifact)}  {art_url.rsplit('/', 1)[-1]}\n".encode()),
    ]
    for url, data in uploads:
        client.put(url, data)

    meta_url = base + metadata_path(coordinate.group_id, coordinate.artifact_id)
    existing = client.get(meta_url)
    meta = (VersionMetadata.from_text(existing) if existing is not None
            else VersionMetadata(coordinate.group_id, coordinate.artifact_id))
    meta = meta.with_version(coordinate.version, utcnow())
    client.put(meta_url, meta.to_text().encode())
    return DeployConfirmation(coordinate, remote.id, tuple(u for u, _ in uploads) + (meta_url,), meta)
