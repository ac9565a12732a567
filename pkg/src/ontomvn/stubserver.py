"""In-process HTTP repository used by tests, demos and the acceptance suite.

Serves an in-memory path -> bytes map over GET and accepts PUT uploads.
Every request is counted so callers can assert how much network traffic an
operation caused.

    with StubRepositoryServer() as server:
        server.put_file("org/x/a.owl", b"...")
        url = server.url            # http://127.0.0.1:<port>/
"""

from __future__ import annotations

import argparse
import base64
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import unquote, urlparse


class _Handler(BaseHTTPRequestHandler):
    server: "_Server"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _key(self) -> str:
        return unquote(urlparse(self.path).path).lstrip("/")

    def _authorized(self) -> bool:
        creds = self.server.stub.credentials
        if creds is None:
            return True
        header = self.headers.get("Authorization", "")
        expected = "Basic " + base64.b64encode(":".join(creds).encode()).decode()
        return header == expected

    def _reply(self, status: int, body: bytes = b"") -> None:
        self.send_response(status)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if body and self.command != "HEAD":
            self.wfile.write(body)

    def do_GET(self):
        stub = self.server.stub
        key = self._key()
        stub._hit("GET", key, self.headers.get("Accept"))
        forced = stub.forced_status.get(key)
        if forced:
            return self._reply(forced)
        with stub.lock:
            body = stub.files.get(key)
        if body is None:
            return self._reply(404)
        self._reply(200, body)

    def do_PUT(self):
        stub = self.server.stub
        key = self._key()
        length = int(self.headers.get("Content-Length", "0"))
        data = self.rfile.read(length)
        stub._hit("PUT", key, None)
        if stub.put_status is not None:
            return self._reply(stub.put_status)
        if not self._authorized():
            return self._reply(401)
        with stub.lock:
            stub.files[key] = data
        self._reply(201)


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    stub: "StubRepositoryServer"


class StubRepositoryServer:
    def __init__(self, host: str = "127.0.0.1", port: int = 0,
                 credentials: tuple[str, str] | None = None):
        self.files: dict[str, bytes] = {}
        self.hits: list[tuple[str, str]] = []
        self.accept_headers: list[str | None] = []
        self.forced_status: dict[str, int] = {}
        self.put_status: int | None = None
        self.credentials = credentials
        self.lock = threading.Lock()
        self._server = _Server((host, port), _Handler)
        self._server.stub = self
        self._thread: threading.Thread | None = None

    def _hit(self, method: str, key: str, accept: str | None) -> None:
        with self.lock:
            self.hits.append((method, key))
            self.accept_headers.append(accept)

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}/"

    @property
    def hit_count(self) -> int:
        return len(self.hits)

    def reset_hits(self) -> None:
        with self.lock:
            self.hits.clear()
            self.accept_headers.clear()

    def put_file(self, path: str, data: bytes | str) -> str:
        if isinstance(data, str):
            data = data.encode("utf-8")
        with self.lock:
            self.files[path.lstrip("/")] = data
        return self.url + path.lstrip("/")

    def start(self) -> "StubRepositoryServer":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description="serve a directory as a writable stub repository")
    ap.add_argument("--port", type=int, default=8765)
    ap.add_argument("--root", type=Path, help="preload files from this directory")
    args = ap.parse_args(argv)
    stub = StubRepositoryServer(port=args.port)
    if args.root:
        for p in args.root.rglob("*"):
            if p.is_file():
                stub.put_file(p.relative_to(args.root).as_posix(), p.read_bytes())
    print(f"serving stub repository at {stub.url} (Ctrl-C to stop)")
    try:
        stub._server.serve_forever()
    except KeyboardInterrupt:
        pass


if __name__ == "__main__":
    main()
