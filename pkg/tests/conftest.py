"""Shared fixtures: bundled fixture paths and a local HTTP test server."""

from __future__ import annotations

import http.server
import threading
import time
from pathlib import Path

import pytest

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


def make_srr(engine_id, rank, url, title="", snippet=""):
    from serpfuse.backends import SearchResultRecord, domain_of

    return SearchResultRecord(
        engine_id=engine_id,
        source_rank=rank,
        url=url,
        title=title or f"Title {rank}",
        snippet=snippet,
        domain=domain_of(url),
    )


class _Handler(http.server.BaseHTTPRequestHandler):
    """Scripted endpoints for exercising fetch policies.

    /ok            small html page with headers
    /slow          sleeps past any sane test timeout
    /big?n=BYTES   body of exactly BYTES
    /hop/N         redirect chain of N hops ending at /ok
    /busy          sleeps briefly while a concurrency gauge runs
    /robots.txt    disallows /private
    /private       plain page (robots-fenced)
    """

    server_version = "testsrv/0.1"
    protocol_version = "HTTP/1.1"

    def log_message(self, *args):
        pass

    def _respond(self, body: bytes, status=200, content_type="text/html; charset=utf-8", extra=()):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        for key, value in extra:
            self.send_header(key, value)
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):  # noqa: N802 - BaseHTTPRequestHandler API
        if self.path == "/ok":
            self._respond(
                b"<html><head><title>OK Page</title></head><body>hello</body></html>",
                extra=[("Last-Modified", "Wed, 01 May 2024 00:00:00 GMT")],
            )
        elif self.path == "/slow":
            time.sleep(5)
            self._respond(b"slow")
        elif self.path.startswith("/big"):
            n = int(self.path.split("n=", 1)[1])
            self._respond(b"x" * n)
        elif self.path.startswith("/hop/"):
            hops = int(self.path.rsplit("/", 1)[1])
            target = "/ok" if hops <= 1 else f"/hop/{hops - 1}"
            self._respond(b"", status=302, extra=[("Location", target)])
        elif self.path.startswith("/busy"):
            srv = self.server
            with srv.gauge_lock:
                srv.in_flight += 1
                srv.max_in_flight = max(srv.max_in_flight, srv.in_flight)
            time.sleep(0.15)
            with srv.gauge_lock:
                srv.in_flight -= 1
            self._respond(b"busy done")
        elif self.path == "/robots.txt":
            self._respond(
                b"User-agent: *\nDisallow: /private\n", content_type="text/plain"
            )
        elif self.path == "/private":
            self._respond(b"<html><body>secret</body></html>")
        elif self.path == "/latin":
            body = "<html><head><meta charset=\"latin-1\"></head><body>caf\xe9</body></html>".encode(
                "latin-1"
            )
            self._respond(body, content_type="text/html")
        else:
            self._respond(b"not found", status=404)


class LocalServer:
    def __init__(self):
        self.httpd = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
        self.httpd.gauge_lock = threading.Lock()
        self.httpd.in_flight = 0
        self.httpd.max_in_flight = 0
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self.thread.start()

    @property
    def origin(self) -> str:
        host, port = self.httpd.server_address
        return f"http://127.0.0.1:{port}"

    def reset_gauge(self):
        with self.httpd.gauge_lock:
            self.httpd.in_flight = 0
            self.httpd.max_in_flight = 0

    @property
    def max_in_flight(self) -> int:
        return self.httpd.max_in_flight

    def stop(self):
        self.httpd.shutdown()
        self.httpd.server_close()


@pytest.fixture(scope="session")
def local_server():
    server = LocalServer()
    yield server
    server.stop()
