"""Local static file server for the bundled crawl corpus.

Serves a directory whose first path component is a logical hostname:
``/aurora-news.test/index.html``. Paired with
:func:`misinfonet.crawler.fixture_rewriter` this lets the crawler run the
whole pipeline with networking disabled.
"""

from __future__ import annotations

import contextlib
import functools
import threading
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

__all__ = ["make_server", "serve_forever", "running_server"]


class _QuietHandler(SimpleHTTPRequestHandler):
    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass


def make_server(directory: str | Path, port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = functools.partial(_QuietHandler, directory=str(directory))
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(directory: str | Path, port: int, host: str = "127.0.0.1") -> None:
    server = make_server(directory, port, host)
    print(f"serving fixtures from {directory} on http://{host}:{server.server_address[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


@contextlib.contextmanager
def running_server(directory: str | Path, port: int = 0, host: str = "127.0.0.1"):
    """Start the server on a background thread; yields the bound port."""
    server = make_server(directory, port, host)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server.server_address[1]
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)
