from __future__ import annotations

import json
import threading
import time
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from olmap.endpoint import results_to_json
from olmap.rdf import parse_turtle
from olmap.sparql import evaluate, parse_query

from support import ROBOT_TTL, datamap_ttl, mapping_ttl


@pytest.fixture
def robot_graph():
    return parse_turtle(ROBOT_TTL)


@pytest.fixture
def robot_dir(tmp_path: Path) -> Path:
    """A directory holding the robot source graph and a one-DataMap mapping."""
    (tmp_path / "parameters.ttl").write_text(ROBOT_TTL, encoding="utf-8")
    (tmp_path / "mapping.ttl").write_text(mapping_ttl(datamap_ttl()), encoding="utf-8")
    return tmp_path


class StubEndpoint:
    """A local SPARQL 1.1 Protocol endpoint answering from an in-memory graph."""

    def __init__(self, graph):
        self.graph = graph
        self.requests: list[dict] = []
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                body = self.rfile.read(length).decode("utf-8")
                stub.requests.append({
                    "path": self.path,
                    "content_type": self.headers.get("Content-Type"),
                    "accept": self.headers.get("Accept"),
                    "headers": dict(self.headers),
                    "body": body,
                })
                if self.path == "/slow":
                    time.sleep(3)
                if self.path == "/error":
                    self._send(500, "text/plain", "boom: query failed")
                    return
                if self.path == "/garbage":
                    self._send(200, "application/sparql-results+json", "{not json")
                    return
                query = urllib.parse.parse_qs(body)["query"][0]
                results = evaluate(parse_query(query), stub.graph)
                self._send(200, "application/sparql-results+json", results_to_json(results))

            def _send(self, status, ctype, text):
                data = text.encode("utf-8")
                try:
                    self.send_response(status)
                    self.send_header("Content-Type", ctype)
                    self.send_header("Content-Length", str(len(data)))
                    self.end_headers()
                    self.wfile.write(data)
                except (BrokenPipeError, ConnectionResetError):
                    pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.server.daemon_threads = True
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self.server.server_address
        return f"http://{host}:{port}/sparql"

    def url_for(self, path: str) -> str:
        host, port = self.server.server_address
        return f"http://{host}:{port}{path}"

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def stub_endpoint(robot_graph):
    with StubEndpoint(robot_graph) as stub:
        yield stub


def robot_results_json() -> str:
    return json.dumps({
        "head": {"vars": ["parameterName", "parameterValue"]},
        "results": {"bindings": [
            {"parameterName": {"type": "literal", "value": name},
             "parameterValue": {"type": "literal", "value": value,
                                "datatype": "http://www.w3.org/2001/XMLSchema#integer"}}
            # deliberately not in sorted order
            for name, value in [("arm3", "220"), ("arm1", "200"), ("arm2", "260")]
        ]},
    })


def pytest_terminal_summary(terminalreporter):
    from support import ACCEPTANCE_RESULTS

    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
