"""SPARQL 1.1 Protocol client for ``application/sparql-results+json``."""

from __future__ import annotations

import json
import socket
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field

from .errors import NetworkError, ProtocolError, ResultFormatError
from .rdf.terms import BlankNode, Iri, Literal, Term, XSD_STRING
from .sparql.results import ResultSet, SolutionRow, sort_rows

RESULTS_JSON = "application/sparql-results+json"


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    timeout: float = 30.0
    extra_headers: tuple[tuple[str, str], ...] = field(default=())

    def __post_init__(self):
        scheme = urllib.parse.urlsplit(self.url).scheme.lower()
        if scheme not in ("http", "https"):
            raise ValueError(f"endpoint URL must be http(s): {self.url!r}")
        if not self.timeout > 0:
            raise ValueError("endpoint timeout must be positive")


def parse_json_term(obj) -> Term:
    if not isinstance(obj, dict) or "type" not in obj or "value" not in obj:
        raise ResultFormatError(f"malformed RDF term: {obj!r}")
    kind, value = obj["type"], obj["value"]
    if not isinstance(value, str):
        raise ResultFormatError(f"term value is not a string: {obj!r}")
    try:
        if kind == "uri":
            return Iri(value)
        if kind == "bnode":
            return BlankNode(value)
        if kind in ("literal", "typed-literal"):
            lang = obj.get("xml:lang")
            if lang:
                return Literal(value, language=lang)
            return Literal(value, obj.get("datatype", XSD_STRING))
    except ValueError as e:
        raise ResultFormatError(f"invalid RDF term {obj!r}: {e}") from None
    raise ResultFormatError(f"unknown term type {kind!r}")


def parse_results_json(body: str | bytes) -> ResultSet:
    """Decode a SPARQL JSON results document into a sorted :class:`ResultSet`."""
    try:
        doc = json.loads(body)
        variables = doc["head"]["vars"]
        bindings = doc["results"]["bindings"]
    except (ValueError, KeyError, TypeError) as e:
        raise ResultFormatError(f"not a SPARQL JSON SELECT result: {e}") from None
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise ResultFormatError("head.vars must be a list of names")
    if not isinstance(bindings, list):
        raise ResultFormatError("results.bindings must be a list")
    rows: list[SolutionRow] = []
    for binding in bindings:
        if not isinstance(binding, dict):
            raise ResultFormatError(f"binding is not an object: {binding!r}")
        unknown = set(binding) - set(variables)
        if unknown:
            raise ResultFormatError(f"binding for undeclared variable(s) {sorted(unknown)}")
        rows.append({v: parse_json_term(binding[v]) for v in variables if v in binding})
    return ResultSet(tuple(variables), tuple(sort_rows(variables, rows)))


def _term_json(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    out = {"type": "literal", "value": term.lexical}
    if term.language:
        out["xml:lang"] = term.language
    elif term.datatype != XSD_STRING:
        out["datatype"] = term.datatype
    return out


def results_to_json(results: ResultSet) -> str:
    """Encode a result set in the SPARQL JSON results format."""
    return json.dumps({
        "head": {"vars": list(results.variables)},
        "results": {"bindings": [
            {name: _term_json(term) for name, term in row.items()} for row in results.rows
        ]},
    })


def execute_select(cfg: EndpointConfig, query_text: str) -> ResultSet:
    """POST ``query_text`` to the endpoint and decode the JSON answer.

    The query is sent verbatim; the endpoint may support more SPARQL than the
    local evaluator does.
    """
    body = urllib.parse.urlencode({"query": query_text}).encode("utf-8")
    headers = {
        "Content-Type": "application/x-www-form-urlencoded",
        "Accept": RESULTS_JSON,
    }
    headers.update(dict(cfg.extra_headers))
    request = urllib.request.Request(cfg.url, data=body, headers=headers, method="POST")
    try:
        with urllib.request.urlopen(request, timeout=cfg.timeout) as response:
            payload = response.read()
    except urllib.error.HTTPError as e:
        try:
            text = e.read().decode("utf-8", "replace")
        except Exception:
            text = ""
        raise ProtocolError(e.code, text) from None
    except (urllib.error.URLError, socket.timeout, TimeoutError, ConnectionError) as e:
        reason = getattr(e, "reason", e)
        raise NetworkError(f"cannot query {cfg.url}: {reason}") from None
    return parse_results_json(payload)
