"""RDF terms and triples."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"
RDF_LANGSTRING = RDF + "langString"
RDF_TYPE = RDF + "type"

_ABSOLUTE_IRI = re.compile(r'^[A-Za-z][A-Za-z0-9+.\-]*:[^\x00-\x20<>"{}|^`\\]*$')
_BNODE_LABEL = re.compile(r"^[A-Za-z0-9_À-￿]([A-Za-z0-9_.\-·À-￿]*[A-Za-z0-9_\-·À-￿])?$")
_LANGTAG = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")


def is_absolute_iri(value: str) -> bool:
    return bool(_ABSOLUTE_IRI.match(value))


def _escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\b":
            out.append("\\b")
        elif ch == "\f":
            out.append("\\f")
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True, order=False)
class Iri:
    value: str

    def __post_init__(self):
        if not is_absolute_iri(self.value):
            raise ValueError(f"not an absolute IRI: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=False)
class BlankNode:
    label: str

    def __post_init__(self):
        if not _BNODE_LABEL.match(self.label):
            raise ValueError(f"invalid blank node label: {self.label!r}")

    def n3(self) -> str:
        return f"_:{self.label}"

    def __str__(self) -> str:
        return self.n3()


@dataclass(frozen=True, order=False)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    language: str | None = None

    def __post_init__(self):
        if self.language is not None:
            if not _LANGTAG.match(self.language):
                raise ValueError(f"invalid language tag: {self.language!r}")
            # language tags are case-insensitive; normalise for equality
            object.__setattr__(self, "language", self.language.lower())
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", RDF_LANGSTRING)
            elif self.datatype != RDF_LANGSTRING:
                raise ValueError("a language-tagged literal must be an rdf:langString")
        elif self.datatype == RDF_LANGSTRING:
            raise ValueError("rdf:langString literal without a language tag")
        if not is_absolute_iri(self.datatype):
            raise ValueError(f"datatype is not an absolute IRI: {self.datatype!r}")

    def n3(self) -> str:
        body = f'"{_escape_string(self.lexical)}"'
        if self.language is not None:
            return f"{body}@{self.language}"
        if self.datatype == XSD_STRING:
            return body
        return f"{body}^^<{self.datatype}>"

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, BlankNode, Literal]


class Triple(NamedTuple):
    subject: Term
    predicate: Iri
    object: Term

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


def make_triple(s: Term, p: Term, o: Term) -> Triple:
    if isinstance(s, Literal):
        raise ValueError("a literal cannot be the subject of a triple")
    if not isinstance(p, Iri):
        raise ValueError("the predicate of a triple must be an IRI")
    return Triple(s, p, o)


def term_key(term: Term) -> str:
    """Total-order key used wherever deterministic ordering is needed."""
    return term.n3()


def term_to_text(term: Term) -> str:
    """The plain text a bound value contributes when substituted into a template.

    Literals give their lexical form (datatype and language are dropped), IRIs
    their full string and blank nodes ``_:label``. No escaping happens here.
    """
    if isinstance(term, Literal):
        return term.lexical
    if isinstance(term, Iri):
        return term.value
    return term.n3()


_URI_PARTS = re.compile(r"^(?:([A-Za-z][A-Za-z0-9+.\-]*):)?(?://([^/?#]*))?([^?#]*)(?:\?([^#]*))?(?:#(.*))?$", re.S)


def _remove_dot_segments(path: str) -> str:
    out: list[str] = []
    while path:
        if path.startswith("../"):
            path = path[3:]
        elif path.startswith("./"):
            path = path[2:]
        elif path.startswith("/./"):
            path = path[2:]
        elif path == "/.":
            path = "/"
        elif path.startswith("/../"):
            path = path[3:]
            if out:
                out.pop()
        elif path == "/..":
            path = "/"
            if out:
                out.pop()
        elif path in (".", ".."):
            path = ""
        else:
            start = 1 if path.startswith("/") else 0
            end = path.find("/", start)
            end = len(path) if end < 0 else end
            out.append(path[:end])
            path = path[end:]
    return "".join(out)


def resolve_iri(base: str, ref: str) -> str:
    """Resolve ``ref`` against ``base`` (RFC 3986, section 5.2)."""
    r_scheme, r_auth, r_path, r_query, r_frag = _URI_PARTS.match(ref).groups()
    b_scheme, b_auth, b_path, b_query, _ = _URI_PARTS.match(base).groups()
    if r_scheme is not None:
        scheme, auth, path, query = r_scheme, r_auth, _remove_dot_segments(r_path), r_query
    elif r_auth is not None:
        scheme, auth, path, query = b_scheme, r_auth, _remove_dot_segments(r_path), r_query
    elif r_path == "":
        scheme, auth, path = b_scheme, b_auth, b_path
        query = r_query if r_query is not None else b_query
    else:
        if r_path.startswith("/"):
            path = _remove_dot_segments(r_path)
        else:
            if b_auth is not None and b_path == "":
                merged = "/" + r_path
            else:
                merged = b_path[:b_path.rfind("/") + 1] + r_path
            path = _remove_dot_segments(merged)
        scheme, auth, query = b_scheme, b_auth, r_query
    out = f"{scheme}:" if scheme is not None else ""
    if auth is not None:
        out += f"//{auth}"
    out += path
    if query is not None:
        out += f"?{query}"
    if r_frag is not None:
        out += f"#{r_frag}"
    return out
