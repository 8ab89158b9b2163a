"""Turtle reader and writer.

Everything in Turtle is supported except collections ``( ... )`` and
RDF-star quoted triples, which raise :class:`TurtleSyntaxError` naming the
construct. N-Triples documents are valid Turtle and parse here as well.
"""

from __future__ import annotations

import itertools
from pathlib import Path

from ..errors import EncodingError, TurtleSyntaxError
from .graph import Graph
from .syntax import (
    DECIMAL_RE, DOUBLE_RE, INTEGER_RE, LOCAL_NAME_SIMPLE, PREFIX_SIMPLE, STRING_KINDS,
    LexError, Token, iri_value, split_pname, string_value, tokenize,
)
from .terms import (
    RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
    BlankNode, Iri, Literal, Term, Triple, is_absolute_iri, resolve_iri, term_key,
)

_NUMERIC_KINDS = {"INTEGER": XSD_INTEGER, "DECIMAL": XSD_DECIMAL, "DOUBLE": XSD_DOUBLE}


class _TurtleParser:
    def __init__(self, text: str, base: str | None):
        try:
            self.tokens = tokenize(text)
        except LexError as e:
            raise TurtleSyntaxError(str(e), e.line, e.column, e.token) from None
        self.pos = 0
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.graph = Graph()
        self._bnodes: dict[str, BlankNode] = {}
        self._fresh = itertools.count()

    # -- token helpers -------------------------------------------------------
    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise TurtleSyntaxError("unexpected end of document",
                                    last.line if last else 1,
                                    last.column if last else 1, None)
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        if tok is None:
            return self.next()  # raises end-of-document error
        raise TurtleSyntaxError(message, tok.line, tok.column, tok.value)

    def is_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "PUNCT" and tok.value == value

    def expect(self, value: str) -> Token:
        tok = self.next()
        if tok.kind != "PUNCT" or tok.value != value:
            self.error(f"expected {value!r}", tok)
        return tok

    def fresh_bnode(self) -> BlankNode:
        return BlankNode(f"b{next(self._fresh)}")

    def resolve(self, iri: str, tok: Token) -> Iri:
        if not is_absolute_iri(iri):
            if self.base is None:
                self.error("relative IRI with no base IRI", tok)
            iri = resolve_iri(self.base, iri)
        try:
            return Iri(iri)
        except ValueError:
            self.error("invalid IRI", tok)

    # -- grammar -------------------------------------------------------------
    def parse(self) -> Graph:
        while self.peek() is not None:
            self.statement()
        return self.graph

    def statement(self):
        tok = self.peek()
        if tok.kind == "LANGTAG" and tok.value in ("@prefix", "@base"):
            self.next()
            self.directive(tok.value[1:])
            self.expect(".")
        elif tok.kind == "NAME" and tok.value.upper() in ("PREFIX", "BASE"):
            self.next()
            self.directive(tok.value.lower())
        else:
            self.triples()
            self.expect(".")

    def directive(self, which: str):
        if which == "prefix":
            ns = self.next()
            if ns.kind != "PNAME_NS":
                self.error("expected a prefix name ending in ':'", ns)
            iri = self.next()
            if iri.kind != "IRIREF":
                self.error("expected an IRI", iri)
            self.prefixes[ns.value[:-1]] = self.resolve(iri_value(iri), iri).value
        else:
            iri = self.next()
            if iri.kind != "IRIREF":
                self.error("expected an IRI", iri)
            self.base = self.resolve(iri_value(iri), iri).value

    def triples(self):
        if self.is_punct("["):
            subject = self.blank_node_property_list()
            if self.is_punct("."):
                return
        else:
            subject = self.subject()
        self.predicate_object_list(subject)

    def subject(self) -> Term:
        tok = self.peek()
        if tok is None:
            self.next()
        if tok.kind in ("IRIREF", "PNAME_LN", "PNAME_NS"):
            return self.iri()
        if tok.kind == "BNODE":
            self.next()
            return self.labelled_bnode(tok)
        self.unsupported(tok)
        self.error("expected a subject (IRI or blank node)", tok)

    def unsupported(self, tok: Token):
        if tok.kind == "PUNCT" and tok.value == "(":
            self.error("collections '( ... )' are not supported", tok)
        if tok.kind == "PUNCT" and tok.value == "<<":
            self.error("quoted triples '<< ... >>' are not supported", tok)

    def labelled_bnode(self, tok: Token) -> BlankNode:
        label = tok.value[2:]
        node = self._bnodes.get(label)
        if node is None:
            node = self._bnodes[label] = self.fresh_bnode()
        return node

    def iri(self) -> Iri:
        tok = self.next()
        if tok.kind == "IRIREF":
            return self.resolve(iri_value(tok), tok)
        if tok.kind in ("PNAME_LN", "PNAME_NS"):
            prefix, local = split_pname(tok)
            if prefix not in self.prefixes:
                self.error(f"undeclared prefix {prefix!r}", tok)
            try:
                return Iri(self.prefixes[prefix] + local)
            except ValueError:
                self.error("invalid IRI", tok)
        self.error("expected an IRI", tok)

    def predicate_object_list(self, subject: Term):
        while True:
            predicate = self.verb()
            self.object_list(subject, predicate)
            if not self.is_punct(";"):
                return
            while self.is_punct(";"):
                self.next()
            tok = self.peek()
            if tok is None or (tok.kind == "PUNCT" and tok.value in (".", "]")):
                return

    def verb(self) -> Iri:
        tok = self.peek()
        if tok is not None and tok.kind == "NAME" and tok.value == "a":
            self.next()
            return Iri(RDF_TYPE)
        if tok is not None and tok.kind in ("IRIREF", "PNAME_LN", "PNAME_NS"):
            return self.iri()
        self.error("expected a predicate", tok)

    def object_list(self, subject: Term, predicate: Iri):
        while True:
            obj = self.object()
            self.graph.add(Triple(subject, predicate, obj))
            if not self.is_punct(","):
                return
            self.next()

    def object(self) -> Term:
        tok = self.peek()
        if tok is None:
            self.next()
        if tok.kind in ("IRIREF", "PNAME_LN", "PNAME_NS"):
            return self.iri()
        if tok.kind == "BNODE":
            self.next()
            return self.labelled_bnode(tok)
        if tok.kind == "PUNCT" and tok.value == "[":
            return self.blank_node_property_list()
        if tok.kind in STRING_KINDS:
            return self.rdf_literal()
        if tok.kind in _NUMERIC_KINDS:
            self.next()
            return Literal(tok.value, _NUMERIC_KINDS[tok.kind])
        if tok.kind == "NAME" and tok.value in ("true", "false"):
            self.next()
            return Literal(tok.value, XSD_BOOLEAN)
        self.unsupported(tok)
        self.error("expected an object", tok)

    def blank_node_property_list(self) -> BlankNode:
        self.expect("[")
        node = self.fresh_bnode()
        if self.is_punct("]"):
            self.next()
            return node
        self.predicate_object_list(node)
        self.expect("]")
        return node

    def rdf_literal(self) -> Literal:
        tok = self.next()
        lexical = string_value(tok)
        nxt = self.peek()
        if nxt is not None and nxt.kind == "LANGTAG":
            self.next()
            return Literal(lexical, language=nxt.value[1:])
        if nxt is not None and nxt.kind == "PUNCT" and nxt.value == "^^":
            self.next()
            datatype = self.iri()
            return Literal(lexical, datatype.value)
        return Literal(lexical, XSD_STRING)


def parse_turtle(text: str | bytes, base_iri: str | None = None) -> Graph:
    """Parse a Turtle document into a :class:`Graph`.

    ``text`` may be bytes, in which case it must be valid UTF-8. Relative IRIs
    are resolved against ``base_iri`` (or an ``@base`` directive).
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise EncodingError(f"input is not valid UTF-8 (byte offset {e.start})") from None
    if text.startswith("﻿"):
        text = text[1:]
    return _TurtleParser(text, base_iri).parse()


def parse_turtle_file(path: str | Path, base_iri: str | None = None) -> Graph:
    path = Path(path)
    data = path.read_bytes()
    return parse_turtle(data, base_iri or path.resolve().as_uri())


# -- serialisation -----------------------------------------------------------

def _abbreviate(iri: str, prefixes: dict[str, str]) -> str | None:
    best = None
    for prefix, ns in prefixes.items():
        if iri.startswith(ns) and PREFIX_SIMPLE.match(prefix):
            local = iri[len(ns):]
            if local == "" or LOCAL_NAME_SIMPLE.match(local):
                if best is None or len(ns) > len(prefixes[best[0]]):
                    best = (prefix, local)
    if best is None:
        return None
    return f"{best[0]}:{best[1]}"


def _format_term(term: Term, prefixes: dict[str, str]) -> str:
    if isinstance(term, Iri):
        return _abbreviate(term.value, prefixes) or term.n3()
    if isinstance(term, Literal) and term.language is None:
        lex, dt = term.lexical, term.datatype
        if ((dt == XSD_INTEGER and INTEGER_RE.match(lex))
                or (dt == XSD_DECIMAL and DECIMAL_RE.match(lex))
                or (dt == XSD_DOUBLE and DOUBLE_RE.match(lex))
                or (dt == XSD_BOOLEAN and lex in ("true", "false"))):
            return lex
        if dt != XSD_STRING:
            body = Literal(lex).n3()
            return f"{body}^^{_abbreviate(dt, prefixes) or '<' + dt + '>'}"
    return term.n3()


def serialize_turtle(g: Graph, prefixes: dict[str, str] | None = None) -> str:
    """Write ``g`` as Turtle, grouping by subject in deterministic order."""
    prefixes = dict(prefixes or {})
    for ns in prefixes.values():
        if not is_absolute_iri(ns):
            raise ValueError(f"prefix namespace is not an absolute IRI: {ns!r}")
    lines = [f"@prefix {p}: <{ns}> ." for p, ns in sorted(prefixes.items())]
    by_subject: dict[Term, list[Triple]] = {}
    for t in g:
        by_subject.setdefault(t.subject, []).append(t)
    if lines and by_subject:
        lines.append("")
    for subject in sorted(by_subject, key=term_key):
        triples = by_subject[subject]
        parts = []
        for pred, group in itertools.groupby(triples, key=lambda t: t.predicate):
            objs = ", ".join(_format_term(t.object, prefixes) for t in group)
            verb = "a" if pred.value == RDF_TYPE else _format_term(pred, prefixes)
            parts.append(f"{verb} {objs}")
        head = _format_term(subject, prefixes)
        lines.append(head + " " + " ;\n    ".join(parts) + " .")
    return "\n".join(lines) + "\n"
