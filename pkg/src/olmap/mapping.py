"""Mapping documents: vocabulary and :class:`DataMap` extraction.

A mapping document is an RDF graph. Each subject typed ``ol:DataMap`` is one
mapping definition::

    <#ParameterMapping> a ol:DataMap ;
        ol:ontologicalSource [
            ol:location "parameters.ttl" ;
            ol:sourceType ol:File ;            # or ol:Endpoint
            ol:queryLanguage ol:SPARQL ;       # optional, SPARQL is the only one
            ol:query "SELECT ..."
        ] ;
        ol:container "/parameters" ;
        ol:snippet "<parameter>...</parameter>" .
"""

from __future__ import annotations

import enum
import logging
import urllib.parse
from dataclasses import dataclass

from .errors import MappingError, ParseError, UnsupportedFeature, UnsupportedQueryLanguage, ValidationError
from .rdf.graph import Graph
from .rdf.terms import RDF_TYPE, Iri, Literal, Term
from .sparql import evaluate, parse_query
from .template import Template, parse_template, variables_of

log = logging.getLogger(__name__)

DEFAULT_NAMESPACE = "https://w3id.org/olmap/vocab#"


class SourceKind(enum.Enum):
    FILE = "File"
    ENDPOINT = "Endpoint"


@dataclass(frozen=True)
class MappingVocabulary:
    namespace: str = DEFAULT_NAMESPACE
    data_map: str | None = None
    ontological_source: str | None = None
    location: str | None = None
    source_type: str | None = None
    query_language: str | None = None
    query: str | None = None
    container: str | None = None
    snippet: str | None = None

    def __post_init__(self):
        # fill every IRI not overridden from the namespace
        for attr, local in (("data_map", "DataMap"), ("ontological_source", "ontologicalSource"),
                            ("location", "location"), ("source_type", "sourceType"),
                            ("query_language", "queryLanguage"), ("query", "query"),
                            ("container", "container"), ("snippet", "snippet")):
            if getattr(self, attr) is None:
                object.__setattr__(self, attr, self.namespace + local)

    def iri(self, local: str) -> Iri:
        return Iri(self.namespace + local)


@dataclass(frozen=True)
class OntologicalSource:
    location: str
    kind: SourceKind
    query_language: str
    query_text: str


@dataclass(frozen=True)
class DataMap:
    iri: Term
    source: OntologicalSource
    container: Template
    snippet: Template

    @property
    def name(self) -> str:
        return self.iri.value if isinstance(self.iri, Iri) else self.iri.n3()


def _single(g: Graph, subject: Term, prop: str, label: str, problems: list[str]) -> Term | None:
    values = g.objects(subject, Iri(prop))
    if not values:
        problems.append(f"missing {label}")
        return None
    if len(values) > 1:
        problems.append(f"more than one {label}")
        return None
    return values[0]


def _string(value: Term | None, label: str, problems: list[str]) -> str | None:
    if value is None:
        return None
    if not isinstance(value, Literal):
        problems.append(f"{label} must be a literal")
        return None
    return value.lexical


def _read_source(g: Graph, node: Term, vocab: MappingVocabulary,
                 problems: list[str]) -> OntologicalSource | None:
    location_term = _single(g, node, vocab.location, "source location", problems)
    location = None
    if isinstance(location_term, Iri):
        location = location_term.value
    elif isinstance(location_term, Literal):
        location = location_term.lexical
    elif location_term is not None:
        problems.append("source location must be an IRI or a literal")

    kind = None
    kind_term = _single(g, node, vocab.source_type, "source type", problems)
    if kind_term is not None:
        for k in SourceKind:
            if kind_term == vocab.iri(k.value):
                kind = k
        if kind is None:
            problems.append(f"unrecognized source type {kind_term.n3()}")

    language = "SPARQL"
    languages = g.objects(node, Iri(vocab.query_language))
    if len(languages) > 1:
        problems.append("more than one query language")
    elif languages:
        lang = languages[0]
        if not (lang == vocab.iri("SPARQL")
                or (isinstance(lang, Literal) and lang.lexical.strip().upper() == "SPARQL")):
            raise UnsupportedQueryLanguage(
                f"query language {lang.n3()} is not supported; only SPARQL is")

    query = _string(_single(g, node, vocab.query, "query", problems), "query", problems)

    if kind is SourceKind.ENDPOINT and location is not None:
        scheme = urllib.parse.urlsplit(location).scheme.lower()
        if scheme not in ("http", "https"):
            problems.append(f"endpoint location must be an http(s) URL, got {location!r}")
    if location is None or kind is None or query is None:
        return None
    return OntologicalSource(location, kind, language, query)


def _read_template(g: Graph, subject: Term, prop: str, label: str,
                   problems: list[str]) -> Template | None:
    text = _string(_single(g, subject, prop, label, problems), label, problems)
    if text is None:
        return None
    try:
        t = parse_template(text)
    except ParseError as e:
        problems.append(f"{label}: {e}")
        return None
    if label == "container" and not text.strip():
        problems.append("container is empty")
        return None
    return t


def _projection_warnings(dm: DataMap) -> list[str]:
    try:
        projected = set(parse_query(dm.source.query_text).projection)
    except (ParseError, UnsupportedFeature):
        return []
    out = []
    for label, t in (("container", dm.container), ("snippet", dm.snippet)):
        for name in sorted(variables_of(t) - projected):
            out.append(f"<{dm.name}>: {label} uses ${{{name}}} which the query does not project")
    return out


def load_mappings(g: Graph, vocab: MappingVocabulary | None = None,
                  warnings: list[str] | None = None) -> list[DataMap]:
    """Every ``ol:DataMap`` in ``g``, validated and sorted by subject.

    All problems across all definitions are collected into a single
    :class:`ValidationError`. Queries of file sources are parsed here so a
    malformed query fails before any output is touched.
    """
    vocab = vocab or MappingVocabulary()
    warnings = warnings if warnings is not None else []
    q = parse_query(f"SELECT DISTINCT ?d WHERE {{ ?d <{RDF_TYPE}> <{vocab.data_map}> }}")
    subjects = sorted((row["d"] for row in evaluate(q, g)),
                      key=lambda t: (not isinstance(t, Iri), t.value if isinstance(t, Iri) else t.n3()))
    if not subjects:
        msg = f"the mapping document defines no <{vocab.data_map}>"
        warnings.append(msg)
        log.debug(msg)
        return []

    all_problems: dict[str, list[str]] = {}
    result: list[DataMap] = []
    for subject in subjects:
        problems: list[str] = []
        source_node = _single(g, subject, vocab.ontological_source, "ontological source", problems)
        source = None
        if isinstance(source_node, Literal):
            problems.append("ontological source must be a resource, not a literal")
        elif source_node is not None:
            source = _read_source(g, source_node, vocab, problems)
        container = _read_template(g, subject, vocab.container, "container", problems)
        snippet = _read_template(g, subject, vocab.snippet, "snippet", problems)
        if source is not None and source.kind is SourceKind.FILE:
            try:
                parse_query(source.query_text)
            except MappingError as e:
                problems.append(f"query: {e}")
        name = subject.value if isinstance(subject, Iri) else subject.n3()
        if problems:
            all_problems[name] = problems
            continue
        dm = DataMap(subject, source, container, snippet)
        for w in _projection_warnings(dm):
            warnings.append(w)
            log.debug(w)
        result.append(dm)
    if all_problems:
        raise ValidationError(all_problems)
    return result


def load_mapping_file(path, vocab: MappingVocabulary | None = None,
                      warnings: list[str] | None = None) -> list[DataMap]:
    from .rdf.turtle import parse_turtle_file

    return load_mappings(parse_turtle_file(path), vocab, warnings)


__all__ = ["DEFAULT_NAMESPACE", "DataMap", "MappingVocabulary", "OntologicalSource",
           "SourceKind", "load_mappings", "load_mapping_file"]
