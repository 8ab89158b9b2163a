"""Executes mapping documents against their sources into one XML document."""

from __future__ import annotations

import enum
import logging
import os
import tempfile
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .endpoint import EndpointConfig, execute_select
from .errors import (
    IoError, OlmapError, SnippetNotWellFormed, SourceNotFound, SourceParseError,
    TurtleSyntaxError, EncodingError, WellFormednessError,
)
from .mapping import DataMap, MappingVocabulary, SourceKind, load_mappings
from .rdf.graph import Graph
from .rdf.turtle import parse_turtle, parse_turtle_file
from .sparql import evaluate, parse_query
from .sparql.results import ResultSet, SolutionRow
from .template import EscapeMode, instantiate
from .xmldom import (
    XmlComment, XmlDeclaration, XmlDocument, XmlElement, XmlText, deep_copy, open_or_create,
    parse_fragment, serialize,
)
from .xpath import parse_container, resolve_or_create

log = logging.getLogger(__name__)


class PairingMode(enum.Enum):
    CARTESIAN = "cartesian"   # every snippet into every container node
    ROW_PAIRED = "row"        # a row's snippet only into that row's containers


@dataclass
class ExecutionConfig:
    mapping_path: Path
    output_path: Path | None = None
    pairing: PairingMode = PairingMode.CARTESIAN
    strict: bool = True
    pretty: bool = False
    vocabulary: MappingVocabulary = field(default_factory=MappingVocabulary)
    endpoint_timeout: float = 30.0
    dry_run: bool = False

    def __post_init__(self):
        self.mapping_path = Path(self.mapping_path)
        if self.output_path is not None:
            self.output_path = Path(self.output_path)
        if not str(self.mapping_path):
            raise ValueError("mapping path must not be empty")
        if self.output_path is None and not self.dry_run:
            raise ValueError("an output path is required unless dry_run is set")


@dataclass
class DataMapReport:
    datamap: str
    rows: int = 0
    container_paths: int = 0      # distinct instantiated container expressions
    container_nodes: int = 0      # elements those expressions resolved to
    containers_created: int = 0
    snippets_inserted: int = 0    # top-level snippet elements appended

    def summary(self) -> str:
        return (f"<{self.datamap}>: rows={self.rows} containers={self.container_nodes} "
                f"created={self.containers_created} snippets={self.snippets_inserted}")


@dataclass
class ExecutionReport:
    datamaps: list[DataMapReport] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    success: bool = False
    document: str | None = None   # serialised output (always set on success)

    @property
    def snippets_inserted(self) -> int:
        return sum(r.snippets_inserted for r in self.datamaps)


def instantiate_snippet_fragment(text: str) -> list[XmlElement | XmlComment]:
    """Parse an instantiated snippet into its top-level elements (and comments)."""
    try:
        nodes = parse_fragment(text)
    except WellFormednessError as e:
        raise SnippetNotWellFormed(f"snippet is not well-formed XML ({e.message})",
                                   e.line, e.column) from None
    out: list[XmlElement | XmlComment] = []
    for node in nodes:
        if isinstance(node, XmlText):
            if node.text.strip(" \t\r\n"):
                raise SnippetNotWellFormed(f"snippet has text outside any element: {node.text.strip()!r}")
            continue
        if isinstance(node, (XmlElement, XmlComment)):
            out.append(node)
    if not any(isinstance(n, XmlElement) for n in out):
        raise SnippetNotWellFormed("snippet contains no element")
    return out


def _describe(row: SolutionRow) -> str:
    return "{" + ", ".join(f"?{k}={v.n3()}" for k, v in row.items()) + "}"


def apply_datamap(doc: XmlDocument, dm: DataMap, results: ResultSet,
                  pairing: PairingMode = PairingMode.CARTESIAN, strict: bool = True,
                  warnings: list[str] | None = None) -> DataMapReport:
    """Place the query results of one DataMap into ``doc``.

    Container strings are instantiated per row and de-duplicated, resolved
    (creating what is missing), and the snippet instantiation of each row is
    appended to the container nodes according to ``pairing``.
    """
    warnings = warnings if warnings is not None else []
    report = DataMapReport(dm.name, rows=len(results.rows))
    if not results.rows:
        warnings.append(f"<{dm.name}>: query returned no rows; nothing inserted")
        return report

    row_paths: list[str] = []
    for row in results.rows:
        row_paths.append(instantiate(dm.container, row, EscapeMode.PATH_VALUE, strict, warnings))
    distinct_paths = list(dict.fromkeys(row_paths))
    report.container_paths = len(distinct_paths)

    nodes_by_path: dict[str, list[XmlElement]] = {}
    created: list[XmlElement] = []
    for text in distinct_paths:
        nodes_by_path[text] = resolve_or_create(doc, parse_container(text), created)
    report.containers_created = len(created)

    container_nodes: list[XmlElement] = []
    seen: set[int] = set()
    for text in distinct_paths:
        for node in nodes_by_path[text]:
            if id(node) not in seen:
                seen.add(id(node))
                container_nodes.append(node)
    report.container_nodes = len(container_nodes)

    fragments = []
    for row, path in zip(results.rows, row_paths):
        text = instantiate(dm.snippet, row, EscapeMode.XML, strict, warnings)
        log.debug("<%s> row %s -> container %s, snippet %s", dm.name, _describe(row), path, text)
        try:
            fragments.append(instantiate_snippet_fragment(text))
        except SnippetNotWellFormed as e:
            e.message = f"{e.message}; row {_describe(row)}"
            e.args = (e.message,)
            raise

    for node in container_nodes:
        for fragment, path in zip(fragments, row_paths):
            if pairing is PairingMode.ROW_PAIRED and not any(n is node for n in nodes_by_path[path]):
                continue
            for piece in fragment:
                node.children.append(deep_copy(piece))
                if isinstance(piece, XmlElement):
                    report.snippets_inserted += 1
    return report


def _file_location(location: str, base_dir: Path) -> Path:
    parts = urllib.parse.urlsplit(location)
    if parts.scheme == "file":
        return Path(urllib.request.url2pathname(parts.path))
    if len(parts.scheme) > 1:
        raise SourceNotFound(f"{location} (file sources must be local paths or file: URIs)")
    path = Path(location)
    return path if path.is_absolute() else base_dir / path


def load_source_graph(path: Path) -> Graph:
    if not path.is_file():
        raise SourceNotFound(str(path))
    try:
        return parse_turtle_file(path)
    except (TurtleSyntaxError, EncodingError) as e:
        raise SourceParseError(f"cannot parse source {path}: {e}") from None
    except OSError as e:
        raise SourceNotFound(f"{path} ({e.strerror})") from None


def query_source(dm: DataMap, base_dir: Path, timeout: float = 30.0,
                 cache: dict[Path, Graph] | None = None) -> ResultSet:
    source = dm.source
    if source.kind is SourceKind.ENDPOINT:
        return execute_select(EndpointConfig(source.location, timeout), source.query_text)
    path = _file_location(source.location, base_dir).resolve()
    cache = cache if cache is not None else {}
    if path not in cache:
        cache[path] = load_source_graph(path)
    return evaluate(parse_query(source.query_text), cache[path])


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    if path.is_dir():
        raise IoError(f"output path is a directory: {path}")
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e.strerror}") from None
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as e:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise IoError(f"cannot write {path}: {e.strerror}") from None


def execute(config: ExecutionConfig) -> ExecutionReport:
    """Run every DataMap of the mapping document and write the result.

    Nothing is written unless every DataMap succeeded. With ``dry_run`` the
    serialised document is only returned in the report.
    """
    report = ExecutionReport()
    mapping_path = config.mapping_path
    if not mapping_path.is_file():
        raise SourceNotFound(str(mapping_path))
    mapping_graph = parse_turtle(mapping_path.read_bytes(), mapping_path.resolve().as_uri())

    if config.output_path is not None:
        doc = open_or_create(config.output_path)
    else:
        doc = XmlDocument(declaration=XmlDeclaration())

    datamaps = load_mappings(mapping_graph, config.vocabulary, report.warnings)
    base_dir = mapping_path.resolve().parent
    cache: dict[Path, Graph] = {}
    for dm in datamaps:
        try:
            results = query_source(dm, base_dir, config.endpoint_timeout, cache)
            dm_report = apply_datamap(doc, dm, results, config.pairing, config.strict,
                                      report.warnings)
        except OlmapError as e:
            e.datamap = e.datamap or dm.name
            raise
        report.datamaps.append(dm_report)

    if doc.root is None:
        # zero rows into a fresh document: there is nothing to write
        report.warnings.append("the result document is empty; no output written")
        report.document = ""
        report.success = True
        return report
    text = serialize(doc, pretty=config.pretty)
    if not config.dry_run:
        write_atomic(config.output_path, text)
    report.document = text
    report.success = True
    return report
