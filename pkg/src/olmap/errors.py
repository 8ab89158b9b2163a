"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
any failure to exactly one process status:

    2  mapping / validation problems
    3  source problems (missing files, endpoint failures, bad source data)
    4  output problems (well-formedness, I/O on the output document)
"""

from __future__ import annotations


class OlmapError(Exception):
    exit_code = 2

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message
        self.datamap: str | None = None

    def __str__(self) -> str:
        if self.datamap:
            return f"<{self.datamap}>: {self.message}"
        return self.message


class UsageError(OlmapError):
    exit_code = 1


# -- mapping / validation (2) ------------------------------------------------

class MappingError(OlmapError):
    exit_code = 2


class ParseError(MappingError):
    """Syntax error in some textual input, with a 1-based position."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, token: str | None = None):
        where = ""
        if line is not None:
            where = f" at line {line}, column {column}"
        if token is not None:
            where += f" near {token!r}"
        super().__init__(message + where)
        self.line = line
        self.column = column
        self.token = token


class TurtleSyntaxError(ParseError):
    pass


class EncodingError(MappingError):
    pass


class SparqlSyntaxError(ParseError):
    pass


class UnsupportedFeature(MappingError):
    def __init__(self, feature: str):
        super().__init__(f"unsupported SPARQL feature: {feature}")
        self.feature = feature


class ValidationError(MappingError):
    def __init__(self, problems: dict[str, list[str]]):
        lines = []
        for subject, issues in problems.items():
            lines.append(f"<{subject}>: " + "; ".join(issues))
        super().__init__("invalid mapping definition(s): " + " | ".join(lines))
        self.problems = problems


class UnsupportedQueryLanguage(MappingError):
    pass


class TemplateSyntaxError(ParseError):
    pass


class UnboundVariableError(MappingError):
    def __init__(self, name: str):
        super().__init__(f"variable ?{name} is unbound in the current row")
        self.name = name


class QuoteConflictError(MappingError):
    pass


class PathSyntaxError(ParseError):
    pass


class UnsupportedXPath(MappingError):
    def __init__(self, construct: str, path: str):
        super().__init__(f"unsupported container expression ({construct}): {path!r}")
        self.construct = construct


# -- source (3) ---------------------------------------------------------------

class SourceError(OlmapError):
    exit_code = 3


class SourceNotFound(SourceError):
    def __init__(self, path: str):
        super().__init__(f"no such file: {path}")
        self.path = path


class SourceParseError(SourceError):
    pass


class NetworkError(SourceError):
    pass


class ProtocolError(SourceError):
    def __init__(self, status: int, body: str):
        excerpt = body[:200]
        super().__init__(f"endpoint answered HTTP {status}: {excerpt}")
        self.status = status
        self.body = body


class ResultFormatError(SourceError):
    pass


# -- output (4) ---------------------------------------------------------------

class OutputError(OlmapError):
    exit_code = 4


class WellFormednessError(OutputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class SnippetNotWellFormed(WellFormednessError):
    pass


class IoError(OutputError):
    pass


class EmptyDocumentError(OutputError):
    pass


class RootConflictError(OutputError):
    pass
