"""Lexical layer shared by the Turtle and SPARQL parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass

PN_CHARS_BASE = (
    "A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF"
    "\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF"
    "\uFDF0-\uFFFD\U00010000-\U000EFFFF"
)
PN_CHARS_U = PN_CHARS_BASE + "_"
PN_CHARS = PN_CHARS_U + "\\-0-9\u00B7\u0300-\u036F\u203F-\u2040"
PLX = r"(?:%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%])"
PN_PREFIX = rf"[{PN_CHARS_BASE}](?:[{PN_CHARS}.]*[{PN_CHARS}])?"
PN_LOCAL = (
    rf"(?:[{PN_CHARS_U}:0-9]|{PLX})"
    rf"(?:(?:[{PN_CHARS}.:]|{PLX})*(?:[{PN_CHARS}:]|{PLX}))?"
)
UCHAR = r"(?:\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})"
ECHAR = r"(?:\\[tbnrf\"'\\])"

TOKEN_PATTERNS = [
    ("IRIREF", rf"<(?:[^\x00-\x20<>\"{{}}|^`\\]|{UCHAR})*>"),
    ("PNAME_LN", rf"(?:{PN_PREFIX})?:{PN_LOCAL}"),
    ("PNAME_NS", rf"(?:{PN_PREFIX})?:"),
    ("BNODE", rf"_:[{PN_CHARS_U}0-9](?:[{PN_CHARS}.]*[{PN_CHARS}])?"),
    ("VAR", rf"[?$][{PN_CHARS_U}0-9][{PN_CHARS_U}0-9\u00B7\u0300-\u036F\u203F-\u2040]*"),
    ("LANGTAG", r"@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*"),
    ("DOUBLE", r"[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+)"),
    ("DECIMAL", r"[+-]?[0-9]*\.[0-9]+"),
    ("INTEGER", r"[+-]?[0-9]+"),
    ("STRING_LONG_QUOTE", rf'"""(?:(?:"|"")?(?:[^"\\]|{ECHAR}|{UCHAR}))*"""'),
    ("STRING_LONG_SINGLE", rf"'''(?:(?:'|'')?(?:[^'\\]|{ECHAR}|{UCHAR}))*'''"),
    ("STRING_QUOTE", rf'"(?:[^"\\\n\r]|{ECHAR}|{UCHAR})*"'),
    ("STRING_SINGLE", rf"'(?:[^'\\\n\r]|{ECHAR}|{UCHAR})*'"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("PUNCT", r"\^\^|<<|>>|&&|\|\||!=|<=|>=|[.;,\[\](){}=<>!*+\-/|^?]"),
]

_MASTER = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in TOKEN_PATTERNS[1:]))
_SKIP = re.compile(r"(?:[ \t\r\n]+|#[^\r\n]*)+")
_IRIREF = re.compile(TOKEN_PATTERNS[0][1])

STRING_KINDS = {"STRING_LONG_QUOTE", "STRING_LONG_SINGLE", "STRING_QUOTE", "STRING_SINGLE"}
@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


class LexError(Exception):
    def __init__(self, message: str, line: int, column: int, token: str):
        super().__init__(message)
        self.line = line
        self.column = column
        self.token = token


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    n = len(text)

    def advance_lines(start: int, end: int):
        nonlocal line, line_start
        nl = text.count("\n", start, end)
        if nl:
            line += nl
            line_start = text.rindex("\n", start, end) + 1

    while True:
        m = _SKIP.match(text, pos)
        if m:
            advance_lines(pos, m.end())
            pos = m.end()
        if pos >= n:
            break
        col = pos - line_start + 1
        m = None
        if text[pos] == "<":
            m = _IRIREF.match(text, pos)
        if m is not None:
            kind = "IRIREF"
        else:
            m = _MASTER.match(text, pos)
            if m is None:
                rest = text[pos:pos + 12].split()
                raise LexError("unexpected character", line, col, rest[0] if rest else text[pos])
            kind = m.lastgroup
        tokens.append(Token(kind, m.group(0), line, col))
        advance_lines(pos, m.end())
        pos = m.end()
    return tokens


_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
            '"': '"', "'": "'", "\\": "\\"}
_STRING_ESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.S)
_LOCAL_ESCAPE = re.compile(r"\\(.)")


def _unescape(m: re.Match) -> str:
    if m.group(1) or m.group(2):
        return chr(int(m.group(1) or m.group(2), 16))
    return _ESCAPES[m.group(3)]


def string_value(token: Token) -> str:
    """Decoded content of a string-literal token."""
    raw = token.value
    if token.kind in ("STRING_LONG_QUOTE", "STRING_LONG_SINGLE"):
        raw = raw[3:-3]
    else:
        raw = raw[1:-1]
    return _STRING_ESCAPE.sub(_unescape, raw)


def iri_value(token: Token) -> str:
    return _STRING_ESCAPE.sub(_unescape, token.value[1:-1])


def split_pname(token: Token) -> tuple[str, str]:
    prefix, _, local = token.value.partition(":")
    local = _LOCAL_ESCAPE.sub(lambda m: m.group(1), local)
    return prefix, local


LOCAL_NAME_SIMPLE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")
PREFIX_SIMPLE = re.compile(r"^(?:[A-Za-z][A-Za-z0-9_\-]*)?$")
INTEGER_RE = re.compile(r"^[+-]?[0-9]+$")
DECIMAL_RE = re.compile(r"^[+-]?[0-9]*\.[0-9]+$")
DOUBLE_RE = re.compile(TOKEN_PATTERNS[6][1] + "$")
