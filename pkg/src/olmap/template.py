"""``${name}`` placeholders in container paths and snippets.

``$$`` stands for a literal dollar sign; a ``$`` not followed by ``{`` or
``$`` is kept as is. Only substituted values are ever escaped: the template
text itself is markup written by the mapping author.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import QuoteConflictError, TemplateSyntaxError, UnboundVariableError
from .rdf.terms import Term, term_to_text

_VARNAME = re.compile(
    r"^[A-Za-z0-9_\u00B7\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u037D\u037F-\u1FFF"
    r"\u200C-\u200D\u203F-\u2040\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF"
    r"\uF900-\uFDCF\uFDF0-\uFFFD]+$")


@dataclass(frozen=True)
class LiteralText:
    text: str


@dataclass(frozen=True)
class VariableSlot:
    name: str


Segment = Union[LiteralText, VariableSlot]


class EscapeMode(enum.Enum):
    XML = "xml"
    PATH_VALUE = "path-value"


@dataclass(frozen=True)
class Template:
    segments: tuple[Segment, ...]
    source: str

    def __str__(self) -> str:
        return self.source

    def render(self) -> str:
        """Canonical source text: literal ``$`` doubled, slots as ``${name}``."""
        return "".join(s.text.replace("$", "$$") if isinstance(s, LiteralText) else f"${{{s.name}}}"
                       for s in self.segments)


def _position(text: str, index: int) -> tuple[int, int]:
    line = text.count("\n", 0, index) + 1
    return line, index - (text.rfind("\n", 0, index) + 1) + 1


def parse_template(text: str) -> Template:
    segments: list[Segment] = []
    buf: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "$" and i + 1 < n and text[i + 1] == "$":
            buf.append("$")
            i += 2
        elif ch == "$" and i + 1 < n and text[i + 1] == "{":
            end = text.find("}", i + 2)
            if end < 0:
                line, col = _position(text, i)
                raise TemplateSyntaxError("unterminated '${'", line, col, text[i:i + 20])
            name = text[i + 2:end]
            if not _VARNAME.match(name):
                line, col = _position(text, i)
                raise TemplateSyntaxError(f"invalid variable name {name!r}", line, col,
                                          text[i:end + 1])
            if buf:
                segments.append(LiteralText("".join(buf)))
                buf = []
            segments.append(VariableSlot(name))
            i = end + 1
        else:
            buf.append(ch)
            i += 1
    if buf:
        segments.append(LiteralText("".join(buf)))
    return Template(tuple(segments), text)


def variables_of(t: Template) -> set[str]:
    return {s.name for s in t.segments if isinstance(s, VariableSlot)}


_XML_ESCAPES = {"&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;", "'": "&apos;",
                # character references survive attribute-value and line-end normalisation
                "\n": "&#10;", "\r": "&#13;", "\t": "&#9;"}


def xml_escape(value: str) -> str:
    return "".join(_XML_ESCAPES.get(ch, ch) for ch in value)


def instantiate(t: Template, row: Mapping[str, Term], mode: EscapeMode = EscapeMode.XML,
                strict: bool = True, warnings: list[str] | None = None) -> str:
    """Substitute the bindings of ``row`` into ``t``.

    In strict mode an unbound slot raises :class:`UnboundVariableError`; in
    lenient mode it becomes the empty string and a warning is appended to
    ``warnings``. In ``PATH_VALUE`` mode a value may not contain the quote
    character delimiting the predicate value it sits in.
    """
    out: list[str] = []
    quote: str | None = None
    for seg in t.segments:
        if isinstance(seg, LiteralText):
            out.append(seg.text)
            if mode is EscapeMode.PATH_VALUE:
                for ch in seg.text:
                    if quote is None and ch in "'\"":
                        quote = ch
                    elif ch == quote:
                        quote = None
            continue
        term = row.get(seg.name)
        if term is None:
            if strict:
                raise UnboundVariableError(seg.name)
            if warnings is not None:
                warnings.append(f"variable ?{seg.name} unbound; substituted empty string")
            value = ""
        else:
            value = term_to_text(term)
        if mode is EscapeMode.XML:
            out.append(xml_escape(value))
        else:
            clash = [q for q in "'\"" if q in value and (quote is None or q == quote)]
            if clash:
                where = f"a {quote}-quoted predicate value" if quote else "a path outside quotes"
                raise QuoteConflictError(
                    f"value {value!r} of ?{seg.name} contains {clash[0]} and cannot be placed in {where}")
            out.append(value)
    return "".join(out)
