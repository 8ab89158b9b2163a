"""A small XML tree for the output document.

Parsing is done by expat; the tree keeps comments, processing instructions
and whitespace-only text so that an untouched document serialises back to
the same canonical content. Namespace prefixes are kept as part of names and
never resolved.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Union
from xml.parsers import expat

from .errors import IoError, WellFormednessError, EmptyDocumentError

_NAME_START = (r"A-Za-z_:\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF"
               r"\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF"
               r"\uFDF0-\uFFFD")
_NAME = re.compile(rf"^[{_NAME_START}][{_NAME_START}\-.0-9\u00B7\u0300-\u036F\u203F-\u2040]*$")


def is_xml_name(name: str) -> bool:
    return bool(_NAME.match(name))


@dataclass(eq=False)
class XmlText:
    text: str


@dataclass(eq=False)
class XmlComment:
    text: str


@dataclass(eq=False)
class XmlProcessingInstruction:
    target: str
    data: str


Node = Union["XmlElement", XmlText, XmlComment, XmlProcessingInstruction]


@dataclass(eq=False)
class XmlElement:
    name: str
    attributes: dict[str, str] = field(default_factory=dict)
    children: list[Node] = field(default_factory=list)

    def __post_init__(self):
        if not is_xml_name(self.name):
            raise ValueError(f"invalid XML name: {self.name!r}")
        for attr in self.attributes:
            if not is_xml_name(attr):
                raise ValueError(f"invalid attribute name: {attr!r}")

    def elements(self) -> list["XmlElement"]:
        return [c for c in self.children if isinstance(c, XmlElement)]

    def append(self, node: Node) -> Node:
        self.children.append(node)
        return node

    def text(self) -> str:
        """Concatenated text of all descendant text nodes."""
        parts = []
        for c in self.children:
            if isinstance(c, XmlText):
                parts.append(c.text)
            elif isinstance(c, XmlElement):
                parts.append(c.text())
        return "".join(parts)

    def iter(self) -> Iterator["XmlElement"]:
        yield self
        for c in self.children:
            if isinstance(c, XmlElement):
                yield from c.iter()

    def find_all(self, name: str) -> list["XmlElement"]:
        return [e for e in self.iter() if e.name == name]

    def copy(self) -> "XmlElement":
        return deep_copy(self)

    def __repr__(self) -> str:
        return f"<XmlElement {self.name} attrs={len(self.attributes)} children={len(self.children)}>"


@dataclass
class XmlDeclaration:
    version: str = "1.0"
    standalone: Optional[bool] = None


@dataclass(eq=False)
class XmlDocument:
    root: Optional[XmlElement] = None
    declaration: Optional[XmlDeclaration] = None
    prolog: list[Node] = field(default_factory=list)
    epilog: list[Node] = field(default_factory=list)

    def element_count(self) -> int:
        return sum(1 for _ in self.root.iter()) if self.root is not None else 0


def deep_copy(node: Node) -> Node:
    if isinstance(node, XmlElement):
        return XmlElement(node.name, dict(node.attributes), [deep_copy(c) for c in node.children])
    if isinstance(node, XmlText):
        return XmlText(node.text)
    if isinstance(node, XmlComment):
        return XmlComment(node.text)
    return XmlProcessingInstruction(node.target, node.data)


# -- parsing -----------------------------------------------------------------

class _Builder:
    def __init__(self):
        self.doc = XmlDocument()
        self.stack: list[XmlElement] = []
        self.parser = expat.ParserCreate()
        p = self.parser
        p.buffer_text = True
        p.ordered_attributes = True
        p.StartElementHandler = self.start
        p.EndElementHandler = self.end
        p.CharacterDataHandler = self.chars
        p.CommentHandler = self.comment
        p.ProcessingInstructionHandler = self.pi
        p.XmlDeclHandler = self.decl

    def _add(self, node: Node):
        if self.stack:
            self.stack[-1].children.append(node)
        elif self.doc.root is None:
            self.doc.prolog.append(node)
        else:
            self.doc.epilog.append(node)

    def start(self, name, attrs):
        el = XmlElement.__new__(XmlElement)
        el.name = name
        el.attributes = dict(zip(attrs[::2], attrs[1::2]))
        el.children = []
        if self.stack:
            self.stack[-1].children.append(el)
        else:
            self.doc.root = el
        self.stack.append(el)

    def end(self, name):
        self.stack.pop()

    def chars(self, data):
        if not self.stack:
            return  # whitespace outside the root element
        children = self.stack[-1].children
        if children and isinstance(children[-1], XmlText):
            children[-1].text += data
        else:
            children.append(XmlText(data))

    def comment(self, data):
        self._add(XmlComment(data))

    def pi(self, target, data):
        self._add(XmlProcessingInstruction(target, data))

    def decl(self, version, encoding, standalone):
        sa = None if standalone == -1 else bool(standalone)
        self.doc.declaration = XmlDeclaration(version or "1.0", sa)


def parse_xml(text: str | bytes) -> XmlDocument:
    """Parse a complete XML document."""
    b = _Builder()
    try:
        b.parser.Parse(text, True)
    except expat.ExpatError as e:
        raise WellFormednessError(expat.ErrorString(e.code), e.lineno, e.offset + 1) from None
    return b.doc


def parse_fragment(text: str) -> list[Node]:
    """Parse a sequence of sibling nodes (elements, comments, text).

    Errors report positions relative to ``text``.
    """
    wrapper = "__olmap_fragment__"
    b = _Builder()
    opening = f"<{wrapper}>"
    try:
        b.parser.Parse(f"{opening}{text}</{wrapper}>", True)
    except expat.ExpatError as e:
        col = e.offset + 1 - (len(opening) if e.lineno == 1 else 0)
        raise WellFormednessError(expat.ErrorString(e.code), e.lineno, max(col, 1)) from None
    return b.doc.root.children


def open_or_create(path: str | os.PathLike) -> XmlDocument:
    """Parse the document at ``path``, or return a fresh empty one if it does not exist."""
    path = Path(path)
    if not path.exists():
        return XmlDocument(declaration=XmlDeclaration())
    if path.is_dir():
        raise IoError(f"output path is a directory: {path}")
    try:
        data = path.read_bytes()
    except OSError as e:
        raise IoError(f"cannot read {path}: {e.strerror}") from None
    if not data.strip():
        return XmlDocument(declaration=XmlDeclaration())
    try:
        return parse_xml(data)
    except WellFormednessError as e:
        e.message = f"{path}: {e.message}"
        e.args = (e.message,)
        raise


# -- serialisation -------------------------------------------------------------

def _escape_text(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace("\r", "&#13;"))


def _escape_attr(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;").replace("\n", "&#10;").replace("\r", "&#13;")
            .replace("\t", "&#9;"))


def _comment(text: str) -> str:
    if "--" in text or text.endswith("-"):
        raise WellFormednessError(f"comment text cannot contain '--' or end in '-': {text!r}")
    return f"<!--{text}-->"


def _start_tag(el: XmlElement) -> str:
    attrs = "".join(f' {k}="{_escape_attr(v)}"' for k, v in el.attributes.items())
    return f"<{el.name}{attrs}"


def _write_inline(node: Node, out: list[str]):
    if isinstance(node, XmlText):
        out.append(_escape_text(node.text))
    elif isinstance(node, XmlComment):
        out.append(_comment(node.text))
    elif isinstance(node, XmlProcessingInstruction):
        out.append(f"<?{node.target} {node.data}?>" if node.data else f"<?{node.target}?>")
    else:
        out.append(_start_tag(node))
        if not node.children:
            out.append("/>")
            return
        out.append(">")
        for c in node.children:
            _write_inline(c, out)
        out.append(f"</{node.name}>")


def _element_only(el: XmlElement) -> bool:
    has_markup = False
    for c in el.children:
        if isinstance(c, XmlText):
            if c.text.strip(" \t\r\n"):
                return False
        else:
            has_markup = True
    return has_markup


def _write_pretty(node: Node, out: list[str], depth: int):
    if not isinstance(node, XmlElement) or not _element_only(node):
        _write_inline(node, out)
        return
    out.append(_start_tag(node) + ">")
    for c in node.children:
        if isinstance(c, XmlText):
            continue
        out.append("\n" + "  " * (depth + 1))
        _write_pretty(c, out, depth + 1)
    out.append("\n" + "  " * depth + f"</{node.name}>")


def serialize(doc: XmlDocument, pretty: bool = False) -> str:
    """Serialise ``doc`` as UTF-8-declared XML text.

    Pretty mode indents by two spaces, and only inside elements whose content
    is markup alone; text-bearing (mixed) content is written verbatim.
    """
    if doc.root is None:
        raise EmptyDocumentError("the document has no root element")
    parts: list[str] = []
    if doc.declaration is not None:
        sa = ""
        if doc.declaration.standalone is not None:
            sa = f' standalone="{"yes" if doc.declaration.standalone else "no"}"'
        parts.append(f'<?xml version="{doc.declaration.version}" encoding="UTF-8"{sa}?>')
    for node in doc.prolog:
        buf: list[str] = []
        _write_inline(node, buf)
        parts.append("".join(buf))
    buf = []
    if pretty:
        _write_pretty(doc.root, buf, 0)
    else:
        _write_inline(doc.root, buf)
    parts.append("".join(buf))
    for node in doc.epilog:
        buf = []
        _write_inline(node, buf)
        parts.append("".join(buf))
    return "\n".join(parts) + "\n"


def canonical(node, ignore_whitespace: bool = False):
    """Comparable form: names, attribute sets, text content and child order.

    Adjacent text is merged; with ``ignore_whitespace`` whitespace-only text
    nodes are dropped (the difference pretty printing may introduce).
    """
    if isinstance(node, XmlDocument):
        return ("#document",
                tuple(canonical(n, ignore_whitespace) for n in node.prolog),
                canonical(node.root, ignore_whitespace) if node.root is not None else None,
                tuple(canonical(n, ignore_whitespace) for n in node.epilog))
    if isinstance(node, XmlText):
        return ("#text", node.text)
    if isinstance(node, XmlComment):
        return ("#comment", node.text)
    if isinstance(node, XmlProcessingInstruction):
        return ("#pi", node.target, node.data)
    children: list = []
    for c in node.children:
        if isinstance(c, XmlText):
            if children and children[-1][0] == "#text":
                children[-1] = ("#text", children[-1][1] + c.text)
            else:
                children.append(("#text", c.text))
        else:
            children.append(canonical(c, ignore_whitespace))
    if ignore_whitespace:
        children = [c for c in children if not (c[0] == "#text" and not c[1].strip(" \t\r\n"))]
    children = [c for c in children if not (c[0] == "#text" and c[1] == "")]
    return (node.name, frozenset(node.attributes.items()), tuple(children))
