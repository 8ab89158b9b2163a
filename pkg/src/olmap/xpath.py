"""Container paths: a create-capable subset of XPath.

Grammar::

    path      ::= ( "/" step )+
    step      ::= Name predicate*
    predicate ::= "[" "@" Name "=" ( "'" [^']* "'" | '"' [^"]* '"' ) "]"

Several predicates on one step are a conjunction. Every expression in this
language names an element that can be created if it is missing, which is
why axes, wildcards, positions and functions are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import PathSyntaxError, RootConflictError, UnsupportedXPath
from .xmldom import XmlDocument, XmlElement, is_xml_name

_NAME_RE = re.compile(r"[^\s/\[\]@=!<>()'\"*|,]+")


@dataclass(frozen=True)
class AttrEquals:
    name: str
    value: str


@dataclass(frozen=True)
class Step:
    name: str
    predicates: tuple[AttrEquals, ...] = ()

    def matches(self, el: XmlElement) -> bool:
        return el.name == self.name and all(
            el.attributes.get(p.name) == p.value for p in self.predicates)

    def create(self) -> XmlElement:
        return XmlElement(self.name, {p.name: p.value for p in self.predicates})


@dataclass(frozen=True)
class ContainerPath:
    steps: tuple[Step, ...]

    def __str__(self) -> str:
        out = []
        for s in self.steps:
            preds = "".join(
                f"[@{p.name}=\"{p.value}\"]" if "'" in p.value else f"[@{p.name}='{p.value}']"
                for p in s.predicates)
            out.append(f"/{s.name}{preds}")
        return "".join(out)


class _PathParser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def fail(self, message: str):
        raise PathSyntaxError(f"{message} in container path {self.text!r}", 1, self.i + 1,
                              self.text[self.i:self.i + 10] or None)

    def unsupported(self, construct: str):
        raise UnsupportedXPath(construct, self.text)

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i] in " \t\r\n":
            self.i += 1

    def peek(self, n: int = 1) -> str:
        return self.text[self.i:self.i + n]

    def parse(self) -> ContainerPath:
        self.skip_ws()
        if not self.text.strip():
            self.fail("empty path")
        if self.peek() != "/":
            self.unsupported("relative path")
        steps = []
        while self.i < len(self.text):
            self.skip_ws()
            if self.i >= len(self.text):
                break
            if self.peek(2) == "//":
                self.unsupported("descendant axis")
            if self.peek() != "/":
                self.fail("expected '/'")
            self.i += 1
            self.skip_ws()
            steps.append(self.step())
        return ContainerPath(tuple(steps))

    def name(self, what: str) -> str:
        m = _NAME_RE.match(self.text, self.i)
        if not m:
            self.fail(f"expected {what}")
        name = m.group(0)
        if "::" in name:
            self.unsupported(f"{name.split('::')[0]} axis")
        if not is_xml_name(name):
            self.fail(f"invalid {what} {name!r}")
        self.i = m.end()
        return name

    def step(self) -> Step:
        ch = self.peek()
        if ch == "":
            self.fail("trailing '/'")
        if ch == "*":
            self.unsupported("wildcard")
        if ch == "@":
            self.unsupported("attribute selection")
        if ch == ".":
            self.unsupported("parent step" if self.peek(2) == ".." else "self step")
        name = self.name("element name")
        self.skip_ws()
        if self.peek() == "(":
            self.unsupported(f"function {name}()")
        predicates: list[AttrEquals] = []
        while self.peek() == "[":
            self.i += 1
            predicates.append(self.predicate())
            self.skip_ws()
        names = [p.name for p in predicates]
        if len(set(names)) != len(names):
            self.fail(f"repeated predicate attribute on step {name!r}")
        if self.i < len(self.text) and self.peek() not in "/":
            if self.peek() == "|":
                self.unsupported("union")
            self.fail("unexpected character")
        return Step(name, tuple(predicates))

    def predicate(self) -> AttrEquals:
        self.skip_ws()
        ch = self.peek()
        if ch.isdigit():
            self.unsupported("positional predicate")
        if ch != "@":
            if re.match(r"[A-Za-z_][\w.\-]*\s*\(", self.text[self.i:]):
                self.unsupported("function call")
            if ch in ("/", "."):
                self.unsupported("path predicate")
            self.unsupported("non-attribute predicate")
        self.i += 1
        attr = self.name("attribute name")
        self.skip_ws()
        if self.peek(2) == "!=" or self.peek() in ("<", ">"):
            self.unsupported("comparison operator other than '='")
        if self.peek() != "=":
            self.fail("expected '='")
        self.i += 1
        self.skip_ws()
        quote = self.peek()
        if quote not in ("'", '"'):
            self.fail("expected a quoted value")
        end = self.text.find(quote, self.i + 1)
        if end < 0:
            self.fail("unterminated string")
        value = self.text[self.i + 1:end]
        self.i = end + 1
        self.skip_ws()
        if re.match(r"(and|or)\b", self.text[self.i:]):
            self.unsupported("boolean operator")
        if self.peek() != "]":
            self.fail("expected ']'")
        self.i += 1
        return AttrEquals(attr, value)


def parse_container(text: str) -> ContainerPath:
    return _PathParser(text).parse()


def resolve_or_create(doc: XmlDocument, path: ContainerPath,
                      created: list[XmlElement] | None = None) -> list[XmlElement]:
    """Find every element addressed by ``path``, creating missing steps.

    Descent follows all matching children. Under any node where a step
    matches nothing, one new element (carrying the step's predicate
    attributes) is appended. Newly created elements are also appended to
    ``created`` when given. Returns the final frontier in document order.
    """
    created = created if created is not None else []
    first = path.steps[0]
    if doc.root is None:
        doc.root = first.create()
        created.append(doc.root)
    elif not first.matches(doc.root):
        raise RootConflictError(
            f"container {path} starts at <{first.name}> but the document root is <{doc.root.name}>"
            if doc.root.name != first.name else
            f"container {path}: root <{doc.root.name}> does not satisfy the step's predicates")
    frontier = [doc.root]
    for step in path.steps[1:]:
        nxt: list[XmlElement] = []
        for parent in frontier:
            found = [c for c in parent.children if isinstance(c, XmlElement) and step.matches(c)]
            if not found:
                el = step.create()
                parent.children.append(el)
                created.append(el)
                found = [el]
            nxt.extend(found)
        frontier = nxt
    return frontier
