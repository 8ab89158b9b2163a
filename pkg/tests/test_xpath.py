import random

import pytest

from olmap.errors import PathSyntaxError, RootConflictError, UnsupportedXPath
from olmap.xmldom import XmlDocument, parse_xml
from olmap.xpath import AttrEquals, Step, parse_container, resolve_or_create

from support import random_container_text, random_document


class TestParse:
    def test_single_step(self):
        assert parse_container("/parameters").steps == (Step("parameters"),)

    def test_predicates(self):
        path = parse_container("/robot[@id='ABC']/parameters")
        assert path.steps == (Step("robot", (AttrEquals("id", "ABC"),)), Step("parameters"))
        path = parse_container('/a[@x="1"][ @y = \'2\' ]')
        assert path.steps[0].predicates == (AttrEquals("x", "1"), AttrEquals("y", "2"))

    def test_prefixed_names_are_literal(self):
        assert parse_container("/ns:root/ns:item").steps[1].name == "ns:item"

    @pytest.mark.parametrize("text, construct", [
        ("//parameter", "descendant axis"),
        ("/a//b", "descendant axis"),
        ("/a/*", "wildcard"),
        ("/a[1]", "positional predicate"),
        ("/a/@id", "attribute selection"),
        ("/a/text()", "function text()"),
        ("/a[contains(@x,'y')]", "function call"),
        ("/child::a", "child axis"),
        ("/a/..", "parent step"),
        ("/a/.", "self step"),
        ("a/b", "relative path"),
        ("/a[@x='1' and @y='2']", "boolean operator"),
        ("/a[@x!='1']", "comparison operator other than '='"),
        ("/a[b]", "non-attribute predicate"),
        ("/a | /b", "union"),
    ])
    def test_unsupported(self, text, construct):
        with pytest.raises(UnsupportedXPath) as info:
            parse_container(text)
        assert info.value.construct == construct

    @pytest.mark.parametrize("text", ["", "/", "/a/", "/a[@x=1]", "/a[@x='1'", "/a[@x='1]",
                                      "/a[@x='1'][@x='2']", "/1a"])
    def test_syntax_errors(self, text):
        with pytest.raises(PathSyntaxError):
            parse_container(text)


class TestResolve:
    def test_creates_root(self):
        doc = XmlDocument()
        (node,) = resolve_or_create(doc, parse_container("/parameters"))
        assert doc.root is node and node.name == "parameters"

    def test_finds_existing(self):
        doc = parse_xml("<parameters><x/></parameters>")
        before = doc.element_count()
        (node,) = resolve_or_create(doc, parse_container("/parameters"))
        assert node is doc.root and doc.element_count() == before

    def test_multiple_matches(self):
        doc = parse_xml("<root><group name='g'/><other/><group name='g'/><group name='h'/></root>")
        created = []
        nodes = resolve_or_create(doc, parse_container("/root/group[@name='g']"), created)
        assert [n.attributes["name"] for n in nodes] == ["g", "g"]
        assert nodes[0] is doc.root.children[0] and nodes[1] is doc.root.children[2]
        assert created == []

    def test_descends_through_all_matches(self):
        doc = parse_xml("<r><a><b/></a><a/></r>")
        created = []
        nodes = resolve_or_create(doc, parse_container("/r/a/b"), created)
        assert len(nodes) == 2 and len(created) == 1
        assert nodes[1] is created[0]

    def test_creates_with_predicate_attributes(self):
        doc = parse_xml("<robots/>")
        created = []
        (node,) = resolve_or_create(doc, parse_container("/robots/robot[@id='ABC'][@kind='arm']/parameters"), created)
        assert [e.name for e in created] == ["robot", "parameters"]
        assert created[0].attributes == {"id": "ABC", "kind": "arm"}
        assert resolve_or_create(doc, parse_container("/robots/robot[@id='ABC']/parameters")) == [node]

    def test_root_conflict(self):
        doc = parse_xml("<config/>")
        with pytest.raises(RootConflictError):
            resolve_or_create(doc, parse_container("/parameters"))
        with pytest.raises(RootConflictError):
            resolve_or_create(doc, parse_container("/config[@v='1']"))


def test_idempotence_and_minimality():
    rng = random.Random(99)
    for _ in range(100):
        doc = random_document(rng)
        path = parse_container(random_container_text(rng, doc.root.name if doc.root else None))
        created = []
        first = resolve_or_create(doc, path, created)
        count = doc.element_count()
        assert len(created) <= len(path.steps)
        again_created = []
        second = resolve_or_create(doc, path, again_created)
        assert again_created == [] and doc.element_count() == count
        assert len(first) == len(second) and all(a is b for a, b in zip(first, second))
        assert all(path.steps[-1].matches(n) for n in first)
