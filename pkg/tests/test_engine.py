import os
import random
from pathlib import Path

import pytest

from olmap.engine import (
    ExecutionConfig, PairingMode, apply_datamap, execute, instantiate_snippet_fragment, write_atomic,
)
from olmap.errors import (
    IoError, RootConflictError, SnippetNotWellFormed, SourceNotFound, SourceParseError, UnboundVariableError,
    ValidationError,
)
from olmap.mapping import load_mappings
from olmap.rdf import Iri, Literal, parse_turtle
from olmap.sparql import ResultSet
from olmap.xmldom import XmlComment, XmlDocument, XmlElement, canonical, parse_xml

from support import EXPECTED_ROBOT, PARAMETER_SNIPPET, ROBOT_QUERY, datamap_ttl, mapping_ttl

ROBOT_XML = (
    '<?xml version="1.0" encoding="UTF-8"?>\n<parameters>'
    '<parameter><name>arm1</name><value>200</value></parameter>'
    '<parameter><name>arm2</name><value>260</value></parameter>'
    '<parameter><name>arm3</name><value>220</value></parameter>'
    '</parameters>\n'
)


def run(directory: Path, mapping: str | None = None, **kwargs):
    if mapping is not None:
        (directory / "mapping.ttl").write_text(mapping)
    kwargs.setdefault("output_path", directory / "out.xml")
    return execute(ExecutionConfig(directory / "mapping.ttl", **kwargs))


def parameters(doc):
    return [tuple(e.text() for e in p.elements()) for p in doc.root.find_all("parameter")]


def datamap(text=None, **kwargs):
    (dm,) = load_mappings(parse_turtle(text or mapping_ttl(datamap_ttl(**kwargs)), "file:///m.ttl"))
    return dm


def rows(variables, *values):
    return ResultSet(tuple(variables), tuple(dict(zip(variables, (Literal(v) for v in vs))) for vs in values))


class TestRobot:
    def test_output(self, robot_dir):
        report = run(robot_dir)
        assert (robot_dir / "out.xml").read_text() == ROBOT_XML
        assert report.success and report.document == ROBOT_XML
        (dm,) = report.datamaps
        assert (dm.rows, dm.container_nodes, dm.containers_created, dm.snippets_inserted) == (3, 1, 1, 3)

    def test_pretty(self, robot_dir):
        run(robot_dir, pretty=True)
        text = (robot_dir / "out.xml").read_text()
        assert "\n  <parameter>\n    <name>arm1</name>\n    <value>200</value>\n  </parameter>\n" in text
        assert parameters(parse_xml(text)) == EXPECTED_ROBOT

    def test_deterministic(self, robot_dir):
        run(robot_dir, output_path=robot_dir / "a.xml")
        run(robot_dir, output_path=robot_dir / "b.xml")
        assert (robot_dir / "a.xml").read_bytes() == (robot_dir / "b.xml").read_bytes()

    def test_rerun_appends(self, robot_dir):
        run(robot_dir)
        report = run(robot_dir)
        assert report.datamaps[0].containers_created == 0
        assert parameters(parse_xml((robot_dir / "out.xml").read_text())) == EXPECTED_ROBOT * 2

    def test_merge_into_existing(self, robot_dir):
        existing = ('<?xml version="1.0" encoding="UTF-8"?>\n<!-- site config -->\n<parameters version="2">'
                    '<meta><owner>lab</owner></meta><!-- keep -->'
                    '<parameter><name>base</name><value>10</value></parameter></parameters>\n')
        out = robot_dir / "out.xml"
        out.write_text(existing)
        before = parse_xml(existing)
        report = run(robot_dir)
        after = parse_xml(out.read_text())
        assert report.datamaps[0].containers_created == 0
        assert canonical(after.prolog[0]) == canonical(before.prolog[0])
        assert after.root.attributes == {"version": "2"}
        kept = after.root.children[:len(before.root.children)]
        assert [canonical(n) for n in kept] == [canonical(n) for n in before.root.children]
        assert parameters(after) == [("base", "10")] + EXPECTED_ROBOT

    def test_relative_location_resolves_against_mapping(self, tmp_path, robot_dir):
        elsewhere = tmp_path / "run"
        elsewhere.mkdir()
        cwd = os.getcwd()
        os.chdir(elsewhere)
        try:
            execute(ExecutionConfig(Path("..") / "mapping.ttl", Path("out.xml")))
        finally:
            os.chdir(cwd)
        assert (elsewhere / "out.xml").read_text() == ROBOT_XML


class TestEdgeCases:
    def test_zero_rows(self, robot_dir):
        out = robot_dir / "out.xml"
        out.write_text("<parameters><x/></parameters>")
        query = ROBOT_QUERY.replace("RobotConfiguration_ABC", "RobotConfiguration_None")
        report = run(robot_dir, mapping_ttl(datamap_ttl(query=query)))
        assert out.read_text() == '<parameters><x/></parameters>\n'
        assert report.datamaps[0].containers_created == 0
        assert any("no rows" in w for w in report.warnings)

    def test_zero_rows_fresh_output(self, robot_dir):
        query = ROBOT_QUERY.replace("RobotConfiguration_ABC", "RobotConfiguration_None")
        report = run(robot_dir, mapping_ttl(datamap_ttl(query=query)))
        assert report.success and not (robot_dir / "out.xml").exists()

    def test_two_datamaps_in_iri_order(self, robot_dir):
        names = "PREFIX ex: <http://example.org/robot#> SELECT ?n WHERE { ?p ex:hasName ?n }"
        mapping = mapping_ttl(
            datamap_ttl("B", query=names, snippet="<b>${n}</b>"),
            datamap_ttl("A", query=names, snippet="<a>${n}</a>"),
        )
        report = run(robot_dir, mapping)
        root = parse_xml((robot_dir / "out.xml").read_text()).root
        assert [e.name for e in root.elements()] == ["a"] * 3 + ["b"] * 3
        assert [d.datamap.rsplit("#")[1] for d in report.datamaps] == ["A", "B"]

    def test_no_partial_write_on_failure(self, robot_dir):
        out = robot_dir / "out.xml"
        out.write_text("<parameters/>")
        before = out.read_bytes()
        mapping = mapping_ttl(datamap_ttl("A"), datamap_ttl("B", location="missing.ttl"))
        with pytest.raises(SourceNotFound) as info:
            run(robot_dir, mapping)
        assert info.value.datamap.endswith("#B")
        assert info.value.exit_code == 3
        assert out.read_bytes() == before
        assert sorted(p.name for p in robot_dir.iterdir()) == ["mapping.ttl", "out.xml", "parameters.ttl"]

    def test_missing_mapping(self, tmp_path):
        with pytest.raises(SourceNotFound):
            execute(ExecutionConfig(tmp_path / "nope.ttl", tmp_path / "out.xml"))

    def test_validation_error(self, robot_dir):
        with pytest.raises(ValidationError):
            run(robot_dir, mapping_ttl(datamap_ttl(snippet=None)))

    def test_bad_source_turtle(self, robot_dir):
        (robot_dir / "parameters.ttl").write_text("@prefix ex: <http://e/> . ex:a ex:b (1 2) .")
        with pytest.raises(SourceParseError):
            run(robot_dir)

    def test_unwellformed_snippet_names_row(self, robot_dir):
        with pytest.raises(SnippetNotWellFormed) as info:
            run(robot_dir, mapping_ttl(datamap_ttl(snippet="<p>${parameterName}</q>")))
        assert "arm1" in str(info.value)
        assert info.value.exit_code == 4

    def test_root_conflict(self, robot_dir):
        (robot_dir / "out.xml").write_text("<config/>")
        with pytest.raises(RootConflictError):
            run(robot_dir)

    def test_lenient_unbound(self, robot_dir):
        snippet = "<p>${parameterName}${nope}</p>"
        with pytest.raises(UnboundVariableError):
            run(robot_dir, mapping_ttl(datamap_ttl(snippet=snippet)))
        report = run(robot_dir, strict=False)
        assert any("nope" in w for w in report.warnings)
        assert [p.text() for p in parse_xml((robot_dir / "out.xml").read_text()).root.elements()] == \
            ["arm1", "arm2", "arm3"]

    def test_dry_run_writes_nothing(self, robot_dir):
        report = run(robot_dir, output_path=None, dry_run=True)
        assert report.document == ROBOT_XML
        assert not (robot_dir / "out.xml").exists()

    def test_config_requires_output(self, tmp_path):
        with pytest.raises(ValueError):
            ExecutionConfig(tmp_path / "m.ttl")


class TestApply:
    def test_variable_container_pairing(self):
        dm = datamap(container="/root/group[@name='${g}']", snippet="<item>${v}</item>")
        results = rows(("g", "v"), ("x", "1"), ("y", "2"))
        counts = {}
        for mode in PairingMode:
            doc = XmlDocument()
            report = apply_datamap(doc, dm, results, mode)
            counts[mode] = report.snippets_inserted
            assert report.containers_created == 3
            assert report.container_nodes == 2
        assert counts == {PairingMode.CARTESIAN: 4, PairingMode.ROW_PAIRED: 2}

    def test_row_paired_places_rows(self):
        dm = datamap(container="/root/group[@name='${g}']", snippet="<item>${v}</item>")
        doc = XmlDocument()
        apply_datamap(doc, dm, rows(("g", "v"), ("x", "1"), ("y", "2"), ("x", "3")), PairingMode.ROW_PAIRED)
        groups = {g.attributes["name"]: [i.text() for i in g.elements()] for g in doc.root.elements()}
        assert groups == {"x": ["1", "3"], "y": ["2"]}

    def test_constant_container_modes_agree(self):
        dm = datamap(container="/root/items", snippet="<item>${v}</item>")
        results = rows(("v",), ("a",), ("b",), ("c",))
        docs = []
        for mode in PairingMode:
            doc = XmlDocument()
            apply_datamap(doc, dm, results, mode)
            docs.append(canonical(doc.root))
        assert docs[0] == docs[1]

    def test_existing_group_matches(self):
        dm = datamap(container="/root/group[@kind='k']", snippet="<item>${v}</item>")
        doc = parse_xml("<root><group kind='k'/><group kind='j'/><group kind='k'/></root>")
        report = apply_datamap(doc, dm, rows(("v",), ("1",)))
        assert report.snippets_inserted == 2 and report.containers_created == 0
        assert [len(g.children) for g in doc.root.elements()] == [1, 0, 1]

    def test_multi_element_snippet(self):
        dm = datamap(snippet="<!-- row --><a>${parameterName}</a><b/>")
        doc = XmlDocument()
        report = apply_datamap(doc, dm, ResultSet(("parameterName",), ({"parameterName": Literal("v")},)))
        assert report.snippets_inserted == 2
        assert isinstance(doc.root.children[0], XmlComment)

    def test_escaped_values(self):
        dm = datamap(snippet="<v a='${parameterName}'>${parameterName}</v>")
        value = "x < y & \"q\" 'z'\nnext"
        doc = XmlDocument()
        apply_datamap(doc, dm, ResultSet(("parameterName",), ({"parameterName": Literal(value)},)))
        again = parse_xml(parse_xml_text(doc))
        (v,) = again.root.elements()
        assert v.text() == value and v.attributes["a"] == value

    def test_iri_binding_in_container(self):
        dm = datamap(container="/root/r[@ref='${parameterName}']", snippet="<x/>")
        doc = XmlDocument()
        apply_datamap(doc, dm, ResultSet(("parameterName",), ({"parameterName": Iri("http://e/a?b=1")},)))
        assert doc.root.children[0].attributes["ref"] == "http://e/a?b=1"


def parse_xml_text(doc):
    from olmap.xmldom import serialize
    return serialize(doc)


class TestFragment:
    def test_examples(self):
        (el,) = instantiate_snippet_fragment("<a>1</a>")
        assert isinstance(el, XmlElement) and el.text() == "1"
        assert len(instantiate_snippet_fragment("<a/>\n<b/>")) == 2

    @pytest.mark.parametrize("text", ["<a>", "text", "<a/>tail", "", "<!-- only -->", "<a></b>"])
    def test_rejects(self, text):
        with pytest.raises(SnippetNotWellFormed):
            instantiate_snippet_fragment(text)


class TestWriteAtomic:
    def test_replaces(self, tmp_path):
        path = tmp_path / "o.xml"
        path.write_text("old")
        write_atomic(path, "new")
        assert path.read_text() == "new"
        assert [p.name for p in tmp_path.iterdir()] == ["o.xml"]

    def test_directory_target(self, tmp_path):
        with pytest.raises(IoError):
            write_atomic(tmp_path, "x")

    def test_missing_parent(self, tmp_path):
        with pytest.raises(IoError):
            write_atomic(tmp_path / "no" / "o.xml", "x")


def test_endpoint_source_matches_file_source(robot_dir, stub_endpoint):
    run(robot_dir, output_path=robot_dir / "file.xml")
    mapping = mapping_ttl(datamap_ttl(kind="Endpoint", location=stub_endpoint.url))
    run(robot_dir, mapping, output_path=robot_dir / "endpoint.xml")
    assert (robot_dir / "file.xml").read_bytes() == (robot_dir / "endpoint.xml").read_bytes()
    assert len(stub_endpoint.requests) == 1


def test_source_cached_per_run(robot_dir):
    mapping = mapping_ttl(datamap_ttl("A"), datamap_ttl("B"))
    report = run(robot_dir, mapping)
    assert [d.snippets_inserted for d in report.datamaps] == [3, 3]


def test_random_values_survive_pipeline(robot_dir):
    rng = random.Random(8)
    alphabet = "ab<>&\"' \n\r\t$"
    for _ in range(20):
        value = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        literal = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")
        (robot_dir / "parameters.ttl").write_text(
            f'<http://e/a> <http://e/name> "{literal}" .\n')
        mapping = mapping_ttl(datamap_ttl(query="SELECT ?parameterName WHERE { ?s <http://e/name> ?parameterName }",
                                          snippet="<p v='${parameterName}'>${parameterName}</p>"))
        run(robot_dir, mapping, output_path=robot_dir / "v.xml")
        (p,) = parse_xml((robot_dir / "v.xml").read_text()).root.elements()
        assert p.text() == value and p.attributes["v"] == value
        (robot_dir / "v.xml").unlink()
