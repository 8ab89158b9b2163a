"""Fixtures data, random generators and independent oracles for the tests."""

from __future__ import annotations

import itertools
import random
from collections import Counter

from olmap.rdf import BlankNode, Graph, Iri, Literal, Triple, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER
from olmap.sparql.ast import Comparison, Not, Var
from olmap.xmldom import XmlComment, XmlDocument, XmlElement, XmlText

EX = "http://example.org/robot#"
VOCAB = "https://w3id.org/olmap/vocab#"

ROBOT_TTL = """\
@prefix ex: <http://example.org/robot#> .

ex:RobotConfiguration_ABC ex:hasParameter ex:Parameter1, ex:Parameter2, ex:Parameter3 .
ex:Parameter1 ex:hasName "arm1" ; ex:hasValue 200 .
ex:Parameter2 ex:hasName "arm2" ; ex:hasValue 260 .
ex:Parameter3 ex:hasName "arm3" ; ex:hasValue 220 .
"""

ROBOT_QUERY = """PREFIX ex: <http://example.org/robot#>
SELECT ?parameterName ?parameterValue WHERE {
  ex:RobotConfiguration_ABC ex:hasParameter ?p .
  ?p ex:hasName ?parameterName .
  ?p ex:hasValue ?parameterValue
}"""

PARAMETER_SNIPPET = "<parameter><name>${parameterName}</name><value>${parameterValue}</value></parameter>"

EXPECTED_ROBOT = [("arm1", "200"), ("arm2", "260"), ("arm3", "220")]


def _ttl_string(s: str) -> str:
    return '"""' + s.replace("\\", "\\\\").replace('"', '\\"') + '"""'


def datamap_ttl(name: str = "ParameterMapping", location: str = "parameters.ttl",
                kind: str = "File", query: str = ROBOT_QUERY, container: str | None = "/parameters",
                snippet: str | None = PARAMETER_SNIPPET, extra: str = "") -> str:
    parts = [
        f"<#{name}> a ol:DataMap ;",
        "  ol:ontologicalSource [",
        f"    ol:location {_ttl_string(location)} ;",
        f"    ol:sourceType ol:{kind} ;",
        "    ol:queryLanguage ol:SPARQL ;",
        f"    ol:query {_ttl_string(query)}",
        "  ]",
    ]
    if container is not None:
        parts[-1] += " ;"
        parts.append(f"  ol:container {_ttl_string(container)}")
    if snippet is not None:
        parts[-1] += " ;"
        parts.append(f"  ol:snippet {_ttl_string(snippet)}")
    if extra:
        parts[-1] += " ;"
        parts.append(extra)
    return "\n".join(parts) + " .\n"


def mapping_ttl(*datamaps: str) -> str:
    return f"@prefix ol: <{VOCAB}> .\n\n" + "\n".join(datamaps)


# -- random RDF ----------------------------------------------------------------

SMALL_SUBJECTS = [Iri(EX + f"s{i}") for i in range(4)]
SMALL_PREDICATES = [Iri(EX + f"p{i}") for i in range(3)]
SMALL_OBJECTS = SMALL_SUBJECTS + [
    Literal("1", XSD_INTEGER), Literal("3", XSD_INTEGER), Literal("10", XSD_INTEGER),
    Literal("a"), Literal("b"), Literal("10"),
]


def random_small_graph(rng: random.Random, max_triples: int = 30) -> Graph:
    g = Graph()
    for _ in range(rng.randint(0, max_triples)):
        g.add(Triple(rng.choice(SMALL_SUBJECTS), rng.choice(SMALL_PREDICATES),
                     rng.choice(SMALL_OBJECTS)))
    return g


def _random_iri(rng: random.Random) -> Iri:
    local = "".join(rng.choice("abcXYZ019_-.%~") for _ in range(rng.randint(0, 6)))
    base = rng.choice(["http://example.org/", "http://example.org/ns#", "urn:x:", "https://a.b/c/"])
    return Iri(base + local.replace("%", "%41"))


_STRING_ALPHABET = 'abc XYZ"\'\\\n\r\t<>&é€😀#@^.;,'


def random_literal(rng: random.Random) -> Literal:
    choice = rng.randrange(7)
    text = "".join(rng.choice(_STRING_ALPHABET) for _ in range(rng.randint(0, 8)))
    if choice == 0:
        return Literal(text)
    if choice == 1:
        return Literal(text, language=rng.choice(["en", "de-CH", "x-abc"]))
    if choice == 2:
        return Literal(str(rng.randint(-1000, 1000)), XSD_INTEGER)
    if choice == 3:
        return Literal(rng.choice(["1.5", "-0.25", ".5", "abc", "+3.0"]), XSD_DECIMAL)
    if choice == 4:
        return Literal(rng.choice(["1e3", "-2.5E-2", "INF", "1.0e0"]), XSD_DOUBLE)
    if choice == 5:
        return Literal(rng.choice(["true", "false", "1", "TRUE"]), XSD_BOOLEAN)
    return Literal(text, rng.choice([XSD_INTEGER, "http://example.org/dt#custom"]))


def random_graph(rng: random.Random, max_triples: int = 30, blank_nodes: bool = False) -> Graph:
    g = Graph()
    bnodes = [BlankNode(f"n{i}") for i in range(4)]
    for _ in range(rng.randint(0, max_triples)):
        s = rng.choice(bnodes) if blank_nodes and rng.random() < 0.4 else _random_iri(rng)
        p = _random_iri(rng)
        r = rng.random()
        if blank_nodes and r < 0.2:
            o = rng.choice(bnodes)
        elif r < 0.5:
            o = _random_iri(rng)
        else:
            o = random_literal(rng)
        g.add(Triple(s, p, o))
    return g


PREFIXES = {"ex": "http://example.org/", "ns": "http://example.org/ns#",
            "xsd": "http://www.w3.org/2001/XMLSchema#"}


# -- brute-force BGP oracle -----------------------------------------------------------

QUERY_VARS = [Var("a"), Var("b"), Var("c")]


def random_bgp(rng: random.Random):
    patterns = []
    for _ in range(rng.randint(1, 3)):
        s = rng.choice(QUERY_VARS) if rng.random() < 0.7 else rng.choice(SMALL_SUBJECTS)
        p = rng.choice(QUERY_VARS) if rng.random() < 0.3 else rng.choice(SMALL_PREDICATES)
        o = rng.choice(QUERY_VARS) if rng.random() < 0.7 else rng.choice(SMALL_OBJECTS)
        patterns.append((s, p, o))
    return patterns


def random_filter(rng: random.Random, variables: list[Var]):
    if not variables:
        return None
    v = rng.choice(variables)
    op = rng.choice(["=", "!=", "<", "<=", ">", ">="])
    r = rng.random()
    if r < 0.4:
        other = rng.choice([Literal("3", XSD_INTEGER), Literal("1", XSD_INTEGER), Literal("b")])
    elif r < 0.7:
        other = rng.choice(variables)
    else:
        other = rng.choice(SMALL_SUBJECTS)
    expr = Comparison(op, v, other)
    return Not(expr) if rng.random() < 0.2 else expr


def pattern_text(x) -> str:
    return f"?{x.name}" if isinstance(x, Var) else x.n3()


def expr_text(expr) -> str:
    if isinstance(expr, Not):
        return f"!({expr_text(expr.operand)})"
    if isinstance(expr, Comparison):
        return f"{pattern_text(expr.left)} {expr.op} {pattern_text(expr.right)}"
    return pattern_text(expr)


def query_text(patterns, flt) -> str:
    body = " . ".join(" ".join(pattern_text(x) for x in tp) for tp in patterns)
    if flt is not None:
        body += f" FILTER({expr_text(flt)})"
    return f"SELECT * WHERE {{ {body} }}"


def _oracle_compare(op, a, b):
    """True / False, or None for a type error."""
    def num(t):
        if isinstance(t, Literal) and t.datatype == XSD_INTEGER:
            return int(t.lexical)
        return None

    if isinstance(a, Literal) and isinstance(b, Literal):
        na, nb = num(a), num(b)
        if (na is None) != (nb is None):
            return None
        x, y = (na, nb) if na is not None else (a.lexical, b.lexical)
    elif op in ("=", "!="):
        return (a == b) if op == "=" else (a != b)
    else:
        return None
    return {"=": x == y, "!=": x != y, "<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op]


def _oracle_filter(expr, binding) -> bool | None:
    if isinstance(expr, Not):
        inner = _oracle_filter(expr.operand, binding)
        return None if inner is None else not inner

    def val(x):
        return binding.get(x.name) if isinstance(x, Var) else x

    a, b = val(expr.left), val(expr.right)
    if a is None or b is None:
        return None
    return _oracle_compare(expr.op, a, b)


def brute_force(graph: Graph, patterns, flt) -> Counter:
    """Enumerate every assignment of graph terms to the query variables."""
    variables = []
    for tp in patterns:
        for x in tp:
            if isinstance(x, Var) and x.name not in variables:
                variables.append(x.name)
    triples = set(tuple(t) for t in graph)
    domain = sorted(graph.terms(), key=lambda t: t.n3())
    out: Counter = Counter()
    for values in itertools.product(domain, repeat=len(variables)):
        binding = dict(zip(variables, values))
        ok = all(tuple(binding[x.name] if isinstance(x, Var) else x for x in tp) in triples
                 for tp in patterns)
        if ok and (flt is None or _oracle_filter(flt, binding) is True):
            out[frozenset(binding.items())] += 1
    return out


def as_multiset(rows) -> Counter:
    return Counter(frozenset(r.items()) for r in rows)


# -- random XML ---------------------------------------------------------------------

NAMES = ["a", "b", "c"]


def random_element(rng: random.Random, depth: int = 0) -> XmlElement:
    el = XmlElement(rng.choice(NAMES))
    for attr in rng.sample(["id", "name", "k"], rng.randint(0, 2)):
        el.attributes[attr] = rng.choice(["1", "2", "x y", "<&>\"'"])
    if depth < 3:
        for _ in range(rng.randint(0, 3)):
            r = rng.random()
            if r < 0.6:
                el.children.append(random_element(rng, depth + 1))
            elif r < 0.85:
                el.children.append(XmlText(rng.choice(["t", " ", "\n  ", "a&b<c>", "200"])))
            else:
                el.children.append(XmlComment(rng.choice([" note ", "x"])))
    return el


def random_document(rng: random.Random) -> XmlDocument:
    if rng.random() < 0.15:
        return XmlDocument()
    return XmlDocument(root=random_element(rng))


def random_container_text(rng: random.Random, root_name: str | None) -> str:
    steps = [root_name or rng.choice(NAMES)]
    steps += [rng.choice(NAMES) for _ in range(rng.randint(0, 3))]
    out = []
    for i, name in enumerate(steps):
        preds = ""
        if i == 0 and root_name is not None:
            out.append(f"/{name}")  # an existing root cannot be replaced
            continue
        for attr in rng.sample(["id", "name"], rng.choice([0, 0, 1, 2])):
            preds += f"[@{attr}='{rng.choice(['1', '2', 'x y'])}']"
        out.append(f"/{name}{preds}")
    return "".join(out)


# -- acceptance reporting ----------------------------------------------------------

# (number, title, passed, detail) for every acceptance criterion that ran
ACCEPTANCE_RESULTS: list[tuple[int, str, bool, str]] = []
