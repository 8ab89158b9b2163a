from .graph import Graph, isomorphic, match
from .terms import (
    RDF_LANGSTRING, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
    BlankNode, Iri, Literal, Term, Triple, term_to_text,
)
from .turtle import parse_turtle, parse_turtle_file, serialize_turtle

__all__ = [
    "Graph", "isomorphic", "match", "BlankNode", "Iri", "Literal", "Term", "Triple",
    "term_to_text", "parse_turtle", "parse_turtle_file", "serialize_turtle",
    "RDF_LANGSTRING", "RDF_TYPE", "XSD_BOOLEAN", "XSD_DECIMAL", "XSD_DOUBLE",
    "XSD_INTEGER", "XSD_STRING",
]
