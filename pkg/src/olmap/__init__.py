"""Declarative RDF to XML mapping.

A mapping document (Turtle) lists ``ol:DataMap`` definitions. Each one runs
a SPARQL SELECT against a Turtle file or a SPARQL endpoint, instantiates a
container path and an XML snippet per result row, and appends the snippets
into the container elements of the output document, creating whatever part
of the path is missing.
"""

__version__ = "0.1.0"

from .engine import ExecutionConfig, ExecutionReport, PairingMode, apply_datamap, execute  # noqa: E402
from .mapping import DataMap, MappingVocabulary, load_mappings  # noqa: E402

__all__ = ["ExecutionConfig", "ExecutionReport", "PairingMode", "apply_datamap", "execute",
           "DataMap", "MappingVocabulary", "load_mappings", "__version__"]
