from .ast import GroupPattern, SparqlQuery, TriplePattern, Var
from .evaluator import evaluate
from .parser import parse_query
from .results import ResultSet, SolutionRow, sort_rows

__all__ = ["GroupPattern", "SparqlQuery", "TriplePattern", "Var", "evaluate", "parse_query",
           "ResultSet", "SolutionRow", "sort_rows"]
