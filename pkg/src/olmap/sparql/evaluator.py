"""Evaluation of parsed SELECT queries over an in-memory :class:`Graph`."""

from __future__ import annotations

import math
import re
from decimal import Decimal, InvalidOperation

from ..rdf.graph import Graph
from ..rdf.terms import (
    RDF_LANGSTRING, XSD, XSD_BOOLEAN, XSD_STRING, BlankNode, Iri, Literal, term_key,
)
from .ast import And, Comparison, GroupPattern, Not, Or, Regex, SparqlQuery, TriplePattern, Var
from .results import ResultSet, SolutionRow, row_key

_DECIMAL_TYPES = {XSD + t for t in (
    "integer", "decimal", "int", "long", "short", "byte", "nonNegativeInteger",
    "positiveInteger", "negativeInteger", "nonPositiveInteger", "unsignedLong",
    "unsignedInt", "unsignedShort", "unsignedByte")}
_FLOAT_TYPES = {XSD + "double", XSD + "float"}


class _ExprError(Exception):
    """A SPARQL expression type error; a filter that raises one rejects the row."""


def numeric_value(term) -> Decimal | float | None:
    """Numeric value of a numeric literal, ``None`` for any other term."""
    if not isinstance(term, Literal):
        return None
    if term.datatype in _DECIMAL_TYPES:
        try:
            value = Decimal(term.lexical.strip())
        except InvalidOperation:
            raise _ExprError("bad numeric lexical form") from None
        if not value.is_finite():
            raise _ExprError("bad numeric lexical form")
        return value
    if term.datatype in _FLOAT_TYPES:
        lex = term.lexical.strip()
        if lex not in ("INF", "-INF", "+INF", "NaN") and not re.match(
                r"^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?$", lex):
            raise _ExprError("bad numeric lexical form")
        return float(lex)
    return None


# -- basic graph patterns ------------------------------------------------------

def _bound(x, row: SolutionRow):
    if isinstance(x, Var):
        return row.get(x.name)
    return x


def _estimate(tp: TriplePattern, row: SolutionRow, g: Graph) -> int:
    return g.count(_bound(tp.subject, row), _bound(tp.predicate, row), _bound(tp.object, row))


def _join(patterns: list[TriplePattern], g: Graph, row: SolutionRow):
    if not patterns:
        yield row
        return
    # most selective pattern first, given what is bound so far
    best = min(range(len(patterns)), key=lambda i: _estimate(patterns[i], row, g))
    tp = patterns[best]
    rest = patterns[:best] + patterns[best + 1:]
    s, p, o = (_bound(x, row) for x in tp)
    for triple in g._scan(s, p, o):
        extended = dict(row)
        ok = True
        for pat, value in zip(tp, triple):
            if isinstance(pat, Var):
                seen = extended.get(pat.name)
                if seen is None:
                    extended[pat.name] = value
                elif seen != value:
                    ok = False
                    break
        if ok:
            yield from _join(rest, g, extended)


def _eval_group(group: GroupPattern, g: Graph, seed: SolutionRow) -> list[SolutionRow]:
    rows = list(_join(list(group.triples), g, seed))
    for opt in group.optionals:
        joined: list[SolutionRow] = []
        for row in rows:
            extensions = _eval_group(opt, g, row)
            joined.extend(extensions if extensions else [row])
        rows = joined
    for expr in group.filters:
        rows = [r for r in rows if filter_passes(expr, r)]
    return rows


# -- expressions -----------------------------------------------------------------

def _ebv(value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, Literal):
        if value.datatype == XSD_BOOLEAN:
            if value.lexical in ("true", "1"):
                return True
            if value.lexical in ("false", "0"):
                return False
            raise _ExprError("bad boolean")
        num = numeric_value(value)
        if num is not None:
            return not (num == 0 or (isinstance(num, float) and math.isnan(num)))
        if value.datatype in (XSD_STRING, RDF_LANGSTRING):
            return value.lexical != ""
    raise _ExprError("no effective boolean value")


def _compare(op: str, a, b) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        a = Literal("true" if a else "false", XSD_BOOLEAN) if isinstance(a, bool) else a
        b = Literal("true" if b else "false", XSD_BOOLEAN) if isinstance(b, bool) else b
    na, nb = numeric_value(a), numeric_value(b)
    if na is not None and nb is not None:
        left, right = na, nb
    elif isinstance(a, Literal) and isinstance(b, Literal):
        if (na is None) != (nb is None):
            raise _ExprError("numeric compared with non-numeric")
        left, right = a.lexical, b.lexical
    else:
        if op == "=":
            return a == b
        if op == "!=":
            return a != b
        raise _ExprError("ordering comparison on non-literals")
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    return left >= right


def _eval_expr(expr, row: SolutionRow):
    if isinstance(expr, Var):
        if expr.name not in row:
            raise _ExprError(f"unbound {expr}")
        return row[expr.name]
    if isinstance(expr, (Iri, Literal, BlankNode)):
        return expr
    if isinstance(expr, Comparison):
        return _compare(expr.op, _eval_expr(expr.left, row), _eval_expr(expr.right, row))
    if isinstance(expr, Not):
        return not _ebv(_eval_expr(expr.operand, row))
    if isinstance(expr, (And, Or)):
        results = []
        for side in (expr.left, expr.right):
            try:
                results.append(_ebv(_eval_expr(side, row)))
            except _ExprError:
                results.append(None)
        if isinstance(expr, And):
            if False in results:
                return False
        elif True in results:
            return True
        if None in results:
            raise _ExprError("error operand")
        return isinstance(expr, And)
    if isinstance(expr, Regex):
        text = _eval_expr(expr.text, row)
        pattern = _eval_expr(expr.pattern, row)
        if not (isinstance(text, Literal) and text.datatype in (XSD_STRING, RDF_LANGSTRING)):
            raise _ExprError("REGEX needs a string")
        if not (isinstance(pattern, Literal) and pattern.datatype == XSD_STRING):
            raise _ExprError("REGEX pattern must be a simple string")
        try:
            return re.search(pattern.lexical, text.lexical) is not None
        except re.error:
            raise _ExprError("invalid regular expression") from None
    raise TypeError(f"not an expression: {expr!r}")


def filter_passes(expr, row: SolutionRow) -> bool:
    try:
        return _ebv(_eval_expr(expr, row))
    except _ExprError:
        return False


# -- ordering ------------------------------------------------------------------------

def _order_value(expr, row: SolutionRow):
    try:
        value = _eval_expr(expr, row)
    except _ExprError:
        return None
    if isinstance(value, bool):
        return Literal("true" if value else "false", XSD_BOOLEAN)
    return value


def _order_rank(term) -> tuple:
    if term is None:
        return (0,)
    if isinstance(term, BlankNode):
        return (1, term.label)
    if isinstance(term, Iri):
        return (2, term.value)
    try:
        num = numeric_value(term)
    except _ExprError:
        num = None
    if num is not None and not (isinstance(num, float) and math.isnan(num)):
        return (3, 0, num)
    return (3, 1, term.lexical, term.datatype, term.language or "")


def _apply_order(query: SparqlQuery, rows: list[SolutionRow]) -> list[SolutionRow]:
    for cond in reversed(query.order_by):
        keyed = [(_order_rank(_order_value(cond.expr, r)), r) for r in rows]
        keyed.sort(key=lambda x: x[0], reverse=cond.descending)
        rows = [r for _, r in keyed]
    return rows


# -- entry point ---------------------------------------------------------------------

def evaluate(query: SparqlQuery, g: Graph) -> ResultSet:
    """Evaluate ``query`` over ``g``.

    Without ORDER BY the rows are sorted by the string forms of the projected
    bindings (unbound first), so results never depend on hashing or insertion
    order. DISTINCT, OFFSET and LIMIT apply after sorting.
    """
    variables = query.projection
    rows = _eval_group(query.where, g, {})
    rows.sort(key=lambda r: row_key(variables, r))
    if query.order_by:
        rows = _apply_order(query, rows)
    projected = [{v: r[v] for v in variables if v in r} for r in rows]
    if query.distinct:
        seen = set()
        unique = []
        for r in projected:
            key = tuple(r.get(v) for v in variables)
            if key not in seen:
                seen.add(key)
                unique.append(r)
        projected = unique
    start = query.offset or 0
    end = None if query.limit is None else start + query.limit
    return ResultSet(tuple(variables), tuple(projected[start:end]))
