"""Recursive-descent parser for the SELECT subset.

Supported: PREFIX/BASE, SELECT [DISTINCT|REDUCED] (vars | *), basic graph
patterns, OPTIONAL, FILTER (comparisons, && || !, REGEX without flags),
ORDER BY, LIMIT, OFFSET. Anything else recognisable raises
:class:`UnsupportedFeature` naming the construct.
"""

from __future__ import annotations

import itertools

from ..errors import SparqlSyntaxError, UnsupportedFeature
from ..rdf.syntax import STRING_KINDS, LexError, Token, iri_value, split_pname, string_value, tokenize
from ..rdf.terms import (
    RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING,
    Iri, Literal, is_absolute_iri, resolve_iri,
)
from .ast import (
    And, Comparison, GroupPattern, Not, Or, OrderCondition, Regex, SparqlQuery,
    TriplePattern, Var,
)

_NUMERIC = {"INTEGER": XSD_INTEGER, "DECIMAL": XSD_DECIMAL, "DOUBLE": XSD_DOUBLE}

_UNSUPPORTED_FORMS = {"CONSTRUCT", "ASK", "DESCRIBE", "INSERT", "DELETE", "LOAD", "CLEAR",
                      "DROP", "CREATE", "ADD", "MOVE", "COPY", "WITH"}
_UNSUPPORTED_IN_GROUP = {"UNION", "MINUS", "GRAPH", "SERVICE", "BIND", "VALUES", "SELECT"}
_UNSUPPORTED_MODIFIERS = {"GROUP": "GROUP BY", "HAVING": "HAVING", "VALUES": "VALUES",
                          "FROM": "FROM", "NAMED": "FROM NAMED"}
_AGGREGATES = {"COUNT", "SUM", "MIN", "MAX", "AVG", "SAMPLE", "GROUP_CONCAT"}
_COMPARISON_OPS = {"=", "!=", "<", "<=", ">", ">="}
_PATH_PUNCT = {"/", "|", "^", "*", "+", "?", "!"}


class _QueryParser:
    def __init__(self, text: str):
        try:
            self.tokens = tokenize(text)
        except LexError as e:
            raise SparqlSyntaxError(str(e), e.line, e.column, e.token) from None
        self.pos = 0
        self.prefixes: dict[str, str] = {}
        self.base: str | None = None
        self._hidden = itertools.count()

    # -- helpers -------------------------------------------------------------
    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise SparqlSyntaxError("unexpected end of query",
                                    last.line if last else 1, last.column if last else 1)
        self.pos += 1
        return tok

    def _after_group(self, start: int) -> Token | None:
        """The token following the braces opened at ``start``."""
        depth = 0
        for i in range(start, len(self.tokens)):
            tok = self.tokens[i]
            if tok.kind == "PUNCT" and tok.value == "{":
                depth += 1
            elif tok.kind == "PUNCT" and tok.value == "}":
                depth -= 1
                if depth == 0:
                    return self.peek(i + 1 - self.pos)
        return None

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        if tok is None:
            self.next()
        raise SparqlSyntaxError(message, tok.line, tok.column, tok.value)

    def is_kw(self, *words: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == "NAME" and tok.value.upper() in words

    def is_punct(self, value: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == "PUNCT" and tok.value == value

    def expect_punct(self, value: str) -> Token:
        tok = self.next()
        if tok.kind != "PUNCT" or tok.value != value:
            self.error(f"expected {value!r}", tok)
        return tok

    def expect_kw(self, word: str) -> Token:
        tok = self.next()
        if tok.kind != "NAME" or tok.value.upper() != word:
            self.error(f"expected {word}", tok)
        return tok

    # -- query ---------------------------------------------------------------
    def parse(self) -> SparqlQuery:
        self.prologue()
        tok = self.peek()
        if tok is not None and tok.kind == "NAME" and tok.value.upper() in _UNSUPPORTED_FORMS:
            raise UnsupportedFeature(tok.value.upper())
        self.expect_kw("SELECT")
        distinct = False
        if self.is_kw("DISTINCT", "REDUCED"):
            distinct = self.next().value.upper() == "DISTINCT"
        variables: list[str] | None = []
        if self.is_punct("*"):
            self.next()
            variables = None
        else:
            while True:
                tok = self.peek()
                if tok is not None and tok.kind == "VAR":
                    self.next()
                    variables.append(tok.value[1:])
                elif self.is_punct("("):
                    if self.is_kw(*_AGGREGATES, offset=1):
                        raise UnsupportedFeature("aggregates")
                    raise UnsupportedFeature("projection expressions")
                else:
                    break
            if not variables:
                self.error("expected projected variables or '*'")
        for kw, feature in _UNSUPPORTED_MODIFIERS.items():
            if self.is_kw(kw):
                raise UnsupportedFeature(feature)
        if self.is_kw("WHERE"):
            self.next()
        where = self.group()
        order_by, limit, offset = self.solution_modifiers()
        if self.peek() is not None:
            if self.is_kw("VALUES"):
                raise UnsupportedFeature("VALUES")
            self.error("unexpected trailing input")
        in_scope = set(where.variables())
        unbound = tuple(v for v in (variables or ()) if v not in in_scope)
        return SparqlQuery(
            where=where,
            variables=tuple(dict.fromkeys(variables)) if variables is not None else None,
            distinct=distinct, order_by=order_by, limit=limit, offset=offset,
            prefixes=dict(self.prefixes), unbound_projection=unbound,
        )

    def prologue(self):
        while self.is_kw("PREFIX", "BASE"):
            kw = self.next().value.upper()
            if kw == "PREFIX":
                ns = self.next()
                if ns.kind != "PNAME_NS":
                    self.error("expected a prefix name ending in ':'", ns)
                iri = self.next()
                if iri.kind != "IRIREF":
                    self.error("expected an IRI", iri)
                self.prefixes[ns.value[:-1]] = self.resolve(iri).value
            else:
                iri = self.next()
                if iri.kind != "IRIREF":
                    self.error("expected an IRI", iri)
                self.base = self.resolve(iri).value

    def resolve(self, tok: Token) -> Iri:
        value = iri_value(tok)
        if not is_absolute_iri(value):
            if self.base is None:
                self.error("relative IRI with no BASE", tok)
            value = resolve_iri(self.base, value)
        try:
            return Iri(value)
        except ValueError:
            self.error("invalid IRI", tok)

    def solution_modifiers(self):
        order_by: list[OrderCondition] = []
        limit = offset = None
        if self.is_kw("GROUP"):
            raise UnsupportedFeature("GROUP BY")
        if self.is_kw("HAVING"):
            raise UnsupportedFeature("HAVING")
        if self.is_kw("ORDER"):
            self.next()
            self.expect_kw("BY")
            while True:
                if self.is_kw("ASC", "DESC"):
                    desc = self.next().value.upper() == "DESC"
                    self.expect_punct("(")
                    expr = self.expression()
                    self.expect_punct(")")
                    order_by.append(OrderCondition(expr, desc))
                elif self.peek() is not None and self.peek().kind == "VAR":
                    order_by.append(OrderCondition(Var(self.next().value[1:])))
                elif self.is_punct("("):
                    self.next()
                    expr = self.expression()
                    self.expect_punct(")")
                    order_by.append(OrderCondition(expr))
                else:
                    break
            if not order_by:
                self.error("expected an ORDER BY condition")
        while self.is_kw("LIMIT", "OFFSET"):
            kw = self.next().value.upper()
            tok = self.next()
            if tok.kind != "INTEGER" or tok.value.startswith(("+", "-")):
                self.error(f"{kw} needs a non-negative integer", tok)
            if kw == "LIMIT":
                if limit is not None:
                    self.error("duplicate LIMIT", tok)
                limit = int(tok.value)
            else:
                if offset is not None:
                    self.error("duplicate OFFSET", tok)
                offset = int(tok.value)
        return tuple(order_by), limit, offset

    # -- graph patterns ------------------------------------------------------
    def group(self) -> GroupPattern:
        self.expect_punct("{")
        triples: list[TriplePattern] = []
        optionals: list[GroupPattern] = []
        filters: list = []
        while True:
            tok = self.peek()
            if tok is None:
                self.next()
            if tok.kind == "PUNCT" and tok.value == "}":
                self.next()
                break
            if tok.kind == "PUNCT" and tok.value == ".":
                self.next()
                continue
            if tok.kind == "NAME":
                word = tok.value.upper()
                if word == "OPTIONAL":
                    self.next()
                    optionals.append(self.group())
                    continue
                if word == "FILTER":
                    self.next()
                    filters.append(self.constraint())
                    continue
                if word in _UNSUPPORTED_IN_GROUP:
                    raise UnsupportedFeature("subqueries" if word == "SELECT" else word)
            if tok.kind == "PUNCT" and tok.value == "{":
                if self.is_kw("SELECT", offset=1):
                    raise UnsupportedFeature("subqueries")
                after = self._after_group(self.pos)
                if after is not None and after.kind == "NAME" and after.value.upper() in ("UNION", "MINUS"):
                    raise UnsupportedFeature(after.value.upper())
                raise UnsupportedFeature("nested group patterns")
            self.triples_same_subject(triples)
            if not (self.is_punct(".") or self.is_punct("}")
                    or self.is_kw("OPTIONAL", "FILTER", *_UNSUPPORTED_IN_GROUP)):
                nxt = self.peek()
                if nxt is not None and nxt.kind == "PUNCT" and nxt.value in _PATH_PUNCT:
                    raise UnsupportedFeature("property paths")
                self.error("expected '.' or '}' after triple pattern")
        return GroupPattern(tuple(triples), tuple(optionals), tuple(filters))

    def hidden_var(self) -> Var:
        return Var(f"_:h{next(self._hidden)}")

    def triples_same_subject(self, out: list[TriplePattern]):
        if self.is_punct("["):
            subject = self.blank_property_list(out)
            if self.is_punct(".") or self.is_punct("}"):
                return
        else:
            subject = self.term(position="subject")
        self.property_list(subject, out)

    def property_list(self, subject, out: list[TriplePattern]):
        while True:
            predicate = self.verb()
            while True:
                obj = self.object(out)
                out.append(TriplePattern(subject, predicate, obj))
                if not self.is_punct(","):
                    break
                self.next()
            if not self.is_punct(";"):
                return
            while self.is_punct(";"):
                self.next()
            if self.is_punct(".") or self.is_punct("}") or self.is_punct("]"):
                return

    def verb(self):
        tok = self.peek()
        if tok is not None and tok.kind == "PUNCT" and tok.value in ("^", "(", "!"):
            raise UnsupportedFeature("property paths")
        if self.is_kw("A") and tok.value == "a":
            self.next()
            pred = Iri(RDF_TYPE)
        else:
            pred = self.term(position="predicate")
        nxt = self.peek()
        if nxt is not None and nxt.kind == "PUNCT" and nxt.value in _PATH_PUNCT:
            raise UnsupportedFeature("property paths")
        return pred

    def object(self, out: list[TriplePattern]):
        if self.is_punct("["):
            return self.blank_property_list(out)
        return self.term(position="object")

    def blank_property_list(self, out: list[TriplePattern]) -> Var:
        self.expect_punct("[")
        node = self.hidden_var()
        if self.is_punct("]"):
            self.next()
            return node
        self.property_list(node, out)
        self.expect_punct("]")
        return node

    def term(self, position: str):
        tok = self.peek()
        if tok is None:
            self.next()
        if tok.kind == "VAR":
            self.next()
            return Var(tok.value[1:])
        if tok.kind == "BNODE":
            self.next()
            return Var("_:" + tok.value[2:])
        if tok.kind in ("IRIREF", "PNAME_LN", "PNAME_NS"):
            return self.iri()
        if position != "predicate":
            lit = self.literal_or_none()
            if lit is not None:
                return lit
        if tok.kind == "PUNCT" and tok.value == "(":
            raise UnsupportedFeature("collections")
        if tok.kind == "PUNCT" and tok.value == "<<":
            raise UnsupportedFeature("quoted triples")
        self.error(f"expected a {position}", tok)

    def iri(self) -> Iri:
        tok = self.next()
        if tok.kind == "IRIREF":
            return self.resolve(tok)
        prefix, local = split_pname(tok)
        if prefix not in self.prefixes:
            self.error(f"undeclared prefix {prefix!r}", tok)
        try:
            return Iri(self.prefixes[prefix] + local)
        except ValueError:
            self.error("invalid IRI", tok)

    def literal_or_none(self) -> Literal | None:
        tok = self.peek()
        if tok.kind in STRING_KINDS:
            self.next()
            lexical = string_value(tok)
            nxt = self.peek()
            if nxt is not None and nxt.kind == "LANGTAG":
                self.next()
                return Literal(lexical, language=nxt.value[1:])
            if nxt is not None and nxt.kind == "PUNCT" and nxt.value == "^^":
                self.next()
                return Literal(lexical, self.iri().value)
            return Literal(lexical, XSD_STRING)
        if tok.kind in _NUMERIC:
            self.next()
            return Literal(tok.value, _NUMERIC[tok.kind])
        if tok.kind == "NAME" and tok.value.lower() in ("true", "false"):
            self.next()
            return Literal(tok.value.lower(), XSD_BOOLEAN)
        return None

    # -- expressions ---------------------------------------------------------
    def constraint(self):
        if self.is_punct("("):
            self.next()
            expr = self.expression()
            self.expect_punct(")")
            return expr
        if self.is_kw("NOT") or self.is_kw("EXISTS"):
            raise UnsupportedFeature("EXISTS")
        tok = self.peek()
        if tok is not None and tok.kind == "NAME":
            return self.function_call()
        if tok is not None and tok.kind in ("IRIREF", "PNAME_LN"):
            raise UnsupportedFeature("extension functions")
        self.error("expected '(' or a function call after FILTER")

    def expression(self):
        left = self.and_expression()
        while self.is_punct("||"):
            self.next()
            left = Or(left, self.and_expression())
        return left

    def and_expression(self):
        left = self.relational()
        while self.is_punct("&&"):
            self.next()
            left = And(left, self.relational())
        return left

    def relational(self):
        left = self.unary()
        tok = self.peek()
        if tok is not None and tok.kind == "PUNCT" and tok.value in _COMPARISON_OPS:
            self.next()
            return Comparison(tok.value, left, self.unary())
        if self.is_kw("IN", "NOT"):
            raise UnsupportedFeature("IN")
        if tok is not None and tok.kind == "PUNCT" and tok.value in ("+", "-", "*", "/"):
            raise UnsupportedFeature("arithmetic")
        if tok is not None and tok.kind in ("INTEGER", "DECIMAL", "DOUBLE") and tok.value[0] in "+-":
            raise UnsupportedFeature("arithmetic")
        return left

    def unary(self):
        if self.is_punct("!"):
            self.next()
            return Not(self.unary())
        if self.is_punct("-") or self.is_punct("+"):
            raise UnsupportedFeature("arithmetic")
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok is None:
            self.next()
        if tok.kind == "PUNCT" and tok.value == "(":
            self.next()
            expr = self.expression()
            self.expect_punct(")")
            return expr
        if tok.kind == "VAR":
            self.next()
            return Var(tok.value[1:])
        if tok.kind in ("IRIREF", "PNAME_LN", "PNAME_NS"):
            if self.is_punct("(", offset=1):
                raise UnsupportedFeature("extension functions")
            return self.iri()
        if tok.kind == "NAME" and tok.value.lower() not in ("true", "false"):
            return self.function_call()
        lit = self.literal_or_none()
        if lit is not None:
            return lit
        self.error("expected an expression", tok)

    def function_call(self):
        tok = self.next()
        name = tok.value.upper()
        if name in ("EXISTS", "NOT"):
            raise UnsupportedFeature("EXISTS")
        if name in _AGGREGATES:
            raise UnsupportedFeature("aggregates")
        if name != "REGEX":
            if self.is_punct("("):
                raise UnsupportedFeature(f"function {name}")
            self.error("expected an expression", tok)
        self.expect_punct("(")
        text = self.expression()
        self.expect_punct(",")
        pattern = self.expression()
        if self.is_punct(","):
            raise UnsupportedFeature("REGEX flags")
        self.expect_punct(")")
        return Regex(text, pattern)


def parse_query(text: str) -> SparqlQuery:
    """Parse a SPARQL SELECT query of the supported subset."""
    return _QueryParser(text).parse()
