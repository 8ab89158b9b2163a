"""Syntax tree of the supported SELECT subset."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..rdf.terms import Term


@dataclass(frozen=True)
class Var:
    name: str

    @property
    def hidden(self) -> bool:
        # blank nodes in patterns become variables that SELECT * never shows
        return self.name.startswith("_:")

    def __str__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Term, Var]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def variables(self) -> list[str]:
        return [x.name for x in self if isinstance(x, Var)]


@dataclass(frozen=True)
class Comparison:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class Regex:
    text: "Expr"
    pattern: "Expr"


Expr = Union[Comparison, And, Or, Not, Regex, Var, Term]


@dataclass(frozen=True)
class GroupPattern:
    triples: tuple[TriplePattern, ...] = ()
    optionals: tuple["GroupPattern", ...] = ()
    filters: tuple[Expr, ...] = ()

    def variables(self) -> list[str]:
        """In-scope variables in order of first appearance."""
        seen: dict[str, None] = {}
        for tp in self.triples:
            for v in tp.variables():
                seen.setdefault(v)
        for opt in self.optionals:
            for v in opt.variables():
                seen.setdefault(v)
        return list(seen)


@dataclass(frozen=True)
class OrderCondition:
    expr: Expr
    descending: bool = False


@dataclass(frozen=True)
class SparqlQuery:
    where: GroupPattern
    variables: Optional[tuple[str, ...]] = None  # None means SELECT *
    distinct: bool = False
    order_by: tuple[OrderCondition, ...] = ()
    limit: Optional[int] = None
    offset: Optional[int] = None
    prefixes: dict = field(default_factory=dict, compare=False)
    unbound_projection: tuple[str, ...] = ()

    @property
    def projection(self) -> tuple[str, ...]:
        if self.variables is not None:
            return self.variables
        return tuple(v for v in self.where.variables() if not v.startswith("_:"))
