from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Sequence

from ..rdf.terms import Term, term_key

SolutionRow = Dict[str, Term]


def row_key(variables: Sequence[str], row: SolutionRow) -> tuple:
    """Default ordering: string forms of the bindings, unbound sorting first."""
    return tuple((0, "") if v not in row else (1, term_key(row[v])) for v in variables)


def sort_rows(variables: Sequence[str], rows: Iterable[SolutionRow]) -> list[SolutionRow]:
    return sorted(rows, key=lambda r: row_key(variables, r))


@dataclass(frozen=True)
class ResultSet:
    variables: tuple[str, ...]
    rows: tuple[SolutionRow, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def column(self, name: str) -> list[Term | None]:
        return [r.get(name) for r in self.rows]
