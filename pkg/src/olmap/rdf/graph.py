"""In-memory triple store with three permutation indexes."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator

from .terms import Term, Triple, make_triple, term_key


def _sort_key(t: Triple):
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))


class Graph:
    """A set of triples indexed subject-first, predicate-first and object-first.

    Graphs are filled once (by a parser or a test) and then only read; reads
    from several threads are safe as long as nobody calls :meth:`add`.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._spo: dict = defaultdict(lambda: defaultdict(set))
        self._pos: dict = defaultdict(lambda: defaultdict(set))
        self._osp: dict = defaultdict(lambda: defaultdict(set))
        for t in triples:
            self.add(t)

    def add(self, triple: Triple) -> None:
        s, p, o = triple
        triple = make_triple(s, p, o)
        if triple in self._triples:
            return
        self._triples.add(triple)
        self._spo[s][p].add(o)
        self._pos[p][o].add(s)
        self._osp[o][s].add(p)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple) -> bool:
        return tuple(triple) in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=_sort_key))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __repr__(self) -> str:
        return f"<Graph with {len(self)} triples>"

    def terms(self) -> set[Term]:
        out: set[Term] = set()
        for s, p, o in self._triples:
            out.update((s, p, o))
        return out

    def _scan(self, s, p, o) -> Iterator[Triple]:
        if s is not None:
            by_p = self._spo.get(s)
            if not by_p:
                return
            if p is not None:
                objs = by_p.get(p, ())
                if o is not None:
                    if o in objs:
                        yield Triple(s, p, o)
                    return
                for obj in objs:
                    yield Triple(s, p, obj)
                return
            if o is not None:
                for pred in self._osp.get(o, {}).get(s, ()):
                    yield Triple(s, pred, o)
                return
            for pred, objs in by_p.items():
                for obj in objs:
                    yield Triple(s, pred, obj)
            return
        if p is not None:
            by_o = self._pos.get(p)
            if not by_o:
                return
            if o is not None:
                for subj in by_o.get(o, ()):
                    yield Triple(subj, p, o)
                return
            for obj, subjs in by_o.items():
                for subj in subjs:
                    yield Triple(subj, p, obj)
            return
        if o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
            return
        yield from self._triples

    def match(self, s: Term | None = None, p: Term | None = None,
              o: Term | None = None) -> list[Triple]:
        """All triples matching the pattern; ``None`` is a wildcard.

        Results come back in lexicographic order of the terms' N-Triples forms.
        """
        return sorted(self._scan(s, p, o), key=_sort_key)

    def count(self, s: Term | None = None, p: Term | None = None,
              o: Term | None = None) -> int:
        if s is None and p is None and o is None:
            return len(self._triples)
        return sum(1 for _ in self._scan(s, p, o))

    def objects(self, s: Term, p: Term) -> list[Term]:
        return [t.object for t in self.match(s, p, None)]

    def subjects(self, p: Term, o: Term) -> list[Term]:
        return [t.subject for t in self.match(None, p, o)]


def match(g: Graph, s: Term | None = None, p: Term | None = None,
          o: Term | None = None) -> list[Triple]:
    return g.match(s, p, o)


def isomorphic(a: Graph, b: Graph) -> bool:
    """Graph isomorphism up to blank-node renaming (backtracking; small graphs)."""
    from .terms import BlankNode

    if len(a) != len(b):
        return False

    def split(g):
        ground, withb = set(), []
        for t in g._triples:
            if any(isinstance(x, BlankNode) for x in t):
                withb.append(t)
            else:
                ground.add(t)
        return ground, withb

    ga, ba = split(a)
    gb, bb = split(b)
    if ga != gb or len(ba) != len(bb):
        return False
    bnodes_a = sorted({x for t in ba for x in t if isinstance(x, BlankNode)}, key=term_key)
    bnodes_b = {x for t in bb for x in t if isinstance(x, BlankNode)}
    if len(bnodes_a) != len(bnodes_b):
        return False
    target = set(bb)

    def signature(node, triples):
        sig = []
        for t in triples:
            for pos, x in enumerate(t):
                if x == node:
                    sig.append((pos, tuple(
                        "_" if isinstance(y, BlankNode) else term_key(y) for y in t)))
        return sorted(sig)

    sig_b: dict = defaultdict(list)
    for n in bnodes_b:
        sig_b[tuple(signature(n, bb))].append(n)
    candidates = {n: sig_b.get(tuple(signature(n, ba)), []) for n in bnodes_a}

    mapping: dict = {}
    used: set = set()

    def consistent() -> bool:
        for t in ba:
            if all(not isinstance(x, BlankNode) or x in mapping for x in t):
                if tuple(mapping.get(x, x) for x in t) not in target:
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(bnodes_a):
            return True
        node = bnodes_a[i]
        for cand in candidates[node]:
            if cand in used:
                continue
            mapping[node] = cand
            used.add(cand)
            if consistent() and search(i + 1):
                return True
            del mapping[node]
            used.discard(cand)
        return False

    return search(0)
