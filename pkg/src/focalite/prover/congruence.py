"""Ground congruence closure over kernel terms.

Union-find with a signature table. Constructors are interpreted: distinct
integer literals, the booleans and ``[]`` against ``::`` never share a class,
and ``::`` is injective.
"""

import re

from focalite.logic.formulas import CONS_SYMBOL, NIL_SYMBOL, Fn, Term

_INT_LITERAL = re.compile(r"-?\d+")
_BOOL_LITERALS = ("true", "false")

type _Signature = tuple[str, tuple[int, ...]]


def is_constructor(term: Term) -> bool:
    if not isinstance(term, Fn):
        return False
    symbol = term.symbol
    return (
        symbol in (NIL_SYMBOL, CONS_SYMBOL)
        or (not term.args and symbol in _BOOL_LITERALS)
        or (not term.args and _INT_LITERAL.fullmatch(symbol) is not None)
    )


class CongruenceClosure:
    def __init__(self) -> None:
        self._ids: dict[Term, int] = {}
        self._terms: list[Term] = []
        self._parent: list[int] = []
        self._constructor: dict[int, int] = {}
        self._signatures: dict[_Signature, int] = {}
        self.inconsistent = False

    def copy(self) -> "CongruenceClosure":
        other = CongruenceClosure()
        other._ids = dict(self._ids)
        other._terms = list(self._terms)
        other._parent = list(self._parent)
        other._constructor = dict(self._constructor)
        other._signatures = dict(self._signatures)
        other.inconsistent = self.inconsistent
        return other

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def terms(self) -> tuple[Term, ...]:
        """Every registered term, in registration order."""
        return tuple(self._terms)

    def _root(self, ident: int) -> int:
        parent = self._parent
        while parent[ident] != ident:
            parent[ident] = parent[parent[ident]]
            ident = parent[ident]
        return ident

    def _signature(self, term: Fn) -> _Signature:
        return term.symbol, tuple(self._root(self._ids[arg]) for arg in term.args)

    def add(self, term: Term) -> int:
        known = self._ids.get(term)
        if known is not None:
            return known
        if isinstance(term, Fn):
            for arg in term.args:
                self.add(arg)
        ident = len(self._terms)
        self._ids[term] = ident
        self._terms.append(term)
        self._parent.append(ident)
        if is_constructor(term):
            self._constructor[ident] = ident
        if isinstance(term, Fn) and term.args:
            signature = self._signature(term)
            existing = self._signatures.get(signature)
            if existing is None:
                self._signatures[signature] = ident
            else:
                self._merge_ids(ident, existing)
        return ident

    def find(self, term: Term) -> Term:
        """The representative of the class of ``term``: its earliest registered member."""
        return self._terms[self._root(self.add(term))]

    def equal(self, left: Term, right: Term) -> bool:
        return self._root(self.add(left)) == self._root(self.add(right))

    def merge(self, left: Term, right: Term) -> None:
        self._merge_ids(self.add(left), self.add(right))

    def _merge_ids(self, left: int, right: int) -> None:
        pending = [(left, right)]
        while pending:
            a, b = pending.pop()
            root_a, root_b = self._root(a), self._root(b)
            if root_a == root_b:
                continue
            if root_b < root_a:
                root_a, root_b = root_b, root_a
            pending.extend(self._join_constructors(root_a, root_b))
            self._parent[root_b] = root_a
            pending.extend(self._rebuild())

    def _join_constructors(self, keep: int, drop: int) -> list[tuple[int, int]]:
        kept = self._constructor.get(keep)
        dropped = self._constructor.pop(drop, None)
        if dropped is None:
            return []
        if kept is None:
            self._constructor[keep] = dropped
            return []
        first, second = self._terms[kept], self._terms[dropped]
        if not isinstance(first, Fn) or not isinstance(second, Fn):
            return []
        if first.symbol != second.symbol:
            self.inconsistent = True
            return []
        return [
            (self._ids[x], self._ids[y]) for x, y in zip(first.args, second.args, strict=True)
        ]

    def _rebuild(self) -> list[tuple[int, int]]:
        congruent: list[tuple[int, int]] = []
        table: dict[_Signature, int] = {}
        for ident, term in enumerate(self._terms):
            if not isinstance(term, Fn) or not term.args:
                continue
            signature = self._signature(term)
            existing = table.setdefault(signature, ident)
            if existing != ident and self._root(existing) != self._root(ident):
                congruent.append((existing, ident))
        self._signatures = table
        return congruent

    def classes(self) -> dict[Term, tuple[Term, ...]]:
        """Members of every class, keyed by representative."""
        grouped: dict[Term, list[Term]] = {}
        for ident, term in enumerate(self._terms):
            grouped.setdefault(self._terms[self._root(ident)], []).append(term)
        return {key: tuple(members) for key, members in grouped.items()}

    def representatives(self) -> tuple[Term, ...]:
        return tuple(
            term for ident, term in enumerate(self._terms) if self._root(ident) == ident
        )

    def distinct(self, left: Term, right: Term) -> bool:
        """Whether the two classes hold constructors with different symbols."""
        first = self._constructor.get(self._root(self.add(left)))
        second = self._constructor.get(self._root(self.add(right)))
        if first is None or second is None:
            return False
        a, b = self._terms[first], self._terms[second]
        return isinstance(a, Fn) and isinstance(b, Fn) and a.symbol != b.symbol
