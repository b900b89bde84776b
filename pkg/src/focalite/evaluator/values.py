from collections.abc import Iterable, Iterator
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class BoolValue:
    value: bool


@dataclass(frozen=True, slots=True)
class IntValue:
    value: int


@dataclass(frozen=True, slots=True, eq=False)
class ListValue:
    """An immutable cons list; consing and matching share the tail instead of copying it."""

    cell: tuple["Value", "ListValue"] | None = None
    length: int = 0

    @classmethod
    def of(cls, items: Iterable["Value"]) -> "ListValue":
        result = cls()
        for item in reversed(tuple(items)):
            result = result.cons(item)
        return result

    def cons(self, head: "Value") -> "ListValue":
        return ListValue((head, self), self.length + 1)

    @property
    def items(self) -> tuple["Value", ...]:
        return tuple(self)

    def __iter__(self) -> Iterator["Value"]:
        cell = self.cell
        while cell is not None:
            head, rest = cell
            yield head
            cell = rest.cell

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ListValue):
            return NotImplemented
        return self.length == other.length and all(
            mine == theirs for mine, theirs in zip(self, other, strict=True)
        )

    def __hash__(self) -> int:
        return hash(self.items)

    def __repr__(self) -> str:
        return f"ListValue.of({self.items!r})"


@dataclass(frozen=True, slots=True)
class Closure:
    """A method used as a value, bound to the collection that defines it."""

    collection: str
    method: str


@dataclass(frozen=True, slots=True)
class OpaqueValue:
    """A carrier value seen from outside its collection."""

    collection: str
    value: "Value"


type Value = BoolValue | IntValue | ListValue | Closure | OpaqueValue

TRUE = BoolValue(value=True)
FALSE = BoolValue(value=False)
NIL = ListValue()


type PyData = bool | int | list["PyData"] | tuple["PyData", ...]


def from_python(value: PyData) -> Value:  # noqa: FBT001
    """Build a runtime value from plain Python data, for tests and callers."""
    match value:
        case bool():
            return BoolValue(value)
        case int():
            return IntValue(value)
        case list() | tuple():
            return ListValue.of(from_python(item) for item in value)


def format_value(value: Value, *, abstract: bool = False) -> str:
    """Surface literal syntax: ``true``, ``42``, ``[1; 2]``.

    Opaque values print as their representation unless ``abstract`` is set, in
    which case they are tagged with their collection as ``<C v>``.
    """
    match value:
        case BoolValue(flag):
            return "true" if flag else "false"
        case IntValue(number):
            return str(number)
        case ListValue():
            return "[" + "; ".join(format_value(item, abstract=abstract) for item in value) + "]"
        case Closure(collection, method):
            return f"{collection}!{method}"
        case OpaqueValue(collection, inner) if abstract:
            return f"<{collection} {format_value(inner, abstract=True)}>"
        case OpaqueValue(_, inner):
            return format_value(inner)
