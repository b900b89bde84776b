"""Abstract syntax of species units.

Every node is immutable. Spans are excluded from equality so that a
pretty-printed and re-parsed unit compares equal to the original.
"""

from dataclasses import dataclass, field
from enum import StrEnum

from focalite._diagnostics.errors import Span

_NO_SPAN = Span()


def _span() -> Span:
    return field(default=_NO_SPAN, compare=False, repr=False)


# Types


@dataclass(frozen=True, slots=True)
class SelfType:
    pass


@dataclass(frozen=True, slots=True)
class BoolType:
    pass


@dataclass(frozen=True, slots=True)
class IntType:
    pass


@dataclass(frozen=True, slots=True)
class ListType:
    element: "TypeExpr"


@dataclass(frozen=True, slots=True)
class ParamRef:
    """Carrier of a species parameter or of a collection."""

    name: str


@dataclass(frozen=True, slots=True)
class Arrow:
    args: tuple["TypeExpr", ...]
    result: "TypeExpr"


@dataclass(frozen=True, slots=True)
class TypeVar:
    """Unknown type, only produced during inference."""

    ident: int


type TypeExpr = SelfType | BoolType | IntType | ListType | ParamRef | Arrow | TypeVar


# Expressions


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class IntLit:
    value: int
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class BoolLit:
    value: bool
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class App:
    callee: str
    args: tuple["Expr", ...]
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class QualifiedCall:
    """``C!m(args)``; ``args`` is empty for a constant such as ``S!element``."""

    collection: str
    method: str
    args: tuple["Expr", ...]
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class ListNil:
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class ListCons:
    head: "Expr"
    tail: "Expr"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class If:
    cond: "Expr"
    then: "Expr"
    otherwise: "Expr"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class PNil:
    pass


@dataclass(frozen=True, slots=True)
class PCons:
    head: str
    tail: str


@dataclass(frozen=True, slots=True)
class PVar:
    name: str


@dataclass(frozen=True, slots=True)
class PWild:
    pass


type Pattern = PNil | PCons | PVar | PWild


@dataclass(frozen=True, slots=True)
class MatchBranch:
    pattern: Pattern
    body: "Expr"


@dataclass(frozen=True, slots=True)
class Match:
    scrutinee: "Expr"
    branches: tuple[MatchBranch, ...]
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class LocalLet:
    name: str
    bound: "Expr"
    body: "Expr"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class BoolAnd:
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class BoolOr:
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class BoolNot:
    operand: "Expr"
    span: Span = _span()


class BinaryOp(StrEnum):
    ADD = "+"
    SUB = "-"
    EQ = "="


@dataclass(frozen=True, slots=True)
class BinOp:
    op: BinaryOp
    left: "Expr"
    right: "Expr"
    span: Span = _span()


type Expr = (
    Var
    | IntLit
    | BoolLit
    | App
    | QualifiedCall
    | ListNil
    | ListCons
    | If
    | Match
    | LocalLet
    | BoolAnd
    | BoolOr
    | BoolNot
    | BinOp
)


# Formulas


@dataclass(frozen=True, slots=True)
class All:
    names: tuple[str, ...]
    type: TypeExpr
    body: "Formula"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Ex:
    names: tuple[str, ...]
    type: TypeExpr
    body: "Formula"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Not:
    operand: "Formula"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Atom:
    expr: Expr
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Eq:
    left: Expr
    right: Expr
    span: Span = _span()


type Formula = All | Ex | And | Or | Not | Implies | Iff | Atom | Eq


# Proofs


class CitationKind(StrEnum):
    DEFINITION = "definition of"
    PROPERTY = "property"
    THEOREM = "theorem"
    HYPOTHESIS = "hypothesis"
    STEP = "step"


@dataclass(frozen=True, slots=True)
class Citation:
    kind: CitationKind
    names: tuple[str, ...]
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Justification:
    """``conclude`` when ``citations`` is empty and ``conclude`` is set, else ``by ...``."""

    citations: tuple[Citation, ...]
    conclude: bool = False
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Assumption:
    names: tuple[str, ...]
    type: TypeExpr


@dataclass(frozen=True, slots=True)
class Hypothesis:
    name: str
    formula: Formula


@dataclass(frozen=True, slots=True)
class Step:
    level: int
    ident: str
    assumptions: tuple[Assumption, ...]
    hypotheses: tuple[Hypothesis, ...]
    goal: Formula | None
    body: "Justification | Steps"
    qed: bool = False
    span: Span = _span()

    @property
    def label(self) -> str:
        return f"<{self.level}>{self.ident}"

    @property
    def is_terminal(self) -> bool:
        return self.goal is None

    @property
    def assumed(self) -> tuple[tuple[str, TypeExpr], ...]:
        return tuple((name, group.type) for group in self.assumptions for name in group.names)


@dataclass(frozen=True, slots=True)
class Steps:
    steps: tuple[Step, ...]


type Proof = Justification | Steps


# Methods and phrases


@dataclass(frozen=True, slots=True)
class Param:
    name: str
    type: TypeExpr | None = None


@dataclass(frozen=True, slots=True)
class Signature:
    name: str
    type: TypeExpr
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Representation:
    type: TypeExpr
    span: Span = _span()

    @property
    def name(self) -> str:
        return "representation"


@dataclass(frozen=True, slots=True)
class LetDef:
    name: str
    params: tuple[Param, ...]
    result_type: TypeExpr | None
    body: Expr
    is_recursive: bool = False
    is_final: bool = False
    termination: str | None = None
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class LogicalLet:
    name: str
    params: tuple[Param, ...]
    body: Formula
    is_final: bool = False
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Property:
    name: str
    formula: Formula
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class Theorem:
    name: str
    formula: Formula
    proof: Proof
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class ProofOf:
    name: str
    proof: Proof
    span: Span = _span()


type Method = Signature | Representation | LetDef | LogicalLet | Property | Theorem | ProofOf


@dataclass(frozen=True, slots=True)
class SpeciesExpr:
    name: str
    args: tuple[str, ...] = ()
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class SpeciesParam:
    name: str
    interface: SpeciesExpr


@dataclass(frozen=True, slots=True)
class SpeciesDecl:
    name: str
    params: tuple[SpeciesParam, ...]
    inherits: tuple[SpeciesExpr, ...]
    methods: tuple[Method, ...]
    span: Span = _span()


@dataclass(frozen=True, slots=True)
class CollectionDecl:
    name: str
    implements: SpeciesExpr
    span: Span = _span()


type Phrase = SpeciesDecl | CollectionDecl


@dataclass(frozen=True, slots=True)
class Unit:
    phrases: tuple[Phrase, ...]
    file: str = field(default="<input>", compare=False)
