import logging

from focalite._diagnostics.errors import Span
from focalite.exceptions import (
    DuplicateMethodError,
    DuplicatePhraseError,
    ParseError,
    ProofStructureError,
)
from focalite.syntax import ast
from focalite.syntax.tokens import Token, TokenKind, token_stream

LOGGER = logging.getLogger(__name__)

_CITATION_KEYWORDS = ("definition", "property", "theorem", "hypothesis", "step")
_EXPR_CONTINUATIONS = ("=", "::", "+", "-", "&&", "||")


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, tokens: tuple[Token, ...]) -> None:
        self.tokens = tokens
        self.pos = 0

    # Token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind is not TokenKind.EOF:
            self.pos += 1
        return token

    def fail(self, expected: str) -> ParseError:
        return ParseError(expected, self.current.describe(), self.current.span)

    def at_symbol(self, symbol: str) -> bool:
        return self.current.is_symbol(symbol)

    def at_keyword(self, word: str) -> bool:
        return self.current.is_keyword(word)

    def accept_symbol(self, symbol: str) -> bool:
        if self.at_symbol(symbol):
            self.advance()
            return True
        return False

    def accept_keyword(self, word: str) -> bool:
        if self.at_keyword(word):
            self.advance()
            return True
        return False

    def expect_symbol(self, symbol: str) -> Token:
        if not self.at_symbol(symbol):
            raise self.fail(repr(symbol))
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            raise self.fail(repr(word))
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> str:
        if self.current.kind is not TokenKind.IDENT:
            raise self.fail(what)
        return self.advance().text

    def expect_eof(self) -> None:
        if self.current.kind is not TokenKind.EOF:
            raise self.fail("end of input")

    # Phrases

    def unit(self, file: str) -> ast.Unit:
        phrases: list[ast.Phrase] = []
        while self.current.kind is not TokenKind.EOF:
            phrase: ast.Phrase
            if self.at_keyword("species"):
                phrase = self.species_decl()
            elif self.at_keyword("collection"):
                phrase = self.collection_decl()
            else:
                raise self.fail("'species' or 'collection'")
            if any(seen.name == phrase.name for seen in phrases):
                raise DuplicatePhraseError(phrase.name, phrase.span)
            phrases.append(phrase)
        return ast.Unit(tuple(phrases), file)

    def species_expr(self) -> ast.SpeciesExpr:
        span = self.current.span
        name = self.expect_ident("species name")
        args: list[str] = []
        if self.accept_symbol("("):
            args.append(self.expect_ident("species argument"))
            while self.accept_symbol(","):
                args.append(self.expect_ident("species argument"))
            self.expect_symbol(")")
        return ast.SpeciesExpr(name, tuple(args), span)

    def species_decl(self) -> ast.SpeciesDecl:
        span = self.expect_keyword("species").span
        name = self.expect_ident("species name")
        params: list[ast.SpeciesParam] = []
        if self.accept_symbol("("):
            while True:
                param = self.expect_ident("parameter name")
                self.expect_keyword("is")
                params.append(ast.SpeciesParam(param, self.species_expr()))
                if not self.accept_symbol(","):
                    break
            self.expect_symbol(")")
        self.expect_symbol("=")
        inherits: list[ast.SpeciesExpr] = []
        if self.accept_keyword("inherit"):
            inherits.append(self.species_expr())
            while self.accept_symbol(","):
                inherits.append(self.species_expr())
            self.expect_symbol(";")
        methods: list[ast.Method] = []
        while not self.at_keyword("end"):
            if self.current.kind is TokenKind.EOF:
                raise self.fail("'end'")
            methods.append(self.method())
        self.expect_keyword("end")
        self.expect_symbol(";;")
        _check_duplicates(methods)
        return ast.SpeciesDecl(name, tuple(params), tuple(inherits), tuple(methods), span)

    def collection_decl(self) -> ast.CollectionDecl:
        span = self.expect_keyword("collection").span
        name = self.expect_ident("collection name")
        self.expect_symbol("=")
        self.expect_keyword("implement")
        implements = self.species_expr()
        self.expect_symbol(";")
        self.expect_keyword("end")
        self.expect_symbol(";;")
        return ast.CollectionDecl(name, implements, span)

    # Methods

    def method(self) -> ast.Method:  # noqa: PLR0911
        span = self.current.span
        if self.accept_keyword("signature"):
            name = self.expect_ident("method name")
            self.expect_symbol(":")
            type_ = self.type_expr()
            self.expect_symbol(";")
            return ast.Signature(name, type_, span)
        if self.accept_keyword("representation"):
            self.expect_symbol("=")
            type_ = self.type_expr()
            self.expect_symbol(";")
            return ast.Representation(type_, span)
        if self.accept_keyword("logical"):
            is_final = self.accept_keyword("final")
            self.expect_keyword("let")
            return self.logical_let(span, is_final=is_final)
        if self.accept_keyword("final"):
            self.expect_keyword("let")
            return self.let_def(span, is_final=True)
        if self.accept_keyword("let"):
            return self.let_def(span, is_final=False)
        if self.accept_keyword("property"):
            name = self.expect_ident("property name")
            self.expect_symbol(":")
            formula = self.formula()
            self.expect_symbol(";")
            return ast.Property(name, formula, span)
        if self.accept_keyword("theorem"):
            name = self.expect_ident("theorem name")
            self.expect_symbol(":")
            formula = self.formula()
            self.expect_keyword("proof")
            self.expect_symbol("=")
            proof = self.proof()
            self.expect_symbol(";")
            return ast.Theorem(name, formula, proof, span)
        if self.accept_keyword("proof"):
            self.expect_keyword("of")
            name = self.expect_ident("statement name")
            self.expect_symbol("=")
            proof = self.proof()
            self.expect_symbol(";")
            return ast.ProofOf(name, proof, span)
        raise self.fail("a method")

    def params(self) -> tuple[ast.Param, ...]:
        if not self.accept_symbol("("):
            return ()
        params: list[ast.Param] = []
        while True:
            name = self.expect_ident("parameter name")
            type_ = self.type_expr() if self.accept_symbol(":") else None
            params.append(ast.Param(name, type_))
            if not self.accept_symbol(","):
                break
        self.expect_symbol(")")
        return tuple(params)

    def let_def(self, span: Span, *, is_final: bool) -> ast.LetDef:
        is_recursive = self.accept_keyword("rec")
        name = self.expect_ident("method name")
        params = self.params()
        result_type = self.type_expr() if self.accept_symbol(":") else None
        self.expect_symbol("=")
        body = self.expr()
        termination = None
        if self.accept_keyword("termination"):
            if not is_recursive:
                raise ParseError("';'", "'termination' on a non-recursive definition", span)
            self.expect_keyword("proof")
            self.expect_symbol("=")
            self.expect_keyword("structural")
            termination = self.expect_ident("decreasing parameter")
        elif is_recursive:
            raise self.fail("'termination proof = structural'")
        self.expect_symbol(";")
        return ast.LetDef(
            name,
            params,
            result_type,
            body,
            is_recursive=is_recursive,
            is_final=is_final,
            termination=termination,
            span=span,
        )

    def logical_let(self, span: Span, *, is_final: bool) -> ast.LogicalLet:
        name = self.expect_ident("method name")
        params = self.params()
        self.expect_symbol("=")
        body = self.formula()
        self.expect_symbol(";")
        return ast.LogicalLet(name, params, body, is_final=is_final, span=span)

    # Types

    def type_expr(self) -> ast.TypeExpr:
        parts = [self.type_atom()]
        while self.accept_symbol("->"):
            parts.append(self.type_atom())
        if len(parts) == 1:
            return parts[0]
        return ast.Arrow(tuple(parts[:-1]), parts[-1])

    def type_atom(self) -> ast.TypeExpr:
        if self.accept_symbol("("):
            inner = self.type_expr()
            self.expect_symbol(")")
            return inner
        name = self.expect_ident("a type")
        match name:
            case "Self":
                return ast.SelfType()
            case "bool":
                return ast.BoolType()
            case "int":
                return ast.IntType()
            case "list":
                self.expect_symbol("(")
                element = self.type_expr()
                self.expect_symbol(")")
                return ast.ListType(element)
            case _:
                return ast.ParamRef(name)

    # Formulas

    def formula(self) -> ast.Formula:
        span = self.current.span
        left = self.implication()
        while self.accept_symbol("<->"):
            left = ast.Iff(left, self.implication(), span)
        return left

    def implication(self) -> ast.Formula:
        span = self.current.span
        left = self.disjunction()
        if self.accept_symbol("->"):
            return ast.Implies(left, self.implication(), span)
        return left

    def disjunction(self) -> ast.Formula:
        span = self.current.span
        left = self.conjunction()
        while self.accept_symbol("\\/"):
            left = ast.Or(left, self.conjunction(), span)
        return left

    def conjunction(self) -> ast.Formula:
        span = self.current.span
        left = self.unary_formula()
        while self.accept_symbol("/\\"):
            left = ast.And(left, self.unary_formula(), span)
        return left

    def unary_formula(self) -> ast.Formula:
        span = self.current.span
        if self.accept_keyword("not"):
            return ast.Not(self.unary_formula(), span)
        if self.at_keyword("all") or self.at_keyword("ex"):
            universal = self.advance().text == "all"
            names = [self.expect_ident("bound variable")]
            while self.current.kind is TokenKind.IDENT:
                names.append(self.advance().text)
            self.expect_symbol(":")
            type_ = self.type_expr()
            self.expect_symbol(",")
            body = self.formula()
            if universal:
                return ast.All(tuple(names), type_, body, span)
            return ast.Ex(tuple(names), type_, body, span)
        if self.at_symbol("("):
            start = self.pos
            try:
                return self.parenthesized_formula()
            except (ParseError, _Backtrack):
                self.pos = start
        return self.atom()

    def parenthesized_formula(self) -> ast.Formula:
        self.expect_symbol("(")
        inner = self.formula()
        self.expect_symbol(")")
        if any(self.at_symbol(op) for op in _EXPR_CONTINUATIONS):
            raise _Backtrack
        return inner

    def atom(self) -> ast.Formula:
        span = self.current.span
        return _formula_of(self.expr(), span)

    # Expressions

    def expr(self) -> ast.Expr:
        span = self.current.span
        if self.accept_keyword("if"):
            cond = self.expr()
            self.expect_keyword("then")
            then = self.expr()
            self.expect_keyword("else")
            return ast.If(cond, then, self.expr(), span)
        if self.accept_keyword("match"):
            scrutinee = self.expr()
            self.expect_keyword("with")
            self.accept_symbol("|")
            branches = [self.match_branch()]
            while self.accept_symbol("|"):
                branches.append(self.match_branch())
            return ast.Match(scrutinee, tuple(branches), span)
        if self.accept_keyword("let"):
            name = self.expect_ident("local name")
            self.expect_symbol("=")
            bound = self.expr()
            self.expect_keyword("in")
            return ast.LocalLet(name, bound, self.expr(), span)
        return self.or_expr()

    def match_branch(self) -> ast.MatchBranch:
        pattern = self.pattern()
        self.expect_symbol("->")
        return ast.MatchBranch(pattern, self.expr())

    def pattern(self) -> ast.Pattern:
        if self.accept_symbol("["):
            self.expect_symbol("]")
            return ast.PNil()
        name = self.expect_ident("a pattern")
        if self.accept_symbol("::"):
            return ast.PCons(name, self.expect_ident("a tail pattern"))
        if name == "_":
            return ast.PWild()
        return ast.PVar(name)

    def or_expr(self) -> ast.Expr:
        span = self.current.span
        left = self.and_expr()
        while self.accept_symbol("||"):
            left = ast.BoolOr(left, self.and_expr(), span)
        return left

    def and_expr(self) -> ast.Expr:
        span = self.current.span
        left = self.not_expr()
        while self.accept_symbol("&&"):
            left = ast.BoolAnd(left, self.not_expr(), span)
        return left

    def not_expr(self) -> ast.Expr:
        span = self.current.span
        if self.accept_keyword("not"):
            return ast.BoolNot(self.not_expr(), span)
        return self.eq_expr()

    def eq_expr(self) -> ast.Expr:
        span = self.current.span
        left = self.cons_expr()
        if self.accept_symbol("="):
            return ast.BinOp(ast.BinaryOp.EQ, left, self.cons_expr(), span)
        return left

    def cons_expr(self) -> ast.Expr:
        span = self.current.span
        head = self.add_expr()
        if self.accept_symbol("::"):
            return ast.ListCons(head, self.cons_expr(), span)
        return head

    def add_expr(self) -> ast.Expr:
        span = self.current.span
        left = self.atom_expr()
        while self.at_symbol("+") or self.at_symbol("-"):
            op = ast.BinaryOp(self.advance().text)
            left = ast.BinOp(op, left, self.atom_expr(), span)
        return left

    def args(self) -> tuple[ast.Expr, ...]:
        self.expect_symbol("(")
        args = [self.expr()]
        while self.accept_symbol(","):
            args.append(self.expr())
        self.expect_symbol(")")
        return tuple(args)

    def atom_expr(self) -> ast.Expr:  # noqa: PLR0911
        token = self.current
        span = token.span
        if token.kind is TokenKind.INT:
            self.advance()
            return ast.IntLit(int(token.text), span)
        if token.is_keyword("true") or token.is_keyword("false"):
            self.advance()
            return ast.BoolLit(token.text == "true", span)
        if any(token.is_keyword(word) for word in ("if", "match", "let")):
            return self.expr()
        if self.accept_symbol("("):
            inner = self.expr()
            self.expect_symbol(")")
            return inner
        if self.accept_symbol("["):
            return self.list_literal(span)
        if token.kind is TokenKind.IDENT:
            name = self.advance().text
            if self.accept_symbol("!"):
                method = self.expect_ident("method name")
                args = self.args() if self.at_symbol("(") else ()
                return ast.QualifiedCall(name, method, args, span)
            if self.at_symbol("("):
                return ast.App(name, self.args(), span)
            return ast.Var(name, span)
        raise self.fail("an expression")

    def list_literal(self, span: Span) -> ast.Expr:
        items: list[ast.Expr] = []
        if not self.at_symbol("]"):
            items.append(self.expr())
            while self.accept_symbol(";"):
                items.append(self.expr())
        self.expect_symbol("]")
        result: ast.Expr = ast.ListNil(span)
        for item in reversed(items):
            result = ast.ListCons(item, result, span)
        return result

    # Proofs

    def proof(self) -> ast.Proof:
        if self.current.kind is TokenKind.STEP_LABEL:
            steps = self.step_list()
            return ast.Steps(steps)
        return self.justification()

    def justification(self) -> ast.Justification:
        span = self.current.span
        if self.accept_keyword("conclude"):
            return ast.Justification((), conclude=True, span=span)
        self.expect_keyword("by")
        citations: list[ast.Citation] = []
        while any(self.at_keyword(word) for word in _CITATION_KEYWORDS):
            citations.append(self.citation())
        if not citations:
            raise self.fail("a citation")
        return ast.Justification(tuple(citations), span=span)

    def citation(self) -> ast.Citation:
        span = self.current.span
        word = self.advance().text
        if word == "definition":
            self.expect_keyword("of")
            return ast.Citation(ast.CitationKind.DEFINITION, self.qualified_names(), span)
        if word == "step":
            labels = [self.step_label()]
            while self.accept_symbol(","):
                labels.append(self.step_label())
            return ast.Citation(ast.CitationKind.STEP, tuple(labels), span)
        return ast.Citation(ast.CitationKind(word), self.qualified_names(), span)

    def qualified_names(self) -> tuple[str, ...]:
        names = [self.qualified_name()]
        while self.accept_symbol(","):
            names.append(self.qualified_name())
        return tuple(names)

    def qualified_name(self) -> str:
        name = self.expect_ident("a name")
        if self.accept_symbol("!"):
            return f"{name}!{self.expect_ident('method name')}"
        return name

    def step_label(self) -> str:
        if self.current.kind is not TokenKind.STEP_LABEL:
            raise self.fail("a step label")
        return self.advance().text

    def step_list(self) -> tuple[ast.Step, ...]:
        level = _label_level(self.current.text)
        steps: list[ast.Step] = []
        while self.current.kind is TokenKind.STEP_LABEL and (
            _label_level(self.current.text) == level
        ):
            steps.append(self.step())
        if self.current.kind is TokenKind.STEP_LABEL and (
            _label_level(self.current.text) > level
        ):
            raise ProofStructureError(
                f"Step {self.current.text} is not at level {level}",
                self.current.span,
            )
        terminals = [step for step in steps if step.is_terminal]
        if len(terminals) != 1 or not steps[-1].is_terminal:
            raise ProofStructureError(
                f"Steps at level {level} need exactly one terminal step, written last",
                steps[0].span,
            )
        return tuple(steps)

    def step(self) -> ast.Step:
        token = self.advance()
        level = _label_level(token.text)
        ident = token.text.split(">", 1)[1]
        if self.accept_keyword("qed"):
            body = self.justification()
            return ast.Step(level, ident, (), (), None, body, qed=True, span=token.span)
        assumptions: list[ast.Assumption] = []
        hypotheses: list[ast.Hypothesis] = []
        while self.accept_keyword("assume"):
            names = [self.expect_ident("assumed name")]
            while self.current.kind is TokenKind.IDENT:
                names.append(self.advance().text)
            self.expect_symbol(":")
            assumptions.append(ast.Assumption(tuple(names), self.type_expr()))
            self.expect_symbol(",")
        while self.accept_keyword("hypothesis"):
            name = self.expect_ident("hypothesis name")
            self.expect_symbol(":")
            hypotheses.append(ast.Hypothesis(name, self.formula()))
            self.accept_symbol(",")
        goal = self.formula() if self.accept_keyword("prove") else None
        if goal is None and (assumptions or hypotheses):
            raise self.fail("'prove'")
        body: ast.Justification | ast.Steps
        if self.current.kind is TokenKind.STEP_LABEL:
            if goal is None:
                raise self.fail("'by' or 'conclude'")
            children = self.step_list()
            if children[0].level != level + 1:
                raise ProofStructureError(
                    f"Sub-steps of {token.text} must be at level {level + 1}",
                    children[0].span,
                )
            body = ast.Steps(children)
        else:
            body = self.justification()
        return ast.Step(
            level,
            ident,
            tuple(assumptions),
            tuple(hypotheses),
            goal,
            body,
            span=token.span,
        )


def _label_level(label: str) -> int:
    return int(label[1 : label.index(">")])


def _check_duplicates(methods: list[ast.Method]) -> None:
    seen: dict[tuple[str, str], ast.Method] = {}
    for method in methods:
        match method:
            case ast.Signature():
                category = "declaration"
            case ast.LetDef() | ast.LogicalLet():
                category = "definition"
            case ast.Property() | ast.Theorem():
                category = "statement"
            case ast.Representation():
                category = "representation"
            case ast.ProofOf():
                continue
        key = (category, method.name)
        if key in seen:
            raise DuplicateMethodError(method.name, method.span)
        seen[key] = method
    functions = {name for category, name in seen if category != "statement"}
    for category, name in seen:
        if category == "statement" and name in functions:
            raise DuplicateMethodError(name, seen[(category, name)].span)


def parse_unit(text: str, file: str = "<input>") -> ast.Unit:
    """Parse a complete source file into a unit of species and collection phrases."""
    parser = Parser(token_stream(text, file))
    unit = parser.unit(file)
    LOGGER.debug("Parsed %s phrases from %s", len(unit.phrases), file)
    return unit


def parse_formula(text: str, file: str = "<input>") -> ast.Formula:
    parser = Parser(token_stream(text, file))
    formula = parser.formula()
    parser.expect_eof()
    return formula


def parse_expr(text: str, file: str = "<input>") -> ast.Expr:
    parser = Parser(token_stream(text, file))
    expr = parser.expr()
    parser.expect_eof()
    return expr


def parse_type(text: str, file: str = "<input>") -> ast.TypeExpr:
    parser = Parser(token_stream(text, file))
    type_ = parser.type_expr()
    parser.expect_eof()
    return type_


def _formula_of(expr: ast.Expr, span: Span) -> ast.Formula:
    """View a boolean expression in formula position; leading ``not`` and ``=`` are logical."""
    if isinstance(expr, ast.BinOp) and expr.op is ast.BinaryOp.EQ:
        return ast.Eq(expr.left, expr.right, span)
    if isinstance(expr, ast.BoolNot):
        return ast.Not(_formula_of(expr.operand, span), span)
    return ast.Atom(expr, span)
