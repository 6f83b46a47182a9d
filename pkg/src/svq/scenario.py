"""Scenario DSL: parsing, declaration-time checking and pretty-printing.

A scenario is a flat sequence of declarations, steps and queries, executed
in source order by the runner. The concrete grammar:

    scenario  := (decl | step | query)*
    decl      := "state" NAME "=" vector
               | "prop" NAME "=" "span" "(" vector ("," vector)* ")"
               | "formula" NAME "=" boolexpr
    step      := "record" "at" INT
               | "clone" NAME "->" NAME
               | "unclone" NAME "blank" NAME
               | "blackhole" NAME
               | "evolve" NAME "by" matrix
               | "reconstruct" ["p" NUMBER]
    query     := "eval" NAME "in" NAME
               | "super" NAME
               | "check-past"
               | "feasible" NAME NAME
    vector    := "[" num ("," num)* "]"
    matrix    := "[" vector ("," vector)* "]"
    boolexpr  := or ("->" boolexpr)?          right associative
    or        := and ("or" and)*
    and       := unary ("and" unary)*
    unary     := "not" unary | "(" boolexpr ")" | NAME

Numbers are reals (decimals, integer fractions "a/b", or the "a/sqrt(b)"
sugar) optionally combined with an imaginary literal: "0.5+0.5i", "1i",
"1/sqrt(2)-0.5i". '#' starts a comment running to end of line.

parse_scenario also performs declaration-time checking: names must be
declared before use and be unique, vectors must be valid states, and every
dimension in the scenario must agree. All diagnostics carry a 1-based
line and column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .config import config
from .errors import (
    BadProbability,
    DimensionMismatch,
    DuplicateIdentifier,
    ScenarioSyntaxError,
    SvqError,
    UnknownIdentifier,
)
from .formulas import And, Atom, Formula, Implies, Not, Or, formula_atoms
from .hilbert import make_state
from .lattice import span_subspace

_KEYWORDS = frozenset(
    "state prop formula span record at clone unclone blank blackhole evolve by "
    "reconstruct eval in super feasible not and or sqrt".split()
)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class ScenarioConfig:
    """Run-time knobs; populated from defaults and CLI overrides."""

    tol: float = config.tol
    seed: int = 0
    p_one: float = 0.5


@dataclass(frozen=True)
class StateDecl:
    name: str
    components: tuple[complex, ...]
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class PropDecl:
    name: str
    vectors: tuple[tuple[complex, ...], ...]
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class FormulaDecl:
    name: str
    body: Formula
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class RecordStep:
    at: int
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class CloneStep:
    source: str
    target: str
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class UncloneStep:
    cloned: str
    blank: str
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class BlackholeStep:
    state: str
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class EvolveStep:
    state: str
    matrix: tuple[tuple[complex, ...], ...]
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class ReconstructStep:
    p_one: float | None = None
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class EvalQuery:
    state: str
    prop: str
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class SuperQuery:
    formula: str
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class CheckPastQuery:
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


@dataclass(frozen=True)
class FeasibleQuery:
    first: str
    second: str
    line: int = field(compare=False, default=0)
    col: int = field(compare=False, default=0)


Declaration = Union[StateDecl, PropDecl, FormulaDecl]
Step = Union[RecordStep, CloneStep, UncloneStep, BlackholeStep, EvolveStep, ReconstructStep]
Query = Union[EvalQuery, SuperQuery, CheckPastQuery, FeasibleQuery]
ScenarioItem = Union[Declaration, Step, Query]


@dataclass(frozen=True)
class Scenario:
    items: tuple[ScenarioItem, ...]
    config: ScenarioConfig = ScenarioConfig()

    @property
    def declarations(self) -> tuple[Declaration, ...]:
        return tuple(i for i in self.items if isinstance(i, (StateDecl, PropDecl, FormulaDecl)))

    @property
    def steps(self) -> tuple[Step, ...]:
        return tuple(
            i
            for i in self.items
            if isinstance(
                i, (RecordStep, CloneStep, UncloneStep, BlackholeStep, EvolveStep, ReconstructStep)
            )
        )

    @property
    def queries(self) -> tuple[Query, ...]:
        return tuple(
            i
            for i in self.items
            if isinstance(i, (EvalQuery, SuperQuery, CheckPastQuery, FeasibleQuery))
        )


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    value: object
    line: int
    col: int


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos, line, col = 0, 1, 1
    n = len(text)

    def bump(count: int) -> None:
        nonlocal pos, line, col
        for _ in range(count):
            if text[pos] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            pos += 1

    while pos < n:
        c = text[pos]
        if c in " \t\r\n":
            bump(1)
            continue
        if c == "#":
            while pos < n and text[pos] != "\n":
                bump(1)
            continue
        start_line, start_col = line, col
        if text.startswith("check-past", pos) and (
            pos + 10 >= n or not (_is_ident_char(text[pos + 10]) or text[pos + 10] == "-")
        ):
            tokens.append(_Token("check-past", "check-past", None, start_line, start_col))
            bump(10)
            continue
        if _is_ident_start(c):
            end = pos
            while end < n and _is_ident_char(text[end]):
                end += 1
            word = text[pos:end]
            tokens.append(_Token("ident", word, word, start_line, start_col))
            bump(end - pos)
            continue
        if c.isdigit():
            end = pos
            while end < n and text[end].isdigit():
                end += 1
            is_float = False
            if end < n and text[end] == "." and end + 1 < n and text[end + 1].isdigit():
                is_float = True
                end += 1
                while end < n and text[end].isdigit():
                    end += 1
            if end < n and text[end] in "eE":
                probe = end + 1
                if probe < n and text[probe] in "+-":
                    probe += 1
                if probe < n and text[probe].isdigit():
                    is_float = True
                    end = probe
                    while end < n and text[end].isdigit():
                        end += 1
            literal = text[pos:end]
            if end < n and text[end] == "i" and (end + 1 >= n or not _is_ident_char(text[end + 1])):
                tokens.append(_Token("imag", literal + "i", float(literal), start_line, start_col))
                bump(end + 1 - pos)
                continue
            if is_float:
                tokens.append(_Token("float", literal, float(literal), start_line, start_col))
            else:
                tokens.append(_Token("int", literal, int(literal), start_line, start_col))
            bump(end - pos)
            continue
        if text.startswith("->", pos):
            tokens.append(_Token("->", "->", None, start_line, start_col))
            bump(2)
            continue
        if c in "[](),=/+-":
            tokens.append(_Token(c, c, None, start_line, start_col))
            bump(1)
            continue
        raise ScenarioSyntaxError(f"unexpected character {c!r}", start_line, start_col)
    tokens.append(_Token("eof", "", None, line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def accept(self, kind: str) -> _Token | None:
        if self.peek().kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ScenarioSyntaxError(
                f"unexpected {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
                tok.line,
                tok.col,
                expected=(expected,),
            )
        return self.advance()

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == word

    def expect_keyword(self, word: str) -> _Token:
        tok = self.peek()
        if not self.at_keyword(word):
            raise ScenarioSyntaxError(
                f"unexpected {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
                tok.line,
                tok.col,
                expected=(f"'{word}'",),
            )
        return self.advance()

    def parse_name(self) -> str:
        tok = self.expect("ident", "identifier")
        if tok.text in _KEYWORDS:
            raise ScenarioSyntaxError(
                f"{tok.text!r} is a reserved word", tok.line, tok.col, expected=("identifier",)
            )
        return tok.text

    # numbers -------------------------------------------------------------

    def _parse_signed_part(self) -> tuple[float, bool]:
        negate = False
        if self.accept("-"):
            negate = True
        else:
            self.accept("+")
        tok = self.peek()
        if tok.kind == "imag":
            self.advance()
            value = float(tok.value)
            return (-value if negate else value, True)
        if tok.kind in ("int", "float"):
            self.advance()
            value = float(tok.value)
            if tok.kind == "int" and self.peek().kind == "/":
                self.advance()
                nxt = self.peek()
                if nxt.kind == "int":
                    self.advance()
                    if nxt.value == 0:
                        raise ScenarioSyntaxError("zero denominator", nxt.line, nxt.col)
                    value /= float(nxt.value)
                elif nxt.kind == "ident" and nxt.text == "sqrt":
                    self.advance()
                    self.expect("(", "'('")
                    arg = self.expect("int", "integer")
                    self.expect(")", "')'")
                    if arg.value == 0:
                        raise ScenarioSyntaxError("zero under sqrt", arg.line, arg.col)
                    value /= math.sqrt(float(arg.value))
                else:
                    raise ScenarioSyntaxError(
                        f"unexpected {nxt.text!r}",
                        nxt.line,
                        nxt.col,
                        expected=("integer denominator", "'sqrt('"),
                    )
            return (-value if negate else value, False)
        raise ScenarioSyntaxError(
            f"unexpected {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
            tok.line,
            tok.col,
            expected=("number",),
        )

    def parse_number(self) -> complex:
        value, is_imag = self._parse_signed_part()
        if is_imag:
            return complex(0.0, value)
        if self.peek().kind in ("+", "-") and self.peek(1).kind == "imag":
            sign = self.advance()
            tail = self.advance()
            imag = float(tail.value)
            return complex(value, imag if sign.kind == "+" else -imag)
        return complex(value, 0.0)

    def parse_vector(self) -> tuple[complex, ...]:
        self.expect("[", "'['")
        numbers = [self.parse_number()]
        while self.accept(","):
            numbers.append(self.parse_number())
        self.expect("]", "']' or ','")
        return tuple(numbers)

    def parse_matrix(self) -> tuple[tuple[complex, ...], ...]:
        self.expect("[", "'['")
        rows = [self.parse_vector()]
        while self.accept(","):
            rows.append(self.parse_vector())
        self.expect("]", "']' or ','")
        return tuple(rows)

    # formulas ------------------------------------------------------------

    def parse_boolexpr(self) -> Formula:
        left = self._parse_or()
        if self.accept("->"):
            return Implies(left, self.parse_boolexpr())
        return left

    def _parse_or(self) -> Formula:
        node = self._parse_and()
        while self.at_keyword("or"):
            self.advance()
            node = Or(node, self._parse_and())
        return node

    def _parse_and(self) -> Formula:
        node = self._parse_unary()
        while self.at_keyword("and"):
            self.advance()
            node = And(node, self._parse_unary())
        return node

    def _parse_unary(self) -> Formula:
        if self.at_keyword("not"):
            self.advance()
            return Not(self._parse_unary())
        if self.accept("("):
            node = self.parse_boolexpr()
            self.expect(")", "')'")
            return node
        return Atom(self.parse_name())

    # items ---------------------------------------------------------------

    def parse_item(self) -> ScenarioItem:
        tok = self.peek()
        if tok.kind == "check-past":
            self.advance()
            return CheckPastQuery(line=tok.line, col=tok.col)
        if tok.kind != "ident":
            raise ScenarioSyntaxError(
                f"unexpected {tok.text!r}" if tok.kind != "eof" else "unexpected end of input",
                tok.line,
                tok.col,
                expected=("declaration", "step", "query"),
            )
        handlers = {
            "state": self._parse_state,
            "prop": self._parse_prop,
            "formula": self._parse_formula,
            "record": self._parse_record,
            "clone": self._parse_clone,
            "unclone": self._parse_unclone,
            "blackhole": self._parse_blackhole,
            "evolve": self._parse_evolve,
            "reconstruct": self._parse_reconstruct,
            "eval": self._parse_eval,
            "super": self._parse_super,
            "feasible": self._parse_feasible,
        }
        handler = handlers.get(tok.text)
        if handler is None:
            raise ScenarioSyntaxError(
                f"unexpected {tok.text!r}",
                tok.line,
                tok.col,
                expected=("declaration", "step", "query"),
            )
        return handler()

    def _parse_state(self) -> StateDecl:
        kw = self.advance()
        name = self.parse_name()
        self.expect("=", "'='")
        return StateDecl(name, self.parse_vector(), line=kw.line, col=kw.col)

    def _parse_prop(self) -> PropDecl:
        kw = self.advance()
        name = self.parse_name()
        self.expect("=", "'='")
        self.expect_keyword("span")
        self.expect("(", "'('")
        vectors = [self.parse_vector()]
        while self.accept(","):
            vectors.append(self.parse_vector())
        self.expect(")", "')' or ','")
        return PropDecl(name, tuple(vectors), line=kw.line, col=kw.col)

    def _parse_formula(self) -> FormulaDecl:
        kw = self.advance()
        name = self.parse_name()
        self.expect("=", "'='")
        return FormulaDecl(name, self.parse_boolexpr(), line=kw.line, col=kw.col)

    def _parse_record(self) -> RecordStep:
        kw = self.advance()
        self.expect_keyword("at")
        tick = self.expect("int", "integer tick")
        return RecordStep(int(tick.value), line=kw.line, col=kw.col)

    def _parse_clone(self) -> CloneStep:
        kw = self.advance()
        source = self.parse_name()
        self.expect("->", "'->'")
        target = self.parse_name()
        return CloneStep(source, target, line=kw.line, col=kw.col)

    def _parse_unclone(self) -> UncloneStep:
        kw = self.advance()
        cloned = self.parse_name()
        self.expect_keyword("blank")
        blank = self.parse_name()
        return UncloneStep(cloned, blank, line=kw.line, col=kw.col)

    def _parse_blackhole(self) -> BlackholeStep:
        kw = self.advance()
        return BlackholeStep(self.parse_name(), line=kw.line, col=kw.col)

    def _parse_evolve(self) -> EvolveStep:
        kw = self.advance()
        name = self.parse_name()
        self.expect_keyword("by")
        return EvolveStep(name, self.parse_matrix(), line=kw.line, col=kw.col)

    def _parse_reconstruct(self) -> ReconstructStep:
        kw = self.advance()
        p_one: float | None = None
        if self.at_keyword("p"):
            self.advance()
            tok = self.peek()
            if tok.kind not in ("int", "float"):
                raise ScenarioSyntaxError(
                    f"unexpected {tok.text!r}", tok.line, tok.col, expected=("probability",)
                )
            self.advance()
            p_one = float(tok.value)
        return ReconstructStep(p_one, line=kw.line, col=kw.col)

    def _parse_eval(self) -> EvalQuery:
        kw = self.advance()
        state = self.parse_name()
        self.expect_keyword("in")
        prop = self.parse_name()
        return EvalQuery(state, prop, line=kw.line, col=kw.col)

    def _parse_super(self) -> SuperQuery:
        kw = self.advance()
        return SuperQuery(self.parse_name(), line=kw.line, col=kw.col)

    def _parse_feasible(self) -> FeasibleQuery:
        kw = self.advance()
        first = self.parse_name()
        second = self.parse_name()
        return FeasibleQuery(first, second, line=kw.line, col=kw.col)


# ---------------------------------------------------------------------------
# Declaration-time checking


def _positioned(err: SvqError, line: int, col: int) -> SvqError:
    return type(err)(f"{line}:{col}: {err}")


def _dimension_error(item: ScenarioItem, got: int, want: int) -> DimensionMismatch:
    return DimensionMismatch(
        f"{item.line}:{item.col}: dimension {got} conflicts with scenario dimension {want}"
    )


def _check_scenario(scenario: Scenario) -> None:
    states: dict[str, int] = {}
    props: dict[str, int] = {}
    formulas: set[str] = set()
    dim: int | None = None

    def declare(name: str, item: ScenarioItem) -> None:
        if name in states or name in props or name in formulas:
            raise DuplicateIdentifier(f"{item.line}:{item.col}: {name!r} is already declared")

    def need(table, name: str, what: str, item: ScenarioItem) -> None:
        if name not in table:
            raise UnknownIdentifier(f"{item.line}:{item.col}: no {what} named {name!r}")

    for item in scenario.items:
        if isinstance(item, StateDecl):
            declare(item.name, item)
            try:
                make_state(item.components)
            except SvqError as err:
                raise _positioned(err, item.line, item.col) from err
            if dim is None:
                dim = len(item.components)
            elif len(item.components) != dim:
                raise _dimension_error(item, len(item.components), dim)
            states[item.name] = dim
        elif isinstance(item, PropDecl):
            declare(item.name, item)
            length = len(item.vectors[0])
            if dim is None:
                dim = length
            elif length != dim:
                raise _dimension_error(item, length, dim)
            try:
                span_subspace(item.vectors, dim)
            except SvqError as err:
                raise _positioned(err, item.line, item.col) from err
            props[item.name] = dim
        elif isinstance(item, FormulaDecl):
            declare(item.name, item)
            for atom in formula_atoms(item.body):
                need(props, atom, "proposition", item)
            formulas.add(item.name)
        elif isinstance(item, CloneStep):
            need(states, item.source, "state", item)
            need(states, item.target, "state", item)
        elif isinstance(item, UncloneStep):
            need(states, item.cloned, "state", item)
            need(states, item.blank, "state", item)
        elif isinstance(item, BlackholeStep):
            need(states, item.state, "state", item)
        elif isinstance(item, EvolveStep):
            need(states, item.state, "state", item)
            rows = item.matrix
            if dim is None or len(rows) != dim or any(len(r) != dim for r in rows):
                raise _dimension_error(item, len(rows), dim if dim is not None else 0)
        elif isinstance(item, ReconstructStep):
            if item.p_one is not None and not 0.0 <= item.p_one <= 1.0:
                raise BadProbability(
                    f"{item.line}:{item.col}: p must lie in [0, 1], got {item.p_one!r}"
                )
        elif isinstance(item, EvalQuery):
            need(states, item.state, "state", item)
            need(props, item.prop, "proposition", item)
        elif isinstance(item, SuperQuery):
            need(formulas, item.formula, "formula", item)
        elif isinstance(item, FeasibleQuery):
            need(states, item.first, "state", item)
            need(states, item.second, "state", item)


def parse_scenario(text: str) -> Scenario:
    """Parse and check scenario text, returning the AST.

    Raises ScenarioSyntaxError with position and expected tokens on bad
    syntax, and the declaration-time errors (UnknownIdentifier,
    DuplicateIdentifier, DimensionMismatch, ZeroVector, ...) with a
    line:column prefix on semantic problems.
    """
    parser = _Parser(_tokenize(text))
    items: list[ScenarioItem] = []
    while parser.peek().kind != "eof":
        items.append(parser.parse_item())
    scenario = Scenario(tuple(items))
    _check_scenario(scenario)
    return scenario


# ---------------------------------------------------------------------------
# Pretty-printer


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_num(z: complex) -> str:
    if z.imag == 0:
        return _fmt_real(z.real)
    if z.real == 0:
        return _fmt_real(z.imag) + "i"
    sign = "+" if z.imag > 0 else "-"
    return f"{_fmt_real(z.real)}{sign}{_fmt_real(abs(z.imag))}i"


def _fmt_vector(v: tuple[complex, ...]) -> str:
    return "[" + ", ".join(_fmt_num(z) for z in v) + "]"


def format_formula(f: Formula) -> str:
    """Render a formula with minimal parentheses; reparsing restores the AST."""

    def go(node: Formula, min_prec: int) -> str:
        if isinstance(node, Atom):
            return node.name
        if isinstance(node, Not):
            rendered, prec = "not " + go(node.operand, 4), 4
        elif isinstance(node, And):
            rendered, prec = go(node.left, 3) + " and " + go(node.right, 4), 3
        elif isinstance(node, Or):
            rendered, prec = go(node.left, 2) + " or " + go(node.right, 3), 2
        elif isinstance(node, Implies):
            rendered, prec = go(node.left, 2) + " -> " + go(node.right, 1), 1
        else:
            raise TypeError(f"not a formula node: {node!r}")
        return f"({rendered})" if prec < min_prec else rendered

    return go(f, 0)


def format_item(item: ScenarioItem) -> str:
    if isinstance(item, StateDecl):
        return f"state {item.name} = {_fmt_vector(item.components)}"
    if isinstance(item, PropDecl):
        vectors = ", ".join(_fmt_vector(v) for v in item.vectors)
        return f"prop {item.name} = span({vectors})"
    if isinstance(item, FormulaDecl):
        return f"formula {item.name} = {format_formula(item.body)}"
    if isinstance(item, RecordStep):
        return f"record at {item.at}"
    if isinstance(item, CloneStep):
        return f"clone {item.source} -> {item.target}"
    if isinstance(item, UncloneStep):
        return f"unclone {item.cloned} blank {item.blank}"
    if isinstance(item, BlackholeStep):
        return f"blackhole {item.state}"
    if isinstance(item, EvolveStep):
        rows = ", ".join(_fmt_vector(r) for r in item.matrix)
        return f"evolve {item.state} by [{rows}]"
    if isinstance(item, ReconstructStep):
        if item.p_one is None:
            return "reconstruct"
        return f"reconstruct p {_fmt_real(item.p_one)}"
    if isinstance(item, EvalQuery):
        return f"eval {item.state} in {item.prop}"
    if isinstance(item, SuperQuery):
        return f"super {item.formula}"
    if isinstance(item, CheckPastQuery):
        return "check-past"
    if isinstance(item, FeasibleQuery):
        return f"feasible {item.first} {item.second}"
    raise TypeError(f"not a scenario item: {item!r}")


def format_scenario(scenario: Scenario) -> str:
    """Canonical text for a scenario; parse(format(s)) equals s."""
    return "\n".join(format_item(item) for item in scenario.items) + "\n"
