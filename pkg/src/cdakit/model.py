"""SUT models, constraint expressions, and the ``.sut`` model DSL.

A model file looks like::

    # online shop
    model "shop";
    param Address : Domestic | International ;
    param Method  : SameDay | TwoDay | SevenDay ;
    constraint Address = International -> Method != SameDay ;

Operators, loosest first: ``->`` (right associative), ``||``, ``&&``, ``!``.
Atoms are ``param = value`` and ``param != value``; ``true``/``false`` are
constants. Values are referenced by name and stored as 0-based indices in
declaration order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence, Union


class ModelError(ValueError):
    """Raised for malformed or inconsistent models."""


class DSLSyntaxError(ModelError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnsatisfiableModelError(ModelError):
    """The constraints admit no valid test case."""


# -- constraint AST -------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Atom:
    """``param = value`` (or ``param != value`` when ``negated``)."""

    param: int
    value: int
    negated: bool = False


@dataclass(frozen=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    lhs: "Expr"
    rhs: "Expr"


Expr = Union[Const, Atom, Not, And, Or, Implies]
TRUE = Const(True)
FALSE = Const(False)


def evaluate(expr: Expr, row: Sequence[int]) -> bool:
    """Evaluate ``expr`` on a full assignment of value indices."""
    if isinstance(expr, Atom):
        return (row[expr.param] == expr.value) != expr.negated
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Not):
        return not evaluate(expr.arg, row)
    if isinstance(expr, And):
        return all(evaluate(a, row) for a in expr.args)
    if isinstance(expr, Or):
        return any(evaluate(a, row) for a in expr.args)
    if isinstance(expr, Implies):
        return (not evaluate(expr.lhs, row)) or evaluate(expr.rhs, row)
    raise TypeError(f"not a constraint expression: {expr!r}")


# -- model ---------------------------------------------------------------


@dataclass(frozen=True)
class Parameter:
    name: str
    values: tuple

    def __post_init__(self):
        if len(self.values) < 2:
            raise ModelError(f"parameter {self.name!r} needs at least two values")
        if len(set(self.values)) != len(self.values):
            raise ModelError(f"duplicate value name in parameter {self.name!r}")

    @property
    def size(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SutModel:
    """Parameters with finite domains and a list of constraints.

    The constraint formula is the conjunction of ``constraints``; with no
    constraints every full assignment is valid.
    """

    parameters: tuple
    constraints: tuple = ()
    name: str = "model"
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.parameters:
            raise ModelError("a model needs at least one parameter")
        index = {}
        for i, p in enumerate(self.parameters):
            if p.name in index:
                raise ModelError(f"duplicate parameter name {p.name!r}")
            index[p.name] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_domains(cls, sizes: Sequence[int], constraints=(), name="model", names=None):
        """Build a model with parameters ``F1..Fk`` and values ``0..s-1``."""
        names = names or [f"F{i + 1}" for i in range(len(sizes))]
        params = tuple(
            Parameter(n, tuple(str(v) for v in range(s))) for n, s in zip(names, sizes)
        )
        return cls(params, tuple(constraints), name)

    @property
    def k(self) -> int:
        return len(self.parameters)

    @property
    def sizes(self) -> tuple:
        return tuple(p.size for p in self.parameters)

    @property
    def phi(self) -> Expr:
        if not self.constraints:
            return TRUE
        if len(self.constraints) == 1:
            return self.constraints[0]
        return And(tuple(self.constraints))

    @property
    def space_size(self) -> int:
        n = 1
        for s in self.sizes:
            n *= s
        return n

    def param_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ModelError(f"unknown parameter {name!r}") from None

    def value_index(self, param: int, value: str) -> int:
        values = self.parameters[param].values
        if value in values:
            return values.index(value)
        # numeric fallback so that ``F1=0`` works on symbolic domains too
        if re.fullmatch(r"\d+", value) and int(value) < len(values):
            return int(value)
        raise ModelError(
            f"unknown value {value!r} for parameter {self.parameters[param].name!r}"
        )

    def is_valid(self, row: Sequence[int]) -> bool:
        return evaluate(self.phi, row)

    def check_row(self, row: Sequence[int]) -> tuple:
        row = tuple(int(v) for v in row)
        if len(row) != self.k:
            raise ModelError(f"row has {len(row)} entries, expected {self.k}")
        for p, v in zip(self.parameters, row):
            if not 0 <= v < p.size:
                raise ModelError(f"value index {v} out of range for {p.name!r}")
        return row

    def all_rows(self) -> Iterator[tuple]:
        return product(*(range(s) for s in self.sizes))

    def valid_rows(self) -> list:
        """Exhaustive enumeration of the valid test cases, lexicographic order."""
        phi = self.phi
        return [r for r in self.all_rows() if evaluate(phi, r)]

    def row_names(self, row: Sequence[int]) -> list:
        return [p.values[v] for p, v in zip(self.parameters, row)]

    def without_constraints(self) -> "SutModel":
        return SutModel(self.parameters, (), self.name)


class TestArray:
    """An ordered list of test cases over a model; row identity is the index."""

    __test__ = False  # keep pytest from collecting this class

    def __init__(self, model: SutModel, rows=(), check: bool = True):
        self.model = model
        self.rows = tuple(model.check_row(r) for r in rows)
        if check:
            for i, r in enumerate(self.rows):
                if not model.is_valid(r):
                    raise ModelError(f"row {i} {model.row_names(r)} violates the constraints")
        self._columns = None

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def __eq__(self, other):
        return (
            isinstance(other, TestArray)
            and self.model == other.model
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"TestArray(model={self.model.name!r}, size={len(self.rows)})"

    @property
    def all_mask(self) -> int:
        return (1 << len(self.rows)) - 1

    def column_masks(self) -> list:
        """``masks[p][v]`` is the bitmask of rows whose parameter ``p`` equals ``v``."""
        if self._columns is None:
            cols = [[0] * s for s in self.model.sizes]
            for i, r in enumerate(self.rows):
                bit = 1 << i
                for p, v in enumerate(r):
                    cols[p][v] |= bit
            self._columns = cols
        return self._columns

    def mask(self, interaction) -> int:
        """Bitmask of the rows covering ``interaction``."""
        m = self.all_mask
        cols = self.column_masks()
        for p, v in interaction:
            m &= cols[p][v]
            if not m:
                break
        return m

    def without(self, index: int) -> "TestArray":
        rows = self.rows[:index] + self.rows[index + 1:]
        return TestArray(self.model, rows, check=False)


# -- DSL -----------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<op>->|&&|\|\||!=|[=!|:;()])
  | (?P<word>(?:[A-Za-z0-9_$.+]|-(?!>))+)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"model", "param", "constraint", "true", "false"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "string":
            raw = m.group()[1:-1]
            toks.append(_Tok("word", re.sub(r"\\(.)", r"\1", raw), line, pos - line_start + 1))
        elif kind in ("op", "word"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0
        self.params = []
        self.index = {}

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return DSLSyntaxError(msg, tok.line, tok.col)

    def expect(self, text):
        tok = self.next()
        if tok.text != text or tok.kind == "eof":
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def word(self, what):
        tok = self.next()
        if tok.kind != "word":
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def parse(self) -> SutModel:
        name = "model"
        constraints = []
        while self.peek().kind != "eof":
            tok = self.word("'model', 'param' or 'constraint'")
            if tok.text == "model":
                name = self.word("model name").text
                self.expect(";")
            elif tok.text == "param":
                self.parse_param()
            elif tok.text == "constraint":
                if not self.params:
                    raise self.error("constraint before any parameter", tok)
                constraints.append(self.parse_expr())
                self.expect(";")
            else:
                raise self.error(f"unexpected {tok.text!r}", tok)
        if not self.params:
            raise ModelError("model declares no parameters")
        return SutModel(tuple(self.params), tuple(constraints), name)

    def parse_param(self):
        name_tok = self.word("parameter name")
        if name_tok.text in _KEYWORDS:
            raise self.error(f"reserved word {name_tok.text!r} used as parameter name", name_tok)
        if name_tok.text in self.index:
            raise self.error(f"duplicate parameter name {name_tok.text!r}", name_tok)
        self.expect(":")
        values = [self.word("value name").text]
        while self.peek().text == "|":
            self.next()
            values.append(self.word("value name").text)
        self.expect(";")
        if len(values) < 2:
            raise self.error(f"parameter {name_tok.text!r} needs at least two values", name_tok)
        if len(set(values)) != len(values):
            raise self.error(f"duplicate value name in parameter {name_tok.text!r}", name_tok)
        self.index[name_tok.text] = len(self.params)
        self.params.append(Parameter(name_tok.text, tuple(values)))

    def parse_expr(self):
        lhs = self.parse_or()
        if self.peek().text == "->":
            self.next()
            return Implies(lhs, self.parse_expr())
        return lhs

    def parse_or(self):
        args = [self.parse_and()]
        while self.peek().text == "||":
            self.next()
            args.append(self.parse_and())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def parse_and(self):
        args = [self.parse_unary()]
        while self.peek().text == "&&":
            self.next()
            args.append(self.parse_unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def parse_unary(self):
        tok = self.peek()
        if tok.text == "!":
            self.next()
            return Not(self.parse_unary())
        if tok.text == "(":
            self.next()
            e = self.parse_expr()
            self.expect(")")
            return e
        if tok.kind == "word" and tok.text in ("true", "false"):
            self.next()
            return Const(tok.text == "true")
        return self.parse_atom()

    def parse_atom(self):
        ptok = self.word("parameter name")
        if ptok.text not in self.index:
            raise self.error(f"unknown parameter {ptok.text!r}", ptok)
        op = self.next()
        if op.text not in ("=", "!="):
            raise self.error(f"expected '=' or '!=', found {op.text or 'end of input'!r}", op)
        vtok = self.word("value name")
        p = self.index[ptok.text]
        values = self.params[p].values
        if vtok.text not in values:
            raise self.error(f"unknown value {vtok.text!r} for parameter {ptok.text!r}", vtok)
        return Atom(p, values.index(vtok.text), op.text == "!=")


def parse_model(text: str, validate: bool = True) -> SutModel:
    """Parse ``.sut`` text into a :class:`SutModel`.

    With ``validate`` (the default) the model is also checked to admit at
    least one valid test case.
    """
    model = _Parser(text).parse()
    if validate:
        validate_model(model)
    return model


def load_model(path, validate: bool = True) -> SutModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), validate=validate)


def validate_model(model: SutModel) -> None:
    from .constraints import get_oracle

    if get_oracle(model).complete(()) is None:
        raise UnsatisfiableModelError(f"model {model.name!r} admits no valid test case")


_BARE = re.compile(r"(?:[A-Za-z0-9_$.+]|-(?!>))+")


def _quote(name: str) -> str:
    if _BARE.fullmatch(name) and name not in _KEYWORDS:
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_expr(model: SutModel, expr: Expr) -> str:
    if isinstance(expr, Const):
        return "true" if expr.value else "false"
    if isinstance(expr, Atom):
        p = model.parameters[expr.param]
        op = "!=" if expr.negated else "="
        return f"{_quote(p.name)} {op} {_quote(p.values[expr.value])}"
    if isinstance(expr, Not):
        return f"!({format_expr(model, expr.arg)})"
    if isinstance(expr, And):
        return " && ".join(f"({format_expr(model, a)})" for a in expr.args)
    if isinstance(expr, Or):
        return " || ".join(f"({format_expr(model, a)})" for a in expr.args)
    if isinstance(expr, Implies):
        return f"({format_expr(model, expr.lhs)}) -> ({format_expr(model, expr.rhs)})"
    raise TypeError(f"not a constraint expression: {expr!r}")


def format_model(model: SutModel) -> str:
    """Pretty-print ``model`` in the DSL; ``parse_model`` inverts this."""
    lines = [f"model {_quote(model.name)};"]
    for p in model.parameters:
        lines.append(f"param {_quote(p.name)} : {' | '.join(_quote(v) for v in p.values)} ;")
    for c in model.constraints:
        lines.append(f"constraint {format_expr(model, c)} ;")
    return "\n".join(lines) + "\n"
