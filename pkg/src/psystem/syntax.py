"""Object-level syntax of system P.

Terms of type 1 are ``f^n 0`` or ``f^n x`` for a type-1 variable ``x``; every
higher-type sign is a variable.  Formulas are built from elementary formulas
``a(b)`` with negation, disjunction and generalization only.  Implication and
conjunction are abbreviations and never appear in the AST.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "VarSym", "Term", "Formula", "Apply", "Not", "Or", "ForAll", "MarkKind",
    "Zero", "Succ", "Var", "Numeral", "ZERO",
    "x1", "x2", "x3", "X1", "X2", "X3",
    "FormulaSyntaxError", "TypeDisciplineError", "OpenTermError",
    "parse_formula", "parse_term", "render_formula", "render_term",
    "free_variables", "classify_mark", "substitute", "mk_implication",
    "mk_conjunction", "match_implication_form", "is_self_negation_implication",
    "formula_size", "subformulas", "RENDER_BUDGET",
]

# numerals with more signs than this render as Z[n]
RENDER_BUDGET = 32


class FormulaSyntaxError(SyntaxError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


class TypeDisciplineError(TypeError):
    """An elementary formula or connective applied to arguments of the wrong type."""


class OpenTermError(ValueError):
    """A substitutend contains free variables."""


@dataclass(frozen=True, order=True)
class VarSym:
    index: int
    type_level: int = 1

    def __post_init__(self):
        if self.index < 1 or self.type_level < 1:
            raise ValueError(f"bad variable {self.index}.{self.type_level}")

    def __str__(self):
        if self.type_level == 1:
            return f"x{self.index}"
        if self.type_level == 2:
            return f"X{self.index}"
        return f"v{self.index}.{self.type_level}"


x1, x2, x3 = VarSym(1, 1), VarSym(2, 1), VarSym(3, 1)
X1, X2, X3 = VarSym(1, 2), VarSym(2, 2), VarSym(3, 2)


@dataclass(frozen=True)
class Term:
    """``succ`` applications of f over ``0`` (var is None) or over a type-1 variable.

    The repeat count is an arbitrary-precision int, so numerals with millions
    of signs cost nothing until someone asks for their sign sequence.
    """

    succ: int = 0
    var: VarSym | None = None

    def __post_init__(self):
        if self.succ < 0:
            raise ValueError("negative successor count")
        if self.var is not None and self.var.type_level != 1:
            raise TypeDisciplineError(f"{self.var} is not a type-1 variable")

    @property
    def is_closed(self) -> bool:
        return self.var is None

    def __str__(self):
        return render_term(self)


ZERO = Term()


def Zero() -> Term:
    return ZERO


def Succ(t: Term) -> Term:
    return Term(t.succ + 1, t.var)


def Var(v: VarSym) -> Term:
    return Term(0, v)


def Numeral(n: int) -> Term:
    return Term(n)


class Formula:
    __slots__ = ()

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Apply(Formula):
    fn: VarSym
    arg: Union[Term, VarSym]

    def __post_init__(self):
        level = self.fn.type_level
        if level < 2:
            raise TypeDisciplineError(f"{self.fn} has type 1 and cannot be applied")
        arg = self.arg
        if level == 2:
            if isinstance(arg, VarSym):
                if arg.type_level != 1:
                    raise TypeDisciplineError(f"{self.fn}({arg}): argument must have type 1")
                object.__setattr__(self, "arg", Term(0, arg))
            elif not isinstance(arg, Term):
                raise TypeDisciplineError(f"{self.fn} expects a term, got {type(arg).__name__}")
        elif not (isinstance(arg, VarSym) and arg.type_level == level - 1):
            raise TypeDisciplineError(f"{self.fn} expects a variable of type {level - 1}")


def _need_formula(*parts):
    for p in parts:
        if not isinstance(p, Formula):
            raise TypeDisciplineError(f"connective applied to {type(p).__name__}, not a formula")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def __post_init__(self):
        _need_formula(self.body)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def __post_init__(self):
        _need_formula(self.left, self.right)


@dataclass(frozen=True)
class ForAll(Formula):
    var: VarSym
    body: Formula

    def __post_init__(self):
        if not isinstance(self.var, VarSym):
            raise TypeDisciplineError("quantifier must bind a variable")
        _need_formula(self.body)


class MarkKind(enum.Enum):
    SENTENCE = "sentence"
    CLASSMARK = "classmark"
    RELATIONMARK = "relationmark"


# ---------------------------------------------------------------- abbreviations

def mk_implication(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def mk_conjunction(a: Formula, b: Formula) -> Formula:
    return Not(Or(Not(a), Not(b)))


def match_implication_form(f: Formula):
    """Return ``(antecedent, consequent)`` if ``f`` is ``~a | b``, else None."""
    if isinstance(f, Or) and isinstance(f.left, Not):
        return f.left.body, f.right
    return None


def is_self_negation_implication(f: Formula) -> bool:
    """True for the shape ``a -> ~a``."""
    m = match_implication_form(f)
    return m is not None and m[1] == Not(m[0])


# ---------------------------------------------------------------- queries

def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, Or):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, ForAll):
        yield from subformulas(f.body)


def _term_size(t: Term) -> int:
    return t.succ + 1


def formula_size(f: Formula | Term) -> int:
    """Number of primitive signs, counting the parentheses of the sign sequence.

    Layouts: ``a ( b )``, ``~ ( A )``, ``( A ) | ( B )``, ``x all ( A )``.
    """
    if isinstance(f, Term):
        return _term_size(f)
    if isinstance(f, Apply):
        return 3 + (_term_size(f.arg) if isinstance(f.arg, Term) else 1)
    if isinstance(f, Not):
        return 3 + formula_size(f.body)
    if isinstance(f, Or):
        return 5 + formula_size(f.left) + formula_size(f.right)
    if isinstance(f, ForAll):
        return 4 + formula_size(f.body)
    raise TypeError(f"not a formula: {f!r}")


def _free(f, bound: frozenset, out: dict):
    if isinstance(f, Apply):
        for v in (f.fn, f.arg.var if isinstance(f.arg, Term) else f.arg):
            if v is not None and v not in bound:
                out.setdefault(v, None)
    elif isinstance(f, Not):
        _free(f.body, bound, out)
    elif isinstance(f, Or):
        _free(f.left, bound, out)
        _free(f.right, bound, out)
    elif isinstance(f, ForAll):
        _free(f.body, bound | {f.var}, out)
    elif isinstance(f, Term):
        if f.var is not None and f.var not in bound:
            out.setdefault(f.var, None)


def free_variables(f: Formula | Term) -> tuple[VarSym, ...]:
    """Free variables in order of first occurrence."""
    out: dict = {}
    _free(f, frozenset(), out)
    return tuple(out)


def classify_mark(f: Formula) -> MarkKind:
    n = len(free_variables(f))
    if n == 0:
        return MarkKind.SENTENCE
    if n == 1:
        return MarkKind.CLASSMARK
    return MarkKind.RELATIONMARK


def substitute(f: Formula | Term, v: VarSym, t: Term):
    """Replace every free occurrence of ``v`` in ``f`` by the closed term ``t``."""
    if not isinstance(t, Term):
        raise TypeDisciplineError("substitutend must be a term")
    if not t.is_closed:
        raise OpenTermError(f"substitutend {render_term(t)} is not closed")
    if v.type_level != 1:
        raise TypeDisciplineError(f"cannot substitute a term for {v}")
    return _subst(f, v, t)


def _subst(f, v, t):
    if isinstance(f, Term):
        if f.var == v:
            return Term(f.succ + t.succ, None)
        return f
    if isinstance(f, Apply):
        if isinstance(f.arg, Term) and f.arg.var == v:
            return Apply(f.fn, _subst(f.arg, v, t))
        return f
    if isinstance(f, Not):
        body = _subst(f.body, v, t)
        return f if body is f.body else Not(body)
    if isinstance(f, Or):
        left, right = _subst(f.left, v, t), _subst(f.right, v, t)
        return f if (left is f.left and right is f.right) else Or(left, right)
    if isinstance(f, ForAll):
        if f.var == v:
            return f
        body = _subst(f.body, v, t)
        return f if body is f.body else ForAll(f.var, body)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------- rendering

def render_term(t: Term) -> str:
    if t.var is None and t.succ + 1 > RENDER_BUDGET:
        return f"Z[{t.succ}]"
    return "f" * t.succ + ("0" if t.var is None else str(t.var))


def render_formula(f: Formula) -> str:
    if isinstance(f, Apply):
        arg = render_term(f.arg) if isinstance(f.arg, Term) else str(f.arg)
        return f"{f.fn}({arg})"
    if isinstance(f, Not):
        return "~" + render_formula(f.body)
    if isinstance(f, Or):
        return f"({render_formula(f.left)} | {render_formula(f.right)})"
    if isinstance(f, ForAll):
        return f"all {f.var}: {render_formula(f.body)}"
    if isinstance(f, Term):
        return render_term(f)
    raise TypeError(f"cannot render {f!r}")


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<op>->|[()|&~:])|(?P<all>all)(?![\w.])|Z\[(?P<z>\d+)\]"
    r"|v(?P<vk>\d+)\.(?P<vn>\d+)|(?P<xv>[xX])(?P<xk>\d+)|(?P<zero>0)|(?P<f>f))"
)


def _tokenize(text: str):
    pos, toks = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("op"):
            tok = ("op", m.group("op"))
        elif m.group("all"):
            tok = ("all", None)
        elif m.group("z") is not None:
            tok = ("num", int(m.group("z")))
        elif m.group("vk") is not None:
            tok = ("var", VarSym(int(m.group("vk")), int(m.group("vn"))))
        elif m.group("xv"):
            k = int(m.group("xk"))
            if k < 1:
                raise FormulaSyntaxError("variable index must be positive", start, text)
            tok = ("var", VarSym(k, 1 if m.group("xv") == "x" else 2))
        elif m.group("zero"):
            tok = ("zero", None)
        else:
            tok = ("f", None)
        toks.append((tok[0], tok[1], start))
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.next()
        if tok[0] != "op" or tok[1] != value:
            self.fail(f"expected {value!r}", tok)
        return tok

    def term(self) -> Term:
        n = 0
        while self.peek()[0] == "f":
            self.next()
            n += 1
        kind, val, _ = tok = self.next()
        if kind == "zero":
            return Term(n)
        if kind == "num":
            return Term(n + val)
        if kind == "var":
            if val.type_level != 1:
                raise TypeDisciplineError(f"{val} is not a term of type 1 (position {tok[2]})")
            return Term(n, val)
        self.fail("expected a term", tok)

    def formula(self) -> Formula:
        kind, val, _ = tok = self.peek()
        if kind == "op" and val == "~":
            self.next()
            return Not(self.formula())
        if kind == "op" and val == "(":
            self.next()
            left = self.formula()
            result = self.binary_tail(left)
            if result is None:
                self.fail("expected '|', '->' or '&'")
            self.expect(")")
            return result
        if kind == "all":
            self.next()
            vtok = self.next()
            if vtok[0] != "var":
                self.fail("expected a variable after 'all'", vtok)
            self.expect(":")
            return ForAll(vtok[1], self.formula())
        if kind == "var":
            self.next()
            if val.type_level == 1:
                raise TypeDisciplineError(f"{val} has type 1 and cannot be applied (position {tok[2]})")
            self.expect("(")
            try:
                if val.type_level == 2:
                    arg = self.term()
                else:
                    atok = self.next()
                    if atok[0] != "var":
                        self.fail("expected a variable argument", atok)
                    arg = atok[1]
                atom = Apply(val, arg)
            except TypeDisciplineError as e:
                raise TypeDisciplineError(f"{e} at position {tok[2]}") from None
            self.expect(")")
            return atom
        self.fail("expected a formula", tok)

    def binary_tail(self, left):
        kind, val, _ = self.peek()
        if kind != "op" or val not in ("|", "->", "&"):
            return None
        self.next()
        right = self.formula()
        if val == "|":
            return Or(left, right)
        if val == "->":
            return mk_implication(left, right)
        return mk_conjunction(left, right)


def parse_formula(text: str) -> Formula:
    """Parse surface syntax; ``->`` and ``&`` are expanded on the way in.

    A single unparenthesized binary connective is accepted at top level, so
    ``X1(x3) -> ~X1(x3)`` parses as if it were wrapped in parentheses.
    """
    p = _Parser(text)
    f = p.formula()
    top = p.binary_tail(f)
    if top is not None:
        f = top
    if p.peek()[0] != "eof":
        p.fail("trailing input")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "eof":
        p.fail("trailing input")
    return t
