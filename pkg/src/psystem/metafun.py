"""Metamathematical functions on Gödel numbers.

These work on sign sequences, never on the syntax tree: Neg, Imp and Con
splice parentheses and connective signs around the argument sequences, and
Sb rewrites the free occurrences of a variable sign found by a private scope
scanner.  Agreement with ``encode`` applied to the syntax-level constructions
is checked in the test-suite, so the two routes have to stay separate.

Any argument that is symbolic, or a result that exceeds the digit budget,
yields a symbolic node instead of an integer.
"""
from __future__ import annotations

from .codec import (
    ALL, CONSTANT_SIGNS, DEFAULT_DIGIT_BUDGET, LPAREN, NEG, OR, RPAREN, SUCC, ZERO_SIGN,
    CodecError, ConNode, EncodeOf, FreeSlot, GnValue, IllFormed, ImpNode, Lit, NegNode,
    Overflow, SbNode, SignSeq, ZNode, as_gn, decode_sequence, is_var_code, sign_of_code, signs,
)

__all__ = [
    "IndexOutOfRange", "seq_length", "seq_item", "seq_concat", "sequence_of",
    "z_meta", "neg_meta", "imp_meta", "con_meta", "sb_meta", "normalize",
    "free_occurrences",
]


class IndexOutOfRange(CodecError, IndexError):
    pass


# ---------------------------------------------------------------- sequence primitives

def seq_length(g: int) -> int:
    return len(decode_sequence(g))


def seq_item(g: int, i: int) -> int:
    """The i-th sign code (1-based) of the sequence numbered ``g``."""
    seq = decode_sequence(g)
    if not 1 <= i <= len(seq):
        raise IndexOutOfRange(f"item {i} of a {len(seq)}-sign sequence")
    for k, code in enumerate(seq.codes(), 1):
        if k == i:
            return code


def seq_concat(g1: int, g2: int, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> int:
    return (decode_sequence(g1) + decode_sequence(g2)).gn(digit_budget)


_S = {c: SignSeq.of([c]) for c in CONSTANT_SIGNS}


def _bracket(seq: SignSeq) -> SignSeq:
    return _S[LPAREN] + seq + _S[RPAREN]


def _neg_seq(a: SignSeq) -> SignSeq:
    return _S[NEG] + _bracket(a)


def _dis_seq(a: SignSeq, b: SignSeq) -> SignSeq:
    return _bracket(a) + _S[OR] + _bracket(b)


def _numeral_seq(n: int) -> SignSeq:
    return SignSeq.from_runs([(SUCC, n), (ZERO_SIGN, 1)])


# ---------------------------------------------------------------- scope scanner

class _Scan:
    """Recursive-descent pass over a run-encoded sequence.

    Records the global position of every variable sign together with whether
    it is free there.  Binding positions (``v all``) are recorded as bound.
    """

    def __init__(self, seq: SignSeq):
        self.runs = seq.runs
        self.ri = 0
        self.off = 0
        self.pos = 0
        self.occ: list = []

    def peek(self):
        return self.runs[self.ri][0] if self.ri < len(self.runs) else None

    def take(self):
        if self.ri >= len(self.runs):
            raise IllFormed("sequence ends prematurely")
        code, count = self.runs[self.ri]
        self.off += 1
        self.pos += 1
        if self.off == count:
            self.ri, self.off = self.ri + 1, 0
        return code

    def skip_run(self, code):
        while self.peek() == code:
            left = self.runs[self.ri][1] - self.off
            self.pos += left
            self.ri, self.off = self.ri + 1, 0

    def need(self, code):
        if self.take() != code:
            raise IllFormed(f"expected sign {code} at position {self.pos}")

    def var_level(self, code):
        if code is None or code in CONSTANT_SIGNS:
            return None
        return sign_of_code(code).type_level

    def note(self, code, bound):
        self.occ.append((self.pos, code, code not in bound))
        self.take()

    def term(self, bound):
        self.skip_run(SUCC)
        code = self.peek()
        if code == ZERO_SIGN:
            self.take()
        elif self.var_level(code) == 1:
            self.note(code, bound)
        else:
            raise IllFormed("expected a type-1 term")

    def formula(self, bound):
        code = self.peek()
        if code == NEG:
            self.take()
            self.need(LPAREN)
            self.formula(bound)
            self.need(RPAREN)
            return
        if code == LPAREN:
            self.take()
            self.formula(bound)
            self.need(RPAREN)
            self.need(OR)
            self.need(LPAREN)
            self.formula(bound)
            self.need(RPAREN)
            return
        level = self.var_level(code)
        if level is None:
            raise IllFormed("expected a formula")
        start = len(self.occ)
        self.note(code, bound)
        nxt = self.take()
        if nxt == ALL:
            self.occ[start] = (self.occ[start][0], code, False)
            self.need(LPAREN)
            self.formula(bound | {code})
            self.need(RPAREN)
            return
        if nxt != LPAREN or level < 2:
            raise IllFormed("variable must be applied or quantified")
        if level == 2:
            self.term(bound)
        elif self.var_level(self.peek()) == level - 1:
            self.note(self.peek(), bound)
        else:
            raise IllFormed("argument has the wrong type")
        self.need(RPAREN)

    def finish(self):
        if self.ri < len(self.runs):
            raise IllFormed("trailing signs")
        return self.occ


def _scan(seq: SignSeq, kind: str):
    s = _Scan(seq)
    if kind == "formula":
        s.formula(frozenset())
    else:
        s.term(frozenset())
    return s.finish()


def _shape(seq: SignSeq) -> tuple[str, list]:
    for kind in ("formula", "term"):
        try:
            return kind, _scan(seq, kind)
        except IllFormed:
            pass
    raise IllFormed(f"neither a formula nor a term: {seq}")


def free_occurrences(seq: SignSeq, code: int) -> list[int]:
    """0-based positions where the variable ``code`` occurs free."""
    _, occ = _shape(seq)
    return [p for p, c, free in occ if c == code and free]


def _splice(seq: SignSeq, positions: list[int], repl: SignSeq) -> SignSeq:
    out, pos, targets = [], 0, iter(positions + [None])
    nxt = next(targets)
    for code, count in seq.runs:
        end = pos + count
        start = pos
        while nxt is not None and nxt < end:
            out.append((code, nxt - start))
            out.extend(repl.runs)
            start = nxt + 1
            nxt = next(targets)
        out.append((code, end - start))
        pos = end
    return SignSeq.from_runs(out)


# ---------------------------------------------------------------- symbolic plumbing

def sequence_of(g, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> SignSeq | None:
    """Run-encoded sign sequence of ``g``, or None when it cannot be formed.

    That happens for free slots and for numerals whose value is itself an
    unmaterializable Gödel number.
    """
    g = as_gn(g)
    if isinstance(g, Lit):
        return decode_sequence(g.value)
    if isinstance(g, EncodeOf):
        return signs(g.obj)
    if isinstance(g, FreeSlot):
        return None
    if isinstance(g, ZNode):
        n = g.count
        if isinstance(n, GnValue):
            n = normalize(n, digit_budget)
            if not isinstance(n, Lit):
                return None
            n = n.value
        return _numeral_seq(n)
    if isinstance(g, NegNode):
        a = sequence_of(g.arg, digit_budget)
        return None if a is None else _neg_seq(a)
    if isinstance(g, (ImpNode, ConNode)):
        a, b = sequence_of(g.left, digit_budget), sequence_of(g.right, digit_budget)
        if a is None or b is None:
            return None
        if isinstance(g, ImpNode):
            return _dis_seq(_neg_seq(a), b)
        return _neg_seq(_dis_seq(_neg_seq(a), _neg_seq(b)))
    if isinstance(g, SbNode):
        x = sequence_of(g.target, digit_budget)
        if x is None:
            return None
        if g.var_code not in x:
            return x
        y = sequence_of(g.replacement, digit_budget)
        if y is None:
            return None
        return _substituted(x, g.var_code, y)
    raise TypeError(f"unknown Gn node {g!r}")


def _substituted(x: SignSeq, code: int, y: SignSeq) -> SignSeq:
    kind, occ = _shape(y)
    if kind != "term" or occ:
        raise IllFormed("substitutend must be a closed term")
    return _splice(x, free_occurrences(x, code), y)


def _concrete(g) -> int | None:
    if isinstance(g, int):
        return g
    if isinstance(g, Lit):
        return g.value
    return None


def _lit_or(seq: SignSeq, fallback: GnValue, digit_budget: int) -> GnValue:
    try:
        return Lit(seq.gn(digit_budget))
    except Overflow:
        return fallback


def _formula_arg(g: int) -> SignSeq:
    seq = decode_sequence(g)
    _scan(seq, "formula")
    return seq


# ---------------------------------------------------------------- Z, Neg, Imp, Con, Sb

def z_meta(n, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> GnValue:
    """Gn of the numeral for ``n``; ``n`` may itself be a (symbolic) Gn."""
    if isinstance(n, Lit):
        n = n.value
    if isinstance(n, GnValue):
        return ZNode(n)
    if n < 0:
        raise ValueError("numerals denote non-negative integers")
    return _lit_or(_numeral_seq(n), ZNode(n), digit_budget)


def neg_meta(g, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> GnValue:
    a = _concrete(g)
    if a is None:
        return NegNode(g)
    return _lit_or(_neg_seq(_formula_arg(a)), NegNode(Lit(a)), digit_budget)


def imp_meta(g1, g2, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> GnValue:
    a, b = _concrete(g1), _concrete(g2)
    if a is None or b is None:
        return ImpNode(as_gn(g1), as_gn(g2))
    seq = _dis_seq(_neg_seq(_formula_arg(a)), _formula_arg(b))
    return _lit_or(seq, ImpNode(Lit(a), Lit(b)), digit_budget)


def con_meta(g1, g2, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> GnValue:
    a, b = _concrete(g1), _concrete(g2)
    if a is None or b is None:
        return ConNode(as_gn(g1), as_gn(g2))
    seq = _neg_seq(_dis_seq(_neg_seq(_formula_arg(a)), _neg_seq(_formula_arg(b))))
    return _lit_or(seq, ConNode(Lit(a), Lit(b)), digit_budget)


def sb_meta(x, v: int, y, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> GnValue:
    """Substitute the closed term numbered ``y`` for free ``v`` in sequence ``x``.

    Returns ``x`` unchanged whenever ``v`` has no free occurrence; that case is
    decided on the sign sequence even when ``x`` is too large to number.
    """
    x, y = as_gn(x), as_gn(y)
    if not is_var_code(v):
        raise IllFormed(f"{v} is not a variable sign")
    node = SbNode(x, v, y)
    xs = sequence_of(x, digit_budget)
    if xs is None:
        return node
    if v not in xs or not free_occurrences(xs, v):
        return x
    ys = sequence_of(y, digit_budget)
    if ys is None:
        return node
    result = _substituted(xs, v, ys)
    try:
        return Lit(result.gn(digit_budget))
    except Overflow:
        pass
    if len(result.runs) <= 2 and result.runs[-1] == (ZERO_SIGN, 1) and result.runs[0][0] in (SUCC, ZERO_SIGN):
        return ZNode(len(result) - 1)
    return node


def normalize(g, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> GnValue:
    """Re-attempt concreteness bottom-up; free slots are left in place."""
    g = as_gn(g)
    if isinstance(g, (Lit, FreeSlot)):
        return g
    if isinstance(g, EncodeOf):
        return _lit_or(signs(g.obj), g, digit_budget)
    if isinstance(g, ZNode):
        n = normalize(g.count, digit_budget) if isinstance(g.count, GnValue) else g.count
        return z_meta(n, digit_budget)
    if isinstance(g, NegNode):
        return neg_meta(normalize(g.arg, digit_budget), digit_budget)
    if isinstance(g, ImpNode):
        return imp_meta(normalize(g.left, digit_budget), normalize(g.right, digit_budget), digit_budget)
    if isinstance(g, ConNode):
        return con_meta(normalize(g.left, digit_budget), normalize(g.right, digit_budget), digit_budget)
    if isinstance(g, SbNode):
        return sb_meta(normalize(g.target, digit_budget), g.var_code,
                       normalize(g.replacement, digit_budget), digit_budget)
    raise TypeError(f"unknown Gn node {g!r}")
