"""Gödel numbering for system P.

A sign sequence ``c_1 .. c_k`` is numbered ``2^c_1 * 3^c_2 * ... * p_k^c_k``.
Sequences are carried run-length encoded (:class:`SignSeq`) because the
objects of interest contain numerals with millions of ``f`` signs; a Gödel
number is only materialized when it fits the decimal digit budget.
Everything beyond the budget stays a symbolic :class:`GnValue` tree.
"""
from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

from sympy import integer_nthroot, isprime

from .syntax import (
    Apply, Formula, ForAll, Not, Or, Term, TypeDisciplineError, VarSym,
    mk_conjunction, mk_implication, substitute, OpenTermError,
)

DEFAULT_DIGIT_BUDGET = 100_000

ZERO_SIGN, SUCC, NEG, OR, ALL, LPAREN, RPAREN = 1, 3, 5, 7, 9, 11, 13
CONSTANT_SIGNS = {ZERO_SIGN: "0", SUCC: "f", NEG: "~", OR: "|", ALL: "all", LPAREN: "(", RPAREN: ")"}
# variables are numbered by primes after 13, which is the 6th prime
_VAR_PRIME_OFFSET = 6


class CodecError(ValueError):
    pass


class GapInSequence(CodecError):
    pass


class UnknownSign(CodecError):
    pass


class IllFormed(CodecError):
    pass


class TypeMismatch(IllFormed):
    pass


class Overflow(CodecError):
    pass


class NotClosed(CodecError):
    pass


# ---------------------------------------------------------------- primes

class _PrimeTable:
    """Lazily extended list of primes, safe to share between threads."""

    def __init__(self):
        self._lock = threading.Lock()
        self._primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        self._limit = 30

    def _extend_to(self, limit: int):
        with self._lock:
            if limit <= self._limit:
                return
            limit = max(limit, 2 * self._limit)
            sieve = bytearray([1]) * (limit + 1)
            sieve[0:2] = b"\x00\x00"
            for p in range(2, math.isqrt(limit) + 1):
                if sieve[p]:
                    sieve[p * p::p] = bytearray(len(range(p * p, limit + 1, p)))
            self._primes = [i for i in range(limit + 1) if sieve[i]]
            self._limit = limit

    def nth(self, i: int) -> int:
        """The i-th prime, 1-based."""
        while len(self._primes) < i:
            self._extend_to(2 * self._limit)
        return self._primes[i - 1]

    def first(self, n: int) -> list[int]:
        self.nth(n)
        return self._primes[:n]

    def index_of(self, p: int) -> int | None:
        if p > self._limit:
            self._extend_to(p)
        i = bisect.bisect_left(self._primes, p)
        if i < len(self._primes) and self._primes[i] == p:
            return i + 1
        return None


primes = _PrimeTable()


# ---------------------------------------------------------------- sign codes

def var_code(v: VarSym) -> int:
    return primes.nth(v.index + _VAR_PRIME_OFFSET) ** v.type_level


@lru_cache(maxsize=4096)
def sign_of_code(code: int) -> Union[int, VarSym]:
    """Return the constant code itself or the VarSym the code denotes."""
    if code in CONSTANT_SIGNS:
        return code
    if code > 13:
        for n in range(1, code.bit_length() + 1):
            root, exact = integer_nthroot(code, n)
            if root < 17:
                break
            if exact and isprime(root):
                return VarSym(primes.index_of(int(root)) - _VAR_PRIME_OFFSET, n)
    raise UnknownSign(f"{code} is not a sign code")


def sign_name(code: int) -> str:
    s = sign_of_code(code)
    return CONSTANT_SIGNS[s] if isinstance(s, int) else str(s)


def is_var_code(code: int) -> bool:
    try:
        return isinstance(sign_of_code(code), VarSym)
    except UnknownSign:
        return False


# ---------------------------------------------------------------- sequences

@lru_cache(maxsize=64)
def _ten_pow(budget: int) -> int:
    return 10 ** budget


@dataclass(frozen=True)
class SignSeq:
    """Run-length encoded sign sequence: ``runs`` is a tuple of (code, count)."""

    runs: tuple = ()

    @classmethod
    def from_runs(cls, runs: Iterable) -> "SignSeq":
        out: list = []
        for code, count in runs:
            if count <= 0:
                continue
            if out and out[-1][0] == code:
                out[-1] = (code, out[-1][1] + count)
            else:
                out.append((code, count))
        return cls(tuple(out))

    @classmethod
    def of(cls, codes: Iterable[int]) -> "SignSeq":
        return cls.from_runs((c, 1) for c in codes)

    def __len__(self):
        return sum(k for _, k in self.runs)

    def __add__(self, other: "SignSeq") -> "SignSeq":
        return SignSeq.from_runs(self.runs + other.runs)

    def __contains__(self, code) -> bool:
        return any(c == code for c, _ in self.runs)

    def codes(self) -> Iterator[int]:
        for c, k in self.runs:
            for _ in range(k):
                yield c

    def __str__(self):
        parts = []
        for c, k in self.runs:
            name = sign_name(c)
            parts.append(" ".join([name] * k) if k <= 8 else f"{name}^{k}")
        return " ".join(parts)

    def gn(self, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> int:
        if not self.runs:
            raise CodecError("the empty sequence has no Gödel number")
        n = len(self)
        # every exponent is >= 1 and the i-th prime is > i, so Gn >= (n+1)!
        if math.lgamma(n + 2) / math.log(10) > digit_budget + 1:
            raise Overflow(f"a {n}-sign sequence exceeds {digit_budget} digits")
        ps = primes.first(n)
        estimate, i = 0.0, 0
        for c, k in self.runs:
            estimate += c * sum(math.log10(p) for p in ps[i:i + k])
            i += k
        if estimate > digit_budget + 1:
            raise Overflow(f"Gödel number has about {estimate:.0f} digits, budget {digit_budget}")
        g, i = 1, 0
        for c, k in self.runs:
            g *= math.prod(ps[i:i + k]) ** c
            i += k
        if g >= _ten_pow(digit_budget):
            raise Overflow(f"Gödel number exceeds {digit_budget} digits")
        return g


def _term_runs(t: Term, out: list):
    out.append((SUCC, t.succ))
    out.append((ZERO_SIGN, 1) if t.var is None else (var_code(t.var), 1))


def _formula_runs(f, out: list):
    if isinstance(f, Term):
        _term_runs(f, out)
    elif isinstance(f, Apply):
        out.append((var_code(f.fn), 1))
        out.append((LPAREN, 1))
        if isinstance(f.arg, Term):
            _term_runs(f.arg, out)
        else:
            out.append((var_code(f.arg), 1))
        out.append((RPAREN, 1))
    elif isinstance(f, Not):
        out += [(NEG, 1), (LPAREN, 1)]
        _formula_runs(f.body, out)
        out.append((RPAREN, 1))
    elif isinstance(f, Or):
        out.append((LPAREN, 1))
        _formula_runs(f.left, out)
        out += [(RPAREN, 1), (OR, 1), (LPAREN, 1)]
        _formula_runs(f.right, out)
        out.append((RPAREN, 1))
    elif isinstance(f, ForAll):
        out += [(var_code(f.var), 1), (ALL, 1), (LPAREN, 1)]
        _formula_runs(f.body, out)
        out.append((RPAREN, 1))
    else:
        raise TypeError(f"cannot encode {f!r}")


def signs(obj: Formula | Term) -> SignSeq:
    out: list = []
    _formula_runs(obj, out)
    return SignSeq.from_runs(out)


def encode(obj: Formula | Term, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> int:
    return signs(obj).gn(digit_budget)


def _valuation(g: int, p: int) -> tuple[int, int]:
    """Return (e, g / p^e) with p^e the largest power of p dividing g."""
    if g % p:
        return 0, g
    powers = [p]
    while g % (powers[-1] * powers[-1]) == 0:
        powers.append(powers[-1] * powers[-1])
    e = 0
    for i in range(len(powers) - 1, -1, -1):
        while g % powers[i] == 0:
            g //= powers[i]
            e += 1 << i
    return e, g


try:
    import gmpy2
except ImportError:  # pragma: no cover
    gmpy2 = None


def decode_sequence(g: int) -> SignSeq:
    if g < 2:
        raise CodecError(f"{g} is not the Gödel number of a nonempty sequence")
    codes, i = [], 1
    if gmpy2 is not None:
        g = gmpy2.mpz(g)
    while g > 1:
        p = primes.nth(i)
        if gmpy2 is not None:
            g, e = gmpy2.remove(g, p)
            e = int(e)
        else:
            e, g = _valuation(g, p)
        if e == 0:
            raise GapInSequence(f"prime {p} missing but a larger prime divides the number")
        sign_of_code(e)
        codes.append(e)
        i += 1
    return SignSeq.of(codes)


# ---------------------------------------------------------------- sign-sequence parser

class _Cursor:
    """Sign-at-a-time reader over runs; f-runs can be consumed in bulk."""

    def __init__(self, seq: SignSeq):
        self.runs = seq.runs
        self.ri = 0
        self.off = 0

    def peek(self):
        return self.runs[self.ri][0] if self.ri < len(self.runs) else None

    def take(self):
        if self.ri >= len(self.runs):
            raise IllFormed("sequence ends prematurely")
        code, count = self.runs[self.ri]
        self.off += 1
        if self.off == count:
            self.ri, self.off = self.ri + 1, 0
        return code

    def take_all(self, code) -> int:
        n = 0
        while self.peek() == code:
            _, count = self.runs[self.ri]
            n += count - self.off
            self.ri, self.off = self.ri + 1, 0
        return n

    def expect(self, code):
        got = self.take()
        if got != code:
            raise IllFormed(f"expected {sign_name(code)!r}, found {sign_name(got)!r}")

    @property
    def done(self):
        return self.ri >= len(self.runs)


def _read_var(cur: _Cursor) -> VarSym | None:
    code = cur.peek()
    if code is None or code in CONSTANT_SIGNS:
        return None
    s = sign_of_code(code)
    cur.take()
    return s


def _read_term(cur: _Cursor) -> Term:
    n = cur.take_all(SUCC)
    code = cur.peek()
    if code == ZERO_SIGN:
        cur.take()
        return Term(n)
    v = _read_var(cur) if code is not None else None
    if v is None or v.type_level != 1:
        raise IllFormed("expected a term of type 1")
    return Term(n, v)


def _read_formula(cur: _Cursor) -> Formula:
    code = cur.peek()
    if code == NEG:
        cur.take()
        cur.expect(LPAREN)
        body = _read_formula(cur)
        cur.expect(RPAREN)
        return Not(body)
    if code == LPAREN:
        cur.take()
        left = _read_formula(cur)
        cur.expect(RPAREN)
        cur.expect(OR)
        cur.expect(LPAREN)
        right = _read_formula(cur)
        cur.expect(RPAREN)
        return Or(left, right)
    v = _read_var(cur)
    if v is None:
        raise IllFormed("expected a formula" if code is not None else "sequence ends prematurely")
    nxt = cur.take()
    if nxt == ALL:
        cur.expect(LPAREN)
        body = _read_formula(cur)
        cur.expect(RPAREN)
        return ForAll(v, body)
    if nxt != LPAREN or v.type_level < 2:
        raise IllFormed(f"variable {v} must be followed by '(' or 'all'")
    if v.type_level == 2:
        arg = _read_term(cur)
    else:
        arg = _read_var(cur)
        if arg is None:
            raise IllFormed("expected a variable argument")
    cur.expect(RPAREN)
    try:
        return Apply(v, arg)
    except TypeDisciplineError as e:
        raise IllFormed(str(e)) from None


def parse_signs(seq: SignSeq, kind: str = "formula"):
    """Parse a sign sequence as ``formula``, ``term`` or ``any`` (formula first)."""
    if kind == "any":
        try:
            return parse_signs(seq, "formula")
        except IllFormed:
            try:
                return parse_signs(seq, "term")
            except IllFormed:
                raise IllFormed(f"neither a formula nor a term: {seq}") from None
    cur = _Cursor(seq)
    obj = _read_formula(cur) if kind == "formula" else _read_term(cur)
    if not cur.done:
        raise IllFormed("trailing signs after a complete " + kind)
    return obj


def decode(g: int, mode: str = "sequence"):
    """Decode a Gödel number into a code tuple, a Formula or a Term."""
    seq = decode_sequence(g)
    if mode == "sequence":
        return tuple(seq.codes())
    if mode in ("formula", "term"):
        return parse_signs(seq, mode)
    raise ValueError(f"unknown decode mode {mode!r}")


# ---------------------------------------------------------------- symbolic Gödel numbers

class GnValue:
    __slots__ = ()


def _gstr(x) -> str:
    return str(x) if isinstance(x, (int, GnValue)) else repr(x)


@dataclass(frozen=True)
class Lit(GnValue):
    value: int

    def __post_init__(self):
        if self.value < 2:
            raise ValueError("a Gödel number encodes a nonempty sequence and is >= 2")

    def __str__(self):
        return f"Lit({self.value})"


@dataclass(frozen=True)
class ZNode(GnValue):
    """Gn of the numeral whose value is ``count`` (an int or another Gn)."""

    count: Union[int, GnValue]

    def __str__(self):
        return f"Z({_gstr(self.count)})"


@dataclass(frozen=True)
class NegNode(GnValue):
    arg: GnValue

    def __str__(self):
        return f"Neg({self.arg})"


@dataclass(frozen=True)
class ImpNode(GnValue):
    left: GnValue
    right: GnValue

    def __str__(self):
        return f"Imp({self.left}, {self.right})"


@dataclass(frozen=True)
class ConNode(GnValue):
    left: GnValue
    right: GnValue

    def __str__(self):
        return f"Con({self.left}, {self.right})"


@dataclass(frozen=True)
class SbNode(GnValue):
    target: GnValue
    var_code: int
    replacement: GnValue

    def __str__(self):
        return f"Sb({self.target}, {self.var_code}, {self.replacement})"


@dataclass(frozen=True)
class EncodeOf(GnValue):
    obj: Union[Formula, Term]

    def __str__(self):
        return f'Enc("{self.obj}")'


@dataclass(frozen=True)
class FreeSlot(GnValue):
    name: str

    def __str__(self):
        return f"Slot({self.name})"


def children(g: GnValue) -> tuple:
    if isinstance(g, ZNode):
        return (g.count,) if isinstance(g.count, GnValue) else ()
    if isinstance(g, NegNode):
        return (g.arg,)
    if isinstance(g, (ImpNode, ConNode)):
        return (g.left, g.right)
    if isinstance(g, SbNode):
        return (g.target, g.replacement)
    return ()


def has_free_slot(g: GnValue) -> bool:
    if isinstance(g, FreeSlot):
        return True
    return any(has_free_slot(c) for c in children(g))


def as_gn(g) -> GnValue:
    if isinstance(g, GnValue):
        return g
    if isinstance(g, int):
        return Lit(g)
    raise TypeError(f"not a Gödel number: {g!r}")


def eval(g, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> int:  # noqa: A001
    """Materialize ``g`` as an integer, or raise Overflow / NotClosed."""
    from . import metafun

    g = as_gn(g)
    if has_free_slot(g):
        raise NotClosed(f"{g} contains a free slot")
    c = metafun.normalize(g, digit_budget)
    if isinstance(c, Lit):
        return c.value
    raise Overflow(f"{g} does not fit in {digit_budget} digits")


def reflect(g, digit_budget: int = DEFAULT_DIGIT_BUDGET):
    """Structural decode of a Gn expression into a Formula or Term."""
    g = as_gn(g)
    if isinstance(g, FreeSlot):
        raise NotClosed(f"free slot {g.name}")
    if isinstance(g, Lit):
        return parse_signs(decode_sequence(g.value), "any")
    if isinstance(g, EncodeOf):
        return g.obj
    if isinstance(g, ZNode):
        n = g.count if isinstance(g.count, int) else eval(g.count, digit_budget)
        return Term(n)
    if isinstance(g, NegNode):
        return _connective(Not, reflect(g.arg, digit_budget))
    if isinstance(g, ImpNode):
        return _connective(mk_implication, reflect(g.left, digit_budget), reflect(g.right, digit_budget))
    if isinstance(g, ConNode):
        return _connective(mk_conjunction, reflect(g.left, digit_budget), reflect(g.right, digit_budget))
    if isinstance(g, SbNode):
        target = reflect(g.target, digit_budget)
        repl = reflect(g.replacement, digit_budget)
        v = sign_of_code(g.var_code)
        if not isinstance(v, VarSym):
            raise TypeMismatch(f"{g.var_code} is not a variable code")
        if not isinstance(repl, Term):
            raise TypeMismatch("substitutend reflects to a formula, not a term")
        try:
            return substitute(target, v, repl)
        except (TypeDisciplineError, OpenTermError) as e:
            raise TypeMismatch(str(e)) from None
    raise TypeError(f"unknown Gn node {g!r}")


def _connective(ctor, *parts):
    try:
        return ctor(*parts)
    except TypeDisciplineError as e:
        raise IllFormed(str(e)) from None
