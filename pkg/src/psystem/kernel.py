"""Hilbert-style proof kernel for the propositional fragment of system P.

Axiom schemata are matched on the unabbreviated ``~``/``|`` core.  The only
rule is modus ponens.  Quantifier, comprehension and extensionality axioms
are not represented at all, so a script cannot cite them.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .codec import DEFAULT_DIGIT_BUDGET, IllFormed, reflect
from .syntax import (
    Apply, Formula, ForAll, MarkKind, Not, Numeral, Or, Term, VarSym,
    classify_mark, free_variables, mk_conjunction, mk_implication, parse_formula,
    render_formula, substitute, Succ, Var, X1, x1, x2, ZERO,
)


class KernelError(ValueError):
    pass


class TooManyAtoms(KernelError):
    pass


class NotAClassmark(KernelError):
    pass


class ScriptFormatError(KernelError):
    def __init__(self, msg: str, lineno: int):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


# ---------------------------------------------------------------- schemata

@dataclass(frozen=True)
class Meta(Formula):
    """Schema letter standing for an arbitrary formula."""

    name: str

    def __str__(self):
        return self.name


p, q, r = Meta("p"), Meta("q"), Meta("r")

AXIOM_II = {
    1: mk_implication(Or(p, p), p),
    2: mk_implication(p, Or(p, q)),
    3: mk_implication(Or(p, q), Or(q, p)),
    4: mk_implication(mk_implication(p, q), mk_implication(Or(r, p), Or(r, q))),
}


def _eq(a: Term, b: Term) -> Formula:
    # a = b  :=  all X1: (X1(a) -> X1(b))
    return ForAll(X1, mk_implication(Apply(X1, a), Apply(X1, b)))


# Peano axioms, universally closed
AXIOM_I = {
    1: ForAll(x1, Not(_eq(Succ(Var(x1)), ZERO))),
    2: ForAll(x1, ForAll(x2, mk_implication(_eq(Succ(Var(x1)), Succ(Var(x2))), _eq(Var(x1), Var(x2))))),
    3: ForAll(X1, mk_implication(
        mk_conjunction(Apply(X1, ZERO), ForAll(x1, mk_implication(Apply(X1, x1), Apply(X1, Succ(Var(x1)))))),
        ForAll(x1, Apply(X1, x1)))),
}


def instantiate(schema: Formula, witness: dict) -> Formula:
    if isinstance(schema, Meta):
        return witness[schema.name]
    if isinstance(schema, Not):
        return Not(instantiate(schema.body, witness))
    if isinstance(schema, Or):
        return Or(instantiate(schema.left, witness), instantiate(schema.right, witness))
    return schema


def _match(pat, f, binding: dict, path: str) -> Optional[str]:
    """Extend ``binding`` so that pat instantiates to f; return a failure trace or None."""
    if isinstance(pat, Meta):
        bound = binding.get(pat.name)
        if bound is None:
            binding[pat.name] = f
            return None
        if bound != f:
            return f"{path}: {pat.name} already bound to {render_formula(bound)}, found {render_formula(f)}"
        return None
    if isinstance(pat, Not):
        if not isinstance(f, Not):
            return f"{path}: expected a negation, found {render_formula(f)}"
        return _match(pat.body, f.body, binding, path + ".~")
    if isinstance(pat, Or):
        if not isinstance(f, Or):
            return f"{path}: expected a disjunction, found {render_formula(f)}"
        return (_match(pat.left, f.left, binding, path + ".L")
                or _match(pat.right, f.right, binding, path + ".R"))
    return None if pat == f else f"{path}: mismatch"


def match_trace(k: int, f: Formula) -> tuple[Optional[dict], Optional[str]]:
    if k not in AXIOM_II:
        raise KernelError(f"no axiom II.{k}")
    binding: dict = {}
    fail = _match(AXIOM_II[k], f, binding, "root")
    if fail:
        return None, f"II.{k} {fail}"
    return binding, None


def match_axiom_II(k: int, f: Formula) -> Optional[dict]:
    return match_trace(k, f)[0]


def match_axiom_I(k: int, f: Formula) -> bool:
    if k not in AXIOM_I:
        raise KernelError(f"no axiom I.{k}")
    return f == AXIOM_I[k]


# ---------------------------------------------------------------- scripts

@dataclass(frozen=True)
class Premise:
    def __str__(self):
        return "premise"


@dataclass(frozen=True)
class AxiomI:
    k: int

    def __post_init__(self):
        if self.k not in AXIOM_I:
            raise KernelError(f"no axiom I.{self.k}")

    def __str__(self):
        return f"ax I.{self.k}"


@dataclass(frozen=True)
class AxiomII:
    k: int

    def __post_init__(self):
        if self.k not in AXIOM_II:
            raise KernelError(f"no axiom II.{self.k}")

    def __str__(self):
        return f"ax II.{self.k}"


@dataclass(frozen=True)
class MP:
    """Line ``i`` is the implication, line ``j`` its antecedent (1-based)."""

    i: int
    j: int

    def __str__(self):
        return f"mp {self.i} {self.j}"


Justification = Union[Premise, AxiomI, AxiomII, MP]


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class ProofScript:
    lines: tuple
    premises_allowed: bool = False

    def __post_init__(self):
        if not self.lines:
            raise KernelError("a proof script has at least one line")
        object.__setattr__(self, "lines", tuple(
            ln if isinstance(ln, ProofLine) else ProofLine(*ln) for ln in self.lines))

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def __len__(self):
        return len(self.lines)


class Reason(str, enum.Enum):
    NOT_AN_AXIOM_INSTANCE = "NotAnAxiomInstance"
    OCCURS_CHECK_FAILED = "OccursCheckFailed"
    BAD_MP_SHAPE = "BadMPShape"
    FORWARD_REFERENCE = "ForwardReference"
    PREMISES_FORBIDDEN = "PremisesForbidden"
    UNRECOGNIZED_RULE = "UnrecognizedRule"


@dataclass(frozen=True)
class LineVerdict:
    index: int
    status: str
    reason: Optional[Reason] = None
    witness: Optional[dict] = None
    detail: str = ""

    @property
    def valid(self) -> bool:
        return self.status == "valid"


def _check_line(script: ProofScript, n: int) -> LineVerdict:
    line = script.lines[n - 1]
    f, just = line.formula, line.just
    if isinstance(just, Premise):
        if script.premises_allowed:
            return LineVerdict(n, "valid")
        return LineVerdict(n, "invalid", Reason.PREMISES_FORBIDDEN)
    if isinstance(just, AxiomII):
        witness, trace = match_trace(just.k, f)
        if witness is None:
            return LineVerdict(n, "invalid", Reason.NOT_AN_AXIOM_INSTANCE, detail=trace)
        return LineVerdict(n, "valid", witness=witness)
    if isinstance(just, AxiomI):
        if match_axiom_I(just.k, f):
            return LineVerdict(n, "valid", witness={})
        return LineVerdict(n, "invalid", Reason.NOT_AN_AXIOM_INSTANCE, detail=f"not axiom I.{just.k}")
    if isinstance(just, MP):
        if not (1 <= just.i < n and 1 <= just.j < n):
            return LineVerdict(n, "invalid", Reason.FORWARD_REFERENCE,
                               detail=f"mp {just.i} {just.j} at line {n}")
        imp, ante = script.lines[just.i - 1].formula, script.lines[just.j - 1].formula
        if imp != mk_implication(ante, f):
            return LineVerdict(n, "invalid", Reason.BAD_MP_SHAPE,
                               detail=f"line {just.i} is not (line {just.j} -> line {n})")
        return LineVerdict(n, "valid")
    return LineVerdict(n, "invalid", Reason.UNRECOGNIZED_RULE, detail=repr(just))


def check_proof(script: ProofScript) -> list[LineVerdict]:
    return [_check_line(script, n) for n in range(1, len(script) + 1)]


def is_valid(script: ProofScript) -> bool:
    return all(v.valid for v in check_proof(script))


# ---------------------------------------------------------------- script files

_JUST = re.compile(r"^(?:(premise)|ax\s+(I|II)\.(\d+)|mp\s+(\d+)\s+(\d+))$")


def parse_justification(text: str) -> Justification:
    m = _JUST.match(text.strip())
    if not m:
        raise KernelError(f"unrecognized justification {text.strip()!r}")
    if m.group(1):
        return Premise()
    if m.group(2):
        return (AxiomI if m.group(2) == "I" else AxiomII)(int(m.group(3)))
    return MP(int(m.group(4)), int(m.group(5)))


def parse_script(text: str, premises_allowed: bool = False) -> ProofScript:
    """Read ``<index>: <formula> ; <just>`` lines; ``#`` starts a comment line."""
    lines, last = [], 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        head, sep, rest = s.partition(":")
        body, sep2, just = rest.rpartition(";")
        if not sep or not sep2 or not head.strip().isdigit():
            raise ScriptFormatError("expected '<index>: <formula> ; <justification>'", lineno)
        index = int(head)
        if index <= last:
            raise ScriptFormatError("indices must be strictly increasing", lineno)
        if index != last + 1:
            raise ScriptFormatError(f"expected index {last + 1}", lineno)
        last = index
        try:
            lines.append(ProofLine(parse_formula(body), parse_justification(just)))
        except (SyntaxError, TypeError, KernelError) as e:
            raise ScriptFormatError(str(e), lineno) from None
    if not lines:
        raise ScriptFormatError("no proof lines", 0)
    return ProofScript(tuple(lines), premises_allowed)


def format_script(script: ProofScript) -> str:
    return "".join(f"{n}: {render_formula(ln.formula)} ; {ln.just}\n"
                   for n, ln in enumerate(script.lines, 1))


# ---------------------------------------------------------------- tautologies

def skeleton_atoms(f: Formula) -> list[Formula]:
    atoms: dict = {}

    def walk(g):
        if isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, Or):
            walk(g.left)
            walk(g.right)
        else:
            atoms.setdefault(g, None)

    walk(f)
    return list(atoms)


def _truth(f, val: dict) -> bool:
    if isinstance(f, Not):
        return not _truth(f.body, val)
    if isinstance(f, Or):
        return _truth(f.left, val) or _truth(f.right, val)
    return val[f]


def taut_check(f: Formula, max_atoms: int = 16) -> bool:
    """Truth-table test of the propositional skeleton of ``f``."""
    atoms = skeleton_atoms(f)
    if len(atoms) > max_atoms:
        raise TooManyAtoms(f"{len(atoms)} atoms > {max_atoms}")
    for bits in itertools.product((False, True), repeat=len(atoms)):
        if not _truth(f, dict(zip(atoms, bits))):
            return False
    return True


# ---------------------------------------------------------------- derived scripts

def generate_explosion_proof(a: Formula, b: Formula) -> ProofScript:
    """Derive ``b`` from the premises ``a`` and ``~a``."""
    a_imp_b = mk_implication(a, b)
    return ProofScript((
        ProofLine(a, Premise()),
        ProofLine(Not(a), Premise()),
        ProofLine(mk_implication(Not(a), a_imp_b), AxiomII(2)),
        ProofLine(a_imp_b, MP(3, 2)),
        ProofLine(b, MP(4, 1)),
    ), premises_allowed=True)


def identity_proof(a: Formula) -> ProofScript:
    """The five-line derivation of ``a -> a`` from II.1, II.2 and II.4."""
    aa = Or(a, a)
    l1 = mk_implication(a, aa)
    l2 = mk_implication(aa, a)
    l3 = mk_implication(l2, mk_implication(Or(Not(a), aa), Or(Not(a), a)))
    l4 = mk_implication(l1, mk_implication(a, a))
    return ProofScript((
        ProofLine(l1, AxiomII(2)),
        ProofLine(l2, AxiomII(1)),
        ProofLine(l3, AxiomII(4)),
        ProofLine(l4, MP(3, 2)),
        ProofLine(mk_implication(a, a), MP(4, 1)),
    ))


# ---------------------------------------------------------------- theorem classes

@dataclass(frozen=True)
class Theorem:
    formula: Formula
    script: ProofScript

    def __post_init__(self):
        if self.script.conclusion != self.formula:
            raise KernelError("script does not conclude the theorem")
        if not is_valid(self.script):
            raise KernelError("script does not check")


@dataclass(frozen=True)
class TheoremClass:
    theorems: tuple = ()

    @classmethod
    def from_scripts(cls, scripts) -> "TheoremClass":
        return cls(tuple(Theorem(s.conclusion, s) for s in scripts))

    @classmethod
    def of_premises(cls, formulas) -> "TheoremClass":
        """Hypothetical class whose members are taken as one-line premise scripts."""
        return cls.from_scripts(ProofScript((ProofLine(f, Premise()),), True) for f in formulas)

    @property
    def formulas(self) -> list[Formula]:
        return [t.formula for t in self.theorems]

    def __contains__(self, f) -> bool:
        return f in set(self.formulas)


def contradiction_scan(tc: TheoremClass) -> list[tuple[Formula, Formula]]:
    members = set(tc.formulas)
    out, seen = [], set()
    for f in tc.formulas:
        if Not(f) in members and f not in seen:
            seen.add(f)
            out.append((f, Not(f)))
    return out


@dataclass(frozen=True)
class OmegaProbe:
    classmark: Formula
    var: VarSym
    bound: int
    negated_generalization: bool
    missing_instances: tuple = ()

    @property
    def violation(self) -> bool:
        return self.negated_generalization and not self.missing_instances


def omega_violation_scan(tc: TheoremClass, c: Formula, n_max: int) -> OmegaProbe:
    """Bounded probe: ``~all v: c`` in tc together with ``c[i/v]`` for i = 0..n_max."""
    if classify_mark(c) is not MarkKind.CLASSMARK:
        raise NotAClassmark(f"{render_formula(c)} has {len(free_variables(c))} free variables")
    (v,) = free_variables(c)
    if v.type_level != 1:
        raise NotAClassmark(f"free variable {v} does not range over numbers")
    members = set(tc.formulas)
    missing = tuple(i for i in range(n_max + 1) if substitute(c, v, Numeral(i)) not in members)
    return OmegaProbe(c, v, n_max, Not(ForAll(v, c)) in members, missing)


# ---------------------------------------------------------------- proof relation on Gödel numbers

def infer_justification(lines: Sequence[Formula], n: int) -> Optional[Justification]:
    """First kernel justification (axioms, then MP over earlier lines) that fits line n."""
    f = lines[n - 1]
    for k in AXIOM_II:
        if match_axiom_II(k, f) is not None:
            return AxiomII(k)
    for k in AXIOM_I:
        if match_axiom_I(k, f):
            return AxiomI(k)
    for i in range(1, n):
        split = lines[i - 1]
        if isinstance(split, Or) and split.right == f and isinstance(split.left, Not):
            ante = split.left.body
            for j in range(1, n):
                if lines[j - 1] == ante:
                    return MP(i, j)
    return None


def b_relation(proof, target, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> bool:
    """Is the sequence of Gödel numbers ``proof`` a premise-free proof of ``target``?"""
    if not proof:
        return False
    lines = []
    for g in proof:
        f = reflect(g, digit_budget)
        if not isinstance(f, Formula):
            raise IllFormed(f"proof element {g} reflects to a term")
        lines.append(f)
    goal = reflect(target, digit_budget)
    justs = []
    for n in range(1, len(lines) + 1):
        just = infer_justification(lines, n)
        if just is None:
            return False
        justs.append(just)
    script = ProofScript(tuple(ProofLine(f, j) for f, j in zip(lines, justs)))
    return is_valid(script) and script.conclusion == goal
