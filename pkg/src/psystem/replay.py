"""Construct the self-referential objects s, t, u and audit the claimed derivation.

The defining equation for s admits three formal readings, so each audit run
fixes one :class:`Reading`:

* ``literal-meta``: ``x`` is an unbound meta-level slot, so s and t are
  functions of x rather than numbers and u cannot be formed.
* ``variable-as-formula``: the first Sb argument is the one-sign sequence
  ``x3`` (Gn 2^23), which makes s the numeral for 2^23.
* ``fixed-point``: posit a formula U with ``U = (U -> ~U)`` directly.

Each of the four derivation steps gets a :class:`StepVerdict`.  A verdict is
``valid`` only when it carries a script that the kernel accepts.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from . import kernel
from .codec import (
    DEFAULT_DIGIT_BUDGET, FreeSlot, GnValue, IllFormed, Lit, Overflow,
    SbNode, ZNode, has_free_slot, parse_signs, reflect,
)
from .metafun import imp_meta, neg_meta, sb_meta, sequence_of, z_meta
from .syntax import (
    Apply, Formula, Not, X1, formula_size, mk_conjunction, mk_implication,
    render_formula, x3,
)

X_CODE = 23
GLOSS = "u numbers a formula of the shape (U -> ~U) in which U is the formula numbered u itself"


class Reading(str, enum.Enum):
    LITERAL_META = "literal-meta"
    VARIABLE_AS_FORMULA = "variable-as-formula"
    FIXED_POINT = "fixed-point"


@dataclass(frozen=True)
class AuditConfig:
    digit_budget: int = DEFAULT_DIGIT_BUDGET
    grant_eq4: bool = False


@dataclass(frozen=True)
class FixedPointConstraint:
    """The equation ``U = (U -> ~U)`` on an unknown formula U."""

    def lhs(self, f: Formula) -> Formula:
        return f

    def rhs(self, f: Formula) -> Formula:
        return mk_implication(f, Not(f))

    def __str__(self):
        return "U = (U -> ~U)"


@dataclass(frozen=True)
class OccursWitness:
    lhs_expr: str
    rhs_expr: str
    overhead: int
    samples: tuple = ()

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs_expr,
            "rhs": self.rhs_expr,
            "inequality": f"{self.rhs_expr} > 2*size(U) >= size(U) + 1",
            "samples": [{"formula": s, "size_lhs": a, "size_rhs": b} for s, a, b in self.samples],
        }


SMALLEST = Apply(X1, x3)


def occurs_check(constraint: FixedPointConstraint, probes=(SMALLEST,)) -> OccursWitness:
    """Refute ``U = (U -> ~U)`` for finite U by comparing sign counts.

    ``size(U -> ~U) = 2*size(U) + c`` for a constant overhead c, read off the
    probes; it must agree on every probe, and since sizes are positive the
    right side is always strictly larger than the left.
    """
    samples, overheads = [], set()
    for f in probes:
        a, b = formula_size(constraint.lhs(f)), formula_size(constraint.rhs(f))
        if not b > 2 * a >= a + 1:
            raise AssertionError(f"size inequality fails on {render_formula(f)}")
        overheads.add(b - 2 * a)
        samples.append((render_formula(f), a, b))
    if len(overheads) != 1:
        raise AssertionError(f"size overhead not constant: {sorted(overheads)}")
    (c,) = overheads
    return OccursWitness("size(U)", f"2*size(U) + {c}", c, tuple(samples))


@dataclass
class BuiltObject:
    name: str
    gn: Optional[GnValue] = None
    reflected: Optional[object] = None
    wellformed: bool = False
    status: str = "constructed"
    reason: Optional[str] = None
    detail: str = ""
    constraint: Optional[FixedPointConstraint] = None


@dataclass(frozen=True)
class StepVerdict:
    step: str
    status: str
    reason: Optional[str] = None
    evidence: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.status == "valid"


@dataclass
class AuditReport:
    reading: Reading
    objects: dict
    steps: list
    summary: str
    gloss: str = GLOSS

    def as_dict(self) -> dict:
        return {
            "reading": self.reading.value,
            "objects": [_object_dict(o) for o in self.objects.values()],
            "steps": [{"step": s.step, "status": s.status, "reason": s.reason, "evidence": s.evidence}
                      for s in self.steps],
            "gloss": self.gloss,
            "summary": self.summary,
        }


def _object_dict(o: BuiltObject) -> dict:
    if o.reflected is None:
        reflected = None
    elif isinstance(o.reflected, str):
        reflected = o.reflected
    else:
        reflected = render_formula(o.reflected)
    return {"name": o.name, "gn": None if o.gn is None else str(o.gn),
            "reflected": reflected, "wellformed": o.wellformed}


# ---------------------------------------------------------------- construction

def build_s(r: Reading, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> Optional[GnValue]:
    r = Reading(r)
    if r is Reading.LITERAL_META:
        x = FreeSlot("x")
        return SbNode(x, X_CODE, ZNode(x))
    if r is Reading.VARIABLE_AS_FORMULA:
        return sb_meta(Lit(2 ** X_CODE), X_CODE, z_meta(2 ** X_CODE, digit_budget), digit_budget)
    return None


def build_t(r: Reading, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> Optional[GnValue]:
    s = build_s(r, digit_budget)
    if s is None:
        return None
    return imp_meta(s, neg_meta(s, digit_budget), digit_budget)


def _reflect_object(name: str, g: GnValue, digit_budget: int) -> BuiltObject:
    obj = BuiltObject(name, g)
    if has_free_slot(g):
        obj.status, obj.reason = "not-constructible", "NotClosed"
        obj.detail = "depends on the unbound slot x"
        return obj
    try:
        obj.reflected = reflect(g, digit_budget)
    except (IllFormed, Overflow) as e:
        obj.reason, obj.detail = ("IllFormed" if isinstance(e, IllFormed) else "Overflow"), str(e)
        return obj
    obj.wellformed = isinstance(obj.reflected, Formula)
    if not obj.wellformed:
        obj.reason, obj.detail = "NotAFormula", "reflects to a term"
    return obj


def build_u(r: Reading, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> BuiltObject:
    r = Reading(r)
    if r is Reading.FIXED_POINT:
        return BuiltObject("u", status="constraint", reason="FixedPoint",
                           detail=str(FixedPointConstraint()), constraint=FixedPointConstraint())
    t = build_t(r, digit_budget)
    if has_free_slot(t):
        return BuiltObject("u", status="not-constructible", reason="NotClosed",
                           detail="Sb(t, 23, Z(t)) needs a closed t; t depends on the slot x")
    u = sb_meta(t, X_CODE, z_meta(t, digit_budget), digit_budget)
    return _reflect_object("u", u, digit_budget)


def build_objects(r: Reading, digit_budget: int = DEFAULT_DIGIT_BUDGET) -> dict:
    r = Reading(r)
    out = {}
    for name, builder in (("s", build_s), ("t", build_t)):
        g = builder(r, digit_budget)
        if g is None:
            out[name] = BuiltObject(name, status="absent", reason="NotDefinedByReading")
        else:
            out[name] = _reflect_object(name, g, digit_budget)
    out["u"] = build_u(r, digit_budget)
    return out


# ---------------------------------------------------------------- step audits

def _sequence_check(g: GnValue, digit_budget: int) -> str:
    """Independent well-formedness test on the raw sign sequence."""
    seq = sequence_of(g, digit_budget)
    if seq is None:
        return "sequence not formable"
    try:
        parse_signs(seq, "formula")
    except IllFormed as e:
        return f"sign sequence is not a formula: {e}"
    return "sign sequence parses as a formula"


def _schematic_eq6() -> dict:
    # the inference shape of eq6 on a stand-in formula P for u
    P = SMALLEST
    script = kernel.ProofScript((
        kernel.ProofLine(mk_implication(P, Not(P)), kernel.Premise()),
        kernel.ProofLine(mk_implication(mk_implication(P, Not(P)), Not(P)), kernel.AxiomII(1)),
        kernel.ProofLine(Not(P), kernel.MP(2, 1)),
    ), premises_allowed=True)
    return {"stand_in": render_formula(P), "script": kernel.format_script(script),
            "schematic_inference_valid": kernel.is_valid(script)}


def _schematic_eq7() -> dict:
    P = SMALLEST
    script = kernel.generate_explosion_proof(P, mk_conjunction(P, Not(P)))
    return {"stand_in": render_formula(P), "script": kernel.format_script(script),
            "schematic_inference_valid": kernel.is_valid(script)}


def _object_failure(u: BuiltObject) -> tuple[str, str, dict]:
    """(status, reason, evidence) when u is not a usable formula."""
    if u.status == "not-constructible":
        return "not-constructible", "NotClosed", {"detail": u.detail}
    if u.constraint is not None:
        return "invalid", kernel.Reason.OCCURS_CHECK_FAILED.value, {
            "constraint": str(u.constraint),
            "occurs_check": occurs_check(u.constraint).as_dict(),
        }
    return "invalid", "IllFormedProtasis", {"detail": u.detail}


def _audit_eq4(r, objs, cfg) -> StepVerdict:
    u = objs["u"]
    if u.constraint is not None:
        # u Imp Neg u against II.1 forces p := ~U and U = (U -> ~U)
        status, reason, ev = _object_failure(u)
        ev["claimed_rule"] = "ax II.1"
        ev["forced_binding"] = "p := ~U, then (p | p) = U, i.e. U = (U -> ~U)"
        return StepVerdict("eq4", status, reason, ev)
    if not u.wellformed:
        status, reason, ev = _object_failure(u)
        if u.gn is not None and status == "invalid":
            ev["sequence_check"] = _sequence_check(u.gn, cfg.digit_budget)
            t = objs.get("t")
            if t is not None and t.gn == u.gn:
                ev["identity_substitution"] = "u = t (sign 23 does not occur in t)"
        return StepVerdict("eq4", status, reason, ev)
    # u reflects to a genuine formula: test the claimed axiom instance directly
    claim = mk_implication(u.reflected, Not(u.reflected))
    script = kernel.ProofScript((kernel.ProofLine(claim, kernel.AxiomII(1)),))
    (verdict,) = kernel.check_proof(script)
    if verdict.valid:
        return StepVerdict("eq4", "valid", None, {"script": kernel.format_script(script)})
    return StepVerdict("eq4", "invalid", verdict.reason.value, {"trace": verdict.detail})


def _audit_eq5(r, objs, cfg) -> StepVerdict:
    # the cited lines: t and u are definitions of numbers, eq4 a provability claim
    cited = [("t", "definition"), ("u", "definition"), ("eq4", "theorem")]
    theorems = [c for c, kind in cited if kind == "theorem"]
    attempts = [
        {"rule": "premise", "result": "premises are forbidden in a proof of Bew"},
        {"rule": "mp", "result": f"needs an implication and its antecedent; {len(theorems)} cited theorem(s)"
                                 " and MP(eq4, eq4) would need (u -> ~u) = ((u -> ~u) -> u)"},
    ]
    u = objs["u"]
    for k in sorted(kernel.AXIOM_II):
        if u.wellformed:
            res = "instance" if kernel.match_axiom_II(k, u.reflected) else "not an instance"
        else:
            res = f"u is not a formula ({u.reason})"
        attempts.append({"rule": f"ax II.{k}", "result": res})
    for k in sorted(kernel.AXIOM_I):
        res = ("instance" if (u.wellformed and kernel.match_axiom_I(k, u.reflected))
               else ("not the axiom" if u.wellformed else f"u is not a formula ({u.reason})"))
        attempts.append({"rule": f"ax I.{k}", "result": res})
    if u.wellformed and any(a["result"] == "instance" for a in attempts):
        rule = next(a["rule"] for a in attempts if a["result"] == "instance")
        just = kernel.parse_justification(rule)
        script = kernel.ProofScript((kernel.ProofLine(u.reflected, just),))
        if kernel.is_valid(script):
            return StepVerdict("eq5", "valid", None, {"script": kernel.format_script(script)})
    return StepVerdict("eq5", "invalid", kernel.Reason.UNRECOGNIZED_RULE.value, {
        "cited": [f"{c}: {kind}" for c, kind in cited],
        "attempts": attempts,
        "u_status": u.status if u.status != "constructed" else ("formula" if u.wellformed else u.reason),
    })


def _audit_eq6(r, objs, cfg, eq4: StepVerdict) -> StepVerdict:
    u = objs["u"]
    schematic = _schematic_eq6()
    if u.status == "not-constructible":
        return StepVerdict("eq6", "not-constructible", "NotClosed", {"detail": u.detail})
    if u.wellformed and (eq4.valid or cfg.grant_eq4):
        P = u.reflected
        # line 1 stands for eq4's certificate (or the granted hypothesis)
        script = kernel.ProofScript((
            kernel.ProofLine(mk_implication(P, Not(P)), kernel.Premise()),
            kernel.ProofLine(mk_implication(mk_implication(P, Not(P)), Not(P)), kernel.AxiomII(1)),
            kernel.ProofLine(Not(P), kernel.MP(2, 1)),
        ), premises_allowed=True)
        if kernel.is_valid(script):
            return StepVerdict("eq6", "valid", None, {"script": kernel.format_script(script),
                                                      "granted_eq4": not eq4.valid})
    evidence = {"granted_eq4": cfg.grant_eq4, "schematic": schematic}
    if not cfg.grant_eq4 and not eq4.valid:
        evidence["depends_on"] = "eq4"
        return StepVerdict("eq6", "invalid", "PremiseStepInvalid", evidence)
    status, reason, ev = _object_failure(u)
    evidence.update(ev)
    return StepVerdict("eq6", status, reason, evidence)


def _audit_eq7(r, objs, cfg, eq5: StepVerdict, eq6: StepVerdict) -> StepVerdict:
    u = objs["u"]
    if u.status == "not-constructible":
        return StepVerdict("eq7", "not-constructible", "NotClosed", {"detail": u.detail})
    if eq5.valid and eq6.valid and u.wellformed:
        P = u.reflected
        script = kernel.generate_explosion_proof(P, mk_conjunction(P, Not(P)))
        return StepVerdict("eq7", "valid", None, {"script": kernel.format_script(script)})
    failed = [v.step for v in (eq5, eq6) if not v.valid]
    return StepVerdict("eq7", "invalid", "PremiseStepInvalid",
                       {"depends_on": failed, "schematic": _schematic_eq7()})


def audit_steps(r: Reading, cfg: AuditConfig = AuditConfig(), objs: Optional[dict] = None) -> list:
    r = Reading(r)
    objs = objs or build_objects(r, cfg.digit_budget)
    eq4 = _audit_eq4(r, objs, cfg)
    eq5 = _audit_eq5(r, objs, cfg)
    eq6 = _audit_eq6(r, objs, cfg, eq4)
    eq7 = _audit_eq7(r, objs, cfg, eq5, eq6)
    return [eq4, eq5, eq6, eq7]


def audit_step(step: str, r: Reading, cfg: AuditConfig = AuditConfig()) -> StepVerdict:
    steps = {v.step: v for v in audit_steps(r, cfg)}
    if step not in steps:
        raise ValueError(f"unknown step {step!r}; expected one of {sorted(steps)}")
    return steps[step]


def _summary(steps) -> str:
    certified = [s.step for s in steps if s.valid]
    first = next((s for s in steps if not s.valid), None)
    out = f"steps certified: {len(certified)}/{len(steps)}"
    if first is not None:
        out += f"; first uncertified step {first.step}: {first.status}/{first.reason}"
    return out


def full_audit(r: Reading, cfg: AuditConfig = AuditConfig()) -> AuditReport:
    r = Reading(r)
    objs = build_objects(r, cfg.digit_budget)
    steps = audit_steps(r, cfg, objs)
    return AuditReport(r, objs, steps, _summary(steps))
