"""Command-line interface.

Exit codes: 0 success, 1 input or parse error, 2 a check failed, 3 a digit or
enumeration budget was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import kernel
from .codec import (
    DEFAULT_DIGIT_BUDGET, CodecError, Overflow, decode, encode, sign_name, var_code,
)
from .corpus import BudgetExceeded, enumerate_corpus
from .metafun import sb_meta, z_meta
from .replay import AuditConfig, Reading, full_audit
from .syntax import (
    Formula, Numeral, classify_mark, formula_size, free_variables, parse_formula,
    parse_term, render_formula, render_term, substitute,
)

OK, INPUT_ERROR, CHECK_FAILED, BUDGET = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.format_usage()}{self.prog}: error: {message}")


def _parse_obj(text: str):
    try:
        return parse_formula(text)
    except (SyntaxError, TypeError):
        return parse_term(text)


def _render(obj) -> str:
    return render_formula(obj) if isinstance(obj, Formula) else render_term(obj)


def _emit(args, out, data: dict, text: str):
    if args.json:
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(text + "\n")


def cmd_parse(args, out) -> int:
    f = parse_formula(args.formula)
    fv = [str(v) for v in free_variables(f)]
    data = {"formula": render_formula(f), "kind": classify_mark(f).value,
            "free_variables": fv, "size": formula_size(f)}
    _emit(args, out, data, f"{data['formula']}\nkind: {data['kind']}\nfree: {' '.join(fv) or '-'}\nsize: {data['size']}")
    return OK


def cmd_encode(args, out) -> int:
    obj = _parse_obj(args.formula)
    g = encode(obj, args.digit_budget)
    _emit(args, out, {"object": _render(obj), "gn": str(g)}, str(g))
    return OK


def cmd_decode(args, out) -> int:
    res = decode(int(args.gn), args.mode)
    if args.mode == "sequence":
        data = {"codes": list(res), "signs": [sign_name(c) for c in res]}
        text = " ".join(data["signs"])
    else:
        data = {"object": _render(res)}
        text = data["object"]
    _emit(args, out, data, text)
    return OK


def cmd_subst(args, out) -> int:
    f = _parse_obj(args.formula)
    v = parse_term(args.var).var
    if v is None:
        raise ValueError(f"{args.var} is not a variable")
    result = substitute(f, v, Numeral(args.n))
    data = {"result": _render(result)}
    try:
        gn = sb_meta(encode(f, args.digit_budget), var_code(v), z_meta(args.n, args.digit_budget),
                     args.digit_budget)
        data["gn"] = str(gn)
    except Overflow:
        data["gn"] = None
    _emit(args, out, data, data["result"])
    return OK


def cmd_check(args, out) -> int:
    with open(args.file, encoding="utf-8") as fh:
        script = kernel.parse_script(fh.read(), premises_allowed=args.allow_premises)
    verdicts = kernel.check_proof(script)
    rows = [{"line": v.index, "status": v.status, "reason": v.reason.value if v.reason else None,
             "witness": {k: render_formula(f) for k, f in v.witness.items()} if v.witness else None,
             "detail": v.detail} for v in verdicts]
    ok = all(v.valid for v in verdicts)
    lines = []
    for r in rows:
        line = f"{r['line']}: {r['status']}"
        if r["reason"]:
            line += f" {r['reason']}"
        if r["detail"]:
            line += f" ({r['detail']})"
        lines.append(line)
    lines.append("proof valid" if ok else "proof invalid")
    _emit(args, out, {"lines": rows, "valid": ok}, "\n".join(lines))
    return OK if ok else CHECK_FAILED


def cmd_replay(args, out) -> int:
    readings = [Reading(args.reading)] if args.reading else list(Reading)
    cfg = AuditConfig(digit_budget=args.digit_budget, grant_eq4=args.grant_eq4)
    reports = [full_audit(r, cfg).as_dict() for r in readings]
    if args.json:
        out.write(json.dumps(reports[0] if args.reading else reports, indent=2) + "\n")
        return OK
    for rep in reports:
        out.write(f"reading: {rep['reading']}\n")
        for o in rep["objects"]:
            out.write(f"  {o['name']} = {o['gn']}  reflected: {o['reflected']}  wellformed: {o['wellformed']}\n")
        for s in rep["steps"]:
            out.write(f"  {s['step']}: {s['status']}" + (f" {s['reason']}" if s["reason"] else "") + "\n")
        out.write(f"  summary: {rep['summary']}\n")
    return OK


def cmd_explode(args, out) -> int:
    script = kernel.generate_explosion_proof(parse_formula(args.a), parse_formula(args.b))
    ok = kernel.is_valid(script)
    _emit(args, out, {"script": kernel.format_script(script), "valid": ok},
          kernel.format_script(script).rstrip("\n"))
    return OK if ok else CHECK_FAILED


def cmd_oracle(args, out) -> int:
    formulas = [render_formula(f) for f in enumerate_corpus(args.max_signs)]
    if args.json:
        out.write(json.dumps({"max_signs": args.max_signs, "count": len(formulas),
                              "formulas": formulas}, indent=2) + "\n")
    else:
        out.write("".join(f + "\n" for f in formulas))
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--digit-budget", type=int, default=DEFAULT_DIGIT_BUDGET, metavar="N")
    parser = _Parser(prog="psystem", description="Gödel numbering and proof checking for system P")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="parse and classify a formula")
    p.add_argument("formula")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("encode", parents=[common], help="Gödel number of a formula or term")
    p.add_argument("formula")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="decode a Gödel number")
    p.add_argument("gn")
    p.add_argument("--mode", choices=("sequence", "formula", "term"), default="sequence")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("subst", parents=[common], help="substitute a numeral for a variable")
    p.add_argument("formula")
    p.add_argument("var")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_subst)

    p = sub.add_parser("check", parents=[common], help="check a proof-script file")
    p.add_argument("file")
    p.add_argument("--allow-premises", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("replay", parents=[common], help="audit the self-referential derivation")
    p.add_argument("--reading", choices=[r.value for r in Reading])
    p.add_argument("--grant-eq4", action="store_true")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("explode", parents=[common], help="derive b from a and ~a")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_explode)

    p = sub.add_parser("oracle", parents=[common], help="enumerate the small-formula corpus")
    p.add_argument("--max-signs", type=int, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _Usage as e:
        err.write(str(e) + "\n")
        return INPUT_ERROR
    try:
        return args.func(args, out)
    except (Overflow, BudgetExceeded) as e:
        err.write(f"budget exceeded: {e}\n")
        return BUDGET
    except (CodecError, SyntaxError, TypeError, ValueError, OSError) as e:
        err.write(f"error: {e}\n")
        return INPUT_ERROR


def main():
    sys.exit(run())
