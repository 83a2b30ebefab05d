import itertools

import pytest
from hypothesis import given, settings, strategies as st

from psystem.codec import EncodeOf, FreeSlot, IllFormed, Lit, NotClosed, ZNode, encode
from psystem.corpus import formulas_up_to
from psystem.kernel import (
    AXIOM_I, AXIOM_II, MP, AxiomI, AxiomII, KernelError, NotAClassmark, Premise,
    ProofScript, Reason, ScriptFormatError, TheoremClass, TooManyAtoms, b_relation,
    check_proof, contradiction_scan, format_script, generate_explosion_proof, identity_proof,
    instantiate, is_valid, match_axiom_I, match_axiom_II, omega_violation_scan,
    parse_script, skeleton_atoms, taut_check,
)
from psystem.syntax import (
    Apply, ForAll, Not, Numeral, Or, X1, X2, X3, mk_implication,
    free_variables, substitute, x1, x3,
)

from conftest import formulas
from oracles import brute_b, brute_match, schema_letters

A = Apply(X1, x3)
B = Apply(X2, x3)
C = Apply(X3, x3)
CM = ForAll(X1, A)  # classmark in x3
SMALL = list(formulas_up_to(6))


class TestMatcher:
    def test_direct_instance(self):
        assert match_axiom_II(1, mk_implication(Or(A, A), A)) == {"p": A}

    def test_self_negation_form_is_II1(self):
        f = mk_implication(mk_implication(A, Not(A)), Not(A))
        assert match_axiom_II(1, f) == {"p": Not(A)}

    def test_self_negation_implication_matches_nothing(self):
        f = mk_implication(A, Not(A))
        assert all(match_axiom_II(k, f) is None for k in range(1, 5))
        assert all(brute_match(k, f) is None for k in range(1, 5))

    def test_other_schemata(self):
        assert match_axiom_II(2, mk_implication(A, Or(A, B))) == {"p": A, "q": B}
        assert match_axiom_II(3, mk_implication(Or(A, B), Or(B, A))) == {"p": A, "q": B}
        f = mk_implication(mk_implication(A, B), mk_implication(Or(C, A), Or(C, B)))
        assert match_axiom_II(4, f) == {"p": A, "q": B, "r": C}

    def test_bad_index(self):
        with pytest.raises(KernelError):
            match_axiom_II(5, A)
        with pytest.raises(KernelError):
            AxiomI(4)

    def test_axiom_I(self):
        assert match_axiom_I(1, AXIOM_I[1])
        assert not match_axiom_I(1, mk_implication(A, A))
        assert not match_axiom_I(2, A)
        for ax in AXIOM_I.values():
            assert free_variables(ax) == ()

    def test_agrees_with_brute_force_on_corpus(self):
        for f in formulas_up_to(12):
            for k in AXIOM_II:
                assert (match_axiom_II(k, f) is None) == (brute_match(k, f) is None)

    def test_agrees_on_constructed_instances(self):
        for k in AXIOM_II:
            letters = schema_letters(k)
            pool = SMALL[:12] if len(letters) == 3 else SMALL
            for combo in itertools.product(pool, repeat=len(letters)):
                f = instantiate(AXIOM_II[k], dict(zip(letters, combo)))
                w = match_axiom_II(k, f)
                assert w is not None and brute_match(k, f) is not None
                assert instantiate(AXIOM_II[k], w) == f

    @given(formulas, formulas, formulas, st.integers(1, 4))
    def test_soundness(self, a, b, c, k):
        f = instantiate(AXIOM_II[k], {"p": a, "q": b, "r": c})
        w = match_axiom_II(k, f)
        assert w is not None
        assert instantiate(AXIOM_II[k], w) == f
        assert taut_check(f)

    @given(formulas, st.integers(1, 4))
    def test_soundness_on_random(self, f, k):
        w = match_axiom_II(k, f)
        if w is not None:
            assert instantiate(AXIOM_II[k], w) == f


class TestCheckProof:
    def test_premise_mp(self):
        s = ProofScript(((A, Premise()), (mk_implication(A, B), Premise()), (B, MP(2, 1))), True)
        assert all(v.valid and v.reason is None for v in check_proof(s))

    def test_forward_reference(self):
        (v,) = check_proof(ProofScript(((B, MP(1, 1)),)))
        assert v.status == "invalid" and v.reason is Reason.FORWARD_REFERENCE

    def test_not_an_instance(self):
        (v,) = check_proof(ProofScript(((mk_implication(A, Not(A)), AxiomII(1)),)))
        assert v.reason is Reason.NOT_AN_AXIOM_INSTANCE
        assert v.witness is None and "II.1" in v.detail

    def test_premises_forbidden(self):
        (v,) = check_proof(ProofScript(((A, Premise()),)))
        assert v.reason is Reason.PREMISES_FORBIDDEN

    def test_bad_mp_shape(self):
        s = ProofScript(((A, Premise()), (B, Premise()), (C, MP(2, 1))), True)
        assert check_proof(s)[2].reason is Reason.BAD_MP_SHAPE

    def test_witness_iff_axiom(self):
        s = identity_proof(A)
        for v, line in zip(check_proof(s), s.lines):
            assert (v.witness is not None) == isinstance(line.just, AxiomII)

    def test_empty_rejected(self):
        with pytest.raises(KernelError):
            ProofScript(())

    def test_identity_proof(self):
        for a in SMALL:
            s = identity_proof(a)
            assert is_valid(s) and s.conclusion == mk_implication(a, a)

    def test_deterministic(self):
        s = generate_explosion_proof(A, B)
        assert check_proof(s) == check_proof(s)


class TestTautology:
    def test_examples(self):
        assert taut_check(mk_implication(Or(A, A), A))
        assert not taut_check(mk_implication(A, Not(A)))
        assert taut_check(mk_implication(mk_implication(Not(A), A), A))

    def test_atoms_are_maximal(self):
        f = Or(ForAll(x3, A), Not(ForAll(x3, A)))
        assert skeleton_atoms(f) == [ForAll(x3, A)]
        assert taut_check(f)

    def test_too_many_atoms(self):
        atoms = [Apply(X1, Numeral(i)) for i in range(17)]
        f = atoms[0]
        for a in atoms[1:]:
            f = Or(f, a)
        with pytest.raises(TooManyAtoms):
            taut_check(f)

    def test_axiom_instances_are_tautologies(self):
        for k in AXIOM_II:
            for a in SMALL[:10]:
                assert taut_check(instantiate(AXIOM_II[k], {"p": a, "q": Not(a), "r": B}))


class TestExplosion:
    @pytest.mark.parametrize("a,b", [(A, B), (A, A), (A, Not(A))])
    def test_examples(self, a, b):
        s = generate_explosion_proof(a, b)
        assert len(s) == 5 and is_valid(s) and s.conclusion == b
        assert s.lines[2].just == AxiomII(2)

    def test_needs_premises(self):
        s = generate_explosion_proof(A, B)
        forbidden = ProofScript(s.lines, premises_allowed=False)
        assert [v.reason for v in check_proof(forbidden)][:2] == [Reason.PREMISES_FORBIDDEN] * 2

    @given(formulas, formulas)
    def test_random(self, a, b):
        assert is_valid(generate_explosion_proof(a, b))


class TestScripts:
    def test_round_trip(self):
        for s in (identity_proof(A), generate_explosion_proof(A, B)):
            text = format_script(s)
            back = parse_script(text, s.premises_allowed)
            assert back == s
            assert format_script(back) == text

    def test_comments_and_format(self):
        text = "# identity\n1: X1(x3) ; premise\n\n2: (X1(x3) | X1(x3)) ; ax II.1\n"
        s = parse_script(text, True)
        assert len(s) == 2 and s.lines[1].just == AxiomII(1)

    @pytest.mark.parametrize("text", [
        "1: X1(x3)\n",
        "2: X1(x3) ; premise\n",
        "1: X1(x3) ; premise\n1: X1(x3) ; premise\n",
        "1: X1(x3) ; ax III.1\n",
        "1: X1( ; premise\n",
        "",
    ])
    def test_rejects(self, text):
        with pytest.raises(ScriptFormatError):
            parse_script(text)


class TestScans:
    def test_contradictions(self):
        assert contradiction_scan(TheoremClass.of_premises([A, Not(A), B])) == [(A, Not(A))]
        assert contradiction_scan(TheoremClass.of_premises([A, B])) == []
        assert contradiction_scan(TheoremClass.of_premises([Not(A), Not(Not(A))])) == [(Not(A), Not(Not(A)))]

    def test_theorem_class_rejects_bad_script(self):
        with pytest.raises(KernelError):
            TheoremClass.from_scripts([ProofScript(((A, AxiomII(1)),))])

    def test_theorem_class_of_real_proofs(self):
        tc = TheoremClass.from_scripts([identity_proof(A)])
        assert mk_implication(A, A) in tc

    def _inst(self, i):
        return substitute(CM, x3, Numeral(i))

    def test_omega_violation(self):
        neg = Not(ForAll(x3, CM))
        tc = TheoremClass.of_premises([neg] + [self._inst(i) for i in range(3)])
        assert omega_violation_scan(tc, CM, 2).violation

    def test_omega_missing(self):
        tc = TheoremClass.of_premises([Not(ForAll(x3, CM)), self._inst(0), self._inst(2)])
        probe = omega_violation_scan(tc, CM, 2)
        assert not probe.violation and probe.missing_instances == (1,)

    def test_omega_bound_zero(self):
        tc = TheoremClass.of_premises([Not(ForAll(x3, CM)), self._inst(0)])
        assert omega_violation_scan(tc, CM, 0).violation

    def test_not_a_classmark(self):
        tc = TheoremClass.of_premises([A])
        with pytest.raises(NotAClassmark):
            omega_violation_scan(tc, Or(A, Apply(X1, x1)), 1)
        with pytest.raises(NotAClassmark):
            omega_violation_scan(tc, ForAll(x3, Apply(X1, x3)), 1)


class TestBRelation:
    def test_axiom_instance(self):
        f = mk_implication(Or(A, A), A)
        assert b_relation([EncodeOf(f)], EncodeOf(f))
        assert b_relation([Lit(encode(f))], Lit(encode(f)))

    def test_empty(self):
        assert not b_relation([], EncodeOf(A))

    def test_non_axiom(self):
        f = mk_implication(A, Not(A))
        assert not b_relation([EncodeOf(f)], EncodeOf(f))

    def test_identity_proof(self):
        s = identity_proof(A)
        gns = [Lit(encode(ln.formula)) for ln in s.lines]
        assert b_relation(gns, gns[-1])
        assert not b_relation(gns, EncodeOf(A))
        assert not b_relation(gns[1:], gns[-1])

    def test_errors_propagate(self):
        with pytest.raises(IllFormed):
            b_relation([ZNode(3)], EncodeOf(A))
        with pytest.raises(NotClosed):
            b_relation([EncodeOf(A)], FreeSlot("x"))

    def test_agrees_with_brute_search_on_corpus_scripts(self):
        pool = []
        for a in SMALL[:8]:
            pool.append(list(ln.formula for ln in identity_proof(a).lines))
            pool.append(list(ln.formula for ln in generate_explosion_proof(a, B).lines))
        for lines in pool:
            for cut in range(1, len(lines) + 1):
                sub = lines[:cut]
                for drop in [None] + list(range(len(sub) - 1)):
                    cand = sub if drop is None else sub[:drop] + sub[drop + 1:]
                    assert b_relation([EncodeOf(f) for f in cand], EncodeOf(cand[-1])) == brute_b(cand, cand[-1])

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.sampled_from(
        [ln.formula for ln in identity_proof(A).lines] + [A, Not(A), mk_implication(A, B), B]), min_size=1, max_size=6))
    def test_agrees_on_random_sequences(self, lines):
        assert b_relation([EncodeOf(f) for f in lines], EncodeOf(lines[-1])) == brute_b(lines, lines[-1])
