import math
import threading

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint, prime

from psystem import codec
from psystem.codec import (
    EncodeOf, FreeSlot, GapInSequence, IllFormed, ImpNode, Lit, NegNode, NotClosed,
    Overflow, SbNode, SignSeq, TypeMismatch, UnknownSign, ZNode, decode, decode_sequence,
    encode, eval as gn_eval, primes, reflect, sign_of_code, signs, var_code,
)
from psystem.corpus import formulas_up_to
from psystem.syntax import (
    Apply, ForAll, Not, Numeral, Term, VarSym, X1, X2, ZERO, mk_implication, parse_term, x1, x3,
)

from conftest import formulas

A = Apply(X1, x3)


def valid_code(e):
    if e in (1, 3, 5, 7, 9, 11, 13):
        return True
    fac = factorint(e)
    return len(fac) == 1 and min(fac) > 13


def brute_gn(codes):
    # independent of the prime table and of SignSeq
    return math.prod(prime(i + 1) ** c for i, c in enumerate(codes))


class TestSignCodes:
    def test_variables(self):
        assert [var_code(v) for v in (x1, VarSym(2, 1), x3)] == [17, 19, 23]
        assert var_code(X1) == 17 ** 2
        assert var_code(VarSym(1, 3)) == 17 ** 3

    def test_decode_codes(self):
        assert sign_of_code(23) == x3
        assert sign_of_code(17 ** 2) == X1
        assert sign_of_code(29) == VarSym(4, 1)
        assert sign_of_code(9) == 9

    @pytest.mark.parametrize("code", [2, 4, 15, 17 * 19, 2 ** 10, 13 ** 2])
    def test_unknown(self, code):
        with pytest.raises(UnknownSign):
            sign_of_code(code)

    def test_prime_table_threads(self):
        results = []

        def work(i):
            results.append(primes.nth(2000 + i))

        threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(results) == [prime(2000 + i) for i in range(8)]


class TestEncode:
    def test_fixed_values(self):
        assert encode(ZERO) == 2
        assert encode(parse_term("f0")) == 24
        assert encode(parse_term("ff0")) == 2 ** 3 * 3 ** 3 * 5
        assert encode(parse_term("x3")) == 8388608

    @given(formulas)
    def test_matches_brute_product(self, f):
        assert encode(f) == brute_gn(list(signs(f).codes()))

    def test_overflow(self):
        with pytest.raises(Overflow):
            encode(Numeral(2 ** 23))
        with pytest.raises(Overflow):
            encode(Numeral(400), digit_budget=50)

    def test_monotone_extension(self):
        short = SignSeq.of([3, 3, 1])
        assert (short + SignSeq.of([13])).gn() > short.gn()

    def test_run_encoding_merges(self):
        seq = signs(Apply(X1, Numeral(5)))
        assert seq.runs == ((289, 1), (11, 1), (3, 5), (1, 1), (13, 1))
        assert len(seq) == 9


class TestDecode:
    def test_term(self):
        assert decode(1080, "term") == parse_term("ff0")

    def test_gap(self):
        with pytest.raises(GapInSequence):
            decode(14)

    def test_unknown_sign(self):
        with pytest.raises(UnknownSign):
            decode(4)

    def test_ill_formed(self):
        with pytest.raises(IllFormed):
            decode(2 * 3, "formula")  # "0 0"

    def test_empty_rejected(self):
        with pytest.raises(codec.CodecError):
            decode(1)

    def test_formula(self):
        assert decode(encode(A), "formula") == A

    @given(st.integers(2, 10 ** 7))
    def test_sequence_agrees_with_factorint(self, g):
        # first failure scanning 2, 3, 5, ... decides the error
        fac = factorint(g)
        expected, codes = None, []
        for i in range(1, len(fac) + 1 if fac else 1):
            e = fac.get(prime(i), 0)
            if e == 0:
                expected = GapInSequence
                break
            if not valid_code(e):
                expected = UnknownSign
                break
            codes.append(e)
        if expected is None and len(codes) != len(fac):
            expected = GapInSequence
        if expected is None:
            assert list(decode(g)) == codes
        else:
            with pytest.raises(expected):
                decode(g)

    def test_corpus_round_trip(self):
        for f in formulas_up_to(8):
            assert decode(encode(f), "formula") == f


class TestEval:
    def test_z_node(self):
        assert gn_eval(ZNode(2)) == 1080

    def test_encode_of(self):
        assert gn_eval(EncodeOf(ZERO)) == 2

    def test_huge_numeral_overflows(self):
        with pytest.raises(Overflow):
            gn_eval(ZNode(2 ** 23))

    def test_free_slot(self):
        with pytest.raises(NotClosed):
            gn_eval(SbNode(FreeSlot("x"), 23, ZNode(1)))

    def test_identity_substitution_evaluates_without_replacement(self):
        # the replacement alone overflows, but 23 does not occur in Enc(X1(0))
        g = SbNode(EncodeOf(Apply(X1, ZERO)), 23, ZNode(2 ** 23))
        assert gn_eval(g) == encode(Apply(X1, ZERO))


class TestReflect:
    def test_numeral(self):
        assert reflect(ZNode(3)) == Numeral(3)

    def test_homomorphism(self):
        g = ImpNode(EncodeOf(A), NegNode(EncodeOf(A)))
        assert reflect(g) == mk_implication(A, Not(A))

    def test_substitution(self):
        assert reflect(SbNode(EncodeOf(A), 23, ZNode(2))) == Apply(X1, parse_term("ff0"))

    def test_lit(self):
        assert reflect(Lit(encode(A))) == A
        assert reflect(Lit(8388608)) == Term(0, x3)

    def test_term_under_connective(self):
        with pytest.raises(IllFormed):
            reflect(NegNode(ZNode(2 ** 23)))

    def test_formula_as_substitutend(self):
        with pytest.raises(TypeMismatch):
            reflect(SbNode(EncodeOf(A), 23, EncodeOf(A)))

    def test_not_closed(self):
        with pytest.raises(NotClosed):
            reflect(NegNode(FreeSlot("x")))

    def test_reflect_encode_identity(self):
        for f in formulas_up_to(10):
            assert reflect(EncodeOf(f)) == f
            assert reflect(Lit(encode(f))) == f

    def test_symbolic_rendering(self):
        g = SbNode(Lit(8388608), 23, ZNode(8388608))
        assert str(g) == "Sb(Lit(8388608), 23, Z(8388608))"

    @settings(max_examples=50)
    @given(formulas)
    def test_reflect_lit_random(self, f):
        g = encode(f)
        assert reflect(Lit(g)) == f


def test_quantified_round_trip():
    f = ForAll(X2, ForAll(x1, Apply(X2, x1)))
    assert decode(encode(f), "formula") == f
    assert decode_sequence(encode(f)) == signs(f)
