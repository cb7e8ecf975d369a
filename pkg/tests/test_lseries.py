"""L-values with certified tails: closed-form oracles, tail honesty, the
class number formula, the correlation main term and truncation envelopes."""

import math
from fractions import Fraction

import pytest

from diagqf.arith import is_squarefree
from diagqf.classgroup import reduced_forms
from diagqf.lseries import (
    LValue,
    ProductCharacter,
    class_number_formula_check,
    l_value,
    main_term,
    main_term_report,
    truncated_l1,
)

CATALAN = 0.9159655941772190150546035149324  # L(2, chi_{-4})


def test_product_character_basic():
    chi = ProductCharacter((-4,))
    assert chi.modulus == 4
    assert [chi.value(n) for n in range(1, 9)] == [1, 0, -1, 0, 1, 0, -1, 0]
    chi2 = ProductCharacter((-4, 5))
    assert chi2.modulus == 20
    for n in range(1, 41):
        assert chi2.value(n) == chi.value(n) * ProductCharacter((5,)).value(n)


def test_principal_detection():
    assert ProductCharacter((-4, -4)).is_principal
    assert ProductCharacter((1,)).is_principal
    assert not ProductCharacter((-4,)).is_principal
    assert not ProductCharacter((-20, -52)).is_principal


def test_rejects_non_fundamental_factors():
    with pytest.raises(ValueError):
        ProductCharacter((6,))


def test_l1_chi_minus4_is_pi_over_4():
    lv = l_value(ProductCharacter((-4,)), 1, 1e-8)
    assert lv.method == "partial-summation"
    assert lv.tail_bound <= 1e-8
    assert abs(lv.value - math.pi / 4) <= lv.tail_bound


def test_l1_chi_minus20_is_pi_over_sqrt5():
    # class number formula inverted with h = 2 from the reduced forms
    h = len(reduced_forms(-20))
    oracle = h * math.pi / math.sqrt(20)
    lv = l_value(ProductCharacter((-20,)), 1, 1e-8)
    assert abs(lv.value - oracle) <= lv.tail_bound
    assert oracle == pytest.approx(math.pi / math.sqrt(5), rel=1e-15)


def test_l2_chi_minus4_is_catalan():
    lv = l_value(ProductCharacter((-4,)), 2, 1e-9)
    assert lv.method == "direct-with-tail"
    assert abs(lv.value - CATALAN) <= lv.tail_bound <= 1e-9


def test_principal_rejected():
    chi = ProductCharacter((-4, -4))
    for s in (1, 2):
        with pytest.raises(ValueError, match="principal"):
            l_value(chi, s)


def test_l_value_self_consistency():
    # doubling the number of terms moves the value by less than the bound
    for factors in ((-4,), (-20,), (-52,), (-20, -52), (-84, -4)):
        chi = ProductCharacter(factors)
        for s in (1, 2):
            lv = l_value(chi, s, 1e-8)
            finer = l_value(chi, s, 1e-8, terms=2 * lv.terms_used)
            assert abs(finer.value - lv.value) <= lv.tail_bound, (factors, s)


def test_class_number_formula_recovers_h():
    for z in (5, 13, 21):
        assert class_number_formula_check(z, 1e-8) < 1e-6
    for z in range(5, 201, 4):
        if not is_squarefree(z):
            continue
        res = class_number_formula_check(z, 1e-8)
        assert res < 1e-3, z
        lv = l_value(ProductCharacter((-4 * z,)), 1, 1e-8)
        assert round(math.sqrt(4 * z) / math.pi * lv.value) == len(reduced_forms(-4 * z)), z


def test_main_term_d_sum_for_5_13():
    rep = main_term_report(5, 13, 1000.0)
    assert dict(rep.d_terms) == {1: 1.0, -4: 1.0}
    assert rep.d_sum == 2.0
    assert rep.l1.tail_bound <= 1e-8 and rep.l2.tail_bound <= 1e-8


def test_main_term_d_terms_for_5_65():
    rep = main_term_report(5, 65, 100.0)
    assert [d for d, _ in rep.d_terms] == [1, -4, 5, -20]
    assert rep.d_terms[0][1] == 1.0  # empty product


def test_main_term_euler_factors_exact():
    # d = -4 factor for (5, 13): (1 - 1/2) / (1 - chi_5 chi_13(2)/2) = 1
    assert Fraction(2 - 1, 2 - 1) == 1
    rep = main_term_report(5, 13, 1.0)
    assert rep.d_terms[1] == (-4, 1.0)


def test_main_term_linear_in_x():
    for X in (10.0, 1234.0, 1e6):
        assert main_term(5, 13, 2 * X) == 2 * main_term(5, 13, X)


def test_main_term_positive():
    for z1, z2 in ((5, 13), (5, 21), (13, 17), (5, 65), (29, 33)):
        assert main_term(z1, z2, 1.0) > 0


def test_main_term_rejects_equal_shapes():
    with pytest.raises(ValueError):
        main_term(5, 5, 100.0)


def test_truncated_l1_worked_values():
    chi4 = ProductCharacter((-4,))
    assert truncated_l1(chi4, 1) == 1.0
    assert abs(truncated_l1(chi4, 1000) - math.pi / 4) < 1e-3
    chi20 = ProductCharacter((-20,))
    assert abs(truncated_l1(chi20, 10**4) - math.pi / math.sqrt(5)) < 5e-3


# Frozen from a trusted run; the approximate-functional-equation envelope
# determines shape only, never the constant.
TRUNCATION_ENVELOPE_GUARD = 0.5


def test_truncated_l1_envelope():
    for factors in ((-4,), (-20,), (-52,), (-84,), (-132,), (-20, -52), (-4, -20)):
        chi = ProductCharacter(factors)
        lv = l_value(chi, 1, 1e-10)
        q = chi.modulus
        for Y in (10, 100, 1000, 10**4):
            err = abs(truncated_l1(chi, Y) - lv.value)
            envelope = math.sqrt(q) / Y * math.log(q + 2)
            assert err <= TRUNCATION_ENVELOPE_GUARD * envelope, (factors, Y)


def test_lvalue_record_fields():
    lv = l_value(ProductCharacter((-20,)), 1, 1e-6)
    assert isinstance(lv, LValue)
    assert lv.terms_used >= 1
    d = lv.to_dict()
    assert set(d) == {"value", "tail_bound", "terms_used", "method"}


def test_main_term_report_json_shape():
    d = main_term_report(5, 13, 1000.0).to_dict()
    assert set(d) == {"z1", "z2", "X", "l1", "l2", "d_terms", "d_sum", "value", "tail_bound"}
    assert d["d_terms"] == [{"d": 1, "euler_factor": 1.0}, {"d": -4, "euler_factor": 1.0}]
    assert set(d["l1"]) == {"value", "tail_bound", "terms_used", "method"}


def test_tail_bounds_against_multiprecision():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    for factors in ((-4,), (-20,), (-84,), (8,), (-20, -52), (12, -4)):
        chi = ProductCharacter(factors)
        q = chi.modulus
        for s in (1, 2):
            if s == 1:
                truth = -sum(chi.value(r) * mp.digamma(mp.mpf(r) / q) for r in range(1, q + 1)) / q
            else:
                truth = sum(
                    chi.value(r) * mp.zeta(2, mp.mpf(r) / q) for r in range(1, q + 1)
                ) / mp.mpf(q) ** 2
            lv = l_value(chi, s, 1e-9)
            assert abs(lv.value - float(truth)) <= lv.tail_bound, (factors, s)
