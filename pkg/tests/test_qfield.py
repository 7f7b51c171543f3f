"""Rational-function backend, brackets, q-powers, context inversion."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qbern.errors import (
    DivisionByZero,
    DomainError,
    NonIntegerExponentInSymbolicMode,
)
from qbern.padic import PadicNumber
from qbern.qfield import (
    QContext,
    RationalFunction,
    invert_q,
    q_bracket,
    q_pow,
    reflected_bracket,
    scalars_equal,
)

RF = RationalFunction
SYM = QContext.symbolic()
Q = RF.indeterminate()


def rf(num, den=(1,)):
    return RF(tuple(Fraction(c) for c in num), tuple(Fraction(c) for c in den))


# -- canonical forms ----------------------------------------------------------


def test_gcd_cancellation():
    assert rf((-1, 0, 1), (-1, 1)) == rf((1, 1))  # (q^2-1)/(q-1) = q+1


def test_monic_denominator():
    x = rf((2,), (0, 2))  # 2/(2q) = 1/q
    assert x.den == (Fraction(1, 1) * 0, Fraction(1)) or x.den == (Fraction(0), Fraction(1))
    assert x == rf((1,), (0, 1))


def test_zero_canonical():
    z = rf((0,))
    assert z.is_zero()
    assert z.den == (Fraction(1),)
    assert rf((1, -1)) - rf((1, -1)) == z


def test_zero_denominator_rejected():
    with pytest.raises(DivisionByZero):
        rf((1,), (0,))


def test_route_invariance():
    # 1/(1+q) + 1/(1-q) built two ways
    a = rf((1,), (1, 1))
    b = rf((1,), (1, -1))
    direct = a + b
    combined = rf((2,), (1, 0, -1))
    assert direct == combined
    # product route: 2/(1-q^2)
    assert rf((2,)) / rf((1, 0, -1)) == direct


def test_pow_negative():
    x = rf((0, 1))  # q
    assert x ** -2 == rf((1,), (0, 0, 1))
    with pytest.raises(DivisionByZero):
        rf((0,)) ** -1


def test_reciprocal_substitution():
    # f(q) = 1 + q  ->  f(1/q) = (q+1)/q
    assert rf((1, 1)).substitute_reciprocal() == rf((1, 1), (0, 1))
    f = rf((1, 2, 3), (0, 0, 1))
    g = f.substitute_reciprocal().substitute_reciprocal()
    assert g == f


def test_evaluate_and_pole():
    f = rf((0, 1), (1, 1))  # q/(1+q)
    assert f.evaluate(Fraction(4)) == Fraction(4, 5)
    with pytest.raises(DivisionByZero):
        rf((1,), (1, -1)).evaluate(1)


def test_render_and_json():
    f = rf((-1,), (1, 1))
    assert f.render() == "(-1)/(1 + q)"
    data = f.to_json()
    assert data == {"num": ["-1"], "den": ["1", "1"]}
    assert RF.from_json(data) == f
    g = rf((1, 0, Fraction(3, 2)))
    assert RF.from_json(g.to_json()) == g


coeffs = st.lists(
    st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=20),
    min_size=0, max_size=5,
)


@st.composite
def rationals_of_q(draw):
    num = tuple(draw(coeffs))
    den = tuple(draw(coeffs))
    if not any(den):
        den = (Fraction(1),)
    return RF(num, den)


@settings(max_examples=50, deadline=None)
@given(rationals_of_q(), rationals_of_q(), rationals_of_q())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=50, deadline=None)
@given(rationals_of_q())
def test_add_neg_cancels(a):
    assert (a + (-a)).is_zero()
    if not a.is_zero():
        assert a / a == rf((1,))


# -- brackets ------------------------------------------------------------------


def test_bracket_examples():
    assert q_bracket(0, SYM).is_zero()
    assert q_bracket(3, SYM) == rf((1, 1, 1))
    assert q_bracket(-1, SYM) == rf((-1,), (0, 1))


def test_bracket_geometric_fallback_consistent():
    # the closed formula (1-q^x)/(1-q) agrees with the geometric sum
    for x in (1, 5, 12):
        closed = (SYM.one() - q_pow(x, SYM)) / (SYM.one() - Q)
        assert q_bracket(x, SYM) == closed


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=-10, max_value=10), st.integers(min_value=-10, max_value=10))
def test_bracket_addition_law_symbolic(x, y):
    lhs = q_bracket(x + y, SYM)
    rhs = q_bracket(x, SYM) + q_pow(x, SYM) * q_bracket(y, SYM)
    assert lhs == rhs


def test_bracket_addition_law_padic(padic_ctx3):
    for x, y in ((Fraction(1, 2), Fraction(1, 5)), (3, Fraction(-7, 4)), (2, 9)):
        lhs = q_bracket(Fraction(x) + Fraction(y), padic_ctx3)
        rhs = q_bracket(x, padic_ctx3) + q_pow(x, padic_ctx3) * q_bracket(y, padic_ctx3)
        assert scalars_equal(lhs, rhs, padic_ctx3)


# -- q powers -------------------------------------------------------------------


def test_q_pow_int():
    assert q_pow(0, SYM) == rf((1,))
    assert q_pow(-1, SYM) == rf((1,), (0, 1))


def test_q_pow_symbolic_rejects_fractions():
    with pytest.raises(NonIntegerExponentInSymbolicMode):
        q_pow(Fraction(1, 2), SYM)


def test_q_pow_series_square_root(padic_ctx3):
    h = q_pow(Fraction(1, 2), padic_ctx3)
    sq = h * h
    assert scalars_equal(sq, padic_ctx3.q, padic_ctx3)


def test_q_pow_series_matches_int_powers(padic_ctx3):
    from qbern.qfield import _binomial_series_q_pow

    for x in (-3, -1, 0, 2, 7):
        direct = q_pow(x, padic_ctx3)
        series = _binomial_series_q_pow(
            PadicNumber.from_int(x, padic_ctx3.pctx), padic_ctx3
        )
        assert scalars_equal(direct, series, padic_ctx3)


def test_q_pow_rejects_outside_zp(padic_ctx3):
    with pytest.raises(DomainError):
        q_pow(Fraction(1, 3), padic_ctx3)


def test_q_pow_is_unit(padic_ctx3):
    assert q_pow(Fraction(4, 5), padic_ctx3).valuation == 0


# -- reflected bracket -----------------------------------------------------------


def test_reflected_examples():
    assert reflected_bracket(0, 5, SYM) == rf((1,))
    assert reflected_bracket(1, 3, SYM).is_zero()
    assert reflected_bracket(1, 0, SYM) == rf((1,))


@pytest.mark.parametrize("x", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_reflected_equals_shifted_bracket(x, n):
    # [1-x]_{1/q}^n = (-1)^n q^n [x-1]_q^n
    lhs = reflected_bracket(x, n, SYM)
    rhs = (-1) ** n * q_pow(n, SYM) * q_bracket(x - 1, SYM) ** n
    assert lhs == rhs


def test_reflected_padic(padic_ctx3):
    x = Fraction(2, 7)
    n = 3
    lhs = reflected_bracket(x, n, padic_ctx3)
    rhs = (-1) ** n * q_pow(n, padic_ctx3) * q_bracket(Fraction(x - 1), padic_ctx3) ** n
    assert scalars_equal(lhs, rhs, padic_ctx3)


# -- context inversion -------------------------------------------------------------


def test_invert_q_symbolic():
    ictx = invert_q(SYM)
    assert q_bracket(2, ictx) == rf((1, 1), (0, 1))  # [2]_{1/q} = (q+1)/q
    assert invert_q(ictx).q == SYM.q


def test_invert_q_padic(padic_ctx3):
    ictx = invert_q(padic_ctx3)
    assert (ictx.q - 1).valuation == 1
    back = invert_q(ictx)
    assert scalars_equal(back.q, padic_ctx3.q, padic_ctx3)


def test_context_validation():
    with pytest.raises(DomainError):
        QContext.padic(3, 24, "1/2")  # nu(q - 1) = 0
    with pytest.raises(DomainError):
        QContext.padic(3, 24, 3)      # q not a unit
    with pytest.raises(DomainError):
        QContext.padic(3, 24, 1)      # q = 1
    with pytest.raises(DomainError):
        QContext.symbolic(RF.from_fraction(1))


def test_backend_coherence(padic_contexts):
    # a symbolic expression specialized at q = 1+p matches the padic value
    expr = (q_bracket(5, SYM) ** 2 - reflected_bracket(2, 3, SYM)) / (SYM.q ** 2 + 1)
    for p, ctx in padic_contexts.items():
        want = PadicNumber.from_fraction(expr.evaluate(1 + p), ctx.pctx)
        got = (q_bracket(5, ctx) ** 2 - reflected_bracket(2, 3, ctx)) / (ctx.q ** 2 + 1)
        assert scalars_equal(got, want, ctx)
