from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcforms.series import Context, Expr, mul
from mcforms.symcalc import (acyc, at_basepoint, bernoulli, beta, deck_pullback, differential,
                             func, gamma, integrate, omega, omega_expand, op_apply,
                             op_evaluated, op_minus_id, psi_apply, relabel_coords, tau)

H = 2
CTX = Context(H, 1, 3)

fwords = st.lists(st.integers(1, 2 * H), min_size=1, max_size=3).map(tuple)


def funcs_from(items):
    out = Expr(CTX)
    for w, c in items:
        out += func(CTX, w).scale(c)
    return out


fexprs = st.lists(st.tuples(fwords, st.integers(-3, 3)), min_size=1, max_size=3).map(funcs_from)
forms = st.tuples(fexprs, st.integers(1, 2 * H)).map(lambda t: mul(t[0], gamma(CTX, t[1])))


def test_bernoulli_values():
    want = [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42)]
    assert [bernoulli(k) for k in range(7)] == want


def test_differential_of_iterated_integral():
    f = func(CTX, (3, 1))
    assert differential(f) == mul(func(CTX, (3,)), gamma(CTX, 1))
    assert differential(func(CTX, (2,))) == gamma(CTX, 2)


@settings(max_examples=40, deadline=None)
@given(fexprs)
def test_integrate_inverts_differential(f):
    assert integrate(differential(f)) == f - at_basepoint(f)


@settings(max_examples=40, deadline=None)
@given(forms)
def test_differential_inverts_integrate(x):
    assert differential(integrate(x)) == omega_expand(x)


def test_omega_expand():
    want = gamma(CTX, 1) + mul(tau(CTX, 1, 1), beta(CTX, 1)) + mul(tau(CTX, 1, 2), beta(CTX, 2))
    assert omega_expand(omega(CTX, 1)) == want


@pytest.mark.parametrize("i", range(1, 2 * H + 1))
def test_psi_op_split_function_free_forms(i):
    x = gamma(CTX, i)
    p, o = psi_apply(x), op_apply(x)
    assert psi_apply(p) == p
    assert op_apply(o) == o
    assert not psi_apply(o) and not op_apply(p)
    assert omega_expand(p + o) == x


@settings(max_examples=30, deadline=None)
@given(forms)
def test_psi_idempotent_on_nodes(x):
    p = psi_apply(x)
    assert psi_apply(p) == p
    assert not op_apply(p)


@settings(max_examples=30, deadline=None)
@given(forms)
def test_op_evaluated_has_same_a_periods(x):
    y = op_evaluated(x)
    for k in range(1, H + 1):
        assert acyc(k, y) == acyc(k, x)


def test_a_periods_of_omega():
    for k in range(1, H + 1):
        for j in range(1, H + 1):
            want = Expr.one(CTX) if j == k else Expr(CTX)
            assert acyc(k, omega(CTX, j)) == want


def test_op_minus_id():
    x = mul(func(CTX, (3,)), omega(CTX, 1))
    assert op_minus_id(x) == psi_apply(x) + op_apply(x) - x


@settings(max_examples=30, deadline=None)
@given(fexprs, fexprs, st.integers(1, 2 * H))
def test_pullback_is_multiplicative(f1, f2, c):
    lhs = deck_pullback(mul(f1, f2), (c,))
    assert lhs == mul(deck_pullback(f1, (c,)), deck_pullback(f2, (c,)))


@settings(max_examples=30, deadline=None)
@given(fexprs, st.integers(1, 2 * H))
def test_pullback_inverse(f, c):
    assert deck_pullback(f, (c, -c)) == f
    assert deck_pullback(f, (-c, c)) == f


def test_single_letter_pullback_shift():
    # [c|.] picks up the period delta under the c-th deck transformation
    for c in range(1, 2 * H + 1):
        f = func(CTX, (c,))
        assert deck_pullback(f, (c,)) == f + Expr.one(CTX)
        other = 1 + c % (2 * H)
        assert deck_pullback(f, (other,)) == f


def test_relabel_coords():
    x = mul(func(CTX, (1,), 1), gamma(CTX, 2, 1))
    y = relabel_coords(x, {1: 2})
    assert y == mul(func(CTX, (1,), 2), gamma(CTX, 2, 2))
    assert relabel_coords(y, {2: 1}) == x


def test_bad_indices():
    with pytest.raises(ValueError):
        omega(CTX, H + 1)
    with pytest.raises(ValueError):
        func(CTX, (2 * H + 1,))
    with pytest.raises(ValueError):
        deck_pullback(func(CTX, (1,)), (2 * H + 1,))
