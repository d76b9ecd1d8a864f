from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcforms.freelie import (LieElem, antipode, bracket, exp_ad, exp_letter, exp_trunc,
                             inverse, is_grouplike, is_primitive, log_trunc, lyndon_basis,
                             lyndon_bracket_expansion, witt_dimension)
from mcforms.series import Context, Expr, mul

CTX = Context(2, 1, 4)


def b(*w, c=1):
    return Expr.term(CTX, c, word=tuple(w))


lie_terms = st.lists(
    st.tuples(st.lists(st.integers(1, 2), min_size=1, max_size=3), st.integers(-3, 3)),
    max_size=4)


def lie_from(terms):
    """Random Lie element: sums of left-nested brackets of letters."""
    out = Expr(CTX)
    for letters, c in terms:
        x = b(letters[0])
        for a in letters[1:]:
            x = bracket(x, b(a))
        out += x.scale(c)
    return out


@settings(max_examples=30, deadline=None)
@given(lie_terms)
def test_exp_log_roundtrip(terms):
    x = lie_from(terms)
    g = exp_trunc(x)
    assert log_trunc(g) == x
    assert is_grouplike(g)
    assert is_primitive(x)


@settings(max_examples=30, deadline=None)
@given(lie_terms)
def test_inverse(terms):
    g = exp_trunc(lie_from(terms))
    one = Expr.one(CTX)
    assert mul(g, inverse(g)) == one
    assert mul(inverse(g), g) == one
    # for grouplike elements the inverse is the antipode
    assert inverse(g) == antipode(g)


@settings(max_examples=30, deadline=None)
@given(lie_terms)
def test_lyndon_coordinates_roundtrip(terms):
    x = lie_from(terms)
    assert LieElem.from_env(x).to_env() == x


def test_non_lie_rejected():
    with pytest.raises(ValueError):
        LieElem.from_env(b(1, 1))
    assert not is_primitive(b(1, 2))


def test_exp_letter():
    assert exp_letter(CTX, 1) == exp_trunc(b(1))
    assert mul(exp_letter(CTX, 2), exp_letter(CTX, 2, -1)) == Expr.one(CTX)


def test_exp_ad_matches_conjugation():
    x, y = b(1), b(2) + b(1, 2, c=3)
    e = exp_trunc(x)
    assert exp_ad(x, y) == mul(mul(e, y), inverse(e))


def test_lyndon_bracket_expansion():
    assert dict(lyndon_bracket_expansion((1, 2))) == {(1, 2): 1, (2, 1): -1}
    assert dict(lyndon_bracket_expansion((1, 1, 2))) == {(1, 1, 2): 1, (1, 2, 1): -2, (2, 1, 1): 1}


@pytest.mark.parametrize("q,d,dim", [(2, 1, 2), (2, 2, 1), (2, 3, 2), (2, 4, 3), (2, 5, 6), (3, 2, 3), (3, 3, 8)])
def test_witt_dims(q, d, dim):
    assert witt_dimension(q, d) == dim == len(lyndon_basis(q, d))


def test_bch_second_order():
    x, y = b(1), b(2)
    z = log_trunc(mul(exp_trunc(x), exp_trunc(y)))
    want = x + y + bracket(x, y).scale(Fraction(1, 2))
    assert z.truncate(2) == want


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError):
        exp_trunc(Expr.one(CTX))
    with pytest.raises(ValueError):
        log_trunc(b(1))
