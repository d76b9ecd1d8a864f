import pytest
from hypothesis import given, settings, strategies as st

from mcforms import engine as E
from mcforms import oracle as O
from mcforms.series import mul


def test_assignment_is_deterministic():
    sym = ("T", 1, 2)
    assert O.Assignment(5)(sym) == O.Assignment(5)(sym)
    assert O.Assignment(5)(("T", 2, 1)) == O.Assignment(5)(sym)


def test_missing_symbol_is_reported():
    g, _ = E.compute_g(2, 3)
    with pytest.raises(KeyError):
        O.specialize_form(g, {})


def test_table_matches_callable():
    g, _ = E.compute_g(2, 2)
    syms = set()
    for (cm, _, _, _) in g.terms:
        syms.update(s for s, _ in cm)
    s = O.Assignment(3)
    assert O.specialize_form(g, O.random_assignment(3, syms)) == O.specialize_form(g, s)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_naive_product_agrees_with_engine(seed):
    h, D = 2, 3
    g, _ = E.compute_g(h, D)
    K = E.compute_K(h, 2, 1)
    K = K.retag(g.ctx) if K.ctx != g.ctx else K
    s = O.Assignment(seed)
    lhs = O.specialize_form(mul(g, K), s)
    rhs = O.naive_mul(O.specialize_form(g, s), O.specialize_form(K, s), D)
    assert lhs == rhs


def test_naive_exp():
    v = O.letter_exp(1, 4)
    assert O.naive_exp({((), None, (1,)): 1}, 4) == v
    assert O.naive_mul(v, O.letter_exp(1, 4, -1), 4) == O.unit()


@pytest.mark.parametrize("ident", ["inverse", "explog", "I", "monodromy-B1-g", "fixedpoint-K1",
                                   "monodromy-B1-K1", "H=gK-1"])
def test_identities_h1(ident):
    r = O.crosscheck(ident, 1, 1, 3, trials=4, seed=11)
    assert r.ok, r.line()


def test_structure_identities():
    for ident in ("composed-map-zero", "tuples-B1(2)", "diagram"):
        assert O.crosscheck(ident, 1, 2, 2, trials=3).ok


def test_unknown_identity():
    with pytest.raises(KeyError):
        O.crosscheck("nope", 1, 1, 2)


def test_negative_control_is_caught():
    r = O.negative_control(1, trials=3)
    assert r.ok and "perturbation detected" in r.detail


def test_report_line():
    r = O.Report("x", True, 1, 1, 3, 20, 42)
    assert r.line() == "PASS x h=1 n=1 D=3 trials=20 seed=42"


@pytest.mark.parametrize("h,n", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_independent_dims(h, n):
    for d in (1, 2, 3):
        assert O.thn_dim_crosscheck(h, n, d)
    assert O.independent_dims(h, n, 3, seed=1) == O.independent_dims(h, n, 3, seed=2)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_witt(q):
    assert all(O.witt_crosscheck(q, d) for d in range(1, 5))
