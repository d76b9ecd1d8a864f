from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from mcforms.coeffring import (ConstPoly, is_lyndon, lyndon_factorization, lyndon_words,
                               necklace_count, normalize_loop_const, shuffle,
                               standard_factorization, symbol_value, word_to_lyndon_poly)

words = st.lists(st.integers(1, 3), max_size=5).map(tuple)


@given(words, words)
def test_shuffle_count_is_binomial(u, v):
    sh = shuffle(u, v)
    assert sum(sh.values()) == comb(len(u) + len(v), len(u))
    assert all(len(w) == len(u) + len(v) for w in sh)


@given(words, words)
def test_shuffle_commutes(u, v):
    assert shuffle(u, v) == shuffle(v, u)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=7).map(tuple))
def test_lyndon_factorization(w):
    fs = lyndon_factorization(w)
    assert sum(fs, ()) == w
    assert all(is_lyndon(f) for f in fs)
    assert all(fs[i] >= fs[i + 1] for i in range(len(fs) - 1))


@given(st.lists(st.integers(1, 3), min_size=2, max_size=7).map(tuple))
def test_standard_factorization(w):
    if not is_lyndon(w):
        return
    u, v = standard_factorization(w)
    assert u + v == w and is_lyndon(u) and is_lyndon(v) and u < v


@pytest.mark.parametrize("q,d", [(1, 1), (2, 3), (2, 5), (3, 4), (4, 3)])
def test_lyndon_counts_match_necklace_formula(q, d):
    ws = lyndon_words(range(1, q + 1), d)
    assert len(ws) == necklace_count(q, d)
    assert all(is_lyndon(w) for w in ws)


def test_is_lyndon_small():
    assert is_lyndon((1, 2)) and is_lyndon((1, 1, 2)) and is_lyndon((1, 2, 2))
    assert not is_lyndon((2, 1)) and not is_lyndon((1, 1)) and not is_lyndon((1, 2, 1, 2))


@given(st.lists(st.integers(1, 3), min_size=1, max_size=5).map(tuple))
def test_lyndon_poly_expands_back(w):
    # a product of Lyndon words, expanded with shuffles, reproduces the word
    total = {}
    for factors, c in word_to_lyndon_poly(w):
        acc = {(): 1}
        for f in factors:
            nxt = {}
            for u, a in acc.items():
                for v, b in shuffle(u, f).items():
                    nxt[v] = nxt.get(v, 0) + a * b
            acc = nxt
        for u, a in acc.items():
            total[u] = total.get(u, 0) + c * a
    assert {u: c for u, c in total.items() if c} == {w: 1}


def test_single_letter_loop_is_delta():
    assert normalize_loop_const((3,), 3) == (((), Fraction(1)),)
    assert normalize_loop_const((2,), 3) == ()


def test_loop_shuffle_relation():
    # [1|c][2|c] = [12|c] + [21|c] with both singles zero when c differs
    both = dict(normalize_loop_const((1, 2), 3))
    for m, c in normalize_loop_const((2, 1), 3):
        both[m] = both.get(m, 0) + c
    assert not {m: c for m, c in both.items() if c}
    assert dict(normalize_loop_const((3, 3), 3)) == {(): Fraction(1, 2)}


def test_loop_nonlyndon_rewritten():
    for mono, _ in normalize_loop_const((2, 1), 4):
        for sym, _ in mono:
            assert is_lyndon(sym[1])


polys = st.builds(
    lambda cs: sum((ConstPoly.tau(1, 2) ** k * ConstPoly.const(Fraction(c)) for k, c in enumerate(cs)),
                   ConstPoly()),
    st.lists(st.integers(-5, 5), max_size=3))


@settings(max_examples=50)
@given(polys, polys, polys)
def test_constpoly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ConstPoly()


def test_tau_is_symmetric():
    assert ConstPoly.tau(1, 2) == ConstPoly.tau(2, 1)


def test_symbol_value_deterministic():
    assert symbol_value(3, "T:1,2") == symbol_value(3, "T:1,2")
    vals = {symbol_value(s, "T:1,2") for s in range(20)}
    assert len(vals) > 5
