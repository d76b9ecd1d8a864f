import pytest

from mcforms import engine as E
from mcforms import lowdegree as G
from mcforms.freelie import exp_letter, exp_trunc, is_grouplike, is_primitive
from mcforms.series import Expr, mul
from mcforms.symcalc import deck_pullback, omega
from mcforms.thn import transpose_coords


@pytest.mark.parametrize("h,D", [(1, 3), (1, 4), (2, 2), (2, 3)])
def test_g_basics(h, D):
    g, ginv = E.compute_g(h, D)
    one = Expr.one(g.ctx)
    assert mul(g, ginv) == one == mul(ginv, g)
    assert is_grouplike(g)
    lam = E.compute_log_g(h, D)
    assert is_primitive(lam) and exp_trunc(lam) == g
    assert E.compute_I(h, D) == E.I_from_g(h, D) == E.I_from_lambda(h, D)


@pytest.mark.parametrize("h,D", [(1, 3), (2, 3)])
def test_g_monodromy(h, D):
    g, _ = E.compute_g(h, D)
    for j in range(1, h + 1):
        assert deck_pullback(g, (j,)) == g
        assert deck_pullback(g, (h + j,)) == mul(g, exp_letter(g.ctx, j, -1))


@pytest.mark.parametrize("h,D", [(1, 3), (2, 2)])
def test_K_H(h, D):
    g, _ = E.compute_g(h, D)
    for i in range(1, h + 1):
        K = E.compute_K(h, D, i)
        H = E.compute_H(h, D, i)
        assert K.degree_part(0) == omega(g.ctx, i)
        assert not E.fixed_point_residual(h, D, i)
        assert E.K_series(h, D, i) == K
        assert H == mul(g, K)
        for j in range(1, h + 1):
            assert deck_pullback(K, (h + j,)) == mul(exp_letter(g.ctx, j), K)
            assert deck_pullback(H, (h + j,)) == H


@pytest.mark.parametrize("name", sorted(G.GOLDENS))
def test_goldens_h1(name):
    fn = {"g": lambda: E.compute_g(1, 3)[0], "log-g": lambda: E.compute_log_g(1, 3),
          "I": lambda: E.compute_I(1, 3), "boldK": lambda: E.assemble_boldK(1, 1, 3),
          "boldJ": lambda: E.assemble_boldJ(1, 1, 3)}[name]
    x, gold = fn(), G.GOLDENS[name](1)
    for d in (1, 2, 3):
        assert x.degree_part(d) == gold.degree_part(d)


def test_lambda_golden_h1():
    lam = E.solve_lambda(1, 3)
    gl = G.lambda_golden(1)
    assert all(lam[c] == gl[c] for c in gl)


def test_holonomy():
    for c in (1, 2, 3, 4):
        want = Expr.one(E.context(2, 3)) if c <= 2 else exp_letter(E.context(2, 3), c - 2)
        assert E.holonomy(2, 3, c) == want


def test_boldK_symmetric_under_transposition():
    x = E.assemble_boldK(1, 2, 2)
    assert transpose_coords(x, 1, 2) == x


def test_diagram_small():
    g, _ = E.compute_g(1, 2)
    kt = E.explicit_K_tuple(1, 2)
    lhs = E.bold_s_gamma(E.tuple_to_bold(kt, 2, 2), g)
    assert lhs == E.tuple_to_bold(E.S_gamma(kt, g), 2, 2)


def test_resolve_omega_word_reassembles_K():
    from mcforms.freelie import all_words
    h, D = 1, 3
    ctx = E.context(h, D)
    acc = Expr(ctx)
    for d in range(D + 1):
        for w in all_words(range(1, h + 1), d):
            acc += mul(E.resolve_omega_word(h, D, w + (1,)), Expr.term(ctx, 1, word=w))
    assert acc == E.compute_K(h, D, 1)
