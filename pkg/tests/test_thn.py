from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mcforms.thn import (from_tvec, presentation, relation_residuals, tbracket, thn_context,
                         transpose_coords)

DIMS = {(1, 1): [2, 0, 0], (1, 2): [4, 1, 2], (2, 1): [4, 5, 16], (2, 2): [8, 11, 36]}


@pytest.mark.parametrize("hn", sorted(DIMS))
def test_dims(hn):
    p = presentation(*hn)
    assert [p.dim(d) for d in (1, 2, 3)] == DIMS[hn]


@pytest.mark.parametrize("hn", sorted(DIMS))
def test_relations_project_to_zero(hn):
    assert not any(relation_residuals(*hn, 3))


@pytest.mark.parametrize("h,n", [(1, 2), (2, 2), (1, 3)])
def test_t_symmetric_but_nonzero(h, n):
    p = presentation(h, n)
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            assert not p.nf({(p.t(r, s),): Fraction(1), (p.t(s, r),): Fraction(-1)})
            assert p.nf({(p.t(r, s),): Fraction(1)})


def test_genus_relation():
    p = presentation(2, 1)
    v = tbracket(p.gen_vec(p.b(1)), p.gen_vec(p.a(1)))
    w = tbracket(p.gen_vec(p.b(2)), p.gen_vec(p.a(2)))
    assert not p.nf({**v, **{k: c for k, c in w.items()}})
    assert p.nf(v)


P = presentation(2, 2)
gen_ids = st.integers(0, len(P.kind) - 1)


def elem(items):
    out = {}
    for g, c in items:
        out[(g,)] = out.get((g,), 0) + Fraction(c)
    return {k: v for k, v in out.items() if v}


elems = st.lists(st.tuples(gen_ids, st.integers(-3, 3)), max_size=3).map(elem)


@settings(max_examples=30, deadline=None)
@given(elems, elems, elems)
def test_bracket_jacobi_and_antisymmetry(x, y, z):
    D = 4
    xy = P.bracket(x, y, D)
    yx = P.bracket(y, x, D)
    assert not P.nf(_add(xy, yx))
    j = _add(_add(P.bracket(x, P.bracket(y, z, D), D), P.bracket(y, P.bracket(z, x, D), D)),
             P.bracket(z, P.bracket(x, y, D), D))
    assert not P.nf(j)


def _add(a, b):
    out = dict(a)
    for k, c in b.items():
        t = out.get(k, 0) + c
        if t:
            out[k] = t
        else:
            out.pop(k, None)
    return out


@pytest.mark.parametrize("hn", sorted(DIMS))
def test_display_basis_coordinates(hn):
    p = presentation(*hn)
    for d in (1, 2, 3):
        chosen, _ = p.basis(d)
        assert len(chosen) == p.dim(d)
        for w in chosen:
            assert p.coordinates(p.nf(p._lyndon_bracket(w))) == {w: 1}


def test_bracket_labels():
    p = presentation(1, 1)
    assert p.labels == ["a_1", "b_1"]
    q = presentation(1, 2)
    assert "t_12" in q.labels and "a_1^(2)" in q.labels
    chosen, _ = q.basis(2)
    assert [q.bracket_label(w) for w in chosen] == ["t_12"]


def test_transpose_is_involution():
    ctx = thn_context(1, 2, 3)
    p = presentation(1, 2)
    x = from_tvec(ctx, tbracket(p.gen_vec(p.a(1, 1)), p.gen_vec(p.t(1, 2))))
    x += from_tvec(ctx, p.gen_vec(p.b(1, 2)))
    y = transpose_coords(x, 1, 2)
    assert y != x
    assert transpose_coords(y, 1, 2) == x
