import json

import pytest

from mcforms import engine as E
from mcforms.render import from_json, from_json_obj, to_json, to_json_obj, to_latex, to_lines, to_text
from mcforms.series import Expr


@pytest.mark.parametrize("make", [
    lambda: E.compute_g(2, 3)[0],
    lambda: E.compute_I(1, 3),
    lambda: E.compute_K(2, 2, 1),
    lambda: E.compute_H(1, 3, 1),
    lambda: E.assemble_boldK(1, 2, 2),
    lambda: E.assemble_boldJ(2, 1, 2),
    lambda: E.bold_g(1, 2, 2),
])
def test_json_roundtrip(make):
    x = make()
    s = to_json(x)
    assert from_json(s) == x
    assert json.loads(s) == to_json_obj(x)
    assert from_json_obj(json.loads(s)) == x


def test_text_K():
    lines = to_lines(E.compute_K(1, 1, 1), "K_1")
    assert lines == [
        "K_1[0] = omega_1",
        "K_1[1] = (id - Psi - op)([2|.] omega_1) (x) b_1 - 1/2 omega_1 (x) b_1",
    ]


def test_text_boldK_degree_one():
    lines = to_lines(E.assemble_boldK(1, 2, 2), "K")
    assert lines[0] == "K[1] = omega_1^(1) (x) a_1^(1) + omega_1^(2) (x) a_1^(2)"


def test_text_g_constants():
    s = to_text(E.compute_g(1, 2)[0])
    assert s.startswith("1 ")
    assert "[2|.]" in s


def test_latex():
    s = to_latex(E.compute_K(1, 1, 1))
    assert "\\otimes" in s and "\\omega" in s


def test_zero():
    from mcforms.series import Context
    assert to_text(Expr(Context(1))) == "0"
