"""Hand-entered low-degree formulas (n = 1), used as golden references.

Each function builds a closed form independently of the engine recursions,
using only the symbol constructors and the Psi/op rewrite rules.  Two index
conventions matter: the first log g term sums over ``i = 1..h``, and the
single-letter function in the cubic term of g is ``[r|.]``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict

from .freelie import bracket
from .series import Context, Expr, mul
from .symcalc import func, gamma, loop, omega, op_minus_id, psi_plus_op
from .thn import from_tvec, presentation, thn_context

F = Fraction


def _ctx(h: int, D: int = 3) -> Context:
    return Context(h, 1, D, "envb")


def _b(ctx, *letters) -> Expr:
    return Expr.term(ctx, 1, word=tuple(letters))


def _d(*xs) -> int:
    return int(all(x == xs[0] for x in xs))


def lambda_golden(h: int) -> Dict[int, Expr]:
    """``Lambda_1..Lambda_2h`` through degree 3."""
    ctx = _ctx(h)
    H = h
    out = {}
    for c in range(1, 2 * h + 1):
        x = Expr(ctx)
        if c > h:
            l = c - h
            x += _b(ctx, l) + _b(ctx, l, l).scale(F(1, 2)) + _b(ctx, l, l, l).scale(F(1, 6))
        for i in range(1, h + 1):
            bi = _b(ctx, i) + _b(ctx, i, i).scale(F(1, 2))
            for j in range(1, h + 1):
                bj = _b(ctx, j) + _b(ctx, j, j).scale(F(1, 2))
                x -= mul(loop(ctx, (H + i, H + j), c), mul(bi, bj))
                for k in range(1, h + 1):
                    co = loop(ctx, (H + i, H + j, H + k), c)
                    for r in range(1, 2 * h + 1):
                        co -= mul(loop(ctx, (H + j, H + k), r), loop(ctx, (H + i, r), c))
                        co -= mul(loop(ctx, (H + i, H + j), r), loop(ctx, (r, H + k), c))
                    x -= mul(co, _b(ctx, i, j, k))
        out[c] = x.truncate(3)
    return out


def _g2_coeff(ctx, i, j) -> Expr:
    h = ctx.h
    co = func(ctx, (h + j, h + i))
    for r in range(1, 2 * h + 1):
        co += mul(loop(ctx, (h + i, h + j), r), func(ctx, (r,)))
    return co


def g_golden(h: int) -> Expr:
    """``g[0..3]``."""
    ctx = _ctx(h)
    x = Expr.one(ctx)
    for i in range(1, h + 1):
        f = func(ctx, (h + i,))
        x -= mul(f, _b(ctx, i))
        x -= mul(f, _b(ctx, i, i)).scale(F(1, 2))
        x -= mul(f, _b(ctx, i, i, i)).scale(F(1, 6))
    for i in range(1, h + 1):
        for j in range(1, h + 1):
            co = _g2_coeff(ctx, i, j)
            x += mul(co, _b(ctx, i, j))
            x += mul(co, _b(ctx, i, i, j) + _b(ctx, i, j, j)).scale(F(1, 2))
    for i in range(1, h + 1):
        for j in range(1, h + 1):
            for k in range(1, h + 1):
                co = -func(ctx, (h + k, h + j, h + i))
                for r in range(1, 2 * h + 1):
                    inner = loop(ctx, (h + i, h + j, h + k), r)
                    for s in range(1, 2 * h + 1):
                        inner -= mul(loop(ctx, (h + i, h + j), s), loop(ctx, (s, h + k), r))
                        inner -= mul(loop(ctx, (h + j, h + k), s), loop(ctx, (h + i, s), r))
                    co += mul(inner, func(ctx, (r,)))
                    co -= mul(loop(ctx, (h + i, h + j), r), func(ctx, (h + k, r)))
                    co -= mul(loop(ctx, (h + j, h + k), r), func(ctx, (r, h + i)))
                x += mul(co, _b(ctx, i, j, k))
    return x


def _br(ctx, i, j) -> Expr:
    return bracket(_b(ctx, i), _b(ctx, j))


def _br3(ctx, i, j, k) -> Expr:
    return bracket(_b(ctx, i), _br(ctx, j, k))


def log_g_golden(h: int) -> Expr:
    """``lambda[1..3]``."""
    ctx = _ctx(h)
    x = Expr(ctx)
    for i in range(1, h + 1):
        x -= mul(func(ctx, (h + i,)), _b(ctx, i))
    for i in range(1, h + 1):
        for j in range(1, h + 1):
            co = func(ctx, (h + i, h + j))
            for r in range(1, 2 * h + 1):
                co -= mul(loop(ctx, (h + i, h + j), r), func(ctx, (r,)))
            x -= mul(co, _br(ctx, i, j)).scale(F(1, 2))
    for i in range(1, h + 1):
        for j in range(1, h + 1):
            for k in range(1, h + 1):
                hi, hj, hk = h + i, h + j, h + k
                co = (func(ctx, (hj, hk, hi)) - func(ctx, (hi, hj, hk))).scale(F(1, 6))
                for r in range(1, 2 * h + 1):
                    c6 = loop(ctx, (hi, hj, hk), r) - loop(ctx, (hj, hk, hi), r)
                    co += mul(c6, func(ctx, (r,))).scale(F(1, 6))
                for s in range(1, 2 * h + 1):
                    inner = func(ctx, (hi, s)) - func(ctx, (s, hi))
                    for r in range(1, 2 * h + 1):
                        inner += mul(loop(ctx, (s, hi), r) - loop(ctx, (hi, s), r), func(ctx, (r,)))
                    co += mul(loop(ctx, (hj, hk), s), inner).scale(F(1, 4))
                x += mul(co, _br3(ctx, i, j, k))
    return x


def _I2_coeff(ctx, i, j) -> Expr:
    h = ctx.h
    co = Expr(ctx)
    for r in range(1, 2 * h + 1):
        co += mul(loop(ctx, (h + i, h + j), r), gamma(ctx, r))
    return co.scale(F(-1, 2))


def _I3_coeff(ctx, i, j, k) -> Expr:
    h = ctx.h
    hi, hj, hk = h + i, h + j, h + k
    co = Expr(ctx)
    for r in range(1, 2 * h + 1):
        c = (loop(ctx, (hi, hj, hk), r) - loop(ctx, (hj, hk, hi), r)).scale(F(1, 6))
        for s in range(1, 2 * h + 1):
            c += mul(loop(ctx, (hj, hk), s),
                     loop(ctx, (s, hi), r) - loop(ctx, (hi, s), r)).scale(F(1, 4))
        co += mul(c, gamma(ctx, r))
    return -co


def I_golden(h: int) -> Expr:
    """``I[1..3]``."""
    ctx = _ctx(h)
    x = Expr(ctx)
    for i in range(1, h + 1):
        x += gamma(ctx, h + i, word=(i,))
    for i in range(1, h + 1):
        for j in range(1, h + 1):
            x += mul(_I2_coeff(ctx, i, j), _br(ctx, i, j))
            for k in range(1, h + 1):
                x += mul(_I3_coeff(ctx, i, j, k), _br3(ctx, i, j, k))
    return x


# -- t_{h,1}-valued forms ------------------------------------------------------

def _K2_inner(ctx, i, j) -> Expr:
    x = mul(func(ctx, (ctx.h + i,)), omega(ctx, j))
    return -op_minus_id(x) - omega(ctx, i).scale(F(_d(i, j), 2))


def _K3_inner(ctx, i, j, k) -> Expr:
    """Argument of ``(-id + Psi + op)`` in the cubic coefficient."""
    h = ctx.h
    w = omega(ctx, k)
    f = func(ctx, (h + i,)).scale(F(_d(i, j) + _d(j, k), 2)) - func(ctx, (h + i, h + j))
    for r in range(1, 2 * h + 1):
        f -= mul(loop(ctx, (h + j, h + i), r), func(ctx, (r,)))
    x = mul(f, w)
    x += mul(func(ctx, (h + i,)), psi_plus_op(mul(func(ctx, (h + j,)), w)))
    return x


def _thn_terms(h: int, coeffs) -> Expr:
    """``sum coeff (x) [gens...]`` with right-nested brackets."""
    tctx = thn_context(h, 1, 3)
    p = presentation(h, 1)
    out = Expr(tctx)
    for letters, co in coeffs:
        vec = p.gen_vec(letters[-1])
        for g in reversed(letters[:-1]):
            vec = p.bracket(p.gen_vec(g), vec, 3)
        out += from_tvec(tctx, vec, co)
    return out


def boldK_golden(h: int) -> Expr:
    """``K[1..3]`` for n = 1."""
    ctx = _ctx(h)
    p = presentation(h, 1)
    a, b = p.a, p.b
    items = []
    for i in range(1, h + 1):
        items.append(((a(i),), omega(ctx, i)))
        for j in range(1, h + 1):
            items.append(((b(i), a(j)), _K2_inner(ctx, i, j)))
            for k in range(1, h + 1):
                co = op_minus_id(_K3_inner(ctx, i, j, k))
                co += omega(ctx, i).scale(F(_d(i, j, k), 12))
                items.append(((b(i), b(j), a(k)), co))
    return _thn_terms(h, items)


def boldJ_golden(h: int) -> Expr:
    """``J[1..3]`` for n = 1."""
    ctx = _ctx(h)
    p = presentation(h, 1)
    a, b = p.a, p.b
    items = []
    for i in range(1, h + 1):
        items.append(((b(i),), gamma(ctx, h + i)))
        items.append(((a(i),), omega(ctx, i)))
        for j in range(1, h + 1):
            items.append(((b(i), b(j)), _I2_coeff(ctx, i, j)))
            co = psi_plus_op(mul(func(ctx, (h + i,)), omega(ctx, j)))
            co += omega(ctx, i).scale(F(_d(i, j), 2))
            items.append(((b(i), a(j)), -co))
            for k in range(1, h + 1):
                items.append(((b(i), b(j), b(k)), _I3_coeff(ctx, i, j, k)))
                co = psi_plus_op(_K3_inner(ctx, i, j, k))
                co += omega(ctx, i).scale(F(_d(i, j, k), 12))
                items.append(((b(i), b(j), a(k)), co))
    return _thn_terms(h, items)


GOLDENS = {
    "g": g_golden,
    "log-g": log_g_golden,
    "I": I_golden,
    "boldK": boldK_golden,
    "boldJ": boldJ_golden,
}
