"""Degreewise construction of Lambda, g, log g, I, K, H and the t_{h,n} forms K, J.

All results are exact ``Expr`` objects truncated at the maximum degree D.
Single-curve objects live in the ``envb`` context (letters b_1..b_h, curve
coordinate 1).  Results are cached per (h, D); callers must not mutate them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Tuple

from .coeffring import normalize_loop_const
from .freelie import (antipode, bernoulli_seed_series, bracket, exp_letter, inverse,
                      log_trunc, partial)
from .series import Context, Expr, mul, sum_exprs
from .symcalc import (bernoulli, cycle_integral, differential, gamma, integrate,
                      omega, omega_word, op_minus_id, psi_plus_op, psi_word,
                      relabel_coords)
from .thn import (ad_apply, ad_on_generator, lie_series_to_thn, presentation,
                  thn_context, transpose_coords)

MAX_DEFAULT_D = 4


def context(h: int, D: int) -> Context:
    return Context(h, 1, D, "envb")


def _check(h: int, D: int):
    if h < 1:
        raise ValueError("genus h must be >= 1")
    if D < 1:
        raise ValueError("maximum degree D must be >= 1")


# ---------------------------------------------------------------------------
# Lambda
# ---------------------------------------------------------------------------

def _word_products(lam: Dict[int, Expr], letters, ctx: Context, reverse=False):
    """All nonzero products ``Lambda_w`` (or reversed) for words w, by DFS."""
    out: List[Tuple[tuple, Expr]] = []
    stack = [((), Expr.one(ctx))]
    while stack:
        w, p = stack.pop()
        out.append((w, p))
        for i in letters:
            q = mul(lam[i], p) if reverse else mul(p, lam[i])
            if q:
                stack.append((w + (i,), q))
    return out


@lru_cache(maxsize=None)
def solve_lambda(h: int, D: int) -> Dict[int, Expr]:
    """Solve the period equations for Lambda_1..Lambda_2h degree by degree.

    ``sum_w [w | A_j] Lambda_w = 1`` and ``sum_w [w | B_j] Lambda_w = exp(b_j)``.
    """
    _check(h, D)
    letters = range(1, 2 * h + 1)
    lam = {c: Expr(context(h, D)) for c in letters}
    for d in range(1, D + 1):
        ctx_d = context(h, d)
        low = {c: lam[c].retag(ctx_d) for c in letters}
        hol = {c: Expr(ctx_d) for c in letters}
        for w, p in _word_products(low, letters, ctx_d):
            if len(w) < 2:
                continue
            pd = p.degree_part(d)
            if not pd:
                continue
            for c in letters:
                for m, v in normalize_loop_const(w, c):
                    hol[c] += _mono_scale(pd, m, v)
        for c in letters:
            rhs = Expr(ctx_d)
            if c > h:
                rhs = Expr.term(ctx_d, Fraction(1, factorial(d)), word=(c - h,) * d)
            new = (rhs - hol[c]).degree_part(d)
            lam[c] = lam[c] + new.retag(context(h, D))
    return lam


def _mono_scale(x: Expr, mono, v) -> Expr:
    from .coeffring import mono_mul
    out = Expr(x.ctx)
    for (cm, f, b, w), c in x.terms.items():
        out._add((mono_mul(cm, mono), f, b, w), c * v)
    return out


def holonomy(h: int, D: int, c: int) -> Expr:
    """``sum_w [w | c] Lambda_w``: 1 on A-cycles, exp(b_j) on B_j."""
    ctx = context(h, D)
    lam = solve_lambda(h, D)
    out = Expr.one(ctx)
    for w, p in _word_products(lam, range(1, 2 * h + 1), ctx):
        if w:
            for m, v in normalize_loop_const(w, c):
                out += _mono_scale(p, m, v)
    return out


# ---------------------------------------------------------------------------
# g
# ---------------------------------------------------------------------------

def _attach(ctx: Context, p: Expr, w: tuple, sign: int) -> Expr:
    out = Expr(ctx)
    f = ((1, w),) if w else ()
    for (cm, _, b, word), c in p.terms.items():
        out._add((cm, f, b, word), sign * c)
    return out


@lru_cache(maxsize=None)
def compute_g(h: int, D: int) -> Tuple[Expr, Expr]:
    """``(g, g^-1)`` with ``g^-1 = sum_w [w|.] Lambda_w``."""
    ctx = context(h, D)
    lam = solve_lambda(h, D)
    letters = range(1, 2 * h + 1)
    ginv = Expr(ctx)
    for w, p in _word_products(lam, letters, ctx):
        ginv += _attach(ctx, p, w, 1)
    g = Expr(ctx)
    for w, p in _word_products(lam, letters, ctx, reverse=True):
        g += _attach(ctx, p, w, (-1) ** len(w))
    return g, ginv


def g_degree(h: int, D: int, d: int) -> Expr:
    return compute_g(h, D)[0].degree_part(d)


# ---------------------------------------------------------------------------
# log g and I
# ---------------------------------------------------------------------------

def _compositions(d: int, parts: int):
    if parts == 1:
        if d >= 1:
            yield (d,)
        return
    for first in range(1, d - parts + 2):
        for rest in _compositions(d - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _log_recursion(h: int, D: int):
    ctx = context(h, D)
    lam: Dict[int, Expr] = {}
    dlam: Dict[int, Expr] = {}
    I: Dict[int, Expr] = {}
    lam[1] = sum_exprs(ctx, (mul(Expr.func(ctx, (h + i,)), Expr.letter(ctx, i)).scale(-1)
                             for i in range(1, h + 1)))
    dlam[1] = differential(lam[1])
    I[1] = sum_exprs(ctx, (gamma(ctx, h + i, word=(i,)) for i in range(1, h + 1)))
    for d in range(2, D + 1):
        X = Expr(ctx)
        for k in range(1, d):
            acc = Expr(ctx)
            for comp in _compositions(d, k + 1):
                y = dlam[comp[-1]]
                for t in reversed(comp[:-1]):
                    y = bracket(lam[t], y)
                acc += y
            X += acc.scale(Fraction(1, factorial(k + 1)))
        X = X.degree_part(d)
        periods = {c: cycle_integral(c, X) for c in range(1, 2 * h + 1)}
        lam_d = Expr(ctx)
        I_d = Expr(ctx)
        for c, per in periods.items():
            lam_d += mul(Expr.func(ctx, (c,)), per)
            I_d -= mul(gamma(ctx, c), per)
        lam_d -= integrate(X)
        lam[d] = lam_d
        dlam[d] = differential(lam_d)
        I[d] = I_d
    return lam, I


def compute_log_g(h: int, D: int) -> Expr:
    """``lambda = log g`` by the degree recursion on periods."""
    _check(h, D)
    lam, _ = _log_recursion(h, D)
    return sum_exprs(context(h, D), lam.values())


def log_g_series(h: int, D: int) -> Expr:
    return log_trunc(compute_g(h, D)[0])


def compute_I(h: int, D: int) -> Expr:
    """``I = g d(g^-1)`` by the degree recursion on periods."""
    _check(h, D)
    _, I = _log_recursion(h, D)
    return sum_exprs(context(h, D), I.values())


def I_from_g(h: int, D: int) -> Expr:
    g, ginv = compute_g(h, D)
    return mul(g, differential(ginv))


def I_from_lambda(h: int, D: int) -> Expr:
    """``I = sum_i gamma_i Lambda_i``."""
    ctx = context(h, D)
    lam = solve_lambda(h, D)
    return sum_exprs(ctx, (mul(gamma(ctx, c), lam[c]) for c in range(1, 2 * h + 1)))


# ---------------------------------------------------------------------------
# K and H
# ---------------------------------------------------------------------------

def seed(h: int, D: int, j: int) -> Expr:
    """``omega_j (x) b_j / (exp(b_j) - 1)``."""
    ctx = context(h, D)
    return mul(omega(ctx, j), bernoulli_seed_series(ctx, j))


@lru_cache(maxsize=None)
def _KH(h: int, D: int, j: int):
    _check(h, D)
    if not 1 <= j <= h:
        raise ValueError(f"index j={j} out of range 1..{h}")
    ctx = context(h, D)
    g, _ = compute_g(h, D)
    gd = {e: g.degree_part(e) for e in range(1, D + 1)}
    K = {0: omega(ctx, j)}
    H = {0: omega(ctx, j)}
    for d in range(1, D + 1):
        Y = sum_exprs(ctx, (mul(gd[e], K[d - e]) for e in range(1, d + 1)))
        s = omega(ctx, j, word=(j,) * d).scale(bernoulli(d) / factorial(d))
        K[d] = s + op_minus_id(Y)
        H[d] = s + psi_plus_op(Y)
    return sum_exprs(ctx, K.values()), sum_exprs(ctx, H.values())


def compute_K(h: int, D: int, j: int) -> Expr:
    """``K_{inf,j}``, the fixed point of ``x = seed + Op((g - 1) x)``."""
    return _KH(h, D, j)[0]


def compute_H(h: int, D: int, j: int) -> Expr:
    """``H_{inf,j} = ((Psi + op) (x) id)((g - 1) K) + seed``."""
    return _KH(h, D, j)[1]


def fixed_point_residual(h: int, D: int, j: int) -> Expr:
    """``K - seed - Op((g - 1) K)``; zero for the true fixed point."""
    g, _ = compute_g(h, D)
    K = compute_K(h, D, j)
    return K - seed(h, D, j) - op_minus_id(mul(g - Expr.one(g.ctx), K))


def K_series(h: int, D: int, j: int) -> Expr:
    """``sum_r (Op o (g - 1))^r (seed)``, computed as an iterated series."""
    g, _ = compute_g(h, D)
    gm1 = g - Expr.one(g.ctx)
    term = seed(h, D, j)
    total = term.copy()
    for _ in range(D):
        term = op_minus_id(mul(gm1, term))
        if not term:
            break
        total += term
    return total


def resolve_omega_word(h: int, D: int, word) -> Expr:
    """Explicit ``omega_{inf, i1..im}`` by the nested Op formula.

    ``omega_{u1..ur j^l j}`` collects ``Op(g_u1 Op(g_u2 ... Op(g_ur omega_j)))``
    times ``B_l / l!``, summed over all splittings of the word.
    """
    word = tuple(word)
    if not word:
        raise ValueError("omega word must be nonempty")
    ctx = context(h, D)
    j = word[-1]
    body = word[:-1]
    g, _ = compute_g(h, D)
    gco = g.group_by_word()
    zero = Expr(ctx)

    @lru_cache(maxsize=None)
    def nested(u: tuple) -> Expr:
        if not u:
            return omega(ctx, j)
        acc = Expr(ctx)
        for k in range(1, len(u) + 1):
            head = gco.get(u[:k], zero)
            if head:
                acc += op_minus_id(mul(head, nested(u[k:])))
        return acc

    out = Expr(ctx)
    for l in range(len(body) + 1):
        if all(a == j for a in body[len(body) - l:]):
            out += nested(body[:len(body) - l]).scale(bernoulli(l) / factorial(l))
    return out


# ---------------------------------------------------------------------------
# tuples
# ---------------------------------------------------------------------------

@dataclass
class KTuple:
    """``(kappa_1, .., kappa_h, under)``; kappas live on coordinate 1, under on (1, 2)."""

    kappas: List[Expr]
    under: Expr

    def __eq__(self, other):
        return (isinstance(other, KTuple) and len(self.kappas) == len(other.kappas)
                and all(a == b for a, b in zip(self.kappas, other.kappas))
                and self.under == other.under)

    __hash__ = None

    def __sub__(self, other):
        return KTuple([a - b for a, b in zip(self.kappas, other.kappas)], self.under - other.under)

    def is_zero(self):
        return all(not k for k in self.kappas) and not self.under


def formal_K_tuple(h: int, D: int) -> KTuple:
    """``(K_1, .., K_h, uK)`` in terms of the omega and psi word symbols."""
    ctx = context(h, D)
    from .freelie import all_words
    kappas = []
    for j in range(1, h + 1):
        acc = Expr(ctx)
        for d in range(D + 1):
            for w in all_words(range(1, h + 1), d):
                acc += omega_word(ctx, w + (j,), 1, word=w)
        kappas.append(acc)
    under = Expr(ctx)
    for d in range(D + 1):
        for w in all_words(range(1, h + 1), d):
            under += psi_word(ctx, w, 1, 2, word=w)
    return KTuple(kappas, under)


def explicit_K_tuple(h: int, D: int) -> KTuple:
    """K-tuple with resolved K_j and formal psi symbols."""
    formal = formal_K_tuple(h, D)
    return KTuple([compute_K(h, D, j) for j in range(1, h + 1)], formal.under)


def S_gamma(t: KTuple, gam: Expr) -> KTuple:
    """``kappa_i -> gamma kappa_i`` and
    ``under -> (pr1* gamma) under (pr2* gamma)^-1 + sum_i (pr1* gamma) kappa_i (pr2* a(d_i gamma))``.
    """
    g1 = gam
    g2inv = relabel_coords(inverse(gam), {1: 2})
    h = gam.ctx.h
    kappas = [mul(g1, k) for k in t.kappas]
    under = mul(mul(g1, t.under), g2inv)
    for i in range(1, h + 1):
        tail = relabel_coords(antipode(partial(i, gam)), {1: 2})
        under += mul(mul(g1, t.kappas[i - 1]), tail)
    return KTuple(kappas, under)


def forms_to_tuple(delta: Expr) -> KTuple:
    """``delta -> (delta b_1, .., delta b_h, pr1* delta)``."""
    h = delta.ctx.h
    return KTuple([mul(delta, Expr.letter(delta.ctx, i)) for i in range(1, h + 1)], delta.copy())


def tuple_to_bold(t: KTuple, n: int, D: int | None = None) -> Expr:
    """``sum_i ad(kappa_i^{1})(a_i^(1)) + sum_r ad(under^{1r})(t_1r)`` in t_{h,n}."""
    ctx = t.under.ctx
    h = ctx.h
    tctx = thn_context(h, n, ctx.D if D is None else D)
    p = presentation(h, n)
    out = Expr(tctx)
    for i in range(1, h + 1):
        out += ad_on_generator(t.kappas[i - 1], p.a(i, 1), 1, tctx)
    for r in range(2, n + 1):
        u = relabel_coords(t.under, {2: r})
        out += ad_on_generator(u, p.t(1, r), 1, tctx)
    return out


def symmetrize(x1: Expr) -> Expr:
    """``sum_r (1 r) x``."""
    out = x1.copy()
    for r in range(2, x1.ctx.n + 1):
        out += transpose_coords(x1, 1, r)
    return out


def bold_s_gamma(x: Expr, gam: Expr) -> Expr:
    """``Ad_{gamma^{1} .. gamma^{n}}(x)`` for a thn-valued form x."""
    tctx = x.ctx
    p = presentation(tctx.h, tctx.n)
    out = x
    for r in range(tctx.n, 0, -1):
        gr = relabel_coords(gam, {1: r}) if r != 1 else gam
        out = ad_apply(gr, out, lambda a, r=r: p.b(a, r), tctx)
    return out


# ---------------------------------------------------------------------------
# t_{h,n}-valued K and J
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def assemble_boldK(h: int, n: int, D: int) -> Expr:
    """``K = sum_r (1 r) K^[1]`` with ``K^[1]`` built from the explicit K-tuple."""
    _check(h, D)
    K1 = tuple_to_bold(explicit_K_tuple(h, D), n, D)
    return symmetrize(K1)


@lru_cache(maxsize=None)
def boldH1(h: int, n: int, D: int) -> Expr:
    """``H^[1]`` as the image of ``S_g`` applied to the K-tuple."""
    g, _ = compute_g(h, D)
    kt = explicit_K_tuple(h, D)
    ht = S_gamma(kt, g)
    ht.kappas = [compute_H(h, D, j) for j in range(1, h + 1)]
    return tuple_to_bold(ht, n, D)


@lru_cache(maxsize=None)
def assemble_boldJ(h: int, n: int, D: int) -> Expr:
    """``J = sum_r (1 r)(I^{1} + H^[1])``."""
    _check(h, D)
    tctx = thn_context(h, n, D)
    I1 = lie_series_to_thn(compute_I(h, D), 1, tctx)
    J1 = I1 + boldH1(h, n, D)
    return symmetrize(J1)


def bold_g(h: int, n: int, D: int) -> Expr:
    """``g^{1} .. g^{n}`` with commuting coordinate alphabets."""
    g, _ = compute_g(h, D)
    mctx = Context(h, n, D, "envm")
    out = Expr.one(mctx)
    for r in range(1, n + 1):
        gr = relabel_coords(g, {1: r})
        shifted = Expr(mctx)
        for (cm, f, b, w), c in gr.terms.items():
            shifted._add((cm, f, b, tuple((r - 1) * h + a for a in w)), c)
        out = mul(out, shifted)
    return out


def clear_caches():
    """Drop memoized engine results, e.g. before timing a cold run."""
    from . import thn
    for obj in list(globals().values()):
        if callable(getattr(obj, "cache_clear", None)):
            obj.cache_clear()
    thn.presentation.cache_clear()


def exp_b(h: int, D: int, j: int, sign: int = 1) -> Expr:
    return exp_letter(context(h, D), j, sign)


__all__ = [
    "MAX_DEFAULT_D", "context", "solve_lambda", "holonomy", "compute_g",
    "compute_log_g", "log_g_series", "compute_I", "I_from_g", "I_from_lambda",
    "seed", "compute_K", "compute_H", "fixed_point_residual", "K_series",
    "resolve_omega_word", "KTuple", "formal_K_tuple", "explicit_K_tuple",
    "S_gamma", "forms_to_tuple", "tuple_to_bold", "symmetrize",
    "bold_s_gamma", "assemble_boldK", "boldH1", "assemble_boldJ", "bold_g",
    "exp_b", "g_degree", "clear_caches",
]
