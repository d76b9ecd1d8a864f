"""Truncated free associative algebra on ``b_1..b_h`` and its Hopf structure.

Elements are ``Expr`` objects; the coefficient of each word may carry
constants, functions and forms.  Lie elements are handled through the Lyndon
basis: ``P_l`` for a Lyndon word ``l`` is the bracketing along the standard
factorization, and its expansion is ``l`` plus words that are larger in
lexicographic order.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, Tuple

from .coeffring import (is_lyndon, lyndon_words, necklace_count, shuffle,
                        standard_factorization)
from .series import Context, Expr, mul

Word = Tuple[int, ...]


def env_mul(a: Expr, b: Expr) -> Expr:
    return mul(a, b)


def bracket(a: Expr, b: Expr) -> Expr:
    return mul(a, b) - mul(b, a)


def ad_power(x: Expr, y: Expr, k: int) -> Expr:
    """``ad(x)^k (y)``."""
    for _ in range(k):
        y = bracket(x, y)
    return y


def _degree_zero(x: Expr) -> Expr:
    return Expr(x.ctx, {k: c for k, c in x.terms.items() if not k[3]})


def exp_trunc(x: Expr) -> Expr:
    """``exp(x)`` truncated at the context degree; x must have no degree-0 part."""
    if _degree_zero(x):
        raise ValueError("exp_trunc needs an argument without degree-0 part")
    out = Expr.one(x.ctx)
    power = Expr.one(x.ctx)
    for k in range(1, x.ctx.D + 1):
        power = mul(power, x).scale(Fraction(1, k))
        if not power:
            break
        out += power
    return out


def log_trunc(g: Expr) -> Expr:
    """``log(g)`` truncated at the context degree; g must have degree-0 part 1."""
    one = Expr.one(g.ctx)
    if _degree_zero(g) != one:
        raise ValueError("log_trunc needs an argument with constant term 1")
    y = g - one
    out = Expr(g.ctx)
    power = Expr.one(g.ctx)
    for k in range(1, g.ctx.D + 1):
        power = mul(power, y)
        if not power:
            break
        out += power.scale(Fraction((-1) ** (k + 1), k))
    return out


def inverse(g: Expr) -> Expr:
    """Inverse of an element with constant term 1, by the geometric series."""
    one = Expr.one(g.ctx)
    if _degree_zero(g) != one:
        raise ValueError("inverse needs an argument with constant term 1")
    y = one - g
    out = one.copy()
    power = one
    for _ in range(g.ctx.D):
        power = mul(power, y)
        if not power:
            break
        out += power
    return out


def antipode(x: Expr) -> Expr:
    """``a(w) = (-1)^|w| reverse(w)``."""
    return x.map_words(lambda w: [(w[::-1], (-1) ** len(w))])


def partial(i: int, x: Expr) -> Expr:
    """Right deconcatenation by the letter i: ``x = x_0 + sum_i partial_i(x) b_i``."""
    return x.map_words(lambda w: [(w[:-1], 1)] if w and w[-1] == i else [])


def counit(x: Expr) -> Expr:
    return _degree_zero(x)


def coproduct(x: Expr) -> Dict[Tuple[Word, Word], Expr]:
    """Deshuffle coproduct: ``{(u, v): coefficient}`` with word-free coefficients."""
    out: Dict[Tuple[Word, Word], Expr] = {}
    for w, coeff in x.group_by_word().items():
        for u, v, m in _deshuffles(w):
            cur = out.setdefault((u, v), Expr(x.ctx))
            cur += coeff.scale(m)
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _deshuffles(w: Word):
    acc: Dict[Tuple[Word, Word], int] = {}
    n = len(w)
    for mask in range(1 << n):
        u = tuple(w[i] for i in range(n) if mask >> i & 1)
        v = tuple(w[i] for i in range(n) if not mask >> i & 1)
        acc[(u, v)] = acc.get((u, v), 0) + 1
    return tuple((u, v, m) for (u, v), m in acc.items())


def _pair_defects(x: Expr, rhs):
    """Yield ``sum_w <u sh v, w> x_w - rhs(u, v)`` for all pairs of words."""
    coeffs = x.group_by_word()
    ctx = x.ctx
    letters = _letters(ctx)
    words = [()] + [w for d in range(1, ctx.D + 1) for w in _all_words(letters, d)]
    for u in words:
        for v in words:
            if len(u) + len(v) > ctx.D:
                continue
            lhs = Expr(ctx)
            for w, m in shuffle(u, v).items():
                if w in coeffs:
                    lhs += coeffs[w].scale(m)
            yield u, v, lhs - rhs(coeffs, u, v)


def _letters(ctx: Context):
    if ctx.algebra == "envm":
        return range(1, ctx.h * ctx.n + 1)
    return range(1, ctx.h + 1)


@lru_cache(maxsize=None)
def _all_words_cached(letters: tuple, d: int):
    if d == 0:
        return ((),)
    return tuple(w + (a,) for w in _all_words_cached(letters, d - 1) for a in letters)


def _all_words(letters, d):
    return _all_words_cached(tuple(letters), d)


def is_grouplike(x: Expr) -> bool:
    """``Delta(x) = x (x) x`` up to the context degree."""
    zero = Expr(x.ctx)

    def rhs(coeffs, u, v):
        cu, cv = coeffs.get(u, zero), coeffs.get(v, zero)
        return mul(cu, cv)

    if _degree_zero(x) != Expr.one(x.ctx):
        return False
    return all(not d for _, _, d in _pair_defects(x, rhs))


def is_primitive(x: Expr) -> bool:
    """``Delta(x) = x (x) 1 + 1 (x) x`` up to the context degree."""
    zero = Expr(x.ctx)

    def rhs(coeffs, u, v):
        if not u:
            return coeffs.get(v, zero)
        if not v:
            return coeffs.get(u, zero)
        return zero

    if _degree_zero(x):
        return False
    return all(not d for u, v, d in _pair_defects(x, rhs) if u or v)


# ---------------------------------------------------------------------------
# Lyndon basis
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def lyndon_bracket_expansion(l: Word) -> Tuple[Tuple[Word, int], ...]:
    """Expansion in words of the standard bracketing of a Lyndon word."""
    if len(l) == 1:
        return ((l, 1),)
    u, v = standard_factorization(l)
    eu = lyndon_bracket_expansion(u)
    ev = lyndon_bracket_expansion(v)
    acc: Dict[Word, int] = {}
    for a, ca in eu:
        for b, cb in ev:
            acc[a + b] = acc.get(a + b, 0) + ca * cb
            acc[b + a] = acc.get(b + a, 0) - ca * cb
    return tuple(sorted((w, c) for w, c in acc.items() if c))


class LieElem:
    """A Lie element in Lyndon coordinates: ``{lyndon word: coefficient Expr}``.

    Coefficients are word-free expressions sharing the context ``ctx``.
    """

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: Context, coords: Dict[Word, Expr] | None = None):
        self.ctx = ctx
        self.coords = {l: c for l, c in (coords or {}).items() if c}

    @classmethod
    def from_env(cls, x: Expr) -> "LieElem":
        """Triangular decomposition; raises ValueError when x is not Lie."""
        rest = x.group_by_word()
        coords: Dict[Word, Expr] = {}
        while rest:
            w = min(rest, key=lambda u: (len(u), u))
            if not is_lyndon(w):
                raise ValueError(f"not a Lie element: leading word {w} is not Lyndon")
            c = rest[w]
            coords[w] = c
            for u, m in lyndon_bracket_expansion(w):
                cur = rest.get(u, Expr(x.ctx)) - c.scale(m)
                if cur:
                    rest[u] = cur
                else:
                    rest.pop(u, None)
        return cls(x.ctx, coords)

    def to_env(self) -> Expr:
        out = Expr(self.ctx)
        for l, c in self.coords.items():
            for w, m in lyndon_bracket_expansion(l):
                out += c.with_word(w).scale(m)
        return out

    def bracket(self, other: "LieElem") -> "LieElem":
        return LieElem.from_env(bracket(self.to_env(), other.to_env()))

    def __eq__(self, other):
        return isinstance(other, LieElem) and self.ctx == other.ctx and self.coords == other.coords

    __hash__ = None

    def __repr__(self):
        return f"LieElem({ {l: c for l, c in self.coords.items()} })"


def lyndon_basis(q: int, d: int):
    return lyndon_words(range(1, q + 1), d)


def witt_dimension(q: int, d: int) -> int:
    return necklace_count(q, d)


def dynkin_words(w: Word) -> Tuple[Tuple[Word, int], ...]:
    """Expansion of the left-normed bracket ``[..[[w1,w2],w3],..,wm]``."""
    return _left_normed(tuple(w))


@lru_cache(maxsize=None)
def _left_normed(w: Word):
    if len(w) <= 1:
        return ((w, 1),)
    acc: Dict[Word, int] = {}
    last = w[-1:]
    for u, c in _left_normed(w[:-1]):
        acc[u + last] = acc.get(u + last, 0) + c
        acc[last + u] = acc.get(last + u, 0) - c
    return tuple((u, c) for u, c in acc.items() if c)


def exp_ad(x: Expr, y: Expr) -> Expr:
    """``exp(ad x)(y) = sum_k ad(x)^k(y) / k!`` truncated."""
    out = y.copy()
    term = y
    for k in range(1, y.ctx.D + 1):
        term = bracket(x, term).scale(Fraction(1, k))
        if not term:
            break
        out += term
    return out


def bernoulli_seed_series(ctx: Context, j: int) -> Expr:
    """``b_j / (exp(b_j) - 1) = sum_d (B_d / d!) b_j^d`` truncated."""
    from .symcalc import bernoulli
    out = Expr(ctx)
    for d in range(ctx.D + 1):
        out += Expr.term(ctx, bernoulli(d) / factorial(d), word=(j,) * d)
    return out


def exp_letter(ctx: Context, j: int, sign: int = 1) -> Expr:
    """``exp(sign * b_j)`` truncated."""
    out = Expr(ctx)
    for d in range(ctx.D + 1):
        out += Expr.term(ctx, Fraction(sign ** d, factorial(d)), word=(j,) * d)
    return out


def all_words(letters: Iterable[int], d: int):
    return _all_words(tuple(letters), d)
