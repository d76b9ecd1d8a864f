"""Symbolic functions and forms on the curve and its covers.

Form tuples used as the ``base`` of an ``Expr`` term:

* ``('gamma', i, r)``: the closed form ``gamma_i`` in coordinate r
  (``alpha_i`` for ``i <= h``, ``beta_{i-h}`` for ``i > h``).
* ``('omega', i, r)``: the holomorphic form ``omega_i``.
* ``('omegaw', w, r)``: the formal symbol ``omega_{inf, w}``.
* ``('psiw', w, r, s)``: the formal symbol ``psi_{inf, w}``, a form in
  coordinate r depending on the point in coordinate s.
* ``('Psi', f, base)`` and ``('op', f, base)``: the unevaluated projections
  applied to the monomial ``f * base`` where ``f`` is a function monomial in
  the coordinate of ``base``.  Scalars never live inside a node.

A deck transformation is a pair ``(c, sign)`` with ``c`` in ``1..2h``:
``c <= h`` is ``A_c`` and ``c = h + j`` is ``B_j``.
"""
from __future__ import annotations

import hashlib
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterable, List, Tuple

from .coeffring import ConstPoly, Mono, mono_mul, normalize_loop_const, opaque_sym, tau_sym
from .series import Context, Expr, Funcs, base_coord

Word = Tuple[int, ...]

OPAQUE_REGISTRY: Dict[str, str] = {}


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def gamma(ctx: Context, i: int, r: int = 1, word=()) -> Expr:
    _check_letter(ctx, i)
    return Expr.term(ctx, 1, (), ("gamma", i, r), word)


def alpha(ctx: Context, i: int, r: int = 1, word=()) -> Expr:
    return gamma(ctx, i, r, word)


def beta(ctx: Context, i: int, r: int = 1, word=()) -> Expr:
    return gamma(ctx, ctx.h + i, r, word)


def omega(ctx: Context, i: int, r: int = 1, word=()) -> Expr:
    if not 1 <= i <= ctx.h:
        raise ValueError(f"omega index {i} out of range 1..{ctx.h}")
    return Expr.term(ctx, 1, (), ("omega", i, r), word)


def omega_word(ctx: Context, w, r: int = 1, word=()) -> Expr:
    w = tuple(w)
    if not w or not all(1 <= a <= ctx.h for a in w):
        raise ValueError(f"bad omega word {w}")
    return Expr.term(ctx, 1, (), ("omegaw", w, r), word)


def psi_word(ctx: Context, w, r: int = 1, s: int = 2, word=()) -> Expr:
    w = tuple(w)
    if not all(1 <= a <= ctx.h for a in w):
        raise ValueError(f"bad psi word {w}")
    if r == s:
        raise ValueError("psi word needs two distinct coordinates")
    return Expr.term(ctx, 1, (), ("psiw", w, r, s), word)


def func(ctx: Context, w, r: int = 1) -> Expr:
    for a in w:
        _check_letter(ctx, a)
    return Expr.func(ctx, w, r)


def _check_letter(ctx: Context, i: int):
    if not 1 <= i <= 2 * ctx.h:
        raise ValueError(f"letter {i} out of range 1..{2 * ctx.h}")


def loop(ctx: Context, w, cycle: int) -> Expr:
    """The normalized loop constant ``[w | cycle]`` as an expression."""
    return Expr.term(ctx, ConstPoly.loop(tuple(w), cycle))


def tau(ctx: Context, i: int, j: int) -> Expr:
    return Expr.term(ctx, ConstPoly.tau(i, j))


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with ``B_1 = -1/2`` (generating function t/(e^t-1))."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / (n + 1)


# ---------------------------------------------------------------------------
# helpers on monomials
# ---------------------------------------------------------------------------

def _split_funcs(f: Funcs, r: int) -> Tuple[Word, Funcs]:
    own = ()
    rest = []
    for c, w in f:
        if c == r:
            own = w
        else:
            rest.append((c, w))
    return own, tuple(rest)


def _join_funcs(own: Word, r: int, rest: Funcs) -> Funcs:
    if not own:
        return rest
    return tuple(sorted(rest + ((r, own),)))


def _loop_terms(w: Word, c: int, sign: int = 1) -> Tuple[Tuple[Mono, Fraction], ...]:
    if not w:
        return (((), Fraction(1)),)
    if sign > 0:
        return normalize_loop_const(w, c)
    s = (-1) ** len(w)
    return tuple((m, s * v) for m, v in normalize_loop_const(w[::-1], c))


# ---------------------------------------------------------------------------
# differential, primitives, basepoint
# ---------------------------------------------------------------------------

def differential(x: Expr) -> Expr:
    """``d [i1..im | .] = [i1..i(m-1) | .] gamma_im`` with the Leibniz rule."""
    out = Expr(x.ctx)
    for (cm, f, b, w), c in x.terms.items():
        if b is not None:
            raise ValueError("differential of forms is not supported")
        for r, word in f:
            rest = tuple(p for p in f if p[0] != r)
            nf = _join_funcs(word[:-1], r, rest)
            out._add((cm, nf, ("gamma", word[-1], r), w), c)
    return out


def integrate(x: Expr) -> Expr:
    """Primitive vanishing at the base point: ``[w|.] gamma_j -> [w j|.]``."""
    ctx = x.ctx
    out = Expr(ctx)
    for (cm, f, b, w), c in omega_expand(x).terms.items():
        if b is None or b[0] != "gamma":
            raise ValueError(f"cannot integrate form {b!r}")
        r = b[2]
        own, rest = _split_funcs(f, r)
        out._add((cm, _join_funcs(own + (b[1],), r, rest), None, w), c)
    return out


def at_basepoint(x: Expr, r: int = 1) -> Expr:
    """Evaluate the coordinate-r functions at the base point."""
    return Expr(x.ctx, {k: c for k, c in x.terms.items()
                        if not any(cr == r for cr, _ in k[1])})


# ---------------------------------------------------------------------------
# deck transformations
# ---------------------------------------------------------------------------

def deck_pullback(x: Expr, theta, r: int = 1) -> Expr:
    """Pull back by a word in deck transformations acting on coordinate r.

    ``theta`` is a sequence of signed cycle indices, ``+c`` or ``-c``; the
    pullback of ``t1 t2`` is the pullback of ``t2`` after that of ``t1``.
    """
    for t in theta:
        c, sign = abs(t), (1 if t > 0 else -1)
        if not 1 <= c <= 2 * x.ctx.h:
            raise ValueError(f"deck letter {t} out of range")
        x = _pullback_letter(x, c, sign, r)
    return x


def _pullback_letter(x: Expr, c: int, sign: int, r: int) -> Expr:
    ctx = x.ctx
    out = Expr(ctx)
    for (cm, f, b, w), coeff in x.terms.items():
        own, rest = _split_funcs(f, r)
        fparts = []
        for k in range(len(own) + 1):
            for m, v in _loop_terms(own[:k], c, sign):
                fparts.append((m, _join_funcs(own[k:], r, rest), v))
        bparts = _pullback_base(ctx, b, c, sign, r)
        for m1, nf, v1 in fparts:
            for m2, nb, v2 in bparts:
                out._add((mono_mul(mono_mul(cm, m1), m2), nf, nb, w), coeff * v1 * v2)
    return out


def _delta_all(letters: Iterable[int], j: int) -> bool:
    return all(a == j for a in letters)


def _pullback_base(ctx: Context, b, c: int, sign: int, r: int):
    if b is None or c <= ctx.h:
        return [((), b, Fraction(1))]
    j = c - ctx.h
    kind = b[0]
    if kind == "omegaw" and b[2] == r:
        word = b[1]
        return [((), ("omegaw", word[l:], r), Fraction(sign ** l, factorial(l)))
                for l in range(len(word)) if _delta_all(word[:l], j)]
    if kind == "psiw" and b[2] == r:
        word = b[1]
        return [((), ("psiw", word[l:], b[2], b[3]), Fraction(sign ** l, factorial(l)))
                for l in range(len(word) + 1) if _delta_all(word[:l], j)]
    if kind == "psiw" and b[3] == r:
        if sign < 0:
            raise NotImplementedError("inverse B-pullback on the second psi argument")
        word, m = b[1], len(b[1])
        out = []
        for l in range(m + 1):
            if _delta_all(word[m - l:], j):
                out.append(((), ("psiw", word[:m - l], b[2], b[3]), Fraction((-1) ** l, factorial(l))))
        for l in range(1, m + 2):
            if _delta_all(word[m - l + 1:], j):
                out.append(((), ("omegaw", word[:m - l + 1] + (j,), b[2]),
                            Fraction((-1) ** (l - 1), factorial(l))))
        return out
    return [((), b, Fraction(1))]


# ---------------------------------------------------------------------------
# Psi and op
# ---------------------------------------------------------------------------

def _psi_rule(ctx: Context, own: Word, b):
    r = base_coord(b)
    own_f = ((r, own),) if own else ()
    if own:
        return [((), ("Psi", own_f, b), Fraction(1))]
    kind = b[0]
    if kind == "gamma":
        i = b[1]
        if i > ctx.h:
            return [((), b, Fraction(1))]
        return [(((tau_sym(i, k), 1),), ("gamma", ctx.h + k, r), Fraction(-1))
                for k in range(1, ctx.h + 1)]
    if kind == "omega" or kind == "op":
        return []
    if kind == "Psi":
        return [((), b, Fraction(1))]
    return [((), ("Psi", (), b), Fraction(1))]


def _op_rule(ctx: Context, own: Word, b):
    r = base_coord(b)
    own_f = ((r, own),) if own else ()
    if own:
        return [((), ("op", own_f, b), Fraction(1))]
    kind = b[0]
    if kind == "gamma":
        i = b[1]
        if i > ctx.h:
            return []
        return [((), ("omega", i, r), Fraction(1))]
    if kind == "omega" or kind == "op":
        return [((), b, Fraction(1))]
    if kind == "Psi":
        return []
    return [((), ("op", (), b), Fraction(1))]


def _apply_rule(x: Expr, rule) -> Expr:
    ctx = x.ctx
    out = Expr(ctx)
    for (cm, f, b, w), c in x.terms.items():
        if b is None:
            raise ValueError("Psi/op act on forms, got a function term")
        r = base_coord(b)
        own, rest = _split_funcs(f, r)
        for m, nb, v in rule(ctx, own, b):
            out._add((mono_mul(cm, m), rest, nb, w), c * v)
    return out


def psi_apply(x: Expr) -> Expr:
    """The projection Psi, linear over constants and other coordinates."""
    return _apply_rule(x, _psi_rule)


def op_apply(x: Expr) -> Expr:
    """``op(x) = sum_k (A_k-period of x) omega_k``, kept as a node when unevaluated."""
    return _apply_rule(x, _op_rule)


def op_minus_id(x: Expr) -> Expr:
    """``Op = -id + Psi + op``."""
    return psi_apply(x) + op_apply(x) - x


def psi_plus_op(x: Expr) -> Expr:
    return psi_apply(x) + op_apply(x)


@lru_cache(maxsize=None)
def _has_omega(b) -> bool:
    kind = b[0]
    if kind == "omega":
        return True
    if kind in ("Psi", "op"):
        return b[2] is not None and _has_omega(b[2])
    return False


def omega_expand(x: Expr) -> Expr:
    """Rewrite ``omega_i = alpha_i + sum_j tau_ij beta_j`` everywhere, nodes included."""
    ctx = x.ctx
    out = Expr(ctx)
    for (cm, f, b, w), c in x.terms.items():
        if b is None or not _has_omega(b):
            out._add((cm, f, b, w), c)
            continue
        kind = b[0]
        if kind == "omega":
            i, r = b[1], b[2]
            out._add((cm, f, ("gamma", i, r), w), c)
            for j in range(1, ctx.h + 1):
                out._add((mono_mul(cm, ((tau_sym(i, j), 1),)), f, ("gamma", ctx.h + j, r), w), c)
        elif kind in ("Psi", "op"):
            inner = omega_expand(Expr(ctx, {((), b[1], b[2], ()): Fraction(1)}))
            applied = psi_apply(inner) if kind == "Psi" else op_apply(inner)
            for (cm2, f2, b2, _), c2 in applied.terms.items():
                r = base_coord(b2)
                own, rest = _split_funcs(f, r)
                own2, _ = _split_funcs(f2, r)
                if own and own2:
                    raise AssertionError("node value with functions in an occupied coordinate")
                out._add((mono_mul(cm, cm2), _join_funcs(own or own2, r, rest), b2, w), c * c2)
        else:
            out._add((cm, f, b, w), c)
    return out


# ---------------------------------------------------------------------------
# periods
# ---------------------------------------------------------------------------

def opaque(tag: str, monomial) -> Mono:
    text = f"{tag}:{monomial!r}"
    key = tag + ":" + hashlib.sha256(text.encode()).hexdigest()[:16]
    OPAQUE_REGISTRY[key] = text
    return ((opaque_sym(key), 1),)


def _cycle_mono(ctx: Context, c: int, own: Word, b) -> List[Tuple[Mono, Fraction]]:
    """Integral over cycle c of ``[own|.] * b``, as constant terms."""
    r = base_coord(b)
    kind = b[0]
    h = ctx.h
    if kind == "gamma":
        return list(normalize_loop_const(own + (b[1],), c))
    if kind == "omega":
        i = b[1]
        out = list(normalize_loop_const(own + (i,), c))
        for l in range(1, h + 1):
            for m, v in normalize_loop_const(own + (h + l,), c):
                out.append((mono_mul(m, ((tau_sym(i, l), 1),)), v))
        return out
    if kind == "omegaw" and not own and c <= h:
        w = b[1]
        if _delta_all(w, c):
            return [((), bernoulli(len(w) - 1) / factorial(len(w) - 1))]
        return []
    if kind == "Psi" and not own and c <= h:
        return []
    if kind == "op":
        y_own = b[1][0][1] if b[1] else ()
        out = []
        for m in range(1, h + 1):
            period = _cycle_mono(ctx, m, y_own, b[2])
            if not period:
                continue
            tail = _cycle_mono(ctx, c, own, ("omega", m, r))
            for m1, v1 in period:
                for m2, v2 in tail:
                    out.append((mono_mul(m1, m2), v1 * v2))
        return out
    tag = ("A%d" % c) if c <= h else ("B%d" % (c - h))
    own_f = ((r, own),) if own else ()
    return [(opaque(tag, (own_f, b)), Fraction(1))]


def cycle_integral(c: int, x: Expr) -> Expr:
    """Integral of each term's form over the loop c in the form's coordinate.

    Functions of other coordinates and the word are carried along.
    """
    ctx = x.ctx
    if not 1 <= c <= 2 * ctx.h:
        raise ValueError(f"cycle {c} out of range")
    out = Expr(ctx)
    for (cm, f, b, w), coeff in x.terms.items():
        if b is None:
            raise ValueError("cycle integral of a function")
        r = base_coord(b)
        own, rest = _split_funcs(f, r)
        for m, v in _cycle_mono(ctx, c, own, b):
            out._add((mono_mul(cm, m), rest, None, w), coeff * v)
    return out


def acyc(k: int, x: Expr) -> Expr:
    """A_k-period."""
    if not 1 <= k <= x.ctx.h:
        raise ValueError(f"A-cycle {k} out of range")
    return cycle_integral(k, x)


def op_evaluated(x: Expr) -> Expr:
    """``sum_k acyc(k, x) omega_k`` with every period evaluated."""
    ctx = x.ctx
    out = Expr(ctx)
    for key, c in x.terms.items():
        single = Expr(ctx, {key: c})
        r = base_coord(key[2])
        for k in range(1, ctx.h + 1):
            for (cm, f, _, w), v in acyc(k, single).terms.items():
                out._add((cm, f, ("omega", k, r), w), v)
    return out


# ---------------------------------------------------------------------------
# coordinates
# ---------------------------------------------------------------------------

def relabel_coords(x: Expr, perm: Dict[int, int]) -> Expr:
    """Rename coordinates in functions and forms (words untouched)."""
    return x.map_keys(lambda k: [((k[0], _relabel_f(k[1], perm), _relabel_b(k[2], perm), k[3]), 1)])


def _relabel_f(f: Funcs, perm) -> Funcs:
    return tuple(sorted((perm.get(r, r), w) for r, w in f))


def _relabel_b(b, perm):
    if b is None:
        return None
    kind = b[0]
    if kind in ("gamma", "omega", "omegaw"):
        return (kind, b[1], perm.get(b[2], b[2]))
    if kind == "psiw":
        return (kind, b[1], perm.get(b[2], b[2]), perm.get(b[3], b[3]))
    if kind in ("Psi", "op"):
        return (kind, _relabel_f(b[1], perm), _relabel_b(b[2], perm))
    raise ValueError(f"unknown form {b!r}")
