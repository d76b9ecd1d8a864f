"""Sparse linear combinations of (constant, functions, form, word) terms.

Every object of the calculus (constants, function series such as ``g``,
form-valued series such as ``K`` and t_{h,n}-valued forms) is an ``Expr``:
a dict mapping a key ``(cmono, funcs, base, word)`` to a Fraction.

* ``cmono``: constant monomial (see ``coeffring``).
* ``funcs``: tuple of ``(coord, word)`` pairs sorted by coord, one per
  coordinate, standing for the product of iterated integrals ``[word | .]``
  in that coordinate.
* ``base``: ``None`` for functions, otherwise a form tuple (see ``symcalc``).
* ``word``: a word in the enveloping algebra of the context.  For the
  ``envb`` algebra letters ``1..h`` are ``b_1..b_h``.  For ``envm`` the letter
  ``(r-1)*h + i`` is ``b_i^(r)``, letters of different coordinates commute.
  For ``thn`` words are normal-form tensor words of the t_{h,n} presentation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Tuple

from .coeffring import ConstPoly, Mono, mono_mul, shuffle

Funcs = Tuple[Tuple[int, Tuple[int, ...]], ...]
Key = Tuple[Mono, Funcs, object, Tuple[int, ...]]

ALGEBRAS = ("envb", "envm", "thn")


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class Context:
    h: int
    n: int = 1
    D: int = 4
    algebra: str = "envb"

    def __post_init__(self):
        if self.h < 1:
            raise ContextError("h must be >= 1")
        if self.n < 1:
            raise ContextError("n must be >= 1")
        if self.D < 1:
            raise ContextError("maximum degree D must be >= 1")
        if self.algebra not in ALGEBRAS:
            raise ContextError(f"unknown algebra {self.algebra!r}")

    def with_algebra(self, algebra: str) -> "Context":
        return Context(self.h, self.n, self.D, algebra)

    def with_D(self, D: int) -> "Context":
        return Context(self.h, self.n, D, self.algebra)

    def weight(self, word) -> int:
        if self.algebra == "thn":
            from .thn import presentation
            return presentation(self.h, self.n).word_weight(word)
        return len(word)

    def canon_word(self, word):
        if self.algebra == "envm":
            h = self.h
            return tuple(sorted(word, key=lambda a: (a - 1) // h))
        return word


@lru_cache(maxsize=None)
def funcs_mul(f1: Funcs, f2: Funcs) -> Tuple[Tuple[Funcs, int], ...]:
    """Product of two function monomials, shuffling within a coordinate."""
    if not f1:
        return ((f2, 1),)
    if not f2:
        return ((f1, 1),)
    d1, d2 = dict(f1), dict(f2)
    coords = sorted(set(d1) | set(d2))
    partial = [((), 1)]
    for r in coords:
        if r in d1 and r in d2:
            opts = list(shuffle(d1[r], d2[r]).items())
        else:
            opts = [(d1.get(r, d2.get(r)), 1)]
        partial = [(f + ((r, w),), c * cw) for f, c in partial for w, cw in opts]
    return tuple(partial)


def base_coord(base) -> int:
    """Coordinate of a form tuple."""
    kind = base[0]
    if kind in ("gamma", "omega", "omegaw", "delta"):
        return base[2]
    if kind == "psiw":
        return base[2]
    if kind in ("Psi", "op"):
        return base_coord(base[2])
    raise ValueError(f"unknown form {base!r}")


def _sort_key(key: Key):
    cm, f, b, w = key
    return (w, f, () if b is None else (1, b), cm)


class Expr:
    """An element of the free module over canonical keys, with a context."""

    __slots__ = ("terms", "ctx")

    def __init__(self, ctx: Context, terms: Dict[Key, Fraction] | None = None):
        self.ctx = ctx
        self.terms: Dict[Key, Fraction] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = c

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ctx: Context) -> "Expr":
        return cls(ctx)

    @classmethod
    def one(cls, ctx: Context) -> "Expr":
        return cls(ctx, {((), (), None, ()): Fraction(1)})

    @classmethod
    def term(cls, ctx: Context, coeff=1, funcs: Funcs = (), base=None, word=()) -> "Expr":
        """A single term; ``coeff`` may be a rational or a ConstPoly."""
        out = cls(ctx)
        word = ctx.canon_word(tuple(word))
        if ctx.weight(word) > ctx.D:
            return out
        if isinstance(coeff, ConstPoly):
            for m, c in coeff.terms.items():
                out._add((m, funcs, base, word), c)
        else:
            out._add(((), funcs, base, word), Fraction(coeff))
        return out

    @classmethod
    def const(cls, ctx: Context, coeff) -> "Expr":
        return cls.term(ctx, coeff)

    @classmethod
    def func(cls, ctx: Context, word, coord: int = 1) -> "Expr":
        """The iterated integral ``[word | .]`` in coordinate ``coord``."""
        word = tuple(word)
        return cls.term(ctx, 1, ((coord, word),) if word else ())

    @classmethod
    def letter(cls, ctx: Context, i: int) -> "Expr":
        return cls.term(ctx, 1, word=(i,))

    # -- basic protocol ---------------------------------------------------

    def _add(self, key: Key, c: Fraction):
        v = self.terms.get(key, 0) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def copy(self) -> "Expr":
        out = Expr(self.ctx)
        out.terms = dict(self.terms)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "Expr"):
        if not isinstance(other, Expr):
            raise TypeError(f"expected Expr, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ContextError(f"context mismatch: {self.ctx} vs {other.ctx}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.const(self.ctx, other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        if isinstance(other, (int, Fraction, ConstPoly)):
            other = Expr.const(self.ctx, other)
        self._check(other)
        out = self.copy()
        for k, c in other.terms.items():
            out._add(k, c)
        return out

    __radd__ = __add__

    def __iadd__(self, other):
        if isinstance(other, (int, Fraction, ConstPoly)):
            other = Expr.const(self.ctx, other)
        self._check(other)
        for k, c in other.terms.items():
            self._add(k, c)
        return self

    def __neg__(self):
        out = Expr(self.ctx)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, ConstPoly)):
            other = Expr.const(self.ctx, other)
        self._check(other)
        out = self.copy()
        for k, c in other.terms.items():
            out._add(k, -c)
        return out

    def __rsub__(self, other):
        return (-self) + other

    def __isub__(self, other):
        self._check(other)
        for k, c in other.terms.items():
            self._add(k, -c)
        return self

    def scale(self, c) -> "Expr":
        if isinstance(c, ConstPoly):
            out = Expr(self.ctx)
            for (cm, f, b, w), v in self.terms.items():
                for m, cc in c.terms.items():
                    out._add((mono_mul(cm, m), f, b, w), v * cc)
            return out
        c = Fraction(c)
        if not c:
            return Expr(self.ctx)
        out = Expr(self.ctx)
        out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ConstPoly)):
            return self.scale(other)
        self._check(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ConstPoly)):
            return self.scale(other)
        return NotImplemented

    def __repr__(self):
        from .render import to_text
        return f"Expr({to_text(self)})"

    # -- structure --------------------------------------------------------

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0]))

    def degree_part(self, d: int) -> "Expr":
        wt = self.ctx.weight
        return Expr(self.ctx, {k: c for k, c in self.terms.items() if wt(k[3]) == d})

    def truncate(self, D: int) -> "Expr":
        wt = self.ctx.weight
        return Expr(self.ctx, {k: c for k, c in self.terms.items() if wt(k[3]) <= D})

    def degrees(self):
        wt = self.ctx.weight
        return sorted({wt(k[3]) for k in self.terms})

    def retag(self, ctx: Context) -> "Expr":
        """Same terms under another context, truncating to its degree."""
        out = Expr(ctx)
        for k, c in self.terms.items():
            if ctx.weight(k[3]) <= ctx.D:
                out.terms[k] = c
        return out

    def map_words(self, fn: Callable[[tuple], Iterable[Tuple[tuple, Fraction]]]) -> "Expr":
        """Apply a linear map defined on words."""
        out = Expr(self.ctx)
        for (cm, f, b, w), c in self.terms.items():
            for w2, c2 in fn(w):
                out._add((cm, f, b, self.ctx.canon_word(w2)), c * c2)
        return out.truncate(self.ctx.D)

    def map_keys(self, fn) -> "Expr":
        """Apply a linear map ``key -> iterable of (key, coeff)``."""
        out = Expr(self.ctx)
        for k, c in self.terms.items():
            for k2, c2 in fn(k):
                out._add(k2, c * c2)
        return out

    def words(self):
        return sorted({k[3] for k in self.terms})

    def coefficient(self, word) -> "Expr":
        """The part with the given word, with the word stripped."""
        word = tuple(word)
        out = Expr(self.ctx)
        for (cm, f, b, w), c in self.terms.items():
            if w == word:
                out.terms[(cm, f, b, ())] = c
        return out

    def with_word(self, word) -> "Expr":
        """Multiply a word-free expression by a word on the right."""
        word = self.ctx.canon_word(tuple(word))
        out = Expr(self.ctx)
        if self.ctx.weight(word) > self.ctx.D:
            return out
        for (cm, f, b, w), c in self.terms.items():
            out._add((cm, f, b, self.ctx.canon_word(w + word)), c)
        return out.truncate(self.ctx.D)

    def const_poly(self) -> ConstPoly:
        """Value of a word-free, function-free, form-free expression."""
        d = {}
        for (cm, f, b, w), c in self.terms.items():
            if f or b is not None or w:
                raise ValueError("expression is not a constant")
            d[cm] = c
        return ConstPoly(d)

    def is_function_free(self) -> bool:
        return all(not k[1] for k in self.terms)

    def symbols(self):
        return {s for k in self.terms for s, _ in k[0]}

    def group_by_word(self) -> Dict[tuple, "Expr"]:
        out: Dict[tuple, Expr] = {}
        for (cm, f, b, w), c in self.terms.items():
            out.setdefault(w, Expr(self.ctx)).terms[(cm, f, b, ())] = c
        return out


def mul(a: Expr, b: Expr) -> Expr:
    """Product: functions shuffle, at most one form, words concatenate."""
    ctx = a.ctx
    D = ctx.D
    if ctx.algebra == "thn":
        raise ContextError("t_{h,n} elements cannot be multiplied; use brackets")
    out: Dict[Key, Fraction] = {}
    bt = [(k, c, len(k[3])) for k, c in b.terms.items()]
    canon = ctx.algebra == "envm"
    for (cm1, f1, b1, w1), c1 in a.terms.items():
        l1 = len(w1)
        if l1 > D:
            continue
        for (cm2, f2, b2, w2), c2, l2 in bt:
            if l1 + l2 > D:
                continue
            if b1 is not None and b2 is not None:
                raise ValueError("product of two forms")
            base = b1 if b2 is None else b2
            cm = mono_mul(cm1, cm2)
            w = w1 + w2
            if canon:
                w = ctx.canon_word(w)
            cc = c1 * c2
            for f, m in funcs_mul(f1, f2):
                key = (cm, f, base, w)
                v = out.get(key, 0) + cc * m
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    res = Expr(ctx)
    res.terms = out
    return res


def sum_exprs(ctx: Context, items: Iterable[Expr]) -> Expr:
    out = Expr(ctx)
    for x in items:
        out += x
    return out
