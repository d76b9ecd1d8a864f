"""Exact constants: shuffle algebra, Lyndon words and loop-constant polynomials.

Constants are polynomials with rational coefficients in three kinds of symbols:

* ``('L', word, c)``: the iterated integral of ``gamma_word`` over the loop
  ``c`` (``1..h`` are the A-cycles, ``h+1..2h`` the B-cycles).  ``word`` is
  always a Lyndon word of length >= 2, so that shuffle relations are built in.
* ``('T', i, j)`` with ``i <= j``: the period ``tau_ij``.
* ``('O', key)``: an opaque constant that the calculus cannot reduce.

A monomial is a sorted tuple of ``(symbol, exponent)`` pairs.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Mapping, Tuple

Word = Tuple[int, ...]
Sym = tuple
Mono = Tuple[Tuple[Sym, int], ...]

ONE_MONO: Mono = ()

__all__ = [
    "Fraction", "ConstPoly", "shuffle", "shuffle_many", "is_lyndon",
    "lyndon_factorization", "lyndon_words", "standard_factorization",
    "necklace_count", "word_to_lyndon_poly", "normalize_loop_const",
    "loop_sym", "tau_sym", "opaque_sym", "mono_mul", "random_rational",
    "symbol_value",
]


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def shuffle(u: Word, v: Word) -> Dict[Word, int]:
    """Shuffle product of two words, as a multiplicity dict."""
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out: Dict[Word, int] = {}
    for w, c in shuffle(u[1:], v).items():
        k = (u[0],) + w
        out[k] = out.get(k, 0) + c
    for w, c in shuffle(u, v[1:]).items():
        k = (v[0],) + w
        out[k] = out.get(k, 0) + c
    return out


def shuffle_many(words: Iterable[Word]) -> Dict[Word, int]:
    acc: Dict[Word, int] = {(): 1}
    for w in words:
        nxt: Dict[Word, int] = {}
        for a, ca in acc.items():
            for b, cb in shuffle(a, w).items():
                nxt[b] = nxt.get(b, 0) + ca * cb
        acc = nxt
    return acc


def is_lyndon(w: Word) -> bool:
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_factorization(w: Word) -> Tuple[Word, ...]:
    """Duval's algorithm: w = l1 l2 ... lk with l1 >= l2 >= ... >= lk."""
    out = []
    n, i = len(w), 0
    while i < n:
        j, k = i + 1, i
        while j < n and w[k] <= w[j]:
            k = i if w[k] < w[j] else k + 1
            j += 1
        while i <= k:
            out.append(tuple(w[i:i + j - k]))
            i += j - k
    return tuple(out)


def standard_factorization(w: Word) -> Tuple[Word, Word]:
    """Split a Lyndon word w = uv with v its longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def lyndon_words(alphabet: Iterable[int], length: int, weight=None) -> list:
    """Lyndon words over ``alphabet`` (sorted), by length or by total weight.

    With ``weight`` (a letter -> int map) the words of total weight ``length``
    are returned instead.
    """
    letters = sorted(alphabet)
    if weight is None:
        return [w for w in _duval_words(letters, length) if len(w) == length]
    out = []
    maxlen = length // min(weight[a] for a in letters) if letters else 0
    for n in range(1, maxlen + 1):
        for w in _duval_words(letters, n):
            if len(w) == n and sum(weight[a] for a in w) == length:
                out.append(w)
    return out


def _duval_words(letters, n):
    # Duval's generation of Lyndon words of length <= n in lex order
    k = len(letters)
    if k == 0 or n == 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(letters[i] for i in w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def necklace_count(q: int, d: int) -> int:
    """Witt's formula: number of Lyndon words of length d on q letters."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(d // e) * q ** e
    return total // d


def _mobius(n: int) -> int:
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


# ---------------------------------------------------------------------------
# Radford rewriting: words as polynomials in Lyndon words
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def word_to_lyndon_poly(w: Word) -> Tuple[Tuple[Tuple[Word, ...], Fraction], ...]:
    """Express ``w`` in the shuffle algebra as a polynomial in Lyndon words.

    Returns pairs ``(sorted tuple of Lyndon factors, coefficient)``.
    """
    if not w:
        return (((), Fraction(1)),)
    if is_lyndon(w):
        return (((w,), Fraction(1)),)
    factors = lyndon_factorization(w)
    prod_ = shuffle_many(factors)
    alpha = prod_.pop(w)
    acc: Dict[Tuple[Word, ...], Fraction] = {tuple(sorted(factors)): Fraction(1)}
    for u, c in prod_.items():
        if not u < w:
            raise AssertionError(f"triangularity violated at {w} by {u}")
        for mono, cu in word_to_lyndon_poly(u):
            acc[mono] = acc.get(mono, 0) - c * cu
    return tuple((m, c / alpha) for m, c in sorted(acc.items()) if c)


def loop_sym(word: Word, cycle: int) -> Sym:
    return ("L", tuple(word), cycle)


def tau_sym(i: int, j: int) -> Sym:
    return ("T", min(i, j), max(i, j))


def opaque_sym(key: str) -> Sym:
    return ("O", key)


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


@lru_cache(maxsize=None)
def normalize_loop_const(word: Word, cycle: int) -> Tuple[Tuple[Mono, Fraction], ...]:
    """Canonical form of the loop integral ``[word | cycle]``.

    Shuffle relations are applied so only Lyndon words survive, and length-one
    integrals evaluate to ``delta(letter, cycle)``.
    """
    out: Dict[Mono, Fraction] = {}
    for factors, c in word_to_lyndon_poly(tuple(word)):
        mono: Dict[Sym, int] = {}
        dead = False
        for l in factors:
            if len(l) == 1:
                if l[0] != cycle:
                    dead = True
                    break
            else:
                s = loop_sym(l, cycle)
                mono[s] = mono.get(s, 0) + 1
        if dead:
            continue
        key = tuple(sorted(mono.items()))
        out[key] = out.get(key, 0) + c
    return tuple((m, c) for m, c in sorted(out.items()) if c)


# ---------------------------------------------------------------------------
# ConstPoly
# ---------------------------------------------------------------------------

class ConstPoly:
    """Sparse polynomial with Fraction coefficients in constant symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        self.terms: Dict[Mono, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)

    @classmethod
    def const(cls, c) -> "ConstPoly":
        return cls({ONE_MONO: Fraction(c)})

    @classmethod
    def symbol(cls, sym: Sym) -> "ConstPoly":
        return cls({((sym, 1),): Fraction(1)})

    @classmethod
    def loop(cls, word: Word, cycle: int) -> "ConstPoly":
        return cls(dict(normalize_loop_const(tuple(word), cycle)))

    @classmethod
    def tau(cls, i: int, j: int) -> "ConstPoly":
        return cls.symbol(tau_sym(i, j))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ConstPoly.const(other)
        return isinstance(other, ConstPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = _as_poly(other)
        d = dict(self.terms)
        for m, c in other.terms.items():
            v = d.get(m, 0) + c
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return ConstPoly(d)

    __radd__ = __add__

    def __neg__(self):
        return ConstPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        d: Dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return ConstPoly(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ConstPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def symbols(self):
        return {s for m in self.terms for s, _ in m}

    def rational(self) -> Fraction:
        """The value of a symbol-free polynomial."""
        if any(m for m in self.terms):
            raise ValueError("polynomial is not a pure rational")
        return self.terms.get(ONE_MONO, Fraction(0))

    def specialize(self, sigma) -> Fraction:
        """Evaluate under an assignment ``sigma(sym) -> Fraction``."""
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for s, e in m:
                v *= sigma(s) ** e
            total += v
        return total

    def __repr__(self):
        return f"ConstPoly({self.terms!r})"


def _as_poly(x) -> ConstPoly:
    if isinstance(x, ConstPoly):
        return x
    return ConstPoly.const(x)


# ---------------------------------------------------------------------------
# rational specialization
# ---------------------------------------------------------------------------

def random_rational(rng: random.Random, max_num: int = 97, max_den: int = 13) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def symbol_value(seed: int, key: str, max_num: int = 97, max_den: int = 13) -> Fraction:
    """Deterministic rational assigned to ``key`` under ``seed``.

    Values depend only on (seed, key), so the same symbol receives the same
    value in every expression of a trial.
    """
    rng = random.Random(f"{seed}|{key}")
    return random_rational(rng, max_num, max_den)


def all_words(letters: Iterable[int], maxlen: int, minlen: int = 0):
    letters = list(letters)
    for n in range(minlen, maxlen + 1):
        yield from product(letters, repeat=n)
