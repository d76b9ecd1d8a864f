"""The graded Lie algebra t_{h,n}, computed degreewise as a quotient.

Generators are ``a_i^(r)``, ``b_i^(r)`` (weight 1) and ``t_rs`` for ``r != s``
(weight 2).  The free Lie algebra is realised inside the tensor algebra; the
ideal generated by the defining relations is spanned degreewise by iterated
brackets of generators with relations and row reduced exactly.  Elements of
the quotient are stored as normal forms: tensor vectors supported on the
non-pivot words of that reduction.  Two Lie elements are equal in t_{h,n}
exactly when their normal forms agree.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .coeffring import lyndon_words, mono_mul, standard_factorization
from .series import Context, Expr, funcs_mul

TWord = Tuple[int, ...]
TVec = Dict[TWord, Fraction]


def _vadd(acc: TVec, vec: TVec, c=1):
    for w, v in vec.items():
        x = acc.get(w, 0) + c * v
        if x:
            acc[w] = x
        else:
            acc.pop(w, None)


def tbracket(x: TVec, y: TVec) -> TVec:
    """Commutator in the tensor algebra."""
    out: TVec = {}
    for u, a in x.items():
        for v, b in y.items():
            for w, s in ((u + v, a * b), (v + u, -a * b)):
                t = out.get(w, 0) + s
                if t:
                    out[w] = t
                else:
                    out.pop(w, None)
    return out


class Echelon:
    """Incremental exact row echelon form with pivot = largest word."""

    def __init__(self):
        self.rows: Dict[TWord, TVec] = {}

    def reduce(self, vec: TVec) -> TVec:
        vec = dict(vec)
        rows = self.rows
        while True:
            piv = [w for w in vec if w in rows]
            if not piv:
                return vec
            w = max(piv)
            c = vec[w]
            _vadd(vec, rows[w], -c)

    def add(self, vec: TVec) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        p = max(vec)
        c = vec[p]
        self.rows[p] = {w: v / c for w, v in vec.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


class Presentation:
    """t_{h,n} with generator order a's, b's (coordinate-major), then t_rs."""

    def __init__(self, h: int, n: int):
        if h < 1 or n < 1:
            raise ValueError("h and n must be >= 1")
        self.h, self.n = h, n
        self.labels: List[str] = []
        self.weights: List[int] = []
        self.kind: List[tuple] = []
        for r in range(1, n + 1):
            for i in range(1, h + 1):
                self._gen(("a", i, r))
        for r in range(1, n + 1):
            for i in range(1, h + 1):
                self._gen(("b", i, r))
        for r in range(1, n + 1):
            for s in range(1, n + 1):
                if r != s:
                    self._gen(("t", r, s))
        self.index = {k: g for g, k in enumerate(self.kind)}
        self._ideal: Dict[int, Echelon] = {}
        self._basis: Dict[int, list] = {}
        self._ad_cache: Dict[tuple, TVec] = {}

    def _gen(self, kind):
        self.kind.append(kind)
        self.weights.append(2 if kind[0] == "t" else 1)
        if kind[0] == "t":
            self.labels.append(f"t_{kind[1]}{kind[2]}")
        elif self.n == 1:
            self.labels.append(f"{kind[0]}_{kind[1]}")
        else:
            self.labels.append(f"{kind[0]}_{kind[1]}^({kind[2]})")

    # -- generators ---------------------------------------------------------

    def a(self, i: int, r: int = 1) -> int:
        return self.index[("a", i, r)]

    def b(self, i: int, r: int = 1) -> int:
        return self.index[("b", i, r)]

    def t(self, r: int, s: int) -> int:
        return self.index[("t", r, s)]

    def ab_letter(self, c: int, r: int = 1) -> int:
        """Letter c of the alphabet (a_1..a_h, b_1..b_h) in coordinate r."""
        return self.a(c, r) if c <= self.h else self.b(c - self.h, r)

    def word_weight(self, w: TWord) -> int:
        wt = self.weights
        return sum(wt[g] for g in w)

    def gen_vec(self, g: int) -> TVec:
        return {(g,): Fraction(1)}

    # -- relations ----------------------------------------------------------

    def relations(self) -> List[TVec]:
        h, n = self.h, self.n
        a, b, t, g = self.a, self.b, self.t, self.gen_vec
        rels: List[TVec] = []
        for r in range(1, n + 1):
            for l in range(1, n + 1):
                for m in range(1, n + 1):
                    if len({r, l, m}) < 3:
                        continue
                    for i in range(1, h + 1):
                        rels.append(tbracket(g(a(i, r)), g(t(l, m))))
                        rels.append(tbracket(g(b(i, r)), g(t(l, m))))
        for r in range(1, n + 1):
            v: TVec = {}
            for i in range(1, h + 1):
                _vadd(v, tbracket(g(b(i, r)), g(a(i, r))))
            for s in range(1, n + 1):
                if s != r:
                    _vadd(v, g(t(r, s)))
            rels.append(v)
        for r in range(1, n + 1):
            for s in range(1, n + 1):
                if r == s:
                    continue
                for i in range(1, h + 1):
                    for j in range(1, h + 1):
                        v = tbracket(g(b(i, r)), g(a(j, s)))
                        if i == j:
                            _vadd(v, g(t(r, s)), -1)
                        rels.append(v)
                        v = tbracket(g(a(i, r)), g(b(j, s)))
                        if i == j:
                            _vadd(v, g(t(r, s)))
                        rels.append(v)
                        rels.append(tbracket(g(a(i, r)), g(a(j, s))))
                        rels.append(tbracket(g(b(i, r)), g(b(j, s))))
        return [v for v in rels if v]

    def ideal(self, d: int) -> Echelon:
        """Echelon basis of the degree-d part of the relation ideal."""
        if d in self._ideal:
            return self._ideal[d]
        ech = Echelon()
        for rel in self.relations():
            if self.word_weight(next(iter(rel))) == d:
                ech.add(rel)
        for gidx, wt in enumerate(self.weights):
            if d - wt >= 2:
                lower = self.ideal(d - wt)
                for row in list(lower.rows.values()):
                    ech.add(tbracket(self.gen_vec(gidx), row))
        self._ideal[d] = ech
        return ech

    # -- quotient -----------------------------------------------------------

    def nf(self, vec: TVec) -> TVec:
        """Normal form of a Lie element (mixed degrees allowed)."""
        by_deg: Dict[int, TVec] = {}
        for w, c in vec.items():
            by_deg.setdefault(self.word_weight(w), {})[w] = c
        out: TVec = {}
        for d, v in by_deg.items():
            out.update(self.ideal(d).reduce(v) if d >= 2 else v)
        return out

    def lie_dim(self, d: int) -> int:
        return len(lyndon_words(range(len(self.kind)), d, dict(enumerate(self.weights))))

    def dim(self, d: int) -> int:
        return self.lie_dim(d) - self.ideal(d).rank

    def bracket(self, x: TVec, y: TVec, D: int | None = None) -> TVec:
        z = tbracket(x, y)
        if D is not None:
            z = {w: c for w, c in z.items() if self.word_weight(w) <= D}
        return self.nf(z)

    def ad_word(self, letters: Sequence[int], x: TVec, D: int) -> TVec:
        """``[l1, [l2, ... [lk, x]]]`` in normal form, truncated at D."""
        acc = dict(x)
        for g in reversed(letters):
            nxt: TVec = {}
            for w, c in acc.items():
                _vadd(nxt, self._ad_gen(g, w, D), c)
            acc = nxt
            if not acc:
                break
        return acc

    def _ad_gen(self, g: int, w: TWord, D: int) -> TVec:
        key = (g, w, D)
        hit = self._ad_cache.get(key)
        if hit is None:
            if self.weights[g] + self.word_weight(w) > D:
                hit = {}
            else:
                hit = self.nf(tbracket(self.gen_vec(g), {w: Fraction(1)}))
            self._ad_cache[key] = hit
        return hit

    def left_normed(self, letters: Sequence[int], D: int) -> TVec:
        """``[..[[l1, l2], l3] .., lk]`` in normal form."""
        acc = self.gen_vec(letters[0])
        for g in letters[1:]:
            acc = self.bracket(acc, self.gen_vec(g), D)
        return acc

    # -- display basis --------------------------------------------------------

    def _display_rank(self, g: int) -> tuple:
        kind = self.kind[g]
        order = {"b": 0, "a": 1, "t": 2}[kind[0]]
        return (order, kind[2], kind[1]) if kind[0] != "t" else (order, kind[1], kind[2])

    def _lyndon_bracket(self, w: TWord) -> TVec:
        if len(w) == 1:
            return self.gen_vec(w[0])
        ranks = {g: i for i, g in enumerate(sorted(range(len(self.kind)), key=self._display_rank))}
        rw = tuple(ranks[g] for g in w)
        u, _ = standard_factorization(rw)
        k = len(u)
        return tbracket(self._lyndon_bracket(w[:k]), self._lyndon_bracket(w[k:]))

    def bracket_label(self, w: TWord) -> str:
        if len(w) == 1:
            return self.labels[w[0]]
        ranks = {g: i for i, g in enumerate(sorted(range(len(self.kind)), key=self._display_rank))}
        u, _ = standard_factorization(tuple(ranks[g] for g in w))
        k = len(u)
        return f"[{self.bracket_label(w[:k])},{self.bracket_label(w[k:])}]"

    def basis(self, d: int):
        """Lyndon brackets forming a basis of t[d], with a coordinate solver."""
        if d in self._basis:
            return self._basis[d]
        order = sorted(range(len(self.kind)), key=self._display_rank)
        wts = {i: self.weights[g] for i, g in enumerate(order)}
        cands = [tuple(order[i] for i in w) for w in lyndon_words(range(len(order)), d, wts)]
        cands.sort(key=lambda w: (len(w), [self._display_rank(g) for g in w]))
        chosen = []
        rows: Dict[TWord, Tuple[TVec, Dict[int, Fraction]]] = {}
        target = self.dim(d)
        for w in cands:
            if len(chosen) == target:
                break
            vec = self.nf(self._lyndon_bracket(w))
            combo = {len(chosen): Fraction(1)}
            vec, combo = self._reduce_tracked(rows, vec, combo)
            if vec:
                p = max(vec)
                c = vec[p]
                rows[p] = ({u: v / c for u, v in vec.items()},
                           {i: v / c for i, v in combo.items()})
                chosen.append(w)
        self._basis[d] = (chosen, rows)
        return self._basis[d]

    @staticmethod
    def _reduce_tracked(rows, vec: TVec, combo: Dict[int, Fraction]):
        vec, combo = dict(vec), dict(combo)
        while True:
            piv = [w for w in vec if w in rows]
            if not piv:
                return vec, combo
            w = max(piv)
            c = vec[w]
            rv, rc = rows[w]
            _vadd(vec, rv, -c)
            for i, v in rc.items():
                x = combo.get(i, 0) - c * v
                if x:
                    combo[i] = x
                else:
                    combo.pop(i, None)

    def coordinates(self, vec: TVec) -> Dict[TWord, Fraction]:
        """Coordinates of a normal-form element in the display basis."""
        out: Dict[TWord, Fraction] = {}
        by_deg: Dict[int, TVec] = {}
        for w, c in vec.items():
            by_deg.setdefault(self.word_weight(w), {})[w] = c
        for d, v in by_deg.items():
            chosen, rows = self.basis(d)
            rest, combo = self._reduce_tracked(rows, v, {})
            if rest:
                raise ValueError("vector is not in the span of the basis")
            for i, c in combo.items():
                out[chosen[i]] = -c
        return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def presentation(h: int, n: int) -> Presentation:
    return Presentation(h, n)


def witt_weighted_dims(h: int, n: int, D: int) -> List[int]:
    p = presentation(h, n)
    return [p.lie_dim(d) for d in range(1, D + 1)]


# ---------------------------------------------------------------------------
# t_{h,n}-valued expressions
# ---------------------------------------------------------------------------

def thn_context(h: int, n: int, D: int) -> Context:
    return Context(h, n, D, "thn")


def from_tvec(ctx: Context, vec: TVec, coeff: Expr | None = None) -> Expr:
    """``coeff (x) vec`` with vec projected to normal form."""
    p = presentation(ctx.h, ctx.n)
    vec = p.nf({w: c for w, c in vec.items() if p.word_weight(w) <= ctx.D})
    out = Expr(ctx)
    if coeff is None:
        for w, c in vec.items():
            out._add(((), (), None, w), c)
        return out
    for (cm, f, b, _), c in coeff.terms.items():
        for w, v in vec.items():
            out._add((cm, f, b, w), c * v)
    return out


def generator(ctx: Context, g: int) -> Expr:
    return from_tvec(ctx, {(g,): Fraction(1)})


def project(x: Expr) -> Expr:
    """Re-normalize every word of a thn expression."""
    p = presentation(x.ctx.h, x.ctx.n)
    out = Expr(x.ctx)
    for (cm, f, b, w), c in x.terms.items():
        if p.word_weight(w) > x.ctx.D:
            continue
        for w2, v in p.nf({w: Fraction(1)}).items():
            out._add((cm, f, b, w2), c * v)
    return out


def ad_apply(u: Expr, x: Expr, letter_map, tctx: Context) -> Expr:
    """``sum u_w x_v (x) ad(w)(v)``: u is a word series, x a thn expression.

    ``letter_map`` sends a letter of u's algebra to a generator index.
    """
    p = presentation(tctx.h, tctx.n)
    D = tctx.D
    out = Expr(tctx)
    uw = u.group_by_word()
    xw = x.group_by_word()
    for w, cu in uw.items():
        letters = tuple(letter_map(a) for a in w)
        lw = sum(p.weights[g] for g in letters)
        for v, cx in xw.items():
            if lw + p.word_weight(v) > D:
                continue
            vec = p.ad_word(letters, {v: Fraction(1)}, D)
            if not vec:
                continue
            for (cm1, f1, b1, _), c1 in cu.terms.items():
                for (cm2, f2, b2, _), c2 in cx.terms.items():
                    if b1 is not None and b2 is not None:
                        raise ValueError("product of two forms")
                    base = b1 if b2 is None else b2
                    cm = mono_mul(cm1, cm2)
                    for f, m in funcs_mul(f1, f2):
                        for tw, tv in vec.items():
                            out._add((cm, f, base, tw), c1 * c2 * m * tv)
    return out


def ad_on_generator(u: Expr, g: int, r: int, tctx: Context) -> Expr:
    """``ad(u^(r))(g)`` for a series u in the letters b_1..b_h."""
    p = presentation(tctx.h, tctx.n)
    return ad_apply(u, generator(tctx, g), lambda a: p.b(a, r), tctx)


def lie_series_to_thn(u: Expr, r: int, tctx: Context, letter_map=None) -> Expr:
    """Image of a Lie-valued word series under letters -> generators.

    Uses the Dynkin projector: a homogeneous Lie element P of degree m equals
    ``(1/m) sum_w P_w [..[w1, w2], .., wm]``.
    """
    p = presentation(tctx.h, tctx.n)
    if letter_map is None:
        def letter_map(a):
            return p.b(a, r)
    out = Expr(tctx)
    for w, cu in u.group_by_word().items():
        if not w:
            if cu:
                raise ValueError("Lie series has a degree-0 part")
            continue
        letters = tuple(letter_map(a) for a in w)
        if sum(p.weights[g] for g in letters) > tctx.D:
            continue
        vec = p.left_normed(letters, tctx.D)
        out += from_tvec(tctx, vec, cu.scale(Fraction(1, len(w))))
    return out


def transpose_coords(x: Expr, r: int, s: int) -> Expr:
    """Action of the transposition (r s) on coordinates and generators."""
    from .symcalc import relabel_coords
    if r == s:
        return x.copy()
    p = presentation(x.ctx.h, x.ctx.n)
    perm = {r: s, s: r}

    def swap_gen(g):
        kind = p.kind[g]
        if kind[0] == "t":
            return p.index[("t", perm.get(kind[1], kind[1]), perm.get(kind[2], kind[2]))]
        return p.index[(kind[0], kind[1], perm.get(kind[2], kind[2]))]

    y = relabel_coords(x, perm)
    moved = y.map_keys(lambda k: [((k[0], k[1], k[2], tuple(swap_gen(g) for g in k[3])), 1)])
    return project(moved)


def coordinates_expr(x: Expr) -> Dict[TWord, Expr]:
    """Split a thn expression by display-basis element."""
    p = presentation(x.ctx.h, x.ctx.n)
    vecs: Dict[tuple, TVec] = {}
    for (cm, f, b, w), c in x.terms.items():
        vecs.setdefault((cm, f, b), {})[w] = c
    out: Dict[TWord, Expr] = {}
    for (cm, f, b), vec in vecs.items():
        for bw, c in p.coordinates(vec).items():
            cur = out.setdefault(bw, Expr(x.ctx))
            cur._add((cm, f, b, ()), c)
    return {k: v for k, v in out.items() if v}


def relation_residuals(h: int, n: int, D: int) -> Iterable[TVec]:
    p = presentation(h, n)
    for rel in p.relations():
        if p.word_weight(next(iter(rel))) <= D:
            yield p.nf(rel)


__all__ = [
    "Presentation", "presentation", "Echelon", "tbracket", "thn_context",
    "from_tvec", "generator", "project", "ad_apply", "ad_on_generator",
    "lie_series_to_thn", "transpose_coords", "coordinates_expr",
    "relation_residuals", "witt_weighted_dims",
]
