"""Second-opinion checks by rational specialization and brute force.

Every constant symbol is replaced by a deterministic pseudo-random rational;
expressions become vectors over the formal basis (function monomial, base
form, word).  Products of specialized series are recomputed here with a
naive shuffle/concatenation product that shares no code with the engine.
Psi/op nodes are treated as opaque basis elements, so these checks validate
linear-algebra consequences of the rewrite rules, not their meaning.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Dict, Iterable, List, Tuple

from .coeffring import symbol_value
from .series import Context, Expr
from .symcalc import omega_expand

Vec = Dict[tuple, Fraction]


# ---------------------------------------------------------------------------
# assignments
# ---------------------------------------------------------------------------

def symbol_key(sym) -> str:
    kind = sym[0]
    if kind == "L":
        return "L:" + ",".join(map(str, sym[1])) + "|" + str(sym[2])
    if kind == "T":
        i, j = sorted(sym[1:])
        return f"T:{i},{j}"
    return "O:" + sym[1]


@lru_cache(maxsize=1 << 16)
def _value(seed: int, sym) -> Fraction:
    return symbol_value(seed, symbol_key(sym))


@dataclass(frozen=True)
class Assignment:
    """Deterministic map from constant symbols to rationals."""

    seed: int

    def __call__(self, sym) -> Fraction:
        return _value(self.seed, sym)

    def table(self, symbols: Iterable) -> Dict[tuple, Fraction]:
        return {s: self(s) for s in symbols}


def random_assignment(seed: int, symbols: Iterable = ()) -> Dict[tuple, Fraction]:
    return Assignment(seed).table(symbols)


# ---------------------------------------------------------------------------
# specialization
# ---------------------------------------------------------------------------

def specialize_form(x: Expr, sigma) -> Vec:
    """Vector ``{(funcs, base, word): rational}`` after omega_expand."""
    if isinstance(sigma, Assignment):
        key = (id(x), sigma.seed)
        hit = _SPECIALIZED.get(key)
        if hit is None or hit[0] is not x:
            hit = (x, _specialize(x, sigma))
            _SPECIALIZED[key] = hit
            if len(_SPECIALIZED) > 64:
                _SPECIALIZED.pop(next(iter(_SPECIALIZED)))
        return dict(hit[1])
    return _specialize(x, sigma)


_SPECIALIZED: Dict[tuple, Tuple[Expr, Vec]] = {}


@lru_cache(maxsize=1 << 18)
def _mono_value(seed: int, cm) -> Fraction:
    v = Fraction(1)
    for s, e in cm:
        v *= _value(seed, s) ** e
    return v


def _specialize(x: Expr, sigma) -> Vec:
    if isinstance(sigma, dict):
        table = sigma

        def sigma(s):
            if s not in table:
                raise KeyError(f"no value assigned to symbol {s!r}")
            return table[s]
    out: Vec = {}
    fast = isinstance(sigma, Assignment)
    for (cm, f, b, w), c in _expanded(x).terms.items():
        if fast:
            v = c * _mono_value(sigma.seed, cm) if cm else c
        else:
            v = c
            for s, e in cm:
                v *= sigma(s) ** e
        k = (f, b, w)
        t = out.get(k, 0) + v
        if t:
            out[k] = t
        else:
            out.pop(k, None)
    return out


_EXPANDED: Dict[int, Tuple[Expr, Expr]] = {}


def _expanded(x: Expr) -> Expr:
    hit = _EXPANDED.get(id(x))
    if hit is None or hit[0] is not x:
        hit = (x, omega_expand(x))
        _EXPANDED[id(x)] = hit
    return hit[1]


def vec_to_expr(ctx: Context, v: Vec) -> Expr:
    out = Expr(ctx)
    for (f, b, w), c in v.items():
        out._add(((), f, b, w), c)
    return out


def _vadd(acc: Vec, k, c):
    t = acc.get(k, 0) + c
    if t:
        acc[k] = t
    else:
        acc.pop(k, None)


def vsub(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, c in b.items():
        _vadd(out, k, -c)
    return out


def vadd(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, c in b.items():
        _vadd(out, k, c)
    return out


def vscale(a: Vec, s) -> Vec:
    return {k: c * s for k, c in a.items()} if s else {}


# ---------------------------------------------------------------------------
# naive product
# ---------------------------------------------------------------------------

def _naive_shuffle(u: tuple, v: tuple) -> Dict[tuple, int]:
    n = len(u) + len(v)
    out: Dict[tuple, int] = {}
    for pos in itertools.combinations(range(n), len(u)):
        ps = set(pos)
        iu, iv = iter(u), iter(v)
        w = tuple(next(iu) if k in ps else next(iv) for k in range(n))
        out[w] = out.get(w, 0) + 1
    return out


@lru_cache(maxsize=None)
def _naive_funcs(f1, f2) -> List[Tuple[tuple, int]]:
    d1, d2 = dict(f1), dict(f2)
    coords = sorted(set(d1) | set(d2))
    choices = []
    for r in coords:
        if r in d1 and r in d2:
            choices.append([(r, w, m) for w, m in _naive_shuffle(d1[r], d2[r]).items()])
        else:
            choices.append([(r, d1.get(r, d2.get(r)), 1)])
    out = []
    for combo in itertools.product(*choices):
        m = 1
        for _, _, k in combo:
            m *= k
        out.append((tuple((r, w) for r, w, _ in combo), m))
    return out


def naive_mul(a: Vec, b: Vec, D: int, weight: Callable = len) -> Vec:
    """Concatenation on words, shuffle on functions, at most one form factor."""
    out: Vec = {}
    by_weight: Dict[int, list] = {}
    for (f2, b2, w2), c2 in b.items():
        by_weight.setdefault(weight(w2), []).append((f2, b2, w2, c2))
    for (f1, b1, w1), c1 in a.items():
        room = D - weight(w1)
        for wt, items in by_weight.items():
            if wt > room:
                continue
            for f2, b2, w2, c2 in items:
                w = w1 + w2
                if weight(w) > D:
                    continue
                if b1 is not None and b2 is not None:
                    raise ValueError("product of two forms")
                base = b1 if b2 is None else b2
                for f, m in _naive_funcs(f1, f2):
                    _vadd(out, (f, base, w), c1 * c2 * m)
    return out


def unit() -> Vec:
    return {((), None, ()): Fraction(1)}


def naive_exp(x: Vec, D: int) -> Vec:
    out = unit()
    term = unit()
    for k in range(1, D + 1):
        term = vscale(naive_mul(term, x, D), Fraction(1, k))
        out = vadd(out, term)
    return out


def letter_exp(j: int, D: int, sign: int = 1) -> Vec:
    return {((), None, (j,) * d): Fraction(sign ** d, factorial(d)) for d in range(D + 1)}


# ---------------------------------------------------------------------------
# identity registry
# ---------------------------------------------------------------------------

@dataclass
class Report:
    ident: str
    ok: bool
    h: int
    n: int
    D: int
    trials: int
    seed: int
    detail: str = ""

    def line(self) -> str:
        s = (f"{'PASS' if self.ok else 'FAIL'} {self.ident} h={self.h} n={self.n} "
             f"D={self.D} trials={self.trials} seed={self.seed}")
        return s + (f"  # {self.detail}" if self.detail else "")


def _first_term(v: Vec) -> str:
    if not v:
        return ""
    k = min(v, key=repr)
    return f"residual term {k!r} -> {v[k]}"


def _check_trials(residual: Callable[[Assignment], Vec], trials: int, seed: int) -> Tuple[bool, str]:
    for t in range(trials):
        r = residual(Assignment(seed + t))
        if r:
            return False, f"trial {t}: " + _first_term(r)
    return True, ""


def _check_table(table: Dict[str, Callable[[Assignment], Vec]], trials: int,
                 seed: int) -> Dict[str, Tuple[bool, str]]:
    """All identities of one configuration, trials outermost so specializations are shared."""
    results = {k: (True, "") for k in table}
    for t in range(trials):
        s = Assignment(seed + t)
        for k, fn in table.items():
            if not results[k][0]:
                continue
            r = fn(s)
            if r:
                results[k] = (False, f"trial {t}: " + _first_term(r))
        _SPECIALIZED.clear()
    return results


def _identities(h: int, n: int, D: int) -> Dict[str, Callable[[Assignment], Vec]]:
    from . import engine as E
    from .freelie import bernoulli_seed_series
    from .series import mul
    from .symcalc import deck_pullback, differential, op_minus_id

    ctx = E.context(h, D)
    g, ginv = E.compute_g(h, D)
    ids: Dict[str, Callable[[Assignment], Vec]] = {}

    ids["inverse"] = lambda s: vsub(naive_mul(specialize_form(g, s), specialize_form(ginv, s), D), unit())
    lam, I, dginv = E.compute_log_g(h, D), E.compute_I(h, D), differential(ginv)
    ids["explog"] = lambda s: vsub(naive_exp(specialize_form(lam, s), D), specialize_form(g, s))
    ids["I"] = lambda s: vsub(specialize_form(I, s),
                              naive_mul(specialize_form(g, s), specialize_form(dginv, s), D))
    for j in range(1, h + 1):
        ids[f"monodromy-A{j}-g"] = (lambda s, pa=deck_pullback(g, (j,)): vsub(
            specialize_form(pa, s), specialize_form(g, s)))
        ids[f"monodromy-B{j}-g"] = (lambda s, j=j, pb=deck_pullback(g, (h + j,)): vsub(
            specialize_form(pb, s), naive_mul(specialize_form(g, s), letter_exp(j, D, -1), D)))
    for i in range(1, h + 1):
        K = E.compute_K(h, D, i)
        H = E.compute_H(h, D, i)
        seed_i = mul(E.omega(ctx, i), bernoulli_seed_series(ctx, i))

        def fixed(s, K=K, seed_i=seed_i):
            gm1 = vsub(specialize_form(g, s), unit())
            prod = vec_to_expr(ctx, naive_mul(gm1, specialize_form(K, s), D))
            return vsub(specialize_form(K, s),
                        vadd(specialize_form(seed_i, s), specialize_form(op_minus_id(prod), s)))

        ids[f"fixedpoint-K{i}"] = fixed
        ids[f"H=gK-{i}"] = (lambda s, K=K, H=H: vsub(specialize_form(H, s),
                                                       naive_mul(specialize_form(g, s), specialize_form(K, s), D)))
        for j in range(1, h + 1):
            ids[f"monodromy-B{j}-K{i}"] = (lambda s, j=j, K=K, pk=deck_pullback(K, (h + j,)): vsub(
                specialize_form(pk, s), naive_mul(letter_exp(j, D), specialize_form(K, s), D)))
            ids[f"monodromy-B{j}-H{i}"] = (lambda s, H=H, ph=deck_pullback(H, (h + j,)): vsub(
                specialize_form(ph, s), specialize_form(H, s)))
    return ids


def _golden_identities(h: int, perturb: bool = False) -> Dict[str, Callable[[Assignment], Vec]]:
    from . import engine as E
    from . import lowdegree as G
    from .symcalc import func

    D = 3
    computed = {
        "g": lambda: E.compute_g(h, D)[0],
        "log-g": lambda: E.compute_log_g(h, D),
        "I": lambda: E.compute_I(h, D),
        "boldK": lambda: E.assemble_boldK(h, 1, D),
        "boldJ": lambda: E.assemble_boldJ(h, 1, D),
    }
    ids = {}
    for name, fn in computed.items():
        gold = G.GOLDENS[name](h)
        if perturb and name == "g":
            ctx = gold.ctx
            gold = gold + func(ctx, (h + 1, h + 1)).with_word((1, 1))
        ids[f"fixture-{name}"] = (lambda s, a=fn(), b=gold: vsub(specialize_form(a, s),
                                                                  specialize_form(b, s)))
    lam = E.solve_lambda(h, D)
    gl = G.lambda_golden(h)
    ids["fixture-lambda"] = lambda s: _join_vecs(
        {c: vsub(specialize_form(lam[c], s), specialize_form(gl[c], s)) for c in gl})
    return ids


def _join_vecs(parts: Dict[int, Vec]) -> Vec:
    return {(c,) + k: v for c, vec in parts.items() for k, v in vec.items()}


def _structure_identities(h: int, n: int, D: int) -> Dict[str, Callable[[Assignment], Vec]]:
    from . import engine as E
    from .freelie import exp_letter
    from .series import mul
    from .symcalc import deck_pullback, func, gamma, psi_apply

    ids: Dict[str, Callable[[Assignment], Vec]] = {}
    ctx = E.context(h, D)
    rng = random.Random(h * 100 + n * 10 + D)
    delta = Expr(ctx)
    for _ in range(6):
        w = tuple(rng.randint(1, h) for _ in range(rng.randint(0, max(0, D - 1))))
        fw = tuple(rng.randint(1, 2 * h) for _ in range(rng.randint(1, 2)))
        delta += gamma(ctx, rng.randint(1, 2 * h), word=w).scale(rng.randint(-5, 5))
        delta += psi_apply(mul(func(ctx, fw), gamma(ctx, rng.randint(1, 2 * h)))).with_word(w)
    composed = E.tuple_to_bold(E.forms_to_tuple(delta), n, D)
    ids["composed-map-zero"] = lambda s: specialize_form(composed, s)
    if n >= 2:
        kt = E.formal_K_tuple(h, D)
        for i in range(1, h + 1):
            tail = Expr(ctx)
            for k in range(D + 1):
                tail += Expr.term(ctx, Fraction((-1) ** k, factorial(k + 1)), word=(i,) * k)
            rhs = mul(kt.under, exp_letter(ctx, i, -1)) + mul(kt.kappas[i - 1], tail)
            lhs = deck_pullback(kt.under, (h + i,), 2)
            ids[f"tuples-B{i}(2)"] = (lambda s, a=lhs, b=rhs: vsub(specialize_form(a, s),
                                                                   specialize_form(b, s)))
            lhs1 = deck_pullback(kt.under, (h + i,), 1)
            rhs1 = mul(exp_letter(ctx, i, 1), kt.under)
            ids[f"tuples-B{i}(1)"] = (lambda s, a=lhs1, b=rhs1: vsub(specialize_form(a, s),
                                                                     specialize_form(b, s)))
        g, _ = E.compute_g(h, D)
        et = E.explicit_K_tuple(h, D)
        lhs = E.bold_s_gamma(E.tuple_to_bold(et, n, D), g)
        rhs = E.tuple_to_bold(E.S_gamma(et, g), n, D)
        ids["diagram"] = lambda s: vsub(specialize_form(lhs, s), specialize_form(rhs, s))
    return ids


def crosscheck(ident: str, h: int, n: int, D: int, trials: int = 20, seed: int = 42) -> Report:
    """Run one registered identity under ``trials`` specializations."""
    table = registry(h, n, D)
    if ident not in table:
        raise KeyError(f"unknown identity {ident!r}")
    ok, detail = _check_trials(table[ident], trials, seed)
    return Report(ident, ok, h, n, D, trials, seed, detail)


def registry(h: int, n: int, D: int) -> Dict[str, Callable[[Assignment], Vec]]:
    ids = {}
    if n == 1:
        ids.update(_identities(h, n, D))
        if D == 3:
            ids.update(_golden_identities(h))
    else:
        ids.update(_structure_identities(h, n, D))
    return ids


def negative_control(h: int = 2, trials: int = 20, seed: int = 42) -> Report:
    """A perturbed g[2] fixture must be rejected."""
    ident = "fixture-g"
    ok, detail = _check_trials(_golden_identities(h, perturb=True)[ident], trials, seed)
    return Report("negative-control-g[2]", not ok, h, 1, 3, trials, seed,
                  "perturbation detected: " + detail if not ok else "perturbation NOT detected")


def run_all(trials: int = 20, seed: int = 42, quick: bool = False) -> List[Report]:
    """Criteria-level oracle sweep."""
    reports: List[Report] = []
    plan = [(1, 1, 4), (2, 1, 3), (2, 1, 4)] if not quick else [(1, 1, 3), (2, 1, 3)]
    plan += [(1, 2, 3), (2, 2, 3), (1, 3, 3)] if not quick else [(1, 2, 3)]
    for h, n, D in plan:
        for ident, (ok, detail) in _check_table(registry(h, n, D), trials, seed).items():
            reports.append(Report(ident, ok, h, n, D, trials, seed, detail))
    reports.append(negative_control(2, trials, seed))
    return reports


# ---------------------------------------------------------------------------
# independent t_{h,n} dimensions
# ---------------------------------------------------------------------------

def _rank(vectors: List[Dict[tuple, Fraction]], order_key) -> int:
    """Gaussian elimination with pivot = smallest word under ``order_key``."""
    pivots: Dict[tuple, Dict[tuple, Fraction]] = {}
    for v in vectors:
        v = dict(v)
        while v:
            p = min(v, key=order_key)
            if p not in pivots:
                c = v[p]
                pivots[p] = {w: x / c for w, x in v.items()}
                break
            c = v[p]
            for w, x in pivots[p].items():
                t = v.get(w, 0) - c * x
                if t:
                    v[w] = t
                else:
                    v.pop(w, None)
    return len(pivots)


def _comm(x, y):
    out: Dict[tuple, Fraction] = {}
    for u, a in x.items():
        for v, b in y.items():
            for w, s in ((u + v, a * b), (v + u, -a * b)):
                t = out.get(w, 0) + s
                if t:
                    out[w] = t
                else:
                    out.pop(w, None)
    return out


def _gens(h: int, n: int, rng: random.Random):
    names = [("a", i, r) for r in range(1, n + 1) for i in range(1, h + 1)]
    names += [("b", i, r) for r in range(1, n + 1) for i in range(1, h + 1)]
    names += [("t", r, s) for r in range(1, n + 1) for s in range(1, n + 1) if r != s]
    rng.shuffle(names)
    return names


def _relations(h: int, n: int, idx) -> List[dict]:
    def g(*k):
        return {(idx[k],): Fraction(1)}

    def add(x, y, c=1):
        out = dict(x)
        for w, v in y.items():
            t = out.get(w, 0) + c * v
            if t:
                out[w] = t
            else:
                out.pop(w, None)
        return out

    rels = []
    R = range(1, n + 1)
    for r in R:
        for l in R:
            for m in R:
                if len({r, l, m}) == 3:
                    for i in range(1, h + 1):
                        rels.append(_comm(g("a", i, r), g("t", l, m)))
                        rels.append(_comm(g("b", i, r), g("t", l, m)))
    for r in R:
        v: dict = {}
        for i in range(1, h + 1):
            v = add(v, _comm(g("b", i, r), g("a", i, r)))
        for s in R:
            if s != r:
                v = add(v, g("t", r, s))
        rels.append(v)
    for r in R:
        for s in R:
            if r == s:
                continue
            for i in range(1, h + 1):
                for j in range(1, h + 1):
                    d = 1 if i == j else 0
                    rels.append(add(_comm(g("b", i, r), g("a", j, s)), g("t", r, s), -d))
                    rels.append(add(_comm(g("a", i, r), g("b", j, s)), g("t", r, s), d))
                    rels.append(_comm(g("a", i, r), g("a", j, s)))
                    rels.append(_comm(g("b", i, r), g("b", j, s)))
    return [v for v in rels if v]


def independent_dims(h: int, n: int, D: int, seed: int = 7) -> List[int]:
    """Graded dimensions via spanning sets of brackets, in a shuffled generator order."""
    rng = random.Random(seed)
    names = _gens(h, n, rng)
    idx = {k: g for g, k in enumerate(names)}
    wt = {g: (2 if k[0] == "t" else 1) for k, g in idx.items()}

    def weight(w):
        return sum(wt[x] for x in w)

    perm = list(range(len(names)))
    rng.shuffle(perm)

    def order_key(w):
        return tuple(perm[x] for x in w)

    # free Lie algebra: right-nested brackets of generator sequences
    free: Dict[int, List[dict]] = {}
    for d in range(1, D + 1):
        free[d] = []
    stack = [((g,), {(g,): Fraction(1)}) for g in wt if wt[g] <= D]
    while stack:
        seq, vec = stack.pop()
        d = weight(seq)
        free[d].append(vec)
        for g in wt:
            if d + wt[g] <= D:
                stack.append((seq + (g,), _comm({(g,): Fraction(1)}, vec)))
    rels = _relations(h, n, idx)
    ideal: Dict[int, List[dict]] = {d: [] for d in range(1, D + 1)}
    frontier = [r for r in rels if weight(next(iter(r))) <= D]
    while frontier:
        nxt = []
        for v in frontier:
            d = weight(next(iter(v)))
            ideal[d].append(v)
            for g in wt:
                if d + wt[g] <= D:
                    nxt.append(_comm({(g,): Fraction(1)}, v))
        frontier = nxt
    dims = []
    for d in range(1, D + 1):
        rng.shuffle(free[d])
        rng.shuffle(ideal[d])
        dims.append(_rank(free[d], order_key) - _rank(ideal[d], order_key))
    return dims


def thn_dim_crosscheck(h: int, n: int, d: int, seed: int = 7) -> bool:
    from .thn import presentation
    return presentation(h, n).dim(d) == independent_dims(h, n, d, seed)[d - 1]


def witt_crosscheck(q: int, d: int) -> bool:
    """Lyndon count, necklace formula and bracket-span rank agree."""
    from .freelie import lyndon_basis, witt_dimension
    letters = range(1, q + 1)
    vecs = []
    for seq in itertools.product(letters, repeat=d):
        v = {(seq[-1],): Fraction(1)}
        for a in reversed(seq[:-1]):
            v = _comm({(a,): Fraction(1)}, v)
        if v:
            vecs.append(v)
    r = _rank(vecs, lambda w: w)
    return len(lyndon_basis(q, d)) == witt_dimension(q, d) == r
