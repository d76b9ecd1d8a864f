"""Verification suites over the engine's identities."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, List, Optional

from . import engine as E
from .freelie import exp_letter, exp_trunc, is_grouplike, is_primitive
from .series import Context, Expr, mul
from .symcalc import deck_pullback

SUITES = ("monodromy", "inverse", "explog", "fixedpoint", "tuples", "diagram",
          "fixtures", "oracle", "all")


@dataclass
class Check:
    ident: str
    ok: bool
    h: int
    n: int
    D: int
    extra: str = ""

    def line(self) -> str:
        s = f"{'PASS' if self.ok else 'FAIL'} {self.ident} h={self.h} n={self.n} D={self.D}"
        return s + (f" {self.extra}" if self.extra else "")


def _plan(h: Optional[int], D: Optional[int], hs=(1, 2), d_default=4):
    return [(x, D or d_default) for x in ([h] if h else hs)]


def monodromy(h: Optional[int] = None, D: Optional[int] = None, n: Optional[int] = None) -> List[Check]:
    out = []
    for hh, DD in _plan(h, D):
        ctx = E.context(hh, DD)
        g, _ = E.compute_g(hh, DD)
        for j in range(1, hh + 1):
            out.append(Check(f"A{j}*g=g", deck_pullback(g, (j,)) == g, hh, 1, DD))
            out.append(Check(f"B{j}*g=g.exp(-b{j})",
                             deck_pullback(g, (hh + j,)) == mul(g, exp_letter(ctx, j, -1)), hh, 1, DD))
        for i in range(1, hh + 1):
            K = E.compute_K(hh, DD, i)
            H = E.compute_H(hh, DD, i)
            for j in range(1, hh + 1):
                out.append(Check(f"B{j}*K{i}=exp(b{j}).K{i}",
                                 deck_pullback(K, (hh + j,)) == mul(exp_letter(ctx, j), K), hh, 1, DD))
                out.append(Check(f"B{j}*H{i}=H{i}", deck_pullback(H, (hh + j,)) == H, hh, 1, DD))
                out.append(Check(f"A{j}*H{i}=H{i}", deck_pullback(H, (j,)) == H, hh, 1, DD))
    nn = n if n and n > 1 else 2
    for hh, DD in _plan(h, min(D or 3, 3)):
        bg = E.bold_g(hh, nn, DD)
        mctx = bg.ctx
        for r in range(1, nn + 1):
            for i in range(1, hh + 1):
                letter = (r - 1) * hh + i
                rhs = mul(bg, exp_letter(mctx, letter, -1))
                out.append(Check(f"B{i}({r})*boldg=boldg.exp(-b{i}({r}))",
                                 deck_pullback(bg, (hh + i,), r) == rhs, hh, nn, DD))
    return out


def inverse(h=None, D=None, n=None) -> List[Check]:
    out = []
    for hh, DD in _plan(h, D):
        g, ginv = E.compute_g(hh, DD)
        out.append(Check("g.g^-1=1", mul(g, ginv) == Expr.one(g.ctx), hh, 1, DD))
        out.append(Check("g^-1.g=1", mul(ginv, g) == Expr.one(g.ctx), hh, 1, DD))
        out.append(Check("g grouplike", is_grouplike(g), hh, 1, DD))
        for c in range(1, 2 * hh + 1):
            want = Expr.one(g.ctx) if c <= hh else exp_letter(g.ctx, c - hh)
            out.append(Check(f"holonomy-{c}", E.holonomy(hh, DD, c) == want, hh, 1, DD))
    return out


def explog(h=None, D=None, n=None) -> List[Check]:
    out = []
    for hh, DD in _plan(h, D):
        g, ginv = E.compute_g(hh, DD)
        lam = E.compute_log_g(hh, DD)
        out.append(Check("exp(log g)=g", exp_trunc(lam) == g, hh, 1, DD))
        out.append(Check("log g recursion=log series", lam == E.log_g_series(hh, DD), hh, 1, DD))
        out.append(Check("log g primitive", is_primitive(lam), hh, 1, DD))
        I = E.compute_I(hh, DD)
        out.append(Check("I recursion=g.d(g^-1)", I == E.I_from_g(hh, DD), hh, 1, DD))
        out.append(Check("I recursion=sum gamma_i Lambda_i", I == E.I_from_lambda(hh, DD), hh, 1, DD))
    return out


def fixedpoint(h=None, D=None, n=None) -> List[Check]:
    out = []
    for hh, DD in _plan(h, D):
        g, _ = E.compute_g(hh, DD)
        ctx = g.ctx
        for j in range(1, hh + 1):
            K = E.compute_K(hh, DD, j)
            res = E.fixed_point_residual(hh, DD, j)
            out.append(Check(f"(id-Op(g-1))K{j}=seed", not res, hh, 1, DD))
            out.append(Check(f"K{j}=sum (Op(g-1))^r seed", E.K_series(hh, DD, j) == K, hh, 1, DD))
            out.append(Check(f"H{j}=g.K{j}", E.compute_H(hh, DD, j) == mul(g, K), hh, 1, DD))
            out.append(Check(f"K{j}[0]=omega_{j}", K.degree_part(0) == E.omega(ctx, j), hh, 1, DD))
        bs = [E.bernoulli(k) for k in range(4)]
        out.append(Check("bernoulli b0..b3=1,-1/2,1/6,0",
                         bs == [1, Fraction(-1, 2), Fraction(1, 6), 0], hh, 1, DD))
        if DD <= 3:
            from .freelie import all_words
            ok = True
            for j in range(1, hh + 1):
                K = E.compute_K(hh, DD, j)
                acc = Expr(ctx)
                for d in range(DD + 1):
                    for w in all_words(range(1, hh + 1), d):
                        acc += mul(E.resolve_omega_word(hh, DD, w + (j,)), Expr.term(ctx, 1, word=w))
                ok &= acc == K
            out.append(Check("sum_w omega_{w j} b_w = K_j", ok, hh, 1, DD))
    return out


def _tail_series(ctx: Context, i: int) -> Expr:
    """``(1 - exp(-b_i)) / b_i``."""
    out = Expr(ctx)
    for k in range(ctx.D + 1):
        out += Expr.term(ctx, Fraction((-1) ** k, factorial(k + 1)), word=(i,) * k)
    return out


def random_delta(h: int, D: int, seed: int = 0) -> Expr:
    """A form in Forms built from gamma and Psi-node terms."""
    import random
    from .symcalc import func, gamma, psi_apply
    rng = random.Random(seed)
    ctx = E.context(h, D)
    delta = Expr(ctx)
    for _ in range(6):
        w = tuple(rng.randint(1, h) for _ in range(rng.randint(0, max(0, D - 1))))
        fw = tuple(rng.randint(1, 2 * h) for _ in range(rng.randint(1, 2)))
        delta += gamma(ctx, rng.randint(1, 2 * h), word=w).scale(rng.randint(-5, 5))
        delta += psi_apply(mul(func(ctx, fw), gamma(ctx, rng.randint(1, 2 * h)))).with_word(w)
    return delta


def tuples(h=None, D=None, n=None, seed: int = 0) -> List[Check]:
    out = []
    DD = min(D or 3, 3)
    pairs = [(1, 2), (2, 2), (1, 3)] if not (h or n) else [(h or 1, n or 2)]
    for hh, nn in pairs:
        for s in range(3):
            delta = random_delta(hh, DD, seed + s)
            z = E.tuple_to_bold(E.forms_to_tuple(delta), nn, DD)
            out.append(Check(f"composed map zero (sample {s})", not z, hh, nn, DD))
    for hh in ([h] if h else [1, 2]):
        ctx = E.context(hh, DD)
        kt = E.formal_K_tuple(hh, DD)
        for i in range(1, hh + 1):
            lhs1 = deck_pullback(kt.under, (hh + i,), 1)
            out.append(Check(f"B{i}(1)* uK = exp(b{i}) uK",
                             lhs1 == mul(exp_letter(ctx, i), kt.under), hh, 2, DD))
            lhs2 = deck_pullback(kt.under, (hh + i,), 2)
            rhs2 = mul(kt.under, exp_letter(ctx, i, -1)) + mul(kt.kappas[i - 1], _tail_series(ctx, i))
            out.append(Check(f"B{i}(2)* uK = uK exp(-b{i}) + K{i}(1-exp(-b{i}))/b{i}",
                             lhs2 == rhs2, hh, 2, DD))
            for j in range(1, hh + 1):
                out.append(Check(f"B{i}* Kformal{j} = exp(b{i}) Kformal{j}",
                                 deck_pullback(kt.kappas[j - 1], (hh + i,)) ==
                                 mul(exp_letter(ctx, i), kt.kappas[j - 1]), hh, 1, DD))
    return out


def diagram(h=None, D=None, n=None) -> List[Check]:
    out = []
    DD = D or 2
    nn = n or 2
    for hh in ([h] if h else [1, 2]):
        g, _ = E.compute_g(hh, DD)
        for name, kt in (("formal", E.formal_K_tuple(hh, DD)), ("explicit", E.explicit_K_tuple(hh, DD))):
            lhs = E.bold_s_gamma(E.tuple_to_bold(kt, nn, DD), g)
            rhs = E.tuple_to_bold(E.S_gamma(kt, g), nn, DD)
            out.append(Check(f"bold_s_g o T = T o S_g ({name} K-tuple)", lhs == rhs, hh, nn, DD))
        one = Expr.one(g.ctx)
        kt = E.explicit_K_tuple(hh, DD)
        out.append(Check("S_1 = id", E.S_gamma(kt, one) == kt, hh, nn, DD))
        delta = random_delta(hh, DD, 5)
        lhs = E.S_gamma(E.forms_to_tuple(delta), g)
        rhs = E.forms_to_tuple(mul(g, delta))
        out.append(Check("S_g o iota = iota o s_g", lhs == rhs, hh, nn, DD))
    return out


def fixtures(h=None, D=None, n=None) -> List[Check]:
    from . import lowdegree as G
    hh = h or 2
    DD = 3
    lam = E.solve_lambda(hh, DD)
    gl = G.lambda_golden(hh)
    lam_ok = all(lam[c] == gl[c] for c in gl)
    computed = {
        "g": E.compute_g(hh, DD)[0],
        "log-g": E.compute_log_g(hh, DD),
        "I": E.compute_I(hh, DD),
        "boldK": E.assemble_boldK(hh, 1, DD),
        "boldJ": E.assemble_boldJ(hh, 1, DD),
    }
    out = []
    for name, x in computed.items():
        gold = G.GOLDENS[name](hh)
        ok = all(x.degree_part(d) == gold.degree_part(d) for d in range(1, DD + 1))
        extra = ""
        if name == "g":
            ok &= lam_ok
            extra = "(Lambda through degree 3 included)"
        out.append(Check(f"fixture {name}[1..3]", ok, hh, 1, DD, extra))
    return out


def thn_relations_vanish(h: int, n: int, D: int) -> bool:
    from .thn import relation_residuals
    return not any(relation_residuals(h, n, D))


def thn_t_symmetric(h: int, n: int) -> bool:
    from .thn import presentation
    p = presentation(h, n)
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            v = {(p.t(r, s),): Fraction(1), (p.t(s, r),): Fraction(-1)}
            if p.nf(v):
                return False
    return True


def oracle_suite(h=None, D=None, n=None, trials: int = 20, seed: int = 42, quick=False):
    from . import oracle as O
    lines = []
    ok = True
    reps = O.run_all(trials, seed, quick=quick)
    for r in reps:
        lines.append(r.line())
        ok &= r.ok
    for hh in (1, 2):
        for nn in (1, 2):
            for d in (1, 2, 3):
                good = O.thn_dim_crosscheck(hh, nn, d)
                ok &= good
                lines.append(f"{'PASS' if good else 'FAIL'} thn-dim h={hh} n={nn} D={d} "
                             f"trials=1 seed=7")
    for hh in (1, 2):
        for nn in (1, 2):
            good = thn_relations_vanish(hh, nn, 3)
            ok &= good
            lines.append(f"{'PASS' if good else 'FAIL'} thn-relations h={hh} n={nn} D=3")
            if nn > 1:
                good = thn_t_symmetric(hh, nn)
                ok &= good
                lines.append(f"{'PASS' if good else 'FAIL'} thn-t-symmetric h={hh} n={nn}")
    for q in (1, 2):
        for d in range(1, 6):
            good = O.witt_crosscheck(q, d)
            ok &= good
            lines.append(f"{'PASS' if good else 'FAIL'} witt q={q} d={d}")
    return ok, lines


_RUNNERS = {
    "monodromy": monodromy, "inverse": inverse, "explog": explog,
    "fixedpoint": fixedpoint, "tuples": tuples, "diagram": diagram,
    "fixtures": fixtures,
}


def run_suite(name: str, h=None, n=None, D=None, trials: int = 20, seed: int = 42,
              emit: Callable[[str], None] = print) -> bool:
    """Run a named suite, emitting one line per check; True iff all pass."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    names = [s for s in SUITES if s not in ("all",)] if name == "all" else [name]
    ok = True
    for s in names:
        if s == "oracle":
            good, lines = oracle_suite(h, D, n, trials, seed)
            for l in lines:
                emit(l)
            ok &= good
            continue
        for c in _RUNNERS[s](h=h, D=D, n=n):
            emit(c.line())
            ok &= c.ok
    return ok
