"""Text, LaTeX and JSON serializations of expressions."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Tuple

from .coeffring import ConstPoly
from .series import Context, Expr, base_coord

# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _cycle_label(h: int, c: int) -> str:
    return f"A{c}" if c <= h else f"B{c - h}"


def _sym_text(sym, h: int, latex=False) -> str:
    kind = sym[0]
    if kind == "L":
        w = " ".join(map(str, sym[1]))
        if latex:
            return "[" + ",".join(map(str, sym[1])) + "|" + _cycle_label(h, sym[2]) + "]"
        return f"[{w}|{_cycle_label(h, sym[2])}]"
    if kind == "T":
        return f"\\tau_{{{sym[1]}{sym[2]}}}" if latex else f"tau_{sym[1]}{sym[2]}"
    if kind == "O":
        return f"\\mathrm{{opq}}_{{{sym[1]}}}" if latex else f"opq{{{sym[1]}}}"
    raise ValueError(sym)


def _mono_text(mono, h: int, latex=False) -> str:
    parts = []
    for s, e in mono:
        t = _sym_text(s, h, latex)
        parts.append(t if e == 1 else (f"{t}^{{{e}}}" if latex else f"{t}^{e}"))
    return " ".join(parts)


def const_text(p: ConstPoly, h: int, latex=False) -> str:
    items = sorted(p.terms.items())
    if not items:
        return "0"
    out = []
    for k, (m, c) in enumerate(items):
        body = _mono_text(m, h, latex)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if body:
            coef = "" if a == 1 else (_latex_frac(a) if latex else _frac(a)) + " "
            t = coef + body
        else:
            t = _latex_frac(a) if latex else _frac(a)
        if k == 0:
            out.append(("-" if c < 0 else "") + t)
        else:
            out.append(f" {sign} {t}")
    return "".join(out)


def _latex_frac(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


# ---------------------------------------------------------------------------
# functions and forms
# ---------------------------------------------------------------------------

def _coord_suffix(ctx: Context, r: int, latex=False) -> str:
    if ctx.n == 1 and r == 1:
        return ""
    return f"^{{({r})}}" if latex else f"^({r})"


def _funcs_text(ctx: Context, f, latex=False) -> str:
    parts = []
    for r, w in f:
        if latex:
            parts.append("[" + ",".join(map(str, w)) + "|\\bullet]" + _coord_suffix(ctx, r, True))
        else:
            parts.append("[" + " ".join(map(str, w)) + "|.]" + _coord_suffix(ctx, r))
    return " ".join(parts)


def _base_text(ctx: Context, b, latex=False) -> str:
    h = ctx.h
    kind = b[0]
    if kind == "gamma":
        i, r = b[1], b[2]
        if latex:
            t = f"\\gamma_{{{i}}}" if i <= h else f"\\beta_{{{i - h}}}"
        else:
            t = f"gamma_{i}" if i <= h else f"beta_{i - h}"
        return t + _coord_suffix(ctx, r, latex)
    if kind == "omega":
        t = f"\\omega_{{{b[1]}}}" if latex else f"omega_{b[1]}"
        return t + _coord_suffix(ctx, b[2], latex)
    if kind == "omegaw":
        w = "".join(map(str, b[1])) if latex else " ".join(map(str, b[1]))
        t = f"\\omega_{{\\infty,{w}}}" if latex else f"omegaw{{{w}}}"
        return t + _coord_suffix(ctx, b[2], latex)
    if kind == "psiw":
        w = "".join(map(str, b[1])) if latex else " ".join(map(str, b[1]))
        if latex:
            return f"\\psi_{{\\infty,{w}}}(z_{b[2]},z_{b[3]})"
        return f"psiw{{{w}}}({b[2]},{b[3]})"
    if kind in ("Psi", "op"):
        inner = _monomial_text(ctx, b[1], b[2], latex)
        if latex:
            name = "\\Psi" if kind == "Psi" else "\\mathrm{op}"
            return f"{name}\\left({inner}\\right)"
        return f"{kind}({inner})"
    raise ValueError(b)


def _monomial_text(ctx: Context, f, b, latex=False) -> str:
    parts = []
    if f:
        parts.append(_funcs_text(ctx, f, latex))
    if b is not None:
        parts.append(_base_text(ctx, b, latex))
    return " ".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def _letter_text(ctx: Context, a: int, latex=False) -> str:
    if ctx.algebra == "envm":
        r, i = (a - 1) // ctx.h + 1, (a - 1) % ctx.h + 1
        return f"b_{{{i}}}^{{({r})}}" if latex else f"b_{i}^({r})"
    return f"b_{{{a}}}" if latex else f"b_{a}"


def word_text(ctx: Context, w, latex=False) -> str:
    if ctx.algebra == "thn":
        from .thn import presentation
        p = presentation(ctx.h, ctx.n)
        label = p.bracket_label(w)
        if latex:
            label = _latex_thn_label(label)
        return label
    if not w:
        return "1"
    return " ".join(_letter_text(ctx, a, latex) for a in w)


def _latex_thn_label(s: str) -> str:
    import re
    s = re.sub(r"([abt])_(\d+)\^\((\d+)\)", r"\1_{\2}^{(\3)}", s)
    return re.sub(r"([abt])_(\d+)(?![\d}])", r"\1_{\2}", s)


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

def _collect(coeff: Expr) -> Dict[tuple, ConstPoly]:
    out: Dict[tuple, Dict] = {}
    for (cm, f, b, _), c in coeff.terms.items():
        out.setdefault((f, b), {})[cm] = c
    return {k: ConstPoly(v) for k, v in out.items()}


def _group_projections(ctx: Context, groups: Dict[tuple, ConstPoly]):
    """Pair ``x - Psi(x) - op(x)`` into one item when possible."""
    items: List[Tuple[str, tuple, ConstPoly]] = []
    used = set()
    for (f, b), p in sorted(groups.items(), key=lambda kv: _mkey(kv[0])):
        if (f, b) in used or b is None:
            continue
        r = base_coord(b)
        own = tuple(x for x in f if x[0] == r)
        rest = tuple(x for x in f if x[0] != r)
        if not own:
            continue
        kp, ko = (rest, ("Psi", own, b)), (rest, ("op", own, b))
        if kp in groups and ko in groups and groups[kp] == groups[ko]:
            q = groups[kp]
            if q == -p:
                items.append(("id - Psi - op", (f, b), p))
                used |= {(f, b), kp, ko}
    for (f, b), p in sorted(groups.items(), key=lambda kv: _mkey(kv[0])):
        if (f, b) in used or b is None or b[0] != "Psi":
            continue
        ko = (f, ("op",) + b[1:])
        if ko in groups and groups[ko] == p:
            own = b[1]
            r = base_coord(b)
            full = tuple(sorted([x for x in f if x[0] != r] + list(own)))
            items.append(("Psi + op", (full, b[2]), p))
            used |= {(f, b), ko}
    for key, p in sorted(groups.items(), key=lambda kv: _mkey(kv[0])):
        if key not in used:
            items.append(("", key, p))
    return items


def _mkey(k):
    f, b = k
    return (f, () if b is None else (1, b))


def _item_text(ctx: Context, op: str, key, p: ConstPoly, latex=False) -> Tuple[str, bool]:
    f, b = key
    mono = _monomial_text(ctx, f, b, latex)
    if op:
        o = op
        if latex:
            o = o.replace("id", "\\mathrm{id}").replace("Psi", "\\Psi").replace("op", "\\mathrm{op}")
            mono = f"\\left({o}\\right)\\left({mono}\\right)"
        else:
            mono = f"({op})({mono})"
    neg = False
    if len(p.terms) == 1 and () in p.terms:
        c = p.terms[()]
        neg = c < 0
        a = abs(c)
        if mono == "1":
            return (_latex_frac(a) if latex else _frac(a)), neg
        if a == 1:
            return mono, neg
        return f"{_latex_frac(a) if latex else _frac(a)} {mono}", neg
    if len(p.terms) == 1:
        (m, c), = p.terms.items()
        neg = c < 0
        a = abs(c)
        body = _mono_text(m, ctx.h, latex)
        coef = "" if a == 1 else (_latex_frac(a) if latex else _frac(a)) + " "
        return (f"{coef}{body}" if mono == "1" else f"{coef}{body} {mono}"), neg
    ct = const_text(p, ctx.h, latex)
    lp, rp = ("\\left(", "\\right)") if latex else ("(", ")")
    return (f"{lp}{ct}{rp}" if mono == "1" else f"{lp}{ct}{rp} {mono}"), False


def _join(parts: List[Tuple[str, bool]]) -> str:
    out = []
    for k, (t, neg) in enumerate(parts):
        if k == 0:
            out.append(("-" if neg else "") + t)
        else:
            out.append((" - " if neg else " + ") + t)
    return "".join(out) if out else "0"


def lie_groups(x: Expr) -> List[Tuple[tuple, Expr]]:
    """Split by word, or by display basis element for t_{h,n}."""
    if x.ctx.algebra == "thn":
        from .thn import coordinates_expr
        groups = coordinates_expr(x)
    else:
        groups = x.group_by_word()
    wt = x.ctx.weight
    return sorted(groups.items(), key=lambda kv: (wt(kv[0]), kv[0]))


def to_text(x: Expr, latex=False) -> str:
    """Single-line canonical rendering: ``coeff (x) word + ...``."""
    if not x.terms:
        return "0"
    ctx = x.ctx
    parts = []
    tensor = " \\otimes " if latex else " (x) "
    for w, coeff in lie_groups(x):
        wt = word_text(ctx, w, latex) if (w or ctx.algebra == "thn") else ""
        for op, key, p in _group_projections(ctx, _collect(coeff)):
            t, neg = _item_text(ctx, op, key, p, latex)
            if wt:
                if t.startswith("(") or " + " in t or " - " in t[1:]:
                    pass
                t = t + tensor + wt
            parts.append((t, neg))
    return _join(parts)


def to_lines(x: Expr, name: str, latex=False) -> List[str]:
    """One line per degree: ``name[d] = ...``."""
    lines = []
    wt = x.ctx.weight
    degs = sorted({wt(k[3]) for k in x.terms})
    for d in degs:
        part = x.degree_part(d)
        lhs = f"{name}^{{[{d}]}}" if latex else f"{name}[{d}]"
        lines.append(f"{lhs} = {to_text(part, latex)}")
    return lines


def to_latex(x: Expr) -> str:
    return to_text(x, latex=True)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _sym_json(sym, e, h):
    kind = sym[0]
    if kind == "L":
        return ["loop", list(sym[1]), _cycle_label(h, sym[2]), e]
    if kind == "T":
        return ["tau", sym[1], sym[2], e]
    return ["opaque", sym[1], e]


def _sym_from_json(item, h):
    kind = item[0]
    if kind == "loop":
        lab = item[2]
        c = int(lab[1:]) + (0 if lab[0] == "A" else h)
        return ("L", tuple(item[1]), c), item[3]
    if kind == "tau":
        return ("T", item[1], item[2]), item[3]
    if kind == "opaque":
        return ("O", item[1]), item[2]
    raise ValueError(f"unknown symbol {item!r}")


def _funcs_json(f):
    return [{"word": list(w), "coord": r} for r, w in f]


def _funcs_from_json(items):
    return tuple(sorted((d["coord"], tuple(d["word"])) for d in items))


def _base_json(b):
    if b is None:
        return None
    kind = b[0]
    if kind in ("gamma", "omega"):
        return {"kind": kind, "index": b[1], "coord": b[2]}
    if kind == "omegaw":
        return {"kind": "omegaw", "word": list(b[1]), "coord": b[2]}
    if kind == "psiw":
        return {"kind": "psiw", "word": list(b[1]), "coord": b[2], "point": b[3]}
    if kind in ("Psi", "op"):
        return {"kind": "psi" if kind == "Psi" else "op",
                "arg": {"functions": _funcs_json(b[1]), "base": _base_json(b[2])}}
    raise ValueError(b)


def _base_from_json(d):
    if d is None:
        return None
    kind = d["kind"]
    if kind in ("gamma", "omega"):
        return (kind, d["index"], d["coord"])
    if kind == "omegaw":
        return ("omegaw", tuple(d["word"]), d["coord"])
    if kind == "psiw":
        return ("psiw", tuple(d["word"]), d["coord"], d["point"])
    if kind in ("psi", "op"):
        arg = d["arg"]
        return ("Psi" if kind == "psi" else "op", _funcs_from_json(arg["functions"]),
                _base_from_json(arg["base"]))
    raise ValueError(f"unknown form kind {kind!r}")


def _word_labels(ctx: Context, w):
    if ctx.algebra == "thn":
        from .thn import presentation
        p = presentation(ctx.h, ctx.n)
        return [p.labels[g] for g in w]
    return [_letter_text(ctx, a) for a in w]


def _word_from_labels(ctx: Context, labels):
    if ctx.algebra == "thn":
        from .thn import presentation
        p = presentation(ctx.h, ctx.n)
        idx = {lab: g for g, lab in enumerate(p.labels)}
        return tuple(idx[l] for l in labels)
    out = []
    for lab in labels:
        if ctx.algebra == "envm":
            i, r = lab[2:].split("^(")
            out.append((int(r[:-1]) - 1) * ctx.h + int(i))
        else:
            out.append(int(lab[2:]))
    return tuple(out)


def to_json_obj(x: Expr) -> dict:
    ctx = x.ctx
    terms = []
    for (cm, f, b, w), c in x.sorted_items():
        terms.append({
            "coeff": {"num": c.numerator, "den": c.denominator,
                      "symbols": [_sym_json(s, e, ctx.h) for s, e in cm]},
            "functions": _funcs_json(f),
            "base": _base_json(b),
            "lie": _word_labels(ctx, w),
        })
    return {"context": {"h": ctx.h, "n": ctx.n, "D": ctx.D, "algebra": ctx.algebra},
            "terms": terms}


def to_json(x: Expr) -> str:
    return json.dumps(to_json_obj(x), sort_keys=True, indent=1)


def from_json_obj(obj: dict) -> Expr:
    c = obj["context"]
    ctx = Context(c["h"], c["n"], c["D"], c["algebra"])
    out = Expr(ctx)
    for t in obj["terms"]:
        co = t["coeff"]
        mono = tuple(sorted(_sym_from_json(s, ctx.h) for s in co["symbols"]))
        key = (mono, _funcs_from_json(t["functions"]), _base_from_json(t["base"]),
               _word_from_labels(ctx, t["lie"]))
        out._add(key, Fraction(co["num"], co["den"]))
    return out


def from_json(s: str) -> Expr:
    return from_json_obj(json.loads(s))
