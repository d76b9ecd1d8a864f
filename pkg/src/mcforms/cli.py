"""Command-line front end: ``mcforms compute | verify | fixtures``."""
from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Dict, List, Optional

from . import engine as E
from .render import from_json_obj, to_json_obj, to_lines, to_text
from .series import Expr

OBJECTS = ("lambda", "g", "log-g", "I", "K", "H", "omega-word", "boldK", "boldJ")
ALIASES = {"J": "boldJ", "Lambda": "lambda", "logg": "log-g", "log_g": "log-g"}
FIXTURE_OBJECTS = ("g", "log-g", "I", "boldK", "boldJ")
FIXTURE_H, FIXTURE_D = 2, 3


class UsageError(Exception):
    pass


def _parse_word(text: str, h: int):
    parts = text.replace(",", " ").split()
    try:
        w = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--word must be a list of integers, got {text!r}") from None
    if not w or not all(1 <= a <= h for a in w):
        raise UsageError(f"--word letters must lie in 1..{h}")
    return w


def _check_config(h: int, n: int, D: int):
    if h < 1:
        raise UsageError("--h must be >= 1")
    if n < 1:
        raise UsageError("--n must be >= 1")
    if D < 1:
        raise UsageError("--max-degree must be >= 1")
    if D > E.MAX_DEFAULT_D:
        raise UsageError(f"--max-degree {D} exceeds the configured maximum {E.MAX_DEFAULT_D}")


def build_objects(obj: str, h: int, n: int, D: int, j: Optional[int] = None,
                  word: Optional[str] = None) -> Dict[str, Expr]:
    """Named expressions for one object request, in display order."""
    obj = ALIASES.get(obj, obj)
    if obj not in OBJECTS:
        raise UsageError(f"unknown object {obj!r}; choose from {', '.join(OBJECTS)}")
    _check_config(h, n, D)
    if j is not None and not 1 <= j <= h:
        raise UsageError(f"--j must lie in 1..{h}")
    js = [j] if j is not None else list(range(1, h + 1))
    if obj == "lambda":
        lam = E.solve_lambda(h, D)
        return {f"Lambda_{c}": lam[c] for c in range(1, 2 * h + 1)}
    if obj == "g":
        return {"g": E.compute_g(h, D)[0]}
    if obj == "log-g":
        return {"lambda": E.compute_log_g(h, D)}
    if obj == "I":
        return {"I": E.compute_I(h, D)}
    if obj == "K":
        return {f"K_{j_}": E.compute_K(h, D, j_) for j_ in js}
    if obj == "H":
        return {f"H_{j_}": E.compute_H(h, D, j_) for j_ in js}
    if obj == "omega-word":
        if word is None:
            raise UsageError("--object omega-word needs --word")
        w = _parse_word(word, h)
        if len(w) > D + 1:
            raise UsageError(f"--word of length {len(w)} needs --max-degree >= {len(w) - 1}")
        return {"omegaw{" + " ".join(map(str, w)) + "}": E.resolve_omega_word(h, D, w)}
    if obj == "boldK":
        return {"K": E.assemble_boldK(h, n, D)}
    return {"J": E.assemble_boldJ(h, n, D)}


def render(objs: Dict[str, Expr], fmt: str) -> str:
    if fmt == "json":
        if len(objs) == 1:
            payload = to_json_obj(next(iter(objs.values())))
        else:
            payload = {name: to_json_obj(x) for name, x in objs.items()}
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    lines: List[str] = []
    for name, x in objs.items():
        latex = fmt == "latex"
        if latex:
            name = name.replace("omegaw{", "\\omega_{\\infty,").replace("Lambda", "\\Lambda")
        if name.startswith(("omegaw", "\\omega")):
            body = [f"{name} = {to_text(x, latex=latex)}"]
        else:
            body = to_lines(x, name, latex=latex) or [f"{name} = 0"]
        lines.extend(body)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def fixtures_dir(arg: Optional[str]) -> Path:
    base = arg or os.environ.get("MCFORMS_FIXTURES") or "fixtures"
    return Path(base).resolve()


def _fixture_path(root: Path, name: str) -> Path:
    p = (root / f"{name}.json").resolve()
    if p.parent != root:
        raise UsageError(f"fixture path escapes {root}")
    return p


def fixture_payloads(h: int = FIXTURE_H, D: int = FIXTURE_D) -> Dict[str, str]:
    out = {}
    for name in FIXTURE_OBJECTS + ("lambda",):
        objs = build_objects(name, h, 1, D)
        out[name] = render(objs, "json")
    return out


def _atomic_write(path: Path, text: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fixtures_write(root: Path, out=None) -> int:
    out = out or sys.stdout
    root.mkdir(parents=True, exist_ok=True)
    for name, text in fixture_payloads().items():
        path = _fixture_path(root, name)
        _atomic_write(path, text)
        print(f"wrote {path.name}", file=out)
    return 0


def _golden_matches(name: str, text: str) -> bool:
    """Parsed snapshot against the hand-entered low-degree formulas."""
    from . import lowdegree as G
    obj = json.loads(text)
    if name == "lambda":
        gl = G.lambda_golden(FIXTURE_H)
        return all(from_json_obj(obj[f"Lambda_{c}"]) == gl[c] for c in gl)
    x = from_json_obj(obj)
    gold = G.GOLDENS[name](FIXTURE_H)
    return all(x.degree_part(d) == gold.degree_part(d) for d in range(1, FIXTURE_D + 1))


def fixtures_check(root: Path, out=None) -> int:
    out = out or sys.stdout
    status = 0
    for name, text in fixture_payloads().items():
        path = _fixture_path(root, name)
        if not path.is_file():
            print(f"FAIL fixture {name}: missing {path.name}", file=out)
            status = 1
            continue
        stored = path.read_text(encoding="utf-8")
        if stored != text:
            print(f"FAIL fixture {name}: snapshot differs", file=out)
            diff = difflib.unified_diff(stored.splitlines(), text.splitlines(),
                                        f"{path.name} (stored)", f"{path.name} (computed)",
                                        lineterm="", n=2)
            for i, line in enumerate(diff):
                if i >= 80:
                    print("...", file=out)
                    break
                print(line, file=out)
            status = 1
            continue
        try:
            gold_ok = _golden_matches(name, stored)
        except (KeyError, ValueError) as exc:
            gold_ok = False
            print(f"  unreadable snapshot: {exc}", file=out)
        print(f"{'PASS' if gold_ok else 'FAIL'} fixture {name} h={FIXTURE_H} n=1 D={FIXTURE_D}",
              file=out)
        status |= 0 if gold_ok else 1
    return status


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcforms", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_h=True):
        sp.add_argument("--h", type=int, default=None if not need_h else 1, help="genus")
        sp.add_argument("--n", type=int, default=None if not need_h else 1, help="number of points")
        sp.add_argument("--max-degree", type=int, default=None if not need_h else E.MAX_DEFAULT_D,
                        dest="max_degree", help="truncation degree D")

    c = sub.add_parser("compute", help="compute and render an object")
    common(c)
    c.add_argument("--object", required=True,
                   help="one of " + ", ".join(OBJECTS) + " (J = boldJ)")
    c.add_argument("--j", type=int, default=None, help="index for K and H (default: all)")
    c.add_argument("--word", default=None, help="letters for omega-word, e.g. '1 2 1'")
    c.add_argument("--format", choices=("text", "json", "latex"), default="text")

    v = sub.add_parser("verify", help="run a verification suite")
    common(v, need_h=False)
    v.add_argument("--suite", default="all")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=20)

    f = sub.add_parser("fixtures", help="write or check golden JSON snapshots")
    f.add_argument("action", choices=("write", "check"))
    f.add_argument("--fixtures-dir", default=None, dest="fixtures_dir")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            objs = build_objects(args.object, args.h, args.n, args.max_degree, args.j, args.word)
            sys.stdout.write(render(objs, args.format))
            return 0
        if args.command == "verify":
            from .verify import SUITES, run_suite
            if args.suite not in SUITES:
                raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
            if args.max_degree is not None or args.h is not None or args.n is not None:
                _check_config(args.h or 1, args.n or 1, args.max_degree or 1)
            if args.trials < 1:
                raise UsageError("--trials must be >= 1")
            ok = run_suite(args.suite, h=args.h, n=args.n, D=args.max_degree,
                           trials=args.trials, seed=args.seed,
                           emit=lambda s: print(s, flush=True))
            return 0 if ok else 1
        root = fixtures_dir(args.fixtures_dir)
        if args.action == "write":
            return fixtures_write(root)
        if not root.is_dir():
            raise UsageError(f"fixtures directory {root} does not exist")
        return fixtures_check(root)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mcforms: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
