"""Command-line front end.

All structured output is canonical JSON on stdout (or --out <path>); --pretty
renders the same data as an aligned text table.  Exit codes: 0 success,
1 verification failure (the report still prints, with a reproducer), 2 for
usage, I/O or validation problems.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import homology, io, koszul, series, verify
from .errors import GorlabError
from .modules import (
    FiniteModule,
    radical_rows,
    random_module,
    submodule,
)
from .resolution import resolve
from .ring import (
    hyperbolic_form,
    identity_form,
    make_ring,
    random_nondegenerate_form,
    validate_general_algebra,
)


def _parse_range(text: str) -> tuple:
    parts = text.split("..")
    try:
        a, b = (int(parts[0]), int(parts[1])) if len(parts) == 2 else (0, int(parts[0]))
    except (ValueError, IndexError):
        raise GorlabError(f"bad range {text!r}; expected a..b")
    if a < 0 or b < a:
        raise GorlabError(f"bad range {text!r}; need 0 <= a <= b")
    return a, b


def _emit(obj: dict, args) -> None:
    text = io.canonical_json(obj)
    if getattr(args, "out", None):
        io.write_text(args.out, text)
    elif getattr(args, "pretty", False):
        _pretty(obj)
    else:
        sys.stdout.write(text)


def _pretty(obj, indent: str = "") -> None:
    if isinstance(obj, dict) and isinstance(obj.get("entries"), list):
        rows = obj["entries"]
        keys = sorted({k for r in rows for k in r}, key=lambda k: (k != "i", k))
        print(indent + "  ".join(f"{k:>14}" for k in keys))
        for r in rows:
            print(indent + "  ".join(f"{str(r.get(k, '')):>14}" for k in keys))
        for k, v in obj.items():
            if k != "entries":
                print(f"{indent}{k}: {v}")
        return
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                print(f"{indent}{k}:")
                _pretty(v, indent + "  ")
            else:
                print(f"{indent}{k}: {v}")
        return
    if isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                _pretty(v, indent + "  ")
            else:
                print(f"{indent}- {v}")
        return
    print(f"{indent}{obj}")


def _is_flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _form_for(name: str, e: int, p: int, seed: int) -> np.ndarray:
    if name == "identity":
        return identity_form(e)
    if name == "hyperbolic":
        return hyperbolic_form(e)
    if name == "random":
        return random_nondegenerate_form(e, p, np.random.default_rng(seed))
    raise GorlabError(f"unknown form {name!r}")


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_ring_new(args) -> int:
    ring = make_ring(args.p, args.e, _form_for(args.form, args.e, args.p, args.seed))
    _emit(io.ring_to_dict(ring), args)
    return 0


def _cmd_ring_check(args) -> int:
    data = io.load_json(args.file)
    if isinstance(data, dict) and "table" in data:
        report = validate_general_algebra(data.get("p", 0), data["table"])
        out = {
            "accepted": report.accepted,
            "commutative": report.commutative,
            "associative": report.associative,
            "unital": report.unital,
            "cube_zero": report.cube_zero,
            "socle_rank": report.socle_rank,
            "graded": report.graded,
            "reason": report.reason,
        }
        if report.form is not None:
            out["form"] = [[int(v) for v in row] for row in report.form]
        _emit(out, args)
        return 0
    ring = io.ring_from_dict(data)
    _emit({"accepted": True, "p": ring.p, "e": ring.e}, args)
    return 0


def _cmd_module_new(args) -> int:
    import json
    ring = io.load_ring(args.ring)
    try:
        pres = json.loads(args.presentation)
    except json.JSONDecodeError as ex:
        raise GorlabError(f"bad --presentation JSON: {ex.msg}")
    M = io.module_from_dict({"ring": io.ring_to_dict(ring),
                             "presentation": pres})
    _emit(io.module_to_dict(M), args)
    return 0


def _cmd_module_random(args) -> int:
    ring = io.load_ring(args.ring)
    M = random_module(ring, args.gens, args.rels, args.seed)
    _emit(io.module_to_dict(M), args)
    return 0


def _cmd_module_info(args) -> int:
    M = io.load_module(args.file)
    _emit(io.module_info(M), args)
    return 0


def _cmd_resolve(args) -> int:
    M = io.load_module(args.module)
    res = resolve(M, args.steps)
    res.extend(args.steps)
    _emit(io.resolution_to_dict(res, args.steps), args)
    return 0


def _iota(M: FiniteModule):
    U, piv = radical_rows(M)
    if U.shape[0] == 0:
        return None
    return submodule(M, U, piv)[1]


def _cmd_tor(args) -> int:
    M = io.load_module(args.m)
    N = io.load_module(args.n_mod)
    a, b = _parse_range(args.range)
    table = homology.tor(M, N, b)
    induced = None
    if args.induced:
        iota = _iota(M)
        if iota is not None:
            induced = homology.tor_induced(iota, N, min(b, table.window))
    out = io.table_to_dict(table, induced)
    out["entries"] = [r for r in out["entries"] if a <= r["i"] <= b]
    _emit(out, args)
    return 0


def _cmd_ext(args) -> int:
    from .modules import matlis_dual
    M = io.load_module(args.m)
    N = io.load_module(args.n_mod)
    a, b = _parse_range(args.range)
    table = homology.ext(M, N, b)
    induced = None
    if args.induced:
        iota = _iota(M)
        if iota is not None:
            # Ext^i(iota, N) has the rank of Tor_i(iota, N*) by Matlis duality
            induced = homology.tor_induced(iota, matlis_dual(N),
                                           min(b, table.window))
    out = io.table_to_dict(table, induced)
    out["entries"] = [r for r in out["entries"] if a <= r["i"] <= b]
    _emit(out, args)
    return 0


def _cmd_series(args) -> int:
    kind = args.kind
    if kind in ("hilbert", "poincare"):
        if not args.module:
            raise GorlabError(f"series {kind} needs --module")
        M = io.load_module(args.module)
        if kind == "hilbert":
            S = series.hilbert_series(M)
        else:
            S = series.poincare_series(M, args.steps)
    else:
        if not (args.m and args.n_mod):
            raise GorlabError(f"series {kind} needs --m and --n-mod")
        M = io.load_module(args.m)
        N = io.load_module(args.n_mod)
        fam, mode = kind.split("-")
        mode = {"nu": "nu", "len": "length"}[mode]
        fn = series.tor_series if fam == "tor" else series.ext_series
        S = fn(M, N, args.steps, mode)
    cert = None
    if args.certify:
        cert = series.certify_rational(S, M.ring.e, args.margin)
    _emit(io.series_to_dict(S, cert), args)
    return 0


def _cmd_koszul(args) -> int:
    M = io.load_module(args.module)
    _emit(io.verdict_to_dict(koszul.is_koszul(M)), args)
    return 0


def _cmd_verify(args) -> int:
    cfg = verify.TrialConfig(
        seed=args.seed, trials=args.trials, p=args.p, e=args.e,
        form=args.form, max_generators=args.max_generators,
        max_relations=args.max_relations, max_dim=args.max_dim,
        cutoff=args.cutoff, margin=args.margin)
    report = verify.run_check(args.check, cfg)
    _emit(report.to_dict(), args)
    if not report.passed:
        for f in report.failures:
            print(f"FAIL trial {f.get('trial')} (seed {cfg.seed}): "
                  f"{f.get('problems', f)}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gorlab",
        description="Exact homological algebra over short Gorenstein rings")
    sub = ap.add_subparsers(dest="verb", required=True)

    def add_common(p):
        p.add_argument("--out", help="write JSON to this path instead of stdout")
        p.add_argument("--pretty", action="store_true",
                       help="human-readable view of the same data")

    ring = sub.add_parser("ring", help="create or validate rings")
    rsub = ring.add_subparsers(dest="action", required=True)
    rn = rsub.add_parser("new")
    rn.add_argument("--p", type=int, default=101)
    rn.add_argument("--e", type=int, required=True)
    rn.add_argument("--form", default="identity",
                    choices=("identity", "hyperbolic", "random"))
    rn.add_argument("--seed", type=int, default=0)
    add_common(rn)
    rn.set_defaults(fn=_cmd_ring_new)
    rc = rsub.add_parser("check")
    rc.add_argument("file")
    add_common(rc)
    rc.set_defaults(fn=_cmd_ring_check)

    mod = sub.add_parser("module", help="create or inspect modules")
    msub = mod.add_subparsers(dest="action", required=True)
    mn = msub.add_parser("new")
    mn.add_argument("--ring", required=True)
    mn.add_argument("--presentation", required=True,
                    help="JSON array: per generator, per relation, e+2 coefficients")
    add_common(mn)
    mn.set_defaults(fn=_cmd_module_new)
    mr = msub.add_parser("random")
    mr.add_argument("--ring", required=True)
    mr.add_argument("--gens", type=int, default=2)
    mr.add_argument("--rels", type=int, default=2)
    mr.add_argument("--seed", type=int, default=0)
    add_common(mr)
    mr.set_defaults(fn=_cmd_module_random)
    mi = msub.add_parser("info")
    mi.add_argument("file")
    add_common(mi)
    mi.set_defaults(fn=_cmd_module_info)

    rv = sub.add_parser("resolve", help="minimal free resolution")
    rv.add_argument("module")
    rv.add_argument("--steps", type=int, default=30)
    add_common(rv)
    rv.set_defaults(fn=_cmd_resolve)

    for name, handler in (("tor", _cmd_tor), ("ext", _cmd_ext)):
        tp = sub.add_parser(name, help=f"{name} table for a pair of modules")
        tp.add_argument("--m", required=True)
        tp.add_argument("--n-mod", required=True)
        tp.add_argument("--range", default="0..10")
        tp.add_argument("--induced", action="store_true",
                        help="include ranks of the maps induced by mM -> M")
        add_common(tp)
        tp.set_defaults(fn=handler)

    sp = sub.add_parser("series", help="generating series, optionally certified")
    sp.add_argument("kind", choices=("poincare", "hilbert", "tor-nu",
                                     "tor-len", "ext-nu", "ext-len"))
    sp.add_argument("--module")
    sp.add_argument("--m")
    sp.add_argument("--n-mod")
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--certify", action="store_true")
    sp.add_argument("--margin", type=int, default=series.DEFAULT_MARGIN)
    add_common(sp)
    sp.set_defaults(fn=_cmd_series)

    kp = sub.add_parser("koszul", help="Koszulness verdict with witness")
    kp.add_argument("module")
    add_common(kp)
    kp.set_defaults(fn=_cmd_koszul)

    vp = sub.add_parser("verify", help="seeded property suites")
    vp.add_argument("check", choices=sorted(verify.CHECKS))
    vp.add_argument("--trials", type=int, default=25)
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--cutoff", type=int, default=20)
    vp.add_argument("--p", type=int, default=101)
    vp.add_argument("--e", type=int, default=3)
    vp.add_argument("--form", default="identity",
                    choices=("identity", "hyperbolic", "random"))
    vp.add_argument("--margin", type=int, default=5)
    vp.add_argument("--max-generators", type=int, default=3)
    vp.add_argument("--max-relations", type=int, default=3)
    vp.add_argument("--max-dim", type=int, default=12)
    add_common(vp)
    vp.set_defaults(fn=_cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.fn(args)
    except GorlabError as ex:
        print(f"{type(ex).__name__}: {ex}", file=sys.stderr)
        return 2
    except OSError as ex:
        print(f"IO error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
