"""Command-line surface.

Exit codes: 0 success / all checks pass, 1 a verification or golden-table
comparison failed, 2 invalid input (file, presentation, resource guard),
3 inconclusive enumeration (raise --dim-bound), 4 malformed query.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import repmod, stability, twoterm, verify as verify_mod
from .algebra import AlgebraError, ResourceGuard, build_basis, load_algebra
from .stability import ConeLocationError, QueryError
from .twoterm import InconclusiveEnumeration, SiltingObject, g_symbol

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3
EXIT_QUERY = 4


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _load(args):
    pres = load_algebra(args.algebra)
    alg = build_basis(pres)
    return pres, alg


def _catalog(alg, args):
    return twoterm.enumerate_indec_presilting(alg, args.dim_bound)


def _indecs(alg, args):
    mods = repmod.enumerate_indecomposables(alg, args.dim_bound if args.dim_bound else alg.n)
    return mods, verify_mod.label_modules(mods)


def _parse_presilting(catalog, spec: str) -> SiltingObject:
    complexes = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            g = tuple(int(x) for x in chunk.split(","))
        except ValueError:
            raise QueryError(f"bad g-vector in --presilting: {chunk!r}") from None
        try:
            complexes.append(catalog.by_g_vector(g))
        except AlgebraError as e:
            raise QueryError(str(e)) from None
    u = SiltingObject(catalog.alg, complexes)
    if not u.is_presilting:
        raise QueryError("the selected summands are not pairwise compatible")
    return u


def _parse_weights(text: Optional[str], count: int) -> tuple[Fraction, ...]:
    if text is None:
        return tuple(Fraction(1) for _ in range(count))
    try:
        weights = tuple(Fraction(s.strip()) for s in text.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise QueryError(f"malformed weights: {e}") from None
    if len(weights) != count:
        raise QueryError(f"{count} summands but {len(weights)} weights")
    return weights


def cmd_inspect(args) -> int:
    pres, alg = _load(args)
    by_len: dict[int, int] = {}
    for pt in alg.basis_paths:
        by_len[pt.length] = by_len.get(pt.length, 0) + 1
    data = {
        "p": alg.p,
        "vertices": list(alg.quiver.vertices),
        "arrows": [{"name": a.name, "from": alg.quiver.vertices[a.source],
                    "to": alg.quiver.vertices[a.target]} for a in alg.quiver.arrows],
        "relations": len(pres.relations),
        "dim": alg.dim,
        "basis_paths_by_length": {str(k): v for k, v in sorted(by_len.items())},
    }
    if args.format == "json":
        print(_dump(data))
    else:
        print(f"algebra over F_{alg.p}: {alg.n} vertices, {len(alg.quiver.arrows)} arrows, "
              f"{len(pres.relations)} relations, dim = {alg.dim}")
        for k, v in sorted(by_len.items()):
            print(f"  basis paths of length {k}: {v}")
    return EXIT_OK


def cmd_indecs(args) -> int:
    _, alg = _load(args)
    mods, labels = _indecs(alg, args)
    if args.format == "json":
        out = [{"label": lbl, **repmod.module_to_json(m)} for lbl, m in zip(labels, mods)]
        print(_dump(out))
    else:
        for lbl, m in zip(labels, mods):
            print(f"{lbl:>12}  dims={list(m.dims)}")
    return EXIT_OK


def cmd_presilt(args) -> int:
    _, alg = _load(args)
    catalog = _catalog(alg, args)
    if args.format == "json":
        out = []
        for c in catalog.complexes:
            out.append({"g_vector": list(c.g_vector()),
                        "H0_dims": list(c.h_zero().dims),
                        "complex": twoterm.complex_to_json(c)})
        print(_dump(out))
    else:
        for c in catalog.complexes:
            print(f"{g_symbol(alg, c.g_vector()):>14}  g={list(c.g_vector())}  "
                  f"H0={repmod.module_label(c.h_zero())}")
    return EXIT_OK


def cmd_silt(args) -> int:
    _, alg = _load(args)
    catalog = _catalog(alg, args)
    silt = twoterm.enumerate_2silt(catalog)
    rows = []
    for t in silt.siltings:
        split = twoterm.silting_split_cached(t)
        rows.append({
            "g_vectors": [list(g) for g in t.g_vectors()],
            "H0_dims": [list(c.h_zero().dims) for c in t.summands],
            "rho_flags": [i in split.t_rho for i in range(len(t.summands))],
        })
    if args.format == "json":
        print(_dump(rows))
    else:
        for t, row in zip(silt.siltings, rows):
            marked = [sym + (" *" if flag else "")
                      for sym, flag in zip(t.symbols(), row["rho_flags"])]
            print(", ".join(marked))
        print(f"-- {len(rows)} two-term silting complexes (* = rho part)")
    return EXIT_OK


def cmd_theta(args) -> int:
    _, alg = _load(args)
    catalog = _catalog(alg, args)
    u = _parse_presilting(catalog, args.presilting)
    weights = _parse_weights(args.weights, len(u.summands))
    theta = stability.theta_from_presilting(u, weights)
    if args.format == "json":
        print(_dump({"theta": [str(c) for c in theta.coeffs],
                     "presilting": [list(g) for g in u.g_vectors()],
                     "weights": [str(w) for w in weights]}))
    else:
        print("theta =", "(" + ", ".join(str(c) for c in theta.coeffs) + ")")
    return EXIT_OK


def cmd_semistable(args) -> int:
    _, alg = _load(args)
    if args.theta is None and args.presilting is None:
        raise QueryError("provide --theta or --presilting")
    mods, labels = _indecs(alg, args)
    u = None
    weights = ()
    if args.theta is not None:
        coeffs = stability.parse_theta(args.theta, alg.n)
        theta = stability.StabilityForm(coeffs)
    else:
        catalog = _catalog(alg, args)
        u = _parse_presilting(catalog, args.presilting)
        weights = _parse_weights(args.weights, len(u.summands))
        theta = stability.theta_from_presilting(u, weights)
    members = [lbl for lbl, m in zip(labels, mods) if stability.is_semistable(theta, m)[0]]
    if args.reports:
        if u is None:
            raise QueryError("--reports needs --presilting (reports are per presilting complex)")
        for lbl, m in zip(labels, mods):
            rep = stability.membership_report(u, weights, m, module_id=lbl)
            print(_dump(rep.to_json()))
        return EXIT_OK
    if args.format == "json":
        print(_dump({"theta": [str(c) for c in theta.coeffs], "semistable": members}))
    else:
        print("theta =", "(" + ", ".join(str(c) for c in theta.coeffs) + ")")
        if members:
            print("semistable indecomposables:", ", ".join(members))
        else:
            print("semistable indecomposables: (none; only the zero module)")
    return EXIT_OK


def cmd_cone(args) -> int:
    _, alg = _load(args)
    catalog = _catalog(alg, args)
    coeffs = stability.parse_theta(args.theta, alg.n)
    u, weights = stability.locate_cone(catalog, coeffs)
    mods, labels = _indecs(alg, args)
    members = [lbl for lbl, m in zip(labels, mods) if stability.in_W_U(u, m)]
    if args.format == "json":
        print(_dump({"cone": [list(g) for g in u.g_vectors()],
                     "weights": [str(w) for w in weights],
                     "wide_members": members}))
    else:
        print("cone:", ", ".join(u.symbols()) if u.summands else "0 (origin)")
        print("weights:", ", ".join(str(w) for w in weights) if weights else "-")
        print("wide subcategory members:", ", ".join(members) if members else "(zero module only)")
    return EXIT_OK


def _run_verify_plan(args, checks=None) -> verify_mod.Verdict:
    pres = load_algebra(args.algebra)
    golden = None
    if getattr(args, "golden", None):
        with open(args.golden, "r", encoding="utf-8") as fh:
            golden = json.load(fh)
    plan = verify_mod.VerificationPlan(
        pres,
        algebra_name=args.algebra,
        dim_bound=args.dim_bound,
        seed=args.seed,
        draw_count=getattr(args, "draws", 5),
        module_policy=getattr(args, "policy", "indecs+sums"),
        checks=tuple(checks) if checks else verify_mod.ALL_CHECKS,
        golden_table=golden,
    )
    return verify_mod.run_suite(plan)


def cmd_table(args) -> int:
    verdict = _run_verify_plan(args, checks=("table",))
    if verdict.status == "inconclusive":
        print(verdict.checks["enumeration"]["reason"], file=sys.stderr)
        return EXIT_INCONCLUSIVE
    pres = load_algebra(args.algebra)
    alg = build_basis(pres)
    catalog = twoterm.enumerate_indec_presilting(alg, args.dim_bound)
    silt = twoterm.enumerate_2silt(catalog)
    mods = repmod.enumerate_indecomposables(alg, args.dim_bound if args.dim_bound else alg.n)
    labels = verify_mod.label_modules(mods)
    rows = []
    for t in silt.siltings:
        split = twoterm.silting_split_cached(t)
        wide = sorted(labels[i] for i, m in enumerate(mods) if stability.in_W_T(t, m))
        rows.append({"g_vectors": [list(g) for g in t.g_vectors()],
                     "rho": [i in split.t_rho for i in range(len(t.summands))],
                     "H0_dims": [list(c.h_zero().dims) for c in t.summands],
                     "wide": wide})
    result = verdict.checks["table"]
    if args.format == "json":
        print(_dump({"rows": rows, "golden": result["status"]}))
    else:
        for t, row in zip(silt.siltings, rows):
            marked = [sym + (" *" if flag else "")
                      for sym, flag in zip(t.symbols(), row["rho"])]
            wide = ", ".join(row["wide"]) if row["wide"] else "-"
            print(f"{', '.join(marked):<44} | wide: {wide}")
    if result["status"] == "fail":
        print("golden table mismatch:", _dump(result["counterexample"]), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = None
    if args.checks:
        checks = tuple(s.strip() for s in args.checks.split(",") if s.strip())
        bad = [c for c in checks if c not in verify_mod.ALL_CHECKS]
        if bad:
            raise QueryError(f"unknown checks {bad}; known: {list(verify_mod.ALL_CHECKS)}")
    verdict = _run_verify_plan(args, checks=checks)
    if args.format == "json":
        print(verdict.canonical_json())
    else:
        for name, res in verdict.checks.items():
            line = f"{name:>20}: {res['status']}"
            if "checked" in res:
                line += f"  ({res['checked']} cases"
                if name in verdict.timings:
                    line += f", {verdict.timings[name]:.2f}s"
                line += ")"
            print(line)
            if res.get("counterexample"):
                print(f"{'':>22}counterexample: {_dump(res['counterexample'])}")
            if res.get("reason"):
                print(f"{'':>22}{res['reason']}")
        print(f"{'overall':>20}: {verdict.status}  catalog={_dump(verdict.catalog_sizes)}")
    if verdict.status == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK if verdict.status == "pass" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siltstab",
        description="Exact computations with two-term silting complexes, torsion pairs, "
                    "wide subcategories and stability forms over quiver algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", required=True, help="algebra definition JSON file")
    common.add_argument("--seed", type=int, default=0, help="RNG seed for sampled checks")
    common.add_argument("--dim-bound", type=int, default=None,
                        help="total-dimension bound for module enumeration (default: #vertices)")
    common.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("inspect", parents=[common],
                   help="algebra dimensions and path basis").set_defaults(func=cmd_inspect)
    sub.add_parser("indecs", parents=[common],
                   help="indecomposable modules up to the bound").set_defaults(func=cmd_indecs)
    sub.add_parser("presilt", parents=[common],
                   help="indecomposable two-term presilting complexes").set_defaults(func=cmd_presilt)
    sub.add_parser("silt", parents=[common],
                   help="all basic two-term silting complexes").set_defaults(func=cmd_silt)

    p = sub.add_parser("theta", parents=[common], help="stability form from a presilting complex")
    p.add_argument("--presilting", required=True,
                   help="semicolon-separated g-vectors, e.g. '0,1,-1;-1,0,0'")
    p.add_argument("--weights", default=None, help="comma-separated positive rationals")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("semistable", parents=[common], help="semistable indecomposables")
    p.add_argument("--theta", default=None, help="comma-separated rationals, e.g. '-1,1,-1'")
    p.add_argument("--presilting", default=None, help="g-vectors as in the theta command")
    p.add_argument("--weights", default=None)
    p.add_argument("--reports", action="store_true",
                   help="emit one membership report per module as JSON lines")
    p.set_defaults(func=cmd_semistable)

    p = sub.add_parser("cone", parents=[common], help="locate the cone containing theta")
    p.add_argument("--theta", required=True)
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("table", parents=[common],
                       help="silting table with rho flags and wide subcategories")
    p.add_argument("--golden", default=None, help="golden table JSON to compare against")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--checks", default=None,
                   help="comma list from: " + ",".join(verify_mod.ALL_CHECKS))
    p.add_argument("--draws", type=int, default=5, help="weight draws per presilting complex")
    p.add_argument("--policy", choices=("indecs", "indecs+sums"), default="indecs+sums")
    p.add_argument("--golden", default=None, help="golden table JSON for the table check")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AlgebraError, ResourceGuard, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InconclusiveEnumeration as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ConeLocationError as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except QueryError as e:
        print(f"bad query: {e}", file=sys.stderr)
        return EXIT_QUERY


if __name__ == "__main__":
    sys.exit(main())
