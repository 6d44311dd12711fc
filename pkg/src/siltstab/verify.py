"""Orchestrated verification suite.

Replays, on a user-supplied algebra, the homological identities and the
wide-equals-semistable equivalences that this toolkit is built around, over
explicitly enumerated finite test sets, and emits a machine-readable verdict
with minimal counterexamples on failure.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from . import repmod, stability, twoterm
from .algebra import AlgebraError, AlgebraPresentation, PathBasis, build_basis
from .repmod import Module
from .twoterm import (InconclusiveEnumeration, PresiltingCatalog, SiltingCatalog,
                      SiltingObject, g_symbol)

ALL_CHECKS = ("serre", "euler", "signs", "wide", "torsion",
              "silting_wide", "silting_semistable", "table", "fan")


@dataclass
class VerificationPlan:
    presentation: AlgebraPresentation
    algebra_name: str = "algebra"
    dim_bound: Optional[int] = None
    seed: int = 0
    draw_count: int = 5
    module_policy: str = "indecs+sums"   # or "indecs"
    checks: tuple[str, ...] = ALL_CHECKS
    golden_table: Optional[dict] = None
    sample_pairs: int = 120
    fan_samples: int = 200

    def __post_init__(self):
        bad = [c for c in self.checks if c not in ALL_CHECKS]
        if bad:
            raise ValueError(f"unknown checks: {bad}; known: {ALL_CHECKS}")
        if self.module_policy not in ("indecs", "indecs+sums"):
            raise ValueError("module_policy must be 'indecs' or 'indecs+sums'")


@dataclass
class Verdict:
    params: dict
    catalog_sizes: dict
    checks: dict
    status: str
    timings: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "catalog_sizes": self.catalog_sizes,
            "checks": self.checks,
            "status": self.status,
        }

    def canonical_json(self) -> str:
        """Deterministic serialization: identical runs are byte-identical.

        Timings are reported separately and deliberately left out.
        """
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def label_modules(mods: Sequence[Module]) -> list[str]:
    """Canonical labels, uniquified; collisions are visibly disambiguated."""
    labels = []
    seen: dict[str, int] = {}
    for m in mods:
        base = repmod.module_label(m)
        count = seen.get(base, 0)
        seen[base] = count + 1
        labels.append(base if count == 0 else f"{base}#{count + 1}")
    return labels


class _Context:
    """Everything the individual checks share, built once per suite run."""

    def __init__(self, plan: VerificationPlan):
        self.plan = plan
        self.alg = build_basis(plan.presentation)
        bound = plan.dim_bound if plan.dim_bound is not None else self.alg.n
        self.dim_bound = bound
        self.catalog = PresiltingCatalog(self.alg, bound)
        self.silt = twoterm.enumerate_2silt(self.catalog)
        self.indecs = repmod.enumerate_indecomposables(self.alg, bound)
        self.indec_labels = label_modules(self.indecs)
        mods = list(self.indecs)
        labels = list(self.indec_labels)
        if plan.module_policy == "indecs+sums":
            for i in range(len(self.indecs)):
                for j in range(i, len(self.indecs)):
                    mods.append(repmod.direct_sum([self.indecs[i], self.indecs[j]]))
                    labels.append(f"{self.indec_labels[i]}+{self.indec_labels[j]}")
        self.modules = mods
        self.module_labels = labels
        self.subsets = self.catalog.all_compatible_subsets()
        self.subset_objects = [
            SiltingObject(self.alg, [self.catalog.complexes[i] for i in s])
            for s in self.subsets
        ]
        rng = random.Random(plan.seed)
        self.draws: list[list[tuple[Fraction, ...]]] = []
        for obj in self.subset_objects:
            per = []
            for _ in range(plan.draw_count):
                per.append(tuple(Fraction(rng.randint(1, 16), rng.randint(1, 16))
                                 for _ in obj.summands))
            self.draws.append(per)
        self._membership: dict[tuple[int, int], tuple[bool, bool, bool, bool]] = {}

    def membership(self, subset_idx: int, module_idx: int) -> tuple[bool, bool, bool, bool]:
        key = (subset_idx, module_idx)
        if key not in self._membership:
            u = self.subset_objects[subset_idx]
            m = self.modules[module_idx]
            self._membership[key] = (
                stability.in_T_plus(u, m),
                stability.in_T_minus(u, m),
                stability.in_F_plus(u, m),
                stability.in_F_minus(u, m),
            )
        return self._membership[key]

    def subset_symbols(self, subset_idx: int) -> list[str]:
        return self.subset_objects[subset_idx].symbols()


def _min_counterexample(violations: list[dict]) -> Optional[dict]:
    if not violations:
        return None
    return min(violations, key=lambda v: (v.get("module_total_dim", 0),
                                          json.dumps(v, sort_keys=True)))


def _sample_complexes(ctx: _Context, rng: random.Random) -> twoterm.TwoTermComplex:
    k = len(ctx.catalog.complexes)
    if rng.random() < 0.5 or k < 2:
        return ctx.catalog.complexes[rng.randrange(k)]
    picks = [ctx.catalog.complexes[rng.randrange(k)] for _ in range(2)]
    return twoterm.complex_direct_sum(ctx.alg, picks)


def check_serre(ctx: _Context) -> dict:
    rng = random.Random(ctx.plan.seed + 1)
    violations = []
    for _ in range(ctx.plan.sample_pairs):
        p = _sample_complexes(ctx, rng)
        mi = rng.randrange(len(ctx.modules))
        m = ctx.modules[mi]
        lhs = twoterm.hom_D_complex_module(p, m)
        rhs = twoterm.hom_D_module_nu_complex(m, p)
        if lhs != rhs:
            violations.append({"g": list(p.g_vector()), "module": ctx.module_labels[mi],
                               "module_total_dim": m.total_dim,
                               "hom_P_M": lhs, "hom_M_nuP": rhs})
    return {"status": "fail" if violations else "pass",
            "checked": ctx.plan.sample_pairs,
            "counterexample": _min_counterexample(violations)}


def check_euler(ctx: _Context) -> dict:
    alg = ctx.alg
    violations = []
    for i in range(alg.n):
        for j in range(alg.n):
            val = twoterm.euler_form(twoterm.stalk_complex(alg, i),
                                     repmod.standard_module(alg, "simple", j))
            if val != (1 if i == j else 0):
                violations.append({"kind": "dual_bases", "i": i, "j": j, "value": val,
                                   "module_total_dim": 1})
    rng = random.Random(ctx.plan.seed + 2)
    for _ in range(ctx.plan.sample_pairs):
        p = _sample_complexes(ctx, rng)
        mi = rng.randrange(len(ctx.modules))
        m = ctx.modules[mi]
        pairing = twoterm.euler_form(p, m)
        first = twoterm.hom_D_complex_module(p, m) - twoterm.hom_D_complex_module_shift1(p, m)
        second = (twoterm.hom_D_module_nu_complex(m, p)
                  - repmod.hom_dim(m, p.h_minus1_nu()))
        if pairing != first or pairing != second:
            violations.append({"kind": "euler_identity", "g": list(p.g_vector()),
                               "module": ctx.module_labels[mi],
                               "module_total_dim": m.total_dim,
                               "pairing": pairing, "via_H0": first, "via_nu": second})
    return {"status": "fail" if violations else "pass",
            "checked": ctx.plan.sample_pairs + ctx.alg.n ** 2,
            "counterexample": _min_counterexample(violations)}


def check_signs(ctx: _Context) -> dict:
    violations = []
    checked = 0
    for si, obj in enumerate(ctx.subset_objects):
        for weights in ctx.draws[si]:
            theta = stability.theta_from_presilting(obj, weights)
            for mi, m in enumerate(ctx.modules):
                tp, tm, fp, fm = ctx.membership(si, mi)
                val = stability.theta_value(theta, m.dims)
                checked += 1
                bad = ((tp and val < 0) or (tm and not m.is_zero and val <= 0)
                       or (fm and val > 0) or (fp and not m.is_zero and val >= 0))
                if bad:
                    violations.append({
                        "presilting": ctx.subset_symbols(si),
                        "weights": [str(w) for w in weights],
                        "module": ctx.module_labels[mi],
                        "module_total_dim": m.total_dim,
                        "theta": str(val),
                        "memberships": {"T+": tp, "T-": tm, "F+": fp, "F-": fm}})
    return {"status": "fail" if violations else "pass", "checked": checked,
            "counterexample": _min_counterexample(violations)}


def check_wide(ctx: _Context) -> dict:
    """The headline equivalence: membership in the wide subcategory attached
    to a presilting complex agrees with semistability for every positive
    weight draw, and the semistable set does not depend on the draw."""
    violations = []
    checked = 0
    for si, obj in enumerate(ctx.subset_objects):
        semistable_sets = []
        for weights in ctx.draws[si]:
            theta = stability.theta_from_presilting(obj, weights)
            current = []
            for mi, m in enumerate(ctx.modules):
                tp, _, _, fm = ctx.membership(si, mi)
                wide = tp and fm
                ss, witness = stability.is_semistable(theta, m)
                checked += 1
                if wide != ss:
                    violations.append({
                        "presilting": ctx.subset_symbols(si),
                        "weights": [str(w) for w in weights],
                        "module": ctx.module_labels[mi],
                        "module_total_dim": m.total_dim,
                        "in_W_U": wide, "is_semistable": ss,
                        "witness": witness})
                if ss:
                    current.append(mi)
            semistable_sets.append(tuple(current))
        if len(set(semistable_sets)) > 1:
            violations.append({
                "presilting": ctx.subset_symbols(si),
                "kind": "weight_dependent_semistable_set",
                "module_total_dim": 0})
    return {"status": "fail" if violations else "pass", "checked": checked,
            "counterexample": _min_counterexample(violations)}


def check_torsion(ctx: _Context) -> dict:
    """For each silting complex the four descriptions of its torsion pair
    agree module by module."""
    violations = []
    checked = 0
    for t in ctx.silt.siltings:
        lam, rho = twoterm.silting_parts(t)
        for mi, m in enumerate(ctx.modules):
            t_descr = [
                stability.in_T_plus(t, m),
                stability.in_T_minus(t, m),
                repmod.fac_membership(lam.h_zero(), m),
                repmod.hom_dim(m, rho.h_minus1_nu()) == 0,
            ]
            f_descr = [
                stability.in_F_plus(t, m),
                stability.in_F_minus(t, m),
                repmod.hom_dim(lam.h_zero(), m) == 0,
                repmod.sub_membership(rho.h_minus1_nu(), m),
            ]
            checked += 1
            if len(set(t_descr)) > 1 or len(set(f_descr)) > 1:
                violations.append({
                    "silting": t.symbols(), "module": ctx.module_labels[mi],
                    "module_total_dim": m.total_dim,
                    "torsion_descriptions": t_descr, "free_descriptions": f_descr})
    return {"status": "fail" if violations else "pass", "checked": checked,
            "counterexample": _min_counterexample(violations)}


def check_silting_wide(ctx: _Context) -> dict:
    """W^T and the wide subcategory of the rho part agree module by module."""
    violations = []
    checked = 0
    for t in ctx.silt.siltings:
        _, rho = twoterm.silting_parts(t)
        for mi, m in enumerate(ctx.modules):
            a = stability.in_W_T(t, m)
            b = stability.in_W_U(rho, m)
            checked += 1
            if a != b:
                violations.append({"silting": t.symbols(),
                                   "module": ctx.module_labels[mi],
                                   "module_total_dim": m.total_dim,
                                   "in_W_T": a, "in_W_rho": b})
    return {"status": "fail" if violations else "pass", "checked": checked,
            "counterexample": _min_counterexample(violations)}


def check_silting_semistable(ctx: _Context) -> dict:
    """Member sets of W^T, W_{T_rho} and the semistable subcategory of the
    rho stability form coincide for every silting complex."""
    violations = []
    checked = 0
    for t in ctx.silt.siltings:
        _, rho = twoterm.silting_parts(t)
        weights = tuple(Fraction(1) for _ in rho.summands)
        theta = stability.theta_from_presilting(rho, weights)
        wide_t, wide_rho, semi = [], [], []
        for mi, m in enumerate(ctx.modules):
            checked += 1
            if stability.in_W_T(t, m):
                wide_t.append(mi)
            if stability.in_W_U(rho, m):
                wide_rho.append(mi)
            if stability.is_semistable(theta, m)[0]:
                semi.append(mi)
        if not (wide_t == wide_rho == semi):
            names = lambda idxs: [ctx.module_labels[i] for i in idxs]
            violations.append({"silting": t.symbols(),
                               "module_total_dim": 0,
                               "W_T": names(wide_t), "W_rho": names(wide_rho),
                               "semistable": names(semi)})
    return {"status": "fail" if violations else "pass", "checked": checked,
            "counterexample": _min_counterexample(violations)}


def table_rows(ctx: _Context) -> list[dict]:
    """The silting table: g-vectors, rho flags, H0 dimension vectors and the
    indecomposable members of the attached wide subcategory."""
    rows = []
    for t in ctx.silt.siltings:
        split = twoterm.silting_split_cached(t)
        gs = [list(g) for g in t.g_vectors()]
        rho_flags = [i in split.t_rho for i in range(len(t.summands))]
        h0_dims = [list(c.h_zero().dims) for c in t.summands]
        wide = sorted(ctx.indec_labels[i] for i, m in enumerate(ctx.indecs)
                      if stability.in_W_T(t, m))
        rows.append({"g_vectors": gs, "rho": rho_flags, "H0_dims": h0_dims,
                     "wide": wide})
    return rows


def check_table(ctx: _Context) -> dict:
    rows = table_rows(ctx)
    golden = ctx.plan.golden_table
    if golden is None:
        return {"status": "skipped", "reason": "no golden table supplied",
                "rows": len(rows), "counterexample": None}
    grows = golden.get("rows", [])
    if len(grows) != len(rows):
        return {"status": "fail", "rows": len(rows),
                "counterexample": {"kind": "row_count",
                                   "computed": len(rows), "golden": len(grows)}}
    for i, (got, want) in enumerate(zip(rows, grows)):
        for fieldname in ("g_vectors", "rho", "H0_dims", "wide"):
            if got[fieldname] != want[fieldname]:
                return {"status": "fail", "rows": len(rows),
                        "counterexample": {"kind": "row_mismatch", "row": i,
                                           "field": fieldname,
                                           "computed": got[fieldname],
                                           "golden": want[fieldname]}}
    return {"status": "pass", "rows": len(rows), "counterexample": None}


def check_fan(ctx: _Context) -> dict:
    """Cone location: random rational points each land in exactly one cone,
    and forms built from a presilting with unit weights locate back to it."""
    rng = random.Random(ctx.plan.seed + 3)
    violations = []
    n = ctx.alg.n
    for _ in range(ctx.plan.fan_samples):
        theta = tuple(Fraction(rng.randint(-24, 24), rng.randint(1, 8)) for _ in range(n))
        try:
            stability.locate_cone(ctx.catalog, theta)
        except stability.ConeLocationError as e:
            violations.append({"theta": [str(x) for x in theta], "error": str(e),
                               "module_total_dim": 0})
    for si, obj in enumerate(ctx.subset_objects):
        if not obj.summands:
            continue
        weights = tuple(Fraction(1) for _ in obj.summands)
        theta = stability.theta_from_presilting(obj, weights)
        u, w = stability.locate_cone(ctx.catalog, theta.coeffs)
        if sorted(u.g_vectors()) != sorted(obj.g_vectors()) or any(x != 1 for x in w):
            violations.append({"presilting": ctx.subset_symbols(si),
                               "located": [list(g) for g in u.g_vectors()],
                               "weights": [str(x) for x in w],
                               "module_total_dim": 0})
    return {"status": "fail" if violations else "pass",
            "checked": ctx.plan.fan_samples + len(ctx.subset_objects) - 1,
            "counterexample": _min_counterexample(violations)}


_CHECK_FUNCS = {
    "serre": check_serre,
    "euler": check_euler,
    "signs": check_signs,
    "wide": check_wide,
    "torsion": check_torsion,
    "silting_wide": check_silting_wide,
    "silting_semistable": check_silting_semistable,
    "table": check_table,
    "fan": check_fan,
}


def check_thm_equivalence(u: SiltingObject, weights: Sequence[Fraction],
                          modules: Sequence[Module]) -> list[dict]:
    """Per-module record of the wide-versus-semistable equivalence for one
    presilting complex and one weight vector."""
    theta = stability.theta_from_presilting(u, tuple(Fraction(w) for w in weights))
    out = []
    for m in modules:
        wide = stability.in_W_U(u, m)
        ss, witness = stability.is_semistable(theta, m)
        out.append({"module": repmod.module_label(m), "in_W_U": wide,
                    "is_semistable": ss, "agree": wide == ss, "witness": witness})
    return out


def run_suite(plan: VerificationPlan) -> Verdict:
    params = {
        "algebra": plan.algebra_name,
        "p": plan.presentation.field.p,
        "dim_bound": plan.dim_bound,
        "seed": plan.seed,
        "draw_count": plan.draw_count,
        "module_policy": plan.module_policy,
        "checks": list(plan.checks),
    }
    timings: dict[str, float] = {}
    t0 = time.monotonic()
    try:
        ctx = _Context(plan)
    except InconclusiveEnumeration as e:
        return Verdict(params=params, catalog_sizes={},
                       checks={"enumeration": {"status": "inconclusive", "reason": str(e)}},
                       status="inconclusive",
                       timings={"setup": time.monotonic() - t0})
    timings["setup"] = time.monotonic() - t0
    params["dim_bound"] = ctx.dim_bound
    catalog_sizes = {
        "indecomposables": len(ctx.indecs),
        "indec_presilting": len(ctx.catalog),
        "siltings": len(ctx.silt.siltings),
        "compatible_subsets": len(ctx.subsets),
        "test_modules": len(ctx.modules),
    }
    checks = {}
    failed = False
    for name in plan.checks:
        t1 = time.monotonic()
        result = _CHECK_FUNCS[name](ctx)
        timings[name] = time.monotonic() - t1
        checks[name] = result
        if result["status"] == "fail":
            failed = True
    return Verdict(params=params, catalog_sizes=catalog_sizes, checks=checks,
                   status="fail" if failed else "pass", timings=timings)
