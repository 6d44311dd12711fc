"""Stability forms from presilting complexes, semistability, and the
torsion-pair / wide-subcategory membership oracles.

Sign convention: a module M is semistable for theta when theta(M) = 0 and
theta(L) <= 0 for every submodule L (equivalently theta >= 0 on factor
modules).  Weights are positive rationals; everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import linalg, repmod, twoterm
from .algebra import AlgebraError, PathBasis
from .repmod import DimVector, Module
from .twoterm import PresiltingCatalog, SiltingObject


class QueryError(ValueError):
    """Malformed stability query (bad theta vector, weights, or spec)."""


@dataclass(frozen=True)
class StabilityForm:
    coeffs: tuple[Fraction, ...]
    provenance: Optional[tuple[SiltingObject, tuple[Fraction, ...]]] = None

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"


def parse_theta(text: str, n: int) -> tuple[Fraction, ...]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != n:
        raise QueryError(f"theta needs {n} comma-separated rationals, got {len(parts)}")
    try:
        return tuple(Fraction(s) for s in parts)
    except (ValueError, ZeroDivisionError) as e:
        raise QueryError(f"malformed theta entry: {e}") from None


def theta_from_presilting(u: SiltingObject, weights: Sequence[Fraction]) -> StabilityForm:
    """theta = sum of weight * g-vector over the indecomposable summands."""
    if not u.is_presilting:
        raise QueryError("the complex is not presilting")
    weights = tuple(Fraction(w) for w in weights)
    if len(weights) != len(u.summands):
        raise QueryError(f"{len(u.summands)} summands but {len(weights)} weights")
    if any(w <= 0 for w in weights):
        raise QueryError("weights must be strictly positive")
    n = u.alg.n
    coeffs = [Fraction(0)] * n
    for w, c in zip(weights, u.summands):
        for v, g in enumerate(c.g_vector()):
            coeffs[v] += w * g
    return StabilityForm(tuple(coeffs), (u, weights))


def theta_value(theta: StabilityForm, dims: Sequence[int]) -> Fraction:
    if len(dims) != len(theta.coeffs):
        raise QueryError("dimension vector length does not match theta")
    return sum((c * int(d) for c, d in zip(theta.coeffs, dims)), Fraction(0))


def is_semistable(theta: StabilityForm, m: Module) -> tuple[bool, Optional[dict]]:
    """Semistability test with a violation witness.

    Checks theta(M) = 0 and theta <= 0 on the exact set of submodule
    dimension vectors.
    """
    total = theta_value(theta, m.dims)
    if total != 0:
        return False, {"kind": "theta_nonzero", "value": str(total)}
    for sub in sorted(repmod.submodule_dim_vectors(m)):
        val = theta_value(theta, sub)
        if val > 0:
            return False, {"kind": "submodule", "dims": list(sub), "value": str(val)}
    return True, None


# ---------------------------------------------------------------------------
# Torsion-pair membership oracles
# ---------------------------------------------------------------------------

def in_T_plus(u: SiltingObject, m: Module) -> bool:
    """No maps from u into the shifted stalk of m.

    Computed two independent ways (vanishing of Hom(u, m[1]) and of
    Hom(m, H^{-1}(nu u))) which must agree.
    """
    derived = sum(twoterm.hom_D_complex_module_shift1(c, m) for c in u.summands)
    via_nu = repmod.hom_dim(m, u.h_minus1_nu())
    if (derived == 0) != (via_nu == 0):
        raise AssertionError("T+ membership routes disagree")
    return derived == 0


def in_F_minus(u: SiltingObject, m: Module) -> bool:
    """No maps from H0(u) to m; cross-checked against Hom(m, nu u) = 0."""
    via_h0 = repmod.hom_dim(u.h_zero(), m)
    via_nu = sum(twoterm.hom_D_module_nu_complex(m, c) for c in u.summands)
    if (via_h0 == 0) != (via_nu == 0):
        raise AssertionError("F- membership routes disagree")
    return via_h0 == 0


def in_T_minus(u: SiltingObject, m: Module) -> bool:
    return repmod.fac_membership(u.h_zero(), m)


def in_F_plus(u: SiltingObject, m: Module) -> bool:
    return repmod.sub_membership(u.h_minus1_nu(), m)


def in_W_U(u: SiltingObject, m: Module) -> bool:
    return in_T_plus(u, m) and in_F_minus(u, m)


def in_W_T(t: SiltingObject, m: Module) -> bool:
    """Membership in the wide subcategory attached to a silting complex:
    Fac H0(T) intersected with the Hom-orthogonal of H0(T_rho)."""
    if not t.is_silting:
        raise AlgebraError("in_W_T needs a two-term silting complex")
    _, rho = twoterm.silting_parts(t)
    return repmod.fac_membership(t.h_zero(), m) and repmod.hom_dim(rho.h_zero(), m) == 0


# ---------------------------------------------------------------------------
# Membership reports
# ---------------------------------------------------------------------------

@dataclass
class MembershipReport:
    module_id: str
    in_T_plus: bool
    in_T_minus: bool
    in_F_plus: bool
    in_F_minus: bool
    in_W_U: bool
    is_semistable: bool
    theta_value: Fraction
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "module": self.module_id,
            "in_T_plus": self.in_T_plus,
            "in_T_minus": self.in_T_minus,
            "in_F_plus": self.in_F_plus,
            "in_F_minus": self.in_F_minus,
            "in_W_U": self.in_W_U,
            "is_semistable": self.is_semistable,
            "theta_value": str(self.theta_value),
            "witness": self.witness,
        }


def membership_report(u: SiltingObject, weights: Sequence[Fraction], m: Module,
                      module_id: Optional[str] = None) -> MembershipReport:
    theta = theta_from_presilting(u, weights)
    tp = in_T_plus(u, m)
    tm = in_T_minus(u, m)
    fp = in_F_plus(u, m)
    fm = in_F_minus(u, m)
    ss, ss_witness = is_semistable(theta, m)
    witness = {}
    if not tp:
        witness["in_T_plus"] = {"kind": "nonzero_hom_into_shift",
                                "dim": sum(twoterm.hom_D_complex_module_shift1(c, m)
                                           for c in u.summands)}
    if not fm:
        witness["in_F_minus"] = {"kind": "nonzero_hom_from_H0",
                                 "dim": repmod.hom_dim(u.h_zero(), m)}
    if not tm:
        witness["in_T_minus"] = {"kind": "not_generated_by_H0"}
    if not fp:
        witness["in_F_plus"] = {"kind": "not_cogenerated_by_Hminus1_nu"}
    if not ss and ss_witness:
        witness["is_semistable"] = ss_witness
    return MembershipReport(
        module_id=module_id or repmod.module_label(m),
        in_T_plus=tp, in_T_minus=tm, in_F_plus=fp, in_F_minus=fm,
        in_W_U=tp and fm, is_semistable=ss,
        theta_value=theta_value(theta, m.dims), witness=witness)


# ---------------------------------------------------------------------------
# Cone location in K_0(proj) (x) Q
# ---------------------------------------------------------------------------

class ConeLocationError(RuntimeError):
    """theta matched no cone (or, impossibly, several) in the catalog fan."""


def locate_cone(catalog: PresiltingCatalog, theta: Sequence[Fraction]
                ) -> tuple[SiltingObject, tuple[Fraction, ...]]:
    """The unique presilting U and positive weights with theta = sum w_i g(U_i).

    Boundary points belong to the cone of the face, so the search demands
    strictly positive weights on a compatible subset; the subsets partition
    the fan when the catalog is conclusive.
    """
    theta = tuple(Fraction(x) for x in theta)
    if len(theta) != catalog.alg.n:
        raise QueryError(f"theta must have length {catalog.alg.n}")
    hits = []
    for subset in catalog.all_compatible_subsets():
        if not subset:
            if all(x == 0 for x in theta):
                hits.append(((), ()))
            continue
        gs = [list(map(Fraction, catalog.complexes[i].g_vector())) for i in subset]
        if linalg.frac_rank(gs) != len(subset):
            continue  # dependent rays never carry a relatively open cone
        sol = linalg.frac_solve(gs, list(theta))
        if sol is None:
            continue
        if all(w > 0 for w in sol):
            hits.append((subset, tuple(sol)))
    if not hits:
        raise ConeLocationError(
            "no cone found within catalog: theta lies outside the certified fan")
    if len(hits) > 1:
        raise ConeLocationError(
            f"theta lies in {len(hits)} cones; the fan is not a partition (internal error)")
    subset, weights = hits[0]
    u = SiltingObject(catalog.alg, [catalog.complexes[i] for i in subset])
    # keep weights aligned with the canonical summand order of the SiltingObject
    order = sorted(range(len(subset)),
                   key=lambda k: tuple(-x for x in catalog.complexes[subset[k]].g_vector()))
    return u, tuple(weights[k] for k in order)
