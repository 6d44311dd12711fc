"""Two-term complexes of projectives: homotopy Homs, (pre)silting catalogs,
g-vectors, Nakayama transport and the canonical triangle decomposition of a
silting complex.

A complex is a matrix of corner-algebra elements d: P^{-1} -> P^0, entry
(r, c) in e_{j_r} Lambda e_{i_c} for the component P_{i_c} -> P_{j_r}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import linalg, repmod
from .algebra import AlgebraError, PathBasis, ResourceGuard
from .repmod import Module, Morphism


class InconclusiveEnumeration(RuntimeError):
    """The presilting catalog cannot be certified complete at this dimension bound."""


class TwoTermComplex:
    def __init__(self, alg: PathBasis, p_minus1: Sequence[int], p_zero: Sequence[int],
                 diff: Sequence[Sequence[np.ndarray]]):
        self.alg = alg
        self.p_minus1 = tuple(int(v) for v in p_minus1)
        self.p_zero = tuple(int(v) for v in p_zero)
        rows = []
        for r, j in enumerate(self.p_zero):
            row = []
            for c, i in enumerate(self.p_minus1):
                w = diff[r][c] if diff else alg.zero()
                w = np.asarray(w, dtype=np.int64) % alg.p
                for b in np.nonzero(w)[0]:
                    pt = alg.basis_paths[int(b)]
                    if pt.source != j or pt.target != i:
                        raise AlgebraError(
                            "differential entry outside its idempotent corner")
                row.append(w)
            rows.append(tuple(row))
        self.diff = tuple(rows)
        self._cache: dict = {}

    @property
    def is_zero(self) -> bool:
        return not self.p_minus1 and not self.p_zero

    def g_vector(self) -> tuple[int, ...]:
        g = [0] * self.alg.n
        for v in self.p_zero:
            g[v] += 1
        for v in self.p_minus1:
            g[v] -= 1
        return tuple(g)

    # -- views as module data -------------------------------------------------

    def differential_morphism(self) -> Morphism:
        if "dmor" not in self._cache:
            self._cache["dmor"] = repmod.morphism_between_projectives(
                self.alg, self.p_minus1, self.p_zero, self.diff)
        return self._cache["dmor"]

    def module_zero(self) -> Module:
        return self.differential_morphism().target

    def module_minus1(self) -> Module:
        return self.differential_morphism().source

    def h_zero(self) -> Module:
        if "h0" not in self._cache:
            self._cache["h0"] = repmod.cokernel_module(self.differential_morphism())[0]
        return self._cache["h0"]

    def nu_morphism(self) -> Morphism:
        if "nud" not in self._cache:
            self._cache["nud"] = repmod.morphism_between_injectives(
                self.alg, self.p_minus1, self.p_zero, self.diff)
        return self._cache["nud"]

    def h_minus1_nu(self) -> Module:
        if "hm1nu" not in self._cache:
            self._cache["hm1nu"] = repmod.kernel_module(self.nu_morphism())[0]
        return self._cache["hm1nu"]

    def __repr__(self):
        return f"TwoTermComplex(g={self.g_vector()})"


@dataclass(frozen=True)
class InjectiveComplex:
    """Image of a two-term projective complex under the Nakayama functor."""
    minus1: Module
    zero: Module
    differential: Morphism


def stalk_complex(alg: PathBasis, vertex: int) -> TwoTermComplex:
    return TwoTermComplex(alg, [], [vertex], [[]])


def shifted_projective(alg: PathBasis, vertex: int) -> TwoTermComplex:
    return TwoTermComplex(alg, [vertex], [], [])


def complex_direct_sum(alg: PathBasis, comps: Sequence[TwoTermComplex]) -> TwoTermComplex:
    pm1 = [v for c in comps for v in c.p_minus1]
    pz = [v for c in comps for v in c.p_zero]
    rows = []
    for ci, comp in enumerate(comps):
        for r in range(len(comp.p_zero)):
            row = []
            for cj, other in enumerate(comps):
                for cc in range(len(other.p_minus1)):
                    row.append(comp.diff[r][cc] if ci == cj else alg.zero())
            rows.append(row)
    return TwoTermComplex(alg, pm1, pz, rows)


def H0(p: TwoTermComplex) -> Module:
    return p.h_zero()


def Hminus1_nu(p: TwoTermComplex) -> Module:
    return p.h_minus1_nu()


def nu_complex(p: TwoTermComplex) -> InjectiveComplex:
    mor = p.nu_morphism()
    return InjectiveComplex(mor.source, mor.target, mor)


def g_vector(p: TwoTermComplex) -> tuple[int, ...]:
    return p.g_vector()


# ---------------------------------------------------------------------------
# Corner-space linear algebra between sums of projectives
# ---------------------------------------------------------------------------

class CornerSpace:
    """Hom(+P_{src}, +P_{tgt}) as an explicit F_p coordinate space."""

    def __init__(self, alg: PathBasis, src_verts: Sequence[int], tgt_verts: Sequence[int]):
        self.alg = alg
        self.src = tuple(src_verts)
        self.tgt = tuple(tgt_verts)
        self.blocks = []
        off = 0
        for r, j in enumerate(self.tgt):
            for c, i in enumerate(self.src):
                corner = alg.corner(j, i)
                self.blocks.append((r, c, corner, off))
                off += len(corner)
        self.dim = off

    def to_vec(self, rows: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        for r, c, corner, off in self.blocks:
            w = rows[r][c]
            for t, bidx in enumerate(corner):
                v[off + t] = w[bidx]
        return v

    def from_vec(self, vec: np.ndarray) -> list[list[np.ndarray]]:
        rows = [[self.alg.zero() for _ in self.src] for _ in self.tgt]
        for r, c, corner, off in self.blocks:
            for t, bidx in enumerate(corner):
                rows[r][c][bidx] = vec[off + t]
        return rows

    def basis_mats(self):
        for k in range(self.dim):
            v = np.zeros(self.dim, dtype=np.int64)
            v[k] = 1
            yield self.from_vec(v)


def elem_matmul(alg: PathBasis, a: Sequence[Sequence[np.ndarray]],
                b: Sequence[Sequence[np.ndarray]]) -> list[list[np.ndarray]]:
    """Product of matrices of algebra elements (composition of projective maps)."""
    m = len(a)
    k = len(b)
    n = len(b[0]) if k else 0
    out = [[alg.zero() for _ in range(n)] for _ in range(m)]
    for i in range(m):
        for l in range(k):
            w = a[i][l]
            if not w.any():
                continue
            for j in range(n):
                x = b[l][j]
                if x.any():
                    out[i][j] = (out[i][j] + alg.mult(w, x)) % alg.p
    return out


def _operator_matrix(src_space: CornerSpace, tgt_space: CornerSpace, action) -> np.ndarray:
    cols = []
    for mats in src_space.basis_mats():
        cols.append(tgt_space.to_vec(action(mats)))
    if not cols:
        return linalg.zeros(tgt_space.dim, 0)
    return np.stack(cols, axis=1)


def _diff_rows(p: TwoTermComplex) -> list[list[np.ndarray]]:
    return [list(r) for r in p.diff] if p.p_zero and p.p_minus1 else (
        [[] for _ in p.p_zero] if p.p_zero else [])


def hom_K(p: TwoTermComplex, q: TwoTermComplex, shift: int = 0) -> int:
    """dim of the homotopy-category Hom(p, q[shift]) for shift in {-1, 0, 1}."""
    alg = p.alg
    dp = _diff_rows(p)
    dq = _diff_rows(q)
    if shift == 1:
        space = CornerSpace(alg, p.p_minus1, q.p_zero)
        if space.dim == 0:
            return 0
        v00 = CornerSpace(alg, p.p_zero, q.p_zero)
        v11 = CornerSpace(alg, p.p_minus1, q.p_minus1)
        alpha = _operator_matrix(v00, space, lambda f: elem_matmul(alg, f, dp)) \
            if v00.dim else linalg.zeros(space.dim, 0)
        beta = _operator_matrix(v11, space, lambda f: elem_matmul(alg, dq, f)) \
            if v11.dim else linalg.zeros(space.dim, 0)
        images = np.concatenate([alpha, beta], axis=1)
        return space.dim - linalg.rank(images, alg.p)
    if shift == 0:
        v00 = CornerSpace(alg, p.p_zero, q.p_zero)
        v11 = CornerSpace(alg, p.p_minus1, q.p_minus1)
        cond_space = CornerSpace(alg, p.p_minus1, q.p_zero)
        total = v00.dim + v11.dim
        if total == 0:
            return 0
        rows = linalg.zeros(cond_space.dim, total)
        for k in range(v00.dim):
            vec = np.zeros(v00.dim, dtype=np.int64)
            vec[k] = 1
            rows[:, k] = cond_space.to_vec(elem_matmul(alg, v00.from_vec(vec), dp))
        for k in range(v11.dim):
            vec = np.zeros(v11.dim, dtype=np.int64)
            vec[k] = 1
            rows[:, v00.dim + k] = (-cond_space.to_vec(elem_matmul(alg, dq, v11.from_vec(vec)))) % alg.p
        kernel_dim = total - linalg.rank(rows, alg.p)
        v01 = CornerSpace(alg, p.p_zero, q.p_minus1)
        homs = linalg.zeros(total, v01.dim)
        for k in range(v01.dim):
            vec = np.zeros(v01.dim, dtype=np.int64)
            vec[k] = 1
            h = v01.from_vec(vec)
            homs[:v00.dim, k] = v00.to_vec(elem_matmul(alg, dq, h))
            homs[v00.dim:, k] = v11.to_vec(elem_matmul(alg, h, dp))
        return kernel_dim - linalg.rank(homs, alg.p)
    if shift == -1:
        space = CornerSpace(alg, p.p_zero, q.p_minus1)
        if space.dim == 0:
            return 0
        c1 = CornerSpace(alg, p.p_zero, q.p_zero)
        c2 = CornerSpace(alg, p.p_minus1, q.p_minus1)
        rows = linalg.zeros(c1.dim + c2.dim, space.dim)
        for k in range(space.dim):
            vec = np.zeros(space.dim, dtype=np.int64)
            vec[k] = 1
            f = space.from_vec(vec)
            rows[:c1.dim, k] = c1.to_vec(elem_matmul(alg, dq, f))
            rows[c1.dim:, k] = c2.to_vec(elem_matmul(alg, f, dp))
        return space.dim - linalg.rank(rows, alg.p)
    raise ValueError("shift must be -1, 0 or 1")


def chain_maps(x: TwoTermComplex, y: TwoTermComplex) -> list[tuple[list[list[np.ndarray]], list[list[np.ndarray]]]]:
    """Basis of genuine chain maps x -> y as pairs (f0, f_minus1)."""
    alg = x.alg
    v00 = CornerSpace(alg, x.p_zero, y.p_zero)
    v11 = CornerSpace(alg, x.p_minus1, y.p_minus1)
    cond_space = CornerSpace(alg, x.p_minus1, y.p_zero)
    total = v00.dim + v11.dim
    if total == 0:
        return []
    dx, dy = _diff_rows(x), _diff_rows(y)
    rows = linalg.zeros(cond_space.dim, total)
    for k in range(v00.dim):
        vec = np.zeros(v00.dim, dtype=np.int64)
        vec[k] = 1
        rows[:, k] = cond_space.to_vec(elem_matmul(alg, v00.from_vec(vec), dx))
    for k in range(v11.dim):
        vec = np.zeros(v11.dim, dtype=np.int64)
        vec[k] = 1
        rows[:, v00.dim + k] = (-cond_space.to_vec(elem_matmul(alg, dy, v11.from_vec(vec)))) % alg.p
    kernel = linalg.nullspace(rows, alg.p)
    out = []
    for j in range(kernel.shape[1]):
        out.append((v00.from_vec(kernel[:v00.dim, j]), v11.from_vec(kernel[v00.dim:, j])))
    return out


# ---------------------------------------------------------------------------
# Reduction (stripping contractible summands)
# ---------------------------------------------------------------------------

def reduce_complex(p: TwoTermComplex) -> TwoTermComplex:
    """Homotopy-minimal representative: cancel all invertible differential entries."""
    alg = p.alg
    pm1 = list(p.p_minus1)
    pz = list(p.p_zero)
    diff = [[w.copy() for w in row] for row in p.diff]
    while True:
        pivot = None
        for r in range(len(pz)):
            for c in range(len(pm1)):
                if pz[r] == pm1[c] and alg.scalar_part(diff[r][c], pz[r]) != 0:
                    pivot = (r, c)
                    break
            if pivot:
                break
        if pivot is None:
            break
        r0, c0 = pivot
        winv = alg.corner_elem_inverse(diff[r0][c0], pz[r0])
        for r in range(len(pz)):
            if r == r0:
                continue
            lead = alg.mult(diff[r][c0], winv)
            if not lead.any():
                continue
            for c in range(len(pm1)):
                if c == c0:
                    continue
                diff[r][c] = (diff[r][c] - alg.mult(lead, diff[r0][c])) % alg.p
        del pz[r0]
        diff.pop(r0)
        del pm1[c0]
        for row in diff:
            row.pop(c0)
    return TwoTermComplex(alg, pm1, pz, diff)


def is_contractible(p: TwoTermComplex) -> bool:
    return reduce_complex(p).is_zero and not p.is_zero


def is_presilting(p: TwoTermComplex) -> bool:
    """No self-extensions in the shift-one direction (two-term complexes have
    no higher obstructions)."""
    red = reduce_complex(p)
    return hom_K(red, red, 1) == 0


def compatible(x: TwoTermComplex, y: TwoTermComplex) -> bool:
    return hom_K(x, y, 1) == 0 and hom_K(y, x, 1) == 0


# ---------------------------------------------------------------------------
# Euler form and derived Homs against modules
# ---------------------------------------------------------------------------

def hom_D_complex_module(p: TwoTermComplex, m: Module) -> int:
    """dim Hom of the complex into the module stalk (degree 0)."""
    return repmod.hom_dim(p.h_zero(), m)


def hom_D_complex_module_shift1(p: TwoTermComplex, m: Module) -> int:
    """dim Hom(p, m[1]): cokernel of Hom(P^0, m) -> Hom(P^-1, m)."""
    d = p.differential_morphism()
    basis0 = repmod.hom_space(d.target, m)
    basis1 = repmod.hom_space(d.source, m)
    if not basis1:
        return 0
    if not basis0:
        return len(basis1)
    alg = p.alg
    sizes = [m.dims[v] * d.source.dims[v] for v in range(alg.n)]
    total = sum(sizes)

    def vec_of(mor: Morphism) -> np.ndarray:
        return np.concatenate([mat.reshape(-1) for mat in mor.mats]) if total else np.zeros(0, dtype=np.int64)

    images = np.stack([vec_of(f.compose(d)) for f in basis0], axis=1)
    return len(basis1) - linalg.rank(images, alg.p)


def hom_D_module_nu_complex(m: Module, p: TwoTermComplex) -> int:
    """dim Hom(m, nu p): Hom(m, nu P^0) modulo maps factoring through nu d."""
    nud = p.nu_morphism()
    basis0 = repmod.hom_space(m, nud.target)
    if not basis0:
        return 0
    basis1 = repmod.hom_space(m, nud.source)
    if not basis1:
        return len(basis0)
    alg = p.alg

    def vec_of(mor: Morphism) -> np.ndarray:
        return np.concatenate([mat.reshape(-1) for mat in mor.mats])

    images = np.stack([vec_of(nud.compose(f)) for f in basis1], axis=1)
    return len(basis0) - linalg.rank(images, alg.p)


def euler_form(p: TwoTermComplex, m: Module) -> int:
    """Euler pairing <p, m>, computed two independent ways that must agree."""
    via_g = int(np.dot(np.array(p.g_vector(), dtype=np.int64), np.array(m.dims, dtype=np.int64)))
    via_hom = repmod.hom_dim(p.module_zero(), m) - repmod.hom_dim(p.module_minus1(), m)
    if via_g != via_hom:
        raise AssertionError(f"euler form routes disagree: {via_g} vs {via_hom}")
    return via_g


# ---------------------------------------------------------------------------
# Presentations and catalogs
# ---------------------------------------------------------------------------

def min_projective_presentation(m: Module) -> TwoTermComplex:
    p1, p0, elems = repmod.presentation_data(m)
    return TwoTermComplex(m.alg, p1, p0, elems)


def g_symbol(alg: PathBasis, g: Sequence[int]) -> str:
    """Human notation like 'P_2 - P_3' for a g-vector."""
    plus, minus = [], []
    for v, c in enumerate(g):
        name = f"P_{alg.quiver.vertices[v]}"
        if c > 0:
            plus.extend([name] * c)
        elif c < 0:
            minus.extend([name] * (-c))
    if not plus and not minus:
        return "0"
    out = " + ".join(plus)
    for name in minus:
        out += f" - {name}" if out else f"-{name}"
    return out


class PresiltingCatalog:
    """All indecomposable two-term presilting complexes found below a dimension
    bound: minimal presentations of tau-rigid indecomposables plus the shifted
    projectives.  Completeness is certified later by the silting fan."""

    def __init__(self, alg: PathBasis, dim_bound: Optional[int] = None):
        self.alg = alg
        self.dim_bound = dim_bound if dim_bound is not None else alg.n
        indecs = repmod.enumerate_indecomposables(alg, self.dim_bound)
        complexes: list[TwoTermComplex] = []
        sources: list[Optional[Module]] = []
        for m in indecs:
            if repmod.is_tau_rigid(m):
                cpx = min_projective_presentation(m)
                if not is_presilting(cpx):
                    raise AssertionError("presentation of a tau-rigid module is not presilting")
                complexes.append(cpx)
                sources.append(m)
        for v in range(alg.n):
            complexes.append(shifted_projective(alg, v))
            sources.append(None)
        order = sorted(range(len(complexes)),
                       key=lambda k: tuple(-x for x in complexes[k].g_vector()))
        self.complexes = [complexes[k] for k in order]
        self.modules = [sources[k] for k in order]
        gs = [c.g_vector() for c in self.complexes]
        if len(set(gs)) != len(gs):
            raise AssertionError("distinct indecomposable presiltings share a g-vector")
        self._compat: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.complexes)

    def compatibility(self) -> np.ndarray:
        if self._compat is None:
            k = len(self.complexes)
            mat = np.zeros((k, k), dtype=bool)
            for i in range(k):
                mat[i, i] = True
                for j in range(i + 1, k):
                    ok = compatible(self.complexes[i], self.complexes[j])
                    mat[i, j] = mat[j, i] = ok
            self._compat = mat
        return self._compat

    def by_g_vector(self, g: Sequence[int]) -> TwoTermComplex:
        g = tuple(int(x) for x in g)
        for c in self.complexes:
            if c.g_vector() == g:
                return c
        raise AlgebraError(f"no catalog presilting with g-vector {g}")

    def all_compatible_subsets(self) -> list[tuple[int, ...]]:
        """Every clique of the compatibility graph, the empty set included."""
        mat = self.compatibility()
        k = len(self.complexes)
        out: list[tuple[int, ...]] = [()]

        def extend(clique: tuple[int, ...], start: int):
            for nxt in range(start, k):
                if all(mat[i, nxt] for i in clique):
                    cand = clique + (nxt,)
                    out.append(cand)
                    extend(cand, nxt + 1)

        extend((), 0)
        return out


class SiltingObject:
    """A basic presilting complex presented by its indecomposable summands."""

    def __init__(self, alg: PathBasis, summands: Sequence[TwoTermComplex]):
        self.alg = alg
        self.summands = tuple(sorted(summands, key=lambda c: tuple(-x for x in c.g_vector())))
        self._cache: dict = {}

    @property
    def is_presilting(self) -> bool:
        if "presilt" not in self._cache:
            self._cache["presilt"] = all(
                hom_K(x, y, 1) == 0
                for x in self.summands for y in self.summands)
        return self._cache["presilt"]

    @property
    def is_silting(self) -> bool:
        return self.is_presilting and len(self.summands) == self.alg.n

    def g_vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c.g_vector() for c in self.summands)

    def total_complex(self) -> TwoTermComplex:
        if "total" not in self._cache:
            self._cache["total"] = complex_direct_sum(self.alg, self.summands)
        return self._cache["total"]

    def h_zero(self) -> Module:
        if "h0" not in self._cache:
            if self.summands:
                self._cache["h0"] = repmod.direct_sum([c.h_zero() for c in self.summands])
            else:
                self._cache["h0"] = repmod.zero_module(self.alg)
        return self._cache["h0"]

    def h_minus1_nu(self) -> Module:
        if "hm1nu" not in self._cache:
            if self.summands:
                self._cache["hm1nu"] = repmod.direct_sum([c.h_minus1_nu() for c in self.summands])
            else:
                self._cache["hm1nu"] = repmod.zero_module(self.alg)
        return self._cache["hm1nu"]

    def symbols(self) -> list[str]:
        return [g_symbol(self.alg, c.g_vector()) for c in self.summands]

    def __repr__(self):
        return "Silting[" + ", ".join(self.symbols()) + "]"


def is_silting(s: SiltingObject) -> bool:
    return s.is_silting


class SiltingCatalog:
    def __init__(self, presiltings: PresiltingCatalog, siltings: list[SiltingObject],
                 clique_indices: list[tuple[int, ...]]):
        self.presiltings = presiltings
        self.siltings = siltings
        self.clique_indices = clique_indices
        self.conclusive = True


def enumerate_2silt(catalog: PresiltingCatalog) -> SiltingCatalog:
    """All basic two-term silting complexes, with a completeness certificate.

    The candidates are the maximal pairwise-compatible subsets of the catalog.
    The enumeration is conclusive exactly when every maximal compatible set
    has n summands and every wall (drop one summand) is shared by exactly two
    such sets; the chamber cones then tile all of K_0(proj) (x) R.
    """
    alg = catalog.alg
    n = alg.n
    mat = catalog.compatibility()
    k = len(catalog.complexes)

    maximal: list[tuple[int, ...]] = []

    def bron_kerbosch(clique: set, candidates: set, excluded: set):
        if not candidates and not excluded:
            maximal.append(tuple(sorted(clique)))
            return
        for v in sorted(candidates):
            nbrs = {u for u in range(k) if u != v and mat[v, u]}
            bron_kerbosch(clique | {v}, candidates & nbrs, excluded & nbrs)
            candidates = candidates - {v}
            excluded = excluded | {v}

    bron_kerbosch(set(), set(range(k)), set())

    bad = [c for c in maximal if len(c) != n]
    if bad:
        raise InconclusiveEnumeration(
            f"dimension bound {catalog.dim_bound} reached with the presilting catalog "
            f"incomplete: a maximal compatible set has {len(bad[0])} != {n} summands; "
            "new tau-rigid modules may still appear beyond the bound")

    wall_count: dict[tuple[int, ...], int] = {}
    for clique in maximal:
        for drop in clique:
            wall = tuple(x for x in clique if x != drop)
            wall_count[wall] = wall_count.get(wall, 0) + 1
    for wall, count in wall_count.items():
        if count != 2:
            raise InconclusiveEnumeration(
                f"dimension bound {catalog.dim_bound} reached with an unmatched wall "
                f"{[g_symbol(alg, catalog.complexes[i].g_vector()) for i in wall]}: "
                "new tau-rigid modules may still appear beyond the bound")

    siltings = []
    for clique in maximal:
        summands = [catalog.complexes[i] for i in clique]
        gs = [list(map(Fraction, c.g_vector())) for c in summands]
        if linalg.frac_rank(gs) != n:
            raise AssertionError("silting candidate with dependent g-vectors")
        obj = SiltingObject(alg, summands)
        if not is_presilting(complex_direct_sum(alg, summands)):
            raise AssertionError("maximal compatible set fails the direct-sum presilting test")
        if not obj.is_silting:
            raise AssertionError("maximal compatible set fails the silting test")
        siltings.append(obj)

    order = sorted(range(len(siltings)), key=lambda i: siltings[i].g_vectors())
    return SiltingCatalog(catalog, [siltings[i] for i in order],
                          [maximal[i] for i in order])


def enumerate_indec_presilting(alg: PathBasis, dim_bound: Optional[int] = None) -> PresiltingCatalog:
    """Catalog of indecomposable two-term presilting complexes (certified by
    running the silting enumeration on top)."""
    catalog = PresiltingCatalog(alg, dim_bound)
    enumerate_2silt(catalog)  # raises InconclusiveEnumeration when not certified
    return catalog


# ---------------------------------------------------------------------------
# The triangle decomposition T = T_lambda (+) T_rho
# ---------------------------------------------------------------------------

@dataclass
class SiltingSplit:
    t_lambda: tuple[int, ...]            # indices into T.summands
    t_rho: tuple[int, ...]
    t_prime: dict[int, int]              # summand index -> multiplicity in T'
    t_double_prime: dict[int, int]       # summand index -> multiplicity in T''
    cone: TwoTermComplex                 # reduced cone of Lambda -> T'


def _homk_reps_from_vertex(alg: PathBasis, vertex: int, x: TwoTermComplex) -> list[np.ndarray]:
    """Representatives of Hom_K(P_vertex[stalk], x) as coordinate vectors in
    Hom(P_vertex, x^0)."""
    space = CornerSpace(alg, [vertex], x.p_zero)
    if space.dim == 0:
        return []
    hspace = CornerSpace(alg, [vertex], x.p_minus1)
    dx = _diff_rows(x)
    img = _operator_matrix(hspace, space, lambda h: elem_matmul(alg, dx, h)) \
        if hspace.dim else linalg.zeros(space.dim, 0)
    # unit vectors away from the pivot coordinates of the image represent a
    # basis of the quotient Hom(P_v, x^0) / (d_x . Hom(P_v, x^{-1}))
    _, pivots = linalg.rref(img.T, alg.p)
    reps = []
    for t in range(space.dim):
        if t not in pivots:
            v = np.zeros(space.dim, dtype=np.int64)
            v[t] = 1
            reps.append(v)
    return reps


def _factors_through(alg: PathBasis, vertex: int, target: TwoTermComplex,
                     target_map: np.ndarray,
                     rest: list[tuple[TwoTermComplex, np.ndarray]]) -> bool:
    """Does the map P_vertex -> target factor, up to homotopy, through the
    other approximation components?"""
    space = CornerSpace(alg, [vertex], target.p_zero)
    cols = []
    for other, gmap in rest:
        gmat = CornerSpace(alg, [vertex], other.p_zero).from_vec(gmap)
        for psi0, _ in chain_maps(other, target):
            comp = elem_matmul(alg, psi0, gmat)
            cols.append(space.to_vec(comp))
    hspace = CornerSpace(alg, [vertex], target.p_minus1)
    dx = _diff_rows(target)
    for k in range(hspace.dim):
        vec = np.zeros(hspace.dim, dtype=np.int64)
        vec[k] = 1
        cols.append(space.to_vec(elem_matmul(alg, dx, hspace.from_vec(vec))))
    if not cols:
        return not target_map.any()
    system = np.stack(cols, axis=1)
    return linalg.solve(system, target_map, alg.p) is not None


def _min_left_approximation(alg: PathBasis, vertex: int,
                            summands: Sequence[TwoTermComplex]) -> list[tuple[int, np.ndarray]]:
    """Minimal left approximation of the stalk P_vertex into add of the summands.

    Returns (summand index, coordinate vector of the degree-zero map) pairs.
    """
    copies: list[tuple[int, np.ndarray]] = []
    for si, x in enumerate(summands):
        for rep in _homk_reps_from_vertex(alg, vertex, x):
            copies.append((si, rep))
    changed = True
    rounds = 0
    max_rounds = len(copies) + 2
    while changed:
        changed = False
        rounds += 1
        if rounds > max_rounds:
            raise AssertionError("approximation reduction loop failed to stabilize")
        for k in range(len(copies)):
            si, rep = copies[k]
            rest = [(summands[sj], r) for j, (sj, r) in enumerate(copies) if j != k]
            if _factors_through(alg, vertex, summands[si], rep, rest):
                copies.pop(k)
                changed = True
                break
    return copies


def silting_decompose(t: SiltingObject) -> SiltingSplit:
    """Split a two-term silting complex via the triangle over the algebra.

    Builds the minimal left approximation Lambda -> T' in the homotopy
    category, forms its cone T'' and reads off which summands of T occur in
    each part.  The identifications are at the level of additive closures.
    """
    if not t.is_silting:
        raise AlgebraError("silting_decompose needs a two-term silting complex")
    alg = t.alg
    summands = t.summands
    approx = {v: _min_left_approximation(alg, v, summands) for v in range(alg.n)}

    t_prime: dict[int, int] = {}
    for v in range(alg.n):
        for si, _ in approx[v]:
            t_prime[si] = t_prime.get(si, 0) + 1

    # cone of Lambda -> T': degree -1 is Lambda (+) T'^{-1}, degree 0 is T'^0
    pm1 = list(range(alg.n))
    pz: list[int] = []
    copies: list[tuple[int, int, np.ndarray]] = []  # (vertex, summand, map)
    for v in range(alg.n):
        for si, rep in approx[v]:
            copies.append((v, si, rep))
    row_offsets = []
    for _, si, _ in copies:
        row_offsets.append(len(pz))
        pz.extend(summands[si].p_zero)
    extra_cols = []
    for _, si, _ in copies:
        extra_cols.append(len(pm1))
        pm1.extend(summands[si].p_minus1)

    rows = [[alg.zero() for _ in pm1] for _ in pz]
    for idx, (v, si, rep) in enumerate(copies):
        x = summands[si]
        gmat = CornerSpace(alg, [v], x.p_zero).from_vec(rep)
        for r in range(len(x.p_zero)):
            rows[row_offsets[idx] + r][v] = gmat[r][0]
            for c in range(len(x.p_minus1)):
                rows[row_offsets[idx] + r][extra_cols[idx] + c] = x.diff[r][c]
    cone = reduce_complex(TwoTermComplex(alg, pm1, pz, rows))

    gs = [list(map(Fraction, c.g_vector())) for c in summands]
    target = list(map(Fraction, cone.g_vector()))
    coeffs = linalg.frac_solve(gs, target)
    if coeffs is None:
        raise AssertionError("cone does not lie in the span of the silting g-vectors")
    t_dprime: dict[int, int] = {}
    for i, c in enumerate(coeffs):
        if c.denominator != 1 or c < 0:
            raise AssertionError(f"cone multiplicity solve produced {c}")
        if c:
            t_dprime[i] = int(c)

    for i, x in enumerate(summands):
        expect = sum(mult * hom_K(x, summands[j], 0) for j, mult in t_dprime.items())
        if hom_K(x, cone, 0) != expect:
            raise AssertionError("cone decomposition failed the Hom-dimension audit")
        expect = sum(mult * hom_K(summands[j], x, 0) for j, mult in t_dprime.items())
        if hom_K(cone, x, 0) != expect:
            raise AssertionError("cone decomposition failed the Hom-dimension audit")

    rho = tuple(sorted(t_dprime.keys()))
    lam = tuple(i for i in range(len(summands)) if i not in t_dprime)
    if set(t_prime.keys()) != set(lam):
        raise AssertionError("approximation summands disagree with the rho complement")

    h0_lam = repmod.direct_sum([summands[i].h_zero() for i in lam]) if lam \
        else repmod.zero_module(alg)
    h0_rho = repmod.direct_sum([summands[i].h_zero() for i in rho]) if rho \
        else repmod.zero_module(alg)
    if not repmod.fac_membership(h0_lam, h0_rho):
        raise AssertionError("H0(T_rho) is not generated by H0(T_lambda)")

    return SiltingSplit(lam, rho, t_prime, t_dprime, cone)


def silting_parts(t: SiltingObject) -> tuple[SiltingObject, SiltingObject]:
    """(T_lambda, T_rho) as presilting objects."""
    split = silting_split_cached(t)
    lam = SiltingObject(t.alg, [t.summands[i] for i in split.t_lambda])
    rho = SiltingObject(t.alg, [t.summands[i] for i in split.t_rho])
    return lam, rho


def silting_split_cached(t: SiltingObject) -> SiltingSplit:
    if "split" not in t._cache:
        t._cache["split"] = silting_decompose(t)
    return t._cache["split"]


# ---------------------------------------------------------------------------
# JSON exchange
# ---------------------------------------------------------------------------

def complex_from_json(alg: PathBasis, data: dict) -> TwoTermComplex:
    vidx = {v: i for i, v in enumerate(alg.quiver.vertices)}
    aidx = {a.name: i for i, a in enumerate(alg.quiver.arrows)}

    def vertex_list(key):
        out = []
        for label in data.get(key, []):
            if str(label) not in vidx:
                raise AlgebraError(f"unknown vertex in complex file: {label}")
            out.append(vidx[str(label)])
        return out

    pm1 = vertex_list("p_minus1")
    pz = vertex_list("p_zero")
    raw = data.get("d", [])
    if len(raw) != len(pz) or any(len(row) != len(pm1) for row in raw):
        raise AlgebraError("differential shape does not match p_zero x p_minus1")
    rows = []
    for r, j in enumerate(pz):
        row = []
        for c, i in enumerate(pm1):
            entry = raw[r][c]
            terms = entry if isinstance(entry, list) else ([entry] if entry else [])
            w = alg.zero()
            for term in terms:
                coeff = int(term.get("coeff", 1)) % alg.p
                try:
                    arrows = [aidx[str(x)] for x in term.get("path", [])]
                except KeyError as e:
                    raise AlgebraError(f"unknown arrow in complex file: {e}") from None
                elem = alg.nf_path(j, arrows)
                pt_target = j if not arrows else alg.quiver.arrows[arrows[-1]].target
                if pt_target != i:
                    raise AlgebraError("complex entry path does not join its corner")
                w = (w + coeff * elem) % alg.p
            row.append(w)
        rows.append(row)
    return TwoTermComplex(alg, pm1, pz, rows)


def complex_to_json(p: TwoTermComplex) -> dict:
    alg = p.alg
    names = [a.name for a in alg.quiver.arrows]
    d = []
    for row in p.diff:
        out_row = []
        for w in row:
            terms = []
            for b in np.nonzero(w)[0]:
                pt = alg.basis_paths[int(b)]
                terms.append({"coeff": int(w[b]), "path": [names[a] for a in pt.arrows]})
            out_row.append(terms)
        d.append(out_row)
    return {
        "p_minus1": [alg.quiver.vertices[v] for v in p.p_minus1],
        "p_zero": [alg.quiver.vertices[v] for v in p.p_zero],
        "d": d,
    }
