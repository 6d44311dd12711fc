"""Finite-dimensional right modules over a quotient path algebra.

A module is stored as a quiver representation: a dimension per vertex and one
exact F_p matrix per arrow, where an arrow a: i -> j acts as M_i -> M_j on
column vectors.  All operations are pure functions; modules are never mutated
after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg
from .algebra import AlgebraError, PathBasis, ResourceGuard

DimVector = tuple[int, ...]

_ISO_SEARCH_BOUND = 1 << 16
_END_SEARCH_BOUND = 1 << 16
_SUBMODULE_DIM_GUARD = 12
_SUBMODULE_COUNT_GUARD = 20_000
_MATRIX_ENUM_GUARD = 1 << 20


class Module:
    """A representation of the quiver underlying ``alg``, satisfying its relations."""

    def __init__(self, alg: PathBasis, dims: Sequence[int], mats: Sequence[np.ndarray],
                 check: bool = False):
        self.alg = alg
        self.dims: DimVector = tuple(int(d) for d in dims)
        fixed = []
        for k, a in enumerate(alg.quiver.arrows):
            m = np.asarray(mats[k], dtype=np.int64) % alg.p
            expect = (self.dims[a.target], self.dims[a.source])
            if m.shape != expect:
                m = m.reshape(expect)
            fixed.append(m)
        self.mats: tuple[np.ndarray, ...] = tuple(fixed)
        self._cache: dict = {}
        if check:
            validate_module(self)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def support(self) -> list[int]:
        return [v for v, d in enumerate(self.dims) if d > 0]

    def __repr__(self):
        return f"Module(dims={self.dims})"


class Morphism:
    """A module map, one matrix per vertex, intertwining all arrow actions."""

    def __init__(self, source: Module, target: Module, mats: Sequence[np.ndarray]):
        self.source = source
        self.target = target
        self.mats = tuple(np.asarray(m, dtype=np.int64) % source.alg.p for m in mats)

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other (self . other)."""
        p = self.source.alg.p
        return Morphism(other.source, self.target,
                        [linalg.matmul(f, g, p) for f, g in zip(self.mats, other.mats)])

    @property
    def is_zero(self) -> bool:
        return not any(m.any() for m in self.mats)

    def rank(self) -> int:
        p = self.source.alg.p
        return sum(linalg.rank(m, p) for m in self.mats)


def validate_module(m: Module) -> None:
    alg = m.alg
    for rel in alg.presentation.relations:
        src, tgt = rel.endpoints(alg.quiver)
        acc = np.zeros((m.dims[tgt], m.dims[src]), dtype=np.int64)
        for coeff, path in rel.terms:
            acc = (acc + coeff * _path_matrix(m, src, path)) % alg.p
        if acc.any():
            raise AlgebraError("arrow maps do not satisfy the relations")


def _path_matrix(m: Module, source: int, arrows: Sequence[int]) -> np.ndarray:
    mat = linalg.eye(m.dims[source])
    at = source
    for a in arrows:
        arr = m.alg.quiver.arrows[a]
        mat = linalg.matmul(m.mats[a], mat, m.alg.p)
        at = arr.target
    return mat


def path_action(m: Module, vertex: int, vec: np.ndarray, arrows: Sequence[int]) -> tuple[int, np.ndarray]:
    """Right action of an arrow word on a vector sitting at ``vertex``."""
    at = vertex
    out = np.asarray(vec, dtype=np.int64) % m.alg.p
    for a in arrows:
        arr = m.alg.quiver.arrows[a]
        if arr.source != at:
            raise AlgebraError("non-composable path action")
        out = linalg.matmul(m.mats[a], out.reshape(-1, 1), m.alg.p).reshape(-1)
        at = arr.target
    return at, out


def zero_module(alg: PathBasis) -> Module:
    return Module(alg, [0] * alg.n, [linalg.zeros(0, 0) for _ in alg.quiver.arrows])


def direct_sum(ms: Sequence[Module]) -> Module:
    if not ms:
        raise ValueError("empty direct sum needs an algebra; use zero_module")
    alg = ms[0].alg
    dims = [sum(m.dims[v] for m in ms) for v in range(alg.n)]
    mats = []
    for k, a in enumerate(alg.quiver.arrows):
        block = linalg.zeros(dims[a.target], dims[a.source])
        r = c = 0
        for m in ms:
            dr, dc = m.dims[a.target], m.dims[a.source]
            block[r:r + dr, c:c + dc] = m.mats[k]
            r += dr
            c += dc
        mats.append(block)
    return Module(alg, dims, mats)


# ---------------------------------------------------------------------------
# Standard modules: simples, projectives, injectives
# ---------------------------------------------------------------------------

def proj_module(alg: PathBasis, vertices: Sequence[int]) -> tuple[Module, list[list[tuple[int, int]]]]:
    """Direct sum of the projectives e_v Lambda for v in ``vertices``.

    Also returns, per component and per vertex, the (offset, size) of that
    component's block in the module coordinates; the block basis is the
    residue-path basis of the corner e_v Lambda e_w.
    """
    comps = list(vertices)
    dims = [0] * alg.n
    offsets: list[list[tuple[int, int]]] = []
    for i in comps:
        row = []
        for w in range(alg.n):
            size = len(alg.corner(i, w))
            row.append((dims[w], size))
            dims[w] += size
        offsets.append(row)
    mats = []
    for k, a in enumerate(alg.quiver.arrows):
        block = linalg.zeros(dims[a.target], dims[a.source])
        for ci, i in enumerate(comps):
            src_paths = alg.corner(i, a.source)
            tgt_paths = alg.corner(i, a.target)
            tgt_pos = {b: r for r, b in enumerate(tgt_paths)}
            off_s, _ = offsets[ci][a.source]
            off_t, _ = offsets[ci][a.target]
            for col, bidx in enumerate(src_paths):
                prod = alg.mult_basis(bidx, alg.arrow_elem_index[k])
                for b in np.nonzero(prod)[0]:
                    block[off_t + tgt_pos[int(b)], off_s + col] = prod[b]
        mats.append(block)
    return Module(alg, dims, mats), offsets


def inj_module(alg: PathBasis, vertices: Sequence[int]) -> tuple[Module, list[list[tuple[int, int]]]]:
    """Direct sum of the injectives D(Lambda e_v); blocks are dual corner bases."""
    comps = list(vertices)
    dims = [0] * alg.n
    offsets: list[list[tuple[int, int]]] = []
    for i in comps:
        row = []
        for w in range(alg.n):
            size = len(alg.corner(w, i))
            row.append((dims[w], size))
            dims[w] += size
        offsets.append(row)
    mats = []
    for k, a in enumerate(alg.quiver.arrows):
        block = linalg.zeros(dims[a.target], dims[a.source])
        for ci, i in enumerate(comps):
            # action is the transpose of left multiplication by the arrow:
            # corner(target, i) -> corner(source, i)
            src_paths = alg.corner(a.source, i)
            tgt_paths = alg.corner(a.target, i)
            src_pos = {b: r for r, b in enumerate(src_paths)}
            lmult = linalg.zeros(len(src_paths), len(tgt_paths))
            for col, bidx in enumerate(tgt_paths):
                prod = alg.mult_basis(alg.arrow_elem_index[k], bidx)
                for b in np.nonzero(prod)[0]:
                    lmult[src_pos[int(b)], col] = prod[b]
            off_s, _ = offsets[ci][a.source]
            off_t, _ = offsets[ci][a.target]
            block[off_t:off_t + len(tgt_paths), off_s:off_s + len(src_paths)] = lmult.T
        mats.append(block)
    return Module(alg, dims, mats), offsets


def standard_module(alg: PathBasis, kind: str, vertex: int) -> Module:
    """The simple, indecomposable projective or indecomposable injective at a vertex."""
    if not (0 <= vertex < alg.n):
        raise AlgebraError(f"unknown vertex index: {vertex}")
    if kind == "simple":
        dims = [1 if v == vertex else 0 for v in range(alg.n)]
        mats = [linalg.zeros(dims[a.target], dims[a.source]) for a in alg.quiver.arrows]
        return Module(alg, dims, mats)
    if kind == "projective":
        return proj_module(alg, [vertex])[0]
    if kind == "injective":
        return inj_module(alg, [vertex])[0]
    raise AlgebraError(f"unknown standard module kind: {kind}")


def dualize(m: Module, to_alg: PathBasis) -> Module:
    """k-dual as a module over the opposite algebra (transpose all matrices)."""
    mats = [m.mats[k].T for k in range(len(m.alg.quiver.arrows))]
    return Module(to_alg, m.dims, mats)


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------

def hom_space(m: Module, n: Module) -> list[Morphism]:
    """Basis of Hom(m, n), solved exactly from the intertwiner equations."""
    alg = m.alg
    p = alg.p
    key = ("hom", id(n))
    cached = m._cache.get(key)
    if cached is not None and cached[0] is n:
        return cached[1]
    sizes = [n.dims[v] * m.dims[v] for v in range(alg.n)]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offs[-1])
    rows = []
    for k, a in enumerate(alg.quiver.arrows):
        s, t = a.source, a.target
        r = n.dims[t] * m.dims[s]
        if r == 0:
            continue
        row = linalg.zeros(r, total)
        # n.mats[k] @ F_s  contributes  kron(N_a, I_{m_s}) on vec(F_s)
        row[:, offs[s]:offs[s + 1]] = linalg.kron(n.mats[k], linalg.eye(m.dims[s]), p)
        # F_t @ m.mats[k]  contributes  kron(I_{n_t}, M_a^T) on vec(F_t)
        row[:, offs[t]:offs[t + 1]] = (row[:, offs[t]:offs[t + 1]]
                                       - linalg.kron(linalg.eye(n.dims[t]), m.mats[k].T, p)) % p
        rows.append(row)
    system = np.concatenate(rows, axis=0) if rows else linalg.zeros(0, total)
    basis = linalg.nullspace(system, p)
    out = []
    for j in range(basis.shape[1]):
        mats = [basis[offs[v]:offs[v + 1], j].reshape(n.dims[v], m.dims[v])
                for v in range(alg.n)]
        out.append(Morphism(m, n, mats))
    m._cache[key] = (n, out)
    return out


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_space(m, n))


def morphism_from_coeffs(basis: Sequence[Morphism], coeffs: Sequence[int],
                         source: Module, target: Module) -> Morphism:
    p = source.alg.p
    mats = [linalg.zeros(target.dims[v], source.dims[v]) for v in range(source.alg.n)]
    for c, f in zip(coeffs, basis):
        if c % p == 0:
            continue
        mats = [(acc + c * fm) % p for acc, fm in zip(mats, f.mats)]
    return Morphism(source, target, mats)


# ---------------------------------------------------------------------------
# Submodules, quotients, kernels, cokernels
# ---------------------------------------------------------------------------

def restrict(m: Module, inclusions: Sequence[np.ndarray]) -> tuple[Module, Morphism]:
    """Submodule spanned per vertex by the columns of ``inclusions``.

    The spans must be arrow-stable; the arrow action is re-solved in the
    subspace coordinates.
    """
    alg = m.alg
    p = alg.p
    dims = [inc.shape[1] for inc in inclusions]
    mats = []
    for k, a in enumerate(alg.quiver.arrows):
        img = linalg.matmul(m.mats[k], inclusions[a.source], p)
        sol = linalg.solve(inclusions[a.target], img, p)
        if sol is None:
            raise AlgebraError("subspaces are not stable under the arrow action")
        mats.append(sol.reshape(dims[a.target], dims[a.source]))
    sub = Module(alg, dims, mats)
    return sub, Morphism(sub, m, list(inclusions))


def quotient(m: Module, inclusions: Sequence[np.ndarray]) -> tuple[Module, Morphism]:
    """Quotient by an arrow-stable family of subspaces, with the projection map."""
    alg = m.alg
    p = alg.p
    projs = []
    sections = []
    dims = []
    for v in range(alg.n):
        inc = inclusions[v]
        d = m.dims[v]
        r, pivots = linalg.rref(inc.T, p)
        free = [c for c in range(d) if c not in pivots]
        # basis of m_v: subspace basis columns then unit vectors on free coords
        basis_mat = linalg.zeros(d, d)
        basis_mat[:, :r.shape[0]] = r.T
        for j, c in enumerate(free):
            basis_mat[c, r.shape[0] + j] = 1
        binv = linalg.inverse(basis_mat, p)
        if binv is None:
            raise AlgebraError("inclusion columns are dependent")
        projs.append(binv[r.shape[0]:, :])
        sec = linalg.zeros(d, len(free))
        for j, c in enumerate(free):
            sec[c, j] = 1
        sections.append(sec)
        dims.append(len(free))
    mats = []
    for k, a in enumerate(alg.quiver.arrows):
        mat = linalg.matmul(projs[a.target], linalg.matmul(m.mats[k], sections[a.source], p), p)
        mats.append(mat)
    q = Module(alg, dims, mats)
    return q, Morphism(m, q, projs)


def kernel_module(f: Morphism) -> tuple[Module, Morphism]:
    p = f.source.alg.p
    incs = [linalg.nullspace(f.mats[v], p) for v in range(f.source.alg.n)]
    return restrict(f.source, incs)


def image_inclusions(f: Morphism) -> list[np.ndarray]:
    p = f.source.alg.p
    return [linalg.column_space_basis(f.mats[v], p) for v in range(f.source.alg.n)]


def cokernel_module(f: Morphism) -> tuple[Module, Morphism]:
    return quotient(f.target, image_inclusions(f))


# ---------------------------------------------------------------------------
# Radical, top, projective covers, presentations
# ---------------------------------------------------------------------------

def radical_inclusions(m: Module) -> list[np.ndarray]:
    p = m.alg.p
    incs = []
    for v in range(m.alg.n):
        cols = [m.mats[k] for k, a in enumerate(m.alg.quiver.arrows) if a.target == v]
        if cols:
            stacked = np.concatenate(cols, axis=1)
            incs.append(linalg.column_space_basis(stacked, p))
        else:
            incs.append(linalg.zeros(m.dims[v], 0))
    return incs


def top_and_radical(m: Module) -> tuple[list[tuple[int, int]], Module]:
    """Multiplicities of simples in the top, and rad M as a module."""
    incs = radical_inclusions(m)
    rad, _ = restrict(m, incs)
    tops = [(v, m.dims[v] - rad.dims[v]) for v in range(m.alg.n)
            if m.dims[v] - rad.dims[v] > 0]
    return tops, rad


def radical_filtration(m: Module) -> list[DimVector]:
    """Dimension vectors of M, rad M, rad^2 M, ... down to zero (exclusive)."""
    key = "radfilt"
    if key in m._cache:
        return m._cache[key]
    layers = []
    cur = m
    while not cur.is_zero:
        layers.append(cur.dims)
        cur = restrict(cur, radical_inclusions(cur))[0]
        if len(layers) > m.total_dim + 1:
            raise AlgebraError("radical filtration does not terminate")
    m._cache[key] = layers
    return layers


def module_label(m: Module) -> str:
    """Canonical human-readable name.

    Uniserial modules get the familiar layered notation (top/.../socle by
    vertex label); everything else is named by its radical filtration.
    """
    if m.is_zero:
        return "0"
    layers = radical_filtration(m)
    labels = m.alg.quiver.vertices
    layer_tops = []
    uniserial = True
    for i, layer in enumerate(layers):
        nxt = layers[i + 1] if i + 1 < len(layers) else (0,) * m.alg.n
        diff = [a - b for a, b in zip(layer, nxt)]
        if sum(diff) == 1:
            layer_tops.append(labels[diff.index(1)])
        else:
            uniserial = False
            break
    if uniserial:
        return "/".join(layer_tops)
    return "m" + ";".join(",".join(str(d) for d in layer) for layer in layers)


def projective_cover(m: Module) -> tuple[list[int], Morphism]:
    """Projective cover P -> M built from lifts of a basis of the top."""
    alg = m.alg
    p = alg.p
    rad_incs = radical_inclusions(m)
    comp_vertices: list[int] = []
    lifts: list[tuple[int, np.ndarray]] = []
    for v in range(alg.n):
        r, pivots = linalg.rref(rad_incs[v].T, p)
        free = [c for c in range(m.dims[v]) if c not in pivots]
        for c in free:
            vec = linalg.zeros(m.dims[v], 1)[:, 0]
            vec[c] = 1
            comp_vertices.append(v)
            lifts.append((v, vec))
    proj, offsets = proj_module(alg, comp_vertices)
    mats = [linalg.zeros(m.dims[w], proj.dims[w]) for w in range(alg.n)]
    for ci, (v, g) in enumerate(lifts):
        for w in range(alg.n):
            off, size = offsets[ci][w]
            for col, bidx in enumerate(alg.corner(v, w)):
                path = alg.basis_paths[bidx]
                _, img = path_action(m, v, g, path.arrows)
                mats[w][:, off + col] = img
    cover = Morphism(proj, m, mats)
    if cover.rank() != m.total_dim:
        raise AlgebraError("projective cover construction failed to surject")
    return comp_vertices, cover


def presentation_data(m: Module) -> tuple[list[int], list[int], list[list[np.ndarray]]]:
    """Minimal projective presentation P1 -> P0 -> M -> 0.

    Returns the projective vertex lists of P1 and P0 and the differential as a
    matrix of algebra elements, entry (r, c) in e_{j_r} Lambda e_{i_c}.
    """
    if m.is_zero:
        return [], [], []
    alg = m.alg
    p0_verts, cover = projective_cover(m)
    ker, inc = kernel_module(cover)
    if ker.is_zero:
        return [], p0_verts, [[] for _ in p0_verts]
    p1_verts, kcover = projective_cover(ker)
    diff = inc.compose(kcover)  # P1 -> P0
    _, offs0 = proj_module(alg, p0_verts)
    _, offs1 = proj_module(alg, p1_verts)
    elems: list[list[np.ndarray]] = []
    for r, j in enumerate(p0_verts):
        row = []
        for c, i in enumerate(p1_verts):
            # the morphism component P_i -> P_j is determined by the image of e_i
            off1, _ = offs1[c][i]
            col_idx = off1 + alg.corner(i, i).index(alg.e[i])
            img = diff.mats[i][:, col_idx]
            w = alg.zero()
            off0, size0 = offs0[r][i]
            for t, bidx in enumerate(alg.corner(j, i)):
                w[bidx] = img[off0 + t]
            row.append(w)
        elems.append(row)
    return p1_verts, p0_verts, elems


def morphism_between_projectives(alg: PathBasis, src_verts: Sequence[int],
                                 tgt_verts: Sequence[int],
                                 elems: Sequence[Sequence[np.ndarray]]) -> Morphism:
    """Realize a matrix of corner elements as a map of projective modules."""
    src, offs_s = proj_module(alg, src_verts)
    tgt, offs_t = proj_module(alg, tgt_verts)
    mats = [linalg.zeros(tgt.dims[v], src.dims[v]) for v in range(alg.n)]
    for r, j in enumerate(tgt_verts):
        for c, i in enumerate(src_verts):
            w = elems[r][c]
            if not w.any():
                continue
            for v in range(alg.n):
                spaths = alg.corner(i, v)
                tpaths = alg.corner(j, v)
                tpos = {b: t for t, b in enumerate(tpaths)}
                off_s, _ = offs_s[c][v]
                off_t, _ = offs_t[r][v]
                for col, bidx in enumerate(spaths):
                    prod = alg.mult(w, _unit_elem(alg, bidx))
                    for b in np.nonzero(prod)[0]:
                        mats[v][off_t + tpos[int(b)], off_s + col] = prod[b]
    return Morphism(src, tgt, mats)


def morphism_between_injectives(alg: PathBasis, src_verts: Sequence[int],
                                tgt_verts: Sequence[int],
                                elems: Sequence[Sequence[np.ndarray]]) -> Morphism:
    """Nakayama transport: realize corner elements as a map of injectives.

    The element w in e_j Lambda e_i, viewed as P_i -> P_j, becomes the map
    I_i -> I_j dual to right multiplication by w.
    """
    src, offs_s = inj_module(alg, src_verts)
    tgt, offs_t = inj_module(alg, tgt_verts)
    mats = [linalg.zeros(tgt.dims[v], src.dims[v]) for v in range(alg.n)]
    for r, j in enumerate(tgt_verts):
        for c, i in enumerate(src_verts):
            w = elems[r][c]
            if not w.any():
                continue
            for v in range(alg.n):
                spaths = alg.corner(v, i)   # dual basis of (I_i)_v
                tpaths = alg.corner(v, j)   # dual basis of (I_j)_v
                spos = {b: t for t, b in enumerate(spaths)}
                rmult = linalg.zeros(len(spaths), len(tpaths))
                for col, bidx in enumerate(tpaths):
                    prod = alg.mult(_unit_elem(alg, bidx), w)
                    for b in np.nonzero(prod)[0]:
                        rmult[spos[int(b)], col] = prod[b]
                off_s, _ = offs_s[c][v]
                off_t, _ = offs_t[r][v]
                mats[v][off_t:off_t + len(tpaths), off_s:off_s + len(spaths)] = rmult.T
    return Morphism(src, tgt, mats)


def _unit_elem(alg: PathBasis, basis_idx: int) -> np.ndarray:
    u = alg.zero()
    u[basis_idx] = 1
    return u


# ---------------------------------------------------------------------------
# Auslander-Reiten translation
# ---------------------------------------------------------------------------

def tau(m: Module) -> Module:
    """D Tr through the opposite algebra; projective summands die."""
    alg = m.alg
    if m.is_zero:
        return zero_module(alg)
    p1, p0, elems = presentation_data(m)
    if not p1:
        return zero_module(alg)
    op = alg.opposite()
    op_elems = [[alg.transport_op(elems[r][c]) for r in range(len(p0))]
                for c in range(len(p1))]
    op_diff = morphism_between_projectives(op, p0, p1, op_elems)
    trans, _ = cokernel_module(op_diff)
    return dualize(trans, alg)


def is_tau_rigid(m: Module) -> bool:
    return hom_dim(m, tau(m)) == 0


# ---------------------------------------------------------------------------
# Decomposition and isomorphism
# ---------------------------------------------------------------------------

def _stable_power(f_mats: Sequence[np.ndarray], total: int, p: int) -> list[np.ndarray]:
    mats = list(f_mats)
    e = 1
    while e < max(total, 1):
        mats = [linalg.matmul(a, a, p) for a in mats]
        e *= 2
    return mats


def _fitting_split(m: Module, phi_mats: Sequence[np.ndarray]) -> Optional[tuple[Module, Module]]:
    p = m.alg.p
    power = _stable_power(phi_mats, m.total_dim, p)
    r = sum(linalg.rank(mat, p) for mat in power)
    if r == 0 or r == m.total_dim:
        return None
    ker_incs = [linalg.nullspace(mat, p) for mat in power]
    img_incs = [linalg.column_space_basis(mat, p) for mat in power]
    ker = restrict(m, ker_incs)[0]
    img = restrict(m, img_incs)[0]
    return ker, img


def _endo_candidates(end: list[Morphism], p: int):
    """Fitting candidates: basis, pairwise sums, then the whole algebra."""
    for f in end:
        yield f.mats
    for f, g in itertools.combinations(end, 2):
        yield [(a + b) % p for a, b in zip(f.mats, g.mats)]
    e = len(end)
    if p ** e > _END_SEARCH_BOUND:
        raise ResourceGuard("End ring too large to search")
    for coeffs in itertools.product(range(p), repeat=e):
        if sum(coeffs) == 0:
            continue
        mats = None
        for c, f in zip(coeffs, end):
            if c == 0:
                continue
            if mats is None:
                mats = [(c * a) % p for a in f.mats]
            else:
                mats = [(acc + c * a) % p for acc, a in zip(mats, f.mats)]
        yield mats


def is_indecomposable(m: Module) -> bool:
    """End(M) local, certified by exhausting Fitting decompositions."""
    if m.is_zero:
        return False
    end = hom_space(m, m)
    if len(end) == 1:
        return True
    for mats in _endo_candidates(end, m.alg.p):
        if _fitting_split(m, mats) is not None:
            return False
    return True


def decompose(m: Module) -> list[tuple[Module, int]]:
    """Indecomposable summands with multiplicities (Krull-Schmidt)."""
    if m.is_zero:
        return []
    pieces: list[Module] = []
    stack = [m]
    while stack:
        cur = stack.pop()
        end = hom_space(cur, cur)
        split = None
        if len(end) > 1:
            for mats in _endo_candidates(end, cur.alg.p):
                split = _fitting_split(cur, mats)
                if split is not None:
                    break
        if split is None:
            pieces.append(cur)
        else:
            stack.extend(split)
    groups: list[tuple[Module, int]] = []
    for piece in sorted(pieces, key=lambda x: (x.total_dim, x.dims)):
        for i, (rep, mult) in enumerate(groups):
            if is_isomorphic(rep, piece):
                groups[i] = (rep, mult + 1)
                break
        else:
            groups.append((piece, 1))
    return groups


def is_isomorphic(m: Module, n: Module) -> bool:
    if m.dims != n.dims:
        return False
    if m.is_zero:
        return True
    if radical_filtration(m) != radical_filtration(n):
        return False
    homs = hom_space(m, n)
    if not homs:
        return False
    p = m.alg.p
    if p ** len(homs) <= _ISO_SEARCH_BOUND:
        for coeffs in itertools.product(range(p), repeat=len(homs)):
            if sum(coeffs) == 0:
                continue
            f = morphism_from_coeffs(homs, coeffs, m, n)
            if all(linalg.rank(mat, p) == m.dims[v] for v, mat in enumerate(f.mats)):
                return True
        return False
    # large Hom space: compare Krull-Schmidt decompositions piecewise
    dm, dn = decompose(m), decompose(n)
    if sorted(mult for _, mult in dm) != sorted(mult for _, mult in dn):
        return False
    if len(dm) == 1 and len(dn) == 1 and dm[0][0].dims == m.dims:
        raise ResourceGuard("Hom space too large")
    used = [False] * len(dn)
    for piece, mult in dm:
        for j, (other, mult2) in enumerate(dn):
            if not used[j] and mult == mult2 and is_isomorphic(piece, other):
                used[j] = True
                break
        else:
            return False
    return True


def is_support_tau_tilting(m: Module) -> bool:
    """tau-rigid with as many distinct summands as support vertices."""
    if m.is_zero:
        return True
    if not is_tau_rigid(m):
        return False
    summands = decompose(m)
    return len(summands) == len(m.support())


# ---------------------------------------------------------------------------
# Fac / Sub membership
# ---------------------------------------------------------------------------

def fac_membership(m: Module, n: Module) -> bool:
    """n in Fac m: the evaluation Hom(m,n) (x) m -> n is surjective."""
    if n.is_zero:
        return True
    if m.is_zero:
        return False
    homs = hom_space(m, n)
    p = m.alg.p
    for v in range(m.alg.n):
        if n.dims[v] == 0:
            continue
        cols = [f.mats[v] for f in homs]
        stacked = np.concatenate(cols, axis=1) if cols else linalg.zeros(n.dims[v], 0)
        if linalg.rank(stacked, p) != n.dims[v]:
            return False
    return True


def sub_membership(m: Module, n: Module) -> bool:
    """n in Sub m: the joint kernel of all maps n -> m vanishes."""
    if n.is_zero:
        return True
    if m.is_zero:
        return False
    homs = hom_space(n, m)
    p = m.alg.p
    for v in range(m.alg.n):
        if n.dims[v] == 0:
            continue
        rows = [f.mats[v] for f in homs]
        stacked = np.concatenate(rows, axis=0) if rows else linalg.zeros(0, n.dims[v])
        if linalg.nullspace(stacked, p).shape[1] != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Submodule dimension vectors
# ---------------------------------------------------------------------------

def submodule_dim_vectors(m: Module, dim_guard: int = _SUBMODULE_DIM_GUARD) -> set[DimVector]:
    """Exact set of dimension vectors of submodules.

    Every submodule is a sum of cyclic ones, so we close each vector under
    the arrow action and then close the resulting family under sums.
    """
    key = ("subdims", dim_guard)
    if key in m._cache:
        return m._cache[key]
    if m.total_dim > dim_guard:
        raise ResourceGuard("module too large for submodule enumeration")
    alg = m.alg
    p = alg.p
    d = m.total_dim
    offs = np.concatenate([[0], np.cumsum(m.dims)])

    def canonical(spans: list[np.ndarray]) -> tuple[bytes, tuple[np.ndarray, ...], DimVector]:
        reduced = []
        dims = []
        keyparts = []
        for v in range(alg.n):
            r, _ = linalg.rref(spans[v].T, p) if spans[v].size else (linalg.zeros(0, m.dims[v]), [])
            reduced.append(r.T)
            dims.append(r.shape[0])
            keyparts.append(linalg.row_space_key(spans[v].T if spans[v].size else linalg.zeros(0, m.dims[v]), p))
        return b"|".join(keyparts), tuple(reduced), tuple(dims)

    def close_under_arrows(seed: list[np.ndarray]) -> list[np.ndarray]:
        spans = [s.copy() for s in seed]
        changed = True
        while changed:
            changed = False
            for k, a in enumerate(alg.quiver.arrows):
                if spans[a.source].shape[1] == 0:
                    continue
                imgs = linalg.matmul(m.mats[k], spans[a.source], p)
                combined = np.concatenate([spans[a.target], imgs], axis=1)
                newbasis = linalg.column_space_basis(combined, p)
                if newbasis.shape[1] != spans[a.target].shape[1]:
                    spans[a.target] = newbasis
                    changed = True
        return spans

    found: dict[bytes, tuple[tuple[np.ndarray, ...], DimVector]] = {}
    zero_spans = [linalg.zeros(m.dims[v], 0) for v in range(alg.n)]
    k0, r0, d0 = canonical(zero_spans)
    found[k0] = (r0, d0)
    for coeffs in itertools.product(range(p), repeat=d):
        if sum(coeffs) == 0:
            continue
        vec = np.array(coeffs, dtype=np.int64)
        seed = []
        for v in range(alg.n):
            comp = vec[offs[v]:offs[v + 1]]
            seed.append(comp.reshape(-1, 1) if comp.any() else linalg.zeros(m.dims[v], 0))
        spans = close_under_arrows(seed)
        kk, rr, dd = canonical(spans)
        found.setdefault(kk, (rr, dd))
        if len(found) > _SUBMODULE_COUNT_GUARD:
            raise ResourceGuard("module too large for submodule enumeration")
    # close under sums
    frontier = list(found.keys())
    while frontier:
        fresh = []
        items = list(found.items())
        for kk in frontier:
            rr, _ = found[kk]
            for kk2, (rr2, _) in items:
                spans = [np.concatenate([rr[v], rr2[v]], axis=1) for v in range(alg.n)]
                k3, r3, d3 = canonical(spans)
                if k3 not in found:
                    found[k3] = (r3, d3)
                    fresh.append(k3)
                    if len(found) > _SUBMODULE_COUNT_GUARD:
                        raise ResourceGuard("module too large for submodule enumeration")
        frontier = fresh
    result = {dd for _, dd in found.values()}
    m._cache[key] = result
    return result


# ---------------------------------------------------------------------------
# Enumeration of indecomposables
# ---------------------------------------------------------------------------

def enumerate_indecomposables(alg: PathBasis, dim_bound: Optional[int] = None,
                              matrix_guard: int = _MATRIX_ENUM_GUARD) -> list[Module]:
    """All indecomposables of total dimension <= dim_bound, up to isomorphism.

    Brute force: every dimension vector, every arrow-matrix tuple satisfying
    the relations, filtered by indecomposability and deduplicated by
    isomorphism.  Deterministic output order.
    """
    if dim_bound is None:
        dim_bound = alg.n
    p = alg.p
    arrows = alg.quiver.arrows
    rels = [(r.endpoints(alg.quiver), r.terms) for r in alg.presentation.relations]
    out: list[Module] = []
    buckets: dict[tuple, list[Module]] = {}
    for dims in sorted(itertools.product(range(dim_bound + 1), repeat=alg.n)):
        total = sum(dims)
        if total == 0 or total > dim_bound:
            continue
        entries = [(k, dims[a.target], dims[a.source]) for k, a in enumerate(arrows)]
        cells = sum(r * c for _, r, c in entries)
        if p ** cells > matrix_guard:
            raise ResourceGuard(
                f"dimension vector {dims}: {p}^{cells} matrix tuples exceed the enumeration guard")
        for assignment in itertools.product(range(p), repeat=cells):
            mats = []
            pos = 0
            for k, r, c in entries:
                mats.append(np.array(assignment[pos:pos + r * c], dtype=np.int64).reshape(r, c))
                pos += r * c
            cand = Module(alg, dims, mats)
            ok = True
            for (src, tgt), terms in rels:
                acc = linalg.zeros(dims[tgt], dims[src])
                for coeff, path in terms:
                    acc = (acc + coeff * _path_matrix(cand, src, path)) % p
                if acc.any():
                    ok = False
                    break
            if not ok:
                continue
            if not is_indecomposable(cand):
                continue
            sig = (cand.dims, tuple(radical_filtration(cand)))
            bucket = buckets.setdefault(sig, [])
            if any(is_isomorphic(rep, cand) for rep in bucket):
                continue
            bucket.append(cand)
            out.append(cand)
    out.sort(key=lambda m: (m.total_dim, m.dims, tuple(radical_filtration(m))))
    return out


# ---------------------------------------------------------------------------
# JSON exchange format
# ---------------------------------------------------------------------------

def module_to_json(m: Module) -> dict:
    return {
        "dims": list(m.dims),
        "arrows": {a.name: [[int(x) for x in row] for row in m.mats[k]]
                   for k, a in enumerate(m.alg.quiver.arrows)},
    }


def module_from_json(alg: PathBasis, data: dict) -> Module:
    dims = [int(d) for d in data["dims"]]
    if len(dims) != alg.n or any(d < 0 for d in dims):
        raise AlgebraError("bad dims in module file")
    mats = []
    for k, a in enumerate(alg.quiver.arrows):
        raw = data.get("arrows", {}).get(a.name)
        if raw is None:
            mats.append(linalg.zeros(dims[a.target], dims[a.source]))
        else:
            mat = np.array(raw, dtype=np.int64).reshape(dims[a.target], dims[a.source])
            mats.append(mat % alg.p)
    m = Module(alg, dims, mats)
    validate_module(m)
    return m
