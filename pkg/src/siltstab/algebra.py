"""Quiver-with-relations presentations and the path basis of the quotient algebra.

The algebra is presented by a finite quiver and an admissible ideal over a
prime field F_p.  Paths compose left to right: the path "ab" means arrow a
followed by arrow b, and modules are right modules, so an arrow a: i -> j
acts on a representation as a linear map M_i -> M_j.

The vertex order given in the input file fixes the ordering of all bases of
the Grothendieck groups used downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import linalg


class AlgebraError(ValueError):
    """Invalid presentation or a build-time validation failure."""


class ResourceGuard(RuntimeError):
    """An enumeration would exceed the configured desk-scale resource bounds."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise AlgebraError(f"non-prime characteristic: {self.p}")


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex labels")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow names")
        n = len(self.vertices)
        for a in self.arrows:
            if not (0 <= a.source < n and 0 <= a.target < n):
                raise AlgebraError(f"arrow {a.name} references unknown vertex")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex_index(self, label: str) -> int:
        try:
            return self.vertices.index(label)
        except ValueError:
            raise AlgebraError(f"unknown vertex: {label!r}") from None


@dataclass(frozen=True)
class Relation:
    """Linear combination of parallel paths of length >= 2 (admissible generator)."""

    terms: tuple[tuple[int, tuple[int, ...]], ...]  # (coefficient, arrow index path)

    def endpoints(self, quiver: Quiver) -> tuple[int, int]:
        ends = set()
        for coeff, path in self.terms:
            if len(path) < 2:
                raise AlgebraError("non-admissible relation: path of length < 2")
            src = quiver.arrows[path[0]].source
            tgt = quiver.arrows[path[-1]].target
            for a, b in zip(path, path[1:]):
                if quiver.arrows[a].target != quiver.arrows[b].source:
                    raise AlgebraError("relation path is not composable")
            ends.add((src, tgt))
        if not self.terms:
            raise AlgebraError("empty relation")
        if len(ends) != 1:
            raise AlgebraError("non-admissible relation: terms are not parallel paths")
        return next(iter(ends))


@dataclass(frozen=True)
class AlgebraPresentation:
    field: FieldSpec
    quiver: Quiver
    relations: tuple[Relation, ...]
    path_cap: int = 10

    def __post_init__(self):
        if self.path_cap < 1:
            raise AlgebraError("path_cap must be positive")
        for r in self.relations:
            r.endpoints(self.quiver)


def parse_algebra(text: str | dict) -> AlgebraPresentation:
    """Parse the JSON algebra definition format into a validated presentation."""
    if isinstance(text, str):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise AlgebraError(f"malformed algebra file: {e}") from None
    else:
        data = text
    if not isinstance(data, dict):
        raise AlgebraError("malformed algebra file: top level must be an object")
    try:
        fieldspec = FieldSpec(int(data["field"]["p"]))
        vertices = tuple(str(v) for v in data["vertices"])
    except (KeyError, TypeError) as e:
        raise AlgebraError(f"malformed algebra file: {e}") from None
    vidx = {v: i for i, v in enumerate(vertices)}
    arrows = []
    for a in data.get("arrows", []):
        try:
            name, src, tgt = str(a["name"]), str(a["from"]), str(a["to"])
        except (KeyError, TypeError) as e:
            raise AlgebraError(f"malformed arrow entry: {e}") from None
        if src not in vidx or tgt not in vidx:
            raise AlgebraError(f"arrow {name} references unknown vertex")
        arrows.append(Arrow(name, vidx[src], vidx[tgt]))
    quiver = Quiver(vertices, tuple(arrows))
    aidx = {a.name: i for i, a in enumerate(quiver.arrows)}
    relations = []
    for r in data.get("relations", []):
        terms = []
        for t in r.get("terms", []):
            coeff = int(t.get("coeff", 1)) % fieldspec.p
            try:
                path = tuple(aidx[str(x)] for x in t["path"])
            except KeyError as e:
                raise AlgebraError(f"relation references unknown arrow: {e}") from None
            if coeff:
                terms.append((coeff, path))
        if not terms:
            raise AlgebraError("relation with no nonzero terms")
        relations.append(Relation(tuple(terms)))
    cap = int(data.get("path_cap", 10))
    return AlgebraPresentation(fieldspec, quiver, tuple(relations), cap)


def load_algebra(path: str) -> AlgebraPresentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_algebra(fh.read())


# ---------------------------------------------------------------------------
# Path basis construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    source: int
    target: int
    arrows: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)


_MAX_PATHS = 200_000


class PathBasis:
    """The finite-dimensional quotient algebra with its residue-path basis.

    Elements are coefficient vectors over ``basis_paths``.  Multiplication is
    cached pairwise; all arithmetic is exact over F_p.  Instances are
    immutable after construction; internal caches only ever store recomputable
    values, so concurrent readers are safe.
    """

    def __init__(self, presentation: AlgebraPresentation, basis_paths: list[Path],
                 nf_rows: np.ndarray, nf_pivots: list[int], all_paths: list[Path]):
        self.presentation = presentation
        self.p = presentation.field.p
        self.quiver = presentation.quiver
        self.n = self.quiver.n
        self.basis_paths = basis_paths
        self.dim = len(basis_paths)
        self._all_paths = all_paths
        self._all_index = {pt: i for i, pt in enumerate(all_paths)}
        self._nf_rows = nf_rows          # rref of the ideal span, over all paths
        self._nf_pivots = nf_pivots
        self._basis_cols = [self._all_index[pt] for pt in basis_paths]
        self.e = [self.basis_index(Path(v, v, ())) for v in range(self.n)]
        self.arrow_elem_index = [
            self.basis_index(Path(a.source, a.target, (k,)))
            for k, a in enumerate(self.quiver.arrows)
        ]
        self._mult_cache: dict[tuple[int, int], Optional[np.ndarray]] = {}
        self._corner_cache: dict[tuple[int, int], list[int]] = {}
        self._opposite: Optional[PathBasis] = None

    # -- basic lookups ------------------------------------------------------

    def basis_index(self, path: Path) -> int:
        try:
            return self.basis_paths.index(path)
        except ValueError:
            raise AlgebraError(f"path not in residue basis: {path}") from None

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def unit(self) -> np.ndarray:
        u = self.zero()
        for i in self.e:
            u[i] = 1
        return u

    def idempotent(self, v: int) -> np.ndarray:
        u = self.zero()
        u[self.e[v]] = 1
        return u

    def arrow_elem(self, a: int) -> np.ndarray:
        u = self.zero()
        u[self.arrow_elem_index[a]] = 1
        return u

    def corner(self, j: int, i: int) -> list[int]:
        """Basis indices of e_j . Lambda . e_i (residue paths from j to i)."""
        key = (j, i)
        if key not in self._corner_cache:
            self._corner_cache[key] = [k for k, pt in enumerate(self.basis_paths)
                                       if pt.source == j and pt.target == i]
        return self._corner_cache[key]

    # -- normal form and multiplication --------------------------------------

    def _nf_of_all_path_vector(self, vec: np.ndarray) -> np.ndarray:
        """Reduce a vector over _all_paths modulo the ideal rows, restrict to basis."""
        v = vec.copy()
        p = self.p
        for row, piv in zip(self._nf_rows, self._nf_pivots):
            c = v[piv]
            if c:
                v = (v - c * row) % p
        out = self.zero()
        for k, col in enumerate(self._basis_cols):
            out[k] = v[col]
        return out

    def nf_path(self, source: int, arrows: Sequence[int]) -> np.ndarray:
        """Normal form of an arbitrary arrow word as an algebra element.

        Words longer than the path cap lie in the ideal and reduce to zero.
        """
        elem = self.idempotent(source)
        at = source
        for a in arrows:
            arr = self.quiver.arrows[a]
            if arr.source != at:
                raise AlgebraError("non-composable arrow word")
            elem = self.mult(elem, self.arrow_elem(a))
            at = arr.target
            if not elem.any():
                break
        return elem

    def mult_basis(self, i: int, j: int) -> np.ndarray:
        """Product of two basis paths as an element (cached)."""
        key = (i, j)
        cached = self._mult_cache.get(key)
        if cached is None:
            pi, pj = self.basis_paths[i], self.basis_paths[j]
            if pi.target != pj.source:
                cached = self.zero()
            else:
                arrows = pi.arrows + pj.arrows
                if len(arrows) > self.presentation.path_cap:
                    cached = self.zero()  # lies in the ideal: beyond the cap
                else:
                    full = Path(pi.source, pj.target, arrows)
                    vec = np.zeros(len(self._all_paths), dtype=np.int64)
                    vec[self._all_index[full]] = 1
                    cached = self._nf_of_all_path_vector(vec)
            self._mult_cache[key] = cached
        return cached

    def mult(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Bilinear product of two elements in basis coordinates."""
        out = self.zero()
        xi = np.nonzero(x)[0]
        yi = np.nonzero(y)[0]
        for i in xi:
            for j in yi:
                prod = self.mult_basis(int(i), int(j))
                if prod.any():
                    out = (out + int(x[i]) * int(y[j]) * prod) % self.p
        return out

    def scalar_part(self, x: np.ndarray, v: int) -> int:
        """Coefficient of the trivial path e_v in x."""
        return int(x[self.e[v]])

    def corner_elem_inverse(self, x: np.ndarray, v: int) -> np.ndarray:
        """Inverse of a unit in the local corner algebra e_v Lambda e_v.

        The radical part is nilpotent, so a geometric series terminates.
        """
        c = self.scalar_part(x, v)
        if c == 0:
            raise AlgebraError("corner element is not invertible")
        cinv = linalg.inv_scalar(c, self.p)
        # x = c (e_v - n) with n = -cinv * (x - c e_v) nilpotent
        n_elem = (-cinv * x) % self.p
        n_elem[self.e[v]] = 0
        ev = self.idempotent(v)
        total = ev.copy()
        power = ev.copy()
        for _ in range(self.dim):
            power = self.mult(power, n_elem)
            if not power.any():
                break
            total = (total + power) % self.p
        return (cinv * total) % self.p

    def check_associativity(self, limit: Optional[int] = None) -> bool:
        """Spot-check associativity on basis triples (all of them when small)."""
        d = self.dim
        triples = [(i, j, k) for i in range(d) for j in range(d) for k in range(d)]
        if limit is not None:
            triples = triples[:limit]
        for i, j, k in triples:
            x, y, z = (np.eye(d, dtype=np.int64)[t] for t in (i, j, k))
            left = self.mult(self.mult(x, y), z)
            right = self.mult(x, self.mult(y, z))
            if np.any((left - right) % self.p):
                return False
        return True

    # -- opposite algebra -----------------------------------------------------

    def opposite(self) -> "PathBasis":
        """The opposite algebra: arrows and relation paths reversed.

        Arrow k of the opposite quiver corresponds to arrow k here, with
        source and target swapped.
        """
        if self._opposite is None:
            q = self.quiver
            op_arrows = tuple(Arrow(a.name, a.target, a.source) for a in q.arrows)
            op_quiver = Quiver(q.vertices, op_arrows)
            op_rels = tuple(
                Relation(tuple((c, tuple(reversed(path))) for c, path in r.terms))
                for r in self.presentation.relations
            )
            op_pres = AlgebraPresentation(self.presentation.field, op_quiver,
                                          op_rels, self.presentation.path_cap)
            self._opposite = build_basis(op_pres)
        return self._opposite

    def transport_op(self, x: np.ndarray) -> np.ndarray:
        """Image of an element under the canonical anti-isomorphism to the opposite."""
        op = self.opposite()
        out = op.zero()
        for i in np.nonzero(x)[0]:
            pt = self.basis_paths[int(i)]
            rev = op.nf_path(pt.target, tuple(reversed(pt.arrows)))
            out = (out + int(x[i]) * rev) % op.p
        return out

    def format_elem(self, x: np.ndarray) -> str:
        terms = []
        names = [a.name for a in self.quiver.arrows]
        for i in np.nonzero(x)[0]:
            pt = self.basis_paths[int(i)]
            word = "".join(names[a] for a in pt.arrows) if pt.arrows else f"e_{self.quiver.vertices[pt.source]}"
            c = int(x[i])
            terms.append(word if c == 1 else f"{c}*{word}")
        return " + ".join(terms) if terms else "0"


def _enumerate_paths(quiver: Quiver, cap: int) -> list[Path]:
    paths: list[Path] = [Path(v, v, ()) for v in range(quiver.n)]
    frontier = list(paths)
    for _ in range(cap):
        nxt = []
        for pt in frontier:
            for k, a in enumerate(quiver.arrows):
                if a.source == pt.target:
                    nxt.append(Path(pt.source, a.target, pt.arrows + (k,)))
        paths.extend(nxt)
        if len(paths) > _MAX_PATHS:
            raise ResourceGuard(
                f"more than {_MAX_PATHS} paths below the path cap; "
                "the quiver is too large for this desk-scale tool")
        frontier = nxt
        if not frontier:
            break
    return paths


def build_basis(presentation: AlgebraPresentation) -> PathBasis:
    """Quotient the span of paths up to the cap by the relation ideal.

    Fails when some path of length ``path_cap`` survives the quotient, which
    signals either a cap that is too small or an ideal that does not make the
    algebra finite-dimensional.
    """
    quiver = presentation.quiver
    p = presentation.field.p
    cap = presentation.path_cap
    paths = _enumerate_paths(quiver, cap)
    # Longest paths first so that the residue basis prefers short paths.
    order = sorted(range(len(paths)), key=lambda i: (-paths[i].length, paths[i].arrows, paths[i].source))
    paths = [paths[i] for i in order]
    index = {pt: i for i, pt in enumerate(paths)}

    by_target: dict[int, list[Path]] = {}
    by_source: dict[int, list[Path]] = {}
    for pt in paths:
        by_target.setdefault(pt.target, []).append(pt)
        by_source.setdefault(pt.source, []).append(pt)

    gens = []
    for rel in presentation.relations:
        src, tgt = rel.endpoints(quiver)
        min_len = min(len(path) for _, path in rel.terms)
        for u in by_target.get(src, []):
            for v in by_source.get(tgt, []):
                if u.length + min_len + v.length > cap:
                    continue
                vec = np.zeros(len(paths), dtype=np.int64)
                hit = False
                for coeff, arrws in rel.terms:
                    total = u.length + len(arrws) + v.length
                    if total > cap:
                        continue  # the dropped term lies in the cap-length tail
                    full = Path(u.source, v.target, u.arrows + tuple(arrws) + v.arrows)
                    vec[index[full]] = (vec[index[full]] + coeff) % p
                    hit = True
                if hit and vec.any():
                    gens.append(vec)

    if gens:
        rows, pivots = linalg.rref(np.array(gens, dtype=np.int64), p)
    else:
        rows, pivots = np.zeros((0, len(paths)), dtype=np.int64), []

    pivot_set = set(pivots)
    basis_cols = [i for i in range(len(paths)) if i not in pivot_set]
    basis_paths = [paths[i] for i in basis_cols]

    for pt, i in index.items():
        if pt.length == cap and i not in pivot_set:
            raise AlgebraError(
                f"algebra not finite-dimensional within path_cap {cap}: "
                f"path of length {cap} from {quiver.vertices[pt.source]} survives")

    # Canonical basis order: short paths first, then arrow word, then source.
    basis_paths.sort(key=lambda pt: (pt.length, pt.arrows, pt.source))
    return PathBasis(presentation, basis_paths, rows, list(pivots), paths)


def multiply(basis: PathBasis, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product of two algebra elements given in basis coordinates."""
    return basis.mult(np.asarray(x, dtype=np.int64) % basis.p,
                      np.asarray(y, dtype=np.int64) % basis.p)
