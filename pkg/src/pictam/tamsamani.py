"""Truncated multi-simplicial sets and the Tamsamani-style validators.

Two representations cooperate here:

* `TruncatedMultiSimplicialSet` stores honest set-valued levels indexed by
  multi-indices, with structure maps for the generating simplex maps in each
  coordinate.  Everything quantified over "all s ≥ 2" is checked for s up to
  the truncation, and every verdict is to be read "up to the truncation".

* `CatSimplicialObject` stores a truncated simplicial object in finite
  categories (levels are `FinCategory`, structure maps are functors).  This is
  the shape produced by nerve-style constructions; validators on it avoid ever
  expanding the (potentially enormous) inner nerve levels.

The first coordinate of a multi-index is the outer compositional direction
(the one sliced by `slice_first`); the truncation functor `p` always eats the
innermost (last) coordinate.  Lower-dimensional objects embed by making the
last coordinate constant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .fincat import (
    FinCategory,
    FinFunctor,
    Ident,
    ValidationReport,
    compose_functors,
    identity_functor,
    is_equivalence,
    iso_classes,
    product_many,
    sort_idents,
    validate_functor,
)
from .shapes import DeltaMap, all_delta_maps, coface, codegeneracy, delta_id, delta_interval


class NonNerveError(Exception):
    """Raised when truncated data does not support the homotopy-category
    construction (a composable pair has no filler, or the quotient violates
    category laws)."""


class InternalConsistencyError(AssertionError):
    """A structural guarantee the constructions promise was violated; a bug signal."""


# ---------------------------------------------------------------------------
# set-valued multi-simplicial machinery
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class TruncatedMultiSimplicialSet:
    dimension: int
    truncation: int
    levels: dict  # multi-index tuple → tuple of element ids
    faces: dict  # (coord, multi-index, i) → dict
    degeneracies: dict  # (coord, multi-index, i) → dict

    def __post_init__(self):
        self.levels = {K: sort_idents(v) for K, v in self.levels.items()}
        self._act_cache: dict = {}

    def level(self, K: tuple) -> tuple:
        return self.levels[K]

    def all_indices(self) -> list:
        return sorted(self.levels.keys())

    def act(self, coord: int, alpha: DeltaMap, K: tuple) -> dict:
        """The function X(α) : X_K → X_{K'} induced in one coordinate, where
        K[coord] is the codomain rank of α and K' replaces it by the domain rank.
        Computed by peeling α into stored generating faces and degeneracies."""
        if K[coord] != alpha.codomain_rank:
            raise ValueError("level does not match the codomain of the simplex map")
        key = (coord, alpha.values, alpha.codomain_rank, K)
        if key in self._act_cache:
            return self._act_cache[key]
        m, k = alpha.domain_rank, alpha.codomain_rank
        if alpha.is_identity():
            out = {e: e for e in self.levels[K]}
        else:
            dup = next((j for j in range(m) if alpha(j) == alpha(j + 1)), None)
            if dup is not None:
                rest = DeltaMap(m - 1, k, alpha.values[:dup] + alpha.values[dup + 1 :])
                first = self.act(coord, rest, K)
                K1 = K[:coord] + (m - 1,) + K[coord + 1 :]
                s = self.degeneracies[(coord, K1, dup)]
                out = {e: s[v] for e, v in first.items()}
            else:
                missing = next(i for i in range(k + 1) if i not in alpha.values)
                d = self.faces[(coord, K, missing)]
                rest = DeltaMap(m, k - 1, tuple(v if v < missing else v - 1 for v in alpha.values))
                K1 = K[:coord] + (k - 1,) + K[coord + 1 :]
                second = self.act(coord, rest, K1)
                out = {e: second[d[e]] for e in self.levels[K]}
        self._act_cache[key] = out
        return out

    def slice_first(self, s: int) -> "TruncatedMultiSimplicialSet":
        """Fix the first coordinate at s, yielding an object of dimension n-1."""
        if self.dimension < 2:
            raise ValueError("slicing needs dimension at least 2")
        levels = {K[1:]: self.levels[K] for K in self.levels if K[0] == s}
        faces = {
            (c - 1, K[1:], i): m
            for (c, K, i), m in self.faces.items()
            if K[0] == s and c >= 1
        }
        degs = {
            (c - 1, K[1:], i): m
            for (c, K, i), m in self.degeneracies.items()
            if K[0] == s and c >= 1
        }
        return TruncatedMultiSimplicialSet(self.dimension - 1, self.truncation, levels, faces, degs)

    def base_point_embedding(self, K: tuple) -> dict:
        """For each element of the all-zeros level, its image in level K under
        the (unique) composite of degeneracies."""
        out = {e: e for e in self.levels[(0,) * self.dimension]}
        cur = (0,) * self.dimension
        for coord in range(self.dimension):
            collapse = DeltaMap(K[coord], 0, (0,) * (K[coord] + 1))
            step = self.act(coord, collapse, cur)
            out = {e: step[v] for e, v in out.items()}
            cur = cur[:coord] + (K[coord],) + cur[coord + 1 :]
        return out

    def is_discrete(self) -> bool:
        base = self.levels[(0,) * self.dimension]
        for K in self.levels:
            emb = self.base_point_embedding(K)
            if len(set(emb.values())) != len(base) or len(base) != len(self.levels[K]):
                return False
        return True


def msset_from_parts(dimension, truncation, levels, faces, degeneracies) -> TruncatedMultiSimplicialSet:
    return TruncatedMultiSimplicialSet(dimension, truncation, levels, faces, degeneracies)


def validate_structure(X: TruncatedMultiSimplicialSet) -> ValidationReport:
    """Exhaustively check that all expected levels and generator maps are
    present, land where they should, and satisfy the (co)simplicial identities
    and cross-coordinate commutation."""
    report = ValidationReport()
    n, N = X.dimension, X.truncation
    expected = [tuple(K) for K in itertools.product(range(N + 1), repeat=n)]
    for K in expected:
        if K not in X.levels:
            report.add("missing-level", (K,), "level absent")
    if not report.ok:
        return report
    for K in expected:
        for c in range(n):
            k = K[c]
            for i in range(k + 1):
                if k >= 1 and (c, K, i) not in X.faces:
                    report.add("missing-map", (c, K, i), "face map absent")
                if k <= N - 1 and (c, K, i) not in X.degeneracies:
                    report.add("missing-map", (c, K, i), "degeneracy map absent")
    if not report.ok:
        return report

    def check_map(m: dict, src: tuple, dst: tuple, tag: tuple):
        if set(m.keys()) != set(X.levels[src]):
            report.add("map-domain", tag, "map not total on its level")
            return False
        if not set(m.values()) <= set(X.levels[dst]):
            report.add("map-codomain", tag, "map value outside target level")
            return False
        return True

    for (c, K, i), m in X.faces.items():
        dst = K[:c] + (K[c] - 1,) + K[c + 1 :]
        check_map(m, K, dst, ("face", c, K, i))
    for (c, K, i), m in X.degeneracies.items():
        dst = K[:c] + (K[c] + 1,) + K[c + 1 :]
        check_map(m, K, dst, ("degeneracy", c, K, i))
    if not report.ok:
        return report

    def composite(maps: list, e):
        for m in maps:
            e = m[e]
        return e

    for K in expected:
        for c in range(n):
            k = K[c]
            Km1 = K[:c] + (k - 1,) + K[c + 1 :]
            Kp1 = K[:c] + (k + 1,) + K[c + 1 :]
            if k >= 2:
                for j in range(k + 1):
                    for i in range(j):
                        lhs = [X.faces[(c, K, j)], X.faces[(c, Km1, i)]]
                        rhs = [X.faces[(c, K, i)], X.faces[(c, Km1, j - 1)]]
                        for e in X.levels[K]:
                            if composite(lhs, e) != composite(rhs, e):
                                report.add("simplicial-identity", (c, K, i, j, e), "d_i d_j ≠ d_{j-1} d_i")
            if k <= N - 2:
                for j in range(k + 1):
                    for i in range(j + 1):
                        lhs = [X.degeneracies[(c, K, j)], X.degeneracies[(c, Kp1, i)]]
                        rhs = [X.degeneracies[(c, K, i)], X.degeneracies[(c, Kp1, j + 1)]]
                        for e in X.levels[K]:
                            if composite(lhs, e) != composite(rhs, e):
                                report.add("simplicial-identity", (c, K, i, j, e), "s_i s_j ≠ s_{j+1} s_i")
            if k <= N - 1:
                for j in range(k + 1):
                    for i in range(k + 2):
                        lhs = [X.degeneracies[(c, K, j)], X.faces[(c, Kp1, i)]]
                        if i in (j, j + 1):
                            for e in X.levels[K]:
                                if composite(lhs, e) != e:
                                    report.add("simplicial-identity", (c, K, i, j, e), "d s ≠ id")
                        elif i < j:
                            if k >= 1:
                                rhs = [X.faces[(c, K, i)], X.degeneracies[(c, Km1, j - 1)]]
                                for e in X.levels[K]:
                                    if composite(lhs, e) != composite(rhs, e):
                                        report.add("simplicial-identity", (c, K, i, j, e), "d_i s_j ≠ s_{j-1} d_i")
                        else:
                            if k >= 1:
                                rhs = [X.faces[(c, K, i - 1)], X.degeneracies[(c, Km1, j)]]
                                for e in X.levels[K]:
                                    if composite(lhs, e) != composite(rhs, e):
                                        report.add("simplicial-identity", (c, K, i, j, e), "d_i s_j ≠ s_j d_{i-1}")
            for c2 in range(c + 1, n):
                k2 = K[c2]
                maps_c = [("f", i) for i in range(k + 1) if k >= 1] + [
                    ("s", i) for i in range(k + 1) if k <= N - 1
                ]
                maps_c2 = [("f", i) for i in range(k2 + 1) if k2 >= 1] + [
                    ("s", i) for i in range(k2 + 1) if k2 <= N - 1
                ]
                for kind1, i1 in maps_c:
                    for kind2, i2 in maps_c2:
                        m1 = X.faces[(c, K, i1)] if kind1 == "f" else X.degeneracies[(c, K, i1)]
                        K_after1 = K[:c] + ((k - 1) if kind1 == "f" else (k + 1),) + K[c + 1 :]
                        m2after = (
                            X.faces[(c2, K_after1, i2)] if kind2 == "f" else X.degeneracies[(c2, K_after1, i2)]
                        )
                        m2 = X.faces[(c2, K, i2)] if kind2 == "f" else X.degeneracies[(c2, K, i2)]
                        K_after2 = K[:c2] + ((k2 - 1) if kind2 == "f" else (k2 + 1),) + K[c2 + 1 :]
                        m1after = (
                            X.faces[(c, K_after2, i1)] if kind1 == "f" else X.degeneracies[(c, K_after2, i1)]
                        )
                        for e in X.levels[K]:
                            if m2after[m1[e]] != m1after[m2[e]]:
                                report.add(
                                    "coordinate-commutation", (c, c2, K, i1, i2, e), "structure maps in different coordinates do not commute"
                                )
    return report


def nerve_msset(C: FinCategory, N: int) -> TruncatedMultiSimplicialSet:
    """Nerve of a finite category, truncated at N (dimension 1).

    A k-chain is the tuple (f_1, …, f_k) of composable morphisms, f_1 applied
    first; 0-chains are objects."""
    levels: dict = {(0,): tuple(C.objects)}
    chains: dict = {0: list(C.objects)}
    by_source: dict = {}
    for f in C.morphisms:
        by_source.setdefault(C.source[f], []).append(f)
    for k in range(1, N + 1):
        new = []
        if k == 1:
            new = [(f,) for f in C.morphisms]
        else:
            for chain in chains[k - 1]:
                last_target = C.target[chain[-1]]
                for f in by_source.get(last_target, ()):
                    new.append(chain + (f,))
        chains[k] = new
        levels[(k,)] = tuple(new)
    faces: dict = {}
    degs: dict = {}
    for k in range(1, N + 1):
        for i in range(k + 1):
            m = {}
            for chain in chains[k]:
                if k == 1:
                    f = chain[0]
                    m[chain] = C.target[f] if i == 0 else C.source[f]
                else:
                    if i == 0:
                        m[chain] = chain[1:]
                    elif i == k:
                        m[chain] = chain[:-1]
                    else:
                        merged = C.compose[(chain[i], chain[i - 1])]
                        m[chain] = chain[: i - 1] + (merged,) + chain[i + 1 :]
            faces[(0, (k,), i)] = m
    for k in range(0, N):
        for i in range(k + 1):
            m = {}
            for chain in chains[k]:
                if k == 0:
                    m[chain] = (C.identity[chain],)
                else:
                    ident = C.identity[C.source[chain[i]]] if i < k else C.identity[C.target[chain[-1]]]
                    m[chain] = chain[:i] + (ident,) + chain[i:]
            degs[(0, (k,), i)] = m
    return TruncatedMultiSimplicialSet(1, N, levels, faces, degs)


def discrete_msset(dimension: int, N: int, elements) -> TruncatedMultiSimplicialSet:
    elements = sort_idents(elements)
    levels = {tuple(K): elements for K in itertools.product(range(N + 1), repeat=dimension)}
    ident = {e: e for e in elements}
    faces = {}
    degs = {}
    for K in levels:
        for c in range(dimension):
            for i in range(K[c] + 1):
                if K[c] >= 1:
                    faces[(c, K, i)] = dict(ident)
                if K[c] <= N - 1:
                    degs[(c, K, i)] = dict(ident)
    return TruncatedMultiSimplicialSet(dimension, N, levels, faces, degs)


def embed_const_last(X: TruncatedMultiSimplicialSet) -> TruncatedMultiSimplicialSet:
    """View an n-fold object as an (n+1)-fold one, constant (discrete) in the
    new innermost coordinate."""
    n, N = X.dimension, X.truncation
    levels = {}
    faces = {}
    degs = {}
    for K in X.levels:
        for kn in range(N + 1):
            levels[K + (kn,)] = X.levels[K]
    for (c, K, i), m in X.faces.items():
        for kn in range(N + 1):
            faces[(c, K + (kn,), i)] = m
    for (c, K, i), m in X.degeneracies.items():
        for kn in range(N + 1):
            degs[(c, K + (kn,), i)] = m
    for K in X.levels:
        for kn in range(N + 1):
            ident = {e: e for e in X.levels[K]}
            for i in range(kn + 1):
                if kn >= 1:
                    faces[(n, K + (kn,), i)] = dict(ident)
                if kn <= N - 1:
                    degs[(n, K + (kn,), i)] = dict(ident)
    return TruncatedMultiSimplicialSet(n + 1, N, levels, faces, degs)


def msset_product(X: TruncatedMultiSimplicialSet, Y: TruncatedMultiSimplicialSet) -> TruncatedMultiSimplicialSet:
    if X.dimension != Y.dimension or X.truncation != Y.truncation:
        raise ValueError("product needs equal dimension and truncation")
    levels = {
        K: tuple((a, b) for a in X.levels[K] for b in Y.levels[K])
        for K in X.levels
    }

    def pair_map(mx, my):
        return {(a, b): (mx[a], my[b]) for a in mx for b in my}

    faces = {key: pair_map(X.faces[key], Y.faces[key]) for key in X.faces}
    degs = {key: pair_map(X.degeneracies[key], Y.degeneracies[key]) for key in X.degeneracies}
    return TruncatedMultiSimplicialSet(X.dimension, X.truncation, levels, faces, degs)


@dataclass(eq=False)
class MultiSimplicialMap:
    domain: TruncatedMultiSimplicialSet
    codomain: TruncatedMultiSimplicialSet
    components: dict  # multi-index → dict


def validate_msmap(f: MultiSimplicialMap) -> ValidationReport:
    report = ValidationReport()
    X, Y = f.domain, f.codomain
    if X.dimension != Y.dimension or X.truncation != Y.truncation:
        report.add("shape", (), "domain and codomain have different shapes")
        return report
    for K in X.levels:
        comp = f.components.get(K)
        if comp is None or set(comp.keys()) != set(X.levels[K]) or not set(comp.values()) <= set(Y.levels[K]):
            report.add("component", (K,), "level component missing or not well formed")
    if not report.ok:
        return report
    for (c, K, i), m in X.faces.items():
        dst = K[:c] + (K[c] - 1,) + K[c + 1 :]
        for e in X.levels[K]:
            if f.components[dst][m[e]] != Y.faces[(c, K, i)][f.components[K][e]]:
                report.add("naturality", (("face", c, K, i), e), "map does not commute with a face")
    for (c, K, i), m in X.degeneracies.items():
        dst = K[:c] + (K[c] + 1,) + K[c + 1 :]
        for e in X.levels[K]:
            if f.components[dst][m[e]] != Y.degeneracies[(c, K, i)][f.components[K][e]]:
                report.add("naturality", (("degeneracy", c, K, i), e), "map does not commute with a degeneracy")
    return report


# ---------------------------------------------------------------------------
# the homotopy-category construction and the truncation functor p
# ---------------------------------------------------------------------------


def tau1(X: TruncatedMultiSimplicialSet) -> tuple[FinCategory, dict]:
    """Homotopy category of a truncated simplicial set.

    Objects are the level-0 elements; morphisms are level-1 elements modulo the
    congruence generated by the level-2 composition relations, with composites
    read off from fillers.  Exact for nerves; raises NonNerveError when a
    composable pair has no filler or the quotient violates the category laws.
    """
    if X.dimension != 1:
        raise ValueError("tau1 needs a one-fold simplicial set")
    if X.truncation < 2:
        raise NonNerveError("tau1 needs levels 0..2")
    objects = X.levels[(0,)]
    edges = X.levels[(1,)]
    d0 = X.faces[(0, (1,), 0)]
    d1 = X.faces[(0, (1,), 1)]
    s0 = X.degeneracies[(0, (0,), 0)]
    t_d0 = X.faces[(0, (2,), 0)]
    t_d1 = X.faces[(0, (2,), 1)]
    t_d2 = X.faces[(0, (2,), 2)]

    parent = {e: e for e in edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            from .fincat import ident_key

            ra, rb = sorted((ra, rb), key=ident_key)
            parent[rb] = ra
            return True
        return False

    triangles = X.levels[(2,)]
    changed = True
    while changed:
        changed = False
        signature: dict = {}
        for t in triangles:
            sig = (find(t_d2[t]), find(t_d0[t]))
            if sig in signature:
                if union(t_d1[t], signature[sig]):
                    changed = True
            else:
                signature[sig] = find(t_d1[t])

    from .fincat import ident_key

    members: dict = {}
    for e in edges:
        members.setdefault(find(e), []).append(e)
    rep = {root: min(mem, key=ident_key) for root, mem in members.items()}
    edge_class = {e: rep[find(e)] for e in edges}
    classes = sort_idents(rep.values())

    source = {m: d1[m] for m in classes}
    target = {m: d0[m] for m in classes}
    for e in edges:
        if d1[e] != source[edge_class[e]] or d0[e] != target[edge_class[e]]:
            raise NonNerveError(f"congruence identified non-parallel edges at {e!r}")
    identity = {x: edge_class[s0[x]] for x in objects}

    compose: dict = {}
    filler_of: dict = {}
    for t in triangles:
        key = (edge_class[t_d0[t]], edge_class[t_d2[t]])
        value = edge_class[t_d1[t]]
        if key in filler_of and filler_of[key] != value:
            raise NonNerveError(f"ill-defined composite at {key!r}")
        filler_of[key] = value
    for g in classes:
        for f in classes:
            if target[f] == source[g]:
                if (g, f) not in filler_of:
                    raise NonNerveError(f"no filler for the composable pair {(g, f)!r}")
                compose[(g, f)] = filler_of[(g, f)]
    C = FinCategory(objects, classes, source, target, identity, compose)
    from .fincat import validate_category

    rep_check = validate_category(C)
    if not rep_check.ok:
        raise NonNerveError(f"homotopy-category laws fail: {rep_check}")
    return C, edge_class


def p_set(X: TruncatedMultiSimplicialSet) -> tuple[tuple, dict]:
    """p of a one-fold simplicial set: isomorphism classes of the homotopy
    category.  Returns (classes, level-0-element → class)."""
    C, _ = tau1(X)
    return iso_classes(C)


def p_last(X: TruncatedMultiSimplicialSet) -> TruncatedMultiSimplicialSet:
    """Apply p to the innermost simplicial direction, dropping the dimension by one."""
    if X.dimension < 2:
        raise ValueError("p_last needs dimension at least 2; use p_set for dimension 1")
    n, N = X.dimension, X.truncation
    class_of: dict = {}
    new_levels: dict = {}
    for L in itertools.product(range(N + 1), repeat=n - 1):
        inner_levels = {(k,): X.levels[L + (k,)] for k in range(N + 1)}
        inner_faces = {
            (0, (k,), i): X.faces[(n - 1, L + (k,), i)] for k in range(1, N + 1) for i in range(k + 1)
        }
        inner_degs = {
            (0, (k,), i): X.degeneracies[(n - 1, L + (k,), i)]
            for k in range(N)
            for i in range(k + 1)
        }
        inner = TruncatedMultiSimplicialSet(1, N, inner_levels, inner_faces, inner_degs)
        classes, quotient = p_set(inner)
        class_of[L] = quotient
        new_levels[L] = classes

    def induced(mapping: dict, src_L: tuple, dst_L: tuple) -> dict:
        out = {}
        for e, cls in class_of[src_L].items():
            img_cls = class_of[dst_L][mapping[e]]
            if cls in out and out[cls] != img_cls:
                raise InternalConsistencyError("p does not descend to classes along a structure map")
            out[cls] = img_cls
        return out

    new_faces = {}
    new_degs = {}
    for L in new_levels:
        for c in range(n - 1):
            k = L[c]
            if k >= 1:
                dst = L[:c] + (k - 1,) + L[c + 1 :]
                for i in range(k + 1):
                    new_faces[(c, L, i)] = induced(X.faces[(c, L + (0,), i)], L, dst)
            if k <= N - 1:
                dst = L[:c] + (k + 1,) + L[c + 1 :]
                for i in range(k + 1):
                    new_degs[(c, L, i)] = induced(X.degeneracies[(c, L + (0,), i)], L, dst)
    return TruncatedMultiSimplicialSet(n - 1, N, new_levels, new_faces, new_degs)


def p_trunc(X: TruncatedMultiSimplicialSet, r: int):
    """Iterate the innermost-direction truncation down to dimension r; r = 0
    yields the plain set of classes."""
    if not 0 <= r <= X.dimension:
        raise ValueError("truncation target out of range")
    cur = X
    while cur.dimension > max(r, 1):
        cur = p_last(cur)
    if r == 0:
        classes, _ = p_set(cur)
        return classes
    return cur


def pi0(X: TruncatedMultiSimplicialSet) -> tuple:
    return p_trunc(X, 0)


def pi0_map(f: MultiSimplicialMap) -> dict:
    """Induced map on pi0 (class representative → class representative)."""
    X, Y = f.domain, f.codomain
    cur_f = f
    while cur_f.domain.dimension > 1:
        cur_f = _p_last_map(cur_f)
    CX, clsX = tau1(cur_f.domain)
    CY, clsY = tau1(cur_f.codomain)
    _, qx = iso_classes(CX)
    _, qy = iso_classes(CY)
    comp0 = cur_f.components[(0,)]
    out = {}
    for x, c in qx.items():
        img = qy[comp0[x]]
        if c in out and out[c] != img:
            raise InternalConsistencyError("pi0 of a map is not well defined on classes")
        out[c] = img
    return out


def _p_last_map(f: MultiSimplicialMap) -> MultiSimplicialMap:
    X2, Y2 = p_last(f.domain), p_last(f.codomain)
    n, N = f.domain.dimension, f.domain.truncation
    comps = {}
    for L in X2.levels:
        quot_x = _class_table(f.domain, L)
        quot_y = _class_table(f.codomain, L)
        comp = f.components[L + (0,)]
        out = {}
        for e, cls in quot_x.items():
            img = quot_y[comp[e]]
            if cls in out and out[cls] != img:
                raise InternalConsistencyError("map does not descend along p")
            out[cls] = img
        comps[L] = out
    return MultiSimplicialMap(X2, Y2, comps)


def _class_table(X: TruncatedMultiSimplicialSet, L: tuple) -> dict:
    n, N = X.dimension, X.truncation
    inner_levels = {(k,): X.levels[L + (k,)] for k in range(N + 1)}
    inner_faces = {
        (0, (k,), i): X.faces[(n - 1, L + (k,), i)] for k in range(1, N + 1) for i in range(k + 1)
    }
    inner_degs = {
        (0, (k,), i): X.degeneracies[(n - 1, L + (k,), i)] for k in range(N) for i in range(k + 1)
    }
    _, quotient = p_set(TruncatedMultiSimplicialSet(1, N, inner_levels, inner_faces, inner_degs))
    return quotient


# ---------------------------------------------------------------------------
# Segal maps, fibers, equivalences, validation
# ---------------------------------------------------------------------------


@dataclass
class SegalComparison:
    level: int
    map: dict  # element of level k → k-tuple in the iterated fiber product
    pullback: tuple  # the fiber-product elements
    is_bijection: Optional[bool]
    verdict: Optional[bool]
    witness: Optional[tuple] = None


def _segal_tuples(X: TruncatedMultiSimplicialSet, k: int) -> tuple[dict, list]:
    """The k-th Segal data in the first coordinate at inner index all-zeros…
    for dimension 1 only; higher dimensions go through slice machinery."""
    one = (1,) + (0,) * (X.dimension - 1)
    d0 = X.act(0, coface(0, 1), one)
    d1 = X.act(0, coface(1, 1), one)
    edges = X.levels[one]
    tuples = []

    def extend(prefix):
        if len(prefix) == k:
            tuples.append(tuple(prefix))
            return
        for e in edges:
            if not prefix or d1[e] == d0[prefix[-1]]:
                prefix.append(e)
                extend(prefix)
                prefix.pop()

    extend([])
    kk = (k,) + (0,) * (X.dimension - 1)
    smap = {}
    for e in X.levels[kk]:
        smap[e] = tuple(X.act(0, delta_interval(j, k), kk)[e] for j in range(1, k + 1))
    return smap, tuples


def segal_map(X: TruncatedMultiSimplicialSet, k: int, direction: int = 0) -> SegalComparison:
    """Build the k-th Segal comparison in the given direction.

    For dimension 1 the verdict is a set-level bijection.  For higher
    dimensions the degree-0 level in that direction must be discrete; the map
    is assembled levelwise and judged as an (n-1)-equivalence.
    """
    if k < 2 or k > X.truncation:
        raise ValueError("Segal comparisons need 2 ≤ k ≤ truncation")
    if direction != 0:
        X = transpose_to_front(X, direction)
    if X.dimension == 1:
        smap, tuples = _segal_tuples(X, k)
        images = list(smap.values())
        bij = len(set(images)) == len(images) and set(images) == set(tuples)
        witness = None
        if not bij:
            missing = sorted(set(tuples) - set(images))
            if missing:
                witness = ("not-surjective", missing[0])
            else:
                witness = ("not-injective", ())
        return SegalComparison(k, smap, tuple(tuples), bij, bij, witness)

    zero_slice = X.slice_first(0)
    if not zero_slice.is_discrete():
        raise ValueError("degree-0 level is not discrete in the requested direction")
    Xk = X.slice_first(k)
    X1 = X.slice_first(1)
    pull = _iterated_fiber_product(X, k)
    comps = {}
    for L in Xk.levels:
        K = (k,) + L
        comps[L] = {
            e: tuple(X.act(0, delta_interval(j, k), K)[e] for j in range(1, k + 1))
            for e in X.levels[K]
        }
    smap = MultiSimplicialMap(Xk, pull, comps)
    rep = validate_msmap(smap)
    if not rep.ok:
        raise InternalConsistencyError(f"Segal map is not simplicial: {rep}")
    verdict = is_n_equivalence(smap, X.dimension - 1)
    return SegalComparison(k, comps, tuple(pull.levels[(0,) * pull.dimension]), None, verdict.is_equivalence, verdict.witness)


def _iterated_fiber_product(X: TruncatedMultiSimplicialSet, k: int) -> TruncatedMultiSimplicialSet:
    """X_1 ×_{X_0} … ×_{X_0} X_1 (k factors) over a discrete X_0, computed
    levelwise in the remaining coordinates."""
    n, N = X.dimension, X.truncation
    levels = {}
    for L in itertools.product(range(N + 1), repeat=n - 1):
        K1 = (1,) + L
        d0 = X.act(0, coface(0, 1), K1)
        d1 = X.act(0, coface(1, 1), K1)
        elems = []

        def extend(prefix):
            if len(prefix) == k:
                elems.append(tuple(prefix))
                return
            for e in X.levels[K1]:
                if not prefix or d1[e] == d0[prefix[-1]]:
                    prefix.append(e)
                    extend(prefix)
                    prefix.pop()

        extend([])
        levels[L] = tuple(elems)
    faces = {}
    degs = {}
    for L in levels:
        for c in range(n - 1):
            kk = L[c]
            if kk >= 1:
                for i in range(kk + 1):
                    m = X.faces[(c + 1, (1,) + L, i)]
                    faces[(c, L, i)] = {t: tuple(m[e] for e in t) for t in levels[L]}
            if kk <= N - 1:
                for i in range(kk + 1):
                    m = X.degeneracies[(c + 1, (1,) + L, i)]
                    degs[(c, L, i)] = {t: tuple(m[e] for e in t) for t in levels[L]}
    return TruncatedMultiSimplicialSet(n - 1, N, levels, faces, degs)


def transpose_to_front(X: TruncatedMultiSimplicialSet, direction: int) -> TruncatedMultiSimplicialSet:
    perm = [direction] + [c for c in range(X.dimension) if c != direction]

    def pk(K):
        return tuple(K[c] for c in perm)

    levels = {pk(K): v for K, v in X.levels.items()}
    faces = {(perm.index(c), pk(K), i): m for (c, K, i), m in X.faces.items()}
    degs = {(perm.index(c), pk(K), i): m for (c, K, i), m in X.degeneracies.items()}
    return TruncatedMultiSimplicialSet(X.dimension, X.truncation, levels, faces, degs)


def hom_fiber(X: TruncatedMultiSimplicialSet, a: Ident, b: Ident) -> TruncatedMultiSimplicialSet:
    """The hom-object X(a, b): the fiber of (d_1, d_0) : X_1 → X_0 × X_0 over
    (a, b), taken levelwise in the remaining coordinates."""
    n, N = X.dimension, X.truncation
    if n < 2:
        raise ValueError("hom fibers need dimension at least 2")
    zero_slice = X.slice_first(0)
    if not zero_slice.is_discrete():
        raise ValueError("degree-0 level is not discrete")
    base = X.levels[(0,) * n]
    if a not in base or b not in base:
        raise ValueError("endpoints must be elements of the discrete level 0")
    levels = {}
    for L in itertools.product(range(N + 1), repeat=n - 1):
        K1 = (1,) + L
        emb = X.base_point_embedding((0,) + L)
        d0 = X.act(0, coface(0, 1), K1)
        d1 = X.act(0, coface(1, 1), K1)
        levels[L] = tuple(e for e in X.levels[K1] if d1[e] == emb[a] and d0[e] == emb[b])
    faces = {}
    degs = {}
    for L in levels:
        keep = set(levels[L])
        for c in range(n - 1):
            kk = L[c]
            if kk >= 1:
                for i in range(kk + 1):
                    m = X.faces[(c + 1, (1,) + L, i)]
                    faces[(c, L, i)] = {e: m[e] for e in keep}
            if kk <= N - 1:
                for i in range(kk + 1):
                    m = X.degeneracies[(c + 1, (1,) + L, i)]
                    degs[(c, L, i)] = {e: m[e] for e in keep}
    return TruncatedMultiSimplicialSet(n - 1, N, levels, faces, degs)


def hom_fiber_map(f: MultiSimplicialMap, a: Ident, b: Ident) -> MultiSimplicialMap:
    Xf = hom_fiber(f.domain, a, b)
    comp0 = f.components[(0,) * f.domain.dimension]
    Yf = hom_fiber(f.codomain, comp0[a], comp0[b])
    comps = {L: {e: f.components[(1,) + L][e] for e in Xf.levels[L]} for L in Xf.levels}
    return MultiSimplicialMap(Xf, Yf, comps)


@dataclass(frozen=True)
class NEquivalenceVerdict:
    is_equivalence: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.is_equivalence


def tau1_functor(f: MultiSimplicialMap) -> FinFunctor:
    CX, clsX = tau1(f.domain)
    CY, clsY = tau1(f.codomain)
    obj_map = {x: f.components[(0,)][x] for x in CX.objects}
    mor_map = {}
    for e, c in clsX.items():
        img = clsY[f.components[(1,)][e]]
        if c in mor_map and mor_map[c] != img:
            raise InternalConsistencyError("map does not descend to homotopy categories")
        mor_map[c] = img
    return FinFunctor(CX, CY, obj_map, mor_map)


def is_n_equivalence(f: MultiSimplicialMap, n: int) -> NEquivalenceVerdict:
    """Recursive equivalence check: hom-fiber maps are (n-1)-equivalences and
    the innermost truncation of the map is one; at n = 1 this is equivalence of
    homotopy categories."""
    if n != f.domain.dimension:
        raise ValueError("dimension mismatch")
    if n == 1:
        v = is_equivalence(tau1_functor(f), validate=False)
        return NEquivalenceVerdict(v.is_equivalence, v.witness)
    base = f.domain.levels[(0,) * n]
    for a in base:
        for b in base:
            sub = is_n_equivalence(hom_fiber_map(f, a, b), n - 1)
            if not sub:
                return NEquivalenceVerdict(False, ("hom-fiber", (a, b), sub.witness))
    sub = is_n_equivalence(_p_last_map(f), n - 1)
    if not sub:
        return NEquivalenceVerdict(False, ("p-image", sub.witness))
    return NEquivalenceVerdict(True)


def is_levelwise_equivalence_msmap(f: MultiSimplicialMap, n: int) -> bool:
    """Whether every slice f_s (in the first coordinate) is an (n-1)-equivalence."""
    X = f.domain
    if X.dimension == 1:
        raise ValueError("levelwise check needs dimension at least 2")
    for s in range(X.truncation + 1):
        comps = {K[1:]: f.components[K] for K in f.components if K[0] == s}
        slice_map = MultiSimplicialMap(X.slice_first(s), f.codomain.slice_first(s), comps)
        if not is_n_equivalence(slice_map, n - 1):
            return False
    return True


def validate_tamsamani(X: TruncatedMultiSimplicialSet, n: int, mode: str = "category") -> ValidationReport:
    """Recursive membership check for the weak n-category / n-groupoid model.

    Conditions, each reported with the failing level: degree-0 discreteness,
    levelwise membership one dimension down, Segal maps being equivalences for
    2 ≤ s ≤ truncation, and (groupoid mode) membership of the innermost
    truncation.  All verdicts are up to the stored truncation.
    """
    if mode not in ("category", "groupoid"):
        raise ValueError("mode must be 'category' or 'groupoid'")
    report = ValidationReport()
    if n != X.dimension:
        report.add("dimension", (n, X.dimension), "dimension does not match")
        return report
    if X.truncation < 3:
        report.add("truncation", (X.truncation,), "validation needs truncation at least 3")
        return report
    if n == 1:
        for k in range(2, X.truncation + 1):
            comp = segal_map(X, k)
            if not comp.is_bijection:
                report.add("segal-strict", (k, comp.witness), "level is not a nerve: Segal map not a bijection")
        if not report.ok:
            return report
        try:
            C, _ = tau1(X)
        except NonNerveError as exc:
            report.add("not-a-nerve", (str(exc),), "homotopy category construction failed")
            return report
        if mode == "groupoid" and not C.is_groupoid():
            bad = next(m for m in C.morphisms if C.inverse(m) is None)
            report.add("not-groupoid", (bad,), "a morphism class is not invertible")
        return report

    if not X.slice_first(0).is_discrete():
        report.add("discreteness", (0,), "degree-0 level is not discrete")
        return report
    for s in range(X.truncation + 1):
        sub = validate_tamsamani(X.slice_first(s), n - 1, mode)
        if not sub.ok:
            report.add("level-membership", (s,), f"level {s} fails one dimension down: {sub.violations[0]}")
    for s in range(2, X.truncation + 1):
        comp = segal_map(X, s)
        if not comp.verdict:
            report.add("segal", (s, comp.witness), "Segal map is not an equivalence")
    if mode == "groupoid" and report.ok:
        sub = validate_tamsamani(p_last(X), n - 1, mode)
        if not sub.ok:
            report.add("p-image", (), f"innermost truncation fails: {sub.violations[0]}")
    return report


def diag(X: TruncatedMultiSimplicialSet) -> TruncatedMultiSimplicialSet:
    """The diagonal simplicial set, level r = X(r, …, r), with the induced maps."""
    n, N = X.dimension, X.truncation
    levels = {(r,): X.levels[(r,) * n] for r in range(N + 1)}
    faces = {}
    degs = {}
    for r in range(N + 1):
        for i in range(r + 1):
            if r >= 1:
                m = {e: e for e in X.levels[(r,) * n]}
                cur = (r,) * n
                for c in range(n):
                    step = X.act(c, coface(i, r), cur)
                    m = {e: step[v] for e, v in m.items()}
                    cur = cur[:c] + (r - 1,) + cur[c + 1 :]
                faces[(0, (r,), i)] = m
            if r <= N - 1:
                m = {e: e for e in X.levels[(r,) * n]}
                cur = (r,) * n
                for c in range(n):
                    step = X.act(c, codegeneracy(i, r), cur)
                    m = {e: step[v] for e, v in m.items()}
                    cur = cur[:c] + (r + 1,) + cur[c + 1 :]
                degs[(0, (r,), i)] = m
    return TruncatedMultiSimplicialSet(1, N, levels, faces, degs)


def component_count(X: TruncatedMultiSimplicialSet) -> int:
    """Number of classes of level-0 elements under the relation generated by
    the 1-simplices (dimension 1 input)."""
    if X.dimension != 1:
        raise ValueError("component count needs a one-fold simplicial set")
    d0 = X.faces[(0, (1,), 0)]
    d1 = X.faces[(0, (1,), 1)]
    parent = {x: x for x in X.levels[(0,)]}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in X.levels[(1,)]:
        ra, rb = find(d1[e]), find(d0[e])
        if ra != rb:
            parent[rb] = ra
    return len({find(x) for x in X.levels[(0,)]})


# ---------------------------------------------------------------------------
# simplicial objects in categories
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CatSimplicialObject:
    """Truncated simplicial object in finite categories (the nerve-producing shape)."""

    truncation: int
    levels: list  # FinCategory, indices 0..N
    face_functors: dict  # (k, i) → FinFunctor: levels[k] → levels[k-1]
    degeneracy_functors: dict  # (k, i) → FinFunctor: levels[k] → levels[k+1]

    def __post_init__(self):
        self._act_cache: dict = {}

    def act(self, alpha: DeltaMap) -> FinFunctor:
        """Induced functor levels[codomain rank] → levels[domain rank]."""
        key = (alpha.values, alpha.codomain_rank)
        if key in self._act_cache:
            return self._act_cache[key]
        m, k = alpha.domain_rank, alpha.codomain_rank
        if alpha.is_identity():
            out = identity_functor(self.levels[k])
        else:
            dup = next((j for j in range(m) if alpha(j) == alpha(j + 1)), None)
            if dup is not None:
                rest = DeltaMap(m - 1, k, alpha.values[:dup] + alpha.values[dup + 1 :])
                out = compose_functors(self.degeneracy_functors[(m - 1, dup)], self.act(rest))
            else:
                missing = next(i for i in range(k + 1) if i not in alpha.values)
                rest = DeltaMap(m, k - 1, tuple(v if v < missing else v - 1 for v in alpha.values))
                out = compose_functors(self.act(rest), self.face_functors[(k, missing)])
        self._act_cache[key] = out
        return out

    def validate_structure(self) -> ValidationReport:
        report = ValidationReport()
        N = self.truncation
        for (k, i), F in list(self.face_functors.items()) + list(self.degeneracy_functors.items()):
            sub = validate_functor(F)
            if not sub.ok:
                report.add("structure-functor", (k, i), f"structure functor invalid: {sub.violations[0]}")
        if not report.ok:
            return report
        for k in range(1, N + 1):
            for j in range(k + 1):
                for i in range(j):
                    lhs = compose_functors(self.face_functors[(k - 1, i)], self.face_functors[(k, j)])
                    rhs = compose_functors(self.face_functors[(k - 1, j - 1)], self.face_functors[(k, i)])
                    if lhs.object_map != rhs.object_map or lhs.morphism_map != rhs.morphism_map:
                        report.add("simplicial-identity", (k, i, j), "d_i d_j ≠ d_{j-1} d_i on categories")
        for k in range(N):
            for j in range(k + 1):
                for i in range(k + 2):
                    lhs = compose_functors(self.face_functors[(k + 1, i)], self.degeneracy_functors[(k, j)])
                    if i == j or i == j + 1:
                        ident = identity_functor(self.levels[k])
                        if lhs.object_map != ident.object_map or lhs.morphism_map != ident.morphism_map:
                            report.add("simplicial-identity", (k, i, j), "d s ≠ id on categories")
        return report

    def segal_functor(self, k: int) -> FinFunctor:
        """The k-th Segal functor levels[k] → levels[1] ×_{levels[0]} …, the
        target realized as the full subcategory of the product on matching tuples."""
        C1 = self.levels[1]
        d0 = self.act(coface(0, 1))
        d1 = self.act(coface(1, 1))
        prod = product_many([C1] * k)
        good_objects = [
            t
            for t in prod.objects
            if all(d0.object_map[t[j]] == d1.object_map[t[j + 1]] for j in range(k - 1))
        ]
        good_set = set(good_objects)
        morphisms = [m for m in prod.morphisms if prod.source[m] in good_set and prod.target[m] in good_set]
        sub = FinCategory(
            tuple(good_objects),
            tuple(morphisms),
            {m: prod.source[m] for m in morphisms},
            {m: prod.target[m] for m in morphisms},
            {x: prod.identity[x] for x in good_objects},
            prod.compose,
        )
        Ck = self.levels[k]
        interval_functors = [self.act(delta_interval(j, k)) for j in range(1, k + 1)]
        obj_map = {x: tuple(F.object_map[x] for F in interval_functors) for x in Ck.objects}
        mor_map = {f: tuple(F.morphism_map[f] for F in interval_functors) for f in Ck.morphisms}
        return FinFunctor(Ck, sub, obj_map, mor_map)

    def p1_simplicial_set(self) -> TruncatedMultiSimplicialSet:
        """The innermost truncation: the simplicial set k ↦ iso-classes(levels[k])."""
        N = self.truncation
        quotients = {}
        levels = {}
        for k in range(N + 1):
            classes, quot = iso_classes(self.levels[k])
            quotients[k] = quot
            levels[(k,)] = classes

        def induced(F: FinFunctor, k_src: int, k_dst: int) -> dict:
            out = {}
            for x, c in quotients[k_src].items():
                img = quotients[k_dst][F.object_map[x]]
                if c in out and out[c] != img:
                    raise InternalConsistencyError("iso classes not preserved by a structure functor")
                out[c] = img
            return out

        faces = {
            (0, (k,), i): induced(self.face_functors[(k, i)], k, k - 1)
            for k in range(1, N + 1)
            for i in range(k + 1)
        }
        degs = {
            (0, (k,), i): induced(self.degeneracy_functors[(k, i)], k, k + 1)
            for k in range(N)
            for i in range(k + 1)
        }
        return TruncatedMultiSimplicialSet(1, N, levels, faces, degs)

    def to_multisimplicial(self) -> TruncatedMultiSimplicialSet:
        """Expand to a bisimplicial set (outer = this direction, inner = nerves).

        Only reasonable for small levels; the validators below never need it."""
        N = self.truncation
        nerves = [nerve_msset(C, N) for C in self.levels]
        levels = {}
        faces = {}
        degs = {}
        for k1 in range(N + 1):
            for k2 in range(N + 1):
                levels[(k1, k2)] = nerves[k1].levels[(k2,)]
                if k2 >= 1:
                    for i in range(k2 + 1):
                        faces[(1, (k1, k2), i)] = nerves[k1].faces[(0, (k2,), i)]
                if k2 <= N - 1:
                    for i in range(k2 + 1):
                        degs[(1, (k1, k2), i)] = nerves[k1].degeneracies[(0, (k2,), i)]
        for k1 in range(N + 1):
            for i in range(k1 + 1):
                if k1 >= 1:
                    F = self.face_functors[(k1, i)]
                    for k2 in range(N + 1):
                        faces[(0, (k1, k2), i)] = _nerve_level_map(F, k2)
                if k1 <= N - 1:
                    F = self.degeneracy_functors[(k1, i)]
                    for k2 in range(N + 1):
                        degs[(0, (k1, k2), i)] = _nerve_level_map(F, k2)
        return TruncatedMultiSimplicialSet(2, N, levels, faces, degs)


def _nerve_level_map(F: FinFunctor, k2: int) -> dict:
    C = F.domain
    if k2 == 0:
        return {x: F.object_map[x] for x in C.objects}
    chains = _chains(C, k2)
    return {ch: tuple(F.morphism_map[f] for f in ch) for ch in chains}


def _chains(C: FinCategory, k: int) -> list:
    if k == 0:
        return list(C.objects)
    by_source: dict = {}
    for f in C.morphisms:
        by_source.setdefault(C.source[f], []).append(f)
    chains = [(f,) for f in C.morphisms]
    for _ in range(k - 1):
        chains = [ch + (f,) for ch in chains for f in by_source.get(C.target[ch[-1]], ())]
    return chains


def cat_simplicial_from_category(C: FinCategory, N: int) -> CatSimplicialObject:
    """A category viewed one dimension up: levels are the *discrete* categories
    on the nerve levels (last-coordinate-constant embedding)."""
    from .fincat import discrete_category

    X = nerve_msset(C, N)
    levels = [discrete_category(X.levels[(k,)]) for k in range(N + 1)]

    def lift(mapping: dict, src, dst) -> FinFunctor:
        obj = dict(mapping)
        mor = {("id", x): ("id", mapping[x]) for x in mapping}
        return FinFunctor(src, dst, obj, mor)

    faces = {
        (k, i): lift(X.faces[(0, (k,), i)], levels[k], levels[k - 1])
        for k in range(1, N + 1)
        for i in range(k + 1)
    }
    degs = {
        (k, i): lift(X.degeneracies[(0, (k,), i)], levels[k], levels[k + 1])
        for k in range(N)
        for i in range(k + 1)
    }
    return CatSimplicialObject(N, levels, faces, degs)


def validate_tamsamani_cat(D: CatSimplicialObject, mode: str = "category") -> ValidationReport:
    """Weak-2-category membership for a simplicial object in categories:
    degree-0 discreteness, levelwise groupoid test (groupoid mode), Segal
    functors being equivalences, and (groupoid mode) the innermost truncation
    being the nerve of a groupoid."""
    report = ValidationReport()
    N = self_trunc = D.truncation
    if self_trunc < 3:
        report.add("truncation", (self_trunc,), "validation needs truncation at least 3")
        return report
    C0 = D.levels[0]
    for f in C0.morphisms:
        if not C0.is_identity(f):
            report.add("discreteness", (f,), "degree-0 category has a non-identity morphism")
            return report
    if mode == "groupoid":
        for k in range(N + 1):
            if not D.levels[k].is_groupoid():
                bad = next(f for f in D.levels[k].morphisms if D.levels[k].inverse(f) is None)
                report.add("level-not-groupoid", (k, bad), "a level fails the groupoid test")
    for s in range(2, N + 1):
        verdict = is_equivalence(D.segal_functor(s), validate=False)
        if not verdict:
            report.add("segal", (s, verdict.witness), "Segal functor is not an equivalence")
    if mode == "groupoid" and report.ok:
        sub = validate_tamsamani(D.p1_simplicial_set(), 1, "groupoid")
        if not sub.ok:
            report.add("p-image", (), f"innermost truncation fails: {sub.violations[0]}")
    return report


@dataclass(eq=False)
class CatSimplicialMap:
    domain: CatSimplicialObject
    codomain: CatSimplicialObject
    components: list  # FinFunctor per level


def validate_cat_simplicial_map(f: CatSimplicialMap) -> ValidationReport:
    report = ValidationReport()
    N = f.domain.truncation
    for k in range(N + 1):
        sub = validate_functor(f.components[k])
        if not sub.ok:
            report.add("component", (k,), f"level functor invalid: {sub.violations[0]}")
    if not report.ok:
        return report
    for (k, i), F in f.domain.face_functors.items():
        lhs = compose_functors(f.components[k - 1], F)
        rhs = compose_functors(f.codomain.face_functors[(k, i)], f.components[k])
        if lhs.object_map != rhs.object_map or lhs.morphism_map != rhs.morphism_map:
            report.add("naturality", ("face", k, i), "map does not commute with a face functor")
    for (k, i), F in f.domain.degeneracy_functors.items():
        lhs = compose_functors(f.components[k + 1], F)
        rhs = compose_functors(f.codomain.degeneracy_functors[(k, i)], f.components[k])
        if lhs.object_map != rhs.object_map or lhs.morphism_map != rhs.morphism_map:
            report.add("naturality", ("degeneracy", k, i), "map does not commute with a degeneracy functor")
    return report


def is_2_equivalence_cat(f: CatSimplicialMap) -> NEquivalenceVerdict:
    """2-equivalence for maps of simplicial objects in categories: hom-fiber
    functors are equivalences and the induced map of innermost truncations is one."""
    D, E = f.domain, f.codomain
    base_src = D.levels[0].objects
    comp0 = f.components[0]
    d0_D, d1_D = D.act(coface(0, 1)), D.act(coface(1, 1))
    d0_E, d1_E = E.act(coface(0, 1)), E.act(coface(1, 1))
    for a in base_src:
        for b in base_src:
            sub_objs = [x for x in D.levels[1].objects if d1_D.object_map[x] == a and d0_D.object_map[x] == b]
            fa, fb = comp0.object_map[a], comp0.object_map[b]
            tgt_objs = [
                y for y in E.levels[1].objects if d1_E.object_map[y] == fa and d0_E.object_map[y] == fb
            ]
            fiber_src = _full_subcategory(D.levels[1], sub_objs)
            fiber_tgt = _full_subcategory(E.levels[1], tgt_objs)
            F1 = f.components[1]
            restricted = FinFunctor(
                fiber_src,
                fiber_tgt,
                {x: F1.object_map[x] for x in fiber_src.objects},
                {m: F1.morphism_map[m] for m in fiber_src.morphisms},
            )
            verdict = is_equivalence(restricted, validate=False)
            if not verdict:
                return NEquivalenceVerdict(False, ("hom-fiber", (a, b), verdict.witness))
    pX, pY = D.p1_simplicial_set(), E.p1_simplicial_set()
    comps = {}
    for k in range(D.truncation + 1):
        _, qx = iso_classes(D.levels[k])
        _, qy = iso_classes(E.levels[k])
        out = {}
        for x, c in qx.items():
            img = qy[f.components[k].object_map[x]]
            if c in out and out[c] != img:
                return NEquivalenceVerdict(False, ("p-image-ill-defined", (k, c)))
            out[c] = img
        comps[(k,)] = out
    sub = is_n_equivalence(MultiSimplicialMap(pX, pY, comps), 1)
    if not sub:
        return NEquivalenceVerdict(False, ("p-image", sub.witness))
    return NEquivalenceVerdict(True)


def is_levelwise_equivalence_cat(f: CatSimplicialMap) -> bool:
    return all(
        is_equivalence(f.components[k], validate=False).is_equivalence
        for k in range(f.domain.truncation + 1)
    )


def _full_subcategory(C: FinCategory, objects) -> FinCategory:
    keep = set(objects)
    morphisms = [m for m in C.morphisms if C.source[m] in keep and C.target[m] in keep]
    mor_set = set(morphisms)
    if isinstance(C.compose, dict):
        compose = {k: v for k, v in C.compose.items() if k[0] in mor_set and k[1] in mor_set}
    else:
        compose = C.compose
    return FinCategory(
        tuple(objects),
        tuple(morphisms),
        {m: C.source[m] for m in morphisms},
        {m: C.target[m] for m in morphisms},
        {x: C.identity[x] for x in objects},
        compose,
    )
