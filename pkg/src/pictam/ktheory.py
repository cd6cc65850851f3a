"""Segal-style K-theory of a finite symmetric monoidal groupoid.

Level n is the groupoid of coherent sum diagrams {x_I, f_{I,J}} indexed by
subsets of {1..n}; pointed maps act by taking preimages of index sets.  The
enumerators prune with the symmetry condition (the mirror of each f-component
is determined), refuse exhaustive runs whose estimated search space exceeds a
bound, and fall back to seeded sampling.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .fincat import (
    ComposeRule,
    FinCategory,
    FinFunctor,
    Ident,
    ValidationReport,
    ident_key,
    iso_classes,
)
from .gamma import ActionTable, TruncatedGammaGroupoid
from .picard import MonoidalFunctor, PicardCategory
from .shapes import GammaMap
from .tamsamani import InternalConsistencyError


@dataclass(frozen=True)
class Exhaustive:
    bound: int = 10**6


@dataclass(frozen=True)
class Sampled:
    seed: int
    count: int


Strategy = Union[Exhaustive, Sampled]


class EnumerationBoundExceeded(RuntimeError):
    def __init__(self, estimate: int, bound: int):
        super().__init__(
            f"estimated search space {estimate} exceeds the exhaustive bound {bound}; "
            "rerun with a sampled strategy"
        )
        self.estimate = estimate
        self.bound = bound


def skey(I: frozenset) -> str:
    return "".join(str(j) for j in sorted(I)) if I else "0"


def nonempty_subsets(n: int) -> list[frozenset]:
    """Subsets of {1..n}, nonempty, sorted by (size, lexicographic)."""
    out = []
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(1, n + 1), r):
            out.append(frozenset(combo))
    return out


def ordered_disjoint_pairs(n: int) -> list[tuple[frozenset, frozenset]]:
    subs = nonempty_subsets(n)
    return [(I, J) for I in subs for J in subs if not I & J]


def min_first_pairs(n: int) -> list[tuple[frozenset, frozenset]]:
    return [(I, J) for I, J in ordered_disjoint_pairs(n) if min(I) < min(J)]


@dataclass(frozen=True)
class KLevelObject:
    """Coherence data {x_I, f_{I,J}}: x on nonempty index sets, f on ordered
    disjoint nonempty pairs (both orders stored; empty cases are the unit
    isomorphisms by convention)."""

    level: int
    x: tuple  # sorted ((subset-as-sorted-tuple, object), ...)
    f: tuple  # sorted (((I, J) as sorted tuples, morphism), ...)

    @staticmethod
    def make(level: int, x: dict, f: dict) -> "KLevelObject":
        xs = tuple(sorted(((tuple(sorted(I)), v) for I, v in x.items())))
        fs = tuple(sorted((((tuple(sorted(I)), tuple(sorted(J))), v) for (I, J), v in f.items())))
        return KLevelObject(level, xs, fs)

    def x_dict(self) -> dict:
        return {frozenset(I): v for I, v in self.x}

    def f_dict(self) -> dict:
        return {(frozenset(I), frozenset(J)): v for (I, J), v in self.f}

    def label(self) -> str:
        xs = ";".join(f"{skey(frozenset(I))}={v}" for I, v in self.x)
        fs = ";".join(
            f"{skey(frozenset(I))},{skey(frozenset(J))}={v}"
            for (I, J), v in self.f
            if min(frozenset(I)) < min(frozenset(J))
        )
        return f"K{self.level}{{{xs}|{fs}}}"


def x_of(P: PicardCategory, x: dict, I: frozenset) -> Ident:
    return x[I] if I else P.unit


def f_of(P: PicardCategory, x: dict, f: dict, I: frozenset, J: frozenset) -> Ident:
    """The f-component with empty index sets filled in by the unit isomorphisms."""
    if I and J:
        return f[(I, J)]
    if not I and J:
        return P.left_unit[x_of(P, x, J)]
    if I and not J:
        return P.right_unit[x_of(P, x, I)]
    return P.left_unit[P.unit]


@dataclass(frozen=True)
class KLevelMorphism:
    source: str
    target: str
    H: tuple  # sorted ((subset-as-sorted-tuple, morphism), ...), nonempty subsets

    @staticmethod
    def make(source: str, target: str, H: dict) -> "KLevelMorphism":
        return KLevelMorphism(source, target, tuple(sorted((tuple(sorted(I)), v) for I, v in H.items())))

    def H_dict(self) -> dict:
        return {frozenset(I): v for I, v in self.H}

    def singles(self, n: int) -> tuple:
        d = self.H_dict()
        return tuple(d[frozenset([j])] for j in range(1, n + 1))


def H_of(P: PicardCategory, H: dict, I: frozenset) -> Ident:
    return H[I] if I else P.underlying.identity[P.unit]


def validate_k_object(P: PicardCategory, obj: KLevelObject) -> ValidationReport:
    """Check the unit, symmetry and associativity conditions of a level object,
    including the cases with empty index sets (via the unit-isomorphism fill-in)."""
    report = ValidationReport()
    n = obj.level
    C = P.underlying
    x, f = obj.x_dict(), obj.f_dict()
    subs = nonempty_subsets(n)
    if sorted(x.keys(), key=lambda s: (len(s), sorted(s))) != subs:
        report.add("x-support", (), "x is not indexed by exactly the nonempty subsets")
        return report
    if set(f.keys()) != set(ordered_disjoint_pairs(n)):
        report.add("f-support", (), "f is not indexed by exactly the ordered disjoint pairs")
        return report
    for I, v in x.items():
        if v not in set(C.objects):
            report.add("dangling", (tuple(sorted(I)), v), "x value is not an object")
            return report
    for (I, J), m in f.items():
        expected_src = x_of(P, x, I | J)
        expected_tgt = P.tobj(x_of(P, x, I), x_of(P, x, J))
        if m not in set(C.morphisms) or C.source[m] != expected_src or C.target[m] != expected_tgt:
            report.add("f-endpoints", (skey(I), skey(J)), "f component has wrong endpoints")
            return report
        if C.inverse(m) is None:
            report.add("f-not-invertible", (skey(I), skey(J)), "f component is not invertible")

    all_subs = [frozenset()] + subs
    for I in all_subs:
        for J in all_subs:
            if I & J:
                continue
            lhs = P.compose(
                f_of(P, x, f, I, J),
                P.symmetry[(x_of(P, x, I), x_of(P, x, J))],
            )
            if lhs != f_of(P, x, f, J, I):
                report.add("symmetry-square", (skey(I), skey(J)), "γ∘f_{I,J} ≠ f_{J,I}")
    for I in all_subs:
        for J in all_subs:
            for K in all_subs:
                if I & J or I & K or J & K:
                    continue
                xi, xj, xk = x_of(P, x, I), x_of(P, x, J), x_of(P, x, K)
                path_a = P.compose(
                    f_of(P, x, f, I, J | K),
                    P.tmor(C.identity[xi], f_of(P, x, f, J, K)),
                    P.associator[(xi, xj, xk)],
                )
                path_b = P.compose(
                    f_of(P, x, f, I | J, K),
                    P.tmor(f_of(P, x, f, I, J), C.identity[xk]),
                )
                if path_a != path_b:
                    report.add("associativity-square", (skey(I), skey(J), skey(K)), "the two routes disagree")
    return report


def validate_k_morphism(
    P: PicardCategory, src: KLevelObject, tgt: KLevelObject, mor: KLevelMorphism
) -> ValidationReport:
    report = ValidationReport()
    n = src.level
    C = P.underlying
    x, fsrc = src.x_dict(), src.f_dict()
    y, ftgt = tgt.x_dict(), tgt.f_dict()
    H = mor.H_dict()
    if sorted(H.keys(), key=lambda s: (len(s), sorted(s))) != nonempty_subsets(n):
        report.add("H-support", (), "H is not indexed by exactly the nonempty subsets")
        return report
    for I, m in H.items():
        if m not in set(C.morphisms) or C.source[m] != x[I] or C.target[m] != y[I]:
            report.add("H-endpoints", (skey(I),), "H component has wrong endpoints")
            return report
    all_subs = [frozenset()] + nonempty_subsets(n)
    for I in all_subs:
        for J in all_subs:
            if I & J:
                continue
            lhs = P.compose(H_of(P, H, I | J), f_of(P, y, ftgt, I, J))
            rhs = P.compose(
                f_of(P, x, fsrc, I, J),
                P.tmor(H_of(P, H, I), H_of(P, H, J)),
            )
            if lhs != rhs:
                report.add("H-square", (skey(I), skey(J)), "compatibility square fails")
    return report


@dataclass(eq=False)
class KLevelGroupoid:
    P: PicardCategory
    level: int
    cat: FinCategory
    objects_data: dict  # object id → KLevelObject
    morphisms_data: dict  # morphism id → KLevelMorphism
    obj_id: dict  # KLevelObject → object id
    mor_id: dict  # (src id, tgt id, singles tuple) → morphism id
    sampled: bool = False

    def __post_init__(self):
        # unpacked views, hot in the action-reindexing loops
        self.obj_x = {a: o.x_dict() for a, o in self.objects_data.items()}
        self.obj_f = {a: o.f_dict() for a, o in self.objects_data.items()}
        self.mor_H = {m: h.H_dict() for m, h in self.morphisms_data.items()}
        self.mor_singles = {m: h.singles(self.level) for m, h in self.morphisms_data.items()}


def _estimate_search_space(P: PicardCategory, n: int) -> int:
    C = P.underlying
    n_obj = len(C.objects)
    max_hom = max((len(C.hom(a, b)) for a in C.objects for b in C.objects), default=1)
    est = n_obj ** n  # free singleton choices
    reps, cls = iso_classes(C)
    max_class = max(sum(1 for o in C.objects if cls[o] == r) for r in reps) if reps else 1
    est *= max_class ** max(0, len(nonempty_subsets(n)) - n)
    est *= max(1, max_hom) ** len(min_first_pairs(n))
    est *= max(1, max_hom) ** n  # morphism singles per object pair
    return est


def enumerate_k_objects(P: PicardCategory, n: int, strategy: Strategy) -> list[KLevelObject]:
    """All coherent level-n objects (or a seeded sample), in canonical order.

    Index sets are filled in (size, lexicographic) order; each f-component is
    chosen only for min-first pairs, the mirror being forced by the symmetry
    condition, and the associativity condition filters completed assignments.
    """
    if n == 0:
        return [KLevelObject.make(0, {}, {})]
    C = P.underlying
    if isinstance(strategy, Exhaustive):
        est = _estimate_search_space(P, n)
        if est > strategy.bound:
            raise EnumerationBoundExceeded(est, strategy.bound)
        rng = None
        limit = None
    else:
        rng = random.Random(strategy.seed)
        limit = strategy.count

    reps, cls = iso_classes(C)
    members: dict = {}
    for o in C.objects:
        members.setdefault(cls[o], []).append(o)
    subs = nonempty_subsets(n)
    pairs = min_first_pairs(n)
    results: list[KLevelObject] = []

    def candidates_for(S: frozenset, x: dict) -> list:
        if len(S) == 1:
            out = list(C.objects)
        else:
            m = min(S)
            required = cls[P.tobj(x[frozenset([m])], x[S - {m}])]
            out = list(members[required])
        if rng is not None:
            rng.shuffle(out)
        return out

    def fill_f(x: dict):
        hom_lists = []
        for I, J in pairs:
            hom = list(C.hom(x_of(P, x, I | J), P.tobj(x[I], x[J])))
            if not hom:
                return
            if rng is not None:
                rng.shuffle(hom)
            hom_lists.append(hom)
        for choice in itertools.product(*hom_lists):
            if limit is not None and len(results) >= limit:
                return
            f: dict = {}
            for (I, J), m in zip(pairs, choice):
                f[(I, J)] = m
                f[(J, I)] = P.compose(m, P.symmetry[(x[I], x[J])])
            candidate = KLevelObject.make(n, x, f)
            if validate_k_object(P, candidate).ok:
                results.append(candidate)

    def assign(i: int, x: dict):
        if limit is not None and len(results) >= limit:
            return
        if i == len(subs):
            fill_f(x)
            return
        S = subs[i]
        for o in candidates_for(S, x):
            x[S] = o
            assign(i + 1, x)
            del x[S]

    assign(0, {})
    results.sort(key=lambda obj: obj.label())
    return results


def enumerate_k_morphisms(
    P: PicardCategory, src: KLevelObject, tgt: KLevelObject
) -> list[KLevelMorphism]:
    """All morphisms src → tgt: free choices on singletons, the rest derived
    by splitting off the minimum, then filtered by the compatibility squares."""
    n = src.level
    C = P.underlying
    x, fsrc = src.x_dict(), src.f_dict()
    y, ftgt = tgt.x_dict(), tgt.f_dict()
    if n == 0:
        return [{}]
    hom_lists = [list(C.hom(x[frozenset([j])], y[frozenset([j])])) for j in range(1, n + 1)]
    out = []
    for singles in itertools.product(*hom_lists):
        H: dict = {frozenset([j]): m for j, m in zip(range(1, n + 1), singles)}
        ok = True
        for S in nonempty_subsets(n):
            if len(S) == 1:
                continue
            m0 = min(S)
            I, J = frozenset([m0]), S - {m0}
            H[S] = P.compose(
                fsrc[(I, J)],
                P.tmor(H[I], H[J]),
                P.inv(ftgt[(I, J)]),
            )
        mor = KLevelMorphism.make("", "", H)
        if validate_k_morphism(P, src, tgt, mor).ok:
            out.append(H)
    return out


def k_level(P: PicardCategory, n: int, strategy: Strategy = Exhaustive()) -> KLevelGroupoid:
    """The level-n groupoid, with composition rule-backed (componentwise in P)."""
    objs = enumerate_k_objects(P, n, strategy)
    objects_data = {}
    obj_id = {}
    for obj in objs:
        label = obj.label()
        objects_data[label] = obj
        obj_id[obj] = label
    object_ids = sorted(objects_data.keys())

    morphisms_data = {}
    mor_id = {}
    source = {}
    target = {}
    for a in object_ids:
        for b in object_ids:
            for H in enumerate_k_morphisms(P, objects_data[a], objects_data[b]):
                mor = KLevelMorphism.make(a, b, H)
                mid = f"[{a}=>{b}|{','.join(str(v) for v in mor.singles(n))}]"
                morphisms_data[mid] = mor
                mor_id[(a, b, mor.singles(n))] = mid
                source[mid] = a
                target[mid] = b
    identity = {}
    for a in object_ids:
        x = objects_data[a].x_dict()
        singles = tuple(P.underlying.identity[x[frozenset([j])]] for j in range(1, n + 1))
        identity[a] = mor_id[(a, a, singles)]

    singles_by_id = {m: h.singles(n) for m, h in morphisms_data.items()}
    pcomp = P.underlying.compose

    def compose_rule(g: str, f: str) -> str:
        gf_singles = tuple(
            pcomp[(gm, fm)] for gm, fm in zip(singles_by_id[g], singles_by_id[f])
        )
        return mor_id[(source[f], target[g], gf_singles)]

    compose = ComposeRule(source, target, compose_rule)
    cat = FinCategory(tuple(object_ids), tuple(morphisms_data.keys()), source, target, identity, compose)
    return KLevelGroupoid(
        P, n, cat, objects_data, morphisms_data, obj_id, mor_id, sampled=isinstance(strategy, Sampled)
    )


def _preimage(s: GammaMap, K: frozenset) -> frozenset:
    out = set()
    for k in K:
        out |= set(j for j in range(1, s.domain_rank + 1) if s.values[j] == k)
    return frozenset(out)


def k_action(
    P: PicardCategory, s: GammaMap, dom: KLevelGroupoid, cod: KLevelGroupoid
) -> FinFunctor:
    """The action functor of a pointed map: reindex by taking preimages."""
    obj_arr, mor_arr = k_action_arrays(P, s, dom, cod)
    dom_objs, cod_objs = dom.cat.objects, cod.cat.objects
    dom_mors, cod_mors = dom.cat.morphisms, cod.cat.morphisms
    return FinFunctor(
        dom.cat,
        cod.cat,
        {x: cod_objs[obj_arr[i]] for i, x in enumerate(dom_objs)},
        {f: cod_mors[mor_arr[i]] for i, f in enumerate(dom_mors)},
    )


def k_action_arrays(
    P: PicardCategory, s: GammaMap, dom: KLevelGroupoid, cod: KLevelGroupoid
) -> tuple:
    m = s.codomain_rank
    cod_obj_index = {x: i for i, x in enumerate(cod.cat.objects)}
    cod_mor_index = {f: i for i, f in enumerate(cod.cat.morphisms)}
    pre = {K: _preimage(s, K) for K in nonempty_subsets(m)}

    subsets_m = nonempty_subsets(m)
    pairs_m = ordered_disjoint_pairs(m)
    image_id: dict = {}
    obj_vals = []
    for a in dom.cat.objects:
        x, f = dom.obj_x[a], dom.obj_f[a]
        y = {K: x_of(P, x, pre[K]) for K in subsets_m}
        g = {(K, L): f_of(P, x, f, pre[K], pre[L]) for K, L in pairs_m}
        img = KLevelObject.make(m, y, g)
        target_id = cod.obj_id.get(img)
        if target_id is None:
            rep = validate_k_object(P, img)
            if rep.ok:
                raise InternalConsistencyError(
                    "action image object is valid but missing from the enumerated level"
                    + (" (sampled level?)" if cod.sampled else "")
                )
            raise InternalConsistencyError(f"action image violates the level invariants: {rep.violations[0]}")
        image_id[a] = target_id
        obj_vals.append(cod_obj_index[target_id])
    obj_arr = np.array(obj_vals, dtype=np.int64)

    unit_id = P.underlying.identity[P.unit]
    pre_singletons = [pre[frozenset([k])] for k in range(1, m + 1)]
    mor_src, mor_tgt = dom.cat.source, dom.cat.target
    mor_vals = np.empty(len(dom.cat.morphisms), dtype=np.int64)
    for i, mid in enumerate(dom.cat.morphisms):
        H = dom.mor_H[mid]
        new_singles = tuple(H.get(S, unit_id) for S in pre_singletons)
        key = (image_id[mor_src[mid]], image_id[mor_tgt[mid]], new_singles)
        target_mid = cod.mor_id.get(key)
        if target_mid is None:
            raise InternalConsistencyError("action image morphism missing from the enumerated level")
        mor_vals[i] = cod_mor_index[target_mid]
    return obj_arr, mor_vals


@dataclass(eq=False)
class KTheoryResult:
    P: PicardCategory
    truncation: int
    levels: dict  # rank → KLevelGroupoid
    gamma: TruncatedGammaGroupoid


def k_theory(P: PicardCategory, N: int, strategy: Strategy = Exhaustive()) -> KTheoryResult:
    """Assemble levels 0..N and the full action table into a Γ-groupoid."""
    levels = {n: k_level(P, n, strategy) for n in range(N + 1)}
    cats = {n: levels[n].cat for n in range(N + 1)}

    def array_builder(gm: GammaMap):
        return k_action_arrays(P, gm, levels[gm.domain_rank], levels[gm.codomain_rank])

    table = ActionTable(N, cats, functor_builder=None, array_builder=array_builder)
    gamma_obj = TruncatedGammaGroupoid(N, cats, table, name=f"K({P.name})")
    return KTheoryResult(P, N, levels, gamma_obj)


def k_functor(G: MonoidalFunctor, dom: KTheoryResult, cod: KTheoryResult):
    """The Γ-morphism induced by a strictly-unital strong symmetric monoidal
    functor: x'_I = G(x_I) and f'_{I,J} = ψ ∘ G(f_{I,J})."""
    from .gamma import GammaMorphism

    if dom.truncation != cod.truncation:
        raise ValueError("truncation mismatch")
    Q = G.codomain
    components = {}
    for n in range(dom.truncation + 1):
        src_lvl, tgt_lvl = dom.levels[n], cod.levels[n]
        obj_map = {}
        image_obj = {}
        for a in src_lvl.cat.objects:
            obj = src_lvl.objects_data[a]
            x, f = obj.x_dict(), obj.f_dict()
            y = {I: G.on_obj(v) for I, v in x.items()}
            g = {
                (I, J): Q.underlying.compose[(G.psi[(x[I], x[J])], G.on_mor(f[(I, J)]))]
                for (I, J) in f
            }
            img = KLevelObject.make(n, y, g)
            tid = tgt_lvl.obj_id.get(img)
            if tid is None:
                rep = validate_k_object(Q, img)
                raise InternalConsistencyError(
                    f"functor image missing from target level: {rep.violations[:1]}"
                )
            obj_map[a] = tid
            image_obj[a] = tid
        mor_map = {}
        for mid in src_lvl.cat.morphisms:
            mor = src_lvl.morphisms_data[mid]
            new_singles = tuple(G.on_mor(v) for v in mor.singles(n))
            key = (image_obj[mor.source], image_obj[mor.target], new_singles)
            tmid = tgt_lvl.mor_id.get(key)
            if tmid is None:
                raise InternalConsistencyError("functor image morphism missing from target level")
            mor_map[mid] = tmid
        components[n] = FinFunctor(src_lvl.cat, tgt_lvl.cat, obj_map, mor_map)
    return GammaMorphism(dom.gamma, cod.gamma, components)
