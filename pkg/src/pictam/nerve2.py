"""The 2-nerve of the one-object bicategory attached to a finite Picard category.

Level n is the groupoid of cocycle data {x_ij, f_ijk} indexed by pairs i ≤ j
in [n]; only the non-degenerate indices are stored, the degenerate components
being the unit isomorphisms.  Simplex maps act by reindexing.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Union

from .fincat import FinCategory, FinFunctor, Ident, ValidationReport, iso_classes
from .ktheory import EnumerationBoundExceeded, Exhaustive, Sampled, Strategy
from .picard import PicardCategory
from .shapes import DeltaMap, coface, codegeneracy
from .tamsamani import CatSimplicialObject, InternalConsistencyError


@dataclass(frozen=True)
class NerveLevelObject:
    """Cocycle data: x on pairs i < j, f on triples i < j < k, with
    f_ijk : x_ik → x_jk ⊗ x_ij."""

    level: int
    x: tuple  # sorted (((i, j), object), ...)
    f: tuple  # sorted (((i, j, k), morphism), ...)

    @staticmethod
    def make(level: int, x: dict, f: dict) -> "NerveLevelObject":
        return NerveLevelObject(level, tuple(sorted(x.items())), tuple(sorted(f.items())))

    def x_dict(self) -> dict:
        return dict(self.x)

    def f_dict(self) -> dict:
        return dict(self.f)

    def label(self) -> str:
        xs = ";".join(f"{i}{j}={v}" for (i, j), v in self.x)
        fs = ";".join(f"{i}{j}{k}={v}" for (i, j, k), v in self.f)
        return f"N{self.level}{{{xs}|{fs}}}"


def x_at(P: PicardCategory, x: dict, i: int, j: int) -> Ident:
    return P.unit if i == j else x[(i, j)]


def f_at(P: PicardCategory, x: dict, f: dict, i: int, j: int, k: int) -> Ident:
    """f_ijk with the degenerate cases filled in by the unit isomorphisms."""
    if i < j < k:
        return f[(i, j, k)]
    if i == j == k:
        return P.left_unit[P.unit]
    if i == j:  # x_ik → x_ik ⊗ 1
        return P.right_unit[x_at(P, x, i, k)]
    return P.left_unit[x_at(P, x, i, j)]  # j == k: x_ij → 1 ⊗ x_ij


@dataclass(frozen=True)
class NerveLevelMorphism:
    source: str
    target: str
    H: tuple  # sorted (((i, j), morphism), ...), pairs i < j

    @staticmethod
    def make(source: str, target: str, H: dict) -> "NerveLevelMorphism":
        return NerveLevelMorphism(source, target, tuple(sorted(H.items())))

    def H_dict(self) -> dict:
        return dict(self.H)

    def adjacents(self, n: int) -> tuple:
        d = dict(self.H)
        return tuple(d[(i, i + 1)] for i in range(n))


def H_at(P: PicardCategory, H: dict, i: int, j: int) -> Ident:
    return P.underlying.identity[P.unit] if i == j else H[(i, j)]


def pairs_of(n: int) -> list[tuple[int, int]]:
    """Pairs i < j in [n], ordered by span then left endpoint."""
    return sorted(
        ((i, j) for i in range(n + 1) for j in range(i + 1, n + 1)),
        key=lambda p: (p[1] - p[0], p[0]),
    )


def triples_of(n: int) -> list[tuple[int, int, int]]:
    return list(itertools.combinations(range(n + 1), 3))


def validate_nerve_object(P: PicardCategory, obj: NerveLevelObject) -> ValidationReport:
    report = ValidationReport()
    n = obj.level
    C = P.underlying
    x, f = obj.x_dict(), obj.f_dict()
    if sorted(x.keys()) != sorted((i, j) for i in range(n + 1) for j in range(i + 1, n + 1)):
        report.add("x-support", (), "x is not indexed by exactly the pairs i < j")
        return report
    if sorted(f.keys()) != triples_of(n):
        report.add("f-support", (), "f is not indexed by exactly the triples i < j < k")
        return report
    for (i, j), v in x.items():
        if v not in set(C.objects):
            report.add("dangling", (i, j, v), "x value is not an object")
            return report
    for (i, j, k), m in f.items():
        src = x[(i, k)]
        tgt = P.tobj(x[(j, k)], x[(i, j)])
        if m not in set(C.morphisms) or C.source[m] != src or C.target[m] != tgt:
            report.add("f-endpoints", (i, j, k), "f component has wrong endpoints")
            return report
        if C.inverse(m) is None:
            report.add("f-not-invertible", (i, j, k), "f component is not invertible")
    for i, j, k, l in itertools.combinations_with_replacement(range(n + 1), 4):
        xkl = x_at(P, x, k, l)
        xjk = x_at(P, x, j, k)
        xij = x_at(P, x, i, j)
        path_a = P.compose(
            f_at(P, x, f, i, k, l),
            P.tmor(C.identity[xkl], f_at(P, x, f, i, j, k)),
            P.associator[(xkl, xjk, xij)],
        )
        path_b = P.compose(
            f_at(P, x, f, i, j, l),
            P.tmor(f_at(P, x, f, j, k, l), C.identity[xij]),
        )
        if path_a != path_b:
            report.add("cocycle", (i, j, k, l), "the two routes of the cocycle square disagree")
    return report


def validate_nerve_morphism(
    P: PicardCategory, src: NerveLevelObject, tgt: NerveLevelObject, mor: NerveLevelMorphism
) -> ValidationReport:
    report = ValidationReport()
    n = src.level
    C = P.underlying
    x, fsrc = src.x_dict(), src.f_dict()
    y, ftgt = tgt.x_dict(), tgt.f_dict()
    H = mor.H_dict()
    if sorted(H.keys()) != sorted((i, j) for i in range(n + 1) for j in range(i + 1, n + 1)):
        report.add("H-support", (), "H is not indexed by exactly the pairs i < j")
        return report
    for (i, j), m in H.items():
        if m not in set(C.morphisms) or C.source[m] != x[(i, j)] or C.target[m] != y[(i, j)]:
            report.add("H-endpoints", (i, j), "H component has wrong endpoints")
            return report
    for i, j, k in itertools.combinations_with_replacement(range(n + 1), 3):
        lhs = P.compose(H_at(P, H, i, k), f_at(P, y, ftgt, i, j, k))
        rhs = P.compose(
            f_at(P, x, fsrc, i, j, k),
            P.tmor(H_at(P, H, j, k), H_at(P, H, i, j)),
        )
        if lhs != rhs:
            report.add("H-square", (i, j, k), "compatibility square fails")
    return report


@dataclass(eq=False)
class NerveLevelGroupoid:
    P: PicardCategory
    level: int
    cat: FinCategory
    objects_data: dict
    morphisms_data: dict
    obj_id: dict
    mor_id: dict  # (src id, tgt id, adjacents tuple) → morphism id
    sampled: bool = False


def enumerate_nerve_objects(P: PicardCategory, n: int, strategy: Strategy) -> list[NerveLevelObject]:
    if n == 0:
        return [NerveLevelObject.make(0, {}, {})]
    C = P.underlying
    if isinstance(strategy, Exhaustive):
        est = len(C.objects) ** n
        max_hom = max((len(C.hom(a, b)) for a in C.objects for b in C.objects), default=1)
        est *= max(1, max_hom) ** (len(triples_of(n)) + n)
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
    pairs = pairs_of(n)
    trips = triples_of(n)
    results: list[NerveLevelObject] = []

    def fill_f(x: dict):
        hom_lists = []
        for i, j, k in trips:
            hom = list(C.hom(x[(i, k)], P.tobj(x[(j, k)], x[(i, j)])))
            if not hom:
                return
            if rng is not None:
                rng.shuffle(hom)
            hom_lists.append(hom)
        for choice in itertools.product(*hom_lists):
            if limit is not None and len(results) >= limit:
                return
            f = dict(zip(trips, choice))
            candidate = NerveLevelObject.make(n, x, f)
            if validate_nerve_object(P, candidate).ok:
                results.append(candidate)

    def assign(idx: int, x: dict):
        if limit is not None and len(results) >= limit:
            return
        if idx == len(pairs):
            fill_f(x)
            return
        i, j = pairs[idx]
        if j - i == 1:
            candidates = list(C.objects)
        else:
            required = cls[P.tobj(x[(i + 1, j)], x[(i, i + 1)])]
            candidates = list(members[required])
        if rng is not None:
            rng.shuffle(candidates)
        for o in candidates:
            x[(i, j)] = o
            assign(idx + 1, x)
            del x[(i, j)]

    assign(0, {})
    results.sort(key=lambda obj: obj.label())
    return results


def enumerate_nerve_morphisms(
    P: PicardCategory, src: NerveLevelObject, tgt: NerveLevelObject
) -> list[dict]:
    n = src.level
    C = P.underlying
    if n == 0:
        return [{}]
    x, fsrc = src.x_dict(), src.f_dict()
    y, ftgt = tgt.x_dict(), tgt.f_dict()
    hom_lists = [list(C.hom(x[(i, i + 1)], y[(i, i + 1)])) for i in range(n)]
    out = []
    for adjacents in itertools.product(*hom_lists):
        H = {(i, i + 1): m for i, m in enumerate(adjacents)}
        for i, j in pairs_of(n):
            if j - i == 1:
                continue
            H[(i, j)] = P.compose(
                fsrc[(i, i + 1, j)],
                P.tmor(H[(i + 1, j)], H[(i, i + 1)]),
                P.inv(ftgt[(i, i + 1, j)]),
            )
        mor = NerveLevelMorphism.make("", "", H)
        if validate_nerve_morphism(P, src, tgt, mor).ok:
            out.append(H)
    return out


def nerve_level(P: PicardCategory, n: int, strategy: Strategy = Exhaustive()) -> NerveLevelGroupoid:
    objs = enumerate_nerve_objects(P, n, strategy)
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
    compose: dict = {}
    for a in object_ids:
        for b in object_ids:
            for H in enumerate_nerve_morphisms(P, objects_data[a], objects_data[b]):
                mor = NerveLevelMorphism.make(a, b, H)
                mid = f"[{a}=>{b}|{','.join(str(v) for v in mor.adjacents(n))}]"
                morphisms_data[mid] = mor
                mor_id[(a, b, mor.adjacents(n))] = mid
                source[mid] = a
                target[mid] = b
    identity = {}
    for a in object_ids:
        x = objects_data[a].x_dict()
        adjacents = tuple(P.underlying.identity[x[(i, i + 1)]] for i in range(n))
        identity[a] = mor_id[(a, a, adjacents)]
    for g in morphisms_data:
        for f in morphisms_data:
            if target[f] != source[g]:
                continue
            gf = tuple(
                P.underlying.compose[(gm, fm)]
                for gm, fm in zip(morphisms_data[g].adjacents(n), morphisms_data[f].adjacents(n))
            )
            compose[(g, f)] = mor_id[(source[f], target[g], gf)]
    cat = FinCategory(tuple(object_ids), tuple(morphisms_data.keys()), source, target, identity, compose)
    return NerveLevelGroupoid(
        P, n, cat, objects_data, morphisms_data, obj_id, mor_id, sampled=isinstance(strategy, Sampled)
    )


def nerve_action(
    P: PicardCategory, alpha: DeltaMap, dom: NerveLevelGroupoid, cod: NerveLevelGroupoid
) -> FinFunctor:
    """Reindex cocycle data along a simplex map: x'_{rs} = x_{α(r)α(s)}."""
    if dom.level != alpha.codomain_rank or cod.level != alpha.domain_rank:
        raise ValueError("levels do not match the simplex map")
    m = alpha.domain_rank
    obj_map = {}
    for a in dom.cat.objects:
        obj = dom.objects_data[a]
        x, f = obj.x_dict(), obj.f_dict()
        y = {(r, s): x_at(P, x, alpha(r), alpha(s)) for r in range(m + 1) for s in range(r + 1, m + 1)}
        g = {(r, s, t): f_at(P, x, f, alpha(r), alpha(s), alpha(t)) for r, s, t in triples_of(m)}
        img = NerveLevelObject.make(m, y, g)
        tid = cod.obj_id.get(img)
        if tid is None:
            rep = validate_nerve_object(P, img)
            if rep.ok:
                raise InternalConsistencyError(
                    "nerve action image is valid but missing from the enumerated level"
                    + (" (sampled level?)" if cod.sampled else "")
                )
            raise InternalConsistencyError(f"nerve action image invalid: {rep.violations[0]}")
        obj_map[a] = tid
    mor_map = {}
    for mid in dom.cat.morphisms:
        mor = dom.morphisms_data[mid]
        H = mor.H_dict()
        new_adjacents = tuple(H_at(P, H, alpha(r), alpha(r + 1)) for r in range(m))
        key = (obj_map[mor.source], obj_map[mor.target], new_adjacents)
        tmid = cod.mor_id.get(key)
        if tmid is None:
            raise InternalConsistencyError("nerve action image morphism missing from the enumerated level")
        mor_map[mid] = tmid
    return FinFunctor(dom.cat, cod.cat, obj_map, mor_map)


@dataclass(eq=False)
class NerveResult:
    P: PicardCategory
    truncation: int
    levels: dict  # rank → NerveLevelGroupoid
    diagram: CatSimplicialObject


def nerve(P: PicardCategory, N: int, strategy: Strategy = Exhaustive()) -> NerveResult:
    """Assemble the truncated simplicial object in groupoids."""
    levels = {n: nerve_level(P, n, strategy) for n in range(N + 1)}
    faces = {
        (k, i): nerve_action(P, coface(i, k), levels[k], levels[k - 1])
        for k in range(1, N + 1)
        for i in range(k + 1)
    }
    degs = {
        (k, i): nerve_action(P, codegeneracy(i, k), levels[k], levels[k + 1])
        for k in range(N)
        for i in range(k + 1)
    }
    diagram = CatSimplicialObject(N, [levels[n].cat for n in range(N + 1)], faces, degs)
    return NerveResult(P, N, levels, diagram)
