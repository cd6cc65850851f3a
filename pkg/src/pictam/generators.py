"""Seeded generators of finite categories, groupoids, functors and
higher-dimensional instances, used by the property tests and the check suite.

Every generator takes an integer seed and is deterministic; categories are
assembled from blocks whose laws hold by construction (posets, deloopings of
small commutative monoids, connected groupoids with cyclic automorphisms).
"""

from __future__ import annotations

import itertools
import random

from .fincat import FinCategory, FinFunctor
from .picard import (
    TRIVIAL_GROUP,
    Z2,
    Z2xZ2,
    Z3,
    FiniteAbelianGroup,
    PicardCategory,
    build_split,
)
from .tamsamani import (
    CatSimplicialMap,
    CatSimplicialObject,
    MultiSimplicialMap,
    TruncatedMultiSimplicialSet,
    cat_simplicial_from_category,
    embed_const_last,
    nerve_msset,
)


def corpus() -> dict:
    """The six reference instances used by the acceptance checks."""
    return {
        "trivial": build_split(TRIVIAL_GROUP, TRIVIAL_GROUP, name="trivial"),
        "z2": build_split(Z2, TRIVIAL_GROUP, name="z2"),
        "z3": build_split(Z3, TRIVIAL_GROUP, name="z3"),
        "b-z2": build_split(TRIVIAL_GROUP, Z2, name="b-z2"),
        "z2-z2": build_split(Z2, Z2, name="z2-z2"),
        "z2-z2-twisted": build_split(
            Z2, Z2, lambda x, y: ((x[0] * y[0]) % 2,), name="z2-z2-twisted"
        ),
    }


def random_groupoid(
    seed: int, max_components: int = 3, max_objects: int = 3, max_aut: int = 3
) -> FinCategory:
    """Disjoint union of connected groupoids: each component has a few mutually
    isomorphic objects and cyclic automorphism groups."""
    rng = random.Random(seed)
    objects = []
    morphisms = []
    source: dict = {}
    target: dict = {}
    identity: dict = {}
    compose: dict = {}
    n_comp = rng.randint(1, max_components)
    for c in range(n_comp):
        n_obj = rng.randint(1, max_objects)
        m = rng.choice([1, 1, 2, max_aut])
        objs = [f"c{c}o{i}" for i in range(n_obj)]
        objects.extend(objs)
        mors = {}
        for a, b in itertools.product(range(n_obj), repeat=2):
            for g in range(m):
                mid = f"c{c}:{a}>{b}:{g}"
                mors[(a, b, g)] = mid
                morphisms.append(mid)
                source[mid] = objs[a]
                target[mid] = objs[b]
        for i in range(n_obj):
            identity[objs[i]] = mors[(i, i, 0)]
        for (a, b, g), f1 in mors.items():
            for (b2, c2, h), f2 in mors.items():
                if b2 == b:
                    compose[(f2, f1)] = mors[(a, c2, (g + h) % m)]
    return FinCategory(tuple(objects), tuple(morphisms), source, target, identity, compose)


def random_category(seed: int, max_blocks: int = 3) -> FinCategory:
    """Disjoint union of chain posets, commutative-monoid deloopings, and
    groupoid components."""
    rng = random.Random(seed)
    objects = []
    morphisms = []
    source: dict = {}
    target: dict = {}
    identity: dict = {}
    compose: dict = {}
    for b in range(rng.randint(1, max_blocks)):
        kind = rng.choice(["poset", "monoid", "groupoid"])
        tag = f"b{b}"
        if kind == "poset":
            n = rng.randint(1, 3)
            objs = [f"{tag}p{i}" for i in range(n)]
            objects.extend(objs)
            mors = {}
            for i in range(n):
                for j in range(i, n):
                    mid = f"{tag}:{i}<={j}"
                    mors[(i, j)] = mid
                    morphisms.append(mid)
                    source[mid] = objs[i]
                    target[mid] = objs[j]
            for i in range(n):
                identity[objs[i]] = mors[(i, i)]
            for (i, j), f1 in mors.items():
                for (j2, k), f2 in mors.items():
                    if j2 == j:
                        compose[(f2, f1)] = mors[(i, k)]
        elif kind == "monoid":
            cap = rng.randint(1, 2)
            obj = f"{tag}m"
            objects.append(obj)
            mors = {}
            for v in range(cap + 1):
                mid = f"{tag}:{v}"
                mors[v] = mid
                morphisms.append(mid)
                source[mid] = obj
                target[mid] = obj
            identity[obj] = mors[0]
            for v, f1 in mors.items():
                for w, f2 in mors.items():
                    compose[(f2, f1)] = mors[min(v + w, cap)]
        else:
            G = random_groupoid(rng.randint(0, 10**6), max_components=1)
            remap_o = {o: f"{tag}{o}" for o in G.objects}
            remap_m = {m: f"{tag}{m}" for m in G.morphisms}
            objects.extend(remap_o.values())
            morphisms.extend(remap_m.values())
            source.update({remap_m[m]: remap_o[G.source[m]] for m in G.morphisms})
            target.update({remap_m[m]: remap_o[G.target[m]] for m in G.morphisms})
            identity.update({remap_o[o]: remap_m[G.identity[o]] for o in G.objects})
            compose.update(
                {(remap_m[g], remap_m[f]): remap_m[h] for (g, f), h in G.compose.items()}
            )
    return FinCategory(tuple(objects), tuple(morphisms), source, target, identity, compose)


def skeleton_functor(G: FinCategory) -> FinFunctor:
    """The retraction of a groupoid onto a skeleton (an equivalence that is
    generally not bijective on objects)."""
    from .fincat import iso_classes

    reps, cls = iso_classes(G)
    witness: dict = {}
    for x in G.objects:
        if cls[x] == x:
            witness[x] = G.identity[x]
        else:
            witness[x] = next(f for f in G.hom(x, cls[x]) if G.inverse(f) is not None)
    keep_obj = set(reps)
    keep_mor = [m for m in G.morphisms if G.source[m] in keep_obj and G.target[m] in keep_obj]
    compose = {
        (g, f): G.compose[(g, f)]
        for g in keep_mor
        for f in keep_mor
        if G.target[f] == G.source[g]
    }
    S = FinCategory(
        tuple(reps),
        tuple(keep_mor),
        {m: G.source[m] for m in keep_mor},
        {m: G.target[m] for m in keep_mor},
        {x: G.identity[x] for x in reps},
        compose,
    )
    obj_map = {x: cls[x] for x in G.objects}
    mor_map = {}
    for m in G.morphisms:
        a, b = G.source[m], G.target[m]
        mor_map[m] = G.compose[(witness[b], G.compose[(m, G.inverse(witness[a]))])]
    return FinFunctor(G, S, obj_map, mor_map)


def random_groupoid_equivalence(seed: int) -> FinFunctor:
    return skeleton_functor(random_groupoid(seed))


def embedded_tam2(C: FinCategory, N: int = 3) -> TruncatedMultiSimplicialSet:
    """A category one dimension up: its nerve, constant in the inner coordinate."""
    return embed_const_last(nerve_msset(C, N))


def embedded_tam2_map(F: FinFunctor, N: int = 3) -> MultiSimplicialMap:
    X = embedded_tam2(F.domain, N)
    Y = embedded_tam2(F.codomain, N)
    nerve_map = {}
    dom_nerve = nerve_msset(F.domain, N)
    for k in range(N + 1):
        if k == 0:
            comp = {x: F.object_map[x] for x in F.domain.objects}
        else:
            comp = {ch: tuple(F.morphism_map[f] for f in ch) for ch in dom_nerve.levels[(k,)]}
        nerve_map[k] = comp
    components = {(k1, k2): nerve_map[k1] for k1 in range(N + 1) for k2 in range(N + 1)}
    return MultiSimplicialMap(X, Y, components)


def embedded_cat_simplicial_map(F: FinFunctor, N: int = 3) -> CatSimplicialMap:
    from .fincat import FinFunctor as FF

    D = cat_simplicial_from_category(F.domain, N)
    E = cat_simplicial_from_category(F.codomain, N)
    dom_nerve = nerve_msset(F.domain, N)
    comps = []
    for k in range(N + 1):
        if k == 0:
            mapping = {x: F.object_map[x] for x in F.domain.objects}
        else:
            mapping = {ch: tuple(F.morphism_map[f] for f in ch) for ch in dom_nerve.levels[(k,)]}
        comps.append(
            FF(
                D.levels[k],
                E.levels[k],
                mapping,
                {("id", ch): ("id", mapping[ch]) for ch in mapping},
            )
        )
    return CatSimplicialMap(D, E, comps)
