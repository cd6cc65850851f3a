"""Comparisons between the K-theory levels and the 2-nerve levels, and the
extraction of a Picard category from a one-object Γ-groupoid.

The forgetful functor keeps only the convex-index data; its section tensors
the maximal convex blocks back together (right-nested, highest block
outermost), with the connecting isomorphisms produced by a small coherence
calculus on trees of distinct blocks.  The extraction of the monoidal
structure picks a deterministic quasi-inverse of the binary Segal functor and
solves the swap-pasting equation componentwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .fincat import (
    FinCategory,
    FinFunctor,
    Ident,
    NatTransformation,
    compose_functors,
    identity_functor,
    is_equivalence,
    verify_nat_iso,
)
from .gamma import GammaMorphism, TruncatedGammaGroupoid, indicator_tuple_functor
from .ktheory import (
    KLevelGroupoid,
    KLevelObject,
    KTheoryResult,
    k_functor,
    k_theory,
    nonempty_subsets,
    ordered_disjoint_pairs,
    validate_k_object,
)
from .nerve2 import NerveLevelGroupoid, NerveLevelObject, NerveResult
from .picard import MonoidalFunctor, PicardCategory
from .shapes import (
    GammaMap,
    fold_map,
    indicator,
    pair_indicator,
    phi,
    point_map,
    slot_map,
    swap_map,
)
from .tamsamani import InternalConsistencyError


def convex_blocks(I: frozenset) -> list[frozenset]:
    """Maximal decomposition of I into convex intervals, ordered by left endpoint."""
    blocks: list[frozenset] = []
    current: list[int] = []
    for j in sorted(I):
        if current and j == current[-1] + 1:
            current.append(j)
        else:
            if current:
                blocks.append(frozenset(current))
            current = [j]
    if current:
        blocks.append(frozenset(current))
    return blocks


@dataclass(frozen=True)
class ConvexDecomposition:
    subset: frozenset
    blocks: tuple

    @staticmethod
    def of(I) -> "ConvexDecomposition":
        I = frozenset(I)
        blocks = tuple(convex_blocks(I))
        union = frozenset().union(*blocks) if blocks else frozenset()
        if union != I:
            raise InternalConsistencyError("blocks do not cover the subset")
        for a, b in itertools.combinations(blocks, 2):
            if a & b:
                raise InternalConsistencyError("blocks overlap")
            if max(min(a), min(b)) - min(max(a), max(b)) == 1:
                raise InternalConsistencyError("adjacent blocks are not maximal")
        return ConvexDecomposition(I, blocks)


def _chain_compose(C: FinCategory, *fs: Ident) -> Ident:
    out = fs[0]
    for g in fs[1:]:
        out = C.compose[(g, out)]
    return out


# ---------------------------------------------------------------------------
# the coherence calculus on trees of distinct convex blocks
# ---------------------------------------------------------------------------
#
# Trees are ("leaf", block) or ("node", left, right); blocks are compared by
# their minimum.  Chains are right-nested trees over descending blocks; every
# tree normalizes to the chain over its (distinct) leaves, and any two
# canonical isomorphisms between the same trees agree, so source and target
# normalizations compose to the canonical rearrangement.


def chain_tree(items: list):
    if not items:
        raise ValueError("empty chains have no tree")
    if len(items) == 1:
        return items[0]
    return ("node", items[0], chain_tree(items[1:]))


def leaf(block: frozenset):
    return ("leaf", block)


class _Coherence:
    def __init__(self, P: PicardCategory, leaf_obj: dict):
        self.P = P
        self.leaf_obj = leaf_obj

    def chain_obj(self, blocks: list) -> Ident:
        if len(blocks) == 1:
            return self.leaf_obj[blocks[0]]
        return self.P.tobj(self.leaf_obj[blocks[0]], self.chain_obj(blocks[1:]))

    def tree_obj(self, tree) -> Ident:
        if tree[0] == "leaf":
            return self.leaf_obj[tree[1]]
        return self.P.tobj(self.tree_obj(tree[1]), self.tree_obj(tree[2]))

    def merge(self, A: list, B: list) -> Ident:
        """Canonical morphism chain(A) ⊗ chain(B) → chain(merge-desc(A, B))."""
        P = self.P
        C = P.underlying
        if len(A) == 1:
            a = A[0]
            b = B[0]
            if min(a) > min(b):
                return C.identity[P.tobj(self.leaf_obj[a], self.chain_obj(B))]
            if len(B) == 1:
                return P.symmetry[(self.leaf_obj[a], self.leaf_obj[b])]
            R = B[1:]
            oa, ob, oR = self.leaf_obj[a], self.leaf_obj[b], self.chain_obj(R)
            return _chain_compose(
                C,
                P.associator[(oa, ob, oR)],
                P.tmor(P.symmetry[(oa, ob)], C.identity[oR]),
                P.inv(P.associator[(ob, oa, oR)]),
                P.tmor(C.identity[ob], self.merge([a], R)),
            )
        a, rest = A[0], A[1:]
        oa = self.leaf_obj[a]
        merged = _merge_desc(rest, B)
        return _chain_compose(
            C,
            P.inv(P.associator[(oa, self.chain_obj(rest), self.chain_obj(B))]),
            P.tmor(C.identity[oa], self.merge(rest, B)),
            self.merge([a], merged),
        )

    def normalize(self, tree) -> tuple[list, Ident]:
        """(descending leaves, canonical morphism tree → chain(leaves))."""
        P = self.P
        if tree[0] == "leaf":
            return [tree[1]], P.underlying.identity[self.leaf_obj[tree[1]]]
        La, ma = self.normalize(tree[1])
        Lb, mb = self.normalize(tree[2])
        m0 = P.tmor(ma, mb)
        m1 = self.merge(La, Lb)
        return _merge_desc(La, Lb), _chain_compose(P.underlying, m0, m1)

    def canonical_iso(self, src, dst) -> Ident:
        Ls, ms = self.normalize(src)
        Ld, md = self.normalize(dst)
        if Ls != Ld:
            raise InternalConsistencyError("trees have different leaves")
        return _chain_compose(self.P.underlying, ms, self.P.inv(md))


def _merge_desc(A: list, B: list) -> list:
    out = []
    i = j = 0
    while i < len(A) and j < len(B):
        if min(A[i]) > min(B[j]):
            out.append(A[i])
            i += 1
        else:
            out.append(B[j])
            j += 1
    return out + A[i:] + B[j:]


# ---------------------------------------------------------------------------
# the forgetful comparison and its section
# ---------------------------------------------------------------------------


def _is_convex(I: frozenset) -> bool:
    return bool(I) and max(I) - min(I) + 1 == len(I)


def forget_U(P: PicardCategory, dom: KLevelGroupoid, cod: NerveLevelGroupoid) -> FinFunctor:
    """Keep only the data indexed by convex subsets: x_{ij} = x_{[i+1,j]} and
    f_{ijk} = f_{[j+1,k],[i+1,j]}."""
    n = dom.level
    if cod.level != n:
        raise ValueError("levels differ")
    obj_map = {}
    for a in dom.cat.objects:
        x, f = dom.obj_x[a], dom.obj_f[a]
        y = {
            (i, j): x[frozenset(range(i + 1, j + 1))]
            for i in range(n + 1)
            for j in range(i + 1, n + 1)
        }
        g = {
            (i, j, k): f[(frozenset(range(j + 1, k + 1)), frozenset(range(i + 1, j + 1)))]
            for i, j, k in itertools.combinations(range(n + 1), 3)
        }
        img = NerveLevelObject.make(n, y, g)
        tid = cod.obj_id.get(img)
        if tid is None:
            raise InternalConsistencyError("forgetful image missing from the nerve level")
        obj_map[a] = tid
    mor_map = {}
    for mid in dom.cat.morphisms:
        mor = dom.morphisms_data[mid]
        adjacents = mor.singles(n)
        key = (obj_map[mor.source], obj_map[mor.target], adjacents)
        tmid = cod.mor_id.get(key)
        if tmid is None:
            raise InternalConsistencyError("forgetful image morphism missing from the nerve level")
        mor_map[mid] = tmid
    return FinFunctor(dom.cat, cod.cat, obj_map, mor_map)


def _block_leaf_objects(x: dict) -> dict:
    """Nerve-object x (pair-indexed) read as convex-set → object."""
    return {frozenset(range(i + 1, j + 1)): v for (i, j), v in x.items()}


def _split_block(P: PicardCategory, xc: dict, f: dict, parts: list) -> Ident:
    """Canonical morphism x_B → chain(parts desc) splitting a convex set B into
    consecutive convex parts, built from the stored nerve components."""
    C = P.underlying
    if len(parts) == 1:
        return C.identity[xc[parts[0]]]
    last = parts[-1]
    rest = parts[:-1]
    rest_union = frozenset().union(*rest)
    i = min(rest_union) - 1
    j = max(rest_union)
    k = max(last)
    m1 = f[(i, j, k)]  # x_B → x_last ⊗ x_rest_union
    return _chain_compose(
        C,
        m1,
        P.tmor(C.identity[xc[last]], _split_block(P, xc, f, rest)),
    )


def _nested_tensor_obj(P: PicardCategory, objs: list) -> Ident:
    if len(objs) == 1:
        return objs[0]
    return P.tobj(objs[0], _nested_tensor_obj(P, objs[1:]))


def _nested_tensor_mor(P: PicardCategory, mors: list) -> Ident:
    if len(mors) == 1:
        return mors[0]
    return P.tmor(mors[0], _nested_tensor_mor(P, mors[1:]))


def extend_F(P: PicardCategory, dom: NerveLevelGroupoid, cod: KLevelGroupoid) -> FinFunctor:
    """The section of the forgetful functor: x̄_I is the right-nested tensor
    over the maximal convex blocks of I (highest block outermost), and the
    f̄-components are induced by the stored components together with the
    associativity and symmetry isomorphisms."""
    n = dom.level
    if cod.level != n:
        raise ValueError("levels differ")
    C = P.underlying
    obj_map = {}
    for a in dom.cat.objects:
        obj = dom.objects_data[a]
        x, f = obj.x_dict(), obj.f_dict()
        xc = _block_leaf_objects(x)
        coh = _Coherence(P, xc)

        def xbar(I: frozenset) -> Ident:
            blocks = convex_blocks(I)[::-1]
            return coh.chain_obj(blocks)

        y = {I: xbar(I) for I in nonempty_subsets(n)}
        g = {}
        for I, J in ordered_disjoint_pairs(n):
            union_blocks = convex_blocks(I | J)[::-1]  # descending
            split_mors = []
            split_trees = []
            for B in union_blocks:
                parts = sorted(
                    (blk for blk in convex_blocks(I & B) + convex_blocks(J & B)),
                    key=min,
                )
                split_mors.append(_split_block(P, xc, f, parts))
                split_trees.append(chain_tree([leaf(b) for b in parts[::-1]]))
            total_split = _nested_tensor_mor(P, split_mors)
            src_tree = chain_tree(split_trees)
            dst_tree = (
                "node",
                chain_tree([leaf(b) for b in convex_blocks(I)[::-1]]),
                chain_tree([leaf(b) for b in convex_blocks(J)[::-1]]),
            )
            g[(I, J)] = _chain_compose(C, total_split, coh.canonical_iso(src_tree, dst_tree))
        img = KLevelObject.make(n, y, g)
        tid = cod.obj_id.get(img)
        if tid is None:
            rep = validate_k_object(P, img)
            raise InternalConsistencyError(
                f"section image fails the level invariants: {rep.violations[:1]}"
                if not rep.ok
                else "section image missing from the enumerated level"
            )
        obj_map[a] = tid
    mor_map = {}
    for mid in dom.cat.morphisms:
        mor = dom.morphisms_data[mid]
        H = mor.H_dict()
        singles = tuple(H[(j - 1, j)] for j in range(1, n + 1))
        key = (obj_map[mor.source], obj_map[mor.target], singles)
        tmid = cod.mor_id.get(key)
        if tmid is None:
            raise InternalConsistencyError("section image morphism missing from the enumerated level")
        mor_map[mid] = tmid
    return FinFunctor(dom.cat, cod.cat, obj_map, mor_map)


def eta(
    P: PicardCategory,
    lvl: KLevelGroupoid,
    nv: NerveLevelGroupoid,
    U: Optional[FinFunctor] = None,
    F: Optional[FinFunctor] = None,
) -> NatTransformation:
    """The natural isomorphism id ⇒ section∘forget on a K-theory level, with
    component the iterated f-morphism into the nested tensor over the maximal
    convex blocks (identity on a single block)."""
    n = lvl.level
    U = U if U is not None else forget_U(P, lvl, nv)
    F = F if F is not None else extend_F(P, nv, lvl)
    FU = compose_functors(F, U)
    components = {}
    for a in lvl.cat.objects:
        x, f = lvl.obj_x[a], lvl.obj_f[a]

        def iter_f(I: frozenset) -> Ident:
            blocks = convex_blocks(I)
            if len(blocks) == 1:
                return P.underlying.identity[x[I]]
            top = blocks[-1]
            rest = I - top
            return _chain_compose(
                P.underlying,
                f[(top, rest)],
                P.tmor(P.underlying.identity[x[top]], iter_f(rest)),
            )

        H = {I: iter_f(I) for I in nonempty_subsets(n)}
        singles = tuple(H[frozenset([j])] for j in range(1, n + 1))
        mid = lvl.mor_id.get((a, FU.object_map[a], singles))
        if mid is None:
            raise InternalConsistencyError("iterated-f component is not a level morphism")
        if lvl.mor_H[mid] != H:
            raise InternalConsistencyError("iterated-f component disagrees with the derived morphism")
        components[a] = mid
    return NatTransformation(identity_functor(lvl.cat), FU, components)


def u_naturality_failures(
    P: PicardCategory, kt: KTheoryResult, nv: NerveResult, max_rank: int = 3
) -> list:
    """All simplex maps among [0..max_rank] whose naturality square for the
    forgetful comparison fails (empty list = naturality holds)."""
    from .ktheory import k_action
    from .nerve2 import nerve_action
    from .shapes import all_delta_maps

    failures = []
    U = {n: forget_U(P, kt.levels[n], nv.levels[n]) for n in range(max_rank + 1)}
    for m in range(max_rank + 1):
        for n in range(max_rank + 1):
            for alpha in all_delta_maps(m, n):
                lhs = compose_functors(nerve_action(P, alpha, nv.levels[n], nv.levels[m]), U[n])
                rhs = compose_functors(
                    U[m], k_action(P, phi(alpha), kt.levels[n], kt.levels[m])
                )
                if lhs.object_map != rhs.object_map or lhs.morphism_map != rhs.morphism_map:
                    failures.append(alpha)
    return failures


# ---------------------------------------------------------------------------
# quasi-inverses of Segal functors
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class QuasiInverse:
    """A chosen reverse functor for a Segal functor S_k, with the two natural
    isomorphisms (no triangle compatibility assumed), and for k = 2 the derived
    structure components σ."""

    k: int
    segal: FinFunctor  # S_k : A⟨k⟩ → A⟨1⟩^k
    reverse: FinFunctor  # T : A⟨1⟩^k → A⟨k⟩
    eps: dict  # object t of the product → iso t → S(T(t))
    e: dict  # object c of A⟨k⟩ → iso c → T(S(c))
    sigma: Optional[dict] = None  # k = 2 only: object c of A⟨2⟩ → morphism in A⟨1⟩


def choose_segal_inverse(A: TruncatedGammaGroupoid, k: int) -> QuasiInverse:
    """Deterministic quasi-inverse: minimal-identifier preimage objects and
    connecting isomorphisms, morphisms extended by the unique fully-faithful
    preimage.  Both natural isomorphisms are verified before returning."""
    S = indicator_tuple_functor(A, k)
    verdict = is_equivalence(S, validate=False)
    if not verdict:
        raise ValueError(f"Segal functor at rank {k} is not an equivalence: {verdict.witness}")
    Ak = A.levels[k]
    prod = S.codomain

    t_obj = {}
    eps = {}
    for t in prod.objects:
        found = False
        for c in Ak.objects:
            isos = [h for h in prod.hom(t, S.object_map[c]) if prod.inverse(h) is not None]
            if isos:
                t_obj[t] = c
                eps[t] = isos[0]
                found = True
                break
        if not found:
            raise InternalConsistencyError("essential surjectivity witness disappeared")

    def unique_preimage(c_src, c_tgt, target_mor):
        matches = [h for h in Ak.hom(c_src, c_tgt) if S.morphism_map[h] == target_mor]
        if len(matches) != 1:
            raise InternalConsistencyError("fully-faithful preimage is not unique")
        return matches[0]

    t_mor = {}
    for h in prod.morphisms:
        t, t2 = prod.source[h], prod.target[h]
        conj = _chain_compose(prod, prod.inverse(eps[t]), h, eps[t2])
        t_mor[h] = unique_preimage(t_obj[t], t_obj[t2], conj)
    T = FinFunctor(prod, Ak, t_obj, t_mor)

    e = {c: unique_preimage(c, t_obj[S.object_map[c]], eps[S.object_map[c]]) for c in Ak.objects}

    ok, witness = verify_nat_iso(identity_functor(prod), compose_functors(S, T), eps)
    if not ok:
        raise InternalConsistencyError(f"chosen isomorphism id ⇒ S∘T is not natural: {witness}")
    ok, witness = verify_nat_iso(identity_functor(Ak), compose_functors(T, S), e)
    if not ok:
        raise InternalConsistencyError(f"chosen isomorphism id ⇒ T∘S is not natural: {witness}")

    sigma = None
    if k == 2:
        fold = A.action.functor(fold_map())
        sigma = {c: fold.morphism_map[e[c]] for c in Ak.objects}
    return QuasiInverse(k, S, T, eps, e, sigma)


@dataclass(eq=False)
class SegalChoices:
    t2: QuasiInverse
    t3: QuasiInverse


def default_choices(A: TruncatedGammaGroupoid) -> SegalChoices:
    return SegalChoices(choose_segal_inverse(A, 2), choose_segal_inverse(A, 3))


# ---------------------------------------------------------------------------
# picardization
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class PicardizeResult:
    picard: PicardCategory
    choices: SegalChoices
    source: TruncatedGammaGroupoid


def picardize(A: TruncatedGammaGroupoid, choices: Optional[SegalChoices] = None) -> PicardizeResult:
    """Extract the symmetric monoidal structure carried by a one-object
    Γ-groupoid: tensor = fold-action after the chosen binary quasi-inverse,
    unit from the basepoint inclusion, unitors from σ at the slot inclusions,
    symmetry the unique solution of the swap-pasting equation, associator from
    the ternary quasi-inverse."""
    if choices is None:
        choices = default_choices(A)
    q2, q3 = choices.t2, choices.t3
    C1 = A.levels[1]
    C2 = A.levels[2]
    C3 = A.levels[3]
    fold = A.action.functor(fold_map())
    T2 = q2.reverse
    sigma = q2.sigma

    tensor_obj = {
        (x, y): fold.object_map[T2.object_map[(x, y)]]
        for x in C1.objects
        for y in C1.objects
    }
    tensor_mor = {
        (f, g): fold.morphism_map[T2.morphism_map[(f, g)]]
        for f in C1.morphisms
        for g in C1.morphisms
    }
    P0 = A.levels[0].objects[0]
    unit = A.action.functor(point_map()).object_map[P0]

    iota1 = A.action.functor(slot_map(1))
    iota2 = A.action.functor(slot_map(2))
    right_unit = {x: sigma[iota1.object_map[x]] for x in C1.objects}  # x → x⊗1
    left_unit = {x: sigma[iota2.object_map[x]] for x in C1.objects}  # x → 1⊗x

    tau = A.action.functor(swap_map())
    inv = C1.inverse

    def tm(f, g):
        return tensor_mor[(f, g)]

    symmetry = {}
    for x, y in itertools.product(C1.objects, repeat=2):
        c = T2.object_map[(x, y)]
        e1, e2 = q2.eps[(x, y)]
        ctau = tau.object_map[c]
        symmetry[(x, y)] = _chain_compose(
            C1,
            tm(e1, e2),
            inv(sigma[c]),
            sigma[ctau],
            inv(tm(e2, e1)),
        )

    # swap-pasting equality at every binary level object (uniqueness witness)
    nu1 = A.action.functor(indicator([1], 2))
    nu2 = A.action.functor(indicator([2], 2))
    for c in C2.objects:
        xt, yt = nu1.object_map[c], nu2.object_map[c]
        lhs = _chain_compose(C1, sigma[tau.object_map[c]], symmetry[(yt, xt)])
        if lhs != sigma[c]:
            raise InternalConsistencyError("swap-pasting equation fails; the chosen data is incoherent")

    mu = {
        (I, J): A.action.functor(pair_indicator(I, J, 3))
        for I, J in [((1,), (2,)), ((2,), (3,)), ((1,), (2, 3)), ((1, 2), (3,))]
    }
    nu3 = {j: A.action.functor(indicator([j], 3)) for j in (1, 2, 3)}
    T3 = q3.reverse
    associator = {}
    for x, y, z in itertools.product(C1.objects, repeat=3):
        c3 = T3.object_map[(x, y, z)]
        u1, u2, u3 = q3.eps[(x, y, z)]
        xt, yt, zt = (nu3[j].object_map[c3] for j in (1, 2, 3))
        route_a = _chain_compose(
            C1,
            sigma[mu[((1,), (2, 3))].object_map[c3]],
            tm(C1.identity[xt], sigma[mu[((2,), (3,))].object_map[c3]]),
        )
        route_b = _chain_compose(
            C1,
            sigma[mu[((1, 2), (3,))].object_map[c3]],
            tm(sigma[mu[((1,), (2,))].object_map[c3]], C1.identity[zt]),
        )
        alpha_tilde = _chain_compose(C1, inv(route_a), route_b)
        associator[(x, y, z)] = _chain_compose(
            C1,
            tm(u1, tm(u2, u3)),
            alpha_tilde,
            inv(tm(tm(u1, u2), u3)),
        )

    P = PicardCategory(
        C1,
        unit,
        tensor_obj,
        tensor_mor,
        associator,
        left_unit,
        right_unit,
        symmetry,
        name=f"M({A.name})",
    )
    return PicardizeResult(P, choices, A)


def monoidal_to_base(kt: KTheoryResult, M: PicardCategory, choices: SegalChoices) -> MonoidalFunctor:
    """The strictly-unital strong symmetric monoidal comparison from the
    extracted structure on K-theory level 1 back to the original category; the
    underlying functor reads off the singleton component and is an isomorphism
    of categories."""
    P = kt.P
    lvl1 = kt.levels[1]
    one = frozenset([1])
    obj_map = {a: lvl1.obj_x[a][one] for a in lvl1.cat.objects}
    mor_map = {m: lvl1.mor_H[m][one] for m in lvl1.cat.morphisms}
    G = FinFunctor(lvl1.cat, P.underlying, obj_map, mor_map)

    T2 = choices.t2.reverse
    lvl2 = kt.levels[2]
    psi = {}
    for a, b in itertools.product(lvl1.cat.objects, repeat=2):
        c = T2.object_map[(a, b)]
        e1, e2 = choices.t2.eps[(a, b)]
        f12 = lvl2.obj_f[c][(frozenset([1]), frozenset([2]))]
        psi[(a, b)] = _chain_compose(
            P.underlying,
            f12,
            P.inv(P.tmor(lvl1.mor_H[e1][one], lvl1.mor_H[e2][one])),
        )
    return MonoidalFunctor(M, P, G, psi)


def gamma_monoidal(
    F: GammaMorphism,
    MA: PicardizeResult,
    MB: PicardizeResult,
) -> MonoidalFunctor:
    """The induced strong symmetric monoidal functor between the extracted
    categories, with the unique compatibility component solving the pasting
    equation for the chosen quasi-inverses."""
    A, B = F.domain, F.codomain
    F1, F2 = F.components[1], F.components[2]
    C1B = B.levels[1]
    T2A = MA.choices.t2.reverse
    sigmaB = MB.choices.t2.sigma
    psi = {}
    for x, y in itertools.product(A.levels[1].objects, repeat=2):
        c = T2A.object_map[(x, y)]
        e1, e2 = MA.choices.t2.eps[(x, y)]
        psi[(x, y)] = _chain_compose(
            C1B,
            sigmaB[F2.object_map[c]],
            C1B.inverse(MB.picard.tmor(F1.morphism_map[e1], F1.morphism_map[e2])),
        )
    return MonoidalFunctor(MA.picard, MB.picard, F1, psi)


# ---------------------------------------------------------------------------
# the comparison ζ : A → K(M(A))
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ZetaResult:
    morphism: GammaMorphism
    picardized: PicardizeResult
    target: KTheoryResult


def zeta(
    A: TruncatedGammaGroupoid,
    choices: Optional[SegalChoices] = None,
    picardized: Optional[PicardizeResult] = None,
    target: Optional[KTheoryResult] = None,
) -> ZetaResult:
    """Componentwise comparison: y_I is the indicator action, f_{I,J} the σ
    component at the pair-indicator image, morphisms act by the indicator
    functors."""
    if picardized is None:
        picardized = picardize(A, choices)
    Q = picardized.picard
    sigma = picardized.choices.t2.sigma
    N = A.truncation
    if target is None:
        target = k_theory(Q, N)
    components = {}
    for n in range(N + 1):
        lvl = target.levels[n]
        nus = {I: A.action.functor(indicator(I, n)) for I in nonempty_subsets(n)}
        mus = {
            (I, J): A.action.functor(pair_indicator(I, J, n))
            for I, J in ordered_disjoint_pairs(n)
        }
        An = A.levels[n]
        obj_map = {}
        for x in An.objects:
            y = {I: nus[I].object_map[x] for I in nonempty_subsets(n)}
            f = {
                (I, J): sigma[mus[(I, J)].object_map[x]]
                for I, J in ordered_disjoint_pairs(n)
            }
            img = KLevelObject.make(n, y, f)
            tid = lvl.obj_id.get(img)
            if tid is None:
                rep = validate_k_object(Q, img)
                raise InternalConsistencyError(
                    f"comparison image fails the level invariants: {rep.violations[:1]}"
                    if not rep.ok
                    else "comparison image missing from the enumerated level"
                )
            obj_map[x] = tid
        mor_map = {}
        for h in An.morphisms:
            singles = tuple(nus[frozenset([j])].morphism_map[h] for j in range(1, n + 1))
            key = (obj_map[An.source[h]], obj_map[An.target[h]], singles)
            tmid = lvl.mor_id.get(key)
            if tmid is None:
                raise InternalConsistencyError("comparison image morphism missing from the level")
            mor_map[h] = tmid
        components[n] = FinFunctor(An, lvl.cat, obj_map, mor_map)
    return ZetaResult(GammaMorphism(A, target.gamma, components), picardized, target)


def zeta_naturality_square(
    F: GammaMorphism, zA: ZetaResult, zB: ZetaResult
) -> bool:
    """Commutation of ζ with a Γ-morphism: ζ_B ∘ F = K(M(F)) ∘ ζ_A, checked
    levelwise as equality of functors."""
    MF = gamma_monoidal(F, zA.picardized, zB.picardized)
    KMF = k_functor(MF, zA.target, zB.target)
    for n in range(F.domain.truncation + 1):
        lhs = compose_functors(zB.morphism.components[n], F.components[n])
        rhs = compose_functors(KMF.components[n], zA.morphism.components[n])
        if lhs.object_map != rhs.object_map or lhs.morphism_map != rhs.morphism_map:
            return False
    return True
