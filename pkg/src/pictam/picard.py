"""Finite Picard categories: data, coherence validation, builders, invariants.

A Picard category is stored as a groupoid together with explicit tensor tables
and coherence-isomorphism components.  Unitor components point *into* the
tensor (x → 1⊗x and x → x⊗1), which keeps the K-theory and nerve validators
free of direction flips.  Validators accept non-skeletal instances; the
builders emit skeletal ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .fincat import (
    FinCategory,
    FinFunctor,
    Ident,
    ValidationReport,
    ident_key,
    iso_classes,
    sort_idents,
    validate_category,
    validate_functor,
)


@dataclass(eq=False)
class PicardCategory:
    underlying: FinCategory
    unit: Ident
    tensor_obj: dict  # (x, y) → x⊗y
    tensor_mor: dict  # (f, g) → f⊗g
    associator: dict  # (x, y, z) → α: x⊗(y⊗z) → (x⊗y)⊗z
    left_unit: dict  # x → λ̂: x → 1⊗x
    right_unit: dict  # x → ρ̂: x → x⊗1
    symmetry: dict  # (x, y) → γ: x⊗y → y⊗x
    name: str = "P"

    def tobj(self, x: Ident, y: Ident) -> Ident:
        return self.tensor_obj[(x, y)]

    def tmor(self, f: Ident, g: Ident) -> Ident:
        return self.tensor_mor[(f, g)]

    def compose(self, *fs: Ident) -> Ident:
        """Compose left to right in diagram order: compose(f, g) = g∘f."""
        out = fs[0]
        for g in fs[1:]:
            out = self.underlying.compose[(g, out)]
        return out

    def inv(self, f: Ident) -> Ident:
        g = self.underlying.inverse(f)
        if g is None:
            raise ValueError(f"morphism {f!r} has no inverse")
        return g

    def ident(self, x: Ident) -> Ident:
        return self.underlying.identity[x]


def validate_picard(P: PicardCategory) -> ValidationReport:
    """Exhaustively check every Picard-category axiom, with witnessing tuples.

    Checks, in order: the underlying category laws and groupoid property,
    functoriality of ⊗, naturality of all coherence components, the pentagon,
    the unit triangle, the hexagon and the symmetry involution, and finally
    group-likeness of the tensor on isomorphism classes.
    """
    C = P.underlying
    report = validate_category(C)
    if not report.ok:
        return report
    if not report.is_groupoid:
        bad = next(f for f in C.morphisms if C.inverse(f) is None)
        report.add("not-groupoid", (bad,), "underlying category has a non-invertible morphism")
        return report
    if P.unit not in set(C.objects):
        report.add("dangling", (P.unit,), "unit object unknown")
        return report

    obs, mors = C.objects, C.morphisms
    mor_set = set(mors)

    for x, y in itertools.product(obs, repeat=2):
        if (x, y) not in P.tensor_obj:
            report.add("tensor-partial", (x, y), "object tensor missing an entry")
    for f, g in itertools.product(mors, repeat=2):
        if (f, g) not in P.tensor_mor:
            report.add("tensor-partial", (f, g), "morphism tensor missing an entry")
    if not report.ok:
        return report

    for f, g in itertools.product(mors, repeat=2):
        fg = P.tensor_mor[(f, g)]
        if fg not in mor_set:
            report.add("dangling", (f, g, fg), "tensor of morphisms is unknown")
            continue
        if C.source[fg] != P.tobj(C.source[f], C.source[g]) or C.target[fg] != P.tobj(
            C.target[f], C.target[g]
        ):
            report.add("tensor-endpoints", (f, g), "f⊗g has wrong endpoints")
    if not report.ok:
        return report

    for x, y in itertools.product(obs, repeat=2):
        if P.tmor(C.identity[x], C.identity[y]) != C.identity[P.tobj(x, y)]:
            report.add("tensor-identity", (x, y), "id⊗id ≠ id of the tensor")
    for g, f in C.composable_pairs():
        for g2, f2 in C.composable_pairs():
            left = P.tmor(C.compose[(g, f)], C.compose[(g2, f2)])
            right = C.compose[(P.tmor(g, g2), P.tmor(f, f2))]
            if left != right:
                report.add("tensor-composition", (g, f, g2, f2), "⊗ does not preserve composition")
                break
        if not report.ok:
            break

    def component_ok(kind: str, key: tuple, comp: Ident, src: Ident, tgt: Ident) -> bool:
        if comp not in mor_set:
            report.add("dangling", key + (comp,), f"{kind} component unknown")
            return False
        if C.source[comp] != src or C.target[comp] != tgt:
            report.add(f"{kind}-endpoints", key, f"{kind} component has wrong endpoints")
            return False
        if C.inverse(comp) is None:
            report.add(f"{kind}-not-invertible", key, f"{kind} component not invertible")
            return False
        return True

    for x, y, z in itertools.product(obs, repeat=3):
        a = P.associator.get((x, y, z))
        if a is None:
            report.add("associator-missing", (x, y, z), "associator component missing")
            continue
        component_ok("associator", (x, y, z), a, P.tobj(x, P.tobj(y, z)), P.tobj(P.tobj(x, y), z))
    for x in obs:
        lu = P.left_unit.get(x)
        if lu is None:
            report.add("left-unit-missing", (x,), "left unitor component missing")
        else:
            component_ok("left-unit", (x,), lu, x, P.tobj(P.unit, x))
        ru = P.right_unit.get(x)
        if ru is None:
            report.add("right-unit-missing", (x,), "right unitor component missing")
        else:
            component_ok("right-unit", (x,), ru, x, P.tobj(x, P.unit))
    for x, y in itertools.product(obs, repeat=2):
        g = P.symmetry.get((x, y))
        if g is None:
            report.add("symmetry-missing", (x, y), "symmetry component missing")
            continue
        component_ok("symmetry", (x, y), g, P.tobj(x, y), P.tobj(y, x))
    if not report.ok:
        return report

    # naturality of every component family
    for f, g, h in itertools.product(mors, repeat=3):
        x, y, z = C.source[f], C.source[g], C.source[h]
        x2, y2, z2 = C.target[f], C.target[g], C.target[h]
        left = C.compose[(P.associator[(x2, y2, z2)], P.tmor(f, P.tmor(g, h)))]
        right = C.compose[(P.tmor(P.tmor(f, g), h), P.associator[(x, y, z)])]
        if left != right:
            report.add("associator-naturality", (f, g, h), "associator naturality square fails")
            break
    for f in mors:
        x, x2 = C.source[f], C.target[f]
        if C.compose[(P.left_unit[x2], f)] != C.compose[(P.tmor(C.identity[P.unit], f), P.left_unit[x])]:
            report.add("left-unit-naturality", (f,), "left unitor naturality square fails")
            break
        if C.compose[(P.right_unit[x2], f)] != C.compose[(P.tmor(f, C.identity[P.unit]), P.right_unit[x])]:
            report.add("right-unit-naturality", (f,), "right unitor naturality square fails")
            break
    for f, g in itertools.product(mors, repeat=2):
        x, y = C.source[f], C.source[g]
        x2, y2 = C.target[f], C.target[g]
        left = C.compose[(P.symmetry[(x2, y2)], P.tmor(f, g))]
        right = C.compose[(P.tmor(g, f), P.symmetry[(x, y)])]
        if left != right:
            report.add("symmetry-naturality", (f, g), "symmetry naturality square fails")
            break

    # pentagon, starting at w⊗(x⊗(y⊗z))
    for w, x, y, z in itertools.product(obs, repeat=4):
        route1 = P.compose(P.associator[(w, x, P.tobj(y, z))], P.associator[(P.tobj(w, x), y, z)])
        route2 = P.compose(
            P.tmor(C.identity[w], P.associator[(x, y, z)]),
            P.associator[(w, P.tobj(x, y), z)],
            P.tmor(P.associator[(w, x, y)], C.identity[z]),
        )
        if route1 != route2:
            report.add("pentagon", (w, x, y, z), "pentagon axiom fails")
            break

    # unit triangle, starting at x⊗y
    for x, y in itertools.product(obs, repeat=2):
        left = P.compose(P.tmor(C.identity[x], P.left_unit[y]), P.associator[(x, P.unit, y)])
        right = P.tmor(P.right_unit[x], C.identity[y])
        if left != right:
            report.add("triangle", (x, y), "unit triangle fails")
            break

    # symmetry involution and hexagon
    for x, y in itertools.product(obs, repeat=2):
        if P.compose(P.symmetry[(x, y)], P.symmetry[(y, x)]) != C.identity[P.tobj(x, y)]:
            report.add("involution", (x, y), "γ_{y,x}∘γ_{x,y} ≠ id")
            break
    for x, y, z in itertools.product(obs, repeat=3):
        lhs = P.compose(
            P.inv(P.associator[(x, y, z)]),
            P.symmetry[(x, P.tobj(y, z))],
            P.inv(P.associator[(y, z, x)]),
        )
        rhs = P.compose(
            P.tmor(P.symmetry[(x, y)], C.identity[z]),
            P.inv(P.associator[(y, x, z)]),
            P.tmor(C.identity[y], P.symmetry[(x, z)]),
        )
        if lhs != rhs:
            report.add("hexagon", (x, y, z), "hexagon axiom fails")
            break

    if not report.ok:
        return report

    # group-likeness of ⊗ on isomorphism classes
    reps, cls = iso_classes(C)
    unit_cls = cls[P.unit]
    table = {(a, b): cls[P.tobj(a, b)] for a, b in itertools.product(reps, repeat=2)}
    for a in reps:
        if table[(unit_cls, a)] != a or table[(a, unit_cls)] != a:
            report.add("monoid-unit", (a,), "unit class does not act as identity on π0")
    for a in reps:
        if not any(table[(a, b)] == unit_cls for b in reps):
            report.add("not-group-like", (a,), "object class has no tensor inverse")
    report.is_groupoid = True
    return report


def group_like_failures_only(report: ValidationReport) -> bool:
    """True when every recorded violation is a group-likeness failure.

    Such instances are still symmetric monoidal groupoids, which is all the
    K-theory construction needs; this is how the monoid-without-inverses
    counterexamples enter the pipeline.
    """
    return bool(report.violations) and all(v.kind == "not-group-like" for v in report.violations)


# -- canonical builders -------------------------------------------------------


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups; elements are int tuples mod the moduli."""

    moduli: tuple[int, ...]

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(p) for p in itertools.product(*[range(m) for m in self.moduli])]

    def add(self, a: tuple, b: tuple) -> tuple:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: tuple) -> tuple:
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    @property
    def zero(self) -> tuple:
        return (0,) * len(self.moduli)

    def label(self, a: tuple) -> str:
        return ".".join(map(str, a)) if a else "e"


TRIVIAL_GROUP = FiniteAbelianGroup(())
Z2 = FiniteAbelianGroup((2,))
Z3 = FiniteAbelianGroup((3,))
Z2xZ2 = FiniteAbelianGroup((2, 2))


def build_split(
    A: FiniteAbelianGroup,
    B: FiniteAbelianGroup,
    beta: Optional[Callable[[tuple, tuple], tuple]] = None,
    name: str = "split",
) -> PicardCategory:
    """Skeletal Picard category with π0 = A, π1 = B and symmetry twisted by β.

    Objects are the elements of A; morphisms are automorphisms labelled by B.
    β must be bi-additive with β(x,y) + β(y,x) = 0; this is checked before
    construction and violations are rejected.
    """
    if beta is None:
        beta = lambda x, y: B.zero  # noqa: E731
    els = A.elements()
    for x, y in itertools.product(els, repeat=2):
        if B.add(beta(x, y), beta(y, x)) != B.zero:
            raise ValueError(f"beta violates antisymmetry at {(x, y)}")
        for z in els:
            if beta(A.add(x, y), z) != B.add(beta(x, z), beta(y, z)):
                raise ValueError(f"beta not additive in the first slot at {(x, y, z)}")
            if beta(x, A.add(y, z)) != B.add(beta(x, y), beta(x, z)):
                raise ValueError(f"beta not additive in the second slot at {(x, y, z)}")

    def ob(x: tuple) -> str:
        return A.label(x)

    def mo(x: tuple, b: tuple) -> str:
        return f"{A.label(x)}|{B.label(b)}"

    bels = B.elements()
    objects = [ob(x) for x in els]
    morphisms = [mo(x, b) for x in els for b in bels]
    source = {mo(x, b): ob(x) for x in els for b in bels}
    target = dict(source)
    identity = {ob(x): mo(x, B.zero) for x in els}
    compose = {
        (mo(x, b2), mo(x, b1)): mo(x, B.add(b1, b2))
        for x in els
        for b1 in bels
        for b2 in bels
    }
    C = FinCategory(tuple(objects), tuple(morphisms), source, target, identity, compose)

    tensor_obj = {(ob(x), ob(y)): ob(A.add(x, y)) for x in els for y in els}
    tensor_mor = {
        (mo(x, b), mo(y, c)): mo(A.add(x, y), B.add(b, c))
        for x in els
        for y in els
        for b in bels
        for c in bels
    }
    associator = {
        (ob(x), ob(y), ob(z)): identity[ob(A.add(A.add(x, y), z))]
        for x in els
        for y in els
        for z in els
    }
    left_unit = {ob(x): identity[ob(x)] for x in els}
    right_unit = {ob(x): identity[ob(x)] for x in els}
    symmetry = {(ob(x), ob(y)): mo(A.add(x, y), beta(x, y)) for x in els for y in els}
    return PicardCategory(
        C, ob(A.zero), tensor_obj, tensor_mor, associator, left_unit, right_unit, symmetry, name=name
    )


def build_discrete_monoidal(elements: list, op: dict, unit, name: str = "monoid") -> PicardCategory:
    """Discrete symmetric monoidal groupoid of a finite commutative monoid.

    The result fails group-likeness unless the monoid is a group; everything
    else validates, which makes these the canonical special-but-not-very-special
    inputs.
    """
    elements = sort_idents(elements)
    for x, y in itertools.product(elements, repeat=2):
        if op[(x, y)] != op[(y, x)]:
            raise ValueError(f"monoid not commutative at {(x, y)}")
        for z in elements:
            if op[(op[(x, y)], z)] != op[(x, op[(y, z)])]:
                raise ValueError(f"monoid not associative at {(x, y, z)}")
    ids = {x: f"id:{x}" for x in elements}
    C = FinCategory(
        elements,
        tuple(ids[x] for x in elements),
        {m: x for x, m in ids.items()},
        {m: x for x, m in ids.items()},
        dict(ids),
        {(m, m): m for m in ids.values()},
    )
    tensor_obj = {(x, y): op[(x, y)] for x in elements for y in elements}
    tensor_mor = {(ids[x], ids[y]): ids[op[(x, y)]] for x in elements for y in elements}
    return PicardCategory(
        C,
        unit,
        tensor_obj,
        tensor_mor,
        {(x, y, z): ids[op[(op[(x, y)], z)]] for x in elements for y in elements for z in elements},
        {x: ids[x] for x in elements},
        {x: ids[x] for x in elements},
        {(x, y): ids[op[(x, y)]] for x in elements for y in elements},
        name=name,
    )


def truncated_addition_monoid(cap: int = 2) -> PicardCategory:
    """The commutative monoid {0..cap} with x·y = min(x+y, cap), as a discrete
    symmetric monoidal groupoid (no inverses for nonzero elements)."""
    els = list(range(cap + 1))
    op = {(x, y): min(x + y, cap) for x in els for y in els}
    return build_discrete_monoidal(els, op, 0, name=f"cap{cap}")


# -- invariants ----------------------------------------------------------------


@dataclass(frozen=True)
class GroupTable:
    elements: tuple
    table: dict  # (a, b) → ab
    unit: Ident

    def is_group(self) -> bool:
        for a in self.elements:
            row = [self.table[(a, b)] for b in self.elements]
            if sorted(row, key=ident_key) != sorted(self.elements, key=ident_key):
                return False
        return (
            all(self.table[(self.unit, a)] == a == self.table[(a, self.unit)] for a in self.elements)
        )

    def is_abelian(self) -> bool:
        return all(
            self.table[(a, b)] == self.table[(b, a)]
            for a in self.elements
            for b in self.elements
        )


def group_isomorphic(G: GroupTable, H: GroupTable) -> bool:
    """Exhaustive isomorphism search between small group tables."""
    if len(G.elements) != len(H.elements):
        return False
    others = [h for h in H.elements if h != H.unit]
    for perm in itertools.permutations(others):
        m = dict(zip([g for g in G.elements if g != G.unit], perm))
        m[G.unit] = H.unit
        if all(
            m[G.table[(a, b)]] == H.table[(m[a], m[b])]
            for a in G.elements
            for b in G.elements
        ):
            return True
    return False


@dataclass(frozen=True)
class PiInvariants:
    pi0: GroupTable
    pi1: GroupTable
    q: dict  # π0 class → element of π1


def aut_transport(P: PicardCategory, x: Ident, u: Ident) -> Ident:
    """Image of u ∈ Aut(1) under the canonical identification with Aut(x):
    λ̂_x⁻¹ ∘ (u⊗id_x) ∘ λ̂_x."""
    C = P.underlying
    return P.compose(P.left_unit[x], P.tmor(u, C.identity[x]), P.inv(P.left_unit[x]))


def pi_invariants(P: PicardCategory) -> PiInvariants:
    """The stable-1-type data (π0, π1, q) of a valid Picard category.

    π1 = Aut(1) is asserted abelian via the interchange argument, and q is
    asserted well defined on isomorphism classes by checking all representatives.
    """
    C = P.underlying
    reps, cls = iso_classes(C)
    pi0 = GroupTable(reps, {(a, b): cls[P.tobj(a, b)] for a in reps for b in reps}, cls[P.unit])

    aut1 = C.hom(P.unit, P.unit)
    lam = P.left_unit[P.unit]
    comp_table = {}
    for g, h in itertools.product(aut1, repeat=2):
        composed = C.compose[(g, h)]
        via_tensor = P.compose(lam, P.tmor(g, h), P.inv(lam))
        if composed != via_tensor or composed != C.compose[(h, g)]:
            raise AssertionError(f"Aut(1) interchange failed at {(g, h)}")
        comp_table[(g, h)] = composed
    pi1 = GroupTable(aut1, comp_table, C.identity[P.unit])

    def q_at(x: Ident) -> Ident:
        gamma_xx = P.symmetry[(x, x)]
        matches = [u for u in aut1 if aut_transport(P, P.tobj(x, x), u) == gamma_xx]
        if len(matches) != 1:
            raise AssertionError(f"q normalization not unique at {x!r}: {matches}")
        return matches[0]

    q = {}
    for rep in reps:
        values = {q_at(x) for x in C.objects if cls[x] == rep}
        if len(values) != 1:
            raise AssertionError(f"q not constant on the class of {rep!r}")
        q[rep] = values.pop()
    return PiInvariants(pi0, pi1, q)


# -- strong symmetric monoidal functors ----------------------------------------


@dataclass(eq=False)
class MonoidalFunctor:
    """Strong symmetric monoidal functor preserving the unit strictly."""

    domain: PicardCategory
    codomain: PicardCategory
    functor: FinFunctor
    psi: dict  # (x, y) → F(x⊗y) → Fx⊗'Fy

    def on_obj(self, x: Ident) -> Ident:
        return self.functor.object_map[x]

    def on_mor(self, f: Ident) -> Ident:
        return self.functor.morphism_map[f]


def identity_monoidal(P: PicardCategory) -> MonoidalFunctor:
    from .fincat import identity_functor

    C = P.underlying
    return MonoidalFunctor(
        P, P, identity_functor(C), {(x, y): C.identity[P.tobj(x, y)] for x in C.objects for y in C.objects}
    )


def compose_monoidal(G: MonoidalFunctor, F: MonoidalFunctor) -> MonoidalFunctor:
    from .fincat import compose_functors

    D = G.codomain
    psi = {}
    for (x, y), comp in F.psi.items():
        psi[(x, y)] = D.underlying.compose[
            (G.psi[(F.on_obj(x), F.on_obj(y))], G.on_mor(comp))
        ]
    return MonoidalFunctor(F.domain, G.codomain, compose_functors(G.functor, F.functor), psi)


def validate_monoidal_functor(M: MonoidalFunctor) -> ValidationReport:
    """Exhaustive compatibility check (ψ naturality, α/γ/unit squares, strict unit)."""
    report = ValidationReport()
    P, Q = M.domain, M.codomain
    C, D = P.underlying, Q.underlying
    frep = validate_functor(M.functor)
    if not frep.ok:
        report.violations.extend(frep.violations)
        return report
    if M.on_obj(P.unit) != Q.unit:
        report.add("unit-not-strict", (M.on_obj(P.unit),), "unit object not preserved strictly")
        return report

    for x, y in itertools.product(C.objects, repeat=2):
        comp = M.psi.get((x, y))
        if comp is None:
            report.add("psi-missing", (x, y), "compatibility component missing")
            continue
        src = M.on_obj(P.tobj(x, y))
        tgt = Q.tobj(M.on_obj(x), M.on_obj(y))
        if D.source.get(comp) != src or D.target.get(comp) != tgt:
            report.add("psi-endpoints", (x, y), "ψ component has wrong endpoints")
        elif D.inverse(comp) is None:
            report.add("psi-not-invertible", (x, y), "ψ component not invertible")
    if not report.ok:
        return report

    for f, g in itertools.product(C.morphisms, repeat=2):
        x, y = C.source[f], C.source[g]
        x2, y2 = C.target[f], C.target[g]
        left = D.compose[(M.psi[(x2, y2)], M.on_mor(P.tmor(f, g)))]
        right = D.compose[(Q.tmor(M.on_mor(f), M.on_mor(g)), M.psi[(x, y)])]
        if left != right:
            report.add("psi-naturality", (f, g), "ψ naturality square fails")
            break

    for x, y, z in itertools.product(C.objects, repeat=3):
        Fx, Fy, Fz = M.on_obj(x), M.on_obj(y), M.on_obj(z)
        left = D.compose[
            (
                Q.tmor(M.psi[(x, y)], D.identity[Fz]),
                D.compose[(M.psi[(P.tobj(x, y), z)], M.on_mor(P.associator[(x, y, z)]))],
            )
        ]
        right = D.compose[
            (
                Q.associator[(Fx, Fy, Fz)],
                D.compose[(Q.tmor(D.identity[Fx], M.psi[(y, z)]), M.psi[(x, P.tobj(y, z))])],
            )
        ]
        if left != right:
            report.add("psi-associator", (x, y, z), "associator compatibility fails")
            break

    for x, y in itertools.product(C.objects, repeat=2):
        Fx, Fy = M.on_obj(x), M.on_obj(y)
        left = D.compose[(M.psi[(y, x)], M.on_mor(P.symmetry[(x, y)]))]
        right = D.compose[(Q.symmetry[(Fx, Fy)], M.psi[(x, y)])]
        if left != right:
            report.add("psi-symmetry", (x, y), "symmetry compatibility fails")
            break

    for x in C.objects:
        Fx = M.on_obj(x)
        if D.compose[(M.psi[(P.unit, x)], M.on_mor(P.left_unit[x]))] != Q.left_unit[Fx]:
            report.add("psi-left-unit", (x,), "left unitor compatibility fails")
            break
        if D.compose[(M.psi[(x, P.unit)], M.on_mor(P.right_unit[x]))] != Q.right_unit[Fx]:
            report.add("psi-right-unit", (x,), "right unitor compatibility fails")
            break
    return report


def monoidal_from_group_hom(
    P: PicardCategory,
    Q: PicardCategory,
    obj_map: dict,
    mor_map: dict,
) -> MonoidalFunctor:
    """Monoidal functor between split-style models induced by explicit maps,
    with identity compatibility components."""
    F = FinFunctor(P.underlying, Q.underlying, obj_map, mor_map)
    psi = {
        (x, y): Q.underlying.identity[Q.tobj(obj_map[x], obj_map[y])]
        for x in P.underlying.objects
        for y in P.underlying.objects
    }
    return MonoidalFunctor(P, Q, F, psi)
