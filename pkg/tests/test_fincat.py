import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pictam.fincat import (
    FinCategory,
    FinFunctor,
    compose_functors,
    discrete_category,
    identity_functor,
    is_equivalence,
    iso_classes,
    product,
    terminal_category,
    validate_category,
    validate_functor,
    verify_nat_iso,
)
from pictam.generators import random_category, random_groupoid, skeleton_functor


def cyclic_delooping(n: int) -> FinCategory:
    """One object whose morphism monoid is Z/n under addition."""
    mors = [f"r{k}" for k in range(n)]
    return FinCategory(
        ("*",),
        tuple(mors),
        {m: "*" for m in mors},
        {m: "*" for m in mors},
        {"*": "r0"},
        {(f"r{a}", f"r{b}"): f"r{(a + b) % n}" for a in range(n) for b in range(n)},
    )


def brute_force_equivalence(F: FinFunctor) -> bool:
    """Independent fully-faithful + essentially-surjective decision, written as
    raw loops with its own inverse search."""
    C, D = F.domain, F.codomain
    for a in C.objects:
        for b in C.objects:
            dom = [f for f in C.morphisms if C.source[f] == a and C.target[f] == b]
            cod = [
                g
                for g in D.morphisms
                if D.source[g] == F.object_map[a] and D.target[g] == F.object_map[b]
            ]
            images = [F.morphism_map[f] for f in dom]
            if sorted(map(str, set(images))) != sorted(map(str, images)):
                return False
            if len(images) != len(cod):
                return False

    def has_inverse(g):
        a, b = D.source[g], D.target[g]
        return any(
            D.compose.get((h, g)) == D.identity[a] and D.compose.get((g, h)) == D.identity[b]
            for h in D.morphisms
            if D.source[h] == b and D.target[h] == a
        )

    image = set(F.object_map.values())
    for d in D.objects:
        if d in image:
            continue
        if not any(has_inverse(g) for g in D.morphisms if D.source[g] == d and D.target[g] in image):
            return False
    return True


class TestValidateCategory:
    def test_terminal_is_valid_groupoid(self):
        rep = validate_category(terminal_category())
        assert rep.ok and rep.is_groupoid

    def test_z2_delooping_valid_groupoid(self):
        # independent oracle: check the laws by raw enumeration first
        C = cyclic_delooping(2)
        for f in C.morphisms:
            assert C.compose[(f, C.identity["*"])] == f
            assert C.compose[(C.identity["*"], f)] == f
        for f, g, h in itertools.product(C.morphisms, repeat=3):
            assert C.compose[(h, C.compose[(g, f)])] == C.compose[(C.compose[(h, g)], f)]
        rep = validate_category(C)
        assert rep.ok and rep.is_groupoid

    def test_broken_associativity_reports_triple(self):
        C = cyclic_delooping(4)
        compose = dict(C.compose)
        compose[("r1", "r1")] = "r3"
        broken = FinCategory(C.objects, C.morphisms, C.source, C.target, C.identity, compose)
        rep = validate_category(broken)
        assert not rep.ok
        assert any(v.kind == "associativity" and len(v.witness) == 3 for v in rep.violations)

    def test_dangling_identifier_reported_before_laws(self):
        C = cyclic_delooping(2)
        source = dict(C.source)
        source["r1"] = "ghost"
        broken = FinCategory(C.objects, C.morphisms, source, C.target, C.identity, dict(C.compose))
        rep = validate_category(broken)
        assert rep.violations[0].kind == "dangling"

    def test_monoid_without_inverses_is_not_groupoid(self):
        mors = ["s0", "s1", "s2"]
        C = FinCategory(
            ("*",),
            tuple(mors),
            {m: "*" for m in mors},
            {m: "*" for m in mors},
            {"*": "s0"},
            {(f"s{a}", f"s{b}"): f"s{min(a + b, 2)}" for a in range(3) for b in range(3)},
        )
        rep = validate_category(C)
        assert rep.ok and rep.is_groupoid is False


class TestIsEquivalence:
    def test_identity(self):
        G = random_groupoid(3)
        assert is_equivalence(identity_functor(G))

    def test_discrete_two_to_terminal_fails_on_homs(self):
        C = discrete_category(["a", "b"])
        T = terminal_category()
        F = FinFunctor(C, T, {"a": "*", "b": "*"}, {("id", "a"): "id*", ("id", "b"): "id*"})
        verdict = is_equivalence(F)
        assert not verdict
        assert verdict.witness[0] == "hom-size-mismatch"

    @pytest.mark.parametrize("seed", [0, 1, 5, 9])
    def test_skeleton_inclusion_matches_brute_force(self, seed):
        F = skeleton_functor(random_groupoid(seed))
        assert is_equivalence(F).is_equivalence == brute_force_equivalence(F) == True  # noqa: E712

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6))
    def test_agrees_with_brute_force_on_random_collapses(self, seed):
        F = skeleton_functor(random_groupoid(seed))
        assert is_equivalence(F).is_equivalence == brute_force_equivalence(F)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6))
    def test_composite_of_equivalences_is_equivalence(self, seed):
        F = skeleton_functor(random_groupoid(seed))
        G = skeleton_functor(F.codomain)
        assert is_equivalence(F) and is_equivalence(G)
        assert is_equivalence(compose_functors(G, F))

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6))
    def test_equivalence_induces_class_bijection(self, seed):
        F = skeleton_functor(random_groupoid(seed))
        reps_d, cls_d = iso_classes(F.domain)
        reps_c, cls_c = iso_classes(F.codomain)
        induced = {}
        for x in F.domain.objects:
            induced.setdefault(cls_d[x], set()).add(cls_c[F.object_map[x]])
        assert all(len(v) == 1 for v in induced.values())
        values = {v.pop() for v in induced.values()}
        assert len(values) == len(induced) == len(reps_c) == len(reps_d)


class TestIsoClasses:
    def test_terminal_one_class(self):
        classes, _ = iso_classes(terminal_category())
        assert len(classes) == 1

    def test_discrete_three_classes(self):
        classes, _ = iso_classes(discrete_category(["x", "y", "z"]))
        assert len(classes) == 3

    def test_iso_pair_plus_isolated(self):
        mors = ["ia", "ib", "ic", "f", "g"]
        C = FinCategory(
            ("a", "b", "c"),
            tuple(mors),
            {"ia": "a", "ib": "b", "ic": "c", "f": "a", "g": "b"},
            {"ia": "a", "ib": "b", "ic": "c", "f": "b", "g": "a"},
            {"a": "ia", "b": "ib", "c": "ic"},
            {
                ("ia", "ia"): "ia",
                ("ib", "ib"): "ib",
                ("ic", "ic"): "ic",
                ("f", "ia"): "f",
                ("ib", "f"): "f",
                ("g", "ib"): "g",
                ("ia", "g"): "g",
                ("g", "f"): "ia",
                ("f", "g"): "ib",
            },
        )
        assert validate_category(C).ok
        classes, quotient = iso_classes(C)
        assert len(classes) == 2
        assert quotient["a"] == quotient["b"] != quotient["c"]

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6))
    def test_groupoid_inverses_unique(self, seed):
        G = random_groupoid(seed)
        for f in G.morphisms:
            a, b = G.source[f], G.target[f]
            inverses = [
                g
                for g in G.hom(b, a)
                if G.compose[(g, f)] == G.identity[a] and G.compose[(f, g)] == G.identity[b]
            ]
            assert len(inverses) == 1


class TestProduct:
    def test_product_with_terminal(self):
        C = random_category(7)
        P = product(C, terminal_category())
        assert len(P.objects) == len(C.objects)
        assert len(iso_classes(P)[0]) == len(iso_classes(C)[0])

    def test_discrete_products(self):
        P = product(discrete_category(["a", "b"]), discrete_category(["x", "y", "z"]))
        assert len(P.objects) == 6
        assert validate_category(P).ok

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6), st.integers(0, 10**6))
    def test_iso_classes_multiply(self, s1, s2):
        C, D = random_category(s1), random_category(s2)
        lhs, _ = iso_classes(product(C, D))
        assert len(lhs) == len(iso_classes(C)[0]) * len(iso_classes(D)[0])


class TestNatIso:
    def test_identity_components(self):
        G = random_groupoid(11)
        F = identity_functor(G)
        ok, _ = verify_nat_iso(F, F, {x: G.identity[x] for x in G.objects})
        assert ok

    def test_failing_square_reports_witness(self):
        # delooping of the symmetric group on three letters: non-central
        # components of id ⇒ id violate naturality
        perms = list(itertools.permutations(range(3)))

        def mul(p, q):  # p after q
            return tuple(p[q[i]] for i in range(3))

        name = {p: "p" + "".join(map(str, p)) for p in perms}
        C = FinCategory(
            ("*",),
            tuple(name.values()),
            {m: "*" for m in name.values()},
            {m: "*" for m in name.values()},
            {"*": name[(0, 1, 2)]},
            {(name[p], name[q]): name[mul(p, q)] for p in perms for q in perms},
        )
        assert validate_category(C).ok
        F = identity_functor(C)
        transposition = name[(1, 0, 2)]
        ok, witness = verify_nat_iso(F, F, {"*": transposition})
        assert not ok and witness[0] == "naturality"

    def test_missing_component_is_structural(self):
        G = random_groupoid(4)
        F = identity_functor(G)
        comps = {x: G.identity[x] for x in G.objects}
        comps.pop(G.objects[0])
        ok, witness = verify_nat_iso(F, F, comps)
        assert not ok and witness[0] == "missing-component"
