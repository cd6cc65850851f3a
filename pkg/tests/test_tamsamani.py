import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pictam import nerve2
from pictam.fincat import discrete_category, is_equivalence, iso_classes, terminal_category
from pictam.generators import (
    embedded_cat_simplicial_map,
    embedded_tam2,
    embedded_tam2_map,
    random_category,
    random_groupoid,
    skeleton_functor,
)
from pictam.ktheory import k_theory
from pictam.tamsamani import (
    CatSimplicialMap,
    MultiSimplicialMap,
    NonNerveError,
    TruncatedMultiSimplicialSet,
    cat_simplicial_from_category,
    component_count,
    diag,
    discrete_msset,
    embed_const_last,
    hom_fiber,
    is_2_equivalence_cat,
    is_levelwise_equivalence_cat,
    is_n_equivalence,
    msset_product,
    nerve_msset,
    p_last,
    p_set,
    p_trunc,
    pi0,
    pi0_map,
    segal_map,
    tau1,
    validate_msmap,
    validate_structure,
    validate_tamsamani,
    validate_tamsamani_cat,
)

N = 3


class TestNerveAndTau1:
    def test_nerve_structure_valid(self):
        C = random_category(5)
        rep = validate_structure(nerve_msset(C, N))
        assert rep.ok, str(rep)

    def test_nerve_satisfies_strict_segal(self):
        C = random_category(8)
        X = nerve_msset(C, N)
        for k in (2, 3):
            comp = segal_map(X, k)
            assert comp.is_bijection

    def test_empty_level_two_fails_segal(self):
        # two composable edges but no filler
        levels = {(0,): ("a", "b", "c"), (1,): ("f", "g", "ia", "ib", "ic"), (2,): (), (3,): ()}
        d0 = {"f": "b", "g": "c", "ia": "a", "ib": "b", "ic": "c"}
        d1 = {"f": "a", "g": "b", "ia": "a", "ib": "b", "ic": "c"}
        faces = {(0, (1,), 0): d0, (0, (1,), 1): d1}
        for k in (2, 3):
            for i in range(k + 1):
                faces[(0, (k,), i)] = {}
        degs = {(0, (0,), 0): {"a": "ia", "b": "ib", "c": "ic"}}
        for k in (1, 2):
            for i in range(k + 1):
                degs[(0, (k,), i)] = {} if k > 1 else {e: None for e in ()}
        degs[(0, (1,), 0)] = {}
        degs[(0, (1,), 1)] = {}
        X = TruncatedMultiSimplicialSet(1, N, levels, faces, degs)
        comp = segal_map(X, 2)
        assert not comp.is_bijection
        assert comp.witness[0] == "not-surjective"

    def test_tau1_recovers_category(self):
        C = random_category(13)
        T, edge_class = tau1(nerve_msset(C, N))
        assert set(T.objects) == set(C.objects)
        assert len(T.morphisms) == len(C.morphisms)
        # compositions agree under the canonical matching of single chains
        match = {edge_class[(f,)]: f for f in C.morphisms}
        for g, f in itertools.islice(C.composable_pairs(), 200):
            lhs = match[T.compose[(edge_class[(g,)], edge_class[(f,)])]]
            assert lhs == C.compose[(g, f)]

    def test_tau1_needs_fillers(self):
        X = nerve_msset(random_category(2), N)
        levels = dict(X.levels)
        levels[(2,)] = ()
        faces = {k: ({} if k[1] == (2,) else v) for k, v in X.faces.items()}
        faces = {k: v for k, v in faces.items() if k[1] != (3,)}
        degs = {k: v for k, v in X.degeneracies.items() if k[1][0] < 2}
        broken = TruncatedMultiSimplicialSet(
            1, 2, {(0,): X.levels[(0,)], (1,): X.levels[(1,)], (2,): ()},
            {k: v for k, v in X.faces.items() if k[1] == (1,)},
            {(0, (0,), 0): X.degeneracies[(0, (0,), 0)], (0, (1,), 0): {}, (0, (1,), 1): {}},
        )
        if any(True for _ in broken.levels[(1,)]):
            with pytest.raises(NonNerveError):
                tau1(broken)


class TestTruncationFunctor:
    def test_p_of_groupoid_nerve_is_classes(self):
        G = random_groupoid(4)
        classes, _ = p_set(nerve_msset(G, N))
        assert classes == iso_classes(G)[0]

    def test_p_of_discrete_is_itself(self):
        X = discrete_msset(2, N, ["u", "v"])
        PX = p_last(X)
        assert PX.levels[(0,)] == ("u", "v")
        assert pi0(X) == ("u", "v")

    @pytest.mark.parametrize("seed", [0, 3, 7])
    def test_p_slices_commute_2fold(self, seed):
        G = random_groupoid(seed, max_objects=2)
        X = embedded_tam2(G, N)
        PX = p_last(X)
        for s in range(N + 1):
            assert PX.levels[(s,)] == p_set(X.slice_first(s))[0]

    def test_p_slices_commute_3fold(self):
        G = random_groupoid(11, max_objects=2)
        X3 = embed_const_last(embedded_tam2(G, N))
        lhs = p_last(X3)
        for s in range(N + 1):
            L = lhs.slice_first(s)
            R = p_last(X3.slice_first(s))
            assert L.levels == R.levels and L.faces == R.faces

    def test_pi0_of_product_is_product(self):
        G = random_groupoid(2, max_objects=2)
        H = random_groupoid(6, max_objects=2)
        X = embedded_tam2(G, N)
        Y = embedded_tam2(H, N)
        assert len(pi0(msset_product(X, Y))) == len(pi0(X)) * len(pi0(Y))

    def test_pi0_of_nerve_counts_components(self):
        G = random_groupoid(9)
        assert len(pi0(embedded_tam2(G, N))) == len(iso_classes(G)[0])


class TestValidateTamsamani:
    def test_nerve_is_weak_1_category(self):
        C = random_category(3)
        rep = validate_tamsamani(nerve_msset(C, N), 1, "category")
        assert rep.ok

    def test_groupoid_mode_detects_non_groupoid(self):
        C = random_category(1)  # seed 1 contains a poset block
        X = nerve_msset(C, N)
        rep_cat = validate_tamsamani(X, 1, "category")
        rep_gpd = validate_tamsamani(X, 1, "groupoid")
        assert rep_cat.ok
        assert rep_gpd.ok == all(C.inverse(m) is not None for m in C.morphisms)

    def test_groupoid_mode_implies_category_mode(self):
        G = random_groupoid(5)
        X = embedded_tam2(G, N)
        assert validate_tamsamani(X, 2, "groupoid").ok
        assert validate_tamsamani(X, 2, "category").ok

    def test_non_discrete_level0_witnessed(self):
        G = random_groupoid(5)
        Xn = nerve_msset(G, N)
        # constant in the *first* coordinate: level 0 slice is the whole nerve
        levels = {(k1, k2): Xn.levels[(k2,)] for k1 in range(N + 1) for k2 in range(N + 1)}
        faces = {}
        degs = {}
        for k1 in range(N + 1):
            for k2 in range(N + 1):
                ident = {e: e for e in Xn.levels[(k2,)]}
                for i in range(k1 + 1):
                    if k1 >= 1:
                        faces[(0, (k1, k2), i)] = dict(ident)
                    if k1 <= N - 1:
                        degs[(0, (k1, k2), i)] = dict(ident)
                for i in range(k2 + 1):
                    if k2 >= 1:
                        faces[(1, (k1, k2), i)] = dict(Xn.faces[(0, (k2,), i)])
                    if k2 <= N - 1:
                        degs[(1, (k1, k2), i)] = dict(Xn.degeneracies[(0, (k2,), i)])
        X = TruncatedMultiSimplicialSet(2, N, levels, faces, degs)
        rep = validate_tamsamani(X, 2, "groupoid")
        assert not rep.ok
        assert rep.violations[0].kind == "discreteness"

    def test_2nerve_valid_both_engines(self, small_picard):
        nv = nerve2.nerve(small_picard, N)
        rep_cat = validate_tamsamani_cat(nv.diagram, "groupoid")
        assert rep_cat.ok
        X = nv.diagram.to_multisimplicial()
        assert validate_structure(X).ok
        rep_set = validate_tamsamani(X, 2, "groupoid")
        assert rep_set.ok
        assert len(X.levels[(0, 0)]) == 1

    def test_segal_equivalence_verdict_on_2nerve(self, small_picard):
        X = nerve2.nerve(small_picard, N).diagram.to_multisimplicial()
        for k in (2, 3):
            comp = segal_map(X, k)
            assert comp.verdict


class TestHomFiber:
    def test_one_object_fiber_is_everything(self, small_picard):
        X = nerve2.nerve(small_picard, N).diagram.to_multisimplicial()
        base = X.levels[(0, 0)][0]
        fiber = hom_fiber(X, base, base)
        for L in fiber.levels:
            assert fiber.levels[L] == X.levels[(1,) + L]

    def test_nerve_fiber_is_hom_set(self):
        G = random_groupoid(12)
        X = embedded_tam2(G, N)
        a, b = G.objects[0], G.objects[-1]
        fiber = hom_fiber(X, a, b)
        assert fiber.levels[(0,)] == G.hom(a, b)
        assert fiber.is_discrete()

    def test_2nerve_fiber_equivalent_to_underlying_nerve(self, small_picard):
        X = nerve2.nerve(small_picard, N).diagram.to_multisimplicial()
        base = X.levels[(0, 0)][0]
        fiber = hom_fiber(X, base, base)
        T, _ = tau1(fiber)
        # equivalent to the underlying groupoid of the input
        P = small_picard.underlying
        assert len(iso_classes(T)[0]) == len(iso_classes(P)[0])
        a = T.objects[0]
        assert len(T.hom(a, a)) == len(P.hom(P.objects[0], P.objects[0]))


class TestNEquivalences:
    def test_identity_is_equivalence(self):
        G = random_groupoid(3, max_objects=2)
        X = embedded_tam2(G, N)
        ident = MultiSimplicialMap(X, X, {K: {e: e for e in X.levels[K]} for K in X.levels})
        assert validate_msmap(ident).ok
        assert is_n_equivalence(ident, 2)

    @pytest.mark.parametrize("seed", [0, 2, 8])
    def test_skeleton_collapse_is_2_equivalence_with_pi0_bijection(self, seed):
        F = skeleton_functor(random_groupoid(seed, max_objects=2))
        f = embedded_tam2_map(F, N)
        assert validate_msmap(f).ok
        assert is_n_equivalence(f, 2)
        induced = pi0_map(f)
        assert len(set(induced.values())) == len(induced)

    def test_collapse_of_components_fails_with_p_witness(self):
        G = discrete_category(["a", "b"])
        T = terminal_category()
        from pictam.fincat import FinFunctor

        F = FinFunctor(G, T, {"a": "*", "b": "*"}, {("id", "a"): "id*", ("id", "b"): "id*"})
        f = embedded_tam2_map(F, N)
        verdict = is_n_equivalence(f, 2)
        assert not verdict
        assert verdict.witness[0] == "p-image"

    @pytest.mark.parametrize("seed", [1, 4])
    def test_levelwise_iff_equivalence_and_base_bijection(self, seed):
        G = random_groupoid(seed, max_objects=2)
        F = skeleton_functor(G)
        f = embedded_cat_simplicial_map(F, N)
        levelwise = is_levelwise_equivalence_cat(f)
        verdict = is_2_equivalence_cat(f)
        bij0 = len(G.objects) == len(F.codomain.objects)
        assert levelwise == (verdict.is_equivalence and bij0)
        ident = embedded_cat_simplicial_map(
            skeleton_functor(F.codomain), N
        )  # skeleton of a skeleton is an isomorphism
        assert is_levelwise_equivalence_cat(ident)
        assert is_2_equivalence_cat(ident)


class TestDiag:
    def test_diag_of_discrete(self):
        X = discrete_msset(3, N, ["p", "q"])
        D = diag(X)
        assert D.levels[(1,)] == ("p", "q")
        assert component_count(D) == 2

    def test_diag_of_embedded_nerve_is_nerve(self):
        G = random_groupoid(7, max_objects=2)
        D = diag(embedded_tam2(G, N))
        Xn = nerve_msset(G, N)
        assert D.levels == Xn.levels

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10**6))
    def test_components_of_diag_count_pi0(self, seed):
        X = embedded_tam2(random_groupoid(seed, max_objects=2), N)
        assert component_count(diag(X)) == len(pi0(X))


class TestCatSimplicialAgreement:
    def test_embedded_category_valid(self):
        G = random_groupoid(10, max_objects=2)
        D = cat_simplicial_from_category(G, N)
        assert D.validate_structure().ok
        assert validate_tamsamani_cat(D, "groupoid").ok
        X = embedded_tam2(G, N)
        assert validate_tamsamani(X, 2, "groupoid").ok

    def test_underlying_k_theory_valid_both_engines(self, corpus):
        from pictam.gamma import underlying_simplicial

        kt = k_theory(corpus["trivial"], N)
        D = underlying_simplicial(kt.gamma)
        assert validate_tamsamani_cat(D, "groupoid").ok
        X = D.to_multisimplicial()
        assert validate_tamsamani(X, 2, "groupoid").ok
