import itertools
from dataclasses import replace

import pytest

from pictam.picard import (
    TRIVIAL_GROUP,
    Z2,
    Z2xZ2,
    Z3,
    FiniteAbelianGroup,
    GroupTable,
    build_split,
    compose_monoidal,
    group_isomorphic,
    group_like_failures_only,
    identity_monoidal,
    monoidal_from_group_hom,
    pi_invariants,
    truncated_addition_monoid,
    validate_monoidal_functor,
    validate_picard,
)


def beta_xy(x, y):
    return ((x[0] * y[0]) % 2,)


class TestValidatePicard:
    def test_trivial(self, corpus):
        rep = validate_picard(corpus["trivial"])
        assert rep.ok

    @pytest.mark.parametrize("name", ["z2", "z3", "b-z2", "z2-z2", "z2-z2-twisted"])
    def test_corpus_instances(self, corpus, name):
        assert validate_picard(corpus[name]).ok

    def test_symmetry_involution_corruption_witnessed(self, twisted_picard):
        P = twisted_picard
        symmetry = dict(P.symmetry)
        key = ("0", "1")  # asymmetric corruption: breaks the involution
        C = P.underlying
        current = symmetry[key]
        symmetry[key] = next(m for m in C.hom(C.source[current], C.target[current]) if m != current)
        rep = validate_picard(replace(P, symmetry=symmetry))
        assert not rep.ok
        kinds = {v.kind for v in rep.violations}
        assert "involution" in kinds

    def test_corrupting_one_diagonal_symmetry_lands_on_the_untwisted_structure(self, twisted_picard):
        # flipping γ at exactly (1,1) turns the twisted instance into the
        # untwisted one, which is again valid: single-component corruption is
        # only guaranteed to flip the verdict at the canonical component
        P = twisted_picard
        symmetry = dict(P.symmetry)
        current = symmetry[("1", "1")]
        C = P.underlying
        symmetry[("1", "1")] = next(
            m for m in C.hom(C.source[current], C.target[current]) if m != current
        )
        assert validate_picard(replace(P, symmetry=symmetry)).ok

    def test_discrete_on_z2(self):
        P = build_split(Z2, TRIVIAL_GROUP)
        assert len(P.underlying.objects) == 2
        assert len(P.underlying.morphisms) == 2
        assert validate_picard(P).ok

    def test_one_object_with_aut_z2(self):
        P = build_split(TRIVIAL_GROUP, Z2)
        assert len(P.underlying.objects) == 1
        assert len(P.underlying.morphisms) == 2
        assert validate_picard(P).ok

    def test_twisted_symmetry_nontrivial(self):
        P = build_split(Z2, Z2, beta_xy)
        gamma_11 = P.symmetry[("1", "1")]
        assert gamma_11 != P.underlying.identity["0"]
        assert validate_picard(P).ok


class TestBuildSplit:
    def test_rejects_non_antisymmetric_beta(self):
        with pytest.raises(ValueError, match="antisymmetry"):
            build_split(Z3, Z3, lambda x, y: ((x[0] * y[0]) % 3,))

    def test_rejects_non_biadditive_beta(self):
        with pytest.raises(ValueError, match="additive"):
            build_split(Z2, Z2, lambda x, y: ((x[0] + y[0]) % 2,))

    def test_z2xz2_instance(self):
        P = build_split(Z2xZ2, TRIVIAL_GROUP)
        assert len(P.underlying.objects) == 4
        assert validate_picard(P).ok


class TestMonoidWithoutInverses:
    def test_group_likeness_is_the_only_failure(self):
        rep = validate_picard(truncated_addition_monoid(2))
        assert not rep.ok
        assert group_like_failures_only(rep)

    def test_commutativity_required(self):
        els = ["a", "b"]
        op = {("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "b", ("b", "b"): "b"}
        with pytest.raises(ValueError, match="commutative"):
            from pictam.picard import build_discrete_monoidal

            build_discrete_monoidal(els, op, "a")


class TestPiInvariants:
    def test_trivial(self, corpus):
        inv = pi_invariants(corpus["trivial"])
        assert len(inv.pi0.elements) == 1
        assert len(inv.pi1.elements) == 1

    def test_twisted_z2_z2(self, twisted_picard):
        inv = pi_invariants(twisted_picard)
        assert len(inv.pi0.elements) == 2 and inv.pi0.is_group()
        assert len(inv.pi1.elements) == 2
        nontrivial_class = next(c for c in inv.pi0.elements if c != inv.pi0.unit)
        assert inv.q[nontrivial_class] != inv.pi1.unit

    def test_z3_with_pi1_z2(self):
        P = build_split(Z3, Z2)
        inv = pi_invariants(P)
        assert len(inv.pi0.elements) == 3
        assert len(inv.pi1.elements) == 2
        assert all(v == inv.pi1.unit for v in inv.q.values())

    @pytest.mark.parametrize("name", ["trivial", "z2", "z3", "b-z2", "z2-z2", "z2-z2-twisted"])
    def test_pi0_abelian_and_q_two_torsion(self, corpus, name):
        inv = pi_invariants(corpus[name])
        assert inv.pi0.is_abelian()
        for cls, u in inv.q.items():
            doubled = inv.pi1.table[(u, u)]
            assert doubled == inv.pi1.unit

    def test_split_recovers_groups(self):
        P = build_split(Z2xZ2, Z3)
        inv = pi_invariants(P)
        z2z2_table = GroupTable(
            tuple(sorted("0.0 0.1 1.0 1.1".split())),
            {
                (a, b): ".".join(
                    str((int(a.split(".")[i]) + int(b.split(".")[i])) % 2) for i in range(2)
                )
                for a in "0.0 0.1 1.0 1.1".split()
                for b in "0.0 0.1 1.0 1.1".split()
            },
            "0.0",
        )
        assert group_isomorphic(inv.pi0, z2z2_table)
        assert len(inv.pi1.elements) == 3


class TestMonoidalFunctors:
    def test_identity_valid(self, twisted_picard):
        assert validate_monoidal_functor(identity_monoidal(twisted_picard)).ok

    def test_group_isomorphism_between_split_models(self):
        P = build_split(Z3, TRIVIAL_GROUP)
        Q = build_split(Z3, TRIVIAL_GROUP)
        # negation is an automorphism of Z/3 compatible with the trivial twist
        obj_map = {"0": "0", "1": "2", "2": "1"}
        mor_map = {P.underlying.identity[x]: Q.underlying.identity[obj_map[x]] for x in obj_map}
        M = monoidal_from_group_hom(P, Q, obj_map, mor_map)
        assert validate_monoidal_functor(M).ok

    def test_corrupted_psi_witnessed(self, small_picard):
        M = identity_monoidal(small_picard)
        psi = dict(M.psi)
        key = sorted(psi.keys())[0]
        C = small_picard.underlying
        current = psi[key]
        psi[key] = next(m for m in C.hom(C.source[current], C.target[current]) if m != current)
        M_bad = replace_monoidal(M, psi)
        rep = validate_monoidal_functor(M_bad)
        assert not rep.ok
        assert any(v.kind.startswith("psi-") for v in rep.violations)

    def test_unit_strictness_is_a_distinct_violation(self):
        P = build_split(Z2, TRIVIAL_GROUP)
        F = identity_monoidal(P)
        bad_obj = {x: ("1" if x == "0" else "0") for x in P.underlying.objects}
        bad_mor = {P.underlying.identity[x]: P.underlying.identity[bad_obj[x]] for x in bad_obj}
        from pictam.fincat import FinFunctor
        from pictam.picard import MonoidalFunctor

        M = MonoidalFunctor(P, P, FinFunctor(P.underlying, P.underlying, bad_obj, bad_mor), F.psi)
        rep = validate_monoidal_functor(M)
        assert not rep.ok
        assert rep.violations[0].kind == "unit-not-strict"

    def test_composition(self, small_picard):
        M = compose_monoidal(identity_monoidal(small_picard), identity_monoidal(small_picard))
        assert validate_monoidal_functor(M).ok


def replace_monoidal(M, psi):
    from pictam.picard import MonoidalFunctor

    return MonoidalFunctor(M.domain, M.codomain, M.functor, psi)
