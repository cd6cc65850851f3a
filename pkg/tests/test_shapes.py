import itertools

import pytest

from pictam.shapes import (
    DeltaMap,
    GammaMap,
    all_delta_maps,
    all_gamma_maps,
    coface,
    codegeneracy,
    compose_delta,
    compose_gamma,
    delta_id,
    delta_interval,
    fold_map,
    gamma_generators,
    gamma_id,
    indicator,
    pair_indicator,
    phi,
    point_map,
    slot_map,
    swap_map,
)


class TestDeltaGenerators:
    def test_interval_values(self):
        # the interval [1] → [k] sends 0 to j-1 and 1 to j
        assert delta_interval(1, 2).values == (0, 1)
        assert delta_interval(2, 3).values == (1, 2)

    def test_coface_d0_into_1(self):
        assert coface(0, 1).values == (1,)

    def test_monotonicity_enforced(self):
        with pytest.raises(ValueError):
            DeltaMap(1, 2, (2, 1))

    def test_cosimplicial_identity_exhaustive(self):
        # d^j ∘ d^i = d^i ∘ d^{j-1} for i < j, all ranks up to 4
        for n in range(2, 5):
            for j in range(n + 1):
                for i in range(j):
                    lhs = compose_delta(coface(j, n), coface(i, n - 1))
                    rhs = compose_delta(coface(i, n), coface(j - 1, n - 1))
                    assert lhs == rhs, (n, i, j)

    def test_codegeneracy_section(self):
        # s^0 ∘ d^0 = id on all stored ranks
        for n in range(0, 4):
            lhs = compose_delta(codegeneracy(0, n), coface(0, n + 1))
            assert lhs == delta_id(n)

    def test_compose_with_identity(self):
        for alpha in all_delta_maps(2, 3):
            assert compose_delta(delta_id(3), alpha) == alpha
            assert compose_delta(alpha, delta_id(2)) == alpha

    def test_index_bounds_rejected(self):
        with pytest.raises(ValueError):
            coface(3, 2)
        with pytest.raises(ValueError):
            delta_interval(3, 2)


class TestGammaGenerators:
    def test_empty_indicator_constant(self):
        nu = indicator([], 3)
        assert all(nu(j) == 0 for j in range(4))

    def test_pair_indicator_preimages(self):
        mu = pair_indicator([1], [3], 4)
        assert mu.preimage(1) == frozenset([1])
        assert mu.preimage(2) == frozenset([3])

    def test_pair_indicator_rejects_overlap(self):
        with pytest.raises(ValueError):
            pair_indicator([1, 2], [2], 3)

    def test_singleton_pair_indicator_is_identity_assignment(self):
        assert pair_indicator([1], [2], 2).values == (0, 1, 2)

    def test_relations(self):
        # ν_1∘μ_{I,J} = ν_I, ν_2∘μ_{I,J} = ν_J, m∘μ_{I,J} = ν_{I⊔J}, ranks ≤ 4
        for n in range(5):
            universe = list(range(1, n + 1))
            for r1 in range(n + 1):
                for I in itertools.combinations(universe, r1):
                    rest = [j for j in universe if j not in I]
                    for r2 in range(len(rest) + 1):
                        for J in itertools.combinations(rest, r2):
                            mu = pair_indicator(I, J, n)
                            assert compose_gamma(indicator([1], 2), mu) == indicator(I, n)
                            assert compose_gamma(indicator([2], 2), mu) == indicator(J, n)
                            assert compose_gamma(fold_map(), mu) == indicator(set(I) | set(J), n)

    def test_named_generators_present(self):
        gens = gamma_generators(2)
        assert gens["m"] == fold_map()
        assert gens["tau"].values == (0, 2, 1)
        assert gens["iota1"].values == (0, 1)
        assert gens["iota2"].values == (0, 2)
        assert gens["a"] == point_map()
        assert gens[("nu", (1,))] == indicator([1], 2)

    def test_basepoint_enforced(self):
        with pytest.raises(ValueError):
            GammaMap(1, 1, (1, 1))


class TestPhi:
    def test_phi_of_inner_coface_is_fold(self):
        assert phi(coface(1, 2)) == fold_map()

    def test_phi_of_intervals_are_indicators(self):
        for k in range(1, 5):
            for j in range(1, k + 1):
                assert phi(delta_interval(j, k)) == indicator([j], k)

    def test_phi_identity(self):
        for n in range(4):
            assert phi(delta_id(n)) == gamma_id(n)

    def test_phi_of_codegeneracy_is_point(self):
        assert phi(codegeneracy(0, 0)) == point_map()

    def test_phi_contravariant_exhaustive(self):
        for m in range(4):
            for n in range(4):
                for p in range(4):
                    for alpha in all_delta_maps(m, n):
                        for beta in all_delta_maps(n, p):
                            lhs = phi(compose_delta(beta, alpha))
                            rhs = compose_gamma(phi(alpha), phi(beta))
                            assert lhs == rhs, (alpha.values, beta.values)

    def test_gamma_composition_counts(self):
        assert len(all_gamma_maps(2, 1)) == 4
        assert len(all_gamma_maps(0, 3)) == 1
