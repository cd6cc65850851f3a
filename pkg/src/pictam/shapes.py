"""Combinatorics of the simplex category and of finite pointed sets.

Maps are stored in function-table form (a tuple of values), so equality is
pointwise and exact.  The comparison functor `phi` translates simplex maps to
pointed maps contravariantly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class DeltaMap:
    """Order-preserving map [m] → [n]; values[i] is the image of i."""

    domain_rank: int
    codomain_rank: int
    values: tuple[int, ...]

    def __post_init__(self):
        m, n = self.domain_rank, self.codomain_rank
        if len(self.values) != m + 1:
            raise ValueError(f"expected {m + 1} values, got {len(self.values)}")
        if any(v < 0 or v > n for v in self.values):
            raise ValueError(f"values out of range for codomain [{n}]")
        if any(self.values[i] > self.values[i + 1] for i in range(m)):
            raise ValueError("map is not order preserving")

    def __call__(self, i: int) -> int:
        return self.values[i]

    def is_identity(self) -> bool:
        return self.domain_rank == self.codomain_rank and self.values == tuple(range(self.domain_rank + 1))


@dataclass(frozen=True)
class GammaMap:
    """Pointed map ⟨n⟩ → ⟨m⟩ with 0 ↦ 0; values[j] is the image of j."""

    domain_rank: int
    codomain_rank: int
    values: tuple[int, ...]

    def __post_init__(self):
        n, m = self.domain_rank, self.codomain_rank
        if len(self.values) != n + 1:
            raise ValueError(f"expected {n + 1} values, got {len(self.values)}")
        if self.values and self.values[0] != 0:
            raise ValueError("basepoint not preserved")
        if any(v < 0 or v > m for v in self.values):
            raise ValueError(f"values out of range for codomain ⟨{m}⟩")

    def __call__(self, j: int) -> int:
        return self.values[j]

    def preimage(self, k: int) -> frozenset:
        """Non-basepoint preimage of k ∈ ⟨m⟩, as a subset of {1..n}."""
        return frozenset(j for j in range(1, self.domain_rank + 1) if self.values[j] == k)

    def is_identity(self) -> bool:
        return self.domain_rank == self.codomain_rank and self.values == tuple(range(self.domain_rank + 1))

    def key(self) -> tuple:
        return (self.domain_rank, self.codomain_rank, self.values)


# -- simplex category -------------------------------------------------------


def delta_id(n: int) -> DeltaMap:
    return DeltaMap(n, n, tuple(range(n + 1)))


def coface(i: int, n: int) -> DeltaMap:
    """d^i : [n-1] → [n], the injection missing i."""
    if not 0 <= i <= n or n < 1:
        raise ValueError(f"coface index {i} out of range for [{n}]")
    return DeltaMap(n - 1, n, tuple(v if v < i else v + 1 for v in range(n)))


def codegeneracy(i: int, n: int) -> DeltaMap:
    """s^i : [n+1] → [n], the surjection repeating i."""
    if not 0 <= i <= n:
        raise ValueError(f"codegeneracy index {i} out of range for [{n}]")
    return DeltaMap(n + 1, n, tuple(v if v <= i else v - 1 for v in range(n + 2)))


def delta_interval(j: int, k: int) -> DeltaMap:
    """ν^j : [1] → [k] sending 0 to j-1 and 1 to j (needs 1 ≤ j ≤ k)."""
    if not 1 <= j <= k:
        raise ValueError(f"interval index {j} out of range for [{k}]")
    return DeltaMap(1, k, (j - 1, j))


def delta_generators(n: int) -> dict:
    """Cofaces and codegeneracies touching [n], plus the intervals ν^j into [n]."""
    gens: dict = {}
    for i in range(n + 1):
        if n >= 1:
            gens[("d", i)] = coface(i, n)
        gens[("s", i)] = codegeneracy(i, n)
    for j in range(1, n + 1):
        gens[("nu", j)] = delta_interval(j, n)
    return gens


def compose_delta(beta: DeltaMap, alpha: DeltaMap) -> DeltaMap:
    """β∘α (α applied first)."""
    if alpha.codomain_rank != beta.domain_rank:
        raise ValueError("rank mismatch in Δ composition")
    return DeltaMap(alpha.domain_rank, beta.codomain_rank, tuple(beta(v) for v in alpha.values))


def all_delta_maps(m: int, n: int) -> list[DeltaMap]:
    """All order-preserving maps [m] → [n], lexicographically ordered."""
    return [
        DeltaMap(m, n, values)
        for values in itertools.combinations_with_replacement(range(n + 1), m + 1)
    ]


# -- finite pointed sets ------------------------------------------------------


def gamma_id(n: int) -> GammaMap:
    return GammaMap(n, n, tuple(range(n + 1)))


def point_map() -> GammaMap:
    """The unique map a : ⟨0⟩ → ⟨1⟩."""
    return GammaMap(0, 1, (0,))


def fold_map() -> GammaMap:
    """m : ⟨2⟩ → ⟨1⟩ sending both 1 and 2 to 1."""
    return GammaMap(2, 1, (0, 1, 1))


def swap_map() -> GammaMap:
    """τ : ⟨2⟩ → ⟨2⟩ with τ(1) = 2 and τ(2) = 1."""
    return GammaMap(2, 2, (0, 2, 1))


def slot_map(j: int) -> GammaMap:
    """ι_j : ⟨1⟩ → ⟨2⟩ with ι_j(1) = j, for j = 1, 2."""
    if j not in (1, 2):
        raise ValueError("slot index must be 1 or 2")
    return GammaMap(1, 2, (0, j))


def indicator(I: Iterable[int], n: int) -> GammaMap:
    """ν_I : ⟨n⟩ → ⟨1⟩ with ν_I⁻¹(1) = I."""
    I = frozenset(I)
    if any(j < 1 or j > n for j in I):
        raise ValueError(f"subset {sorted(I)} not contained in {{1..{n}}}")
    return GammaMap(n, 1, tuple(0 if j == 0 else int(j in I) for j in range(n + 1)))


def pair_indicator(I: Iterable[int], J: Iterable[int], n: int) -> GammaMap:
    """μ_{I,J} : ⟨n⟩ → ⟨2⟩ with μ⁻¹(1) = I and μ⁻¹(2) = J (I, J disjoint)."""
    I, J = frozenset(I), frozenset(J)
    if I & J:
        raise ValueError(f"subsets {sorted(I)} and {sorted(J)} overlap")
    if any(j < 1 or j > n for j in I | J):
        raise ValueError(f"subsets not contained in {{1..{n}}}")
    values = [0]
    for j in range(1, n + 1):
        values.append(1 if j in I else 2 if j in J else 0)
    return GammaMap(n, 2, tuple(values))


def gamma_generators(n: int) -> dict:
    """The named pointed maps out of ⟨n⟩ (indicators, pair indicators) together
    with m, τ, ι_1, ι_2, a."""
    gens: dict = {"m": fold_map(), "tau": swap_map(), "iota1": slot_map(1), "iota2": slot_map(2), "a": point_map()}
    universe = list(range(1, n + 1))
    for r in range(len(universe) + 1):
        for I in itertools.combinations(universe, r):
            gens[("nu", I)] = indicator(I, n)
    for I, J in itertools.permutations([frozenset(s) for r in range(1, n + 1) for s in itertools.combinations(universe, r)], 2):
        if not I & J:
            gens[("mu", tuple(sorted(I)), tuple(sorted(J)))] = pair_indicator(I, J, n)
    return gens


def compose_gamma(g: GammaMap, f: GammaMap) -> GammaMap:
    """g∘f (f applied first)."""
    if f.codomain_rank != g.domain_rank:
        raise ValueError("rank mismatch in Γ composition")
    return GammaMap(f.domain_rank, g.codomain_rank, tuple(g(v) for v in f.values))


def all_gamma_maps(n: int, m: int) -> list[GammaMap]:
    """All pointed maps ⟨n⟩ → ⟨m⟩, lexicographically ordered."""
    return [
        GammaMap(n, m, (0,) + values)
        for values in itertools.product(range(m + 1), repeat=n)
    ]


# -- the comparison functor ---------------------------------------------------


def phi(alpha: DeltaMap) -> GammaMap:
    """Translate α : [m] → [n] into the pointed map ⟨n⟩ → ⟨m⟩ sending j to the
    unique i with α(i-1) < j ≤ α(i), and to the basepoint when no such i exists.
    Contravariant: phi(β∘α) = phi(α)∘phi(β)."""
    m, n = alpha.domain_rank, alpha.codomain_rank
    values = [0]
    for j in range(1, n + 1):
        image = 0
        for i in range(1, m + 1):
            if alpha(i - 1) + 1 <= j <= alpha(i):
                image = i
                break
        values.append(image)
    return GammaMap(n, m, tuple(values))
