"""Truncated Γ-objects in finite groupoids and the special / very-special checks.

A `TruncatedGammaGroupoid` stores one finite groupoid per pointed-set rank
0..N and an action functor for *every* pointed map between stored ranks (there
are finitely many).  Functors are materialized lazily behind an `ActionTable`;
the exhaustive functoriality validation runs on interned index arrays so that
coherence-data groupoids with tens of thousands of morphisms stay tractable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .fincat import (
    FinCategory,
    FinFunctor,
    ValidationReport,
    ident_key,
    is_equivalence,
    iso_classes,
    product_many,
    validate_category,
    validate_functor,
)
from .picard import GroupTable
from .shapes import (
    GammaMap,
    all_gamma_maps,
    coface,
    codegeneracy,
    compose_gamma,
    fold_map,
    gamma_id,
    indicator,
    phi,
)
from .tamsamani import CatSimplicialObject, InternalConsistencyError, validate_tamsamani_cat


class ActionTable:
    """The finite map {pointed map between stored ranks → action functor}.

    Functor values are built on demand and memoized; an index-array view of
    each value is kept for the exhaustive validation passes.
    """

    def __init__(
        self,
        truncation: int,
        levels: dict,
        functor_builder: Optional[Callable[[GammaMap], FinFunctor]] = None,
        array_builder: Optional[Callable[[GammaMap], tuple]] = None,
    ):
        if functor_builder is None and array_builder is None:
            raise ValueError("need at least one builder")
        self.truncation = truncation
        self.levels = levels
        self._functor_builder = functor_builder
        self._array_builder = array_builder
        self._functors: dict = {}
        self._arrays: dict = {}
        self._obj_index = {
            n: {x: i for i, x in enumerate(levels[n].objects)} for n in levels
        }
        self._mor_index = {
            n: {f: i for i, f in enumerate(levels[n].morphisms)} for n in levels
        }

    def maps(self):
        for n in range(self.truncation + 1):
            for m in range(self.truncation + 1):
                yield from all_gamma_maps(n, m)

    def functor(self, gm: GammaMap) -> FinFunctor:
        key = gm.key()
        if key not in self._functors:
            if self._functor_builder is not None:
                self._functors[key] = self._functor_builder(gm)
            else:
                obj_arr, mor_arr = self.arrays(gm)
                dom, cod = self.levels[gm.domain_rank], self.levels[gm.codomain_rank]
                self._functors[key] = FinFunctor(
                    dom,
                    cod,
                    {x: cod.objects[obj_arr[i]] for i, x in enumerate(dom.objects)},
                    {f: cod.morphisms[mor_arr[i]] for i, f in enumerate(dom.morphisms)},
                )
        return self._functors[key]

    def arrays(self, gm: GammaMap) -> tuple:
        key = gm.key()
        if key not in self._arrays:
            if self._array_builder is not None:
                self._arrays[key] = self._array_builder(gm)
            else:
                F = self.functor(gm)
                dom, cod = self.levels[gm.domain_rank], self.levels[gm.codomain_rank]
                oi, mi = self._obj_index[gm.codomain_rank], self._mor_index[gm.codomain_rank]
                obj_arr = np.fromiter(
                    (oi[F.object_map[x]] for x in dom.objects), dtype=np.int64, count=len(dom.objects)
                )
                mor_arr = np.fromiter(
                    (mi[F.morphism_map[f]] for f in dom.morphisms),
                    dtype=np.int64,
                    count=len(dom.morphisms),
                )
                self._arrays[key] = (obj_arr, mor_arr)
        return self._arrays[key]

    def __getitem__(self, gm: GammaMap) -> FinFunctor:
        return self.functor(gm)


@dataclass(eq=False)
class TruncatedGammaGroupoid:
    truncation: int
    levels: dict  # rank → FinCategory
    action: ActionTable
    name: str = "A"

    def level(self, n: int) -> FinCategory:
        return self.levels[n]


def build_gamma_groupoid(
    truncation: int,
    levels: dict,
    functor_builder: Callable[[GammaMap], FinFunctor],
    name: str = "A",
    array_builder: Optional[Callable[[GammaMap], tuple]] = None,
) -> TruncatedGammaGroupoid:
    table = ActionTable(truncation, levels, functor_builder, array_builder)
    return TruncatedGammaGroupoid(truncation, levels, table, name)


def validate_gamma_groupoid(A: TruncatedGammaGroupoid, check_levels: bool = True) -> ValidationReport:
    """Structural validation: terminal level 0, groupoid levels, identity
    actions, and functoriality of the action over *all* composable pairs of
    stored pointed maps (run on index arrays)."""
    report = ValidationReport()
    N = A.truncation
    for n in range(N + 1):
        if n not in A.levels:
            report.add("missing-level", (n,), "level absent")
    if not report.ok:
        return report
    L0 = A.levels[0]
    if len(L0.objects) != 1 or len(L0.morphisms) != 1:
        report.add("level0-not-terminal", (len(L0.objects), len(L0.morphisms)), "rank-0 level must be terminal")
    if check_levels:
        for n in range(N + 1):
            sub = validate_category(A.levels[n])
            if not sub.ok:
                report.add("level-invalid", (n,), f"level fails category laws: {sub.violations[0]}")
            elif not sub.is_groupoid:
                report.add("level-not-groupoid", (n,), "level fails the groupoid test")
    if not report.ok:
        return report

    for n in range(N + 1):
        obj_arr, mor_arr = A.action.arrays(gamma_id(n))
        if not (
            np.array_equal(obj_arr, np.arange(len(A.levels[n].objects)))
            and np.array_equal(mor_arr, np.arange(len(A.levels[n].morphisms)))
        ):
            report.add("identity-action", (n,), "identity pointed map does not act as the identity")

    for n in range(N + 1):
        for m in range(N + 1):
            for f in all_gamma_maps(n, m):
                f_obj, f_mor = A.action.arrays(f)
                for kk in range(N + 1):
                    for g in all_gamma_maps(m, kk):
                        g_obj, g_mor = A.action.arrays(g)
                        gf_obj, gf_mor = A.action.arrays(compose_gamma(g, f))
                        if not np.array_equal(g_obj[f_obj], gf_obj) or not np.array_equal(
                            g_mor[f_mor], gf_mor
                        ):
                            report.add(
                                "action-functoriality",
                                (f.key(), g.key()),
                                "action does not respect composition of pointed maps",
                            )
                            return report
    return report


@dataclass(eq=False)
class GammaMorphism:
    domain: TruncatedGammaGroupoid
    codomain: TruncatedGammaGroupoid
    components: dict  # rank → FinFunctor


def validate_gamma_morphism(F: GammaMorphism, check_functors: bool = True) -> ValidationReport:
    """Commutation with the action of every stored pointed map, on index arrays."""
    report = ValidationReport()
    A, B = F.domain, F.codomain
    N = A.truncation
    if B.truncation != N:
        report.add("shape", (N, B.truncation), "truncations differ")
        return report
    comp_obj = {}
    comp_mor = {}
    for n in range(N + 1):
        comp = F.components.get(n)
        if comp is None:
            report.add("missing-component", (n,), "no functor at this rank")
            continue
        if check_functors:
            sub = validate_functor(comp)
            if not sub.ok:
                report.add("component-invalid", (n,), f"level functor invalid: {sub.violations[0]}")
                continue
        oi = {x: i for i, x in enumerate(B.levels[n].objects)}
        mi = {f: i for i, f in enumerate(B.levels[n].morphisms)}
        comp_obj[n] = np.fromiter(
            (oi[comp.object_map[x]] for x in A.levels[n].objects),
            dtype=np.int64,
            count=len(A.levels[n].objects),
        )
        comp_mor[n] = np.fromiter(
            (mi[comp.morphism_map[f]] for f in A.levels[n].morphisms),
            dtype=np.int64,
            count=len(A.levels[n].morphisms),
        )
    if not report.ok:
        return report
    for n in range(N + 1):
        for m in range(N + 1):
            for s in all_gamma_maps(n, m):
                a_obj, a_mor = A.action.arrays(s)
                b_obj, b_mor = B.action.arrays(s)
                if not np.array_equal(b_obj[comp_obj[n]], comp_obj[m][a_obj]) or not np.array_equal(
                    b_mor[comp_mor[n]], comp_mor[m][a_mor]
                ):
                    report.add("action-commutation", (s.key(),), "component does not commute with an action map")
                    return report
    return report


def underlying_simplicial(A: TruncatedGammaGroupoid) -> CatSimplicialObject:
    """Precompose with the simplex-to-pointed-sets translation: the truncated
    simplicial object in categories with levels A⟨0⟩..A⟨N⟩."""
    N = A.truncation
    faces = {
        (k, i): A.action.functor(phi(coface(i, k)))
        for k in range(1, N + 1)
        for i in range(k + 1)
    }
    degs = {
        (k, i): A.action.functor(phi(codegeneracy(i, k)))
        for k in range(N)
        for i in range(k + 1)
    }
    return CatSimplicialObject(N, [A.levels[k] for k in range(N + 1)], faces, degs)


def indicator_tuple_functor(A: TruncatedGammaGroupoid, n: int) -> FinFunctor:
    """The functor (ν_1, …, ν_n) : A⟨n⟩ → A⟨1⟩ⁿ."""
    target = product_many([A.levels[1]] * n)
    fs = [A.action.functor(indicator([j], n)) for j in range(1, n + 1)]
    dom = A.levels[n]
    obj_map = {x: tuple(F.object_map[x] for F in fs) for x in dom.objects}
    mor_map = {f: tuple(F.morphism_map[f] for F in fs) for f in dom.morphisms}
    return FinFunctor(dom, target, obj_map, mor_map)


def is_special(A: TruncatedGammaGroupoid) -> tuple[bool, Optional[tuple]]:
    """For each 2 ≤ n ≤ N, the indicator-induced functor A⟨n⟩ → A⟨1⟩ⁿ must be
    an equivalence of categories."""
    for n in range(2, A.truncation + 1):
        verdict = is_equivalence(indicator_tuple_functor(A, n), validate=False)
        if not verdict:
            return False, (n, verdict.witness)
    return True, None


def pi0_monoid(A: TruncatedGammaGroupoid) -> GroupTable:
    """The induced multiplication on iso-classes of A⟨1⟩.

    Composes the fold-map action with the inverse of the class bijection
    (ν_1, ν_2); the table is recomputed with a second section and asserted
    independent of the choice.
    """
    C1, C2 = A.levels[1], A.levels[2]
    reps1, cls1 = iso_classes(C1)
    reps2, cls2 = iso_classes(C2)
    nu1 = A.action.functor(indicator([1], 2))
    nu2 = A.action.functor(indicator([2], 2))
    fold = A.action.functor(fold_map())

    pairs: dict = {}
    class_pairs: dict = {}
    for c in C2.objects:
        key = (cls1[nu1.object_map[c]], cls1[nu2.object_map[c]])
        pairs.setdefault(key, []).append(c)
        class_pairs.setdefault(key, set()).add(cls2[c])
    if sorted(pairs.keys()) != sorted(itertools.product(reps1, repeat=2)) or any(
        len(v) != 1 for v in class_pairs.values()
    ):
        raise ValueError("(ν_1, ν_2) is not a bijection on iso classes; the input is not special")

    def table_with(pick: Callable[[list], object]) -> dict:
        return {
            key: cls1[fold.object_map[pick(sorted(candidates, key=ident_key))]]
            for key, candidates in pairs.items()
        }

    table = table_with(lambda cands: cands[0])
    second = table_with(lambda cands: cands[-1])
    if table != second:
        raise InternalConsistencyError("pi0 multiplication depends on the chosen section")
    unit_class = cls1[A.action.functor(indicator([], 1)).object_map[C1.objects[0]]]
    tbl = GroupTable(reps1, table, unit_class)
    if not tbl.is_abelian():
        raise InternalConsistencyError("pi0 multiplication is not commutative")
    for a, b, c in itertools.product(reps1, repeat=3):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            raise InternalConsistencyError("pi0 multiplication is not associative")
    return tbl


def is_very_special(A: TruncatedGammaGroupoid) -> tuple[bool, Optional[tuple]]:
    special, witness = is_special(A)
    if not special:
        return False, ("not-special", witness)
    tbl = pi0_monoid(A)
    unit = tbl.unit
    for a in tbl.elements:
        if not any(tbl.table[(a, b)] == unit for b in tbl.elements):
            return False, ("no-inverse", (a,))
    return True, None


def validate_pictam(A: TruncatedGammaGroupoid, validate_structure: bool = True) -> tuple[bool, ValidationReport]:
    """Both characterizations of the one-object symmetric-monoidal-groupoid
    shape: (1) very special Γ-object in groupoids with terminal rank 0, and
    (2) the underlying simplicial object is a one-object weak 2-groupoid.
    Both are computed and must agree; disagreement is a bug signal."""
    report = ValidationReport()
    if validate_structure:
        report = validate_gamma_groupoid(A)
        if not report.ok:
            return False, report
    vs, witness = is_very_special(A)
    if not vs:
        report.add("not-very-special", witness or (), "fails the very-special condition")

    D = underlying_simplicial(A)
    tam = validate_tamsamani_cat(D, mode="groupoid")
    one_object = len(A.levels[0].objects) == 1
    char2 = tam.ok and one_object
    if not char2:
        detail = "not one object" if tam.ok else str(tam.violations[0])
        report.add("underlying-not-2-groupoid", (), detail)
    if vs != char2:
        raise InternalConsistencyError(
            f"characterizations disagree: very-special={vs}, one-object-2-groupoid={char2}"
        )
    return vs, report


def is_levelwise_equivalence(F: GammaMorphism) -> tuple[bool, Optional[tuple]]:
    for n in range(F.domain.truncation + 1):
        verdict = is_equivalence(F.components[n], validate=False)
        if not verdict:
            return False, (n, verdict.witness)
    return True, None


def constant_terminal_gamma(N: int) -> TruncatedGammaGroupoid:
    from .fincat import terminal_category

    T = terminal_category()
    levels = {n: T for n in range(N + 1)}

    def builder(gm: GammaMap) -> FinFunctor:
        return FinFunctor(T, T, {"*": "*"}, {"id*": "id*"})

    return build_gamma_groupoid(N, levels, builder, name="terminal")
