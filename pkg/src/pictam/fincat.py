"""Finite categories given by explicit tables, with exhaustive decision procedures.

Everything in this module is identifier-based: objects and morphisms are opaque
hashable identifiers (strings, ints, or nested tuples thereof), equality is
identifier equality, and every law is checked by enumeration.  Categories are
desk-scale; the only concession to size is an optional rule-backed composition
table for categories whose set of composable pairs is too large to materialize.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

Ident = Any  # str | int | tuple of Ident

# Above this many composable pairs the associativity scan is sampled, not
# exhaustive (triples grow cubically; construction-validated categories such as
# coherence-data groupoids are the only ones that get this big).
EXHAUSTIVE_PAIR_BOUND = 200_000
_LAW_SAMPLE = 20_000


def ident_key(x: Ident):
    """Total order on mixed str/int/tuple identifiers, for deterministic output."""
    if isinstance(x, tuple):
        return (2, tuple(ident_key(v) for v in x))
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (1, x)
    return (0, str(x))


def sort_idents(xs: Iterable[Ident]) -> tuple:
    xs = list(xs)
    try:  # homogeneous identifiers compare natively (C speed)
        return tuple(sorted(xs))
    except TypeError:
        return tuple(sorted(xs, key=ident_key))


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.message} (witness: {self.witness!r})"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    is_groupoid: Optional[bool] = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, witness: tuple, message: str) -> None:
        self.violations.append(Violation(kind, witness, message))

    def __str__(self) -> str:
        if self.ok:
            extra = "" if self.is_groupoid is None else f" (groupoid: {self.is_groupoid})"
            return "valid" + extra
        return "\n".join(str(v) for v in self.violations)


class ComposeRule(Mapping):
    """Composition table backed by a rule instead of a dict.

    Behaves as the finite map {(g, f): g∘f | target f = source g}; entries are
    computed on demand.  Used for categories whose composable-pair count makes
    an explicit table unreasonable.
    """

    def __init__(self, source: dict, target: dict, rule: Callable[[Ident, Ident], Ident]):
        self._source = source
        self._target = target
        self._rule = rule

    def __getitem__(self, key):
        g, f = key
        if self._target.get(f) != self._source.get(g):
            raise KeyError(key)
        return self._rule(g, f)

    def __contains__(self, key) -> bool:
        g, f = key
        return f in self._target and g in self._source and self._target[f] == self._source[g]

    def __iter__(self):
        for g in self._source:
            for f in self._target:
                if self._target[f] == self._source[g]:
                    yield (g, f)

    def __len__(self) -> int:
        by_obj: dict[Ident, int] = {}
        for f, t in self._target.items():
            by_obj[t] = by_obj.get(t, 0) + 1
        return sum(by_obj.get(s, 0) for s in self._source.values())


@dataclass(eq=False)
class FinCategory:
    """A finite category: identifier sets plus explicit source/target/identity
    and a composition table with compose[(g, f)] = g∘f (defined exactly when
    target f = source g)."""

    objects: tuple
    morphisms: tuple
    source: dict
    target: dict
    identity: dict
    compose: Mapping  # {(g, f): g∘f}

    def __post_init__(self):
        self.objects = sort_idents(self.objects)
        self.morphisms = sort_idents(self.morphisms)
        self._hom: Optional[dict] = None
        self._inverses: Optional[dict] = None
        self._into: Optional[dict] = None
        self._from: Optional[dict] = None

    # -- basic accessors ----------------------------------------------------

    def compose_of(self, g: Ident, f: Ident) -> Ident:
        return self.compose[(g, f)]

    def hom(self, a: Ident, b: Ident) -> tuple:
        if self._hom is None:
            hom: dict = {}
            for f in self.morphisms:
                hom.setdefault((self.source[f], self.target[f]), []).append(f)
            self._hom = {k: tuple(v) for k, v in hom.items()}
        return self._hom.get((a, b), ())

    def is_identity(self, f: Ident) -> bool:
        return self.identity.get(self.source[f]) == f

    def inverse(self, f: Ident) -> Optional[Ident]:
        """Two-sided inverse of f, or None; found by exhaustive search, memoized."""
        if self._inverses is None:
            self._inverses = {}
        if f in self._inverses:
            return self._inverses[f]
        a, b = self.source[f], self.target[f]
        result = None
        for g in self.hom(b, a):
            if (
                self.compose.get((g, f)) == self.identity[a]
                and self.compose.get((f, g)) == self.identity[b]
            ):
                result = g
                break
        self._inverses[f] = result
        return result

    def is_groupoid(self) -> bool:
        return all(self.inverse(f) is not None for f in self.morphisms)

    def composable_pairs(self) -> Iterable[tuple]:
        for g in self.morphisms:
            for f in self.hom_into(self.source[g]):
                yield (g, f)

    def hom_into(self, a: Ident) -> tuple:
        if not hasattr(self, "_into") or self._into is None:
            into: dict = {x: [] for x in self.objects}
            for f in self.morphisms:
                into[self.target[f]].append(f)
            self._into = {x: tuple(v) for x, v in into.items()}
        return self._into[a]

    def hom_from(self, a: Ident) -> tuple:
        if not hasattr(self, "_from") or self._from is None:
            out: dict = {x: [] for x in self.objects}
            for f in self.morphisms:
                out[self.source[f]].append(f)
            self._from = {x: tuple(v) for x, v in out.items()}
        return self._from[a]

    def n_composable_pairs(self) -> int:
        into = {a: 0 for a in self.objects}
        for f in self.morphisms:
            into[self.target[f]] += 1
        return sum(into[self.source[g]] for g in self.morphisms)


def terminal_category() -> FinCategory:
    return FinCategory(("*",), ("id*",), {"id*": "*"}, {"id*": "*"}, {"*": "id*"}, {("id*", "id*"): "id*"})


def discrete_category(objects: Iterable[Ident]) -> FinCategory:
    objects = sort_idents(objects)
    ids = {x: ("id", x) for x in objects}
    return FinCategory(
        objects,
        tuple(ids.values()),
        {m: x for x, m in ids.items()},
        {m: x for x, m in ids.items()},
        ids,
        {(m, m): m for m in ids.values()},
    )


def validate_category(C: FinCategory, rng_seed: int = 0) -> ValidationReport:
    """Check every category law exhaustively, reporting all violations with witnesses.

    Structural (dangling-identifier) errors are reported first and suppress the
    law checks that would be meaningless without well-formed tables.  The report
    also records whether every morphism is invertible (groupoid test).
    """
    report = ValidationReport()
    obj = set(C.objects)
    mor = set(C.morphisms)

    for f in C.morphisms:
        if C.source.get(f) not in obj:
            report.add("dangling", (f, C.source.get(f)), "source of morphism is not a known object")
        if C.target.get(f) not in obj:
            report.add("dangling", (f, C.target.get(f)), "target of morphism is not a known object")
    for x in C.objects:
        if C.identity.get(x) not in mor:
            report.add("dangling", (x, C.identity.get(x)), "identity of object is not a known morphism")
    for f in set(C.source) | set(C.target):
        if f not in mor:
            report.add("dangling", (f,), "source/target table mentions unknown morphism")
    if not isinstance(C.compose, ComposeRule):
        for (g, f), h in C.compose.items():
            if g not in mor or f not in mor or h not in mor:
                report.add("dangling", (g, f, h), "composition table mentions unknown morphism")
    if not report.ok:
        return report

    for x in C.objects:
        e = C.identity[x]
        if C.source[e] != x or C.target[e] != x:
            report.add("identity-endpoints", (x, e), "identity(x) must have source = target = x")

    n_pairs = C.n_composable_pairs()
    sampled = n_pairs > EXHAUSTIVE_PAIR_BOUND
    if sampled:
        report.notes.append(
            f"law check sampled: {n_pairs} composable pairs exceeds bound {EXHAUSTIVE_PAIR_BOUND}"
        )

    import random

    rng = random.Random(rng_seed)

    def pair_iter():
        if not sampled:
            yield from C.composable_pairs()
        else:
            for _ in range(_LAW_SAMPLE):
                g = rng.choice(C.morphisms)
                candidates = C.hom_into(C.source[g])
                if candidates:
                    yield (g, rng.choice(candidates))

    closure_ok = True
    for g, f in pair_iter():
        h = C.compose.get((g, f))
        if h is None:
            report.add("closure", (g, f), "composable pair missing from composition table")
            closure_ok = False
            continue
        if C.source[h] != C.source[f] or C.target[h] != C.target[g]:
            report.add("compose-endpoints", (g, f, h), "g∘f has wrong source or target")
    if not isinstance(C.compose, ComposeRule):
        for (g, f) in C.compose:
            if C.target.get(f) != C.source.get(g):
                report.add("spurious-compose", (g, f), "composition defined on non-composable pair")

    if closure_ok:
        for f in C.morphisms:
            if C.compose.get((f, C.identity[C.source[f]])) != f:
                report.add("unit", (f,), "f ∘ id_source ≠ f")
            if C.compose.get((C.identity[C.target[f]], f)) != f:
                report.add("unit", (f,), "id_target ∘ f ≠ f")

        def triple_iter():
            if not sampled:
                for g, f in C.composable_pairs():
                    for h in C.morphisms:
                        if C.source[h] == C.target[g]:
                            yield (h, g, f)
            else:
                for _ in range(_LAW_SAMPLE):
                    f = rng.choice(C.morphisms)
                    gs = C.hom_from(C.target[f])
                    if not gs:
                        continue
                    g = rng.choice(gs)
                    hs = C.hom_from(C.target[g])
                    if not hs:
                        continue
                    yield (rng.choice(hs), g, f)

        for h, g, f in triple_iter():
            left = C.compose.get((h, C.compose[(g, f)]))
            right = C.compose.get((C.compose[(h, g)], f))
            if left != right:
                report.add("associativity", (h, g, f), "h∘(g∘f) ≠ (h∘g)∘f")
                break

    report.is_groupoid = report.ok and C.is_groupoid()
    return report


def iso_classes(C: FinCategory) -> tuple[tuple, dict]:
    """Isomorphism classes of objects: (sorted class representatives, object→class map).

    Two objects are identified exactly when a two-sided invertible morphism
    exists between them; class names are the minimal member identifiers.
    """
    parent = {x: x for x in C.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in C.morphisms:
        if C.inverse(f) is not None:
            a, b = find(C.source[f]), find(C.target[f])
            if a != b:
                a, b = sorted((a, b), key=ident_key)
                parent[b] = a
    classes: dict = {}
    for x in C.objects:
        root = find(x)
        classes.setdefault(root, []).append(x)
    rep = {root: min(members, key=ident_key) for root, members in classes.items()}
    quotient = {x: rep[find(x)] for x in C.objects}
    return sort_idents(rep.values()), quotient


def product_many(cats: list[FinCategory]) -> FinCategory:
    """Finite product with flat-tuple identifiers.

    The composition table is rule-backed once the componentwise pair count gets
    large; entries agree with the explicit table either way.
    """
    if not cats:
        return terminal_category()
    objects = [tuple(p) for p in itertools.product(*[c.objects for c in cats])]
    morphisms = [tuple(p) for p in itertools.product(*[c.morphisms for c in cats])]
    source = {m: tuple(c.source[f] for c, f in zip(cats, m)) for m in morphisms}
    target = {m: tuple(c.target[f] for c, f in zip(cats, m)) for m in morphisms}
    identity = {x: tuple(c.identity[a] for c, a in zip(cats, x)) for x in objects}

    def rule(g, f):
        return tuple(c.compose[(gi, fi)] for c, gi, fi in zip(cats, g, f))

    n_pairs = 1
    for c in cats:
        n_pairs *= max(1, c.n_composable_pairs())
    compose: Mapping
    if n_pairs <= EXHAUSTIVE_PAIR_BOUND and all(not isinstance(c.compose, ComposeRule) for c in cats):
        compose = {}
        for g in morphisms:
            for f in morphisms:
                if target[f] == source[g]:
                    compose[(g, f)] = rule(g, f)
    else:
        compose = ComposeRule(source, target, rule)
    return FinCategory(tuple(objects), tuple(morphisms), source, target, identity, compose)


def product(C: FinCategory, D: FinCategory) -> FinCategory:
    """Componentwise product with pair identifiers."""
    return product_many([C, D])


@dataclass(eq=False)
class FinFunctor:
    domain: FinCategory
    codomain: FinCategory
    object_map: dict
    morphism_map: dict

    def on_obj(self, x: Ident) -> Ident:
        return self.object_map[x]

    def on_mor(self, f: Ident) -> Ident:
        return self.morphism_map[f]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return (
            self.domain is other.domain
            and self.codomain is other.codomain
            and self.object_map == other.object_map
            and self.morphism_map == other.morphism_map
        )

    def __hash__(self):
        return id(self)


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor(C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms})


def compose_functors(G: FinFunctor, F: FinFunctor) -> FinFunctor:
    """G∘F (F applied first)."""
    if G.domain is not F.codomain and G.domain.objects != F.codomain.objects:
        raise ValueError("functor composition: domains do not match")
    return FinFunctor(
        F.domain,
        G.codomain,
        {x: G.object_map[y] for x, y in F.object_map.items()},
        {f: G.morphism_map[g] for f, g in F.morphism_map.items()},
    )


def validate_functor(F: FinFunctor) -> ValidationReport:
    """Exhaustive functoriality check (identities, composition, endpoints)."""
    report = ValidationReport()
    C, D = F.domain, F.codomain
    for x in C.objects:
        if x not in F.object_map:
            report.add("missing", (x,), "object has no image")
        elif F.object_map[x] not in set(D.objects):
            report.add("dangling", (x, F.object_map[x]), "object image unknown in codomain")
    for f in C.morphisms:
        if f not in F.morphism_map:
            report.add("missing", (f,), "morphism has no image")
        elif F.morphism_map[f] not in set(D.morphisms):
            report.add("dangling", (f, F.morphism_map[f]), "morphism image unknown in codomain")
    if not report.ok:
        return report
    for f in C.morphisms:
        Ff = F.morphism_map[f]
        if D.source[Ff] != F.object_map[C.source[f]] or D.target[Ff] != F.object_map[C.target[f]]:
            report.add("endpoints", (f,), "image morphism has wrong endpoints")
    for x in C.objects:
        if F.morphism_map[C.identity[x]] != D.identity[F.object_map[x]]:
            report.add("identity", (x,), "identity not preserved")
    for g, f in C.composable_pairs():
        if F.morphism_map[C.compose[(g, f)]] != D.compose[(F.morphism_map[g], F.morphism_map[f])]:
            report.add("composition", (g, f), "composition not preserved")
            break
    return report


@dataclass(frozen=True)
class EquivalenceVerdict:
    is_equivalence: bool
    witness: Optional[tuple] = None  # (kind, data) on failure

    def __bool__(self) -> bool:
        return self.is_equivalence


def is_equivalence(F: FinFunctor, validate: bool = True) -> EquivalenceVerdict:
    """Decide whether F is an equivalence of categories.

    Fully faithful: each hom-map Hom(a,b) → Hom(Fa,Fb) is a bijection.
    Essentially surjective: every codomain object has an invertible morphism to
    some image object (invertibility by exhaustive two-sided-inverse search).
    The first failure in identifier order is returned as the witness.
    """
    if validate:
        rep = validate_functor(F)
        if not rep.ok:
            return EquivalenceVerdict(False, ("not-a-functor", tuple(rep.violations)))
    C, D = F.domain, F.codomain
    for a in C.objects:
        for b in C.objects:
            dom_hom = C.hom(a, b)
            cod_hom = D.hom(F.object_map[a], F.object_map[b])
            images = [F.morphism_map[f] for f in dom_hom]
            if len(set(images)) != len(images):
                seen: dict = {}
                for f, im in zip(dom_hom, images):
                    if im in seen:
                        return EquivalenceVerdict(False, ("hom-not-injective", (a, b, seen[im], f)))
                    seen[im] = f
            if len(images) != len(cod_hom):
                return EquivalenceVerdict(
                    False, ("hom-size-mismatch", (a, b, len(dom_hom), len(cod_hom)))
                )
    image_objects = set(F.object_map.values())
    for d in D.objects:
        hit = d in image_objects or any(
            D.inverse(f) is not None
            for c in image_objects
            for f in D.hom(d, c)
        )
        if not hit:
            return EquivalenceVerdict(False, ("not-essentially-surjective", (d,)))
    return EquivalenceVerdict(True)


@dataclass(eq=False)
class NatTransformation:
    source_functor: FinFunctor
    target_functor: FinFunctor
    components: dict  # object of the common domain → morphism of the common codomain


def verify_nat_iso(
    F: FinFunctor,
    G: FinFunctor,
    components: dict,
    morphism_sample: Optional[list] = None,
) -> tuple[bool, Optional[tuple]]:
    """Check that `components` is a natural isomorphism F ⇒ G.

    Every component must be invertible and every naturality square must
    commute; squares are checked for all domain morphisms unless an explicit
    sample is supplied.  Returns (ok, witness).
    """
    C, D = F.domain, F.codomain
    if G.domain is not C or G.codomain is not D:
        if G.domain.objects != C.objects:
            return False, ("not-parallel", ())
    for x in C.objects:
        if x not in components:
            return False, ("missing-component", (x,))
        c = components[x]
        if D.source.get(c) != F.object_map[x] or D.target.get(c) != G.object_map[x]:
            return False, ("component-endpoints", (x, c))
        if D.inverse(c) is None:
            return False, ("component-not-invertible", (x, c))
    morphisms = C.morphisms if morphism_sample is None else morphism_sample
    for f in morphisms:
        a, b = C.source[f], C.target[f]
        left = D.compose[(components[b], F.morphism_map[f])]
        right = D.compose[(G.morphism_map[f], components[a])]
        if left != right:
            return False, ("naturality", (f, left, right))
    return True, None
