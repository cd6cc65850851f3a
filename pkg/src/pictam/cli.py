"""Document serialization and the command-line pipelines.

Documents are canonical JSON (UTF-8, sorted keys, sorted identifier lists);
parsing re-checks the shape of the payload and names the JSON path of the
first offence.  Deep axiom checking is left to `validate`, so structurally
well-formed but law-breaking instances load fine and fail loudly later.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import gamma as gamma_mod
from . import suite as suite_mod
from .fincat import FinCategory, FinFunctor, validate_category
from .picard import PicardCategory, pi_invariants, validate_picard
from .shapes import GammaMap
from .tamsamani import TruncatedMultiSimplicialSet, validate_structure

DOCUMENT_KINDS = ("category", "picard", "gamma-groupoid", "multisimplicial", "verdict")
SERIALIZE_PAIR_BOUND = 10**6


class DocumentError(ValueError):
    """Schema violation, annotated with the JSON path of the offence."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class DocumentTooLarge(RuntimeError):
    pass


@dataclass
class Document:
    kind: str
    payload: dict
    provenance: dict = field(default_factory=dict)
    version: int = 1


def _ident(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return json.dumps([_listify(v) for v in x], separators=(",", ":"))
    return json.dumps(x)


def _listify(x):
    return [_listify(v) for v in x] if isinstance(x, tuple) else x


# -- payload builders ---------------------------------------------------------


def category_payload(C: FinCategory) -> dict:
    n_pairs = C.n_composable_pairs()
    if n_pairs > SERIALIZE_PAIR_BOUND:
        raise DocumentTooLarge(
            f"composition table would have {n_pairs} entries (bound {SERIALIZE_PAIR_BOUND})"
        )
    compose: dict = {}
    for g, f in C.composable_pairs():
        compose.setdefault(_ident(g), {})[_ident(f)] = _ident(C.compose[(g, f)])
    return {
        "objects": sorted(_ident(x) for x in C.objects),
        "morphisms": sorted(_ident(m) for m in C.morphisms),
        "source": {_ident(m): _ident(C.source[m]) for m in C.morphisms},
        "target": {_ident(m): _ident(C.target[m]) for m in C.morphisms},
        "identity": {_ident(x): _ident(C.identity[x]) for x in C.objects},
        "compose": compose,
    }


def parse_category(payload: dict, path: str = "payload") -> FinCategory:
    for key in ("objects", "morphisms", "source", "target", "identity", "compose"):
        if key not in payload:
            raise DocumentError(f"{path}.{key}", "missing field")
    objects = payload["objects"]
    morphisms = payload["morphisms"]
    obj_set, mor_set = set(objects), set(morphisms)
    for m in morphisms:
        for table in ("source", "target"):
            if m not in payload[table]:
                raise DocumentError(f"{path}.{table}.{m}", "missing morphism entry")
            if payload[table][m] not in obj_set:
                raise DocumentError(f"{path}.{table}.{m}", "unknown object")
    for x in objects:
        if x not in payload["identity"]:
            raise DocumentError(f"{path}.identity.{x}", "missing object entry")
        if payload["identity"][x] not in mor_set:
            raise DocumentError(f"{path}.identity.{x}", "unknown morphism")
    compose = {}
    for g, row in payload["compose"].items():
        if g not in mor_set:
            raise DocumentError(f"{path}.compose.{g}", "unknown morphism")
        for f, h in row.items():
            if f not in mor_set or h not in mor_set:
                raise DocumentError(f"{path}.compose.{g}.{f}", "unknown morphism")
            compose[(g, f)] = h
    return FinCategory(
        tuple(objects),
        tuple(morphisms),
        dict(payload["source"]),
        dict(payload["target"]),
        dict(payload["identity"]),
        compose,
    )


def picard_payload(P: PicardCategory) -> dict:
    C = P.underlying
    return {
        "category": category_payload(C),
        "unit": _ident(P.unit),
        "tensor_obj": _nest2({(x, y): v for (x, y), v in P.tensor_obj.items()}),
        "tensor_mor": _nest2({(f, g): v for (f, g), v in P.tensor_mor.items()}),
        "associator": _nest3(P.associator),
        "left_unit": {_ident(x): _ident(v) for x, v in P.left_unit.items()},
        "right_unit": {_ident(x): _ident(v) for x, v in P.right_unit.items()},
        "symmetry": _nest2(P.symmetry),
        "name": P.name,
    }


def _nest2(table: dict) -> dict:
    out: dict = {}
    for (a, b), v in table.items():
        out.setdefault(_ident(a), {})[_ident(b)] = _ident(v)
    return out


def _nest3(table: dict) -> dict:
    out: dict = {}
    for (a, b, c), v in table.items():
        out.setdefault(_ident(a), {}).setdefault(_ident(b), {})[_ident(c)] = _ident(v)
    return out


def parse_picard(payload: dict, path: str = "payload") -> PicardCategory:
    for key in (
        "category",
        "unit",
        "tensor_obj",
        "tensor_mor",
        "associator",
        "left_unit",
        "right_unit",
        "symmetry",
    ):
        if key not in payload:
            raise DocumentError(f"{path}.{key}", "missing field")
    C = parse_category(payload["category"], f"{path}.category")
    obj_set, mor_set = set(C.objects), set(C.morphisms)
    if payload["unit"] not in obj_set:
        raise DocumentError(f"{path}.unit", "unknown object")

    def flat2(nested: dict, keys, values, label: str) -> dict:
        out = {}
        for a in keys:
            for b in keys:
                v = nested.get(a, {}).get(b)
                if v is None:
                    raise DocumentError(f"{path}.{label}.{a}.{b}", "missing component")
                if v not in values:
                    raise DocumentError(f"{path}.{label}.{a}.{b}", "unknown identifier")
                out[(a, b)] = v
        return out

    tensor_obj = flat2(payload["tensor_obj"], C.objects, obj_set, "tensor_obj")
    tensor_mor = flat2(payload["tensor_mor"], C.morphisms, mor_set, "tensor_mor")
    symmetry = flat2(payload["symmetry"], C.objects, mor_set, "symmetry")
    associator = {}
    for a in C.objects:
        for b in C.objects:
            for c in C.objects:
                v = payload["associator"].get(a, {}).get(b, {}).get(c)
                if v is None:
                    raise DocumentError(f"{path}.associator.{a}.{b}.{c}", "missing component")
                if v not in mor_set:
                    raise DocumentError(f"{path}.associator.{a}.{b}.{c}", "unknown identifier")
                associator[(a, b, c)] = v
    for label in ("left_unit", "right_unit"):
        for x in C.objects:
            if x not in payload[label]:
                raise DocumentError(f"{path}.{label}.{x}", "missing component")
            if payload[label][x] not in mor_set:
                raise DocumentError(f"{path}.{label}.{x}", "unknown identifier")
    return PicardCategory(
        C,
        payload["unit"],
        tensor_obj,
        tensor_mor,
        associator,
        dict(payload["left_unit"]),
        dict(payload["right_unit"]),
        symmetry,
        name=payload.get("name", "P"),
    )


def gamma_payload(A) -> dict:
    levels = {str(n): category_payload(A.levels[n]) for n in range(A.truncation + 1)}
    action: dict = {}
    for gm in A.action.maps():
        F = A.action.functor(gm)
        key = f"{gm.domain_rank}>{gm.codomain_rank}:{','.join(map(str, gm.values))}"
        action[key] = {
            "object_map": {_ident(x): _ident(v) for x, v in F.object_map.items()},
            "morphism_map": {_ident(m): _ident(v) for m, v in F.morphism_map.items()},
        }
    return {"truncation": A.truncation, "levels": levels, "action": action}


def parse_gamma(payload: dict, path: str = "payload"):
    for key in ("truncation", "levels", "action"):
        if key not in payload:
            raise DocumentError(f"{path}.{key}", "missing field")
    N = payload["truncation"]
    levels = {}
    for n in range(N + 1):
        if str(n) not in payload["levels"]:
            raise DocumentError(f"{path}.levels.{n}", "missing level")
        levels[n] = parse_category(payload["levels"][str(n)], f"{path}.levels.{n}")
    functors = {}
    from .shapes import all_gamma_maps

    for n in range(N + 1):
        for m in range(N + 1):
            for gm in all_gamma_maps(n, m):
                key = f"{n}>{m}:{','.join(map(str, gm.values))}"
                if key not in payload["action"]:
                    raise DocumentError(f"{path}.action.{key}", "missing action functor")
                entry = payload["action"][key]
                for table, domain, codomain in (
                    ("object_map", levels[n].objects, set(levels[m].objects)),
                    ("morphism_map", levels[n].morphisms, set(levels[m].morphisms)),
                ):
                    if table not in entry:
                        raise DocumentError(f"{path}.action.{key}.{table}", "missing table")
                    for x in domain:
                        if x not in entry[table]:
                            raise DocumentError(f"{path}.action.{key}.{table}.{x}", "missing entry")
                        if entry[table][x] not in codomain:
                            raise DocumentError(f"{path}.action.{key}.{table}.{x}", "unknown identifier")
                functors[gm.key()] = FinFunctor(
                    levels[n], levels[m], dict(entry["object_map"]), dict(entry["morphism_map"])
                )
    return gamma_mod.build_gamma_groupoid(N, levels, lambda gm: functors[gm.key()])


def msset_payload(X: TruncatedMultiSimplicialSet) -> dict:
    def level_key(K):
        return ",".join(map(str, K))

    def map_key(c, K, i):
        return f"{c}|{level_key(K)}|{i}"

    return {
        "dimension": X.dimension,
        "truncation": X.truncation,
        "levels": {level_key(K): sorted(_ident(e) for e in X.levels[K]) for K in X.levels},
        "faces": {
            map_key(c, K, i): {_ident(e): _ident(v) for e, v in m.items()}
            for (c, K, i), m in X.faces.items()
        },
        "degeneracies": {
            map_key(c, K, i): {_ident(e): _ident(v) for e, v in m.items()}
            for (c, K, i), m in X.degeneracies.items()
        },
    }


def parse_msset(payload: dict, path: str = "payload") -> TruncatedMultiSimplicialSet:
    for key in ("dimension", "truncation", "levels", "faces", "degeneracies"):
        if key not in payload:
            raise DocumentError(f"{path}.{key}", "missing field")
    levels = {}
    for key, elems in payload["levels"].items():
        K = tuple(int(v) for v in key.split(","))
        levels[K] = tuple(elems)

    def parse_maps(table: dict, label: str) -> dict:
        out = {}
        for key, m in table.items():
            c_str, K_str, i_str = key.split("|")
            K = tuple(int(v) for v in K_str.split(","))
            if K not in levels:
                raise DocumentError(f"{path}.{label}.{key}", "unknown level")
            out[(int(c_str), K, int(i_str))] = dict(m)
        return out

    return TruncatedMultiSimplicialSet(
        payload["dimension"],
        payload["truncation"],
        levels,
        parse_maps(payload["faces"], "faces"),
        parse_maps(payload["degeneracies"], "degeneracies"),
    )


def parse_verdict(payload: dict, path: str = "payload") -> dict:
    if "checks" not in payload or "summary" not in payload:
        raise DocumentError(f"{path}.checks", "verdict needs checks and summary")
    for i, entry in enumerate(payload["checks"]):
        for key in ("name", "passed"):
            if key not in entry:
                raise DocumentError(f"{path}.checks[{i}].{key}", "missing field")
    return payload


# -- document envelope ---------------------------------------------------------

_PARSERS = {
    "category": parse_category,
    "picard": parse_picard,
    "gamma-groupoid": parse_gamma,
    "multisimplicial": parse_msset,
    "verdict": parse_verdict,
}


def parse_document(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    if not isinstance(raw, dict):
        raise DocumentError("$", "document must be a JSON object")
    kind = raw.get("kind")
    if kind not in DOCUMENT_KINDS:
        raise DocumentError("$.kind", f"unknown document kind {kind!r}")
    if "payload" not in raw:
        raise DocumentError("$.payload", "missing payload")
    _PARSERS[kind](raw["payload"], "$.payload")
    return Document(kind, raw["payload"], raw.get("provenance", {}), raw.get("version", 1))


def serialize_document(doc: Document) -> str:
    raw = {
        "kind": doc.kind,
        "version": doc.version,
        "provenance": doc.provenance,
        "payload": doc.payload,
    }
    return json.dumps(raw, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def document_value(doc: Document):
    """The in-memory structure a document describes."""
    return _PARSERS[doc.kind](doc.payload)


# -- command-line interface -----------------------------------------------------


def _read_input(args) -> str:
    if args.input in (None, "-"):
        return sys.stdin.read()
    with open(args.input, encoding="utf-8") as handle:
        return handle.read()


def _write_output(args, text: str) -> None:
    if getattr(args, "output", None) in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _strategy(args):
    from .ktheory import Exhaustive, Sampled

    if getattr(args, "sample", None):
        return Sampled(args.seed, args.sample)
    return Exhaustive()


def _emit_report(args, report, subject: str) -> int:
    if args.format == "machine":
        payload = {
            "checks": [
                {
                    "name": subject,
                    "passed": report.ok,
                    "details": {"notes": report.notes},
                    **({"witness": str(report.violations[0])} if report.violations else {}),
                }
            ],
            "summary": {"total": 1, "passed": int(report.ok), "failed": int(not report.ok)},
        }
        doc = Document("verdict", payload, {"generator": "validate"})
        _write_output(args, serialize_document(doc))
    else:
        _write_output(args, f"{subject}: {report}\n")
    return 0 if report.ok else 1


def cmd_validate(args) -> int:
    doc = parse_document(_read_input(args))
    value = document_value(doc)
    if doc.kind == "category":
        report = validate_category(value)
    elif doc.kind == "picard":
        report = validate_picard(value)
    elif doc.kind == "gamma-groupoid":
        report = gamma_mod.validate_gamma_groupoid(value)
    elif doc.kind == "multisimplicial":
        report = validate_structure(value)
    else:
        _write_output(args, "verdict documents carry results; nothing to validate\n")
        return 0
    return _emit_report(args, report, doc.kind)


def cmd_ktheory(args) -> int:
    from .ktheory import k_theory

    doc = parse_document(_read_input(args))
    if doc.kind != "picard":
        raise DocumentError("$.kind", "ktheory expects a picard document")
    P = parse_picard(doc.payload)
    kt = k_theory(P, args.level, _strategy(args))
    payload = gamma_payload(kt.gamma)
    prov = {"generator": "ktheory", "level": args.level, "seed": args.seed, "input": P.name}
    _write_output(args, serialize_document(Document("gamma-groupoid", payload, prov)))
    return 0


def cmd_nerve(args) -> int:
    from .nerve2 import nerve_level

    doc = parse_document(_read_input(args))
    if doc.kind != "picard":
        raise DocumentError("$.kind", "nerve expects a picard document")
    P = parse_picard(doc.payload)
    lvl = nerve_level(P, args.level, _strategy(args))
    payload = category_payload(lvl.cat)
    prov = {"generator": "nerve", "level": args.level, "seed": args.seed, "input": P.name}
    _write_output(args, serialize_document(Document("category", payload, prov)))
    return 0


def cmd_compare(args) -> int:
    import random

    from . import bridge
    from .fincat import compose_functors, identity_functor, verify_nat_iso
    from .ktheory import k_theory
    from .nerve2 import nerve

    doc = parse_document(_read_input(args))
    if doc.kind != "picard":
        raise DocumentError("$.kind", "compare expects a picard document")
    P = parse_picard(doc.payload)
    kt = k_theory(P, args.max_level, _strategy(args))
    nv = nerve(P, args.max_level, _strategy(args))
    checks = []
    for n in range(args.max_level + 1):
        U = bridge.forget_U(P, kt.levels[n], nv.levels[n])
        F = bridge.extend_F(P, nv.levels[n], kt.levels[n])
        UF = compose_functors(U, F)
        ident = identity_functor(nv.levels[n].cat)
        retracts = UF.object_map == ident.object_map and UF.morphism_map == ident.morphism_map
        checks.append({"name": f"section-retracts-{n}", "passed": retracts, "details": {}})
        tr = bridge.eta(P, kt.levels[n], nv.levels[n], U, F)
        morphisms = list(kt.levels[n].cat.morphisms)
        if args.sample and len(morphisms) > args.sample:
            rng = random.Random(args.seed + n)
            sample = rng.sample(morphisms, args.sample)
            mode = {"mode": "sampled", "count": args.sample, "seed": args.seed + n}
        else:
            sample = None
            mode = {"mode": "exhaustive"}
        ok, wit = verify_nat_iso(tr.source_functor, tr.target_functor, tr.components, sample)
        entry = {"name": f"eta-natural-iso-{n}", "passed": ok, "details": mode}
        if not ok:
            entry["witness"] = str(wit)
        checks.append(entry)
    failures = bridge.u_naturality_failures(P, kt, nv, args.max_level)
    entry = {"name": "naturality-squares", "passed": not failures, "details": {}}
    if failures:
        entry["witness"] = str(failures[0].values)
    checks.append(entry)
    checks.sort(key=lambda c: c["name"])
    payload = {
        "checks": checks,
        "summary": {
            "total": len(checks),
            "passed": sum(1 for c in checks if c["passed"]),
            "failed": sum(1 for c in checks if not c["passed"]),
        },
    }
    prov = {"generator": "compare", "max_level": args.max_level, "seed": args.seed, "input": P.name}
    _write_output(args, serialize_document(Document("verdict", payload, prov)))
    return 0 if all(c["passed"] for c in checks) else 1


def _choices_payload(choices) -> dict:
    def quasi(q):
        return {
            "k": q.k,
            "reverse_object_map": {_ident(x): _ident(v) for x, v in q.reverse.object_map.items()},
            "reverse_morphism_map": {_ident(m): _ident(v) for m, v in q.reverse.morphism_map.items()},
            "eps": {_ident(t): _ident(v) for t, v in q.eps.items()},
            "e": {_ident(c): _ident(v) for c, v in q.e.items()},
        }

    return {"t2": quasi(choices.t2), "t3": quasi(choices.t3)}


def cmd_picardize(args) -> int:
    from . import bridge
    from .ktheory import k_theory

    doc = parse_document(_read_input(args))
    if doc.kind == "picard":
        P = parse_picard(doc.payload)
        A = k_theory(P, 3, _strategy(args)).gamma
        source = f"ktheory({P.name})"
    elif doc.kind == "gamma-groupoid":
        A = parse_gamma(doc.payload)
        source = "input"
    else:
        raise DocumentError("$.kind", "picardize expects a picard or gamma-groupoid document")
    result = bridge.picardize(A)
    payload = picard_payload(result.picard)
    prov = {
        "generator": "picardize",
        "seed": args.seed,
        "input": source,
        "choices": _choices_payload(result.choices),
    }
    _write_output(args, serialize_document(Document("picard", payload, prov)))
    return 0


def cmd_invariants(args) -> int:
    doc = parse_document(_read_input(args))
    if doc.kind != "picard":
        raise DocumentError("$.kind", "invariants expects a picard document")
    P = parse_picard(doc.payload)
    inv = pi_invariants(P)
    data = {
        "pi0": {
            "elements": [_ident(x) for x in inv.pi0.elements],
            "table": _nest2(inv.pi0.table),
            "unit": _ident(inv.pi0.unit),
        },
        "pi1": {
            "elements": [_ident(x) for x in inv.pi1.elements],
            "table": _nest2(inv.pi1.table),
            "unit": _ident(inv.pi1.unit),
        },
        "q": {_ident(a): _ident(v) for a, v in inv.q.items()},
    }
    if args.format == "machine":
        _write_output(args, json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2) + "\n")
    else:
        lines = [
            f"pi0: {len(inv.pi0.elements)} classes (abelian: {inv.pi0.is_abelian()})",
            f"pi1: {len(inv.pi1.elements)} automorphisms of the unit",
            "q: " + ", ".join(f"{_ident(a)} -> {_ident(v)}" for a, v in sorted(inv.q.items())),
        ]
        _write_output(args, "\n".join(lines) + "\n")
    return 0


def cmd_suite(args) -> int:
    config = {}
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            config = json.load(handle)
    payload, code = suite_mod.run_suite(config)
    if code == 2:
        _write_output(args, json.dumps(payload, sort_keys=True) + "\n")
        return 2
    prov = {"generator": "suite", "seed": payload["config"]["seed"], "bounds": payload["config"]["bound"]}
    doc = Document("verdict", payload, prov)
    if args.format == "machine":
        _write_output(args, serialize_document(doc))
    else:
        lines = [
            f"{c['name']}: {'pass' if c['passed'] else 'FAIL'}"
            + (f" -- {c.get('witness')}" if not c["passed"] else "")
            for c in payload["checks"]
        ]
        summary = payload["summary"]
        lines.append(f"{summary['passed']}/{summary['total']} checks passed")
        _write_output(args, "\n".join(lines) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pictam",
        description="Exhaustive finite-instance verification of K-theory groupoids, "
        "2-nerves and their comparisons.",
    )
    parser.add_argument("--format", choices=("text", "machine"), default="machine")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_level=False, level_flag="--level"):
        p.add_argument("--input", "-i", default=None, help="input document (default: stdin)")
        p.add_argument("--output", "-o", default=None, help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=2024)
        p.add_argument("--sample", type=int, default=None, help="sampled-mode size")
        if with_level:
            p.add_argument(level_flag, type=int, default=3)

    common(sub.add_parser("validate", help="validate a document against its kind's laws"))
    common(sub.add_parser("ktheory", help="emit the K-theory Γ-groupoid of a picard document"), True)
    common(sub.add_parser("nerve", help="emit a 2-nerve level groupoid of a picard document"), True)
    common(sub.add_parser("compare", help="run the forget/section comparison"), True, "--max-level")
    common(sub.add_parser("picardize", help="extract the monoidal structure"))
    common(sub.add_parser("invariants", help="stable-1-type invariants of a picard document"))
    p_suite = sub.add_parser("suite", help="run the verification suite")
    p_suite.add_argument("--config", default=None, help="JSON config file")
    p_suite.add_argument("--output", "-o", default=None)
    return parser


_COMMANDS = {
    "validate": cmd_validate,
    "ktheory": cmd_ktheory,
    "nerve": cmd_nerve,
    "compare": cmd_compare,
    "picardize": cmd_picardize,
    "invariants": cmd_invariants,
    "suite": cmd_suite,
}


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DocumentError as exc:
        print(f"document error: {exc}", file=sys.stderr)
        return 2
    except (DocumentTooLarge, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
