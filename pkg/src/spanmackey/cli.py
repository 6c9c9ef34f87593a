"""Command-line front end.

Every command reads a JSON payload (argument, ``@file`` or ``-`` for stdin)
and writes one JSON report to stdout.  Exit status: 0 on success, 1 when a
verification fails (the report carries the witness), 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Optional

from .atheory import a_g_pi0, k0_basis, tom_dieck_check
from .errors import OversizeInput, SchemaError, SpanMackeyError
from .fixpoints import (
    MAX_OBJECTS,
    Square,
    beck_chevalley,
    bounded_family,
    check_adjunction,
    compare_with_induction,
    compress,
    homotopy_fixed_points,
    push,
    ret_sets_category,
)
from .groups import (
    MAX_ORDER,
    FiniteGroup,
    build_group,
    catalog,
    named_group,
    subconjugacy_witness,
    subgroup_classes,
)
from .gsets import (
    GMap,
    coproduct,
    coproduct_map,
    empty_gset,
    from_orbit_types,
    make_gset,
    pullback,
    standard_orbit,
)
from .mackey import burnside_mackey, check_mackey_axioms, mackey_from_json
from .spans import (
    BurnsideElement,
    burnside_multiply,
    compose_spans,
    orbit_span,
    span_from_json,
    span_normal_form,
    table_of_marks,
)

COMMANDS = (
    "group-info", "subgroups", "marks", "burnside-mul", "span-compose", "mackey-check",
    "hfix", "transfer", "adjunction-check", "bc-check", "k0", "a-pi0", "tomdieck",
)

ALIASES = {"V4": "C2xC2", "K4": "C2xC2"}


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


# ------------------------------------------------------------------ parsing


def parse_group(spec, max_order: int = MAX_ORDER) -> FiniteGroup:
    """Group from a catalog name, ``family:n``, or a dict with ``family``/``n`` or ``table``."""
    if isinstance(spec, dict):
        if "table" in spec:
            G = build_group(spec["table"], spec.get("name", "G"))
        elif "family" in spec:
            G = named_group(spec["family"], spec.get("n"))
        elif "group" in spec:
            return parse_group(spec["group"], max_order)
        else:
            raise SchemaError("group spec needs 'family', 'table' or 'group'")
    elif isinstance(spec, str):
        name = ALIASES.get(spec, spec)
        groups = catalog(extended=True)
        if name in groups:
            G = groups[name]
        elif ":" in spec:
            family, n = spec.split(":", 1)
            G = named_group(family, int(n))
        else:
            raise SchemaError(f"unknown group {spec!r}; catalog: {sorted(groups)}")
    else:
        raise SchemaError("group spec must be a string or an object")
    if G.order > max_order:
        raise OversizeInput(f"|G| = {G.order} exceeds the cap {max_order}")
    return G


def parse_class(G: FiniteGroup, label) -> int:
    """Subgroup class by label (``e``, ``C2``, ``S3``, ``G``) or ``#k``."""
    sc = subgroup_classes(G)
    if isinstance(label, int):
        index = label
    else:
        label = str(label).strip()
        if label.startswith("#"):
            index = int(label[1:])
        elif label in ("G", G.name):
            index = len(sc) - 1
        elif label in ("e", "1"):
            index = 0
        else:
            try:
                return sc.classes.index(sc.by_label(label))
            except KeyError:
                raise SchemaError(
                    f"unknown subgroup class {label!r}; known: {[c.label for c in sc]}"
                ) from None
    if not 0 <= index < len(sc):
        raise SchemaError(f"class index {index} out of range")
    return index


_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?(.+)$")


def parse_orbit_sum(G: FiniteGroup, text: str) -> list:
    """``"2*S3/e + S3/C2 + pt"`` -> list of class indices with multiplicity."""
    text = text.strip()
    if text in ("", "0", "empty"):
        return []
    out = []
    for term in text.split("+"):
        m = _TERM.match(term.strip())
        if not m:
            raise SchemaError(f"cannot parse orbit term {term!r}")
        coeff = int(m.group(1) or 1)
        body = m.group(2).strip()
        if body == "pt":
            c = len(subgroup_classes(G)) - 1
        elif "/" in body:
            head, sub = body.split("/", 1)
            if head not in ("G", G.name, ALIASES.get(G.name, G.name)) and ALIASES.get(head) != G.name:
                raise SchemaError(f"orbit {body!r} is not over {G.name}")
            c = parse_class(G, sub)
        else:
            raise SchemaError(f"cannot parse orbit term {term!r}")
        out.extend([c] * coeff)
    return out


def parse_gset(G: FiniteGroup, spec):
    """A G-set from an orbit sum string or an ``{"act": ...}`` table."""
    if isinstance(spec, dict):
        return make_gset(G, spec["act"])
    classes = parse_orbit_sum(G, str(spec))
    if not classes:
        return empty_gset(G)
    sc = subgroup_classes(G)
    return from_orbit_types(G, [sc[c].representative for c in classes])


def parse_burnside(G: FiniteGroup, spec) -> BurnsideElement:
    k = len(subgroup_classes(G))
    if isinstance(spec, list):
        if len(spec) != k:
            raise SchemaError(f"Burnside vector needs {k} entries")
        return BurnsideElement(G, tuple(int(x) for x in spec))
    coeffs = [0] * k
    for c in parse_orbit_sum(G, str(spec)):
        coeffs[c] += 1
    return BurnsideElement(G, tuple(coeffs))


def orbit_map(G: FiniteGroup, src: int, tgt: int) -> GMap:
    """``G/L -> G/K``, ``gL -> g x^-1 K`` for the minimal ``x`` with ``xLx^-1 <= K``."""
    sc = subgroup_classes(G)
    L, K = sc[src].representative, sc[tgt].representative
    x = subconjugacy_witness(G, L, K)
    if x is None:
        raise SchemaError(f"{sc[src].label} is not subconjugate to {sc[tgt].label}")
    so, to = standard_orbit(G, L), standard_orbit(G, K)
    xinv = G.inverse[x]
    return GMap(so.gset, to.gset, tuple(to.coset(G.mult[r][xinv]) for r in so.representatives))


def parse_span(G: FiniteGroup, spec):
    """``{"transfer": [L, K]}``, ``{"restriction": [K, L]}`` or full span JSON."""
    if "transfer" in spec or "restriction" in spec:
        kind = "transfer" if "transfer" in spec else "restriction"
        a, b = (parse_class(G, x) for x in spec[kind])
        sc = subgroup_classes(G)
        small, big = (a, b) if kind == "transfer" else (b, a)
        x = subconjugacy_witness(G, sc[small].representative, sc[big].representative)
        if x is None:
            raise SchemaError(f"{sc[small].label} is not subconjugate to {sc[big].label}")
        A = sc[small].representative
        if kind == "transfer":
            return orbit_span(G, small, big, A, 0, G.inverse[x])
        return orbit_span(G, big, small, A, G.inverse[x], 0)
    return span_from_json(G, spec)


def _need(payload: dict, *keys):
    missing = [k for k in keys if k not in payload]
    if missing:
        raise SchemaError(f"payload is missing {missing}")


# ------------------------------------------------------------------ commands


def cmd_group_info(G, payload, cfg):
    sc = subgroup_classes(G)
    return {
        "name": G.name,
        "order": G.order,
        "abelian": G.is_abelian,
        "labels": [G.label(g) for g in G.elements],
        "element_orders": [G.element_order(g) for g in G.elements],
        "subgroups": len(sc.all_subgroups),
        "classes": len(sc),
    }


def cmd_subgroups(G, payload, cfg):
    return {
        "classes": [
            {
                "index": c.index,
                "label": c.label,
                "order": c.representative.order,
                "representative": list(c.representative.elements),
                "size": len(c.members),
                "normalizer_order": c.normalizer.order,
                "weyl_order": c.weyl.order,
            }
            for c in subgroup_classes(G)
        ]
    }


def cmd_marks(G, payload, cfg):
    return table_of_marks(G).to_json()


def cmd_burnside_mul(G, payload, cfg):
    _need(payload, "x", "y")
    x, y = parse_burnside(G, payload["x"]), parse_burnside(G, payload["y"])
    z = burnside_multiply(x, y)
    labels = [c.label for c in subgroup_classes(G)]
    return {"labels": labels, "product": list(z.coeffs)}


def cmd_span_compose(G, payload, cfg):
    _need(payload, "first", "second")
    a, b = parse_span(G, payload["first"]), parse_span(G, payload["second"])
    c = compose_spans(a, b)
    sc = subgroup_classes(G)
    return {
        "source": sc[c.source].label,
        "target": sc[c.target].label,
        "middle_size": c.middle.size,
        "orbit_types": sorted(sc[sc.class_index(o.stabilizer)].label for o in c.middle.decomposition),
        "normal_form": [[z0, list(A)] for z0, A in span_normal_form(c)],
        "span": c.to_json(),
    }


def cmd_mackey_check(G, payload, cfg):
    if "mackey" in payload:
        M = mackey_from_json(G, payload["mackey"])
    elif payload.get("functor", "burnside") == "burnside":
        M = burnside_mackey(G)
    else:
        raise SchemaError("mackey-check needs 'mackey' data or functor 'burnside'")
    rep = check_mackey_axioms(M)
    out = rep.to_json()
    if not rep.ok:
        raise VerificationFailed(out)
    return out


def _category(G, payload, cfg):
    X = parse_gset(G, payload.get("X", "pt"))
    return X, ret_sets_category(X, int(payload.get("bound", cfg.bound)), cfg.max_objects)


def cmd_hfix(G, payload, cfg):
    X, C = _category(G, payload, cfg)
    H = subgroup_classes(G)[parse_class(G, payload.get("H", "G"))].representative
    hf = homotopy_fixed_points(C, H)
    classes = hf.iso_classes()
    return {
        "objects": len(hf.objects()),
        "iso_classes": len(classes),
        "representatives": [cls[0].to_json() for cls in classes],
    }


def cmd_transfer(G, payload, cfg):
    _need(payload, "from", "to")
    X, C = _category(G, payload, cfg)
    f = orbit_map(G, parse_class(G, payload["from"]), parse_class(G, payload["to"]))
    rows, ok = [], True
    for F in bounded_family(C, f.source):
        out = compress(push(f, F)).components[0]
        cmp = compare_with_induction(C, f, F)
        ok &= cmp.ok
        rows.append({
            "input": list(F.objs[0]),
            "output": out.to_json(),
            "matches_induction": cmp.ok,
        })
    report = {"ok": ok, "results": rows}
    if not ok:
        raise VerificationFailed(report)
    return report


def cmd_adjunction_check(G, payload, cfg):
    _need(payload, "from", "to")
    X, C = _category(G, payload, cfg)
    f = orbit_map(G, parse_class(G, payload["from"]), parse_class(G, payload["to"]))
    rep = check_adjunction(f, C).to_json()
    if not rep["ok"]:
        raise VerificationFailed(rep)
    return rep


def cmd_bc_check(G, payload, cfg):
    """Pull ``G/L -> G/K <- G/L'`` back and test every bounded ``F`` over ``G/L``."""
    _need(payload, "from", "to")
    X, C = _category(G, payload, cfg)
    to = parse_class(G, payload["to"])
    f = orbit_map(G, parse_class(G, payload["from"]), to)
    j = orbit_map(G, parse_class(G, payload.get("other", payload["from"])), to)
    pb = pullback(f, j)
    square = Square(pb.left, pb.right, f, j)
    rows, ok = [], True
    for F in bounded_family(C, f.source):
        r = beck_chevalley(square, F)
        ok &= r.is_iso and r.matches_formula
        rows.append({"F": list(F.objs[0]), "iso": r.is_iso, "matches_formula": r.matches_formula})
    report = {"pullback": square.is_pullback(), "ok": ok, "results": rows}
    if payload.get("control", False):
        A2 = coproduct(pb.gset, pb.gset)
        bad = Square(coproduct_map([pb.left, pb.left], A2), coproduct_map([pb.right, pb.right], A2), f, j)
        verdicts = [beck_chevalley(bad, F).is_iso for F in bounded_family(C, f.source)]
        report["control"] = {"pullback": bad.is_pullback(), "all_iso": all(verdicts)}
    if not ok:
        raise VerificationFailed(report)
    return report


def cmd_k0(G, payload, cfg):
    X = parse_gset(G, payload.get("X", "pt"))
    H = subgroup_classes(G)[parse_class(G, payload.get("H", "G"))].representative
    K = k0_basis(X, H)
    return {"rank": K.rank, "basis": K.labels}


def cmd_a_pi0(G, payload, cfg):
    X = parse_gset(G, payload.get("X", "pt"))
    M = a_g_pi0(X).mackey
    rep = check_mackey_axioms(M)
    out = {"mackey": M.to_json(), "axioms": rep.to_json()}
    if not rep.ok:
        raise VerificationFailed(out)
    return out


def cmd_tomdieck(G, payload, cfg):
    X = parse_gset(G, payload.get("X", "pt"))
    rep = tom_dieck_check(X)
    out = rep.to_json()
    if not rep.ok:
        raise VerificationFailed(out)
    return out


HANDLERS = {
    "group-info": cmd_group_info,
    "subgroups": cmd_subgroups,
    "marks": cmd_marks,
    "burnside-mul": cmd_burnside_mul,
    "span-compose": cmd_span_compose,
    "mackey-check": cmd_mackey_check,
    "hfix": cmd_hfix,
    "transfer": cmd_transfer,
    "adjunction-check": cmd_adjunction_check,
    "bc-check": cmd_bc_check,
    "k0": cmd_k0,
    "a-pi0": cmd_a_pi0,
    "tomdieck": cmd_tomdieck,
}


# ------------------------------------------------------------------ driver


def _read_payload(arg: Optional[str]) -> dict:
    if arg is None:
        return {}
    if arg == "-":
        text = sys.stdin.read()
    elif arg.startswith("@"):
        with open(arg[1:]) as fh:
            text = fh.read()
    else:
        text = arg
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise SchemaError(f"payload is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SchemaError("payload must be a JSON object")
    return data


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    lines = []
    for k in sorted(report):
        v = report[k]
        lines.append(f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spanmackey", description="Finite equivariant span and Mackey calculus")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("payload", nargs="?", help="JSON object, @file, or - for stdin")
    p.add_argument("--group", help="catalog name (C2, S3, D4, ...), family:n, or omit to read it from the payload")
    p.add_argument("--bound", type=int, default=2, help="complement size bound for retractive sets (default 2)")
    p.add_argument("--max-objects", type=int, default=MAX_OBJECTS, help="object cap for enumerated categories")
    p.add_argument("--max-order", type=int, default=MAX_ORDER, help="largest accepted group order")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--deterministic", action="store_true", help="accepted for compatibility; output is always deterministic")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_intermixed_args(argv)
    code = 0
    try:
        if args.bound < 0 or args.max_objects < 1 or not 1 <= args.max_order <= MAX_ORDER:
            raise OversizeInput(f"bounds must satisfy bound >= 0, max-objects >= 1, max-order <= {MAX_ORDER}")
        payload = _read_payload(args.payload)
        spec = args.group if args.group is not None else payload
        G = parse_group(spec, args.max_order)
        report = HANDLERS[args.command](G, payload, args)
    except VerificationFailed as exc:
        report, code = exc.report, 1
    except (SpanMackeyError, KeyError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
