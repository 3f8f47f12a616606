"""Command line front end.

    ghostcover group info S3
    ghostcover cover check cover.json
    ghostcover ghost compute cover.json
    ghostcover scan --group S3 --max-vertices 3 --max-edges 4
    ghostcover hurwitz 1 S3 --image S3

Exit codes: 0 success (clean scan), 2 junior witnesses found, 3 budget exceeded or
scan incomplete, 4 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .covers import (IllFormed, Unrealizable, build_cover_graph, contract_trivial, cover_from_json,
                     hurwitz_realizable, type_function)
from .errors import BudgetExceeded, DomainError
from .ghost import GHOST_BUDGET, lifted_ghost_group, qr_subgroup, verdict_from_lifted
from .groups import (NotAGroup, centralizer, generated_subgroup, group_from_spec, subgroup_classes,
                     trivial_subgroup, whole_group)
from .scan import CSV_HEADER, ScanBounds, scan_j_locus

EXIT_OK, EXIT_WITNESS, EXIT_BUDGET, EXIT_INPUT = 0, 2, 3, 4

log = logging.getLogger("ghostcover")


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _group(spec: str):
    if spec.endswith(".json") or Path(spec).is_file():
        return group_from_spec(_load_json(spec))
    try:
        return group_from_spec(spec)
    except KeyError as exc:
        raise InputError(str(exc)) from exc


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_group_info(args) -> int:
    G = _group(args.spec)
    classes = []
    for cls in subgroup_classes(G):
        H = cls.canonical_rep
        classes.append({
            "order": H.order,
            "size": len(cls.representatives),
            "representative": [G.label(x) for x in H.elements],
            "centralizer_order": centralizer(G, H).order,
        })
    _emit({
        "name": G.name,
        "order": G.order,
        "abelian": G.is_abelian,
        "elements": [{"index": x, "label": G.label(x), "order": G.element_order(x)} for x in G.elements],
        "conjugacy_classes": [[G.label(x) for x in c] for c in G.conjugacy_classes],
        "subgroup_classes": classes,
    }, args.out)
    return EXIT_OK


def cmd_cover_check(args) -> int:
    datum = cover_from_json(_load_json(args.file))
    datum.validate(stable=not args.allow_unstable)
    cover = build_cover_graph(datum)
    G = datum.group
    tf = type_function(cover)
    con = contract_trivial(cover)
    base = datum.base.graph
    _emit({
        "valid": True,
        "cover_vertices": cover.graph.vertex_count,
        "cover_edges": cover.graph.edge_count,
        "components": len(cover.graph.components),
        "vertex_fibers": [G.order // H.order for H in datum.vertex_subgroups],
        "edge_fibers": [G.order // r for r in datum.base.r],
        "type_function": {str(o): [G.label(x) for x in G.conjugacy_classes[tf[o]]]
                          for o in base.oriented_edges},
        "contracted_cover": {"vertices": con.upper.graph.vertex_count,
                             "edges": con.upper.graph.edge_count},
    }, args.out)
    return EXIT_OK


def cmd_ghost_compute(args) -> int:
    datum = cover_from_json(_load_json(args.file))
    datum.validate(stable=not args.allow_unstable)
    cover = build_cover_graph(datum)
    lifted = lifted_ghost_group(cover, args.budget)
    qr = qr_subgroup(lifted)
    v = verdict_from_lifted(lifted)
    out = v.to_json()
    out["r"] = list(datum.base.r)
    out["separating_edges"] = sorted(qr.separating)
    out["qr_axis_orders"] = list(qr.axis_orders)
    out["lifted"] = [list(a) for a in lifted.elements]
    _emit(out, args.out)
    return EXIT_OK


def _bounds_from_args(args) -> ScanBounds:
    data = _load_json(args.bounds) if args.bounds else {}
    if args.group:
        data["group"] = args.group
    if "group" not in data:
        raise InputError("scan needs --group or a bounds file naming the group")
    for flag, key in (("max_vertices", "max_vertices"), ("max_edges", "max_edges"),
                      ("max_genus", "max_genus"), ("budget", "ghost_budget")):
        val = getattr(args, flag)
        if val is not None:
            data[key] = val
    if args.r_values:
        data["r_values"] = [int(x) for x in args.r_values.split(",")]
    if args.no_abelian_reduction:
        data["reduce_abelian"] = False
    try:
        bounds = ScanBounds.from_json(data, group=_group(data["group"]) if isinstance(data["group"], str)
                                      else None)
        bounds.validate()
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad scan bounds: {exc}") from exc
    return bounds


def cmd_scan(args) -> int:
    bounds = _bounds_from_args(args)

    def progress(res):
        log.info("bases %d, instances %d, junior %d", res.bases, res.instances, len(res.witnesses))

    res = scan_j_locus(bounds, full_reports=args.full_reports, progress=progress, jobs=args.jobs)
    if args.format == "csv":
        rows = res.reports if args.full_reports else res.witnesses
        fh = open(args.out, "w", newline="") if args.out else sys.stdout
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for rep in rows:
                w.writerow(rep.csv_row())
        finally:
            if args.out:
                fh.close()
    else:
        out = res.summary()
        if args.full_reports:
            out["reports"] = [r.to_json() for r in res.reports]
        _emit(out, args.out)
    log.info("status: %s", res.status)
    return {"clean": EXIT_OK, "witnesses": EXIT_WITNESS, "incomplete": EXIT_BUDGET}[res.status]


def _element(G, token: str) -> int:
    token = token.strip()
    if token.lstrip("-").isdigit():
        x = int(token)
        if not 0 <= x < G.order:
            raise InputError(f"element {x} outside 0..{G.order - 1}")
        return x
    for x in G.elements:
        if G.label(x) == token:
            return x
    raise InputError(f"unknown element {token!r}")


def cmd_hurwitz(args) -> int:
    G = _group(args.group)
    classes = [_element(G, c) for c in args.classes]
    image = None
    if args.image:
        if args.image in ("whole", G.name) or args.image == args.group:
            image = whole_group(G)
        elif args.image == "trivial":
            image = trivial_subgroup(G)
        else:
            image = generated_subgroup(G, [_element(G, t) for t in args.image.split(",")])
    res = hurwitz_realizable(args.genus, G, classes, image, budget=args.budget)
    if isinstance(res, Unrealizable):
        _emit({"realizable": False, "reason": res.reason}, args.out)
    else:
        _emit({"realizable": True, "tuple": list(res.entries),
               "labels": [G.label(x) for x in res.entries],
               "image_order": res.image(G).order}, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghostcover", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    grp = sub.add_parser("group", help="group information")
    gsub = grp.add_subparsers(dest="action", required=True)
    gi = gsub.add_parser("info")
    gi.add_argument("spec", help="built-in name (C2..C64, S3, S4, D4, Q8) or JSON file")
    gi.add_argument("--out")
    gi.set_defaults(func=cmd_group_info)

    cov = sub.add_parser("cover", help="cover data")
    csub = cov.add_subparsers(dest="action", required=True)
    cc = csub.add_parser("check")
    cc.add_argument("file")
    cc.add_argument("--allow-unstable", action="store_true")
    cc.add_argument("--out")
    cc.set_defaults(func=cmd_cover_check)

    gh = sub.add_parser("ghost", help="ghost automorphisms")
    ghsub = gh.add_subparsers(dest="action", required=True)
    gc = ghsub.add_parser("compute")
    gc.add_argument("file")
    gc.add_argument("--budget", type=int, default=GHOST_BUDGET)
    gc.add_argument("--allow-unstable", action="store_true")
    gc.add_argument("--out")
    gc.set_defaults(func=cmd_ghost_compute)

    sc = sub.add_parser("scan", help="exhaustive junior scan")
    sc.add_argument("bounds", nargs="?", help="JSON bounds file")
    sc.add_argument("--group")
    sc.add_argument("--max-vertices", type=int)
    sc.add_argument("--max-edges", type=int)
    sc.add_argument("--max-genus", type=int)
    sc.add_argument("--r-values", help="comma separated edge orders")
    sc.add_argument("--budget", type=int, help="cap on the ghost group size per instance")
    sc.add_argument("--out")
    sc.add_argument("--format", choices=("json", "csv"), default="json")
    sc.add_argument("--jobs", type=int, default=1)
    sc.add_argument("--full-reports", action="store_true", help="one report per instance")
    sc.add_argument("--no-abelian-reduction", action="store_true")
    sc.set_defaults(func=cmd_scan)

    hz = sub.add_parser("hurwitz", help="realizability of local monodromy classes")
    hz.add_argument("genus", type=int)
    hz.add_argument("group")
    hz.add_argument("classes", nargs="*", help="one element (index or label) per branch point")
    hz.add_argument("--image", help="'whole', 'trivial' or comma separated generators")
    hz.add_argument("--budget", type=int, default=10 ** 7)
    hz.add_argument("--out")
    hz.set_defaults(func=cmd_hurwitz)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, IllFormed, NotAGroup, DomainError, KeyError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
