"""Command-line surface: inspect lattices and systems, run the theorem suites.

Exit codes: 0 all checks pass, 1 any check failed, 2 usage or config error.
JSON output is schema-stable and byte-identical across reruns of the same
config; per-check timings are only emitted with --timings.
"""

from __future__ import annotations

import argparse
import json
import sys

from .groups import TopoGroupError, build_group
from .lattice import enumerate_subgroups
from .toposystems import (
    build_toposys,
    closure_and_limits,
    find_finite_subcover,
    interior_boundary,
    is_hausdorff,
    resolve_subgroup_literal,
    t_closed_checks,
    verify_toposys,
)
from .filters import (
    convergence_set,
    enumerate_ultrafilters,
    extend_to_ultrafilter,
    is_ultrafilter,
    parse_filter,
)
from .products import direct_product, product_identities_check, product_toposys, tychonoff_certificate
from .suites import DEFAULT_CATALOG, SUITE_NAMES, SuiteConfig, run_suite


def _emit(reports, fmt: str, timings: bool, out=None):
    out = out or sys.stdout
    if fmt == "json":
        for r in reports:
            out.write(json.dumps(r.to_dict(timings), sort_keys=True) + "\n")
    else:
        for r in reports:
            out.write(r.text_line(timings) + "\n")


def _load_config_file(path: str) -> dict:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise TopoGroupError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in ("max-order", "groups", "suites", "format", "timings"):
                raise TopoGroupError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = value.strip()
    return values


def _lattice_for(args) -> tuple:
    group = build_group(args.group)
    return group, enumerate_subgroups(group)


def _cmd_lattice(args) -> int:
    group, lattice = _lattice_for(args)
    if args.format == "json":
        for i in range(len(lattice)):
            sub = lattice.subgroup(i)
            record = {
                "index": i,
                "order": sub.order,
                "elements": list(sub.members),
                "names": [group.name(x) for x in sub.members],
                "normal": lattice.is_normal_index(i),
            }
            print(json.dumps(record, sort_keys=True))
    else:
        print(f"{group.descriptor}: order {group.order}, {len(lattice)} subgroups")
        for i in range(len(lattice)):
            sub = lattice.subgroup(i)
            tag = " normal" if lattice.is_normal_index(i) else ""
            names = ",".join(group.name(x) for x in sub.members)
            print(f"  #{i} order={sub.order}{tag} {{{names}}}")
    return 0


def _cmd_toposys(args) -> int:
    group, lattice = _lattice_for(args)
    system = build_toposys(lattice, args.sys)
    print(f"{group.descriptor} / {system.provenance}: {len(system.members)} topens")
    for note in system.notes:
        print(f"  note: {note}")
    for i in system.member_indices:
        print(f"  {lattice.describe(i)}")
    if args.verify:
        report = verify_toposys(lattice, system.members)
        print(f"axioms: {'pass' if report.passed else f'fail {report.first_failure()}'}")
        return 0 if report.passed else 1
    return 0


def _cmd_closure(args) -> int:
    group, lattice = _lattice_for(args)
    system = build_toposys(lattice, args.sys)
    x = lattice.subgroup(resolve_subgroup_literal(lattice, args.subgroup))
    interior, boundary = interior_boundary(system, x)
    limits, closure = closure_and_limits(system, x)
    closed = t_closed_checks(system, x)
    print(f"subgroup: {lattice.describe(lattice.index_of(x.mask))}")
    print(f"interior: {lattice.describe(lattice.index_of(interior.mask))}")
    print(f"boundary: {sorted(boundary)}")
    print(f"limit points: {sorted(limits)}")
    print(f"closure: {lattice.describe(lattice.index_of(closure.mask))}")
    print(f"t-closed: {closed.is_t_closed} (witness {closed.t_closed_witness})")
    print(f"weak-t-closed: {closed.is_weak_t_closed} (witness {closed.weak_witness})")
    return 0


def _cmd_hausdorff(args) -> int:
    group, lattice = _lattice_for(args)
    system = build_toposys(lattice, args.sys)
    ok, witness = is_hausdorff(system)
    if ok:
        print("hausdorff: true")
        return 0
    print(f"hausdorff: false (inseparable pair x={witness.x}, y={witness.y})")
    return 1


def _cmd_cover(args) -> int:
    group, lattice = _lattice_for(args)
    system = build_toposys(lattice, args.sys)
    target = lattice.subgroup(
        resolve_subgroup_literal(lattice, args.target) if args.target else lattice.top_index
    )
    cover = [resolve_subgroup_literal(lattice, p) for p in args.cover.split(",") if p]
    certificate = find_finite_subcover(system, target, cover)
    if certificate is None:
        print("not a cover")
        return 1
    kind = "exact" if certificate.exact else "greedy"
    print(f"minimal subcover ({kind}): {' '.join(f'#{i}' for i in certificate.selected)}")
    return 0


def _cmd_filters(args) -> int:
    group, lattice = _lattice_for(args)
    if args.filter:
        f = parse_filter(lattice, args.filter)
        ultra, witness = is_ultrafilter(f)
        print(f"filter {f.provenance}: members {[f'#{i}' for i in f.member_indices]}")
        print(f"ultrafilter: {ultra}" + (f" (coverable member #{witness})" if not ultra else ""))
        ext = extend_to_ultrafilter(f)
        print(f"extension: {ext.provenance} with members {[f'#{i}' for i in ext.member_indices]}")
    else:
        for f in enumerate_ultrafilters(lattice):
            print(f"{f.provenance}: {[f'#{i}' for i in f.member_indices]}")
    return 0


def _cmd_converge(args) -> int:
    group, lattice = _lattice_for(args)
    system = build_toposys(lattice, args.sys)
    f = parse_filter(lattice, args.filter)
    cs = convergence_set(f, system)
    print(f"{f.provenance} on {system.provenance}: converges to {list(cs.points)}")
    for cls in cs.classes:
        print(f"  class {list(cls)} (cyclic subgroup #{lattice.cyclic_index(cls[0])})")
    return 0


def _cmd_product(args) -> int:
    spec = args.groups.replace(" ", "")
    if spec.startswith("product(") and spec.endswith(")"):
        from .groups import _split_top_level

        factor_descs = [p for p in _split_top_level(spec[len("product(") : -1]) if p]
    else:
        factor_descs = [p for p in spec.split(";") if p]
    factors = [build_group(d) for d in factor_descs]
    product = direct_product(factors)
    print(f"product group {product.group.descriptor}: order {product.group.order}")
    code = 0
    if args.identities:
        report = product_identities_check(product)
        print(f"component identities: {'pass' if report.passed else 'fail'}")
        code = max(code, 0 if report.passed else 1)
    if args.sys:
        kinds = [p for p in args.sys.split(";") if p]
        systems = [build_toposys(enumerate_subgroups(f), k) for f, k in zip(factors, kinds)]
        ptop = product_toposys(product, systems)
        print(f"product system: {len(ptop.system.members)} topens")
        if args.tychonoff:
            plattice = enumerate_subgroups(product.group)
            for f in enumerate_ultrafilters(plattice):
                cert = tychonoff_certificate(ptop, f)
                print(
                    f"  {f.provenance}: converges at {product.decode(cert.point)}"
                    f" ({len(cert.replays)} topens replayed)"
                )
    return code


def _cmd_theorems(args) -> int:
    values = _load_config_file(args.config) if args.config else {}
    max_order = args.max_order if args.max_order is not None else int(values.get("max-order", 24))
    groups = tuple(
        (args.groups or values.get("groups", "")).split(",")
        if (args.groups or values.get("groups"))
        else DEFAULT_CATALOG
    )
    suites = tuple(args.suite) if args.suite else tuple(
        values.get("suites", "").split(",") if values.get("suites") else SUITE_NAMES
    )
    fmt = args.format or values.get("format", "text")
    timings = args.timings or values.get("timings", "") in ("1", "true", "yes")
    config = SuiteConfig(
        max_group_order=max_order,
        groups=tuple(g for g in groups if g),
        suites=tuple(s for s in suites if s),
        fmt=fmt,
        timings=timings,
    )
    result = run_suite(config)
    _emit(result.reports, fmt, timings)
    summary = {
        "summary": {
            "pass": result.counts.get("pass", 0),
            "fail": result.counts.get("fail", 0),
            "finding": result.counts.get("finding", 0),
        }
    }
    if fmt == "json":
        print(json.dumps(summary, sort_keys=True))
    else:
        c = summary["summary"]
        print(f"summary: {c['pass']} pass, {c['fail']} fail, {c['finding']} finding")
    return result.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topogroups",
        description="Subgroup lattices, topo-systems, subgroup filters and the theorem suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="list all subgroups with canonical indices")
    p.add_argument("--group", required=True, help="group descriptor, e.g. sym:3")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=_cmd_lattice)

    p = sub.add_parser("toposys", help="build a topo-system and list its topens")
    p.add_argument("--group", required=True)
    p.add_argument("--sys", required=True, help="system descriptor, e.g. normal or generated:#1,#2")
    p.add_argument("--verify", action="store_true", help="re-run the axiom verifier")
    p.set_defaults(fn=_cmd_toposys)

    p = sub.add_parser("closure", help="interior, boundary, limit points, closure, closedness")
    p.add_argument("--group", required=True)
    p.add_argument("--sys", required=True)
    p.add_argument("--subgroup", required=True, help="gen{e1,e2,...} or #k")
    p.set_defaults(fn=_cmd_closure)

    p = sub.add_parser("hausdorff", help="separation check with witness")
    p.add_argument("--group", required=True)
    p.add_argument("--sys", required=True)
    p.set_defaults(fn=_cmd_hausdorff)

    p = sub.add_parser("cover", help="minimal topen subcover of a subgroup")
    p.add_argument("--group", required=True)
    p.add_argument("--sys", required=True)
    p.add_argument("--target", default="", help="subgroup literal; defaults to the whole group")
    p.add_argument("--cover", required=True, help="comma-separated topen literals")
    p.set_defaults(fn=_cmd_cover)

    p = sub.add_parser("filters", help="inspect a filter or list all ultrafilters")
    p.add_argument("--group", required=True)
    p.add_argument("--filter", default="", help="principal:x | generated:#i,#j | cofinite")
    p.set_defaults(fn=_cmd_filters)

    p = sub.add_parser("converge", help="convergence set of a filter in a system")
    p.add_argument("--group", required=True)
    p.add_argument("--sys", required=True)
    p.add_argument("--filter", required=True)
    p.set_defaults(fn=_cmd_converge)

    p = sub.add_parser("product", help="direct products, identities, Tychonoff certificates")
    p.add_argument("--groups", required=True, help="semicolon-separated factor descriptors")
    p.add_argument("--sys", default="", help="semicolon-separated factor system descriptors")
    p.add_argument("--identities", action="store_true")
    p.add_argument("--tychonoff", action="store_true")
    p.set_defaults(fn=_cmd_product)

    p = sub.add_parser("theorems", help="run the theorem suites over the catalog")
    p.add_argument("--suite", action="append", choices=SUITE_NAMES, help="repeatable; default all")
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--groups", default="", help="comma-separated descriptors; default catalog")
    p.add_argument("--format", choices=("text", "json"), default=None)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--config", default="", help="key=value config file")
    p.set_defaults(fn=_cmd_theorems)

    return parser


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except TopoGroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
