"""Command-line interface: ``coxfold <command> [options]``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
JSON output is written with sorted keys so identical runs give identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .affine import (
    INDUCED_NAMES,
    STANDARD_NAMES,
    BorderedCartan,
    classify,
    decompose_affine_root,
    fibonacci_rescale,
    induce,
    is_kac_moody_extension,
    lift_symmetric,
    lift_transposed,
    named_extension,
    search_single_extensions,
    symmetrise,
    transpose,
)
from .coxeter import (
    CartanLike,
    GroupId,
    RootVector,
    cartan_matrix,
    cartan_to_diagram,
    diagram_automorphisms,
    generate_group,
    generate_root_system,
    highest_root,
)
from .double_ext import MINOR_RULES, distinct_diagrams, enumerate_double, kernel_report
from .golden import GoldenRat, parse_golden
from .projection import lift, project, projection_map
from .quasicrystal import ACTIONS, Fragment, FragmentTooLarge, TranslationSpec, generate_fragment
from .render import render_svg
from .report import load_golden, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CATALOG = STANDARD_NAMES + INDUCED_NAMES


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    base: str | None = None
    ext: str | None = None
    axis: str = "twofold"
    length: str = "1"
    n: int = 1
    subspace: str = "par"
    bound: int = 4
    input: str | None = None
    out: str | None = None
    format: str = "text"
    threads: int | None = None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__ if f != "options"}
        vals = {k: v for k, v in vars(args).items() if k in known}
        fmt = "json" if getattr(args, "json", False) else getattr(args, "format", None) or "text"
        vals["format"] = fmt
        opts = {k: v for k, v in vars(args).items() if k not in known and k not in ("json", "func")}
        cfg = cls(options=opts, **vals)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for attr in ("group", "base"):
            val = getattr(self, attr)
            if val is not None:
                try:
                    setattr(self, attr, GroupId.parse(val).value)
                except ValueError as exc:
                    raise UsageError(str(exc)) from None
        if self.ext is not None:
            try:
                self.ext = named_extension(self.ext).name or self.ext
            except KeyError:
                raise UsageError(f"unknown extension {self.ext!r}; known: {', '.join(CATALOG)}") from None
        if self.subspace not in ("par", "perp", "parallel", "perpendicular"):
            raise UsageError("--subspace must be par or perp")
        if self.n < 0:
            raise UsageError("--n must be non-negative")
        if self.bound < 1:
            raise UsageError("--bound must be positive")
        if self.threads is not None and self.threads < 1:
            raise UsageError("--threads must be positive")
        if self.threads is None:
            self.threads = os.cpu_count() or 1


# -- output helpers ------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _vector_arg(cfg: RunConfig, group: GroupId, basis: str) -> RootVector:
    text = cfg.options.get("vector")
    if cfg.input:
        try:
            return RootVector.from_json(_read_json(cfg.input))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed vector file: {exc}") from None
    if not text:
        raise UsageError("give --vector or --input")
    coords = tuple(parse_golden(c) for c in text.split(","))
    return RootVector(group, coords, basis)


def _matrix_arg(cfg: RunConfig):
    """An extension by name, or a BorderedCartan / CartanLike JSON file."""
    if cfg.ext:
        return named_extension(cfg.ext)
    if not cfg.input:
        raise UsageError("give --ext or --input")
    obj = _read_json(cfg.input)
    try:
        if "v" in obj and "w" in obj:
            return BorderedCartan.from_json(obj)
        return CartanLike.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed matrix file: {exc}") from None


def _subspace(cfg: RunConfig) -> str:
    return "perpendicular" if cfg.subspace.startswith("perp") else "parallel"


# -- commands ------------------------------------------------------------------


def cmd_roots(cfg: RunConfig) -> int:
    g = GroupId.parse(cfg.group)
    roots = generate_root_system(g)
    if cfg.format == "json":
        _emit(cfg, _dumps({"group": g.value, "count": len(roots), "highest_root": highest_root(g).to_json(),
                           "roots": [r.to_json() for r in roots]}))
    elif cfg.format == "csv":
        _emit(cfg, _csv([["index", *g.labels]] + [[k, *(str(c) for c in r.coords)] for k, r in enumerate(roots)]))
    else:
        lines = [f"{g.value}: {len(roots)} roots, highest root {highest_root(g)}"]
        lines += [str(r) for r in roots]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_group(cfg: RunConfig) -> int:
    g = GroupId.parse(cfg.group)
    a = cartan_matrix(g)
    diagram = cartan_to_diagram(a)
    info = {
        "group": g.value,
        "rank": g.rank,
        "cartan": a.to_json(),
        "det": a.det().to_json(),
        "coxeter_matrix": [[str(m) for m in row] for row in diagram.coxeter_matrix()],
        "relation_orders": [list(r) for r in diagram.relation_orders()],
        "diagram_automorphisms": len(diagram_automorphisms(a)),
    }
    try:
        w = generate_group(g)
        info["order"] = w.order
        info["rotations"] = int(w.rotations().shape[0])
        info["longest_word"] = int(w.lengths.max())
    except RuntimeError as exc:
        info["order"] = None
        info["note"] = str(exc)
    if cfg.format == "json":
        _emit(cfg, _dumps(info))
    else:
        lines = [f"{g.value} rank {g.rank}", str(a), f"diagram: {diagram}", f"det: {a.det()}",
                 f"diagram automorphisms: {info['diagram_automorphisms']}"]
        lines.append(f"order: {info['order']}" if info["order"] else f"order: not enumerated ({info['note']})")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_project(cfg: RunConfig) -> int:
    pmap = projection_map(cfg.group, _subspace(cfg))
    if GroupId.parse(cfg.group) != pmap.source:
        raise UsageError(f"project needs a source group (E8, D6, A4), got {cfg.group}")
    img = project(pmap, _vector_arg(cfg, pmap.source, "standard"))
    _emit(cfg, _dumps(img.to_json()) if cfg.format == "json" else str(img) + "\n")
    return EXIT_OK


def cmd_lift(cfg: RunConfig) -> int:
    pmap = projection_map(cfg.group, _subspace(cfg))
    if GroupId.parse(cfg.group) != pmap.target:
        raise UsageError(f"lift needs a target group (H4, H3, H2), got {cfg.group}")
    pre = lift(pmap, _vector_arg(cfg, pmap.target, pmap.basis))
    _emit(cfg, _dumps(pre.to_json()) if cfg.format == "json" else str(pre) + "\n")
    return EXIT_OK


def cmd_extend(cfg: RunConfig) -> int:
    hits = search_single_extensions(cfg.base, cfg.bound, with_orbits=True)
    recs = []
    for h in hits:
        ext = h.extension
        recs.append({**ext.to_json(), "orbit_size": h.orbit_size,
                     "minus_affine_root": decompose_affine_root(ext).to_json()})
    if cfg.format == "json":
        _emit(cfg, _dumps({"base": cfg.base, "bound": cfg.bound, "count": len(recs), "extensions": recs}))
    else:
        lines = []
        for h in hits:
            lines += [f"{h.extension.name} (orbit {h.orbit_size})", str(h.extension.full),
                      f"-a0 = {decompose_affine_root(h.extension)}", ""]
        _emit(cfg, "\n".join(lines))
    return EXIT_OK


def cmd_induce(cfg: RunConfig) -> int:
    src = named_extension(cfg.ext)
    if src.base.family == "H":
        raise UsageError(f"induce starts from one of {', '.join(STANDARD_NAMES)}")
    out, rec = induce(src, projection_map(src.base, _subspace(cfg)))
    km = is_kac_moody_extension(out)
    if cfg.format == "json":
        _emit(cfg, _dumps({"source": src.name, "extension": out.to_json(), "classification": rec.to_json(),
                           "kac_moody": km.to_json()}))
    else:
        _emit(cfg, f"{out.name} from {src.name}\n{out.full}\naffine root {rec.affine_root}\n"
                   f"translation length {rec.translation_length}\nKac-Moody checks: {'ok' if km.ok else 'failed'}\n")
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    ext = _matrix_arg(cfg)
    if not isinstance(ext, BorderedCartan):
        raise UsageError("classify needs a bordered extension (name or JSON with v and w)")
    if cfg.options.get("transpose"):
        ext = transpose(ext)
    rec = classify(ext)
    if cfg.options.get("rescale"):
        rec = fibonacci_rescale(rec, cfg.options["rescale"])
    if cfg.format == "json":
        _emit(cfg, _dumps(rec.to_json()))
    else:
        q, r = rec.quadruplet, rec.reference
        _emit(cfg, f"{rec.name or 'extension'} of {rec.target.value} along {rec.axis}\n"
                   f"x = {rec.x}, y = {rec.y}, xy = {rec.xy}\n"
                   f"quadruplet {q}, reference {r}, k = {rec.k}, multipliers ({rec.multipliers[0]}, {rec.multipliers[1]})\n"
                   f"translation length {rec.translation_length}\n")
    return EXIT_OK


def cmd_symmetrise(cfg: RunConfig) -> int:
    if cfg.options.get("lift_transposed"):
        if not cfg.ext:
            raise UsageError("--lift-transposed needs --ext")
        m = lift_transposed(cfg.ext)
    elif cfg.options.get("lift_symmetric"):
        m = lift_symmetric(cfg.options["lift_symmetric"])
    else:
        m = _matrix_arg(cfg)
    s = symmetrise(m, side=cfg.options.get("side", "left"))
    if cfg.format == "json":
        _emit(cfg, _dumps(s.to_json()))
    else:
        lines = [f"symmetrisable ({s.side}): {s.exists}" + (f" ({s.reason})" if s.reason else "")]
        if s.D:
            lines.append("D = diag(" + ", ".join(str(d) for d in s.D) + ")")
            lines.append(f"D rational: {s.rational}")
        if s.exists:
            lines.append("S =\n" + "\n".join("  " + "  ".join(str(x) for x in row) for row in s.S))
            lines.append(f"S in Z[tau]: {s.S_in_ztau}")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_double(cfg: RunConfig) -> int:
    rule = cfg.options.get("minor_rule", "none")
    exts = enumerate_double(cfg.base, rule, cfg.threads)
    classes = distinct_diagrams(exts) if cfg.options.get("diagrams") else None
    realisable = sum(kernel_report(e).realisable for e in exts)
    summary = {"base": cfg.base, "minor_rule": rule, "count": len(exts), "kernel_trivial": realisable}
    if classes is not None:
        summary["diagram_classes"] = len(classes)
    if cfg.format == "json":
        obj = {"summary": summary, "matrices": [e.to_json() for e in exts]}
        if classes is not None:
            obj["classes"] = [[exts.index(e) for e in cls] for cls in classes]
        _emit(cfg, _dumps(obj))
    else:
        lines = [f"{cfg.base}: {len(exts)} double extensions (minor rule {rule}), "
                 f"{realisable} with trivial projection kernel"]
        if classes is not None:
            lines.append(f"{len(classes)} diagram classes")
            for k, cls in enumerate(classes):
                rep = cls[0]
                lines.append(f"  class {k}: {len(cls)} matrices, e.g. v1={rep.v1} v2={rep.v2} coupling={rep.coupling}")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_fragment(cfg: RunConfig) -> int:
    try:
        spec = TranslationSpec.parse(cfg.group, cfg.axis, cfg.length)
    except (ValueError, SyntaxError) as exc:
        raise UsageError(str(exc)) from None
    action = cfg.options.get("action", "rotation")
    try:
        frag = generate_fragment(spec, cfg.n, cfg.threads, action)
    except FragmentTooLarge as exc:
        raise UsageError(f"fragment too large: {exc}") from None
    fmt = cfg.format
    if fmt == "text" and cfg.out:
        fmt = "csv" if cfg.out.endswith(".csv") else "json"
    if fmt == "json":
        _emit(cfg, _dumps(frag.to_json()))
    elif fmt == "csv":
        _emit(cfg, frag.to_csv())
    else:
        _emit(cfg, f"{spec.group.value} {spec.axis} length {spec.length} ({action}): "
                   f"shells {list(frag.cardinalities)}, union {frag.union_cardinality}\n")
    return EXIT_OK


def cmd_render(cfg: RunConfig) -> int:
    if not cfg.input:
        raise UsageError("render needs --input FRAGMENT.json")
    try:
        frag = Fragment.from_json(_read_json(cfg.input))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed fragment file: {exc}") from None
    shells = [[tuple(p.coords) for p in frag.shell_points(m)] for m in range(len(frag.shells))]
    stamp = None
    if not cfg.options.get("no_timestamp"):
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    title = cfg.options.get("title") or f"{frag.spec.group.value} {frag.spec.axis} length {frag.spec.length}"
    try:
        svg = render_svg(frag.spec.group, shells, cfg.options.get("plane", "xy"), cfg.options.get("size", 600),
                         title, stamp)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(cfg, svg)
    return EXIT_OK


def cmd_report_all(cfg: RunConfig) -> int:
    try:
        golden = load_golden(cfg.options.get("golden"))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"cannot load golden manifest: {exc}") from None
    only = set(cfg.options["only"]) if cfg.options.get("only") else None
    records = run_checks(golden, cfg.threads, only)
    strict = cfg.options.get("strict")
    failed = [r for r in records if r["status"] == "fail" or (strict and r["status"] == "deviation")]
    if cfg.format == "json":
        for r in records:
            r.pop("actual", None)
        crit = {}
        for r in records:
            c = crit.setdefault(str(r["criterion"]), {"criterion": r["criterion"], "status": "pass", "checks": []})
            c["checks"].append(r["id"])
            if r["status"] == "fail" or (r["status"] == "deviation" and c["status"] == "pass"):
                c["status"] = r["status"]
        _emit(cfg, _dumps({"version": __version__, "passed": not failed, "criteria": list(crit.values()),
                           "checks": records}))
    else:
        lines = []
        for r in records:
            lines.append(f"[{r['status'].upper():9}] {r['id']} (criterion {r['criterion']}): {r['citation']}")
            lines += ["    " + d for d in r["diff"]]
            if r.get("known_deviation") and r["status"] == "deviation":
                lines.append("    known deviation: " + r["known_deviation"])
        counts = {s: sum(r["status"] == s for r in records) for s in ("pass", "fail", "deviation")}
        lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['deviation']} known deviations")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_FAIL if failed else EXIT_OK


# -- parser --------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, fmt: bool = True) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable JSON output")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    if fmt:
        p.add_argument("--format", choices=("text", "json", "csv"), default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coxfold", description="Affine extensions of H2, H3, H4 by folding and projection.")
    ap.add_argument("--version", action="version", version=f"coxfold {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="root system of a group")
    p.add_argument("--group", required=True)
    _common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("group", help="Cartan matrix, diagram and group order")
    p.add_argument("--group", required=True)
    _common(p, fmt=False)
    p.set_defaults(func=cmd_group)

    for name, func, what in (("project", cmd_project, "source (E8, D6, A4)"), ("lift", cmd_lift, "target (H4, H3, H2)")):
        p = sub.add_parser(name, help=f"{name} a vector; --group is the {what} group")
        p.add_argument("--group", required=True)
        p.add_argument("--subspace", default="par", help="par or perp")
        p.add_argument("--vector", help="comma-separated coordinates, e.g. '1,0,tau/2,0'")
        p.add_argument("--input", help="RootVector JSON file")
        _common(p, fmt=False)
        p.set_defaults(func=func)

    p = sub.add_parser("extend", help="search single-node affine extensions")
    p.add_argument("--base", required=True)
    p.add_argument("--bound", type=int, default=4, help="largest |entry| of the border (default 4)")
    _common(p, fmt=False)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("induce", help="induce an H extension by projection")
    p.add_argument("--ext", required=True, help=", ".join(STANDARD_NAMES))
    p.add_argument("--subspace", default="par", help="par or perp")
    _common(p, fmt=False)
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("classify", help="Fibonacci classification of an H extension")
    p.add_argument("--ext", help=", ".join(INDUCED_NAMES))
    p.add_argument("--input", help="BorderedCartan JSON file")
    p.add_argument("--transpose", action="store_true", help="classify the transposed matrix")
    p.add_argument("--rescale", type=int, default=0, help="move the result along its Fibonacci family")
    _common(p, fmt=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("symmetrise", help="write A = D S with D diagonal")
    p.add_argument("--ext", help="extension name")
    p.add_argument("--input", help="matrix JSON file")
    p.add_argument("--side", choices=("left", "right"), default="left", help="A = D S (left) or A = S D (right)")
    p.add_argument("--lift-transposed", action="store_true", help="symmetrise the lift of the transposed --ext")
    p.add_argument("--lift-symmetric", metavar="GROUP", help="symmetrise the lift of the symmetric H extension")
    _common(p, fmt=False)
    p.set_defaults(func=cmd_symmetrise)

    p = sub.add_parser("double", help="simply-laced affine double extensions")
    p.add_argument("--base", required=True)
    p.add_argument("--diagrams", action="store_true", help="also group the matrices into diagram classes")
    p.add_argument("--minor-rule", choices=MINOR_RULES, default="none")
    _common(p, fmt=False)
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("fragment", help="quasicrystal fragment shells")
    p.add_argument("--group", required=True)
    p.add_argument("--axis", default="twofold", choices=("twofold", "threefold", "fivefold"))
    p.add_argument("--length", default="1", help="translation length in Q[tau], e.g. tau, 1/2, 1-tau")
    p.add_argument("--n", type=int, default=1, help="largest number of translations")
    p.add_argument("--action", choices=ACTIONS, default="rotation", help="acting group (default rotation)")
    _common(p)
    p.set_defaults(func=cmd_fragment)

    p = sub.add_parser("render", help="SVG plot of a fragment JSON file")
    p.add_argument("--input", required=True)
    p.add_argument("--plane", default="xy", help="coordinate plane for H3/H4 (xy, xz, yz, xw, yw, zw)")
    p.add_argument("--size", type=int, default=600)
    p.add_argument("--title")
    p.add_argument("--no-timestamp", action="store_true", help="omit the generation comment")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("report-all", help="run the full pipeline against the golden manifest")
    p.add_argument("--golden", help="manifest path (default: packaged golden.json)")
    p.add_argument("--only", nargs="+", metavar="CHECK", help="run only these check ids")
    p.add_argument("--strict", action="store_true", help="treat known deviations as failures")
    _common(p, fmt=False)
    p.set_defaults(func=cmd_report_all)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_args(args)
        return args.func(cfg)
    except UsageError as exc:
        print(f"coxfold: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, SyntaxError, ZeroDivisionError) as exc:
        print(f"coxfold: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
