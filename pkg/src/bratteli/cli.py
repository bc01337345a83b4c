"""Command-line surface: config ingestion, dispatch, report emission.

Subcommands: ``diagram show|heights``, ``telescope``, ``measure
classify|extend|cylinder|check-invariance``, ``eigen verify|measure|compare``,
``finite classify``, ``vershik classify|orbit``.  Output formats: human
(text), json (deterministic, sorted keys), csv (fixed columns per command).
Exact rationals are emitted as ``num/den`` strings plus a 12-significant-digit
decimal; infinite outcomes as the literal ``inf`` with their divergence
witness attached.

Exit status: 0 success, 1 internal error, 2 configuration error, 3 at least
one result could not be certified (undetermined).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from decimal import Decimal, getcontext
from fractions import Fraction
from typing import Optional

from . import diagram as dg
from . import extension as ext
from . import finite_stationary as fs
from . import orders as od
from . import spectral as sp
from .measure import (
    EndVertex,
    MeasureVectors,
    check_tail_invariance,
)
from .sequences import seq_from_text

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_UNCERTIFIED = 3


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# Value formatting
# ---------------------------------------------------------------------------


def fr_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def fr_decimal(x: Fraction, digits: int = 12) -> str:
    getcontext().prec = digits
    return str(Decimal(x.numerator) / Decimal(x.denominator))


def rational_doc(x: Fraction) -> dict:
    return {"exact": fr_str(x), "decimal": fr_decimal(x)}


def result_doc(res: ext.ConvergenceResult) -> dict:
    doc = {
        "status": res.status,
        "partial_sum": rational_doc(res.partial_sum),
        "terms_used": res.terms_used,
    }
    if res.status == ext.FINITE:
        doc["tail_bound"] = rational_doc(res.tail_bound)
        if res.is_exact:
            doc["exact_value"] = rational_doc(res.exact_value)
    if res.status == ext.INFINITE:
        doc["value"] = "inf"
        doc["divergence_witness"] = res.divergence_witness
    if res.certificate:
        doc["certificate"] = res.certificate
    return doc


def result_cell(res: ext.ConvergenceResult) -> str:
    if res.status == ext.INFINITE:
        return "inf"
    if res.status == ext.UNDETERMINED:
        return "undetermined"
    if res.is_exact:
        return fr_str(res.exact_value)
    return fr_str(res.partial_sum)


# ---------------------------------------------------------------------------
# Shared argument handling
# ---------------------------------------------------------------------------


def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["ak", "decreasing", "increasing", "nonstat-uniform", "general-chain"])
    p.add_argument("--a", type=int, help="ak family: first odometer size")
    p.add_argument("--k", type=int, help="ak family: drop to the remaining odometers")
    p.add_argument("--diagonal", help="decreasing family: vertex sequence, e.g. table:5,3:constant:2")
    p.add_argument("--an", help="nonstat-uniform family: level sequence, e.g. constant:2")
    p.add_argument("--entries", help="general-chain: JSON list of [level, vertex, value]")
    p.add_argument("--default", type=int, default=2, help="general-chain: off-table value")
    p.add_argument("--spec-json", help="path to a full diagram JSON document")
    p.add_argument("--max-level", type=int, default=16)
    p.add_argument("--max-vertex", type=int, default=12)


def _load_doc(text_or_path: str):
    if os.path.exists(text_or_path):
        with open(text_or_path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text_or_path)


def _build_spec(args) -> tuple[dg.DiagramSpec, dg.Truncation]:
    window = dg.Truncation(args.max_level, args.max_vertex)
    if getattr(args, "spec_json", None):
        spec, win = dg.diagram_from_json(_load_doc(args.spec_json))
        return spec, (win or window)
    fam = args.family
    if fam == "ak":
        if args.a is None or args.k is None:
            raise ConfigError("ak family needs --a and --k")
        return dg.StationaryAK(args.a, args.k), window
    if fam == "decreasing":
        if not args.diagonal:
            raise ConfigError("decreasing family needs --diagonal")
        return dg.StationaryDecreasing(seq_from_text(args.diagonal)), window
    if fam == "increasing":
        return dg.StationaryIncreasing(), window
    if fam == "nonstat-uniform":
        if not args.an:
            raise ConfigError("nonstat-uniform family needs --an")
        return dg.NonStationaryUniform(seq_from_text(args.an)), window
    if fam == "general-chain":
        entries = tuple(tuple(e) for e in json.loads(args.entries or "[]"))
        return dg.GeneralChain(entries, args.default), window
    raise ConfigError("no diagram family given (use --family or --spec-json)")


def _parse_cylinders(text: str) -> list[EndVertex]:
    out = []
    for part in text.replace(" ", "").split(";"):
        if not part:
            continue
        body = part.strip("()")
        m, i = body.split(",")
        out.append(EndVertex(int(m), int(i)))
    if not out:
        raise ConfigError("no cylinders given")
    return out


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def emit(report: dict, fmt: str, csv_table: Optional[tuple[list[str], list[list[str]]]] = None) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    if fmt == "csv":
        if csv_table is None:
            raise ConfigError(f"command {report.get('command')} has no csv form")
        header, rows = csv_table
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        print(buf.getvalue(), end="")
        return
    _emit_human(report)


def _emit_human(doc, indent: int = 0) -> None:
    pad = "  " * indent
    if isinstance(doc, dict):
        for key in doc:
            val = doc[key]
            if isinstance(val, (dict, list)):
                print(f"{pad}{key}:")
                _emit_human(val, indent + 1)
            else:
                print(f"{pad}{key}: {val}")
    elif isinstance(doc, list):
        for val in doc:
            if isinstance(val, (dict, list)):
                _emit_human(val, indent + 1)
                print()
            else:
                print(f"{pad}- {val}")
    else:
        print(f"{pad}{doc}")


# ---------------------------------------------------------------------------
# Command implementations (each returns (report, csv_table, exit_code))
# ---------------------------------------------------------------------------


def cmd_diagram_show(args):
    spec, window = _build_spec(args)
    level = args.level
    mat = dg.incidence(spec, level, window)
    report = {
        "command": "diagram show",
        "family": spec.to_json(window),
        "level": level,
        "entries": [list(e) for e in mat.entries],
        "complete_rows": sorted(mat.complete_rows),
    }
    csv_rows = [[str(v), str(w), str(m)] for v, w, m in mat.entries]
    return report, (["row", "col", "multiplicity"], csv_rows), EXIT_OK


def cmd_diagram_heights(args):
    spec, window = _build_spec(args)
    hv = dg.heights(spec, args.level, window)
    values = {str(i): str(hv.values[i]) for i in sorted(hv.values)}
    report = {
        "command": "diagram heights",
        "family": spec.to_json(window),
        "level": args.level,
        "heights": values,
        "exact_width": hv.exact_width,
    }
    if args.verify_bruteforce:
        budget = int(os.environ.get("BRATTELI_MAX_WORK", "200000"))
        checked = {}
        for i in sorted(hv.values):
            try:
                checked[str(i)] = dg.count_paths_bruteforce(spec, dg.VertexId(args.level, i), window, budget)
            except dg.WorkBudgetError:
                checked[str(i)] = "budget-exceeded"
        report["bruteforce"] = {k: str(v) for k, v in checked.items()}
        mismatches = [
            k for k, v in checked.items() if v != "budget-exceeded" and int(values[k]) != v
        ]
        report["bruteforce_mismatches"] = mismatches
    csv_rows = [[str(i), str(hv.values[i])] for i in sorted(hv.values)]
    return report, (["vertex", "height"], csv_rows), EXIT_OK


def cmd_telescope(args):
    spec, window = _build_spec(args)
    pts = [int(x) for x in args.breakpoints.split(",")]
    out = dg.telescope(spec, pts, window)
    report = {
        "command": "telescope",
        "family": spec.to_json(window),
        "breakpoints": pts,
        "levels": [[list(e) for e in lvl] for lvl in out.levels],
    }
    csv_rows = [
        [str(k), str(v), str(w), str(m)]
        for k, lvl in enumerate(out.levels)
        for v, w, m in lvl
    ]
    return report, (["level", "row", "col", "multiplicity"], csv_rows), EXIT_OK


def cmd_measure_classify(args):
    spec, window = _build_spec(args)
    cls = ext.classify_ergodic_measures(spec, args.imax, args.max_terms)
    rows = []
    entries = []
    for e in cls.entries:
        norm = fr_str(e.normalizing_constant) if e.normalizing_constant is not None else ""
        rows.append(
            [
                str(e.index),
                e.mass.status,
                fr_str(e.mass.partial_sum),
                fr_str(e.mass.tail_bound) if e.mass.tail_bound is not None else "",
                str(e.mass.terms_used),
                norm,
            ]
        )
        doc = {"odometer": e.index, "mass": result_doc(e.mass)}
        if e.normalizing_constant is not None:
            doc["normalizing_constant"] = rational_doc(e.normalizing_constant)
        entries.append(doc)
    report = {
        "command": "measure classify",
        "family": spec.to_json(window),
        "imax": args.imax,
        "max_terms": args.max_terms,
        "entries": entries,
        "finite_odometers": list(cls.finite_indices),
        "notes": list(cls.notes),
    }
    code = EXIT_UNCERTIFIED if cls.partial else EXIT_OK
    header = ["i", "status", "partial_sum", "tail_bound", "terms_used", "normalized_mass"]
    return report, (header, rows), code


def cmd_measure_extend(args):
    spec, window = _build_spec(args)
    res = ext.odometer_extension_mass(spec, args.i, args.max_terms)
    report = {
        "command": "measure extend",
        "family": spec.to_json(window),
        "odometer": args.i,
        "mass": result_doc(res),
    }
    rows = []
    if args.trace:
        terms = ext.mass_series_terms(spec, args.i, min(args.max_terms, args.trace))
        partial = Fraction(1)
        trace = []
        for n, t in enumerate(terms):
            partial += t
            trace.append({"n": n, "term": fr_str(t), "partial_sum": fr_str(partial)})
            rows.append([str(n), fr_str(t), fr_str(partial)])
        report["trace"] = trace
    code = EXIT_UNCERTIFIED if res.status == ext.UNDETERMINED else EXIT_OK
    return report, (["n", "term", "partial_sum"], rows), code


def cmd_measure_cylinder(args):
    spec, window = _build_spec(args)
    cyls = _parse_cylinders(args.cylinders)
    entries, rows = [], []
    undetermined = False
    for cyl in cyls:
        res = ext.extended_cylinder_measure(spec, args.i, cyl, args.max_terms)
        undetermined = undetermined or res.status == ext.UNDETERMINED
        entries.append({"cylinder": [cyl.length, cyl.index], "value": result_doc(res)})
        rows.append([str(cyl.length), str(cyl.index), res.status, result_cell(res)])
    report = {
        "command": "measure cylinder",
        "family": spec.to_json(window),
        "odometer": args.i,
        "entries": entries,
    }
    code = EXIT_UNCERTIFIED if undetermined else EXIT_OK
    return report, (["m", "j", "status", "value"], rows), code


def _canonical_eigen_pair(spec: dg.DiagramSpec, shift: int) -> sp.EigenPair:
    if isinstance(spec, dg.StationaryAK):
        return sp.eigenvector_ak(spec.a, spec.k)
    if spec.vertex_diag is not None:
        return sp.eigenvector_decreasing(spec.vertex_diag, shift)
    raise ConfigError("this family has no constructive eigenpair")


def cmd_measure_check_invariance(args):
    spec, window = _build_spec(args)
    if args.vectors:
        doc = _load_doc(args.vectors)
        table = {
            int(level): {int(i): Fraction(val) for i, val in row.items()}
            for level, row in doc["vectors"].items()
        }
        mv = MeasureVectors.from_table(table, label="user vectors")
        window = dg.Truncation(min(window.max_level, mv.max_level), window.max_vertex)
    else:
        pair = _canonical_eigen_pair(spec, args.shift)
        mv = sp.eigen_measure(spec, pair, window).measure_vectors(window)
    rep = check_tail_invariance(spec, mv, window)
    report = {
        "command": "measure check-invariance",
        "family": spec.to_json(window),
        "source": mv.label,
        "ok": rep.ok,
        "checked_rows": rep.checked_rows,
        "failures": [list(f) for f in rep.failures],
    }
    rows = [[str(n), str(v)] for n, v in rep.failures]
    return report, (["level", "vertex"], rows), EXIT_OK if rep.ok else EXIT_UNCERTIFIED


def cmd_eigen_verify(args):
    spec, window = _build_spec(args)
    pair = _canonical_eigen_pair(spec, args.shift)
    window = dg.Truncation(window.max_level, max(window.max_vertex, args.rows))
    rep = sp.verify_eigenpair(spec, pair, window)
    report = {
        "command": "eigen verify",
        "family": spec.to_json(window),
        "eigenpair": pair.label,
        "lambda": fr_str(pair.lam),
        "rows_checked": args.rows,
        "verified": rep.verified,
        "nonzero_rows": [
            {"row": i, "residual": fr_str(rep.residuals[i])} for i in rep.nonzero
        ],
    }
    rows = [[str(i), fr_str(rep.residuals[i])] for i in rep.nonzero]
    return report, (["row", "residual"], rows), EXIT_OK if rep.verified else EXIT_UNCERTIFIED


def cmd_eigen_measure(args):
    spec, window = _build_spec(args)
    pair = _canonical_eigen_pair(spec, args.shift)
    measure = sp.eigen_measure(spec, pair, window)
    if args.request:
        doc = _load_doc(args.request)
        cyls = [EndVertex(int(m), int(i)) for m, i in doc["cylinders"]]
    elif args.cylinders:
        cyls = _parse_cylinders(args.cylinders)
    else:
        raise ConfigError("eigen measure needs --request or --cylinders")
    entries, rows = [], []
    for cyl in cyls:
        val = measure.cylinder_value(cyl)
        entries.append({"cylinder": [cyl.length, cyl.index], "value": rational_doc(val)})
        rows.append([str(cyl.length), str(cyl.index), fr_str(val), fr_decimal(val)])
    report = {
        "command": "eigen measure",
        "family": spec.to_json(window),
        "eigenpair": pair.label,
        "entries": entries,
    }
    return report, (["m", "j", "value", "decimal"], rows), EXIT_OK


def cmd_eigen_compare(args):
    spec, window = _build_spec(args)
    pair = _canonical_eigen_pair(spec, args.shift)
    cyls = [EndVertex(m, j) for m in range(args.mmax + 1) for j in range(args.i, args.jmax + 1)]
    rep = sp.compare_eigen_vs_extension(spec, args.i, pair, cyls, args.max_terms)
    entries, rows = [], []
    for e in rep.entries:
        entries.append(
            {
                "cylinder": [e.cylinder.length, e.cylinder.index],
                "eigen": rational_doc(e.eigen_value),
                "extension": result_doc(e.extension),
                "verdict": e.verdict,
            }
        )
        rows.append(
            [str(e.cylinder.length), str(e.cylinder.index), fr_str(e.eigen_value), e.verdict]
        )
    report = {
        "command": "eigen compare",
        "family": spec.to_json(window),
        "odometer": args.i,
        "all_equal": rep.all_equal,
        "entries": entries,
    }
    code = EXIT_OK if rep.all_equal else EXIT_UNCERTIFIED
    return report, (["m", "j", "eigen_value", "verdict"], rows), code


def cmd_finite_classify(args):
    matrix = _load_doc(args.matrix)
    tol = args.tol
    dec = fs.decompose(matrix)
    distinguished = fs.distinguished_classes(dec, tol)
    measures = fs.measures_finite_stationary(matrix, tol)
    classes_doc = []
    for idx, cls in enumerate(dec.classes):
        lo, hi = fs.spectral_radius(dec.class_matrix(idx), tol)
        classes_doc.append(
            {
                "class": idx,
                "vertices": list(cls),
                "radius": {"lo": lo, "hi": hi},
                "distinguished": idx in distinguished,
            }
        )
    measures_doc = [
        {
            "class": m.data.class_index,
            "lambda": m.lam,
            "xi_raw": list(m.xi_raw),
            "xi_normalized": list(m.xi_normalized),
            "support": sorted(m.data.support),
        }
        for m in measures
    ]
    report = {
        "command": "finite classify",
        "matrix": [list(r) for r in dec.matrix],
        "orientation": "input is A = F^T: entry [i][j] counts edges from vertex i up to vertex j",
        "classes": classes_doc,
        "reduced_edges": [list(e) for e in dec.reduced_edges],
        "measures": measures_doc,
        "tolerance": tol,
    }
    rows = [
        [str(c["class"]), " ".join(map(str, c["vertices"])), repr(c["radius"]["lo"]), repr(c["radius"]["hi"]), str(c["distinguished"])]
        for c in classes_doc
    ]
    return report, (["class", "vertices", "radius_lo", "radius_hi", "distinguished"], rows), EXIT_OK


_TAG_SHORTHAND = {
    "all-left": (od.LEFT,),
    "all-right": (od.RIGHT,),
    "all-middle": (od.MIDDLE,),
    "alternating": (od.LEFT, od.RIGHT),
}


def _load_order(text: str) -> od.OrderSpec:
    if text in _TAG_SHORTHAND:
        return od.QuasiStationary(default=_TAG_SHORTHAND[text])
    return od.order_from_json(_load_doc(text))


def cmd_vershik_classify(args):
    spec, window = _build_spec(args)
    order = _load_order(args.tags)
    verdict = od.extension_verdict(spec, order, args.imax)
    per_odometer = []
    rows = []
    for i in range(1, args.imax + 1):
        c = od.classify_odometer(spec, order, i)
        per_odometer.append(
            {"odometer": i, "finite_right": c.finite_right, "finite_left": c.finite_left}
        )
        rows.append([str(i), str(c.finite_right), str(c.finite_left)])
    report = {
        "command": "vershik classify",
        "family": spec.to_json(window),
        "i_fr": verdict.i_fr,
        "i_fl": verdict.i_fl,
        "fr_witness": list(verdict.fr_witness),
        "fl_witness": list(verdict.fl_witness),
        "borel_extension": verdict.borel_extension,
        "homeomorphism": verdict.homeomorphism,
        "per_odometer": per_odometer,
    }
    return report, (["i", "finite_right", "finite_left"], rows), EXIT_OK


def cmd_vershik_orbit(args):
    spec, window = _build_spec(args)
    order = _load_order(args.tags)
    current = od.vertical_path(spec, args.start_odometer, window.max_level)
    levels = args.levels
    rows = []
    trace = []
    for step in range(args.steps):
        ends = [current.vertex_at(l) for l in range(1, levels + 1)]
        trace.append({"step": step, "end_vertices": ends})
        rows.append([str(step)] + [str(e) for e in ends])
        nxt = od.successor(spec, order, current)
        if isinstance(nxt, od.AllMaximalPrefix):
            break
        current = nxt
    report = {
        "command": "vershik orbit",
        "family": spec.to_json(window),
        "start_odometer": args.start_odometer,
        "steps": len(trace),
        "trace": trace,
    }
    header = ["step"] + [f"end_vertex_level_{l}" for l in range(1, levels + 1)]
    return report, (header, rows), EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bratteli",
        description="Exact tail-invariant measures on generalized Bratteli diagrams built from odometer chains.",
    )
    parser.add_argument("--format", choices=["human", "json", "csv"], default="human")
    parser.add_argument("--config", help="RunConfig JSON file: {command, options, format}")
    sub = parser.add_subparsers(dest="group")

    diagram = sub.add_parser("diagram", help="incidence windows and tower heights")
    dsub = diagram.add_subparsers(dest="command")
    show = dsub.add_parser("show", help="windowed incidence matrix of one level")
    _add_family_args(show)
    show.add_argument("--level", type=int, default=0)
    show.set_defaults(fn=cmd_diagram_show)
    hts = dsub.add_parser("heights", help="tower heights at one level")
    _add_family_args(hts)
    hts.add_argument("--level", type=int, required=True)
    hts.add_argument("--verify-bruteforce", action="store_true")
    hts.set_defaults(fn=cmd_diagram_heights)

    tel = sub.add_parser("telescope", help="collapse levels between breakpoints")
    _add_family_args(tel)
    tel.add_argument("--breakpoints", required=True, help="comma separated, starting at 0")
    tel.set_defaults(fn=cmd_telescope)

    measure = sub.add_parser("measure", help="extension masses and cylinder values")
    msub = measure.add_subparsers(dest="command")
    mc = msub.add_parser("classify", help="extension mass of every odometer up to imax")
    _add_family_args(mc)
    mc.add_argument("--imax", type=int, default=5)
    mc.add_argument("--max-terms", type=int, default=ext.DEFAULT_MAX_TERMS)
    mc.set_defaults(fn=cmd_measure_classify)
    me = msub.add_parser("extend", help="extension mass of one odometer")
    _add_family_args(me)
    me.add_argument("--i", type=int, default=1)
    me.add_argument("--max-terms", type=int, default=ext.DEFAULT_MAX_TERMS)
    me.add_argument("--trace", type=int, default=0, help="emit the first N series terms")
    me.set_defaults(fn=cmd_measure_extend)
    mcy = msub.add_parser("cylinder", help="extended measure of (m, j) cylinders")
    _add_family_args(mcy)
    mcy.add_argument("--i", type=int, default=1)
    mcy.add_argument("--cylinders", required=True, help='e.g. "(0,2);(1,3)"')
    mcy.add_argument("--max-terms", type=int, default=ext.DEFAULT_MAX_TERMS)
    mcy.set_defaults(fn=cmd_measure_cylinder)
    mi = msub.add_parser("check-invariance", help="exact tail-invariance check")
    _add_family_args(mi)
    mi.add_argument("--vectors", help="JSON file {vectors: {level: {vertex: 'num/den'}}}")
    mi.add_argument("--shift", type=int, default=1)
    mi.set_defaults(fn=cmd_measure_check_invariance)

    eigen = sub.add_parser("eigen", help="constructive eigenpairs and their measures")
    esub = eigen.add_subparsers(dest="command")
    ev = esub.add_parser("verify", help="exact row residuals of the eigen equations")
    _add_family_args(ev)
    ev.add_argument("--rows", type=int, default=100)
    ev.add_argument("--shift", type=int, default=1)
    ev.set_defaults(fn=cmd_eigen_verify)
    em = esub.add_parser("measure", help="eigen measure values on cylinders")
    _add_family_args(em)
    em.add_argument("--request", help="JSON file {cylinders: [[m, j], ...]}")
    em.add_argument("--cylinders", help='inline "(m,j);(m,j)" list')
    em.add_argument("--shift", type=int, default=1)
    em.set_defaults(fn=cmd_eigen_measure)
    ec = esub.add_parser("compare", help="eigen measure vs certified extension values")
    _add_family_args(ec)
    ec.add_argument("--i", type=int, default=1)
    ec.add_argument("--mmax", type=int, default=5)
    ec.add_argument("--jmax", type=int, default=5)
    ec.add_argument("--shift", type=int, default=1)
    ec.add_argument("--max-terms", type=int, default=ext.DEFAULT_MAX_TERMS)
    ec.set_defaults(fn=cmd_eigen_compare)

    finite = sub.add_parser("finite", help="finite stationary diagrams")
    fsub = finite.add_subparsers(dest="command")
    fc = fsub.add_parser("classify", help="communicating classes, radii, measures")
    fc.add_argument("--matrix", required=True, help="JSON 2-D array (A = F^T) or a file path")
    fc.add_argument("--tol", type=float, default=1e-12)
    fc.set_defaults(fn=cmd_finite_classify)

    vershik = sub.add_parser("vershik", help="orders and successor dynamics")
    vsub = vershik.add_subparsers(dest="command")
    vc = vsub.add_parser("classify", help="finite-right/left sets and extension verdict")
    _add_family_args(vc)
    vc.add_argument(
        "--tags",
        required=True,
        help='order JSON ({"kind":"quasiStationary","tags":{"default":"middle"}}) '
        "or a shorthand: all-left, all-right, all-middle, alternating",
    )
    vc.add_argument("--imax", type=int, default=10)
    vc.set_defaults(fn=cmd_vershik_classify)
    vo = vsub.add_parser("orbit", help="successor orbit trace")
    _add_family_args(vo)
    vo.add_argument("--tags", required=True)
    vo.add_argument("--steps", type=int, default=100)
    vo.add_argument("--levels", type=int, default=3)
    vo.add_argument("--start-odometer", type=int, default=1)
    vo.set_defaults(fn=cmd_vershik_orbit)

    return parser


def _argv_from_config(doc: dict) -> list[str]:
    command = doc.get("command")
    if isinstance(command, str):
        argv = command.split()
    elif isinstance(command, list):
        argv = [str(c) for c in command]
    else:
        raise ConfigError("config needs a 'command' string or list")
    if "format" in doc:
        argv = ["--format", str(doc["format"])] + argv
    for key, val in doc.get("options", {}).items():
        flag = "--" + str(key).replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
        else:
            argv.extend([flag, val if isinstance(val, str) else json.dumps(val)])
    return argv


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            doc = _load_doc(args.config)
            argv2 = _argv_from_config(doc)
        except (OSError, ValueError, ConfigError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        args = parser.parse_args(argv2)
    if not getattr(args, "fn", None):
        parser.print_help()
        return EXIT_CONFIG
    try:
        report, csv_table, code = args.fn(args)
    except (ConfigError, dg.DiagramError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # pragma: no cover - internal faults
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    try:
        emit(report, args.format, csv_table)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


if __name__ == "__main__":
    sys.exit(main())
