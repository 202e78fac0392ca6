"""Command-line interface: ``kh2 compute | verify | pages | table | cache gc``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import ENGINE_VERSION
from .cache import ResultCache, cache_key, canonical_diagram
from .complex import build_complex
from .diagram import LinkDiagram
from .errors import Kh2Error, ResourceLimitError
from .expr import parse_expression, parse_ring
from .fields import GF, FieldElem
from .frobenius import SYSTEMS, FrobeniusSystem, get_system
from .homology import TIERS, compute_homology

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240601

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

CONVENTIONS = {
    "pd": "X(a,b,c,d): arcs counterclockwise from the incoming under-strand",
    "smoothing": "0-smoothing joins (a,b),(c,d); 1-smoothing joins (a,d),(b,c)",
    "crossing_sign": "positive iff the over-strand runs from d to b",
    "homological_degree": "|v| - n_minus; raw cube degree = degree + n_minus",
    "quantum_degree": "#x_plus - #x_minus + |v| + n_plus - 2 n_minus (+1 when reduced)",
    "differential": "raises homological degree by 1",
}


class InputError(Kh2Error):
    pass


@dataclass
class Job:
    diagram: LinkDiagram
    system: FrobeniusSystem
    system_spec: dict
    reduced: bool = False
    mirror: bool = False
    tier: Optional[str] = None
    at: Optional[tuple] = None
    at_text: Optional[str] = None
    seed: int = DEFAULT_SEED
    source: str = ""
    extra: dict = field(default_factory=dict)


# -- argument resolution ---------------------------------------------------------------------

def _diagram_from_args(args) -> tuple[LinkDiagram, str]:
    sources = [x for x in (args.pd, args.knot, getattr(args, "file", None)) if x is not None]
    if len(sources) != 1:
        raise InputError("give exactly one of --pd, --knot, --file")
    if args.pd is not None:
        d, src = LinkDiagram.from_text(args.pd), "pd"
    elif args.knot is not None:
        from .table import load_table
        table = load_table()
        if args.knot not in table:
            raise InputError(f"unknown knot {args.knot!r}; see 'kh2 table'")
        d, src = table[args.knot], f"table:{args.knot}"
    else:
        d, src = LinkDiagram.from_text(Path(args.file).read_text(encoding="utf-8")), f"file:{args.file}"
    if args.basepoint is not None:
        d = d.with_basepoint(args.basepoint)
    return d, src


def _system_from_args(args) -> tuple[FrobeniusSystem, dict]:
    custom = any(x is not None for x in (args.ring, args.alpha, args.beta, args.root))
    if custom:
        if args.ring is None or args.alpha is None or args.beta is None:
            raise InputError("a custom system needs --ring, --alpha and --beta")
        ring = parse_ring(args.ring)
        alpha, beta = parse_expression(args.alpha, ring), parse_expression(args.beta, ring)
        root = parse_expression(args.root, ring) if args.root is not None else None
        try:
            sys_ = FrobeniusSystem(ring, alpha, beta, root, name="custom")
        except ValueError as e:
            raise InputError(str(e)) from None
        spec = {"id": "custom", "ring": str(ring), "alpha": str(alpha), "beta": str(beta),
                "root": None if root is None else str(root)}
        return sys_, spec
    name = args.system or "kh"
    try:
        sys_ = get_system(name)
    except KeyError as e:
        raise InputError(e.args[0]) from None
    return sys_, {"id": name, "ring": str(sys_.ring), "alpha": str(sys_.alpha), "beta": str(sys_.beta),
                  "root": None if sys_.root is None else str(sys_.root)}


def _point_from_args(args, ring) -> Optional[tuple]:
    if args.at is None:
        return None
    k = args.field or (ring.field_degree if ring.field_degree > 1 else (16 if "z" in args.at else 1))
    fld = GF(k)
    from .rings import RingDescriptor
    coeffs = RingDescriptor(k, (), ())
    parts = [p for p in args.at.split(",") if p.strip()] if args.at.strip() else []
    out = []
    for p in parts:
        v = parse_expression(p, coeffs)
        out.append(FieldElem(fld, v.constant_value()))
    if len(out) != ring.arity:
        raise InputError(f"--at needs {ring.arity} coordinates for {ring}, got {len(out)}")
    return tuple(out)


def job_from_args(args) -> Job:
    d, src = _diagram_from_args(args)
    sys_, spec = _system_from_args(args)
    if args.mirror:
        d = d.mirror()
    at = _point_from_args(args, sys_.ring)
    tier = args.tier
    if at is not None and tier not in (None, "field"):
        raise InputError("--at selects the field tier")
    return Job(d, sys_, spec, args.reduced, args.mirror, tier, at, args.at, args.seed, src)


def _envelope(job: Job, command: str, d: LinkDiagram) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "engine_version": ENGINE_VERSION,
        "command": command,
        "input": {"source": job.source, "pd": str(d.pd), "basepoint": d.basepoint,
                  "crossings": d.n_crossings, "components": d.n_components},
        "system": job.system_spec,
        "reduced": job.reduced,
        "tier": job.tier,
        "at": job.at_text,
        "seed": job.seed,
        "conventions": {**CONVENTIONS, "mirror": job.mirror, "n_plus": d.n_plus, "n_minus": d.n_minus,
                        "normalization_shift": d.n_minus},
    }


def _key(job: Job, command: str, d: LinkDiagram) -> str:
    return cache_key(command=command, source=job.source, pd=str(d.pd), basepoint=d.basepoint,
                     system=job.system_spec, reduced=job.reduced, tier=job.tier, at=job.at_text, seed=job.seed,
                     engine=ENGINE_VERSION, extra=job.extra)


def run(job: Job, command: str = "compute", cache: Optional[ResultCache] = None) -> str:
    """Serialized JSON result; computed on the canonical relabeling so cached bytes match fresh ones."""
    d = canonical_diagram(job.diagram)
    key = _key(job, command, d)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    out = _envelope(job, command, d)
    if command == "compute":
        c = build_complex(d, job.system, job.reduced)
        mod = compute_homology(c, job.tier, at=job.at, seed=job.seed)
        out["tier"] = mod.tier
        out["result"] = mod.to_json()
        out["summary"] = mod.summary()
        if mod.poincare():
            out["poincare"] = [[i, j, n] for (i, j), n in sorted(mod.poincare().items())]
    elif command == "pages":
        from .spectral import collapse_report, cube_filtration, pages, quantum_filtration
        c = build_complex(d, job.system, job.reduced)
        filt = job.extra.get("filtration", "quantum")
        fc = (quantum_filtration if filt == "quantum" else cube_filtration)(c, job.at)
        pgs = pages(fc, job.extra.get("up_to"))
        rep = collapse_report(pgs)
        out["filtration"] = {"kind": filt, "offset": fc.offset, "step": fc.step}
        out["pages"] = [p.to_json() for p in pgs]
        out["rows"] = [["inf" if r is None else r, p, k, n] for pg in pgs for (r, p, k, n) in pg.rows()]
        out["collapse_page"] = rep.collapse_page
        out["e_infinity_total"] = rep.e_infinity_total
    else:
        raise InputError(f"unknown command {command}")
    text = json.dumps(out, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if cache is not None:
        cache.put(key, text)
    return text


# -- verify ------------------------------------------------------------------------------------

CHECKS = ("skein", "mirror", "dot", "kunneth", "invariance", "uct")


def _diagram_reports(task) -> list:
    """All per-diagram checks for one queue item; runs in a worker process when --workers > 1."""
    from . import harness
    from .homology.uct import uct_check
    from .rings import r as hom_r, s_bn, s_fbn

    checks, name, d, sys_, seed = task
    out = []
    if "skein" in checks:
        for i in range(d.n_crossings):
            out.append((harness.skein_triangle_check(d, i, SYSTEMS["kh"]), name))
    if "mirror" in checks:
        out.append((harness.mirror_duality_check(d), name))
    if "dot" in checks:
        out.append((harness.dot_relation_check(d, sys_, seed=seed), name))
    if "uct" in checks:
        for phi in (hom_r, s_bn.compose(hom_r), s_fbn.compose(hom_r)):
            rep = uct_check(d, phi, seed=seed)
            out.append((harness.CheckReport(rep.name, harness.digest(d, phi.name), rep.passed,
                                            None if rep.passed else json.dumps(rep.mismatches[0]), seed), name))
    return out


def verify_reports(checks, diagrams, sys_: FrobeniusSystem, seed: int, include_fixtures: bool, workers: int = 1):
    from . import harness

    tasks = [(tuple(checks), name, d, sys_, seed) for name, d in diagrams]
    if workers > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        # map keeps submission order, so output does not depend on scheduling
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for reps in pool.map(_diagram_reports, tasks):
                yield from reps
    else:
        for t in tasks:
            yield from _diagram_reports(t)
    if "kunneth" in checks:
        if len(diagrams) >= 2:
            pairs = [(diagrams[0], diagrams[1])]
        elif include_fixtures:
            from .table import load_table
            t = load_table()
            pairs = [(("3_1", t["3_1"]), ("3_1", t["3_1"])), (("3_1", t["3_1"]), ("4_1", t["4_1"]))]
        else:
            pairs = [(diagrams[0], diagrams[0])] if diagrams else []
        for (n1, d1), (n2, d2) in pairs:
            yield harness.kunneth_check(d1, d2), f"{n1}#{n2}"
    if "invariance" in checks and include_fixtures:
        from .frobenius import F5
        for fam, members in harness.fixture_families().items():
            for s, tier in ((SYSTEMS["kh"], "field"), (SYSTEMS["filtered-f4"], "field"),
                            (SYSTEMS["bn-graded"], "pid"), (F5, "groebner")):
                yield harness.invariance_check(members, s, tier, seed=seed), f"{fam}:{s.name}"


def cmd_verify(args) -> int:
    checks = CHECKS if args.check in (None, "all") else (args.check,)
    diagrams = []
    if args.all:
        from .table import load_table
        for e in load_table().select(max_crossings=args.max_crossings):
            diagrams.append((e.name, e.diagram))
    if args.pd is not None or args.knot is not None or args.file is not None:
        d, _ = _diagram_from_args(args)
        diagrams.append((d.name or "input", d))
    if args.pd2 is not None:
        diagrams.append(("input2", LinkDiagram.from_text(args.pd2)))
    if not diagrams and not args.all:
        raise InputError("verify needs a diagram (--pd/--knot/--file) or --all")
    if args.all and args.check in (None, "all"):
        checks = tuple(c for c in CHECKS if c != "uct")  # UCT only on request: it is slow
    sys_, _ = _system_from_args(args)
    failed = 0
    total = 0
    for rep, label in verify_reports(checks, diagrams, sys_, args.seed, include_fixtures=args.all,
                                      workers=args.workers):
        total += 1
        failed += not rep.passed
        if args.json:
            print(json.dumps({"target": label, **rep.to_json()}, sort_keys=True, ensure_ascii=False))
        else:
            line = f"{'PASS' if rep.passed else 'FAIL'} {rep.name:24s} {label}"
            print(line + (f"  ({rep.witness})" if rep.witness else ""))
        sys.stdout.flush()
    summary = {"checks": total, "failed": failed, "pass": failed == 0}
    print(json.dumps(summary, sort_keys=True) if args.json else f"{total - failed}/{total} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


# -- entry point ---------------------------------------------------------------------------------

def _add_diagram_args(p):
    p.add_argument("--pd", help="inline PD code, e.g. 'X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)'")
    p.add_argument("--knot", help="name in the bundled table (e.g. 3_1, 4_1, L2a1{1}, trefoil)")
    p.add_argument("--file", help="file containing a PD code")
    p.add_argument("--basepoint", type=int, help="basepoint arc (default 1)")


def _add_system_args(p):
    p.add_argument("--system", choices=sorted(SYSTEMS), help="predefined Frobenius system (default kh)")
    p.add_argument("--ring", help="custom ring, e.g. 'F2[h,t]' or 'F2[T^±1]'")
    p.add_argument("--alpha", help="custom α (X^2 = αX + β)")
    p.add_argument("--beta", help="custom β")
    p.add_argument("--root", help="custom root of x^2 + αx + β (needed for --reduced)")


def _add_common(p):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--cache-dir", help="result cache location (env KH2_CACHE_DIR)")
    p.add_argument("--no-cache", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kh2", description="Characteristic-2 Frobenius link homology.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="homology of a diagram")
    _add_diagram_args(p)
    _add_system_args(p)
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--mirror", action="store_true")
    p.add_argument("--tier", choices=TIERS)
    p.add_argument("--at", help="specialization point, comma separated; 'z' is the field generator")
    p.add_argument("--field", type=int, help="degree K of GF(2^K) for --at")
    _add_common(p)

    p = sub.add_parser("pages", help="spectral sequence pages")
    _add_diagram_args(p)
    _add_system_args(p)
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--mirror", action="store_true")
    p.add_argument("--filtration", choices=("quantum", "cube"), default="quantum")
    p.add_argument("--up-to", type=int)
    p.add_argument("--at")
    p.add_argument("--field", type=int)
    p.add_argument("--tier", choices=("field",))
    _add_common(p)

    p = sub.add_parser("verify", help="run property checks")
    _add_diagram_args(p)
    _add_system_args(p)
    p.add_argument("--pd2", help="second diagram for the Künneth check")
    p.add_argument("--check", choices=("all",) + CHECKS)
    p.add_argument("--all", action="store_true", help="every table entry plus the fixture families")
    p.add_argument("--max-crossings", type=int, default=6)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1, help="worker processes for the per-diagram queue")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("table", help="list or validate knot tables")
    p.add_argument("--file", help="validate a table file instead of the bundled one")
    p.add_argument("--max-crossings", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("cache", help="cache maintenance")
    csub = p.add_subparsers(dest="cache_command", required=True)
    g = csub.add_parser("gc", help="drop stale entries")
    g.add_argument("--cache-dir")
    g.add_argument("--all", action="store_true", help="drop everything")
    g.add_argument("--max-age-days", type=float)
    return ap


def cmd_table(args) -> int:
    from .table import ingest_table, load_table
    t = ingest_table(args.file) if args.file else load_table()
    rows = t.select(max_crossings=args.max_crossings)
    if args.json:
        print(json.dumps({"entries": [{"name": e.name, "components": e.components, "pd": str(e.diagram.pd)}
                                      for e in rows],
                          "errors": [{"line": n, "reason": r} for n, _, r in t.errors]}, indent=2))
    else:
        for e in rows:
            print(f"{e.name:10s} {e.components}  {e.diagram.pd}")
        for n, raw, reason in t.errors:
            print(f"line {n}: rejected ({reason}): {raw.strip()}", file=sys.stderr)
    return EXIT_OK if not t.errors else EXIT_INPUT


def _cache_for(args) -> Optional[ResultCache]:
    if getattr(args, "no_cache", False):
        return None
    return ResultCache(Path(args.cache_dir) if args.cache_dir else None)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("compute", "pages"):
            job = job_from_args(args)
            if args.command == "pages":
                job.extra = {"filtration": args.filtration, "up_to": args.up_to}
            text = run(job, args.command, _cache_for(args))
            if args.json:
                sys.stdout.write(text)
            else:
                _print_text(json.loads(text))
            return EXIT_OK
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "table":
            return cmd_table(args)
        if args.command == "cache":
            n = ResultCache(Path(args.cache_dir) if args.cache_dir else None).gc(
                ENGINE_VERSION, args.max_age_days, args.all)
            print(f"removed {n} cache entries")
            return EXIT_OK
    except ResourceLimitError as e:
        print(f"resource cap reached: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (Kh2Error, ValueError, KeyError, ZeroDivisionError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


def _print_text(out: dict):
    inp = out["input"]
    print(f"diagram: {inp['pd'] or '(empty)'}  [{inp['source']}]  n+={out['conventions']['n_plus']} "
          f"n-={out['conventions']['n_minus']}")
    print(f"system: {out['system']['id']} over {out['system']['ring']}"
          + ("  (reduced)" if out["reduced"] else "") + (f"  at {out['at']}" if out["at"] else ""))
    if out["command"] == "compute":
        print(f"tier: {out['tier']}")
        print(out["summary"])
        if "poincare" in out:
            print("Poincaré terms (i, q, dim): " + ", ".join(f"({i},{j},{n})" for i, j, n in out["poincare"]))
    else:
        print(f"filtration: {out['filtration']['kind']}  collapse at E_{out['collapse_page']}, "
              f"E_inf total {out['e_infinity_total']}")
        print(f"{'r':>4} {'p':>4} {'k':>4} {'rank':>5}")
        for r, p, k, n in out["rows"]:
            print(f"{r!s:>4} {p:>4} {k:>4} {n:>5}")


if __name__ == "__main__":
    sys.exit(main())
