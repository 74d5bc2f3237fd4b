"""Command-line front end.

``stt check``  checks files (honoring ``#import`` directives) and prints
diagnostics in deterministic (file, span) order; ``stt axioms`` prints each
declaration's transitive postulate set; ``stt corpus`` runs the bundled
corpus against its manifest.  ``--json`` switches to machine-readable
output whose content, apart from the ``timing`` object, is byte-identical
across runs on identical inputs.

Exit codes: 0 clean, 1 type errors, 2 I/O or parse failure of any input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .batch import BatchResult, check_files
from .corpus import corpus_check, load_manifest
from .diagnostics import Diagnostic


def _span_json(d: Diagnostic) -> dict:
    if d.span is None:
        return {}
    return {
        "start": {"line": d.span.line, "col": d.span.col},
        "end": {"line": d.span.end_line, "col": d.span.end_col},
    }


def _diag_json(d: Diagnostic) -> dict:
    out = {
        "code": d.code,
        "severity": d.severity,
        "file": d.file or "",
        "message": d.message,
    }
    out.update(_span_json(d))
    if d.decl is not None:
        out["decl"] = d.decl
    if d.expected is not None:
        out["expected"] = d.expected
    if d.actual is not None:
        out["actual"] = d.actual
    if d.countermodel is not None:
        out["countermodel"] = dict(sorted(d.countermodel.items()))
    return out


def emit_json(diagnostics: list[Diagnostic], report: dict, wall_seconds: float) -> str:
    """Deterministic JSON rendering; only the timing object varies by run."""
    errors = sum(1 for d in diagnostics if d.severity == "error")
    warnings = sum(1 for d in diagnostics if d.severity == "warning")
    doc = {
        "version": 1,
        "diagnostics": [_diag_json(d) for d in diagnostics],
        "summary": {"errors": errors, "warnings": warnings, **report},
        "timing": {"wall_ms": round(wall_seconds * 1000.0, 3)},
    }
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=None)


def _print_human(batch: BatchResult, explain_tope: bool) -> None:
    sources: dict[str, str] = {}
    for key in batch.order:
        rep = batch.reports[key]
        if not rep.io_error:
            try:
                with open(key, "r", encoding="utf-8") as fh:
                    sources[rep.path] = fh.read()
            except OSError:
                pass
    for d in batch.all_diagnostics:
        src = sources.get(d.file or "")
        print(d.render(source=src, explain_tope=explain_tope), file=sys.stderr)


def cmd_check(args) -> int:
    batch = check_files(args.paths, max_unfold=args.max_unfold, jobs=args.jobs)
    diags = batch.all_diagnostics
    if args.json:
        decls = sum(len(r.decl_names) for r in batch.reports.values())
        print(
            emit_json(
                diags,
                {"files": len(batch.order), "declarations": decls},
                batch.wall_seconds,
            )
        )
    else:
        _print_human(batch, args.explain_tope)
        checked = sum(len(r.decl_names) for r in batch.reports.values())
        errs = sum(1 for d in diags if d.severity == "error")
        print(f"checked {len(batch.order)} file(s), {checked} declaration(s), {errs} error(s)")
    return batch.exit_code()


def cmd_axioms(args) -> int:
    batch = check_files(args.paths, max_unfold=args.max_unfold, jobs=args.jobs)
    if batch.exit_code() != 0:
        _print_human(batch, explain_tope=False)
        return batch.exit_code()
    records = []
    for key in batch.order:
        rep = batch.reports[key]
        for name in rep.decl_names:
            axioms = sorted(rep.axiom_usage.get(name, frozenset()))
            records.append({"file": rep.path, "name": name, "axioms": axioms})
    if args.json:
        print(json.dumps({"version": 1, "axioms": records}, sort_keys=True, ensure_ascii=False))
    else:
        for r in records:
            listing = ", ".join(r["axioms"]) if r["axioms"] else "-"
            print(f"{r['name']}: {listing}")
    return 0


def cmd_corpus(args) -> int:
    manifest = load_manifest(args.manifest)
    report = corpus_check(manifest, max_unfold=args.max_unfold, jobs=args.jobs)
    if args.json:
        entries = [
            {
                "file": r.entry.file,
                "name": r.entry.name,
                "anchor": r.entry.anchor,
                "tier": r.entry.tier,
                "expected_axioms": sorted(r.entry.axioms),
                "axioms": sorted(r.axioms),
                "status": r.status,
            }
            for r in report.results
        ]
        print(
            emit_json(
                report.diagnostics,
                {
                    "entries": len(report.results),
                    "failed": sum(1 for r in report.results if not r.ok),
                    "corpus": entries,
                },
                report.wall_seconds,
            )
        )
    else:
        for r in report.results:
            mark = "ok" if r.ok else f"FAIL({r.status})"
            axioms = ", ".join(sorted(r.axioms)) if r.axioms else "-"
            print(f"{mark:18} {r.entry.tier:6} {r.entry.name:22} axioms: {axioms}")
        for d in report.diagnostics:
            print(d.render(), file=sys.stderr)
        status = "corpus ok" if report.ok else "corpus FAILED"
        print(f"{status}: {len(report.results)} entries in {report.wall_seconds:.2f}s")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stt", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--jobs", type=int, default=1, help="parallel file checking")
        p.add_argument(
            "--max-unfold", type=int, default=10_000, help="definition unfolding limit"
        )

    pc = sub.add_parser("check", help="type check files")
    pc.add_argument("paths", nargs="+")
    common(pc)
    pc.add_argument(
        "--explain-tope",
        action="store_true",
        help="print countermodels for failed interval constraints",
    )
    pc.set_defaults(fn=cmd_check)

    pa = sub.add_parser("axioms", help="report transitive postulate usage")
    pa.add_argument("paths", nargs="+")
    common(pa)
    pa.set_defaults(fn=cmd_axioms)

    pr = sub.add_parser("corpus", help="check the bundled corpus against its manifest")
    pr.add_argument("--manifest", default=None)
    common(pr)
    pr.set_defaults(fn=cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    if args.max_unfold < 1:
        print("error: --max-unfold must be at least 1", file=sys.stderr)
        return 2
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
