"""Batch checking of files with hermetic relative imports.

Each file names its dependencies with ``#import "path"`` directives resolved
relative to its own directory; there is no search path.  Files are checked
in dependency order, and files whose imports are all finished may be checked
concurrently.  Every file sees exactly the declarations of its transitive
import closure, so results do not depend on scheduling.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .checker import CheckEnv, check_module
from .diagnostics import Diagnostic
from .parser import imports_of, parse_module


@dataclass
class FileReport:
    path: str  # as given on the command line or via imports
    io_error: bool = False
    parse_diagnostics: list[Diagnostic] = field(default_factory=list)
    check_diagnostics: list[Diagnostic] = field(default_factory=list)
    decl_names: list[str] = field(default_factory=list)
    axiom_usage: dict[str, frozenset[str]] = field(default_factory=dict)

    @property
    def diagnostics(self) -> list[Diagnostic]:
        return self.parse_diagnostics + self.check_diagnostics


@dataclass
class BatchResult:
    reports: dict[str, FileReport]  # keyed by normalized absolute path
    order: list[str]  # normalized paths in deterministic processing order
    j_fired: int = 0
    wall_seconds: float = 0.0

    @property
    def all_diagnostics(self) -> list[Diagnostic]:
        out = []
        for key in self.order:
            out.extend(self.reports[key].diagnostics)
        return sorted(out, key=lambda d: d.sort_key())

    @property
    def has_io_or_parse_failure(self) -> bool:
        return any(r.io_error or r.parse_diagnostics for r in self.reports.values())

    @property
    def has_errors(self) -> bool:
        return any(
            d.severity == "error" for r in self.reports.values() for d in r.diagnostics
        )

    def exit_code(self) -> int:
        if self.has_io_or_parse_failure:
            return 2
        if self.has_errors:
            return 1
        return 0


def _norm(path: str) -> str:
    return os.path.normpath(os.path.abspath(path))


def check_files(
    paths: list[str], max_unfold: int = 10_000, jobs: int = 1
) -> BatchResult:
    """Parse, resolve and check the given files plus their import closures."""
    start = time.monotonic()
    display: dict[str, str] = {}
    sources: dict[str, str] = {}
    imports: dict[str, list[str]] = {}
    reports: dict[str, FileReport] = {}
    queue = [(p, _norm(p)) for p in paths]
    seen: set[str] = set()

    while queue:
        shown, key = queue.pop(0)
        if key in seen:
            continue
        seen.add(key)
        display.setdefault(key, shown)
        report = reports.setdefault(key, FileReport(path=display[key]))
        try:
            with open(key, "r", encoding="utf-8") as fh:
                sources[key] = fh.read()
        except OSError as e:
            report.io_error = True
            report.parse_diagnostics.append(
                Diagnostic("error", "E-IO", f"cannot read '{shown}': {e.strerror}", file=shown)
            )
            imports[key] = []
            continue
        deps = []
        base = os.path.dirname(key)
        for rel, _span in imports_of(sources[key]):
            dep_key = _norm(os.path.join(base, rel))
            dep_shown = os.path.join(os.path.dirname(display[key]), rel)
            deps.append(dep_key)
            queue.append((dep_shown, dep_key))
        imports[key] = deps

    # deterministic topological order: repeatedly take the lexicographically
    # first file whose imports are all placed
    order: list[str] = []
    placed: set[str] = set()
    remaining = set(seen)
    while remaining:
        ready = sorted(
            k for k in remaining if all(d in placed or d not in seen for d in imports[k])
        )
        if not ready:
            for k in sorted(remaining):
                reports[k].parse_diagnostics.append(
                    Diagnostic(
                        "error",
                        "E-IMPORT-CYCLE",
                        f"import cycle involving '{display[k]}'",
                        file=display[k],
                    )
                )
            order.extend(sorted(remaining))
            remaining.clear()
            break
        for k in ready:
            order.append(k)
            placed.add(k)
            remaining.discard(k)

    closures: dict[str, set[str]] = {}

    def closure(key: str) -> set[str]:
        # iterative so import cycles terminate (they are diagnosed above)
        got = closures.get(key)
        if got is None:
            got = set()
            stack = [d for d in imports.get(key, []) if d in seen]
            while stack:
                d = stack.pop()
                if d in got:
                    continue
                got.add(d)
                stack.extend(x for x in imports.get(d, []) if x in seen)
            closures[key] = got
        return got

    envs: dict[str, CheckEnv] = {}
    total_j = 0

    def process(key: str) -> None:
        nonlocal total_j
        report = reports[key]
        if report.io_error:
            envs[key] = CheckEnv(max_unfold=max_unfold)
            return
        decls, pdiags = parse_module(sources[key])
        for d in pdiags:
            d.file = report.path
        report.parse_diagnostics.extend(pdiags)
        env = CheckEnv(max_unfold=max_unfold)
        for dep in sorted(closure(key)):
            dep_env = envs.get(dep)
            if dep_env is None:
                continue
            for name, decl in dep_env.decls.items():
                held = env.decls.get(name)
                if held is not None and held is not decl:
                    report.check_diagnostics.append(
                        Diagnostic(
                            "error",
                            "E-DUPLICATE-NAME",
                            f"'{name}' is declared by two different imports",
                            file=report.path,
                        )
                    )
                env.decls[name] = decl
            env.axioms.update(dep_env.axioms)
            env.axiom_usage.update(dep_env.axiom_usage)
        before = set(env.decls)
        env, cdiags, _usage = check_module(env, decls)
        for d in cdiags:
            d.file = report.path
        report.check_diagnostics.extend(cdiags)
        report.decl_names = [n for n in env.decls if n not in before]
        report.axiom_usage = {n: env.axiom_usage[n] for n in report.decl_names}
        total_j += env.j_fired
        envs[key] = env

    pending = {k: set(d for d in imports[k] if d in seen) for k in order}
    done: set[str] = set()
    if jobs <= 1:
        for key in order:
            process(key)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            remaining_keys = list(order)
            while remaining_keys:
                wave = [k for k in remaining_keys if pending[k] <= done]
                if not wave:  # cycle diagnostics already emitted
                    wave = remaining_keys[:]
                list(pool.map(process, wave))
                done.update(wave)
                remaining_keys = [k for k in remaining_keys if k not in wave]

    result = BatchResult(reports=reports, order=order)
    result.j_fired = total_j
    result.wall_seconds = time.monotonic() - start
    return result
