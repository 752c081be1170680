"""Problem-file ingestion, task execution, canonical reports, and the
bundled corpus verifier.

Problem files are plain text with named blocks::

    ring { vars: x, y, z; relations: x^3+y^3+z^3; domain: true; order: grevlex; }
    multiplier { mode: submodule-of-R; generators: x, y, z; }
    task kh { ideal: x^2, y^2, z^2; assert-member-not: x*y*z; }

Reports are byte-identical for identical inputs; timings go to stderr (or
into the machine-readable output) so canonical text stays diffable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .closure import (
    MultiplierModuleSpec,
    build_rgamma,
    check_axioms,
    check_colon_capturing,
    check_counterexamples,
    check_depth_vanishing,
    clpi_closure,
    hironaka_hull,
    hironaka_preclosure,
    kh_closure,
    kh_test_ideal,
)
from .groebner import ideal_basis, ideal_equal, is_subset
from .polyring import DEFAULT_DEGREE_CAP, RingPresentation

TASK_KINDS = ("kh", "hir", "hir-hull", "clpi", "tau", "colon-check",
              "axiom-check", "depth-check", "counterexample")


class ProblemError(ValueError):
    def __init__(self, message, line):
        super().__init__("line %d: %s" % (line, message))
        self.line = line


class Task:
    def __init__(self, kind, options, line):
        self.kind = kind
        self.options = options   # key -> list of (value string, line)
        self.line = line

    def get(self, key, default=None):
        vals = self.options.get(key)
        if not vals:
            return default
        return vals[-1][0]

    def get_list(self, key):
        out = []
        for chunk, _line in self.options.get(key, ()):
            out.extend(part.strip() for part in chunk.split(",")
                       if part.strip())
        return out

    def get_lists(self, key):
        """Each occurrence of the key as its own list."""
        out = []
        for chunk, _line in self.options.get(key, ()):
            out.append([part.strip() for part in chunk.split(",")
                        if part.strip()])
        return out


class ProblemFile:
    def __init__(self, ring_options, multiplier_options, tasks):
        self.ring_options = ring_options
        self.multiplier_options = multiplier_options
        self.tasks = tasks


def parse_problem(text):
    """Parse the block grammar; raises ProblemError with a line number."""
    lines = text.splitlines()
    pos = 0
    n = len(text)
    line = 1

    def advance_to(idx):
        nonlocal line, pos
        line += text.count("\n", pos, idx)
        pos = idx

    def skip_ws():
        nonlocal pos
        while pos < n:
            if text[pos].isspace():
                advance_to(pos + 1)
            elif text[pos] == "#":
                nl = text.find("\n", pos)
                advance_to(n if nl < 0 else nl)
            else:
                break

    def read_word():
        nonlocal pos
        start = pos
        while pos < n and (text[pos].isalnum() or text[pos] in "-_"):
            pos += 1
        return text[start:pos]

    ring_opts = None
    mult_opts = None
    tasks = []
    while True:
        skip_ws()
        if pos >= n:
            break
        header_line = line
        word = read_word()
        if not word:
            raise ProblemError("expected a block name", line)
        kind = None
        if word == "task":
            skip_ws()
            kind = read_word()
            if kind not in TASK_KINDS:
                raise ProblemError("unknown task kind %r" % kind, line)
        elif word not in ("ring", "multiplier"):
            raise ProblemError("unknown block %r" % word, line)
        skip_ws()
        if pos >= n or text[pos] != "{":
            raise ProblemError("expected '{'", line)
        advance_to(pos + 1)
        options = {}
        while True:
            skip_ws()
            if pos >= n:
                raise ProblemError("unterminated block", header_line)
            if text[pos] == "}":
                advance_to(pos + 1)
                break
            key_line = line
            key = read_word()
            if not key:
                raise ProblemError("expected a key", line)
            skip_ws()
            if pos >= n or text[pos] != ":":
                raise ProblemError("expected ':' after %r" % key, line)
            advance_to(pos + 1)
            end = text.find(";", pos)
            if end < 0:
                raise ProblemError("missing ';' after %r" % key, key_line)
            value = text[pos:end].strip()
            advance_to(end + 1)
            options.setdefault(key, []).append((value, key_line))
        if word == "ring":
            if ring_opts is not None:
                raise ProblemError("duplicate ring block", header_line)
            ring_opts = (options, header_line)
        elif word == "multiplier":
            if mult_opts is not None:
                raise ProblemError("duplicate multiplier block", header_line)
            mult_opts = (options, header_line)
        else:
            tasks.append(Task(kind, options, header_line))
    if ring_opts is None:
        raise ProblemError("missing ring block", 1)
    if not tasks:
        raise ProblemError("problem file declares no tasks", 1)
    return ProblemFile(ring_opts, mult_opts, tasks)


def _split_list(value):
    return [part.strip() for part in value.split(",") if part.strip()]


def build_ring(problem, degree_cap):
    options, line = problem.ring_options
    if "vars" not in options:
        raise ProblemError("ring block needs vars", line)
    names = _split_list(options["vars"][-1][0])
    relations = []
    for chunk, _ in options.get("relations", ()):
        relations.extend(_split_list(chunk))
    domain = options.get("domain", [("false", line)])[-1][0] == "true"
    order = options.get("order", [("grevlex", line)])[-1][0]
    try:
        return RingPresentation(names, relations, order=order, domain=domain,
                                degree_cap=degree_cap)
    except ValueError as exc:
        raise ProblemError(str(exc), line)


def build_multiplier(problem, ring):
    if problem.multiplier_options is None:
        return None
    options, line = problem.multiplier_options
    mode = options.get("mode", [("unit", line)])[-1][0]
    gens = []
    for chunk, _ in options.get("generators", ()):
        gens.extend(_split_list(chunk))
    omega = options.get("omega-is-r")
    omega_is_r = None if omega is None else omega[-1][0] == "true"
    try:
        return MultiplierModuleSpec(ring, mode, gens, omega_is_r=omega_is_r)
    except ValueError as exc:
        raise ProblemError(str(exc), line)


class TaskReport:
    def __init__(self, index, kind):
        self.index = index
        self.kind = kind
        self.ideal_lines = None
        self.verdicts = []
        self.notes = []
        self.error = None
        self.seconds = 0.0

    @property
    def ok(self):
        return self.error is None and all(ok for _, ok in self.verdicts)

    def as_dict(self):
        return {
            "index": self.index,
            "kind": self.kind,
            "ideal": self.ideal_lines,
            "verdicts": [{"label": l, "ok": ok} for l, ok in self.verdicts],
            "notes": self.notes,
            "error": self.error,
            "seconds": self.seconds,
        }


class RunReport:
    def __init__(self, tasks):
        self.tasks = tasks

    @property
    def ok(self):
        return all(t.ok for t in self.tasks)

    @property
    def exit_status(self):
        return 0 if self.ok else 1

    def render(self):
        lines = []
        for t in self.tasks:
            lines.append("task %d %s" % (t.index, t.kind))
            if t.error is not None:
                lines.append("error: %s" % t.error)
            if t.ideal_lines is not None:
                lines.append("closure:" if t.kind != "tau" else "test-ideal:")
                for gen in t.ideal_lines:
                    lines.append("  " + gen)
            for label, ok in t.verdicts:
                lines.append("%s: %s" % (label, "pass" if ok else "FAIL"))
            for note in t.notes:
                lines.append(note)
            lines.append("result: %s" % ("ok" if t.ok else "FAILED"))
            lines.append("")
        lines.append("status: %s" % ("ok" if self.ok else "FAILED"))
        return "\n".join(lines) + "\n"

    def as_dict(self):
        return {"tasks": [t.as_dict() for t in self.tasks],
                "status": "ok" if self.ok else "FAILED"}


def _ideal_lines(basis):
    return [str(p) for p in basis.gb_polynomials()]


class _Session:
    """Shared state for one problem file: ring, multiplier, and the derived
    global-sections complex (built once, on first use)."""

    def __init__(self, ring, spec, seed):
        self.ring = ring
        self.spec = spec
        self.seed = seed
        self._rgamma = None
        self._kh_cache = {}

    def rgamma(self):
        if self._rgamma is None:
            if self.spec is None:
                raise ValueError("this task needs a multiplier block")
            self._rgamma = build_rgamma(self.spec)
        return self._rgamma

    def kh(self, gens, rgamma=None):
        basis = ideal_basis(self.ring, gens, over_r=True)
        key = tuple(str(p) for p in basis.gb_polynomials())
        if key not in self._kh_cache:
            self._kh_cache[key] = kh_closure(gens, rgamma or self.rgamma())
        return self._kh_cache[key]


def _apply_ideal_asserts(task, session, basis, report):
    ring = session.ring
    for member in task.get_list("assert-member"):
        p = ring.parse(member)
        report.verdicts.append(("assert member %s" % member,
                                basis.contains(p)))
    for member in task.get_list("assert-member-not"):
        p = ring.parse(member)
        report.verdicts.append(("assert member-not %s" % member,
                                not basis.contains(p)))
    equals = task.get_lists("assert-equals")
    for gens in equals:
        other = ideal_basis(ring, [ring.parse(g) for g in gens], over_r=True)
        report.verdicts.append(("assert equals %s" % ", ".join(gens),
                                ideal_equal(basis, other)))
    for gens in task.get_lists("assert-contains"):
        other = ideal_basis(ring, [ring.parse(g) for g in gens], over_r=True)
        report.verdicts.append(
            ("assert contains %d-generator ideal" % len(gens),
             is_subset(other, basis)))
    for gens in task.get_lists("assert-contains-not"):
        other = ideal_basis(ring, [ring.parse(g) for g in gens], over_r=True)
        report.verdicts.append(
            ("assert contains-not %d-generator ideal" % len(gens),
             not is_subset(other, basis)))


def run_task(task, session, index):
    report = TaskReport(index, task.kind)
    ring = session.ring
    t0 = time.perf_counter()
    try:
        if task.kind in ("clpi", "tau") and session.spec is None:
            raise ValueError("this task needs a multiplier block")
        if task.kind in ("kh", "hir", "hir-hull", "clpi"):
            gens = [ring.parse(g) for g in task.get_list("ideal")]
            if task.kind == "kh":
                result = session.kh(gens)
            elif task.kind == "hir":
                mode = task.get("mode", "over-A")
                result = hironaka_preclosure(gens, session.rgamma(), mode=mode)
            elif task.kind == "hir-hull":
                mode = task.get("mode", "over-A")
                max_iter = int(task.get("max-iter", "8"))
                result = hironaka_hull(gens, session.rgamma(), mode=mode,
                                       max_iter=max_iter)
                report.notes.append("iterations: %d (%s)" % (
                    result.iterations,
                    "stabilized" if result.stabilized else "not stabilized"))
            else:
                result = clpi_closure(gens, session.spec)
                if task.get("assert-equals-kh") == "true":
                    kh = session.kh(gens)
                    report.verdicts.append(
                        ("assert equals-kh",
                         ideal_equal(result.closure, kh.closure)))
            report.ideal_lines = _ideal_lines(result.closure)
            _apply_ideal_asserts(task, session, result.closure, report)
        elif task.kind == "tau":
            tau = kh_test_ideal(ring, session.spec)
            report.ideal_lines = _ideal_lines(tau)
            _apply_ideal_asserts(task, session, tau, report)
        elif task.kind == "colon-check":
            params = [ring.parse(g) for g in task.get_list("params")]
            t = int(task.get("t", "2"))
            a = int(task.get("a", "1"))
            k = int(task.get("k", str(len(params))))
            check = check_colon_capturing(ring, session.rgamma(), params,
                                          t, a, k, kh=session.kh)
            report.verdicts.extend(check.items)
        elif task.kind == "axiom-check":
            gens = [ring.parse(g) for g in task.get_list("ideal")]
            check = check_axioms(gens, session.rgamma(), seed=session.seed,
                                 kh=session.kh)
            report.verdicts.extend(check.items)
        elif task.kind == "depth-check":
            params = [ring.parse(g) for g in task.get_list("params")]
            check = check_depth_vanishing(session.rgamma(), params)
            report.verdicts.extend(check.items)
        elif task.kind == "counterexample":
            preset = task.get("preset")
            check = check_counterexamples(preset)
            report.verdicts.extend(check.items)
        else:
            raise ValueError("unhandled task kind %r" % task.kind)
    except Exception as exc:   # reported, not raised: later tasks still run
        report.error = "%s: %s" % (type(exc).__name__, exc)
    report.seconds = time.perf_counter() - t0
    return report


def run_problem(path=None, text=None, fail_fast=False, parallel=False,
                seed=0, degree_cap=DEFAULT_DEGREE_CAP):
    """Execute a problem file and return its RunReport."""
    if text is None:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    problem = parse_problem(text)
    ring = build_ring(problem, degree_cap)
    spec = build_multiplier(problem, ring)
    session = _Session(ring, spec, seed)
    reports = []
    if parallel and not fail_fast:
        # results are assembled in declared order, so output is deterministic
        if spec is not None:
            session.rgamma()
        with ThreadPoolExecutor() as pool:
            futures = [pool.submit(run_task, task, session, i + 1)
                       for i, task in enumerate(problem.tasks)]
            reports = [f.result() for f in futures]
    else:
        for i, task in enumerate(problem.tasks):
            rep = run_task(task, session, i + 1)
            reports.append(rep)
            if fail_fast and not rep.ok:
                break
    return RunReport(reports)


# -- corpus verification -----------------------------------------------------

CORPUS_NAMES = ("cubic", "quartic4", "quintic", "septic", "smooth", "a1")


def corpus_dir():
    override = os.environ.get("KHC_CORPUS_DIR")
    if override:
        return override
    from importlib.resources import files
    return str(files("khclosure") / "corpus")


def _parse_report_text(text):
    """Structure of a rendered report: list of (kind, ideal lines, verdicts)."""
    tasks = []
    current = None
    mode = None
    for line in text.splitlines():
        if line.startswith("task "):
            parts = line.split()
            current = {"kind": parts[2], "ideal": [], "verdicts": [],
                       "notes": []}
            tasks.append(current)
            mode = None
        elif current is None:
            continue
        elif line in ("closure:", "test-ideal:"):
            mode = "ideal"
        elif line.startswith("  ") and mode == "ideal":
            current["ideal"].append(line.strip())
        elif line.startswith("result:") or not line.strip():
            mode = None
        elif line.startswith("status:"):
            break
        else:
            current["verdicts"].append(line.strip())
            mode = None
    return tasks


def verify_corpus(only=None, out=None, seed=0):
    """Run the bundled problems and compare with stored golden reports.

    Ideal blocks are compared by ideal equality in the problem's ring;
    verdict lines must match exactly.  Returns the exit status.
    """
    out = out if out is not None else sys.stdout
    base = corpus_dir()
    names = [n for n in CORPUS_NAMES if only is None or n == only]
    if not names:
        print("no corpus entry named %r" % only, file=out)
        return 1
    status = 0
    for name in names:
        problem_path = os.path.join(base, name + ".khc")
        golden_path = os.path.join(base, "golden", name + ".txt")
        with open(problem_path, "r", encoding="utf-8") as handle:
            text = handle.read()
        report = run_problem(text=text, seed=seed)
        rendered = report.render()
        with open(golden_path, "r", encoding="utf-8") as handle:
            golden = handle.read()
        problem = parse_problem(text)
        ring = build_ring(problem, DEFAULT_DEGREE_CAP)
        got = _parse_report_text(rendered)
        want = _parse_report_text(golden)
        failures = []
        if not report.ok:
            failures.append("run reported failures")
        if len(got) != len(want):
            failures.append("task count differs: %d vs %d"
                            % (len(got), len(want)))
        else:
            for idx, (g, w) in enumerate(zip(got, want), start=1):
                if g["kind"] != w["kind"]:
                    failures.append("task %d kind differs" % idx)
                    continue
                if bool(g["ideal"]) != bool(w["ideal"]):
                    failures.append("task %d ideal presence differs" % idx)
                elif g["ideal"]:
                    left = ideal_basis(ring, [ring.parse(s) for s in g["ideal"]],
                                       over_r=True)
                    right = ideal_basis(ring, [ring.parse(s) for s in w["ideal"]],
                                        over_r=True)
                    if not ideal_equal(left, right):
                        failures.append(
                            "task %d ideal differs: computed [%s], expected [%s]"
                            % (idx, "; ".join(g["ideal"]), "; ".join(w["ideal"])))
                if g["verdicts"] != w["verdicts"]:
                    failures.append("task %d verdicts differ: %r vs %r"
                                    % (idx, g["verdicts"], w["verdicts"]))
        if failures:
            status = 1
            print("%s: FAILED" % name, file=out)
            for f in failures:
                print("  " + f, file=out)
        else:
            print("%s: ok" % name, file=out)
    return status


# -- entry point ---------------------------------------------------------------


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="khc",
        description="closure operations on ideals of quotient rings over Q")
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="execute a problem file")
    runp.add_argument("file")
    runp.add_argument("--fail-fast", action="store_true")
    runp.add_argument("--parallel", action="store_true")
    runp.add_argument("--machine", action="store_true",
                      help="JSON output instead of canonical text")
    runp.add_argument("--max-degree", type=int, default=DEFAULT_DEGREE_CAP)
    runp.add_argument("--seed", type=int, default=0)
    runp.add_argument("--timings", action="store_true",
                      help="per-task timings on stderr")

    ver = sub.add_parser("verify-corpus",
                         help="run the bundled corpus against golden reports")
    ver.add_argument("--only", default=None, choices=CORPUS_NAMES)
    ver.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    if args.command == "run":
        try:
            report = run_problem(args.file, fail_fast=args.fail_fast,
                                 parallel=args.parallel, seed=args.seed,
                                 degree_cap=args.max_degree)
        except (ProblemError, OSError) as exc:
            print("error: %s" % exc, file=sys.stderr)
            return 2
        if args.machine:
            json.dump(report.as_dict(), sys.stdout, indent=2)
            sys.stdout.write("\n")
        else:
            sys.stdout.write(report.render())
        if args.timings:
            for t in report.tasks:
                print("task %d %s: %.3fs" % (t.index, t.kind, t.seconds),
                      file=sys.stderr)
        return report.exit_status
    if args.command == "verify-corpus":
        return verify_corpus(only=args.only, seed=args.seed)
    return 2


if __name__ == "__main__":
    sys.exit(main())
