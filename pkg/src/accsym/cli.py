"""Command-line front end.

Every command prints a plain-text report: the command line, a summary of the
structure, computed objects in DSL syntax, one ``name: status`` line per
check (sorted by name) and the exit status.  Exit codes: 0 all checks pass,
1 a mathematical failure, 2 a usage or parse error.
"""

from __future__ import annotations

import argparse
import sys

from . import corpus, structfile
from .algebroid import AlgebroidSection, ClosedTwoForm, algebroid_bracket
from .chart import Chart
from .duality import CONTACT, COSYMPLECTIC, classify, compute_dual, validate_acc, verify_dual_identities
from .errors import AccSymError, ChartError, ParseError, PolicyError
from .exterior import MultiVector
from .report import FAIL, PASS, SKIPPED, CheckResult
from .suite import RUNTIME_BUDGET, make_context, run_suite, tamper
from .symalg import PairFH, bracket_acc, bracket_Omega, bracket_omega, classify_generator
from .symexpr import EXACT, Policy, parse_expr

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Report:
    def __init__(self, argv):
        self.lines = ["command: accsym " + " ".join(argv)]
        self.checks: list[CheckResult] = []

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def check(self, result: CheckResult) -> None:
        self.checks.append(result)

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if any(c.status == FAIL for c in self.checks) else EXIT_OK

    def summary(self) -> str:
        counts = {s: sum(c.status == s for c in self.checks) for s in (PASS, FAIL, SKIPPED)}
        return f"summary: {counts[PASS]} pass, {counts[FAIL]} fail, {counts[SKIPPED]} skipped; exit {self.exit_code}"

    def render(self, quiet: bool = False) -> str:
        if quiet:
            return self.summary() + "\n"
        out = list(self.lines)
        if self.checks:
            out.append("checks:")
            for c in sorted(self.checks, key=lambda c: c.name):
                out.append(f"  {c.name}: {c.status}" + (f" ({c.details})" if c.details else ""))
        out.append(self.summary())
        return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# inputs


def _policy(args, spec) -> Policy:
    base = spec.policy or EXACT
    try:
        return Policy(args.mode or base.mode,
                      args.samples if args.samples is not None else base.samples,
                      args.seed if args.seed is not None else base.seed,
                      args.tol if args.tol is not None else base.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args, path):
    """Resolve the input to (label, spec, catalogue entry or None)."""
    if args.example:
        if path is not None:
            raise UsageError("give either a structure file or --example, not both")
        try:
            entry = corpus.get_example(args.example)
        except corpus.UnknownExample as exc:
            raise UsageError(str(exc.args[0])) from None
        return args.example, entry.spec, entry
    if path is None:
        raise UsageError("a structure file or --example NAME is required")
    spec = structfile.load(path)
    return path, spec, corpus.match_example(spec)


def _structure(spec, policy: Policy):
    omega, Omega = spec.forms()
    return validate_acc(spec.chart, omega, Omega, policy)


def _summarize(report: Report, label: str, spec, policy: Policy) -> None:
    omega, Omega = spec.forms()
    report.add("structure", label)
    report.add("chart", "(" + ", ".join(spec.chart.names) + ")")
    report.add("omega", omega)
    report.add("Omega", Omega)
    report.add("policy", f"mode={policy.mode} samples={policy.samples} seed={policy.seed} tol={policy.tol}")


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _strip_parens(text: str, what: str) -> str:
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")):
        raise UsageError(f"{what} must be written as {'(f,h)' if what == 'pair' else '(X1,...,Xn; fbreve)'}")
    return t[1:-1]


def _expr(text: str, chart: Chart, where: str):
    try:
        return parse_expr(text, chart)
    except ParseError as exc:
        raise UsageError(f"{where}: {exc}") from None


def parse_pair(text: str, chart: Chart) -> PairFH:
    parts = _split_top(_strip_parens(text, "pair"), ",")
    if len(parts) != 2:
        raise UsageError(f"pair {text!r} needs exactly two entries")
    return PairFH.of(chart, _expr(parts[0], chart, "f"), _expr(parts[1], chart, "h"))


def parse_section(text: str, chart: Chart) -> AlgebroidSection:
    body = _split_top(_strip_parens(text, "section"), ";")
    if len(body) != 2:
        raise UsageError(f"section {text!r} needs a ';' before fbreve")
    comps = _split_top(body[0], ",")
    if len(comps) != chart.dim:
        raise UsageError(f"section {text!r} needs {chart.dim} vector components")
    X = MultiVector(chart, 1, {(i,): _expr(c, chart, f"X{i + 1}") for i, c in enumerate(comps)})
    return AlgebroidSection.of(X, _expr(body[1], chart, "fbreve"))


# --------------------------------------------------------------------------
# commands


def _identity_results(s, d, policy) -> list[CheckResult]:
    cls = classify(s, policy)
    out = []
    for r in verify_dual_identities(s, d, policy):
        if r.name == "jacobi_pair" and cls != CONTACT:
            r = CheckResult(r.name, SKIPPED, "applies to contact structures")
        elif r.name == "copoisson" and cls != COSYMPLECTIC:
            r = CheckResult(r.name, SKIPPED, "applies to cosymplectic structures")
        out.append(r)
    return out


def cmd_verify(args, report: Report) -> None:
    label, spec, _ = _load(args, args.file)
    policy = _policy(args, spec)
    _summarize(report, label, spec, policy)
    try:
        s = _structure(spec, policy)
    except PolicyError:
        raise
    except AccSymError as exc:
        report.check(CheckResult("validate_acc", FAIL, str(exc)))
        return
    report.check(CheckResult("validate_acc", PASS, f"witness {_point(s.witness)}"))
    report.add("class", classify(s, policy))
    d = compute_dual(s, policy)
    report.add("E", d.E)
    report.add("Lambda", d.Lambda)
    for r in _identity_results(s, d, policy):
        report.check(r)


def _point(pt) -> str:
    return "(" + ", ".join(f"{n}={v}" for n, v in zip(pt.chart.names, pt.coordinates)) + ")"


def cmd_classify(args, report: Report) -> None:
    label, spec, _ = _load(args, args.file)
    policy = _policy(args, spec)
    _summarize(report, label, spec, policy)
    report.add("class", classify(_structure(spec, policy), policy))


def cmd_dual(args, report: Report) -> None:
    label, spec, _ = _load(args, args.file)
    policy = _policy(args, spec)
    _summarize(report, label, spec, policy)
    d = compute_dual(_structure(spec, policy), policy)
    report.add("E", d.E)
    report.add("Lambda", d.Lambda)
    report.add("d omega", d.domega)
    report.add("L_E omega", d.LEomega)


def cmd_pair_check(args, report: Report) -> None:
    label, spec, _ = _load(args, args.file)
    policy = _policy(args, spec)
    _summarize(report, label, spec, policy)
    s = _structure(spec, policy)
    d = compute_dual(s, policy)
    pair = PairFH.of(s.chart, _expr(args.f, s.chart, "--f"), _expr(args.h, s.chart, "--h"))
    report.add("pair", pair)
    g = classify_generator(s, d, pair, policy)
    for key in ("cond1", "cond2", "cond3"):
        report.add(key, str(getattr(g, key)).lower())
    for key, value in g.memberships.items():
        report.add(key, str(value).lower())


def cmd_bracket(args, report: Report) -> None:
    items = list(args.items)
    path = None if args.example else (items.pop(0) if items else None)
    label, spec, _ = _load(args, path)
    if len(items) != 2:
        raise UsageError("bracket needs exactly two pairs or sections")
    policy = _policy(args, spec)
    _summarize(report, label, spec, policy)
    s = _structure(spec, policy)
    chart = s.chart
    report.add("bracket", args.alg)
    if args.alg == "algebroid":
        a, b = (parse_section(t, chart) for t in items)
        report.add("result", algebroid_bracket(ClosedTwoForm.from_structure(s), a, b))
        return
    p1, p2 = (parse_pair(t, chart) for t in items)
    d = compute_dual(s, policy)
    if args.alg == "omega":
        out = bracket_omega(s, d, p1, p2)
    elif args.alg == "Omega":
        out = bracket_Omega(s, d, p1, p2, policy)
    else:
        out = bracket_acc(s, d, p1, p2, policy)
    report.add("result", out)


def cmd_suite(args, report: Report) -> None:
    label, spec, entry = _load(args, args.file)
    policy = _policy(args, spec)
    _summarize(report, label, spec, policy)
    report.add("runtime budget", RUNTIME_BUDGET)
    if entry is not None and policy == EXACT:
        s, d = entry.structure, entry.dual
    else:
        s = _structure(spec, policy)
        d = compute_dual(s, policy)
    if args.tamper:
        d = tamper(d, *_tamper_target(args.tamper, s.chart))
        report.add("tampered", args.tamper)
    conserved = spec.extra.get("conserved", ())
    ctx = make_context(s, d, policy, policy.seed, args.cases, entry, conserved)
    report.add("seed", policy.seed)
    for r in run_suite(ctx):
        report.check(r)


def _tamper_target(text: str, chart: Chart):
    kind, _, key = text.partition(":")
    if kind not in ("Lambda", "omega"):
        raise UsageError("--tamper takes Lambda[:a^b] or omega[:a]")
    names = key.split("^") if key else (chart.names[:2] if kind == "Lambda" else chart.names[:1])
    if len(names) != (2 if kind == "Lambda" else 1) or not all(n in chart.names for n in names):
        raise UsageError(f"--tamper: bad component {key!r}")
    idx = tuple(sorted(chart.index(n) for n in names))
    if len(set(idx)) != len(idx):
        raise UsageError(f"--tamper: bad component {key!r}")
    return kind, idx


def cmd_examples(args, report: Report) -> None:
    for name, cls in corpus.list_examples():
        report.add(name, cls)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="accsym", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--example", metavar="NAME", help="use a built-in example instead of a file")
    common.add_argument("--mode", choices=("exact", "sampled"))
    common.add_argument("--samples", type=int, metavar="N", help="sample count (default 50)")
    common.add_argument("--seed", type=int, metavar="S", help="random seed (default 0)")
    common.add_argument("--tol", type=float, metavar="T", help="sampled tolerance (default 1e-9)")
    common.add_argument("--quiet", action="store_true", help="print only the summary line")

    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file", nargs="?", help="structure file (JSON)")
        p.set_defaults(fn=fn)
        return p

    with_file("verify", cmd_verify, "validate a structure and check its dual")
    with_file("classify", cmd_classify, "contact, cosymplectic or mixed")
    with_file("dual", cmd_dual, "print the dual pair (E, Lambda)")
    p = with_file("pair-check", cmd_pair_check, "generator conditions and memberships of a pair")
    p.add_argument("--f", required=True, help="first function of the pair")
    p.add_argument("--h", required=True, help="second function of the pair")
    p = sub.add_parser("bracket", parents=[common], help="bracket of two pairs or sections")
    p.add_argument("--alg", required=True, choices=("omega", "Omega", "acc", "algebroid"))
    p.add_argument("items", nargs="*", metavar="ARG", help="[file] then two '(f,h)' pairs or '(X1,...,Xn; g)' sections")
    p.set_defaults(fn=cmd_bracket)
    p = with_file("suite", cmd_suite, "run every invariant check against a structure")
    p.add_argument("--cases", type=int, default=10, help="random cases per check (default 10)")
    p.add_argument("--tamper", metavar="TARGET", help="debug: add 1/100 to one component, e.g. Lambda:q^p")
    p = sub.add_parser("examples", parents=[common], help="list the built-in examples")
    p.set_defaults(fn=cmd_examples)
    return parser


def _join_values(argv: list[str]) -> list[str]:
    # let --f/--h take values such as "-p"
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--f", "--h") and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    report = Report(argv)
    try:
        args.fn(args, report)
    except (UsageError, structfile.StructureFileError, ParseError, ChartError, PolicyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AccSymError as exc:
        report.check(CheckResult("error", FAIL, f"{type(exc).__name__}: {exc}"))
        print(f"error: {exc}", file=sys.stderr)
    sys.stdout.write(report.render(args.quiet))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
