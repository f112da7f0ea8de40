"""Acceptance criteria, evaluated through the verification suite.

The suite runs once on every catalogue structure (exact mode, seed 0, ten
cases per check); each criterion then reads off the checks it depends on.
Run this file directly to print only the criterion lines::

    python3 tests/test_acceptance.py
"""

import time

import pytest

from accsym.corpus import get_example, list_examples
from accsym.report import PASS, SKIPPED
from accsym.suite import make_context, run_suite

NAMES = [n for n, _ in list_examples()]
BUDGET_SECONDS = 300
CASES = 10

# criterion -> list of (structures, checks); every listed check must pass there
CRITERIA = {
    1: ("duality reconstruction", [
        (["C3", "K3", "M3"], ["duality.expected_dual"]),
        (["M3b"], ["duality.pointwise_oracle"]),
    ]),
    2: ("dual pair identities", [
        (NAMES, ["duality.E_Lambda_identity", "duality.Lambda_Lambda_identity"]),
        (["C3"], ["duality.jacobi_pair"]),
        (["K3"], ["duality.copoisson"]),
    ]),
    3: ("lift commutator formula", [(NAMES, ["symalg.lift_commutator"])]),
    4: ("bracket closure", [(NAMES, ["symalg.closure_omega", "symalg.closure_Omega"])]),
    5: ("Jacobi identity of the Omega bracket", [(NAMES, ["symalg.jacobi_Omega"])]),
    6: ("three forms of the acc bracket agree", [
        (NAMES, ["symalg.acc_bracket_forms", "symalg.acc_bracket_forms_global"]),
    ]),
    7: ("Poisson and Jacobi reductions", [
        (["K3"], ["symalg.cosymplectic_reduction"]),
        (["C3"], ["symalg.contact_reduction"]),
    ]),
    8: ("symmetry predicates agree", [(NAMES, ["symalg.symmetry_agreement"])]),
    9: ("product algebra and derivation", [
        (NAMES, ["symalg.product_algebra", "symalg.derivation_product"]),
    ]),
    10: ("Lie derivation by symmetries", [
        (NAMES, ["symalg.lie_derivation_membership", "symalg.lie_derivation_bracket",
                 "symalg.half_difference"]),
    ]),
    11: ("algebroid correspondence", [
        (NAMES, ["algebroid.F_closed", "algebroid.jacobi", "algebroid.leibniz",
                 "algebroid.morphism_s", "algebroid.r_inverse_and_intertwining"]),
    ]),
    12: ("fault injection", [(NAMES, ["duality.fault_injection"])]),
}

_lines: dict[int, str] = {}


def run_all():
    results, started = {}, time.perf_counter()
    for name in NAMES:
        e = get_example(name)
        ctx = make_context(e.structure, e.dual, seed=0, cases=CASES, entry=e)
        results[name] = {r.name: r for r in run_suite(ctx)}
    return results, time.perf_counter() - started


def evaluate(n, results):
    failures = []
    for structures, checks in CRITERIA[n][1]:
        for s in structures:
            for c in checks:
                r = results[s].get(c)
                if r is None or r.status != PASS:
                    status = "missing" if r is None else r.status
                    failures.append(f"{s} {c}: {status}" + (f" ({r.details})" if r and r.details else ""))
    return failures


def criterion_line(n, failures):
    return f"criterion {n}: {'pass' if not failures else 'fail'} ({CRITERIA[n][0]})"


@pytest.fixture(scope="module")
def suite_results():
    return run_all()


def test_runtime_budget(suite_results):
    _, elapsed = suite_results
    assert elapsed < BUDGET_SECONDS


def test_nothing_applicable_is_skipped(suite_results):
    results, _ = suite_results
    skipped = [(s, c) for s, rs in results.items() for c, r in rs.items() if r.status == SKIPPED]
    expected = {"duality.jacobi_pair", "duality.copoisson", "duality.reeb_contact",
                "symalg.contact_reduction", "symalg.cosymplectic_reduction"}
    assert {c for _, c in skipped} <= expected


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, suite_results):
    results, _ = suite_results
    failures = evaluate(n, results)
    line = criterion_line(n, failures)
    _lines[n] = line
    print(line)
    assert not failures, "; ".join(failures)


def criterion_lines():
    return [_lines[n] for n in sorted(_lines)]


if __name__ == "__main__":
    import sys

    results, elapsed = run_all()
    ok = True
    for n in sorted(CRITERIA):
        failures = evaluate(n, results)
        ok &= not failures
        print(criterion_line(n, failures))
    print(f"elapsed: {elapsed:.1f} s (budget {BUDGET_SECONDS} s)")
    sys.exit(0 if ok else 1)
