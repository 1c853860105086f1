"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The lines also appear in the "acceptance criteria" section of the pytest
terminal summary (see conftest), so they are visible without -s.
"""

import random
import subprocess
import sys
import time

import pytest

from apxmaxsat import clustering, harness, search, wcnf
from apxmaxsat.clustering import distinct_weight_count, partition
from apxmaxsat.encodings import CnfBuffer, GeneralizedTotalizer, Totalizer
from apxmaxsat.harness import brute_force_optimum, score
from apxmaxsat.search import (APX_SUBPROB, APX_WEIGHT,
                              OPTIMUM_FOR_APPROXIMATION, SearchConfig)

from conftest import E1_TEXT, HARD_UNSAT_TEXT, arithmetic_models, \
    projected_models


RESULTS = []


def criterion(num, name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    line = f"[{tag}] acceptance {num}: {name}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line, flush=True)
    assert ok, line


@pytest.fixture(scope="module")
def desk_suite():
    """200 seeded random instances (<=16 vars, <=30 clauses, weights <=20,
    satisfiable hard part) with cached brute-force optima."""
    rng = random.Random(424242)
    instances = [harness.random_wcnf(rng) for _ in range(200)]
    optima = [brute_force_optimum(f)[0] for f in instances]
    return instances, optima


def test_criterion_1_exact_mode_optimality(desk_suite):
    instances, optima = desk_suite
    started = time.monotonic()
    mismatches = 0
    for i, (f, opt) in enumerate(zip(instances, optima)):
        report = search.solve(f, SearchConfig(algorithm=APX_WEIGHT, clusters=0,
                                              seed=i))
        if report.status != OPTIMUM_FOR_APPROXIMATION \
                or report.best.true_cost != opt:
            mismatches += 1
    elapsed = time.monotonic() - started
    criterion(1, "exact-mode optimality",
              mismatches == 0 and elapsed < 60.0,
              f"200 instances, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_2_approximation_safety(desk_suite):
    instances, optima = desk_suite
    runs = 0
    violations = []
    for i, (f, opt) in enumerate(zip(instances, optima)):
        ms = {1, 2, 3, distinct_weight_count(f)}
        for m in sorted(ms):
            if m < 1:
                continue
            for algorithm in (APX_WEIGHT, APX_SUBPROB):
                models = []
                report = search.solve(
                    f, SearchConfig(algorithm=algorithm, clusters=m, seed=i),
                    on_improve=lambda model: models.append(model))
                runs += 1
                if report.best is None or report.best.true_cost < opt:
                    violations.append((i, algorithm, m, "cost below optimum"))
                    continue
                costs = [c for _, c in report.trace]
                if costs != sorted(set(costs), reverse=True):
                    violations.append((i, algorithm, m, "trace not decreasing"))
                for model in models:
                    verdict, c = wcnf.check_model(f, model.assignment)
                    if verdict != "valid" or c != model.true_cost:
                        violations.append((i, algorithm, m, "invalid model"))
    criterion(2, "approximation safety",
              not violations,
              f"{runs} runs, violations: {violations[:3]}")


def test_criterion_3_bmo_exactness():
    rng = random.Random(777)
    checked = 0
    failures = 0
    while checked < 50:
        f = harness.random_bmo_wcnf(rng)
        m = distinct_weight_count(f)
        part, _ = partition(f, m)
        assert clustering.is_bmo(f, part)
        opt = brute_force_optimum(f)[0]
        report = search.solve(f, SearchConfig(algorithm=APX_SUBPROB,
                                              clusters="weights", seed=checked))
        if report.status != OPTIMUM_FOR_APPROXIMATION \
                or report.best.true_cost != opt:
            failures += 1
        checked += 1
    criterion(3, "multilevel-dominance exactness",
              failures == 0, f"50 instances, {failures} failures")


def test_criterion_4_encoding_equivalence():
    rng = random.Random(990011)
    failures = 0
    for trial in range(200):
        n = rng.randint(1, 8)
        weights = [rng.randint(1, 10) for _ in range(n)]
        total = sum(weights)
        bound = rng.randint(0, total)
        inputs = list(range(1, n + 1))
        expected = arithmetic_models(weights, bound)

        # pseudo-Boolean, direct bound
        buf = CnfBuffer(n)
        gte = GeneralizedTotalizer(list(zip(inputs, weights)), total, buf)
        gte.set_bound(bound, buf)
        if projected_models(buf.clauses, inputs) != expected:
            failures += 1

        # pseudo-Boolean, decreasing tightening path to the same bound
        path = sorted({rng.randint(bound, total) for _ in range(3)} | {bound},
                      reverse=True)
        buf2 = CnfBuffer(n)
        gte2 = GeneralizedTotalizer(list(zip(inputs, weights)), total, buf2)
        for b in path:
            gte2.set_bound(b, buf2)
        if projected_models(buf2.clauses, inputs) != expected:
            failures += 1

        # cardinality (all-unit weights), stepped to the same bound
        k = rng.randint(0, n)
        card = CnfBuffer(n)
        tot = Totalizer(inputs, card)
        if k + 1 <= n and rng.random() < 0.5:
            tot.set_bound(rng.randint(k + 1, n), card)
        tot.set_bound(k, card)
        if projected_models(card.clauses, inputs) != arithmetic_models([1] * n, k):
            failures += 1
    criterion(4, "encoding equivalence vs enumeration",
              failures == 0, f"200 trials x 3 checks, {failures} failures")


def test_criterion_5_weight_fidelity_trend(tmp_path):
    rng = random.Random(20250810)
    for i in range(30):
        f = harness.fidelity_family(rng)
        assert distinct_weight_count(f) >= 50
        (tmp_path / f"i{i:02d}.wcnf").write_text(wcnf.serialize_wcnf(f))
    weight_grid = [0, 1, 2, 3, "weights"]
    subprob_grid = [1, 2, 3, "weights"]
    configs = [SearchConfig(algorithm=APX_WEIGHT, clusters=m) for m in weight_grid]
    configs += [SearchConfig(algorithm=APX_SUBPROB, clusters=m) for m in subprob_grid]
    table = harness.run_benchmarks(tmp_path, configs, max_conflicts=2000)
    avg = {label: float(table.averages[label]) for label in table.configs}
    slack = 0.02
    w_scores = [avg[f"apx-weight/m={m}"] for m in weight_grid]
    weight_ok = max(w_scores[1:]) >= w_scores[0] - slack
    s_scores = [avg[f"apx-subprob/m={m}"] for m in subprob_grid]
    subprob_ok = all(b >= a - slack for a, b in zip(s_scores, s_scores[1:]))
    detail = (f"apx-weight m={weight_grid}: {[f'{s:.3f}' for s in w_scores]}; "
              f"apx-subprob m={subprob_grid}: {[f'{s:.3f}' for s in s_scores]}")
    criterion(5, "weight-fidelity trend", weight_ok and subprob_ok, detail)


def test_criterion_6_clustering_identities():
    ok = True
    f1 = wcnf.WcnfFormula(6, [], [(wcnf.Clause.of([i + 1]), w) for i, w in
                                  enumerate([1, 1, 2, 5, 100, 101])])
    p1, s1 = partition(f1, 2)
    ws = f1.soft_weights
    ok &= [sorted(ws[i] for i in cl) for cl in p1.clusters] \
        == [[1, 1, 2, 5], [100, 101]]
    ok &= s1.rep == (2, 101)

    f2 = wcnf.WcnfFormula(4, [], [(wcnf.Clause.of([i + 1]), w) for i, w in
                                  enumerate([1, 5, 5, 9])])
    p2, s2 = partition(f2, 3)
    ws2 = f2.soft_weights
    ok &= [sorted(ws2[i] for i in cl) for cl in p2.clusters] == [[1], [5, 5], [9]]
    ok &= s2.weight_m == s2.weight

    _, s3 = partition(f1, 0)
    ok &= s3.weight_m == s3.weight == (1, 1, 2, 5, 100, 101)
    criterion(6, "clustering identities", bool(ok))


def test_criterion_7_scoring_arithmetic():
    from fractions import Fraction

    ok = score(10, 20) == Fraction(1, 2)
    ok &= score(10, 10) == Fraction(1)
    ok &= score(7, None) == Fraction(0)
    table_case = sum((score(1, 1), score(1, 1), score(1, 1), score(1, None)),
                     Fraction(0)) / 4
    ok &= table_case == Fraction(3, 4)
    criterion(7, "scoring arithmetic", bool(ok))


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "apxmaxsat", *args],
                          capture_output=True, text=True, timeout=120)


def test_criterion_8_wire_protocol(tmp_path):
    e1 = tmp_path / "E1.wcnf"
    e1.write_text(E1_TEXT)
    dead = tmp_path / "hardunsat.wcnf"
    dead.write_text(HARD_UNSAT_TEXT)
    problems = []

    r = run_cli("solve", str(e1), "--algorithm", "apx-subprob",
                "--clusters", "weights", "--timeout", "10")
    lines = r.stdout.splitlines()
    o_vals = [int(x.split()[1]) for x in lines if x.startswith("o ")]
    if not ("o 2" in lines and o_vals[-1] == 2
            and [x for x in lines if x.startswith("s ")] == ["s SATISFIABLE"]
            and [x for x in lines if x.startswith("v ")] == ["v -1 2"]
            and r.returncode == 10):
        problems.append("apx-subprob example")

    r = run_cli("solve", str(dead))
    if not (r.stdout.splitlines() == ["s UNSATISFIABLE"] and r.returncode == 20):
        problems.append("unsat example")

    r = run_cli("solve", str(e1), "--algorithm", "apx-weight", "--clusters", "0")
    lines = r.stdout.splitlines()
    o_vals = [int(x.split()[1]) for x in lines if x.startswith("o ")]
    if not (o_vals[-1] == 2
            and [x for x in lines if x.startswith("s ")] == ["s OPTIMUM FOUND"]
            and [x for x in lines if x.startswith("v ")] == ["v -1 2"]
            and r.returncode == 30):
        problems.append("exact-mode example")
    criterion(8, "wire protocol", not problems, str(problems) if problems else "3 invocations")
