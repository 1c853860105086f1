import random

import pytest

from apxmaxsat import clustering, harness, search, wcnf
from apxmaxsat.satcore import Status
from apxmaxsat.search import (APX_SUBPROB, APX_WEIGHT,
                              OPTIMUM_FOR_APPROXIMATION, SATISFIABLE,
                              UNKNOWN, UNSATISFIABLE, SearchConfig)

from conftest import seeded_rng


def weight_cfg(m, **kw):
    return SearchConfig(algorithm=APX_WEIGHT, clusters=m, **kw)


def subprob_cfg(m, **kw):
    return SearchConfig(algorithm=APX_SUBPROB, clusters=m, **kw)


# ----------------------------------------------------------------------
# apx-weight on the worked instance

def test_apx_weight_exact_mode_finds_optimum(e1):
    report = search.solve(e1, weight_cfg(0))
    assert report.status == OPTIMUM_FOR_APPROXIMATION
    assert report.best.true_cost == 2
    assert report.mu == 2


def test_apx_weight_single_cluster(e1):
    # one cluster: both weights become 3; the minimum approximated cost is 3
    report = search.solve(e1, weight_cfg(1))
    assert report.status == OPTIMUM_FOR_APPROXIMATION
    assert report.mu == 3
    assert report.best.true_cost in (2, 3)
    assert report.best.approx_cost == 3


def test_apx_weight_no_soft_clauses():
    f = wcnf.parse_wcnf("p wcnf 2 1 5\n5 1 2 0\n")
    for cfg in (weight_cfg(0), weight_cfg(3), subprob_cfg("weights")):
        report = search.solve(f, cfg)
        assert report.status == OPTIMUM_FOR_APPROXIMATION
        assert report.best.true_cost == 0


def test_hard_unsat_reported(hard_unsat):
    for cfg in (weight_cfg(0), subprob_cfg(1)):
        report = search.solve(hard_unsat, cfg)
        assert report.status == UNSATISFIABLE
        assert report.best is None and report.trace == []


def test_improvement_callback_order(e1):
    seen = []
    report = search.solve(e1, weight_cfg(0), on_improve=lambda m: seen.append(m))
    assert [m.true_cost for m in seen] == [c for _, c in report.trace]
    assert seen[-1].true_cost == report.best.true_cost


# ----------------------------------------------------------------------
# apx-subprob on the worked instances

def test_apx_subprob_two_clusters(e1):
    report = search.solve(e1, subprob_cfg(2))
    assert report.status == OPTIMUM_FOR_APPROXIMATION
    assert report.best.true_cost == 2
    assert report.cluster_mu == [(1, 0), (0, 1)]  # heavy cluster frozen at 0


def test_apx_subprob_greedy_can_be_suboptimal():
    f = wcnf.parse_wcnf(
        "p wcnf 2 4 9\n9 1 2 0\n5 -1 0\n3 -2 0\n3 -2 0\n")
    assert harness.brute_force_optimum(f)[0] == 5
    report = search.solve(f, subprob_cfg(2))
    assert report.status == OPTIMUM_FOR_APPROXIMATION
    assert report.best.true_cost == 6  # heavy cluster frozen first locks x1=False


def test_apx_subprob_single_cluster_counts_clauses(e1):
    report = search.solve(e1, subprob_cfg(1))
    assert report.best.true_cost in (2, 3)
    unsat = sum(1 for c, _ in e1.soft
                if not c.satisfied_by(report.best.assignment))
    assert unsat == 1


def test_apx_subprob_rejects_zero_clusters(e1):
    with pytest.raises(ValueError):
        search.solve(e1, subprob_cfg(0))


def test_weights_sentinel_resolves(e1):
    assert search.resolve_clusters(e1, "weights") == 2
    assert search.resolve_clusters(e1, 5) == 5


# ----------------------------------------------------------------------
# check_hard

def test_check_hard():
    st, _ = search.check_hard(wcnf.parse_wcnf("p wcnf 1 2 5\n5 1 0\n5 -1 0\n"))
    assert st is Status.UNSAT
    st, model = search.check_hard(wcnf.parse_wcnf("p wcnf 2 1 5\n5 1 2 0\n"))
    assert st is Status.SAT and (model[1] or model[2])
    st, model = search.check_hard(wcnf.WcnfFormula(2, [], [(wcnf.Clause.of([1]), 1)]))
    assert st is Status.SAT and set(model) == {1, 2}


# ----------------------------------------------------------------------
# budget handling

def test_conflict_budget_interrupts(e1):
    # budget too small to even get the first model
    report = search.solve(e1, weight_cfg(0, max_conflicts=0))
    assert report.status == UNKNOWN and report.best is None


def test_stop_flag_interrupts(e1):
    report = search.solve(e1, subprob_cfg(2, stop=lambda: True))
    assert report.status == UNKNOWN and report.best is None


def test_budget_mid_search_returns_best_so_far():
    rng = seeded_rng(5150)
    f = harness.random_wcnf(rng, max_vars=14, max_clauses=28)
    calls = []

    def stop():
        return len(calls) >= 1

    report = search.solve(f, weight_cfg(0, stop=stop),
                          on_improve=lambda m: calls.append(m))
    if report.best is not None:
        assert report.status == SATISFIABLE
        assert report.best.true_cost == calls[0].true_cost


# ----------------------------------------------------------------------
# seeded properties against the oracle

def test_exact_mode_matches_oracle_sample():
    rng = seeded_rng(90125)
    for trial in range(40):
        f = harness.random_wcnf(rng)
        opt = harness.brute_force_optimum(f)
        report = search.solve(f, weight_cfg(0, seed=trial))
        assert report.status == OPTIMUM_FOR_APPROXIMATION
        assert report.best.true_cost == opt[0]


def test_approximation_safety_and_monotone_traces():
    rng = seeded_rng(2600)
    for trial in range(15):
        f = harness.random_wcnf(rng)
        opt = harness.brute_force_optimum(f)[0]
        nweights = clustering.distinct_weight_count(f)
        for m in (1, 2, nweights):
            for make in (weight_cfg, subprob_cfg):
                if make is subprob_cfg and m < 1:
                    continue
                models = []
                report = search.solve(f, make(m, seed=trial),
                                      on_improve=lambda x: models.append(x))
                assert report.best.true_cost >= opt
                costs = [c for _, c in report.trace]
                assert costs == sorted(costs, reverse=True)
                assert len(set(costs)) == len(costs)
                for model in models:
                    verdict, c = wcnf.check_model(f, model.assignment)
                    assert verdict == "valid" and c == model.true_cost


def test_final_mu_is_minimum_approximated_cost():
    rng = seeded_rng(1999)
    for trial in range(12):
        f = harness.random_wcnf(rng, max_vars=10, max_clauses=16)
        for m in (0, 1, 2):
            _, scheme = clustering.partition(f, m)
            report = search.solve(f, weight_cfg(m, seed=trial))
            assert report.status == OPTIMUM_FOR_APPROXIMATION
            oracle_m = harness.brute_force_optimum(f, weights=scheme.weight_m)
            assert report.mu == oracle_m[0]


def test_apx_weight_identity_at_full_cluster_count():
    rng = seeded_rng(314)
    for trial in range(8):
        f = harness.random_wcnf(rng, max_vars=10, max_clauses=14)
        nweights = clustering.distinct_weight_count(f)
        base = search.solve(f, weight_cfg(0, seed=trial))
        same = search.solve(f, weight_cfg(nweights, seed=trial))
        assert base.mu == same.mu
        assert base.best.true_cost == same.best.true_cost


def test_bmo_families_solved_exactly_sample():
    rng = seeded_rng(777)
    for trial in range(10):
        f = harness.random_bmo_wcnf(rng)
        m = clustering.distinct_weight_count(f)
        part, _ = clustering.partition(f, m)
        assert clustering.is_bmo(f, part)
        opt = harness.brute_force_optimum(f)[0]
        report = search.solve(f, subprob_cfg("weights", seed=trial))
        assert report.status == OPTIMUM_FOR_APPROXIMATION
        assert report.best.true_cost == opt
