"""Anytime MaxSAT search.

Two strategies over the relaxed formula:

* apx-weight: linear Sat-Unsat minimization of the approximated cost. Each
  model tightens a pseudo-Boolean bound (weighted sum of relaxation
  variables, under the clustered weight map) to one below the model's
  approximated cost, until unsatisfiable. With m=0 the weight map is exact
  and the final model is a true optimum.

* apx-subprob: greedy per-cluster minimization. Clusters are processed in
  descending representative weight; within a cluster the number of true
  relaxation variables is minimized with cardinality bounds. When a cluster
  bottoms out, the working formula is rebuilt from the relaxed formula with
  the frozen per-cluster bounds re-asserted, and the next cluster starts.
  Exact when the weight structure is multilevel-dominant (see
  clustering.is_bmo) and m equals the number of distinct weights.

Both record the best model seen by true cost, report every strict
improvement through a callback before the next solver call, and stop early
on a wall-clock deadline, a conflict budget, or a cooperative stop flag.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from . import clustering, wcnf
from .encodings import GeneralizedTotalizer, Totalizer
from .satcore import SatSolver, Status

APX_WEIGHT = "apx-weight"
APX_SUBPROB = "apx-subprob"
CLUSTERS_WEIGHTS = "weights"  # sentinel: m = number of distinct weights

OPTIMUM_FOR_APPROXIMATION = "optimum_for_approximation"
SATISFIABLE = "satisfiable"
UNSATISFIABLE = "unsatisfiable"
UNKNOWN = "unknown"


@dataclass
class SearchConfig:
    """Search parameters.

    clusters is an int (m >= 0 for apx-weight, m >= 1 for apx-subprob) or
    the string "weights" meaning m = number of distinct soft weights.
    timeout_s is a wall-clock budget; max_conflicts a deterministic
    alternative counted across all solver calls of one search. stop is an
    optional zero-argument callable polled cooperatively.
    """

    algorithm: str = APX_SUBPROB
    clusters: int | str = CLUSTERS_WEIGHTS
    timeout_s: float | None = None
    max_conflicts: int | None = None
    seed: int = 0
    stop: Callable[[], bool] | None = None


@dataclass
class SearchReport:
    """Outcome of one search: best model (or None), a status, and the
    improvement trace as (elapsed seconds, true cost) pairs with strictly
    decreasing costs. mu is the final pseudo-Boolean bound target of
    apx-weight; cluster_mu lists (cluster index, frozen bound) in processing
    order for apx-subprob."""

    best: wcnf.Model | None
    status: str
    trace: list[tuple[float, int]] = field(default_factory=list)
    mu: int | None = None
    cluster_mu: list[tuple[int, int | None]] | None = None


class _Budget:
    """Shared wall-clock/conflict budget across the solver calls of one
    search, plus the cooperative stop flag."""

    def __init__(self, cfg: SearchConfig):
        self.deadline = (time.monotonic() + cfg.timeout_s
                         if cfg.timeout_s is not None else None)
        self.conflicts_left = cfg.max_conflicts
        self.stop = cfg.stop

    def exhausted(self) -> bool:
        if self.stop is not None and self.stop():
            return True
        if self.deadline is not None and time.monotonic() >= self.deadline:
            return True
        if self.conflicts_left is not None and self.conflicts_left <= 0:
            return True
        return False

    def solve(self, solver: SatSolver):
        time_budget = None
        if self.deadline is not None:
            time_budget = self.deadline - time.monotonic()
        before = solver.conflicts
        st, model = solver.solve(time_budget=time_budget,
                                 conflict_budget=self.conflicts_left,
                                 stop=self.stop)
        if self.conflicts_left is not None:
            self.conflicts_left -= solver.conflicts - before
        return st, model


def resolve_clusters(f: wcnf.WcnfFormula, clusters: int | str) -> int:
    """Map a cluster-count setting to a concrete m."""
    if clusters == CLUSTERS_WEIGHTS:
        return clustering.distinct_weight_count(f)
    m = int(clusters)
    if m < 0:
        raise ValueError("cluster count must be >= 0")
    return m


def check_hard(f: wcnf.WcnfFormula, timeout_s: float | None = None,
               max_conflicts: int | None = None, seed: int = 0):
    """Solve the hard clauses alone. Returns (Status, model or None)."""
    solver = SatSolver(f.num_vars, seed=seed)
    for c in f.hard:
        solver.add_clause(c.lits)
    return solver.solve(time_budget=timeout_s, conflict_budget=max_conflicts)


def solve(f: wcnf.WcnfFormula, cfg: SearchConfig, on_improve=None) -> SearchReport:
    """Dispatch to the configured algorithm."""
    if cfg.algorithm == APX_WEIGHT:
        return solve_apx_weight(f, cfg, on_improve)
    if cfg.algorithm == APX_SUBPROB:
        return solve_apx_subprob(f, cfg, on_improve)
    raise ValueError(f"unknown algorithm {cfg.algorithm!r}")


def _base_solver(relaxed: wcnf.RelaxedFormula, seed: int) -> SatSolver:
    solver = SatSolver(relaxed.total_vars, seed=seed)
    for c in relaxed.base.hard:
        solver.add_clause(c.lits)
    for lits in relaxed.relaxed_soft():
        solver.add_clause(lits)
    return solver


class _Best:
    """Best-model bookkeeping: update on strictly decreasing true cost,
    fire the improvement callback, and keep the trace."""

    def __init__(self, f, scheme, on_improve, started):
        self.f = f
        self.scheme = scheme
        self.on_improve = on_improve
        self.started = started
        self.model: wcnf.Model | None = None
        self.cost = wcnf.INF_COST
        self.trace: list[tuple[float, int]] = []

    def offer(self, full_assignment) -> None:
        assign = {v: full_assignment[v] for v in range(1, self.f.num_vars + 1)}
        tc = wcnf.cost(self.f, assign)
        if tc < self.cost:
            ac = wcnf.cost(self.f, assign, weights=self.scheme.weight_m)
            self.cost = tc
            self.model = wcnf.Model(assign, tc, ac)
            self.trace.append((time.monotonic() - self.started, tc))
            if self.on_improve is not None:
                self.on_improve(self.model)

    def interrupted_status(self) -> str:
        return SATISFIABLE if self.model is not None else UNKNOWN


def solve_apx_weight(f: wcnf.WcnfFormula, cfg: SearchConfig,
                     on_improve=None) -> SearchReport:
    """Linear Sat-Unsat search on the approximated weights.

    Repeatedly solves the working formula; each model's approximated
    relaxation cost mu becomes the next strict upper bound (weighted sum of
    relaxation variables <= mu - 1, encoded once and tightened in place).
    Unsatisfiability of the bounded formula proves mu is the minimum
    approximated cost; the best model by true cost is returned, which for
    m >= 1 is not necessarily a true optimum.
    """
    started = time.monotonic()
    m = resolve_clusters(f, cfg.clusters)
    if not f.soft:
        m = 0
    _, scheme = clustering.partition(f, m)
    relaxed = wcnf.relax(f)
    solver = _base_solver(relaxed, cfg.seed)
    budget = _Budget(cfg)
    best = _Best(f, scheme, on_improve, started)
    gte: GeneralizedTotalizer | None = None
    mu: int | None = None
    first = True
    while True:
        if budget.exhausted():
            return SearchReport(best.model, best.interrupted_status(),
                                best.trace, mu=mu)
        st, assignment = budget.solve(solver)
        if st is Status.UNKNOWN:
            return SearchReport(best.model, best.interrupted_status(),
                                best.trace, mu=mu)
        if st is Status.UNSAT:
            if first:
                return SearchReport(None, UNSATISFIABLE, [])
            return SearchReport(best.model, OPTIMUM_FOR_APPROXIMATION,
                                best.trace, mu=mu)
        best.offer(assignment)
        mu = scheme.relax_cost_m(relaxed, assignment)
        if mu == 0:
            # nothing below zero: the approximated minimum is reached
            return SearchReport(best.model, OPTIMUM_FOR_APPROXIMATION,
                                best.trace, mu=0)
        if first:
            items = list(zip(relaxed.relax_of, scheme.weight_m))
            gte = GeneralizedTotalizer(items, mu, solver)
            first = False
        gte.set_bound(mu - 1, solver)


def solve_apx_subprob(f: wcnf.WcnfFormula, cfg: SearchConfig,
                      on_improve=None) -> SearchReport:
    """Greedy per-cluster cardinality minimization, heaviest cluster first.

    For each cluster, the count of true relaxation variables is driven down
    with a totalizer until unsatisfiable; the last feasible count is frozen.
    Freezing rebuilds the working formula from the relaxed one and
    re-asserts the frozen bound of every cluster whose representative
    weight is at least the current one. The result is not guaranteed
    globally optimal.
    """
    started = time.monotonic()
    m = resolve_clusters(f, cfg.clusters)
    budget = _Budget(cfg)
    if not f.soft:
        # nothing to minimize: a model of the hard part is already best
        scheme = clustering.partition(f, 0)[1]
        best = _Best(f, scheme, on_improve, started)
        if budget.exhausted():
            return SearchReport(None, UNKNOWN, [])
        solver = _base_solver(wcnf.relax(f), cfg.seed)
        st, assignment = budget.solve(solver)
        if st is Status.UNSAT:
            return SearchReport(None, UNSATISFIABLE, [])
        if st is Status.UNKNOWN:
            return SearchReport(None, UNKNOWN, [])
        best.offer(assignment)
        return SearchReport(best.model, OPTIMUM_FOR_APPROXIMATION, best.trace,
                            cluster_mu=[])
    if m < 1:
        raise ValueError("apx-subprob needs at least one cluster")
    part, scheme = clustering.partition(f, m)
    relaxed = wcnf.relax(f)
    nclusters = len(part.clusters)
    order = sorted(range(nclusters), key=lambda ci: (-scheme.rep[ci], ci))
    relax_vars = [tuple(relaxed.relax_of[i] for i in cl) for cl in part.clusters]
    mu: list[int | None] = [None] * nclusters
    best = _Best(f, scheme, on_improve, started)
    any_model = False

    def assert_frozen(solver: SatSolver, min_rep: int) -> None:
        for cj in range(nclusters):
            if mu[cj] is None or scheme.rep[cj] < min_rep:
                continue
            k = mu[cj]
            vs = relax_vars[cj]
            if k == 0:
                for r in vs:
                    solver.add_clause([-r])
            elif k < len(vs):
                Totalizer(vs, solver).set_bound(k, solver)
            # k >= len(vs) bounds nothing

    def report(status: str) -> SearchReport:
        return SearchReport(best.model, status, best.trace,
                            cluster_mu=[(ci, mu[ci]) for ci in order])

    solver = _base_solver(relaxed, cfg.seed)
    for pos, ci in enumerate(order):
        vs = relax_vars[ci]
        tot: Totalizer | None = None
        while True:
            if budget.exhausted():
                return report(best.interrupted_status())
            st, assignment = budget.solve(solver)
            if st is Status.UNKNOWN:
                return report(best.interrupted_status())
            if st is Status.UNSAT:
                if not any_model:
                    return SearchReport(None, UNSATISFIABLE, [])
                break  # freeze at the last feasible count
            any_model = True
            best.offer(assignment)
            k = sum(1 for r in vs if assignment[r])
            mu[ci] = k
            if k == 0:
                break  # a "<= -1" bound is vacuously unsatisfiable
            if tot is None:
                tot = Totalizer(vs, solver)
            tot.set_bound(k - 1, solver)
        if pos < len(order) - 1:
            solver = _base_solver(relaxed, cfg.seed)
            assert_frozen(solver, scheme.rep[ci])
    return report(OPTIMUM_FOR_APPROXIMATION)
