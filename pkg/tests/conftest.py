import random
import sys

import hypothesis
import hypothesis.strategies as st
import pytest

from apxmaxsat import wcnf

hypothesis.settings.register_profile("ci", deadline=None)
hypothesis.settings.load_profile("ci")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

E1_TEXT = "p wcnf 2 3 10\n10 1 2 0\n3 -1 0\n2 -2 0\n"
HARD_UNSAT_TEXT = "p wcnf 1 2 5\n5 1 0\n5 -1 0\n"


@pytest.fixture
def e1():
    return wcnf.parse_wcnf(E1_TEXT)


@pytest.fixture
def hard_unsat():
    return wcnf.parse_wcnf(HARD_UNSAT_TEXT)


def all_assignments(num_vars):
    """Every total assignment as a var->bool dict."""
    for bits in range(1 << num_vars):
        yield {v: bool(bits >> (v - 1) & 1) for v in range(1, num_vars + 1)}


def clause_sat(clause_lits, assignment):
    return any(assignment[abs(l)] == (l > 0) for l in clause_lits)


_TT_CACHE = {}


def _var_tables(num_vars):
    tabs = _TT_CACHE.get(num_vars)
    if tabs is None:
        size = 1 << num_vars
        tabs = {}
        for v in range(1, num_vars + 1):
            p = 1 << (v - 1)
            t = ((1 << p) - 1) << p
            width = 2 * p
            while width < size:  # widen by doubling
                t |= t << width
                width *= 2
            tabs[v] = t
        _TT_CACHE[num_vars] = tabs
    return tabs


def truth_table_sat(num_vars, clauses):
    """Exhaustive satisfiability via bit-parallel truth tables.

    The truth table of each literal over all 2^n assignments is a 2^n-bit
    integer; a clause's table is the OR of its literals' tables and the
    formula is satisfiable iff the AND over clauses is nonzero.
    """
    full = (1 << (1 << num_vars)) - 1
    var_table = _var_tables(num_vars)
    alive = full
    for clause in clauses:
        mask = 0
        for l in clause:
            t = var_table[abs(l)]
            mask |= t if l > 0 else (full ^ t)
        alive &= mask
        if alive == 0:
            return False
    return True


def projected_models(clauses, input_vars, seed=0):
    """Input-var projections of the models of a clause set, enumerated with
    a SAT solver and projection-blocking clauses."""
    from apxmaxsat.satcore import SatSolver, Status

    solver = SatSolver(seed=seed)
    for v in input_vars:
        solver._ensure_var(v)
    for c in clauses:
        solver.add_clause(c)
    seen = set()
    while True:
        st_, model = solver.solve()
        if st_ is not Status.SAT:
            return seen
        proj = tuple(v for v in input_vars if model[v])
        assert proj not in seen
        seen.add(proj)
        solver.add_clause([-v if model[v] else v for v in input_vars])


def arithmetic_models(weights, bound):
    """{subsets of inputs : weighted sum <= bound} by enumeration."""
    import itertools

    n = len(weights)
    out = set()
    for bits in itertools.product([0, 1], repeat=n):
        if sum(w * b for w, b in zip(weights, bits)) <= bound:
            out.add(tuple(i + 1 for i in range(n) if bits[i]))
    return out


def clause_strategy(num_vars, max_width=3):
    lit = st.builds(lambda v, s: v if s else -v,
                    st.integers(1, num_vars), st.booleans())
    return st.lists(lit, min_size=1, max_size=max_width)


@st.composite
def formula_strategy(draw, max_vars=6, max_clauses=8, max_weight=12):
    n = draw(st.integers(1, max_vars))
    hard = [wcnf.Clause.of(c)
            for c in draw(st.lists(clause_strategy(n), max_size=max_clauses))]
    soft_raw = draw(st.lists(
        st.tuples(clause_strategy(n), st.integers(1, max_weight)),
        max_size=max_clauses))
    soft = [(wcnf.Clause.of(c), w) for c, w in soft_raw]
    return wcnf.WcnfFormula(n, hard, soft)


@st.composite
def assignment_strategy(draw, num_vars):
    return {v: draw(st.booleans()) for v in range(1, num_vars + 1)}


def seeded_rng(seed):
    return random.Random(seed)
