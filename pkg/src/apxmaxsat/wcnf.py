"""Weighted CNF data model.

Literals are signed DIMACS integers: variable ids are positive ints, and a
negative literal is the negation of its variable. A formula splits into hard
clauses (must hold) and soft clauses, each carrying a positive integer
weight; the cost of an assignment is the summed weight of the soft clauses
it leaves unsatisfied.

Input format is old-style WDIMACS only: a `p wcnf <vars> <clauses> <top>`
header, one clause per line as `<weight> <lit>... 0`, where weight == top
marks a hard clause. The 2022 `h`-prefixed format is rejected.

Formulas are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

INF_COST = float("inf")  # cost of the empty (absent) model


class WcnfParseError(ValueError):
    """Malformed WDIMACS input; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals, deduplicated preserving first occurrence.

    A clause containing both a literal and its negation is tautological:
    satisfied by every assignment and exempt from cost.
    """

    lits: tuple[int, ...]
    tautological: bool = False

    @classmethod
    def of(cls, lits) -> "Clause":
        seen: set[int] = set()
        out: list[int] = []
        for l in lits:
            l = int(l)
            if l == 0:
                raise ValueError("0 is not a literal")
            if l not in seen:
                seen.add(l)
                out.append(l)
        if not out:
            raise ValueError("empty clause")
        taut = any(-l in seen for l in out)
        return cls(tuple(out), taut)

    def satisfied_by(self, assignment) -> bool:
        return any(assignment[abs(l)] == (l > 0) for l in self.lits)

    def max_var(self) -> int:
        return max(abs(l) for l in self.lits)


@dataclass
class WcnfFormula:
    """A weighted partial CNF instance.

    soft holds (clause, weight) pairs in input order; the soft-clause index
    is its stable identity. Duplicate soft clauses stay distinct (weights are
    never merged). Weights are plain Python ints, so arbitrary-precision
    totals are exact.
    """

    num_vars: int
    hard: list[Clause]
    soft: list[tuple[Clause, int]]
    warnings: list[str] = field(default_factory=list, compare=False)

    def __post_init__(self):
        for c in self.hard:
            if c.max_var() > self.num_vars:
                raise ValueError("hard clause variable exceeds num_vars")
        for c, w in self.soft:
            if c.max_var() > self.num_vars:
                raise ValueError("soft clause variable exceeds num_vars")
            if w < 1:
                raise ValueError("soft weight must be >= 1")

    @property
    def soft_weights(self) -> list[int]:
        return [w for _, w in self.soft]

    @property
    def total_soft_weight(self) -> int:
        return sum(self.soft_weights)


@dataclass(frozen=True)
class RelaxedFormula:
    """A formula with one fresh relaxation variable per soft clause.

    relax_of[i] is the relaxation variable of soft clause i; ids are
    allocated in soft-clause order starting at base.num_vars + 1.
    """

    base: WcnfFormula
    relax_of: tuple[int, ...]
    total_vars: int

    def relaxed_soft(self):
        """Yield each soft clause extended with its relaxation variable."""
        for i, (c, _) in enumerate(self.base.soft):
            yield c.lits + (self.relax_of[i],)


@dataclass
class Model:
    """A total assignment over the original variables, with its cost under
    the original weights (true_cost) and the approximated weights
    (approx_cost). An absent model is represented as None, cost INF_COST."""

    assignment: dict[int, bool]
    true_cost: int
    approx_cost: int


def parse_wcnf(text) -> WcnfFormula:
    """Parse old-style WDIMACS from a str or bytes buffer.

    Raises WcnfParseError on a malformed header, non-positive weight, weight
    above top, a 0 inside a clause body, a missing terminating 0, or any
    non-integer token. A clause count differing from the header is recorded
    as a warning, and variables beyond the header count grow num_vars.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode()
    header: tuple[int, int, int] | None = None
    hard: list[Clause] = []
    soft: list[tuple[Clause, int]] = []
    max_var = 0
    last_line = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise WcnfParseError(line_no, "duplicate 'p' header")
            toks = line.split()
            if len(toks) != 5 or toks[1] != "wcnf":
                raise WcnfParseError(
                    line_no, "malformed header; expected 'p wcnf <vars> <clauses> <top>'"
                )
            try:
                nvars, nclauses, top = int(toks[2]), int(toks[3]), int(toks[4])
            except ValueError:
                raise WcnfParseError(line_no, "non-integer header field") from None
            if nvars < 0 or nclauses < 0 or top < 1:
                raise WcnfParseError(line_no, "header fields out of range")
            header = (nvars, nclauses, top)
            continue
        if header is None:
            if line.split()[0] == "h":
                raise WcnfParseError(
                    line_no,
                    "'h' marker is the 2022 WCNF format, which is not supported; "
                    "use old-style WDIMACS with a 'p wcnf' header",
                )
            raise WcnfParseError(line_no, "clause before 'p wcnf' header")
        toks = line.split()
        if toks[0] == "h":
            raise WcnfParseError(
                line_no,
                "'h' marker is the 2022 WCNF format, which is not supported",
            )
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise WcnfParseError(line_no, f"non-integer token in clause") from None
        top = header[2]
        w = vals[0]
        if w <= 0:
            raise WcnfParseError(line_no, f"weight {w} must be positive")
        if w > top:
            raise WcnfParseError(line_no, f"weight {w} exceeds top {top}")
        if vals[-1] != 0:
            raise WcnfParseError(line_no, "clause missing terminating 0")
        body = vals[1:-1]
        if 0 in body:
            raise WcnfParseError(line_no, "literal 0 mid-clause")
        if not body:
            raise WcnfParseError(line_no, "empty clause")
        clause = Clause.of(body)
        max_var = max(max_var, clause.max_var())
        if w == top:
            hard.append(clause)
        else:
            soft.append((clause, w))
    if header is None:
        raise WcnfParseError(max(last_line, 1), "missing 'p wcnf' header")
    warnings = []
    declared = header[1]
    found = len(hard) + len(soft)
    if found != declared:
        warnings.append(f"header declares {declared} clauses, found {found}")
    num_vars = max(header[0], max_var)
    return WcnfFormula(num_vars, hard, soft, warnings)


def serialize_wcnf(f: WcnfFormula) -> str:
    """Emit canonical WDIMACS: header, hard clauses first, then soft.

    top is chosen as total soft weight + 1, so every soft weight stays
    strictly below it. parse_wcnf(serialize_wcnf(f)) == f.
    """
    top = f.total_soft_weight + 1
    lines = [f"p wcnf {f.num_vars} {len(f.hard) + len(f.soft)} {top}"]
    for c in f.hard:
        lines.append(f"{top} {' '.join(map(str, c.lits))} 0")
    for c, w in f.soft:
        lines.append(f"{w} {' '.join(map(str, c.lits))} 0")
    return "\n".join(lines) + "\n"


def relax(f: WcnfFormula) -> RelaxedFormula:
    """Attach a fresh relaxation variable to every soft clause.

    Fresh ids are num_vars+1, num_vars+2, ... in soft-clause order.
    """
    relax_of = tuple(f.num_vars + 1 + i for i in range(len(f.soft)))
    return RelaxedFormula(f, relax_of, f.num_vars + len(f.soft))


def _require_total(f: WcnfFormula, assignment) -> None:
    for v in range(1, f.num_vars + 1):
        if v not in assignment:
            raise ValueError(f"partial assignment: variable {v} unassigned")


def cost(f: WcnfFormula, assignment, weights=None) -> int:
    """Summed weight of soft clauses unsatisfied by a total assignment.

    weights, when given, substitutes a per-soft-index weight sequence
    (e.g. an approximated weight map); tautological soft clauses never
    contribute.
    """
    _require_total(f, assignment)
    total = 0
    for i, (c, w) in enumerate(f.soft):
        if c.tautological:
            continue
        if not c.satisfied_by(assignment):
            total += w if weights is None else weights[i]
    return total


def check_model(f: WcnfFormula, assignment):
    """Validate a total assignment against the hard clauses.

    Returns ('valid', cost) when every hard clause is satisfied, else
    ('violates_hard', index) for the first violated hard clause.
    """
    _require_total(f, assignment)
    for i, c in enumerate(f.hard):
        if not c.satisfied_by(assignment):
            return ("violates_hard", i)
    return ("valid", cost(f, assignment))
