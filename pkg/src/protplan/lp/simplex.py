"""Dense two-phase primal simplex over exact rationals or floats.

Variables of a :class:`LinearProgram` are implicitly nonnegative.  Two
standard forms are available:

``primal``
    slacks/surpluses/artificials added directly to the program's rows.
``dual``
    the program is first written as ``min c.x, G x >= h, x >= 0`` and the
    simplex runs on its dual ``max h.y, G^T y <= c, y >= 0``.  The primal
    point is read off the reduced costs of the dual slack columns.  This
    keeps the tableau at (#variables) rows, which matters when there are
    hundreds of cut rows but only a dozen variables.

Exact mode prices by steepest reduced cost and falls back to Bland's rule
(lowest index) during degenerate runs; leaving-row ties always go to the
lowest basic index, so runs are reproducible.  Float mode uses partial
pricing with a tolerance and falls back to Bland's rule after a longer
run of degenerate pivots.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

FLOAT_TOL = 1e-9
MAX_ITERATIONS = 200_000


class Relation(str, enum.Enum):
    GE = ">="
    LE = "<="
    EQ = "="


class Status(str, enum.Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    UNBOUNDED = "UNBOUNDED"


class SolverError(RuntimeError):
    """Malformed program, iteration cap hit, or a failed post-solve check."""


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: tuple
    relation: Relation
    rhs: Fraction
    label: str = ""


@dataclass(frozen=True)
class LinearProgram:
    """``minimize objective . x + objective_constant`` subject to ``constraints``."""

    variables: tuple[str, ...]
    objective: tuple
    constraints: tuple[LinearConstraint, ...]
    objective_constant: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        nvar = len(self.variables)
        if len(set(self.variables)) != nvar:
            raise SolverError("duplicate variable names")
        if len(self.objective) != nvar:
            raise SolverError("objective length does not match variables")
        for row in self.constraints:
            if len(row.coeffs) != nvar:
                raise SolverError(f"row {row.label!r} references undeclared variables")

    @classmethod
    def from_rows(cls, variables: Sequence[str], objective: Mapping[str, Fraction],
                  rows: Sequence[tuple[Mapping[str, Fraction], Relation, Fraction, str]],
                  objective_constant: Fraction = Fraction(0)) -> "LinearProgram":
        """Build from sparse ``{name: coefficient}`` rows."""
        variables = tuple(variables)
        pos = {v: i for i, v in enumerate(variables)}

        def dense(sparse: Mapping[str, Fraction]) -> tuple:
            out = [Fraction(0)] * len(variables)
            for name, c in sparse.items():
                if name not in pos:
                    raise SolverError(f"unknown variable {name!r}")
                out[pos[name]] += Fraction(c)
            return tuple(out)

        cons = tuple(LinearConstraint(dense(r), Relation(rel), Fraction(rhs), label)
                     for r, rel, rhs, label in rows)
        return cls(variables, dense(objective), cons, Fraction(objective_constant))

    def evaluate(self, assignment: Mapping[str, object]):
        total = sum(c * assignment[v] for c, v in zip(self.objective, self.variables))
        return total + self.objective_constant

    def dump(self) -> str:
        """Plain-text rendering, one ``coef*var ... >= rhs`` line per row."""

        def expr(coeffs) -> str:
            parts = [f"{_fmt(c)}*{v}" for c, v in zip(coeffs, self.variables) if c]
            return " + ".join(parts) if parts else "0"

        lines = [f"minimize {expr(self.objective)} + {_fmt(self.objective_constant)}",
                 "subject to"]
        for row in self.constraints:
            tag = f"  # {row.label}" if row.label else ""
            lines.append(f"{expr(row.coeffs)} {row.relation.value} {_fmt(row.rhs)}{tag}")
        lines.append("bounds")
        lines.extend(f"{v} >= 0" for v in self.variables)
        return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class LpSolution:
    status: Status
    assignment: dict = field(default_factory=dict)
    objective_value: object = None
    iteration_count: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


# --------------------------------------------------------------------------
# tableau engine


class _Arith:
    def __init__(self, exact: bool):
        self.exact = exact
        self.tol = 0 if exact else FLOAT_TOL
        self.zero = Fraction(0) if exact else 0.0
        self.conv = Fraction if exact else float

    def neg(self, x) -> bool:
        return x < -self.tol

    def pos(self, x) -> bool:
        return x > self.tol


def _lcm_den(values) -> int:
    den = 1
    for v in values:
        d = v.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    return den


class _Tableau:
    """Rows ``[a_0 .. a_{N-1}, rhs]`` with a basis, plus objective rows
    ``[d_0 .. d_{N-1}, -z]`` kept in sync through every pivot.

    Exact rows hold integer numerators over one positive per-row
    denominator, so a pivot touches only the rows with a nonzero entry in
    the pivot column and each updated row is renormalized by one gcd.
    Float rows hold the values themselves (denominator 1).
    """

    def __init__(self, rows, ar: _Arith):
        self.ar = ar
        self.rows: list[list] = []
        self.den: list = []
        for row in rows:
            if ar.exact:
                den = _lcm_den(row)
                self.rows.append([int(v * den) for v in row])
                self.den.append(den)
            else:
                self.rows.append([float(v) for v in row])
                self.den.append(1.0)
        self.basis: list[int] = [-1] * len(rows)
        self.obj: list[list] = []
        self.obj_den: list = []
        self.iterations = 0

    # values ---------------------------------------------------------------

    def rhs_value(self, i: int):
        v = self.rows[i][-1]
        return Fraction(v, self.den[i]) if self.ar.exact else v

    def entry_value(self, i: int, j: int):
        v = self.rows[i][j]
        return Fraction(v, self.den[i]) if self.ar.exact else v

    def reduced_cost(self, o: int, j: int):
        v = self.obj[o][j]
        return Fraction(v, self.obj_den[o]) if self.ar.exact else v

    def objective_value(self, o: int):
        """Current objective ``z`` of objective row ``o``."""
        v = self.obj[o][-1]
        return -Fraction(v, self.obj_den[o]) if self.ar.exact else -v

    def rhs_positive(self, i: int) -> bool:
        return self.ar.pos(self.rows[i][-1])

    # mutation -------------------------------------------------------------

    def add_objective(self, costs) -> int:
        ar = self.ar
        d = [ar.conv(c) for c in costs] + [ar.zero]
        for i, j in enumerate(self.basis):
            cj = d[j]
            if cj:
                row = self.rows[i]
                scale = cj / self.den[i] if ar.exact else cj
                for t, v in enumerate(row):
                    if v:
                        d[t] -= scale * v
        if ar.exact:
            den = _lcm_den(d)
            self.obj.append([int(v * den) for v in d])
            self.obj_den.append(den)
        else:
            self.obj.append(d)
            self.obj_den.append(1.0)
        return len(self.obj) - 1

    def drop_objective(self, o: int) -> None:
        del self.obj[o]
        del self.obj_den[o]

    def pivot(self, r: int, c: int) -> None:
        if self.ar.exact:
            self._pivot_exact(r, c)
        else:
            self._pivot_float(r, c)
        self.basis[r] = c
        self.iterations += 1
        if self.iterations > MAX_ITERATIONS:
            raise SolverError("simplex iteration cap exceeded")

    def _pivot_exact(self, r: int, c: int) -> None:
        R = self.rows[r]
        pc = R[c]
        if pc < 0:
            R = [-v for v in R]
            pc = -pc
        g = gcd(*R)
        if g > 1:
            R = [v // g for v in R]
            pc //= g
        self.rows[r] = R
        self.den[r] = pc

        def eliminate(row, den):
            f = row[c]
            new = [a * pc - f * b for a, b in zip(row, R)]
            den = den * pc
            g = gcd(den, *new)
            if g > 1:
                new = [v // g for v in new]
                den //= g
            return new, den

        for i, row in enumerate(self.rows):
            if i != r and row[c]:
                self.rows[i], self.den[i] = eliminate(row, self.den[i])
        for o, row in enumerate(self.obj):
            if row[c]:
                self.obj[o], self.obj_den[o] = eliminate(row, self.obj_den[o])

    def _pivot_float(self, r: int, c: int) -> None:
        R = self.rows[r]
        pv = R[c]
        R = [v / pv for v in R]
        R[c] = 1.0
        self.rows[r] = R

        def eliminate(row):
            f = row[c]
            new = [a - f * b for a, b in zip(row, R)]
            new[c] = 0.0
            return new

        for i, row in enumerate(self.rows):
            if i != r and row[c]:
                self.rows[i] = eliminate(row)
        for o, row in enumerate(self.obj):
            if row[c]:
                self.obj[o] = eliminate(row)

    def drop_row(self, r: int) -> None:
        del self.rows[r]
        del self.den[r]
        del self.basis[r]


def _entering_bland(d, allowed, ar: _Arith):
    for j in allowed:
        if ar.neg(d[j]):
            return j
    return None


def _entering_dantzig(d, allowed, ar: _Arith):
    best, best_val = None, -ar.tol
    for j in allowed:
        if d[j] < best_val:
            best, best_val = j, d[j]
    return best


class _PartialPricer:
    """Scan columns in blocks and take the most negative reduced cost of the
    first block that has one."""

    def __init__(self, allowed: Sequence[int]):
        self.allowed = list(allowed)
        self.block = max(16, len(self.allowed) // 8)
        self.start = 0

    def __call__(self, d, ar: _Arith):
        cols = self.allowed
        total = len(cols)
        scanned = 0
        pos = self.start
        while scanned < total:
            step = min(self.block, total - scanned)
            best, best_val = None, -ar.tol
            for t in range(step):
                j = cols[(pos + t) % total]
                if d[j] < best_val:
                    best, best_val = j, d[j]
            scanned += step
            pos = (pos + step) % total
            if best is not None:
                self.start = pos
                return best
        return None


def _leaving(tab: _Tableau, c: int):
    ar = tab.ar
    best_r, best_ratio = None, None
    for i, row in enumerate(tab.rows):
        a = row[c]
        if ar.pos(a):
            ratio = Fraction(row[-1], a) if ar.exact else row[-1] / a
            if (best_r is None or ratio < best_ratio
                    or (ratio == best_ratio and tab.basis[i] < tab.basis[best_r])):
                best_r, best_ratio = i, ratio
    return best_r


# consecutive degenerate pivots tolerated before switching to Bland's rule
_BLAND_AFTER = {True: 20, False: 50}


def _optimize(tab: _Tableau, o: int, allowed: Sequence[int]) -> Status:
    """Price until optimal or unbounded.

    Steepest reduced cost (exact) or partial pricing (float) is used until
    a run of degenerate pivots, then Bland's rule until the next strictly
    improving pivot; every degenerate run therefore terminates and the
    objective strictly decreases between runs, so the method cannot cycle.
    Exact reduced costs share one positive row denominator, so comparing
    numerators is enough.
    """
    ar = tab.ar
    pricer = None if ar.exact else _PartialPricer(allowed)
    degenerate_run = 0
    bland_after = _BLAND_AFTER[ar.exact]
    while True:
        d = tab.obj[o]
        if degenerate_run >= bland_after:
            c = _entering_bland(d, allowed, ar)
        elif pricer is None:
            c = _entering_dantzig(d, allowed, ar)
        else:
            c = pricer(d, ar)
        if c is None:
            return Status.OPTIMAL
        r = _leaving(tab, c)
        if r is None:
            return Status.UNBOUNDED
        degenerate_run = 0 if tab.rhs_positive(r) else degenerate_run + 1
        tab.pivot(r, c)


def _standard_form_solve(A, b, costs, basis_hint, ar: _Arith):
    """``min costs.z  s.t.  A z = b, z >= 0`` with ``b >= 0``.

    ``basis_hint[i]`` is a column that is the i-th unit vector, or None
    when row ``i`` needs an artificial.  Returns (status, tableau, objective
    row index, number of structural columns).
    """
    nrows = len(A)
    ncols = len(costs)
    need_art = [i for i in range(nrows) if basis_hint[i] is None]
    art_col = {i: ncols + t for t, i in enumerate(need_art)}
    one, zero = ar.conv(1), ar.zero
    rows = []
    for i in range(nrows):
        row = list(A[i]) + [zero] * len(need_art) + [b[i]]
        if i in art_col:
            row[art_col[i]] = one
        rows.append(row)
    tab = _Tableau(rows, ar)
    for i in range(nrows):
        tab.basis[i] = basis_hint[i] if basis_hint[i] is not None else art_col[i]

    o2 = tab.add_objective(list(costs) + [zero] * len(need_art))
    structural = list(range(ncols))
    if need_art:
        o1 = tab.add_objective([zero] * ncols + [one] * len(need_art))
        status = _optimize(tab, o1, list(range(ncols + len(need_art))))
        if status is not Status.OPTIMAL:
            raise SolverError("phase 1 cannot be unbounded")
        if ar.pos(tab.objective_value(o1)):
            return Status.INFEASIBLE, tab, o2, ncols
        # drive artificials out of the basis; rows with nothing to pivot on are redundant
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= ncols:
                row = tab.rows[i]
                c = next((j for j in structural if abs(row[j]) > ar.tol), None)
                if c is None:
                    tab.drop_row(i)
                    continue
                tab.pivot(i, c)
            i += 1
        tab.drop_objective(o1)
    status = _optimize(tab, o2, structural)
    return status, tab, o2, ncols


def _primal_values(tab: _Tableau, ncols: int, ar: _Arith) -> list:
    z = [ar.zero] * ncols
    for i, j in enumerate(tab.basis):
        if j < ncols:
            z[j] = tab.rhs_value(i)
    return z


# --------------------------------------------------------------------------
# routes


def _ge_form(lp: LinearProgram, ar: _Arith):
    G, h = [], []
    for row in lp.constraints:
        coeffs = [ar.conv(c) for c in row.coeffs]
        rhs = ar.conv(row.rhs)
        if row.relation in (Relation.GE, Relation.EQ):
            G.append(coeffs)
            h.append(rhs)
        if row.relation in (Relation.LE, Relation.EQ):
            G.append([-c for c in coeffs])
            h.append(-rhs)
    return G, h


def _solve_primal(lp: LinearProgram, ar: _Arith):
    nvar = len(lp.variables)
    rows_spec = []
    for row in lp.constraints:
        coeffs = [ar.conv(c) for c in row.coeffs]
        rhs = ar.conv(row.rhs)
        if row.relation is Relation.EQ:
            slack = None
        else:
            slack = -1 if row.relation is Relation.GE else 1
        rows_spec.append((coeffs, slack, rhs))
    nslack = sum(1 for _, s, _ in rows_spec if s is not None)
    A, b, hint = [], [], []
    col = nvar
    for coeffs, slack, rhs in rows_spec:
        row = coeffs + [ar.zero] * nslack
        this_slack = None
        if slack is not None:
            row[col] = ar.conv(slack)
            this_slack = col
            col += 1
        if rhs < 0 or (rhs == 0 and slack == -1):
            row = [-v for v in row]
            rhs = -rhs
        A.append(row)
        b.append(rhs)
        if this_slack is not None and row[this_slack] == 1:
            hint.append(this_slack)
        else:
            hint.append(None)
    costs = [ar.conv(c) for c in lp.objective] + [ar.zero] * nslack
    status, tab, o, ncols = _standard_form_solve(A, b, costs, hint, ar)
    if status is not Status.OPTIMAL:
        return status, None, tab.iterations
    z = _primal_values(tab, ncols, ar)
    return status, z[:nvar], tab.iterations


def _solve_dual(lp: LinearProgram, ar: _Arith):
    G, h = _ge_form(lp, ar)
    c = [ar.conv(v) for v in lp.objective]
    nvar, ncon = len(c), len(G)
    iterations = 0

    def dual_system(costs):
        A, b, hint = [], [], []
        for i in range(nvar):
            row = [G[r][i] for r in range(ncon)] + [ar.zero] * nvar
            row[ncon + i] = ar.conv(1)
            rhs = costs[i]
            if rhs < 0:
                row = [-v for v in row]
                rhs = -rhs
                hint.append(None)
            else:
                hint.append(ncon + i)
            A.append(row)
            b.append(rhs)
        return A, b, hint

    dual_costs = [-v for v in h] + [ar.zero] * nvar
    A, b, hint = dual_system(c)
    status, tab, o, _ = _standard_form_solve(A, b, dual_costs, hint, ar)
    iterations += tab.iterations
    if status is Status.UNBOUNDED:
        return Status.INFEASIBLE, None, iterations
    if status is Status.INFEASIBLE:
        # Farkas probe: the primal is infeasible iff the zero-cost dual is unbounded
        A0, b0, hint0 = dual_system([ar.zero] * nvar)
        probe, tab0, _, _ = _standard_form_solve(A0, b0, dual_costs, hint0, ar)
        iterations += tab0.iterations
        return (Status.INFEASIBLE if probe is Status.UNBOUNDED else Status.UNBOUNDED), None, iterations
    x = [tab.reduced_cost(o, ncon + i) for i in range(nvar)]
    if ar.exact:
        # strong duality: c.x must equal the dual optimum h.y
        if sum(ci * xi for ci, xi in zip(c, x)) != -tab.objective_value(o):
            raise SolverError("dual certificate mismatch")
    else:
        x = [max(v, 0.0) for v in x]
    return Status.OPTIMAL, x, iterations


def _verify(lp: LinearProgram, x, ar: _Arith) -> None:
    for v, name in zip(x, lp.variables):
        if ar.neg(v):
            raise SolverError(f"post-solve check: {name} = {v} is negative")
    for row in lp.constraints:
        lhs = sum((ar.conv(c) * xi for c, xi in zip(row.coeffs, x) if c), ar.zero)
        rhs = ar.conv(row.rhs)
        slack = lhs - rhs
        tol = 0 if ar.exact else 1e3 * FLOAT_TOL * max(1.0, abs(rhs), abs(lhs))
        ok = {
            Relation.GE: slack >= -tol,
            Relation.LE: slack <= tol,
            Relation.EQ: abs(slack) <= tol,
        }[row.relation]
        if not ok:
            raise SolverError(f"post-solve check failed on {row.label or row} (slack {slack})")


def solve(lp: LinearProgram, arithmetic: str = "exact", method: str = "auto") -> LpSolution:
    """Solve ``lp``; ``arithmetic`` is ``"exact"`` or ``"float"``.

    ``method`` picks the standard form: ``"primal"``, ``"dual"``, or
    ``"auto"`` (dual when rows outnumber variables).
    """
    if arithmetic not in ("exact", "float"):
        raise ValueError(f"unknown arithmetic mode {arithmetic!r}")
    ar = _Arith(arithmetic == "exact")
    if method == "auto":
        method = "dual" if len(lp.constraints) > len(lp.variables) else "primal"
    if method == "primal":
        status, x, iters = _solve_primal(lp, ar)
    elif method == "dual":
        status, x, iters = _solve_dual(lp, ar)
    else:
        raise ValueError(f"unknown method {method!r}")
    if status is not Status.OPTIMAL:
        return LpSolution(status, {}, None, iters)
    _verify(lp, x, ar)
    assignment = dict(zip(lp.variables, x))
    value = sum((ar.conv(c) * xi for c, xi in zip(lp.objective, x)), ar.zero) + ar.conv(lp.objective_constant)
    return LpSolution(Status.OPTIMAL, assignment, value, iters)
