"""Packing linear programs: maximize sum(x) s.t. A x <= 1, x >= 0, A a 0/1 matrix.

The exact solver is a dense tableau simplex over ``fractions.Fraction`` with
Bland's smallest-index rule, so it terminates, is deterministic, and never
touches floating point. Since ``x = 0`` is feasible the slack basis is a
valid starting point and no phase 1 is needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ParameterError, SolverError

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PackingLP:
    num_vars: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        covered = set()
        for r, row in enumerate(self.rows):
            if list(row) != sorted(set(row)):
                raise ParameterError(f"row {r} is not sorted and duplicate-free")
            for j in row:
                if not 0 <= j < self.num_vars:
                    raise ParameterError(f"row {r} references variable {j} >= {self.num_vars}")
            covered.update(row)
        if len(covered) != self.num_vars:
            missing = min(set(range(self.num_vars)) - covered)
            raise ParameterError(f"variable {missing} appears in no row")

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def columns(self) -> list[list[int]]:
        cols: list[list[int]] = [[] for _ in range(self.num_vars)]
        for r, row in enumerate(self.rows):
            for j in row:
                cols[j].append(r)
        return cols


@dataclass
class LPSolution:
    value: Fraction | float
    assignment: list
    status: str = "optimal"
    duals: list | None = None
    pivots: int = 0
    exact: bool = True


@dataclass
class CheckReport:
    valid: bool
    value: Fraction | float
    violations: list[str] = field(default_factory=list)


def solve_exact(lp: PackingLP) -> LPSolution:
    n, rows = lp.num_vars, lp.rows
    live = [r for r, row in enumerate(rows) if row]
    m = len(live)
    width = n + m
    # tableau rows: coefficients over [structural | slack], then rhs
    tab = []
    for i, r in enumerate(live):
        row = [ZERO] * (width + 1)
        for j in rows[r]:
            row[j] = ONE
        row[n + i] = ONE
        row[width] = ONE
        tab.append(row)
    cost = [ONE] * n + [ZERO] * m + [ZERO]  # reduced costs; last entry is -objective
    basis = [n + i for i in range(m)]
    pivots = 0

    while True:
        enter = next((j for j in range(width) if cost[j] > 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise SolverError("packing LP reported unbounded")
        prow = tab[leave]
        piv = prow[enter]
        if piv != 1:
            prow[:] = [x / piv for x in prow]
        nz = [j for j in range(width + 1) if prow[j]]
        for i in range(m):
            if i == leave:
                continue
            f = tab[i][enter]
            if f:
                row = tab[i]
                for j in nz:
                    row[j] -= f * prow[j]
        f = cost[enter]
        for j in nz:
            cost[j] -= f * prow[j]
        basis[leave] = enter
        pivots += 1

    x = [ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][width]
    duals = [ZERO] * len(rows)
    for i, r in enumerate(live):
        duals[r] = -cost[n + i]
    sol = LPSolution(value=sum(x, ZERO), assignment=x, duals=duals, pivots=pivots)
    problems = certify_optimal(lp, sol)
    if problems:
        sol.status = "infeasible-internal-error"
        raise SolverError("exact simplex failed its own optimality certificate: " + "; ".join(problems[:3]))
    return sol


def certify_optimal(lp: PackingLP, sol: LPSolution) -> list[str]:
    """Check the dual certificate carried by ``sol``; returns the list of problems."""
    problems = []
    y = sol.duals
    if y is None or len(y) != lp.num_rows:
        return ["solution carries no dual prices"]
    problems += [f"negative dual on row {r}" for r, v in enumerate(y) if v < 0]
    for j, col in enumerate(lp.columns()):
        s = sum((y[r] for r in col), ZERO)
        if s < 1:
            problems.append(f"variable {j} has covering price {s} < 1")
        elif sol.assignment[j] > 0 and s != 1:
            problems.append(f"variable {j} positive but reduced cost nonzero")
    for r, row in enumerate(lp.rows):
        if y[r] > 0 and sum((sol.assignment[j] for j in row), ZERO) != 1:
            problems.append(f"row {r} priced but not tight")
    if sum(y, ZERO) != sol.value:
        problems.append(f"dual value {sum(y, ZERO)} differs from primal {sol.value}")
    return problems


def solve_float(lp: PackingLP, tol: float = 1e-9) -> LPSolution:
    from scipy.optimize import linprog
    from scipy.sparse import csr_matrix

    if tol <= 0:
        raise ParameterError("tolerance must be positive")
    n = lp.num_vars
    if n == 0:
        return LPSolution(value=0.0, assignment=[], exact=False)
    data, ri, ci = [], [], []
    for r, row in enumerate(lp.rows):
        for j in row:
            ri.append(r)
            ci.append(j)
            data.append(1.0)
    a = csr_matrix((data, (ri, ci)), shape=(lp.num_rows, n))
    cap = 50 * (n + lp.num_rows)
    res = linprog(
        -np.ones(n), A_ub=a, b_ub=np.ones(lp.num_rows), bounds=(0, None),
        method="highs-ds",
        options={"maxiter": cap, "primal_feasibility_tolerance": min(tol, 1e-7) / 10,
                 "dual_feasibility_tolerance": min(tol, 1e-7) / 10},
    )
    if res.status == 1:
        raise SolverError(f"float simplex hit the iteration cap ({cap})")
    if res.status != 0:
        raise SolverError(f"float simplex failed: {res.message}")
    x = [float(v) for v in res.x]
    duals = [float(-v) for v in res.ineqlin.marginals]
    return LPSolution(value=float(sum(x)), assignment=x, duals=duals,
                      pivots=int(res.nit), exact=False)


def check_solution(lp: PackingLP, sol: LPSolution, tol: float = 0.0) -> CheckReport:
    x: Sequence = sol.assignment
    if len(x) != lp.num_vars:
        raise ParameterError(f"solution has {len(x)} values for {lp.num_vars} variables")
    exact = all(isinstance(v, (int, Fraction)) for v in x) and isinstance(sol.value, (int, Fraction))
    if exact:
        tol = 0
    zero = ZERO if exact else 0.0
    bad = []
    for j, v in enumerate(x):
        if v < -tol or v > 1 + tol:
            bad.append(f"variable {j} = {v} outside [0, 1]")
    for r, row in enumerate(lp.rows):
        s = sum((x[j] for j in row), zero)
        if s > 1 + tol:
            bad.append(f"row {r} sums to {s} > 1")
    total = sum(x, zero)
    if (total != sol.value) if exact else abs(total - sol.value) > tol * max(1, lp.num_vars):
        bad.append(f"reported value {sol.value} but assignment sums to {total}")
    return CheckReport(valid=not bad, value=total, violations=bad)


def lp_format(lp: PackingLP, names: Sequence[str] | None = None) -> str:
    """CPLEX-style LP text for cross-checking with external solvers."""
    names = list(names) if names is not None else [f"x{j}" for j in range(lp.num_vars)]
    out = ["\\ packing LP: maximize total weight subject to per-edge load <= 1", "Maximize"]
    out.append(" obj: " + (" + ".join(names) if names else "0 x0"))
    out.append("Subject To")
    for r, row in enumerate(lp.rows):
        if row:
            out.append(f" r{r}: " + " + ".join(names[j] for j in row) + " <= 1")
    out.append("Bounds")
    out += [f" 0 <= {nm}" for nm in names]
    out.append("End")
    return "\n".join(out) + "\n"
