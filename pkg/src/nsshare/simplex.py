"""Dense two-phase simplex for the small linear programs this project needs.

Solves   minimize c.x   s.t.   A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0.

Everything is kept in a single canonical tableau.  Entering columns follow
Dantzig's rule until the objective stalls, then Bland's rule (which cannot
cycle) takes over; the ratio test breaks ties on the smallest basis index.
Problem sizes here are a few hundred columns, so clarity beats sparsity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-10
REDUCED_COST_TOL = 1e-10
STALL_LIMIT = 80


@dataclass
class LpResult:
    status: str            # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray          # original variables at termination
    objective: float       # c.x at termination
    infeasibility: float   # phase-1 optimum; ~0 whenever a feasible basis exists
    iterations: int


def _run_phase(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray,
               allowed: np.ndarray, max_iterations: int) -> tuple[str, int]:
    """Pivot until optimal or unbounded; returns (status, iterations used)."""
    m = tableau.shape[0]
    iterations = 0
    bland = False
    best_objective = np.inf
    stall = 0
    while iterations < max_iterations:
        reduced = cost - cost[basis] @ tableau[:, :-1]
        candidates = np.where(allowed & (reduced < -REDUCED_COST_TOL))[0]
        if candidates.size == 0:
            return "optimal", iterations
        if bland:
            enter = int(candidates[0])
        else:
            enter = int(candidates[np.argmin(reduced[candidates])])

        column = tableau[:, enter]
        rows = np.where(column > PIVOT_TOL)[0]
        if rows.size == 0:
            return "unbounded", iterations
        ratios = tableau[rows, -1] / column[rows]
        best = np.min(ratios)
        ties = rows[ratios <= best + 1e-12]
        leave = int(ties[np.argmin(basis[ties])])

        pivot = tableau[leave, enter]
        tableau[leave] /= pivot
        scale = tableau[:, enter].copy()
        scale[leave] = 0.0
        tableau -= np.outer(scale, tableau[leave])
        tableau[:, enter] = 0.0
        tableau[leave, enter] = 1.0
        np.maximum(tableau[:, -1], 0.0, out=tableau[:, -1])
        basis[leave] = enter
        iterations += 1

        objective = float(cost[basis] @ tableau[:, -1])
        if objective < best_objective - 1e-12:
            best_objective = objective
            stall = 0
        else:
            stall += 1
            if stall >= STALL_LIMIT:
                bland = True
    raise RuntimeError(f"simplex did not terminate within {max_iterations} iterations")


def solve(c, a_eq=None, b_eq=None, a_ub=None, b_ub=None,
          tol: float = 1e-9, max_iterations: int | None = None) -> LpResult:
    c = np.asarray(c, dtype=float)
    n = c.shape[0]

    blocks = []
    rhs_parts = []
    n_ub = 0
    if a_ub is not None:
        a_ub = np.asarray(a_ub, dtype=float)
        b_ub = np.asarray(b_ub, dtype=float)
        n_ub = a_ub.shape[0]
        blocks.append(a_ub)
        rhs_parts.append(b_ub)
    if a_eq is not None:
        a_eq = np.asarray(a_eq, dtype=float)
        b_eq = np.asarray(b_eq, dtype=float)
        blocks.append(a_eq)
        rhs_parts.append(b_eq)
    if not blocks:
        raise ValueError("at least one of a_eq / a_ub is required")
    a = np.vstack(blocks)
    b = np.concatenate(rhs_parts)
    m = a.shape[0]
    if a.shape[1] != n:
        raise ValueError(f"constraint matrix has {a.shape[1]} columns, c has {n}")

    # slacks for the <= rows, then sign-flip rows to make b >= 0
    full = np.hstack([a, np.zeros((m, n_ub))])
    for i in range(n_ub):
        full[i, n + i] = 1.0
    negative = b < 0
    full[negative] *= -1.0
    b = np.abs(b)

    # artificials wherever the slack cannot start basic
    needs_artificial = np.ones(m, dtype=bool)
    basis = np.empty(m, dtype=int)
    for i in range(n_ub):
        if not negative[i]:
            needs_artificial[i] = False
            basis[i] = n + i
    art_rows = np.where(needs_artificial)[0]
    n_art = art_rows.size
    artificial_block = np.zeros((m, n_art))
    for j, i in enumerate(art_rows):
        artificial_block[i, j] = 1.0
        basis[i] = n + n_ub + j
    tableau = np.hstack([full, artificial_block, b[:, None]])
    n_cols = n + n_ub + n_art
    art_mask = np.zeros(n_cols, dtype=bool)
    art_mask[n + n_ub:] = True

    if max_iterations is None:
        max_iterations = 200 + 40 * (m + n_cols)

    # phase 1: drive the total artificial mass to zero
    phase1_cost = np.zeros(n_cols)
    phase1_cost[art_mask] = 1.0
    allowed = ~art_mask  # artificials only leave, never re-enter
    status, used = _run_phase(tableau, basis, phase1_cost, allowed, max_iterations)
    if status != "optimal":  # cannot happen: phase-1 objective is bounded below
        raise RuntimeError(f"phase 1 ended with status {status!r}")
    infeasibility = float(phase1_cost[basis] @ tableau[:, -1])

    x = np.zeros(n_cols)
    x[basis] = tableau[:, -1]
    if infeasibility > tol:
        return LpResult("infeasible", x[:n], float(c @ x[:n]), infeasibility, used)

    # pivot any leftover artificials out of the basis; drop redundant rows
    drop_rows = []
    for i in range(m):
        if not art_mask[basis[i]]:
            continue
        row = tableau[i, :-1]
        pivots = np.where((~art_mask) & (np.abs(row) > PIVOT_TOL))[0]
        if pivots.size == 0:
            drop_rows.append(i)
            continue
        enter = int(pivots[0])
        pivot = tableau[i, enter]
        tableau[i] /= pivot
        scale = tableau[:, enter].copy()
        scale[i] = 0.0
        tableau -= np.outer(scale, tableau[i])
        tableau[:, enter] = 0.0
        tableau[i, enter] = 1.0
        basis[i] = enter
    if drop_rows:
        keep = np.setdiff1d(np.arange(m), drop_rows)
        tableau = tableau[keep]
        basis = basis[keep]

    phase2_cost = np.zeros(n_cols)
    phase2_cost[:n] = c
    status, used2 = _run_phase(tableau, basis, phase2_cost, allowed, max_iterations)
    x = np.zeros(n_cols)
    x[basis] = tableau[:, -1]
    return LpResult(status, x[:n], float(c @ x[:n]), infeasibility, used + used2)
