"""Exact optimal transport on small instances via the transportation simplex.

Verification oracle for the Sinkhorn solver: finds a vertex of the
transportation polytope minimizing <T, C>. Classic primal method —
northwest-corner starting basis, tree-structured duals, most-negative-
reduced-cost entering cell, stepping-stone cycle pivot — with a switch to
Bland's rule after a pivot budget as an anti-cycling safeguard. Optimality
is certified through the dual variables before returning.

Only meant for N*M <= 64; larger instances are refused.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeMismatch, TooLarge
from .solver import TransportPlan, as_marginal, _validate_cost

MAX_CELLS = 64
_BLAND_AFTER = 500
_MAX_PIVOTS = 20000


def _northwest_corner(a: np.ndarray, b: np.ndarray):
    """Initial basic feasible solution with exactly n+m-1 basic cells."""
    n, m = a.size, b.size
    X = np.zeros((n, m))
    basis = np.zeros((n, m), dtype=bool)
    a_rem = a.copy()
    b_rem = b.copy()
    i = j = 0
    while True:
        q = min(a_rem[i], b_rem[j])
        X[i, j] = q
        basis[i, j] = True
        a_rem[i] = max(a_rem[i] - q, 0.0)
        b_rem[j] = max(b_rem[j] - q, 0.0)
        if i == n - 1 and j == m - 1:
            break
        # Advance one index per step; ties leave a degenerate zero basic cell.
        if a_rem[i] <= b_rem[j] and i < n - 1:
            i += 1
        elif j < m - 1:
            j += 1
        else:
            i += 1
    return X, basis


def _adjacency(basis: np.ndarray):
    n, m = basis.shape
    row_adj = [[] for _ in range(n)]
    col_adj = [[] for _ in range(m)]
    for i in range(n):
        for j in range(m):
            if basis[i, j]:
                row_adj[i].append(j)
                col_adj[j].append(i)
    return row_adj, col_adj


def _duals(cost: np.ndarray, basis: np.ndarray):
    """Solve u_i + v_j = cost_ij over the basis tree (u_0 anchored at 0)."""
    n, m = basis.shape
    row_adj, col_adj = _adjacency(basis)
    u = np.zeros(n)
    v = np.zeros(m)
    seen_row = np.zeros(n, dtype=bool)
    seen_col = np.zeros(m, dtype=bool)
    seen_row[0] = True
    stack = [(0, True)]
    while stack:
        idx, is_row = stack.pop()
        if is_row:
            for j in row_adj[idx]:
                if not seen_col[j]:
                    v[j] = cost[idx, j] - u[idx]
                    seen_col[j] = True
                    stack.append((j, False))
        else:
            for i in col_adj[idx]:
                if not seen_row[i]:
                    u[i] = cost[i, idx] - v[idx]
                    seen_row[i] = True
                    stack.append((i, True))
    if not (seen_row.all() and seen_col.all()):
        raise RuntimeError("basis lost its spanning-tree structure")
    return u, v


def _cycle(basis: np.ndarray, ei: int, ej: int):
    """Stepping-stone cycle: entering cell plus the tree path joining it.

    Returns the cell list starting at (ei, ej); signs alternate +,-,+,...
    """
    n, m = basis.shape
    row_adj, col_adj = _adjacency(basis)
    # BFS from row node ei to column node ej through basic cells.
    prev_of_col: dict[int, int] = {}
    prev_of_row: dict[int, int] = {ei: -1}
    frontier = [(ei, True)]
    while frontier:
        nxt = []
        for idx, is_row in frontier:
            if is_row:
                for j in row_adj[idx]:
                    if j not in prev_of_col:
                        prev_of_col[j] = idx
                        nxt.append((j, False))
            else:
                for i in col_adj[idx]:
                    if i not in prev_of_row:
                        prev_of_row[i] = idx
                        nxt.append((i, True))
        if ej in prev_of_col:
            break
        frontier = nxt
    if ej not in prev_of_col:
        raise RuntimeError("entering cell has no cycle through the basis tree")
    # Node path ei -> ... -> ej, then its cells in reverse (column-side first).
    path_cells = []
    j = ej
    while True:
        i = prev_of_col[j]
        path_cells.append((i, j))
        pj = prev_of_row[i]
        if pj == -1:
            break
        path_cells.append((i, pj))
        j = pj
    return [(ei, ej)] + path_cells


def _transport_simplex(cost: np.ndarray, a: np.ndarray, b: np.ndarray):
    n, m = cost.shape
    X, basis = _northwest_corner(a, b)
    eps = 1e-11 * max(1.0, float(np.abs(cost).max()))
    pivots = 0
    while True:
        u, v = _duals(cost, basis)
        red = cost - u[:, None] - v[None, :]
        red[basis] = 0.0
        if pivots < _BLAND_AFTER:
            flat = int(np.argmin(red))
            ei, ej = divmod(flat, m)
            if red[ei, ej] >= -eps:
                break
        else:
            cand = np.argwhere(red < -eps)
            if cand.size == 0:
                break
            ei, ej = int(cand[0][0]), int(cand[0][1])
        pivots += 1
        if pivots > _MAX_PIVOTS:
            raise RuntimeError("transportation simplex exceeded its pivot budget")
        cycle = _cycle(basis, ei, ej)
        minus = cycle[1::2]
        leave_k = min(range(len(minus)), key=lambda k: (X[minus[k]], minus[k]))
        theta = X[minus[leave_k]]
        for k, cell in enumerate(cycle):
            if k % 2 == 0:
                X[cell] += theta
            else:
                X[cell] = max(X[cell] - theta, 0.0)
        leaving = minus[leave_k]
        X[leaving] = 0.0
        basis[leaving] = False
        basis[ei, ej] = True
    # Optimality certificate and feasibility check.
    if float(red.min()) < -eps:
        raise RuntimeError("simplex stopped with a negative reduced cost")
    if (
        float(np.abs(X.sum(axis=1) - a).max()) > 1e-9
        or float(np.abs(X.sum(axis=0) - b).max()) > 1e-9
    ):
        raise RuntimeError("simplex produced an infeasible plan")
    return X, pivots


def exact_ot(cost, r, c) -> tuple[TransportPlan, float]:
    """Exact minimizer of <T, cost> over the transportation polytope.

    Returns (plan, objective value). Refuses instances with N*M > 64.
    """
    C = _validate_cost(cost)
    n, m = C.shape
    if n * m > MAX_CELLS:
        raise TooLarge(f"exact solver limited to N*M <= {MAX_CELLS}, got {n}x{m}")
    rv = as_marginal(r, n, "row marginal")
    cv = as_marginal(c, m, "column marginal")

    rows = rv > 0.0
    cols = cv > 0.0
    subC = C[np.ix_(rows, cols)]
    X, pivots = _transport_simplex(subC, rv[rows], cv[cols])

    T = np.zeros((n, m))
    T[np.ix_(rows, cols)] = X
    value = float(np.sum(T * C))
    return TransportPlan(T, True, pivots), value
