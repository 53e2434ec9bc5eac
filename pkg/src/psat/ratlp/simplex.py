"""Two-phase primal simplex with Bland's rule on a fraction-free tableau.

Every outcome carries a certificate expressed over the program's own
constraint rows (see :meth:`LinearProgram.rows`), so it can be checked by
:func:`~psat.ratlp.model.verify` without trusting this module.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ._backend import kernels as _default_kernels
from .model import (
    EQ,
    LE,
    Feasible,
    Infeasible,
    LinearProgram,
    LpOutcome,
    Optimal,
    Unbounded,
)

DEFAULT_MAX_PIVOTS = 10**6


class PivotLimitExceeded(RuntimeError):
    pass


def _lcm_of_denominators(values) -> int:
    m = 1
    for v in values:
        d = v.denominator
        if d != 1:
            m = m * d // math.gcd(m, d)
    return m


class _Tableau:
    """Standard-form image of a LinearProgram.

    Structural columns: one per lower-bounded variable (shifted to start at
    zero), two per free variable (positive and negative part), then one
    surplus per inequality row.  Artificial columns follow, then the RHS.
    """

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        n = lp.n
        # column map: var j -> (p_col, q_col or -1)
        self.var_cols: list[tuple[int, int]] = []
        ncol = 0
        for j in range(n):
            if lp.lower_bound(j) is not None:
                self.var_cols.append((ncol, -1))
                ncol += 1
            else:
                self.var_cols.append((ncol, ncol + 1))
                ncol += 2
        shift = [lp.lower_bound(j) or Fraction(0) for j in range(n)]

        # internal rows: constraints, then upper-bound rows; remember where
        # each lands in lp.rows()
        internal: list[tuple[tuple[Fraction, ...], Fraction, bool, int]] = []
        row_index = 0
        for c in lp.constraints:
            coeffs, rhs, eq = c.as_ge()
            internal.append((coeffs, rhs, eq, row_index))
            row_index += 1
        self.lower_row: dict[int, int] = {}
        for j in range(n):
            if lp.lower_bound(j) is not None:
                self.lower_row[j] = row_index
                row_index += 1
            hi = lp.upper_bound(j)
            if hi is not None:
                unit = tuple(Fraction(-int(k == j)) for k in range(n))
                internal.append((unit, -hi, False, row_index))
                row_index += 1
        self.total_rows = row_index

        m = len(internal)
        n_surplus = sum(1 for r in internal if not r[2])
        self.N = ncol + n_surplus
        self.m = m
        self.rhs = self.N + m
        width = self.rhs + 1

        self.row_origin: list[int] = []
        self.row_factor: list[int] = []  # internal row = factor * (>=-form row)
        T: list[list[int]] = []
        surplus_col = ncol
        for i, (coeffs, rhs, eq, origin) in enumerate(internal):
            b = rhs - sum((a * s for a, s in zip(coeffs, shift) if a and s), Fraction(0))
            dense = [Fraction(0)] * self.N
            for j, a in enumerate(coeffs):
                if a:
                    p, q = self.var_cols[j]
                    dense[p] = a
                    if q >= 0:
                        dense[q] = -a
            if not eq:
                dense[surplus_col] = Fraction(-1)
                surplus_col += 1
            k = _lcm_of_denominators(dense + [b])
            if b < 0:
                k = -k
            row = [int(v * k) for v in dense]
            row.extend(0 for _ in range(m))
            row[self.N + i] = 1
            row.append(int(b * k))
            T.append(row)
            self.row_origin.append(origin)
            self.row_factor.append(k)

        # phase-2 cost row (min form), then phase-1 cost row
        self.cost_scale = 1
        self.sign = 1
        cost_row = [0] * width
        if lp.sense != "feasibility":
            assert lp.objective is not None
            self.sign = 1 if lp.sense == "min" else -1
            c = [self.sign * v for v in lp.objective]
            self.cost_scale = _lcm_of_denominators(c)
            for j, cj in enumerate(c):
                if cj:
                    p, q = self.var_cols[j]
                    cost_row[p] = int(cj * self.cost_scale)
                    if q >= 0:
                        cost_row[q] = -cost_row[p]
        phase1 = [0] * width
        for row in T:
            for j in range(self.N):
                phase1[j] -= row[j]
            phase1[self.rhs] -= row[self.rhs]
        T.append(cost_row)
        T.append(phase1)
        self.T = T
        self.D = 1
        self.basis = [self.N + i for i in range(m)]
        self.shift = shift
        self.pivots = 0

    # ------------------------------------------------------------------

    def run(self, obj: int, max_pivots: int, kernels) -> int:
        """Iterate on cost row ``obj``; return -1 at optimum or the unbounded column."""
        T = self.T
        while True:
            c = kernels.entering(T[obj], self.N)
            if c < 0:
                return -1
            r = kernels.leaving(T, c, self.m, self.rhs, self.basis)
            if r < 0:
                return c
            self.pivot(r, c, max_pivots, kernels)

    def pivot(self, r: int, c: int, max_pivots: int, kernels) -> None:
        if self.pivots >= max_pivots:
            raise PivotLimitExceeded(f"pivot limit {max_pivots} exceeded")
        self.D = kernels.pivot(self.T, r, c, self.D)
        self.basis[r] = c
        self.pivots += 1

    def drive_out_artificials(self, max_pivots: int, kernels) -> None:
        for i in range(self.m):
            if self.basis[i] >= self.N:
                row = self.T[i]
                for j in range(self.N):
                    if row[j] != 0:
                        self.pivot(i, j, max_pivots, kernels)
                        break

    def standard_values(self) -> list[Fraction]:
        z = [Fraction(0)] * self.N
        for i, col in enumerate(self.basis):
            if col < self.N:
                z[col] = Fraction(self.T[i][self.rhs], self.D)
        return z

    def to_original(self, z: list[Fraction], shifted: bool = True) -> tuple[Fraction, ...]:
        x = []
        for j, (p, q) in enumerate(self.var_cols):
            v = z[p] - (z[q] if q >= 0 else 0)
            if shifted:
                v += self.shift[j]
            x.append(v)
        return tuple(x)

    def row_duals(self, obj: int, scale: int, base: int) -> list[Fraction]:
        """Multipliers over ``lp.rows()`` read off the artificial columns.

        The artificial column of internal row i has cost ``base`` in the
        cost row, so its reduced cost is ``base - y'_i``.
        """
        y = [Fraction(0)] * self.total_rows
        cost = self.T[obj]
        for i in range(self.m):
            rc = Fraction(cost[self.N + i], self.D * scale)
            y[self.row_origin[i]] = (base - rc) * self.row_factor[i]
        # lower-bound rows absorb whatever the combination leaves over
        lp = self.lp
        combo = [Fraction(0)] * lp.n
        for yi, (coeffs, _, _) in zip(y, lp.rows()):
            if yi:
                for k, a in enumerate(coeffs):
                    if a:
                        combo[k] += yi * a
        target = [Fraction(0)] * lp.n
        if obj == self.m and lp.objective is not None:
            target = [self.sign * v for v in lp.objective]
        for j, origin in self.lower_row.items():
            y[origin] = target[j] - combo[j]
        return y


def solve(
    lp: LinearProgram,
    max_pivots: int = DEFAULT_MAX_PIVOTS,
    kernels=None,
) -> LpOutcome:
    """Solve ``lp`` exactly.

    Returns :class:`Optimal`, :class:`Feasible` (for feasibility programs),
    :class:`Infeasible` with Farkas multipliers, or :class:`Unbounded` with
    an improving ray.  Raises :class:`PivotLimitExceeded` past the cap.
    """
    kernels = kernels or _default_kernels
    tab = _Tableau(lp)
    cost, phase1 = tab.m, tab.m + 1

    col = tab.run(phase1, max_pivots, kernels)
    assert col < 0, "phase one cannot be unbounded"
    if tab.T[phase1][tab.rhs] != 0:
        return Infeasible(tuple(tab.row_duals(phase1, 1, 1)))

    tab.drive_out_artificials(max_pivots, kernels)
    if lp.sense == "feasibility":
        return Feasible(tab.to_original(tab.standard_values()))

    col = tab.run(cost, max_pivots, kernels)
    point = tab.to_original(tab.standard_values())
    assert lp.objective is not None
    if col >= 0:
        d = [Fraction(0)] * tab.N
        d[col] = Fraction(1)
        for i, b in enumerate(tab.basis):
            if b < tab.N:
                d[b] = Fraction(-tab.T[i][col], tab.D)
        return Unbounded(point, tab.to_original(d, shifted=False))
    value = sum((c * x for c, x in zip(lp.objective, point)), Fraction(0))
    dual = tab.row_duals(cost, tab.cost_scale, 0)
    return Optimal(point, value, tuple(dual))


__all__ = ["DEFAULT_MAX_PIVOTS", "PivotLimitExceeded", "solve", "EQ", "LE"]
