"""Linear programs over the rationals, their outcomes, and certificate checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[Fraction, int, str]

LE, EQ, GE = "<=", "=", ">="
RELATIONS = (LE, EQ, GE)
SENSES = ("min", "max", "feasibility")


def _q(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        lhs = dot(self.coeffs, x)
        if self.relation == LE:
            return lhs <= self.rhs
        if self.relation == GE:
            return lhs >= self.rhs
        return lhs == self.rhs

    def as_ge(self) -> tuple[tuple[Fraction, ...], Fraction, bool]:
        """Return ``(coeffs, rhs, is_equality)`` in ``>=`` orientation."""
        if self.relation == LE:
            return tuple(-a for a in self.coeffs), -self.rhs, False
        return self.coeffs, self.rhs, self.relation == EQ


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` the objective over ``n`` variables subject to constraints.

    Variables without a lower bound are free.  ``lower`` and ``upper`` hold
    one optional bound per variable.
    """

    n: int
    constraints: tuple[Constraint, ...] = ()
    objective: tuple[Fraction, ...] | None = None
    sense: str = "feasibility"
    lower: tuple[Fraction | None, ...] | None = None
    upper: tuple[Fraction | None, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a linear program needs at least one variable")
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")
        if self.sense != "feasibility" and self.objective is None:
            raise ValueError("min/max programs need an objective")
        if self.objective is not None and len(self.objective) != self.n:
            raise ValueError("objective length differs from variable count")
        for c in self.constraints:
            if len(c.coeffs) != self.n:
                raise ValueError("constraint length differs from variable count")
            if c.relation not in RELATIONS:
                raise ValueError(f"unknown relation {c.relation!r}")
        for bounds in (self.lower, self.upper):
            if bounds is not None and len(bounds) != self.n:
                raise ValueError("bound vector length differs from variable count")

    @classmethod
    def build(
        cls,
        n: int,
        constraints: Iterable[tuple[Sequence[Rational], str, Rational]] = (),
        objective: Sequence[Rational] | None = None,
        sense: str | None = None,
        lower: Sequence[Rational | None] | Rational | None = None,
        upper: Sequence[Rational | None] | None = None,
    ) -> "LinearProgram":
        """Convenience constructor accepting ints, strings and Fractions.

        A scalar ``lower`` applies to every variable.
        """
        rows = tuple(
            Constraint(tuple(_q(a) for a in coeffs), rel, _q(rhs))
            for coeffs, rel, rhs in constraints
        )
        if sense is None:
            sense = "feasibility" if objective is None else "min"
        obj = None if objective is None else tuple(_q(c) for c in objective)
        if lower is not None and not isinstance(lower, (list, tuple)):
            lower = [lower] * n
        lo = None if lower is None else tuple(None if b is None else _q(b) for b in lower)
        hi = None if upper is None else tuple(None if b is None else _q(b) for b in upper)
        return cls(n, rows, obj, sense, lo, hi)

    def lower_bound(self, j: int) -> Fraction | None:
        return None if self.lower is None else self.lower[j]

    def upper_bound(self, j: int) -> Fraction | None:
        return None if self.upper is None else self.upper[j]

    def rows(self) -> list[tuple[tuple[Fraction, ...], Fraction, bool]]:
        """Every constraint in ``>=`` orientation, bound rows last.

        Certificate multiplier vectors are indexed by this list: the
        constraints in order, then for each variable its lower bound row
        (if any) followed by its upper bound row (if any).
        """
        return list(self._rows)

    @cached_property
    def _rows(self) -> tuple[tuple[tuple[Fraction, ...], Fraction, bool], ...]:
        out = [c.as_ge() for c in self.constraints]
        zero, one, minus = Fraction(0), Fraction(1), Fraction(-1)
        for j in range(self.n):
            lo = self.lower_bound(j)
            if lo is not None:
                out.append((tuple(one if k == j else zero for k in range(self.n)), lo, False))
            hi = self.upper_bound(j)
            if hi is not None:
                out.append((tuple(minus if k == j else zero for k in range(self.n)), -hi, False))
        return tuple(out)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.n:
            return False
        for coeffs, rhs, eq in self.rows():
            lhs = dot(coeffs, x)
            if lhs < rhs or (eq and lhs != rhs):
                return False
        return True


# --------------------------------------------------------------------------
# Outcomes


@dataclass(frozen=True)
class Optimal:
    point: tuple[Fraction, ...]
    value: Fraction
    # multipliers over LinearProgram.rows(); sum y_i a_i = sgn*c, sum y_i b_i = sgn*value
    dual: tuple[Fraction, ...] | None = None
    status = "optimal"


@dataclass(frozen=True)
class Feasible:
    point: tuple[Fraction, ...]
    status = "feasible"


@dataclass(frozen=True)
class Infeasible:
    """Multipliers over ``LinearProgram.rows()`` summing to ``0 >= c > 0``."""

    farkas: tuple[Fraction, ...]
    status = "infeasible"


@dataclass(frozen=True)
class Unbounded:
    point: tuple[Fraction, ...]
    ray: tuple[Fraction, ...]
    status = "unbounded"


LpOutcome = Union[Optimal, Feasible, Infeasible, Unbounded]


def _combination(lp: LinearProgram, y: Sequence[Fraction]):
    rows = lp.rows()
    if len(y) != len(rows):
        return None
    combo = [Fraction(0)] * lp.n
    rhs = Fraction(0)
    for yi, (coeffs, b, eq) in zip(y, rows):
        if not eq and yi < 0:
            return None
        if yi:
            for j, a in enumerate(coeffs):
                if a:
                    combo[j] += yi * a
            rhs += yi * b
    return combo, rhs


def verify(lp: LinearProgram, outcome: LpOutcome) -> bool:
    """Re-check an outcome's certificate with exact arithmetic only."""
    if isinstance(outcome, Feasible):
        return lp.is_feasible_point(outcome.point)

    if isinstance(outcome, Optimal):
        if lp.sense == "feasibility" or not lp.is_feasible_point(outcome.point):
            return False
        assert lp.objective is not None
        if dot(lp.objective, outcome.point) != outcome.value:
            return False
        if outcome.dual is None:
            return True
        res = _combination(lp, outcome.dual)
        if res is None:
            return False
        combo, rhs = res
        sgn = 1 if lp.sense == "min" else -1
        return combo == [sgn * c for c in lp.objective] and rhs == sgn * outcome.value

    if isinstance(outcome, Infeasible):
        res = _combination(lp, outcome.farkas)
        if res is None:
            return False
        combo, rhs = res
        return all(c == 0 for c in combo) and rhs > 0

    if isinstance(outcome, Unbounded):
        if lp.sense == "feasibility" or not lp.is_feasible_point(outcome.point):
            return False
        assert lp.objective is not None
        d = outcome.ray
        if len(d) != lp.n or not any(d):
            return False
        for coeffs, _, eq in lp.rows():
            lhs = dot(coeffs, d)
            if lhs < 0 or (eq and lhs != 0):
                return False
        gain = dot(lp.objective, d)
        return gain > 0 if lp.sense == "max" else gain < 0

    return False
