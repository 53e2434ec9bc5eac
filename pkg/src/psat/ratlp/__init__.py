"""Exact rational linear programming with checkable certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from ._backend import BACKEND
from .model import (
    EQ,
    GE,
    LE,
    Constraint,
    Feasible,
    Infeasible,
    LinearProgram,
    LpOutcome,
    Optimal,
    Unbounded,
    dot,
    verify,
)
from .simplex import DEFAULT_MAX_PIVOTS, PivotLimitExceeded, solve

__all__ = [
    "BACKEND",
    "DEFAULT_MAX_PIVOTS",
    "EQ",
    "GE",
    "LE",
    "Constraint",
    "Feasible",
    "Infeasible",
    "LinearProgram",
    "LpOutcome",
    "NegativeImage",
    "NullCombination",
    "Optimal",
    "PivotLimitExceeded",
    "Unbounded",
    "dot",
    "gordan",
    "matvec",
    "solve",
    "verify",
    "verify_gordan",
]

Matrix = Sequence[Sequence[Fraction]]


def matvec(M: Matrix, s: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(dot(row, s) for row in M)


def vecmat(u: Sequence[Fraction], M: Matrix) -> tuple[Fraction, ...]:
    m = len(M[0])
    return tuple(
        sum((u[i] * M[i][j] for i in range(len(M)) if u[i]), Fraction(0))
        for j in range(m)
    )


@dataclass(frozen=True)
class NegativeImage:
    """First alternative: ``M s <= -1`` in every coordinate."""

    s: tuple[Fraction, ...]
    image: tuple[Fraction, ...]


@dataclass(frozen=True)
class NullCombination:
    """Second alternative: ``u >= 0``, ``sum(u) == 1`` and ``u^T M == 0``."""

    u: tuple[Fraction, ...]


GordanResult = Union[NegativeImage, NullCombination]


def _stake_program(M: Matrix) -> LinearProgram:
    # variables: s_1..s_m (free), then a_1..a_m >= 0 with a_j >= |s_j|
    n, m = len(M), len(M[0])
    zero = [Fraction(0)] * m
    rows = []
    for i in range(n):
        rows.append((list(M[i]) + zero, LE, -1))
    for j in range(m):
        unit = [Fraction(int(k == j)) for k in range(m)]
        rows.append(([-v for v in unit] + unit, ">=", 0))
        rows.append((unit + unit, ">=", 0))
    lower = [None] * m + [0] * m
    return LinearProgram.build(
        2 * m, rows, objective=[0] * m + [1] * m, sense="min", lower=lower
    )


def gordan(M: Matrix, max_pivots: int = DEFAULT_MAX_PIVOTS) -> GordanResult:
    """Decide which alternative of Gordan's theorem holds for ``M`` (n x m).

    Returns :class:`NegativeImage` with the stake vector of least absolute
    sum among those with ``M s <= -1`` (so the largest coordinate of ``M s``
    is exactly -1), or :class:`NullCombination` with ``u`` taken from the
    Farkas multipliers of that program and scaled to sum 1.
    """
    M = [tuple(Fraction(v) for v in row) for row in M]
    if not M or not M[0]:
        raise ValueError("gordan needs a nonempty matrix")
    if any(len(row) != len(M[0]) for row in M):
        raise ValueError("ragged matrix")
    n, m = len(M), len(M[0])
    lp = _stake_program(M)
    out = solve(lp, max_pivots=max_pivots)
    if isinstance(out, Optimal):
        s = out.point[:m]
        return NegativeImage(s, matvec(M, s))
    if not isinstance(out, Infeasible):
        raise AssertionError(f"unexpected outcome {out.status} for stake program")
    y = out.farkas[:n]
    total = sum(y, Fraction(0))
    return NullCombination(tuple(v / total for v in y))


def verify_gordan(M: Matrix, result: GordanResult) -> bool:
    M = [tuple(Fraction(v) for v in row) for row in M]
    if isinstance(result, NegativeImage):
        image = matvec(M, result.s)
        return image == tuple(result.image) and all(v <= -1 for v in image)
    if isinstance(result, NullCombination):
        u = result.u
        return (
            len(u) == len(M)
            and all(v >= 0 for v in u)
            and sum(u) == 1
            and all(v == 0 for v in vecmat(u, M))
        )
    return False
