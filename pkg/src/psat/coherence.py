"""De Finetti coherence of books of probability assessments.

A *book* prices events of a finite algebra.  :func:`assess` decides whether
the prices extend to a state, returning either such a state or a vector of
stakes against which the bookmaker loses at least one unit in every world.
:func:`fundamental_interval` gives the tight range of a query event's
probability over all extending states.

Balances follow the bettor-to-bookmaker orientation: for stakes ``s`` the
bookmaker's balance in world ``i`` is ``sum_j s_j * (beta_j - [i in h_j])``,
i.e. row ``i`` of ``M @ s`` for the payoff matrix ``M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .algebra import Event, EventAlgebra, StateVector, build_algebra
from .formula import Formula, World, parse
from .ratlp import (
    Infeasible,
    LinearProgram,
    NegativeImage,
    Optimal,
    Feasible,
    gordan,
    matvec,
    solve,
)
from .ratlp import verify as verify_lp

__all__ = [
    "Book",
    "CertificateError",
    "Consistent",
    "Inconsistent",
    "PayoffMatrix",
    "ProbInterval",
    "Verdict",
    "ambient_invariance_check",
    "assess",
    "fundamental_interval",
    "integer_stakes",
    "logical_consistency",
    "payoff_matrix",
]


class CertificateError(RuntimeError):
    """A solver result failed exact re-verification (a solver bug)."""


@dataclass(frozen=True)
class Book:
    algebra: EventAlgebra = field(repr=False)
    assessments: tuple[tuple[Event, Fraction], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        norm = []
        for event, beta in self.assessments:
            beta = Fraction(beta)
            if not 0 <= beta <= 1:
                raise ValueError(f"probability {beta} outside [0, 1]")
            event._check(self.algebra)
            norm.append((event, beta))
        object.__setattr__(self, "assessments", tuple(norm))
        if not self.labels:
            labels = tuple(f"h{j + 1}" for j in range(len(norm)))
            object.__setattr__(self, "labels", labels)
        elif len(self.labels) != len(norm):
            raise ValueError("one label per assessment required")

    @classmethod
    def from_formulas(
        cls,
        algebra: EventAlgebra,
        items: Iterable[tuple[Formula | str, Fraction | int | str]],
    ) -> "Book":
        events, labels = [], []
        for f, beta in items:
            if isinstance(f, str):
                f = parse(f, algebra.universe)
            events.append((algebra.event(f), Fraction(beta)))
            labels.append(str(f))
        return cls(algebra, tuple(events), tuple(labels))

    @property
    def events(self) -> list[Event]:
        return [e for e, _ in self.assessments]

    @property
    def prices(self) -> list[Fraction]:
        return [b for _, b in self.assessments]

    def __len__(self) -> int:
        return len(self.assessments)

    def extend(self, event: Event, beta: Fraction | int | str, label: str = "") -> "Book":
        return Book(
            self.algebra,
            self.assessments + ((event, Fraction(beta)),),
            self.labels + (label or f"h{len(self) + 1}",),
        )

    def reproduced_by(self, state: StateVector) -> bool:
        return all(state.value(e) == b for e, b in self.assessments)


@dataclass(frozen=True)
class PayoffMatrix:
    """Rows are worlds, columns are assessments; entry ``beta_j - [w_i in h_j]``."""

    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def balances(self, stakes: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return matvec(self.rows, stakes)


def payoff_matrix(book: Book) -> PayoffMatrix:
    if not len(book):
        raise ValueError("payoff matrix of an empty book")
    rows = []
    for i in range(book.algebra.size):
        rows.append(
            tuple(beta - ((e.members >> i) & 1) for e, beta in book.assessments)
        )
    return PayoffMatrix(tuple(rows))


@dataclass(frozen=True)
class Consistent:
    state: StateVector
    consistent = True


@dataclass(frozen=True)
class Inconsistent:
    """Stakes with every bookmaker balance ``<= -1``; the maximum is exactly -1."""

    stakes: tuple[Fraction, ...]
    balances: tuple[Fraction, ...]
    consistent = False


Verdict = Union[Consistent, Inconsistent]


def _extension_program(
    book: Book, objective: Sequence[Fraction] | None = None, sense: str = "feasibility"
) -> LinearProgram:
    # world masses u_i >= 0, sum u = 1, u . h_j = beta_j
    n = book.algebra.size
    rows = [([1] * n, "=", 1)]
    for e, beta in book.assessments:
        rows.append((list(e.indicator()), "=", beta))
    return LinearProgram.build(n, rows, objective=objective, sense=sense, lower=0)


def _stakes_from_farkas(book: Book, farkas: Sequence[Fraction]) -> tuple[Fraction, ...]:
    # rows: [sum u = 1 (t)], [u.h_j = beta_j (y_j)], [u_i >= 0 (mu_i)] with
    # t + sum_j y_j [i in h_j] + mu_i = 0 and c = t + sum_j y_j beta_j > 0;
    # then (M y)_i = c + mu_i >= c, so s = -y / c loses at least 1 everywhere
    ys = farkas[1 : 1 + len(book)]
    c = farkas[0] + sum((y * b for y, b in zip(ys, book.prices)), Fraction(0))
    return tuple(-y / c for y in ys)


def assess(book: Book) -> Verdict:
    """Decide coherence, returning a verified certificate either way.

    An empty book is trivially consistent (any state extends it).
    """
    algebra = book.algebra
    if not len(book):
        state = StateVector.point_mass(algebra, 0)
        return Consistent(state)

    lp = _extension_program(book)
    out = solve(lp)
    if isinstance(out, Feasible):
        state = StateVector(algebra, out.point)
        if not book.reproduced_by(state):
            raise CertificateError("extending state does not reproduce the book")
        return Consistent(state)

    if not isinstance(out, Infeasible) or not verify_lp(lp, out):
        raise CertificateError("extension program returned an unverifiable outcome")
    M = payoff_matrix(book)
    rough = _stakes_from_farkas(book, out.farkas)
    if not all(v <= -1 for v in M.balances(rough)):
        raise CertificateError("Farkas multipliers do not yield a Dutch book")
    # canonical witness: least total absolute stake among unit-loss books
    canon = gordan(M.rows)
    if not isinstance(canon, NegativeImage):
        raise CertificateError("stake program disagrees with extension program")
    balances = M.balances(canon.s)
    if not all(v <= -1 for v in balances) or max(balances) != -1:
        raise CertificateError("stake vector fails the unit-loss check")
    return Inconsistent(canon.s, balances)


def integer_stakes(stakes: Sequence[Fraction]) -> tuple[int, ...]:
    """Clear denominators by the least common multiple (never shrinks stakes)."""
    lcm = 1
    for s in stakes:
        lcm = lcm * s.denominator // math.gcd(lcm, s.denominator)
    return tuple(int(s * lcm) for s in stakes)


@dataclass(frozen=True)
class ProbInterval:
    """Closed range of a query's probability, or empty for incoherent books.

    ``lo_bound``/``hi_bound`` are dual certificates ``(c, y)``: for every
    world ``i``, ``c + sum_j y_j [i in h_j]`` is ``<=`` (resp. ``>=``) the
    query indicator, and ``c + sum_j y_j beta_j`` equals ``lo`` (resp. ``hi``).
    """

    lo: Fraction | None = None
    hi: Fraction | None = None
    witness_lo: StateVector | None = None
    witness_hi: StateVector | None = None
    lo_bound: tuple[Fraction, tuple[Fraction, ...]] | None = None
    hi_bound: tuple[Fraction, tuple[Fraction, ...]] | None = None
    dutch_book: Inconsistent | None = None

    @property
    def empty(self) -> bool:
        return self.lo is None

    def __contains__(self, q: Fraction) -> bool:
        return not self.empty and self.lo <= q <= self.hi  # type: ignore[operator]


def _bound_from_dual(book: Book, dual: Sequence[Fraction], sign: int):
    # min program duals satisfy c + sum y_j h_j + mu = sign * query
    c = sign * dual[0]
    ys = tuple(sign * y for y in dual[1 : 1 + len(book)])
    return c, ys


def fundamental_interval(book: Book, query: Event) -> ProbInterval:
    query._check(book.algebra)
    verdict = assess(book)
    if isinstance(verdict, Inconsistent):
        return ProbInterval(dutch_book=verdict)
    q = [Fraction(b) for b in query.indicator()]
    ends = []
    for sense in ("min", "max"):
        lp = _extension_program(book, q, sense)
        out = solve(lp)
        if not isinstance(out, Optimal) or not verify_lp(lp, out):
            raise CertificateError(f"{sense} program did not certify an optimum")
        state = StateVector(book.algebra, out.point)
        if not book.reproduced_by(state) or state.value(query) != out.value:
            raise CertificateError("interval witness does not extend the book")
        assert out.dual is not None
        ends.append((out.value, state, _bound_from_dual(book, out.dual, 1 if sense == "min" else -1)))
    (lo, wlo, blo), (hi, whi, bhi) = ends
    return ProbInterval(lo, hi, wlo, whi, blo, bhi)


def check_interval_bound(
    book: Book, query: Event, bound: tuple[Fraction, Sequence[Fraction]], value: Fraction, lower: bool
) -> bool:
    """Re-check a dual bound certificate for one end of an interval."""
    c, ys = bound
    if len(ys) != len(book):
        return False
    for i in range(book.algebra.size):
        combo = c + sum((y for y, e in zip(ys, book.events) if (e.members >> i) & 1), Fraction(0))
        target = (query.members >> i) & 1
        if (lower and combo > target) or (not lower and combo < target):
            return False
    return c + sum((y * b for y, b in zip(ys, book.prices)), Fraction(0)) == value


def logical_consistency(events: Sequence[Event]) -> World | None:
    """A surviving world in which every event occurs, or ``None``."""
    if not events:
        raise ValueError("logical consistency of an empty list")
    common = events[0]
    for e in events[1:]:
        common = common & e
    if common.is_empty:
        return None
    return common.algebra.world(common.positions[0])


def ambient_invariance_check(book: Book, larger_universe: Sequence[str]) -> bool:
    """Compare the verdict with the one in an algebra over more variables.

    The larger algebra keeps the book's background constraint (if any) and
    is otherwise free; each event is re-read through projection onto the
    original variables.
    """
    small = book.algebra
    larger = build_algebra(larger_universe, small.constraint)
    big_book = Book(
        larger,
        tuple((small.embed(e, larger), b) for e, b in book.assessments),
        book.labels,
    )
    return assess(book).consistent == assess(big_book).consistent
