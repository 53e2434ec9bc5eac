"""Finite boolean algebras represented by their surviving worlds.

An :class:`EventAlgebra` is the set of worlds of a variable universe that
satisfy an optional background constraint.  Events are subsets of those
worlds, stored as integer bitsets over world *positions* (position ``i`` is
the ``i``-th surviving world in enumeration order).  States are exact
rational mass vectors over the same positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .formula import (
    DEFAULT_WORLD_CAP,
    Formula,
    FormulaError,
    World,
    check_universe,
    parse,
    truth_table,
    variables,
    UnknownVariable,
)

__all__ = [
    "AlgebraMismatch",
    "EmptyAlgebra",
    "Event",
    "EventAlgebra",
    "StateVector",
    "build_algebra",
    "complement",
    "event_of",
    "join",
    "meet",
    "state_value",
]


class EmptyAlgebra(FormulaError):
    """The background constraint is unsatisfiable: no world survives."""


class AlgebraMismatch(ValueError):
    pass


def _bit_positions(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True, eq=False)
class EventAlgebra:
    universe: tuple[str, ...]
    constraint: Formula | None
    world_mask: int  # bitset over full enumeration indices of surviving worlds
    indices: tuple[int, ...] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventAlgebra):
            return NotImplemented
        return self is other or (
            self.universe == other.universe and self.world_mask == other.world_mask
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.world_mask))

    @property
    def size(self) -> int:
        return len(self.indices)

    @property
    def free(self) -> bool:
        return self.size == 1 << len(self.universe)

    @property
    def worlds(self) -> list[World]:
        return [World.from_index(self.universe, i) for i in self.indices]

    def world(self, position: int) -> World:
        return World.from_index(self.universe, self.indices[position])

    def position(self, world: World) -> int:
        """Position of ``world`` among the survivors (ValueError if deleted)."""
        if world.universe != self.universe:
            raise AlgebraMismatch("world is over a different universe")
        idx = world.index
        if not (self.world_mask >> idx) & 1:
            raise ValueError(f"world {world.label()} does not survive the constraint")
        if self.free:
            return idx
        # survivors below idx
        return (self.world_mask & ((1 << idx) - 1)).bit_count()

    def _compress(self, full_mask: int) -> int:
        if self.free:
            return full_mask
        out = 0
        for pos in range(len(self.indices)):
            if (full_mask >> self.indices[pos]) & 1:
                out |= 1 << pos
        return out

    # events -------------------------------------------------------------

    @property
    def top(self) -> "Event":
        return Event(self, (1 << self.size) - 1)

    @property
    def bottom(self) -> "Event":
        return Event(self, 0)

    def event(self, f: Formula | str) -> "Event":
        return event_of(self, f)

    def atom(self, position: int) -> "Event":
        return Event(self, 1 << position)

    def atoms(self) -> list["Event"]:
        return [self.atom(i) for i in range(self.size)]

    def event_from_positions(self, positions: Iterable[int]) -> "Event":
        mask = 0
        for p in positions:
            if not 0 <= p < self.size:
                raise IndexError(f"world position {p} out of range")
            mask |= 1 << p
        return Event(self, mask)

    def embed(self, event: "Event", larger: "EventAlgebra") -> "Event":
        """Re-interpret ``event`` in an algebra over a superset universe.

        A world of ``larger`` belongs to the image iff its projection onto
        this universe is a member of ``event``.
        """
        event._check(self)
        missing = set(self.universe) - set(larger.universe)
        if missing:
            raise AlgebraMismatch(f"larger universe lacks {sorted(missing)}")
        where = [larger.universe.index(v) for v in self.universe]
        n_big = len(larger.universe)
        members = 0
        for pos, big_idx in enumerate(larger.indices):
            small_idx = 0
            for p in where:
                small_idx = (small_idx << 1) | ((big_idx >> (n_big - 1 - p)) & 1)
            if (self.world_mask >> small_idx) & 1:
                small_pos = small_idx if self.free else (
                    self.world_mask & ((1 << small_idx) - 1)
                ).bit_count()
                if (event.members >> small_pos) & 1:
                    members |= 1 << pos
        return Event(larger, members)


def build_algebra(
    universe: Sequence[str],
    constraint: Formula | str | None = None,
    cap: int = DEFAULT_WORLD_CAP,
) -> EventAlgebra:
    universe = check_universe(universe, cap)
    if isinstance(constraint, str):
        constraint = parse(constraint, universe)
    if constraint is None:
        mask = (1 << (1 << len(universe))) - 1
        indices = tuple(range(1 << len(universe)))
    else:
        mask = truth_table(constraint, universe, cap)
        if mask == 0:
            raise EmptyAlgebra("constraint is unsatisfiable: no world survives")
        indices = tuple(_bit_positions(mask))
    return EventAlgebra(universe, constraint, mask, indices)


@dataclass(frozen=True)
class Event:
    algebra: EventAlgebra = field(repr=False)
    members: int

    def __post_init__(self) -> None:
        if self.members < 0 or self.members >> self.algebra.size:
            raise IndexError("membership refers to a world outside the algebra")

    def _check(self, algebra: EventAlgebra) -> None:
        if self.algebra is not algebra and self.algebra != algebra:
            raise AlgebraMismatch("events belong to different algebras")

    def __and__(self, other: "Event") -> "Event":
        other._check(self.algebra)
        return Event(self.algebra, self.members & other.members)

    def __or__(self, other: "Event") -> "Event":
        other._check(self.algebra)
        return Event(self.algebra, self.members | other.members)

    def __invert__(self) -> "Event":
        return Event(self.algebra, self.algebra.top.members ^ self.members)

    def __le__(self, other: "Event") -> bool:
        other._check(self.algebra)
        return self.members & ~other.members == 0

    def __len__(self) -> int:
        return self.members.bit_count()

    def __contains__(self, world: World) -> bool:
        try:
            pos = self.algebra.position(world)
        except ValueError:
            return False
        return bool((self.members >> pos) & 1)

    @property
    def positions(self) -> list[int]:
        return _bit_positions(self.members)

    @property
    def worlds(self) -> list[World]:
        return [self.algebra.world(p) for p in self.positions]

    def indicator(self) -> tuple[int, ...]:
        return tuple((self.members >> i) & 1 for i in range(self.algebra.size))

    @property
    def is_empty(self) -> bool:
        return self.members == 0


def event_of(algebra: EventAlgebra, f: Formula | str) -> Event:
    if isinstance(f, str):
        f = parse(f, algebra.universe)
    unknown = variables(f) - set(algebra.universe)
    if unknown:
        raise UnknownVariable(sorted(unknown)[0])
    full = truth_table(f, algebra.universe, cap=len(algebra.universe))
    return Event(algebra, algebra._compress(full))


def meet(*events: Event) -> Event:
    if not events:
        raise ValueError("meet of no events")
    out = events[0]
    for e in events[1:]:
        out = out & e
    return out


def join(*events: Event) -> Event:
    if not events:
        raise ValueError("join of no events")
    out = events[0]
    for e in events[1:]:
        out = out | e
    return out


def complement(e: Event) -> Event:
    return ~e


@dataclass(frozen=True)
class StateVector:
    """Exact probability masses on the worlds of an algebra."""

    algebra: EventAlgebra = field(repr=False)
    masses: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        masses = tuple(Fraction(m) for m in self.masses)
        object.__setattr__(self, "masses", masses)
        if len(masses) != self.algebra.size:
            raise ValueError(
                f"expected {self.algebra.size} masses, got {len(masses)}"
            )
        if any(m < 0 for m in masses):
            raise ValueError("state masses must be nonnegative")
        if sum(masses) != 1:
            raise ValueError(f"state masses sum to {sum(masses)}, not 1")

    @classmethod
    def point_mass(cls, algebra: EventAlgebra, world: World | int) -> "StateVector":
        pos = world if isinstance(world, int) else algebra.position(world)
        masses = [Fraction(0)] * algebra.size
        masses[pos] = Fraction(1)
        return cls(algebra, tuple(masses))

    @classmethod
    def uniform(cls, algebra: EventAlgebra) -> "StateVector":
        return cls(algebra, (Fraction(1, algebra.size),) * algebra.size)

    def value(self, event: Event) -> Fraction:
        event._check(self.algebra)
        return sum((self.masses[p] for p in event.positions), Fraction(0))

    __call__ = value


def state_value(s: StateVector, e: Event) -> Fraction:
    return s.value(e)
