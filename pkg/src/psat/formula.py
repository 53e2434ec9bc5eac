"""Boolean event formulas: parsing, printing, evaluation and truth tables.

Formulas are immutable trees over the connectives ``~``, ``&``, ``|`` and
the constants ``0`` and ``1``.  A *world* is a total 0/1 assignment to an
ordered variable universe; worlds are enumerated in lexicographic order of
their bit tuples, so the world with index ``i`` has the binary digits of
``i`` as its bits (first variable = most significant bit).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

DEFAULT_WORLD_CAP = 20

__all__ = [
    "DEFAULT_WORLD_CAP",
    "And",
    "Const",
    "Formula",
    "FormulaError",
    "Not",
    "Or",
    "ParseError",
    "UniverseTooLarge",
    "UnknownVariable",
    "NotAMiniterm",
    "Var",
    "World",
    "check_universe",
    "enumerate_worlds",
    "equivalent",
    "evaluate",
    "miniterm",
    "miniterm_counts",
    "parse",
    "sum_of_atoms",
    "truth_table",
    "variables",
]


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    """Malformed formula text.  ``position`` is a 0-based character offset."""

    def __init__(self, position: int, message: str, text: str = ""):
        self.position = position
        self.message = message
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariable(FormulaError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown variable {name!r}{where}")


class UniverseTooLarge(FormulaError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"universe has {size} variables, cap is {cap}")


class NotAMiniterm(FormulaError):
    pass


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self) -> None:
        if self.value not in (0, 1):
            raise ValueError(f"constant must be 0 or 1, got {self.value!r}")

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Not:
    child: "Formula"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return to_text(self)


Formula = Union[Var, Const, Not, And, Or]

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def is_identifier(name: str) -> bool:
    return _IDENT.fullmatch(name) is not None


def check_universe(universe: Sequence[str], cap: int = DEFAULT_WORLD_CAP) -> tuple[str, ...]:
    """Validate an ordered variable list and return it as a tuple."""
    universe = tuple(universe)
    if not universe:
        raise FormulaError("universe must declare at least one variable")
    for name in universe:
        if not is_identifier(name):
            raise FormulaError(f"invalid variable name {name!r}")
    if len(set(universe)) != len(universe):
        raise FormulaError("duplicate variable in universe")
    if len(universe) > cap:
        raise UniverseTooLarge(len(universe), cap)
    return universe


# --------------------------------------------------------------------------
# Parsing


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "~&|()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch in "01":
            tokens.append(("const", ch, i))
            i += 1
        else:
            m = _IDENT.match(text, i)
            if m is None:
                raise ParseError(i, f"unexpected character {ch!r}", text)
            tokens.append(("ident", m.group(), i))
            i = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, universe: frozenset[str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.universe = universe

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, tok: tuple[str, str, int], expected: str) -> ParseError:
        kind, value, at = tok
        found = "end of input" if kind == "eof" else repr(value)
        return ParseError(at, f"expected {expected}, found {found}", self.text)

    def parse(self) -> Formula:
        node = self.parse_or()
        tok = self.peek()
        if tok[0] != "eof":
            raise self.fail(tok, "operator or end of input")
        return node

    def parse_or(self) -> Formula:
        node = self.parse_and()
        while self.peek()[0] == "|":
            self.advance()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> Formula:
        node = self.parse_not()
        while self.peek()[0] == "&":
            self.advance()
            node = And(node, self.parse_not())
        return node

    def parse_not(self) -> Formula:
        if self.peek()[0] == "~":
            self.advance()
            return Not(self.parse_not())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.advance()
        kind, value, at = tok
        if kind == "ident":
            if self.universe is not None and value not in self.universe:
                raise UnknownVariable(value, at)
            return Var(value)
        if kind == "const":
            return Const(int(value))
        if kind == "(":
            node = self.parse_or()
            close = self.advance()
            if close[0] != ")":
                raise self.fail(close, "')'")
            return node
        raise self.fail(tok, "variable, constant, '~' or '('")


def parse(text: str, universe: Sequence[str] | None = None) -> Formula:
    """Parse ``text`` into a formula.

    Precedence is ``~`` over ``&`` over ``|``; binary operators associate to
    the left.  When ``universe`` is given every identifier must belong to it.
    """
    names = None if universe is None else frozenset(universe)
    return _Parser(text, names).parse()


# --------------------------------------------------------------------------
# Printing

_PREC = {Or: 1, And: 2, Not: 3, Var: 4, Const: 4}


def _wrap(node: Formula, needs: bool) -> str:
    s = to_text(node)
    return f"({s})" if needs else s


def to_text(f: Formula) -> str:
    """Render with the minimal parentheses that re-parse to the same tree."""
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Const):
        return str(f.value)
    if isinstance(f, Not):
        return "~" + _wrap(f.child, _PREC[type(f.child)] < 3)
    if isinstance(f, And):
        return (
            _wrap(f.left, _PREC[type(f.left)] < 2)
            + " & "
            + _wrap(f.right, _PREC[type(f.right)] <= 2)
        )
    if isinstance(f, Or):
        return (
            _wrap(f.left, False)
            + " | "
            + _wrap(f.right, _PREC[type(f.right)] <= 1)
        )
    raise TypeError(f"not a formula: {f!r}")


def variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Var):
        return frozenset((f.name,))
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return variables(f.child)
    return variables(f.left) | variables(f.right)


# --------------------------------------------------------------------------
# Worlds


@dataclass(frozen=True)
class World:
    """A total 0/1 assignment over an ordered universe."""

    universe: tuple[str, ...]
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != len(self.universe):
            raise ValueError("one bit per declared variable required")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    def __getitem__(self, name: str) -> int:
        try:
            return self.bits[self.universe.index(name)]
        except ValueError:
            raise UnknownVariable(name) from None

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.universe, self.bits))

    @property
    def index(self) -> int:
        """Position of this world in :func:`enumerate_worlds` order."""
        i = 0
        for b in self.bits:
            i = (i << 1) | b
        return i

    @classmethod
    def from_index(cls, universe: Sequence[str], index: int) -> "World":
        universe = tuple(universe)
        n = len(universe)
        return cls(universe, tuple((index >> (n - 1 - p)) & 1 for p in range(n)))

    def label(self) -> str:
        return "".join(map(str, self.bits))

    def __str__(self) -> str:
        return self.label()


def enumerate_worlds(universe: Sequence[str], cap: int = DEFAULT_WORLD_CAP) -> list[World]:
    universe = check_universe(universe, cap)
    return [World(universe, bits) for bits in itertools.product((0, 1), repeat=len(universe))]


def iter_worlds(universe: tuple[str, ...]) -> Iterator[World]:
    for bits in itertools.product((0, 1), repeat=len(universe)):
        yield World(universe, bits)


# --------------------------------------------------------------------------
# Semantics


def evaluate(f: Formula, world: World | Mapping[str, int]) -> int:
    if isinstance(f, Var):
        return world[f.name]
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return 1 - evaluate(f.child, world)
    if isinstance(f, And):
        return min(evaluate(f.left, world), evaluate(f.right, world))
    if isinstance(f, Or):
        return max(evaluate(f.left, world), evaluate(f.right, world))
    raise TypeError(f"not a formula: {f!r}")


def _variable_mask(position: int, n: int) -> int:
    # world i has the variable set iff bit (n-1-position) of i is set
    half = 1 << (n - 1 - position)
    unit = ((1 << half) - 1) << half
    total = 1 << n
    return unit * (((1 << total) - 1) // ((1 << (2 * half)) - 1))


def truth_table(f: Formula, universe: Sequence[str], cap: int = DEFAULT_WORLD_CAP) -> int:
    """Bitmask whose bit ``i`` is set iff ``f`` holds in world ``i``."""
    universe = check_universe(universe, cap)
    n = len(universe)
    full = (1 << (1 << n)) - 1
    index = {name: p for p, name in enumerate(universe)}
    cache: dict[str, int] = {}

    def go(node: Formula) -> int:
        if isinstance(node, Var):
            if node.name not in index:
                raise UnknownVariable(node.name)
            if node.name not in cache:
                cache[node.name] = _variable_mask(index[node.name], n)
            return cache[node.name]
        if isinstance(node, Const):
            return full if node.value else 0
        if isinstance(node, Not):
            return full ^ go(node.child)
        if isinstance(node, And):
            return go(node.left) & go(node.right)
        if isinstance(node, Or):
            return go(node.left) | go(node.right)
        raise TypeError(f"not a formula: {node!r}")

    return go(f)


def equivalent(f: Formula, g: Formula, universe: Sequence[str]) -> bool:
    """Logical equivalence over ``universe``, decided by truth tables."""
    return truth_table(f, universe) == truth_table(g, universe)


def miniterm(world: World) -> Formula:
    """The full conjunction of literals that holds exactly in ``world``."""
    node: Formula | None = None
    for name, bit in zip(world.universe, world.bits):
        lit: Formula = Var(name) if bit else Not(Var(name))
        node = lit if node is None else And(node, lit)
    assert node is not None
    return node


def sum_of_atoms(f: Formula, universe: Sequence[str]) -> Formula:
    """Disjunction of the miniterms of the worlds where ``f`` holds."""
    node: Formula | None = None
    for w in iter_worlds(check_universe(universe)):
        if evaluate(f, w):
            t = miniterm(w)
            node = t if node is None else Or(node, t)
    return Const(0) if node is None else node


def _conjuncts(f: Formula) -> Iterator[Formula]:
    if isinstance(f, And):
        yield from _conjuncts(f.left)
        yield from _conjuncts(f.right)
    else:
        yield f


def miniterm_counts(f: Formula, universe: Sequence[str]) -> tuple[int, int]:
    """Return ``(pos, neg)``: the numbers of plain and negated conjuncts.

    ``f`` must be a conjunction mentioning every universe variable exactly
    once, each either plain or negated.
    """
    universe = tuple(universe)
    seen: dict[str, int] = {}
    for lit in _conjuncts(f):
        if isinstance(lit, Var):
            name, sign = lit.name, 1
        elif isinstance(lit, Not) and isinstance(lit.child, Var):
            name, sign = lit.child.name, 0
        else:
            raise NotAMiniterm(f"conjunct {to_text(lit)!r} is not a literal")
        if name not in universe:
            raise UnknownVariable(name)
        if name in seen:
            raise NotAMiniterm(f"variable {name!r} occurs more than once")
        seen[name] = sign
    missing = [v for v in universe if v not in seen]
    if missing:
        raise NotAMiniterm(f"variables missing from miniterm: {', '.join(missing)}")
    pos = sum(seen.values())
    return pos, len(universe) - pos
