"""Line-oriented book files.

::

    # comment
    vars X1 X2 X3
    constraint ~(X1 & X2)
    X1 := 0.6
    X1 & X2 := 7/10
    query X1 | X2

Probabilities are read as exact decimal or ``p/q`` fractions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .algebra import EventAlgebra, build_algebra
from .coherence import Book
from .formula import DEFAULT_WORLD_CAP, Formula, FormulaError, check_universe, parse, to_text

_PROB = re.compile(r"[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+|[0-9]+/[0-9]+)")


class BookFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        self.line = line
        self.source = source
        where = f"{source}:" if source else ""
        where += f"{line}: " if line is not None else (" " if where else "")
        super().__init__(f"{where}{message}")


def parse_probability(text: str) -> Fraction:
    """Exact rational in [0, 1] from ``0.6``, ``3/5``, ``1`` and the like."""
    text = text.strip()
    if not _PROB.fullmatch(text):
        raise ValueError(f"malformed probability literal {text!r}")
    try:
        value = Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None
    if not 0 <= value <= 1:
        raise ValueError(f"probability {text} is outside [0, 1]")
    return value


@dataclass(frozen=True)
class BookFile:
    universe: tuple[str, ...]
    constraint: Formula | None = None
    assessments: tuple[tuple[Formula, Fraction], ...] = ()
    queries: tuple[Formula, ...] = field(default=())

    def algebra(self, cap: int = DEFAULT_WORLD_CAP) -> EventAlgebra:
        return build_algebra(self.universe, self.constraint, cap=cap)

    def book(self, algebra: EventAlgebra | None = None, cap: int = DEFAULT_WORLD_CAP) -> Book:
        algebra = algebra or self.algebra(cap)
        return Book.from_formulas(algebra, self.assessments)

    def to_json(self) -> dict:
        return {
            "vars": list(self.universe),
            "constraint": None if self.constraint is None else to_text(self.constraint),
            "assessments": [[to_text(f), _rat(b)] for f, b in self.assessments],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BookFile":
        universe = tuple(data["vars"])
        constraint = data.get("constraint")
        return cls(
            universe,
            None if constraint is None else parse(constraint, universe),
            tuple((parse(f, universe), parse_probability(b)) for f, b in data["assessments"]),
        )


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_book(text: str, source: str = "", cap: int | None = None) -> BookFile:
    universe: tuple[str, ...] | None = None
    constraint = None
    assessments: list[tuple[Formula, Fraction]] = []
    queries: list[Formula] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, _, rest = line.partition(" ")
            if head == "vars":
                if universe is not None:
                    raise BookFileError("duplicate 'vars' line", lineno, source)
                names = tuple(rest.split())
                if not names:
                    raise BookFileError("'vars' declares no variables", lineno, source)
                universe = check_universe(names, cap if cap is not None else len(names))
                continue
            if universe is None:
                raise BookFileError("'vars' must come first", lineno, source)
            if head == "constraint":
                if constraint is not None:
                    raise BookFileError("duplicate 'constraint' line", lineno, source)
                constraint = parse(rest, universe)
            elif head == "query":
                queries.append(parse(rest, universe))
            elif ":=" in line:
                lhs, _, rhs = line.rpartition(":=")
                f = parse(lhs, universe)
                try:
                    beta = parse_probability(rhs)
                except ValueError as exc:
                    raise BookFileError(str(exc), lineno, source) from None
                assessments.append((f, beta))
            else:
                raise BookFileError(f"cannot parse line {raw.strip()!r}", lineno, source)
        except FormulaError as exc:
            raise BookFileError(str(exc), lineno, source) from None

    if universe is None:
        raise BookFileError("missing 'vars' line", None, source)
    return BookFile(universe, constraint, tuple(assessments), tuple(queries))


def load_book(path: str | Path, cap: int | None = None) -> BookFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BookFileError(f"cannot read file: {exc.strerror}", None, str(path)) from None
    return parse_book(text, str(path), cap)
