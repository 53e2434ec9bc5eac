"""Exchangeable states of free algebras and their product-state mixtures.

An exchangeable state of the free algebra on ``n`` variables gives every
miniterm with ``k`` plain conjuncts the same value ``q_k``; it is stored as
the vector ``(q_0, ..., q_n)``.  ``xi(N, K)`` spreads unit mass evenly over
the ``C(N, K)`` miniterms with ``K`` plain conjuncts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .formula import Formula, miniterm_counts

DEFAULT_N_CAP = 4096

__all__ = [
    "DEFAULT_N_CAP",
    "ExchangeableState",
    "MixtureApproximation",
    "MixtureWeights",
    "ProductMixture",
    "decompose",
    "mixture_approximation",
    "product_state",
    "product_state_value",
    "restrict",
    "xi_state",
]


def _check_n(N: int, cap: int) -> None:
    if N < 1:
        raise ValueError("need at least one variable")
    if N > cap:
        raise ValueError(f"N = {N} exceeds cap {cap}")


@dataclass(frozen=True)
class ExchangeableState:
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        values = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 2:
            raise ValueError("an exchangeable state needs n >= 1")
        if any(v < 0 for v in values):
            raise ValueError("miniterm values must be nonnegative")
        if self.total_mass() != 1:
            raise ValueError(f"total mass {self.total_mass()} is not 1")

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def total_mass(self) -> Fraction:
        n = len(self.values) - 1
        return sum((comb(n, k) * q for k, q in enumerate(self.values) if q), Fraction(0))

    def miniterm_value(self, pos: int, neg: int | None = None) -> Fraction:
        if neg is not None and pos + neg != self.n:
            raise ValueError(f"pos + neg must equal {self.n}")
        return self.values[pos]

    def __call__(self, t: Formula, universe: Sequence[str]) -> Fraction:
        pos, _ = miniterm_counts(t, universe)
        return self.values[pos]

    def event_value(self, bits: Sequence[Sequence[int]]) -> Fraction:
        """Value of the event whose member miniterms are the given bit tuples."""
        return sum((self.values[sum(b)] for b in bits), Fraction(0))


@dataclass(frozen=True)
class MixtureWeights:
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        weights = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if any(w < 0 for w in weights):
            raise ValueError("mixture weights must be nonnegative")
        if sum(weights) != 1:
            raise ValueError(f"mixture weights sum to {sum(weights)}, not 1")

    @property
    def N(self) -> int:
        return len(self.weights) - 1

    def reconstruct(self) -> ExchangeableState:
        """The state ``sum_K weights[K] * xi(N, K)``."""
        N = self.N
        return ExchangeableState(tuple(w / comb(N, K) for K, w in enumerate(self.weights)))


def product_state_value(p: Fraction | int | str, pos: int, neg: int) -> Fraction:
    """``p**pos * (1-p)**neg`` with ``0**0 == 1``."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"bias {p} outside [0, 1]")
    if pos < 0 or neg < 0:
        raise ValueError("conjunct counts must be nonnegative")
    return p**pos * (1 - p) ** neg


def product_state(p: Fraction | int | str, n: int, cap: int = DEFAULT_N_CAP) -> ExchangeableState:
    _check_n(n, cap)
    return ExchangeableState(tuple(product_state_value(p, k, n - k) for k in range(n + 1)))


def xi_state(N: int, K: int, cap: int = DEFAULT_N_CAP) -> ExchangeableState:
    _check_n(N, cap)
    if not 0 <= K <= N:
        raise ValueError(f"K = {K} outside 0..{N}")
    values = [Fraction(0)] * (N + 1)
    values[K] = Fraction(1, comb(N, K))
    return ExchangeableState(tuple(values))


def restrict(state: ExchangeableState, n: int) -> ExchangeableState:
    """Restriction to the first ``n`` variables.

    A miniterm ``t`` of the small algebra with ``k`` plain conjuncts lies
    above ``C(N-n, K-k)`` miniterms of the large one with ``K`` plain
    conjuncts, so ``q'_k = sum_K C(N-n, K-k) * q_K``; with mixture weights
    ``lambda_K = C(N, K) q_K`` this is the hypergeometric sum
    ``sum_K lambda_K * C(N-n, K-k) / C(N, K)``.
    """
    N = state.n
    if not 1 <= n <= N:
        raise ValueError(f"cannot restrict a state on {N} variables to {n}")
    if n == N:
        return state
    extra = N - n
    coeffs = [comb(extra, j) for j in range(extra + 1)]
    q = state.values
    out = []
    for k in range(n + 1):
        total = Fraction(0)
        for j, c in enumerate(coeffs):
            v = q[k + j]
            if v:
                total += c * v
        out.append(total)
    return ExchangeableState(tuple(out))


def decompose(state: ExchangeableState) -> MixtureWeights:
    N = state.n
    return MixtureWeights(tuple(comb(N, K) * q for K, q in enumerate(state.values)))


@dataclass(frozen=True)
class ProductMixture:
    """Finite mixture ``sum_i w_i * pi_{p_i}`` of product states."""

    components: tuple[tuple[Fraction, Fraction], ...]  # (bias, weight)

    @classmethod
    def from_weights(cls, weights: MixtureWeights) -> "ProductMixture":
        N = weights.N
        return cls(tuple((Fraction(K, N), w) for K, w in enumerate(weights.weights) if w))

    def value(self, pos: int, neg: int) -> Fraction:
        return sum(
            (w * product_state_value(p, pos, neg) for p, w in self.components),
            Fraction(0),
        )

    def __call__(self, t: Formula, universe: Sequence[str]) -> Fraction:
        return self.value(*miniterm_counts(t, universe))

    def on(self, n: int) -> ExchangeableState:
        """The mixture as an exchangeable state of the ``n``-variable algebra."""
        return ExchangeableState(tuple(self.value(k, n - k) for k in range(n + 1)))


@dataclass(frozen=True)
class MixtureApproximation:
    weights: MixtureWeights
    mixture: ProductMixture
    restricted: ExchangeableState
    approximant: tuple[Fraction, ...]
    sup_error: Fraction

    @property
    def evaluator(self) -> Callable[[int, int], Fraction]:
        return self.mixture.value


def mixture_approximation(state: ExchangeableState, n: int) -> MixtureApproximation:
    """Compare ``restrict(state, n)`` with ``sum_K lambda_K pi_{K/N}`` on F_n.

    ``sup_error`` is the exact maximum over the ``n + 1`` value classes.
    """
    weights = decompose(state)
    mixture = ProductMixture.from_weights(weights)
    small = restrict(state, n)
    approx = tuple(mixture.value(k, n - k) for k in range(n + 1))
    err = max(abs(a - b) for a, b in zip(small.values, approx))
    return MixtureApproximation(weights, mixture, small, approx, err)
