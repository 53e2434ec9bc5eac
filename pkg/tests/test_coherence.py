import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from psat.algebra import StateVector, build_algebra
from psat.coherence import (
    Book,
    Consistent,
    Inconsistent,
    ambient_invariance_check,
    assess,
    check_interval_bound,
    fundamental_interval,
    integer_stakes,
    logical_consistency,
    payoff_matrix,
)
from psat.formula import parse

from oracles import interval_by_vertices

F = Fraction
FIFA = "~(X1 & X2) & ~(X1 & X3) & ~(X2 & X3)"
GRID = [F(k, 10) for k in range(11)]


def book(universe, items, constraint=None):
    return Book.from_formulas(build_algebra(universe, constraint), items)


def random_book(rng, n_vars=None, m=None):
    n_vars = n_vars or rng.randint(1, 4)
    universe = [f"X{i + 1}" for i in range(n_vars)]
    algebra = build_algebra(universe)
    items = []
    for _ in range(m or rng.randint(1, 5)):
        e = algebra.event_from_positions(p for p in range(algebra.size) if rng.random() < 0.5)
        items.append((e, rng.choice(GRID)))
    return Book(algebra, tuple(items))


def check_verdict(b, verdict):
    if isinstance(verdict, Consistent):
        assert b.reproduced_by(verdict.state)
    else:
        M = payoff_matrix(b)
        assert M.balances(verdict.stakes) == verdict.balances
        assert all(v <= -1 for v in verdict.balances)
        assert max(verdict.balances) == -1


class TestPayoffMatrix:
    def test_single(self):
        M = payoff_matrix(book(["X1"], [("X1", F(1, 2))]))
        assert M.rows == ((F(1, 2),), (F(-1, 2),))

    def test_two_assessments(self):
        M = payoff_matrix(book(["X1", "X2"], [("X1", F(3, 5)), ("X1 & X2", F(7, 10))]))
        assert M.rows == (
            (F(3, 5), F(7, 10)),
            (F(3, 5), F(7, 10)),
            (F(-2, 5), F(7, 10)),
            (F(-2, 5), F(-3, 10)),
        )

    def test_sure_event(self):
        M = payoff_matrix(book(["X1"], [("1", 1)]))
        assert M.rows == ((0,), (0,))

    def test_entries_in_range(self):
        rng = random.Random(5)
        for _ in range(50):
            b = random_book(rng)
            for row in payoff_matrix(b).rows:
                for v, beta in zip(row, b.prices):
                    assert v in (beta, beta - 1)

    def test_empty_book_rejected(self):
        with pytest.raises(ValueError):
            payoff_matrix(Book(build_algebra(["X1"]), ()))


class TestAssess:
    def test_complementary_pair(self):
        v = assess(book(["X1"], [("X1", F(3, 5)), ("~X1", F(2, 5))]))
        assert isinstance(v, Consistent)
        assert v.state.masses == (F(2, 5), F(3, 5))

    def test_overpriced_pair(self):
        b = book(["X1"], [("X1", F(3, 5)), ("~X1", F(1, 2))])
        v = assess(b)
        assert isinstance(v, Inconsistent)
        check_verdict(b, v)

    def test_monotonicity_violation(self):
        b = book(["X1", "X2"], [("X1", F(3, 5)), ("X1 & X2", F(7, 10))])
        v = assess(b)
        assert isinstance(v, Inconsistent)
        check_verdict(b, v)
        assert v.stakes[0] > 0 and v.stakes[0] == -v.stakes[1]
        assert payoff_matrix(b).balances((1, -1)) == (F(-1, 10), F(-1, 10), F(-11, 10), F(-1, 10))
        assert integer_stakes(v.stakes) == (10, -10)
        assert v.balances == (-1, -1, -11, -1)

    def test_extreme_prices(self):
        assert assess(book(["X1"], [("X1", 0), ("~X1", 1)])).consistent
        assert not assess(book(["X1"], [("X1", 1), ("~X1", 1)])).consistent
        assert not assess(book(["X1"], [("0", F(1, 10))])).consistent

    def test_duplicate_conflicting(self):
        b = book(["X1"], [("X1", F(1, 2)), ("X1", F(3, 5))])
        v = assess(b)
        assert isinstance(v, Inconsistent)
        check_verdict(b, v)

    def test_fifa(self):
        b = book(["X1", "X2", "X3"], [("X1", F(3, 10)), ("X2", F(1, 4)), ("X3", F(1, 5))], FIFA)
        assert assess(b).consistent
        over = book(["X1", "X2", "X3"], [("X1", F(1, 2)), ("X2", F(2, 5)), ("X3", F(3, 10))], FIFA)
        v = assess(over)
        check_verdict(over, v)
        assert not v.consistent

    def test_empty_book(self):
        assert assess(Book(build_algebra(["X1"]), ())).consistent

    def test_invalid_price(self):
        algebra = build_algebra(["X1"])
        with pytest.raises(ValueError):
            Book.from_formulas(algebra, [("X1", F(6, 5))])

    def test_integer_stakes(self):
        assert integer_stakes((F(1, 3), F(-1, 2))) == (2, -3)
        assert integer_stakes((F(10), F(-10))) == (10, -10)

    def test_dichotomy_and_exclusivity(self):
        rng = random.Random(99)
        for _ in range(200):
            b = random_book(rng)
            v = assess(b)
            check_verdict(b, v)
            if isinstance(v, Consistent):
                # sigma^T M s = 0 for every s, so no stakes make all balances negative
                M = payoff_matrix(b)
                u = v.state.masses
                for _ in range(5):
                    s = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(len(b))]
                    bal = M.balances(s)
                    assert sum(ui * x for ui, x in zip(u, bal)) == 0
                    assert not all(x < 0 for x in bal)

    def test_monotone_coherence(self):
        rng = random.Random(4)
        checked = 0
        while checked < 40:
            b = random_book(rng)
            v = assess(b)
            if not v.consistent:
                continue
            algebra = b.algebra
            h = algebra.event_from_positions(p for p in range(algebra.size) if rng.random() < 0.5)
            bigger = b.extend(h, v.state.value(h))
            assert assess(bigger).consistent
            checked += 1


class TestInterval:
    def test_frechet_conjunction(self):
        b = book(["X1", "X2"], [("X1", F(1, 2)), ("X2", F(1, 2))])
        iv = fundamental_interval(b, b.algebra.event("X1 & X2"))
        assert (iv.lo, iv.hi) == (0, F(1, 2))
        assert iv.witness_lo.value(b.algebra.event("X1 & X2")) == 0
        assert b.reproduced_by(iv.witness_lo) and b.reproduced_by(iv.witness_hi)

    def test_empty_book(self):
        algebra = build_algebra(["X1"])
        iv = fundamental_interval(Book(algebra, ()), algebra.event("X1"))
        assert (iv.lo, iv.hi) == (0, 1)

    def test_inconsistent_empty(self):
        b = book(["X1"], [("X1", F(3, 5)), ("~X1", F(1, 2))])
        iv = fundamental_interval(b, b.algebra.event("X1"))
        assert iv.empty and iv.dutch_book is not None
        assert F(1, 2) not in iv

    def test_dual_bounds(self):
        rng = random.Random(8)
        for _ in range(40):
            b = random_book(rng)
            algebra = b.algebra
            q = algebra.event_from_positions(p for p in range(algebra.size) if rng.random() < 0.5)
            iv = fundamental_interval(b, q)
            if iv.empty:
                continue
            assert check_interval_bound(b, q, iv.lo_bound, iv.lo, True)
            assert check_interval_bound(b, q, iv.hi_bound, iv.hi, False)
            assert not check_interval_bound(b, q, iv.lo_bound, iv.lo + F(1, 100), True)

    @pytest.mark.parametrize("p", [F(k, 4) for k in range(5)])
    @pytest.mark.parametrize("q", [F(k, 4) for k in range(5)])
    def test_frechet_vs_oracle(self, p, q):
        b = book(["X1", "X2"], [("X1", p), ("X2", q)])
        worlds = [(a, c) for a in (0, 1) for c in (0, 1)]
        events = [lambda w: w[0], lambda w: w[1]]
        for text, query, expect in [
            ("X1 & X2", lambda w: w[0] and w[1], (max(0, p + q - 1), min(p, q))),
            ("X1 | X2", lambda w: w[0] or w[1], (max(p, q), min(1, p + q))),
        ]:
            iv = fundamental_interval(b, b.algebra.event(text))
            assert (iv.lo, iv.hi) == expect
            assert interval_by_vertices(worlds, events, [p, q], query) == expect

    def test_random_vs_oracle(self):
        rng = random.Random(21)
        for _ in range(30):
            b = random_book(rng, n_vars=rng.randint(1, 3), m=rng.randint(1, 3))
            algebra = b.algebra
            q = algebra.event_from_positions(p for p in range(algebra.size) if rng.random() < 0.5)
            worlds = list(range(algebra.size))
            events = [lambda i, e=e: (e.members >> i) & 1 for e in b.events]
            ref = interval_by_vertices(worlds, events, b.prices, lambda i: (q.members >> i) & 1)
            iv = fundamental_interval(b, q)
            assert (None if iv.empty else (iv.lo, iv.hi)) == ref


class TestLogicalConsistency:
    def test_contradiction(self):
        algebra = build_algebra(["X1"])
        assert logical_consistency([algebra.event("X1"), algebra.event("~X1")]) is None

    def test_free_generators(self):
        algebra = build_algebra(["X1", "X2"])
        w = logical_consistency([algebra.event("X1"), algebra.event("X2")])
        assert w.label() == "11"

    def test_fifa(self):
        algebra = build_algebra(["X1", "X2", "X3"], parse(FIFA, ["X1", "X2", "X3"]))
        assert logical_consistency([algebra.event("X1"), algebra.event("X2")]) is None

    def test_bridge(self):
        rng = random.Random(13)
        for _ in range(150):
            b = random_book(rng)
            ones = Book(b.algebra, tuple((e, F(1)) for e in b.events))
            witness = logical_consistency(b.events)
            assert (witness is not None) == assess(ones).consistent
            if witness is not None:
                assert all(witness in e for e in b.events)


class TestAmbientInvariance:
    def test_consistent_f1_in_f3(self):
        b = book(["X1"], [("X1", F(3, 5)), ("~X1", F(2, 5))])
        assert ambient_invariance_check(b, ["X1", "X2", "X3"])

    def test_inconsistent_f2_in_f4(self):
        b = book(["X1", "X2"], [("X1", F(3, 5)), ("X1 & X2", F(7, 10))])
        assert ambient_invariance_check(b, ["X1", "X2", "X3", "X4"])

    def test_identity(self):
        b = book(["X1", "X2"], [("X1 | X2", F(1, 3))])
        assert ambient_invariance_check(b, ["X1", "X2"])

    def test_random(self):
        rng = random.Random(17)
        for _ in range(40):
            b = random_book(rng, n_vars=rng.randint(1, 3))
            bigger = list(b.algebra.universe) + ["Y1", "Y2"][: rng.randint(1, 2)]
            assert ambient_invariance_check(b, bigger)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3),
    st.lists(st.tuples(st.integers(0, 255), st.sampled_from(GRID)), min_size=1, max_size=4),
)
def test_verdict_certificate_property(n_vars, items):
    algebra = build_algebra([f"X{i + 1}" for i in range(n_vars)])
    full = (1 << algebra.size) - 1
    b = Book(algebra, tuple((algebra.event_from_positions(
        p for p in range(algebra.size) if (mask & full) >> p & 1), beta) for mask, beta in items))
    check_verdict(b, assess(b))


def test_state_vector_masses_attr():
    s = StateVector.uniform(build_algebra(["X1"]))
    assert s.masses == (F(1, 2), F(1, 2))
