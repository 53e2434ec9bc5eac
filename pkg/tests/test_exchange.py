import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from psat.exchange import (
    ExchangeableState,
    MixtureWeights,
    ProductMixture,
    decompose,
    mixture_approximation,
    product_state,
    product_state_value,
    restrict,
    xi_state,
)
from psat.formula import parse

from oracles import restriction_by_enumeration

F = Fraction

biases = st.fractions(min_value=0, max_value=1, max_denominator=12)


class TestProductState:
    def test_uniform(self):
        for n in range(1, 6):
            for k in range(n + 1):
                assert product_state_value(F(1, 2), k, n - k) == F(1, 2**n)

    def test_examples(self):
        assert product_state_value(F(1, 3), 1, 1) == F(2, 9)
        assert product_state_value(1, 4, 0) == 1
        assert product_state_value(0, 0, 4) == 1
        assert product_state_value(0, 1, 3) == 0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            product_state_value(F(3, 2), 1, 0)
        with pytest.raises(ValueError):
            product_state_value(F(1, 2), -1, 0)

    @given(biases, st.integers(1, 7))
    def test_normalised(self, p, n):
        assert product_state(p, n).total_mass() == 1

    @settings(deadline=None)
    @given(biases, st.integers(2, 9), st.data())
    def test_projective(self, p, N, data):
        n = data.draw(st.integers(1, N))
        assert restrict(product_state(p, N), n) == product_state(p, n)

    def test_formula_evaluation(self):
        s = product_state(F(1, 3), 2)
        assert s(parse("X1 & ~X2", ["X1", "X2"]), ["X1", "X2"]) == F(2, 9)
        with pytest.raises(ValueError):
            s(parse("X1", ["X1", "X2"]), ["X1", "X2"])


class TestXi:
    def test_examples(self):
        assert xi_state(2, 1).values == (0, F(1, 2), 0)
        assert xi_state(5, 5).values[-1] == 1
        assert xi_state(4, 2).values[2] == F(1, 6)

    def test_errors(self):
        with pytest.raises(ValueError):
            xi_state(3, 4)
        with pytest.raises(ValueError):
            xi_state(5000, 1)
        with pytest.raises(ValueError):
            xi_state(10, 1, cap=8)
        with pytest.raises(ValueError):
            ExchangeableState((F(1, 2), F(1, 4)))
        with pytest.raises(ValueError):
            ExchangeableState((F(3, 2), F(-1, 2)))


class TestRestrict:
    def test_example(self):
        r = restrict(xi_state(4, 2), 2)
        assert r.values[1] == F(1, 3)
        assert r.values == (F(1, 6), F(1, 3), F(1, 6))

    def test_identity(self):
        s = xi_state(5, 2)
        assert restrict(s, 5) == s

    def test_bad_n(self):
        with pytest.raises(ValueError):
            restrict(xi_state(3, 1), 4)
        with pytest.raises(ValueError):
            restrict(xi_state(3, 1), 0)

    @pytest.mark.parametrize("N", range(1, 7))
    def test_closed_form_and_enumeration(self, N):
        for K in range(N + 1):
            for n in range(1, N + 1):
                r = restrict(xi_state(N, K), n)
                ref = restriction_by_enumeration(N, K, n)
                for prefix, value in ref.items():
                    k = sum(prefix)
                    expect = F(comb(N - n, K - k), comb(N, K)) if k <= K <= N - n + k else 0
                    assert r.values[k] == value == expect

    @settings(deadline=None)
    @given(st.integers(1, 8), st.data())
    def test_projectivity(self, N, data):
        lam = data.draw(st.lists(st.integers(0, 5), min_size=N + 1, max_size=N + 1).filter(any))
        total = sum(lam)
        s = MixtureWeights(tuple(F(x, total) for x in lam)).reconstruct()
        m = data.draw(st.integers(1, N))
        n = data.draw(st.integers(1, m))
        assert restrict(restrict(s, m), n) == restrict(s, n)
        assert restrict(s, n).total_mass() == 1


class TestDecompose:
    def test_extremal(self):
        assert decompose(xi_state(5, 3)).weights == (0, 0, 0, 1, 0, 0)

    def test_half_product(self):
        assert decompose(product_state(F(1, 2), 2)).weights == (F(1, 4), F(1, 2), F(1, 4))

    def test_uniform_binomial(self):
        N = 6
        w = decompose(product_state(F(1, 2), N)).weights
        assert w == tuple(F(comb(N, K), 2**N) for K in range(N + 1))

    @given(biases, st.integers(1, 8))
    def test_reconstruct(self, p, N):
        s = product_state(p, N)
        assert decompose(s).reconstruct() == s

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            MixtureWeights((F(1, 2), F(1, 3)))
        with pytest.raises(ValueError):
            MixtureWeights((F(3, 2), F(-1, 2)))


class TestMixture:
    def test_half_product(self):
        res = mixture_approximation(product_state(F(1, 2), 4), 2)
        assert res.sup_error == F(1, 16)
        assert res.approximant[1] == F(3, 16)

    @pytest.mark.parametrize("N", [1, 3, 10])
    def test_xi_zero(self, N):
        assert mixture_approximation(xi_state(N, 0), min(N, 2)).sup_error == 0

    def test_xi_4_2(self):
        res = mixture_approximation(xi_state(4, 2), 2)
        assert res.weights.weights == (0, 0, 1, 0, 0)
        assert res.sup_error == F(1, 12)

    def test_large(self):
        assert mixture_approximation(xi_state(1000, 500), 3).sup_error < F(1, 100)

    def test_evaluator(self):
        res = mixture_approximation(xi_state(4, 2), 2)
        assert res.evaluator(1, 1) == F(1, 4)
        mix = res.mixture
        assert mix(parse("~X1 & X2", ["X1", "X2"]), ["X1", "X2"]) == F(1, 4)

    def test_monotone_family(self):
        errs = [mixture_approximation(xi_state(2 * T, T), 3).sup_error for T in (8, 16, 32, 64, 128)]
        assert all(a >= b for a, b in zip(errs, errs[1:]))

    @given(st.lists(st.tuples(biases, st.integers(1, 5)), min_size=1, max_size=4), st.integers(1, 5))
    def test_mixtures_exchangeable(self, comps, n):
        total = sum(w for _, w in comps)
        mix = ProductMixture(tuple((p, F(w, total)) for p, w in comps))
        state = mix.on(n)
        assert state.total_mass() == 1
        names = [f"X{i + 1}" for i in range(n)]
        # every miniterm's value depends only on its count of plain conjuncts
        for bits in itertools.product((0, 1), repeat=n):
            text = " & ".join(v if b else f"~{v}" for v, b in zip(names, bits))
            assert mix(parse(text, names), names) == state.values[sum(bits)]

    def test_event_value(self):
        s = xi_state(2, 1)
        assert s.event_value([(0, 1), (1, 0)]) == 1
