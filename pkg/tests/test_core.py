"""Core types: dominance, evaluation, random streams."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ir2emo.core import (
    ContractViolation,
    EvalCounter,
    EvaluationError,
    Population,
    ProblemDefinition,
    RandomSource,
    dominates,
    evaluate_all,
)
from ir2emo.problems import make_problem


class TestDominates:
    def test_strict_componentwise(self):
        assert dominates([1, 2], [2, 3])

    def test_identity_is_not_dominance(self):
        assert not dominates([1, 2], [1, 2])

    def test_incomparable(self):
        assert not dominates([1, 3], [2, 2])
        assert not dominates([2, 2], [1, 3])

    def test_weak_improvement_counts(self):
        assert dominates([1, 2], [1, 3])

    def test_length_mismatch(self):
        with pytest.raises(ContractViolation):
            dominates([1, 2], [1, 2, 3])

    @given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6),
                              st.floats(-1e6, 1e6)), min_size=1, max_size=12))
    @settings(max_examples=60, deadline=None)
    def test_irreflexive_and_transitive(self, rows):
        vecs = [np.array(r) for r in rows]
        for a in vecs:
            assert not dominates(a, a)
        for a in vecs:
            for b in vecs:
                for c in vecs:
                    if dominates(a, b) and dominates(b, c):
                        assert dominates(a, c)


class TestEvaluateAll:
    def test_zdt1_hand_values(self):
        problem = make_problem("ZDT1")
        x = np.full(30, 0.5)
        x[0] = 0.0
        X = np.vstack([x, x])
        X[1, 0] = 1.0
        counter = EvalCounter()
        pop = evaluate_all(problem, Population(X), counter)
        np.testing.assert_allclose(pop.F[0], [0.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(pop.F[1], [1.0, 0.0], atol=1e-12)
        assert counter.count == 2

    def test_empty_population(self):
        problem = make_problem("ZDT1")
        counter = EvalCounter()
        pop = evaluate_all(problem, Population(np.empty((0, 30))), counter)
        assert len(pop) == 0
        assert counter.count == 0

    def test_reevaluation_is_identical(self):
        problem = make_problem("ZDT2")
        rng = np.random.default_rng(0)
        pop = Population(rng.random((6, 30)))
        once = evaluate_all(problem, pop)
        twice = evaluate_all(problem, once)
        np.testing.assert_array_equal(once.F, twice.F)

    def test_counter_increment_exact(self):
        problem = make_problem("ZDT1")
        counter = EvalCounter()
        pop = Population(np.random.default_rng(1).random((7, 30)))
        evaluate_all(problem, pop, counter)
        assert counter.count == 7

    def test_non_finite_objective_names_member(self):
        def bad(X):
            F = np.ones((X.shape[0], 2))
            F[1, 0] = np.nan
            return F

        problem = ProblemDefinition("bad", 3, 2, np.zeros(3), np.ones(3), bad)
        with pytest.raises(EvaluationError, match="member 1"):
            evaluate_all(problem, Population(np.random.random((3, 3))))


class TestRandomSource:
    def test_same_seed_same_stream(self):
        a = RandomSource(42).stream("mating").random(8)
        b = RandomSource(42).stream("mating").random(8)
        np.testing.assert_array_equal(a, b)

    def test_new_consumer_does_not_perturb(self):
        rs1 = RandomSource(5)
        only = rs1.stream("a").random(6)
        rs2 = RandomSource(5)
        rs2.stream("b").random(100)  # extra consumer
        with_b = rs2.stream("a").random(6)
        np.testing.assert_array_equal(only, with_b)

    def test_streams_are_stateful(self):
        rs = RandomSource(3)
        first = rs.stream("x").random(4)
        second = rs.stream("x").random(4)
        assert not np.array_equal(first, second)

    def test_derive_seeds_deterministic(self):
        a = RandomSource(9).derive_seeds("forest", 5)
        b = RandomSource(9).derive_seeds("forest", 5)
        np.testing.assert_array_equal(a, b)


class TestPopulation:
    def test_arrays_are_frozen(self):
        pop = Population(np.random.random((3, 4)))
        with pytest.raises(ValueError):
            pop.X[0, 0] = 1.0

    def test_concat_and_take(self):
        a = Population(np.zeros((2, 3)), np.zeros((2, 2)), birth=0)
        b = Population(np.ones((3, 3)), np.ones((3, 2)), birth=1)
        c = Population.concat([a, b])
        assert len(c) == 5
        sub = c.take([0, 4])
        assert sub.X[0, 0] == 0.0 and sub.X[1, 0] == 1.0
        assert sub.birth.tolist() == [0, 1]

    def test_member_view(self):
        pop = Population([[1.0, 2.0]], [[3.0, 4.0]], birth=7)
        ind = pop.member(0)
        assert ind.birth_generation == 7
        np.testing.assert_array_equal(ind.f, [3.0, 4.0])
