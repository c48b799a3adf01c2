import random
from fractions import Fraction as F

import pytest

from prevpoly._rat import rat
from prevpoly.coherence import (
    HOMOGENEOUS,
    INHOMOGENEOUS,
    NONNEG,
    LinearConstraint,
    check_against,
    check_direct,
    combination_solution,
    generate_constraints,
    independent_subsets,
)
from prevpoly.errors import MissingIndicators, NotNormalized
from prevpoly.gambles import (
    Event,
    GambleSet,
    LowerPrevision,
    PossibilitySpace,
    augment_with_indicators,
    degenerate_prevision,
    vacuous_prevision,
)


@pytest.fixture
def indicators_abc(abc):
    return GambleSet.of(
        abc, [("I_a", (1, 0, 0)), ("I_b", (0, 1, 0)), ("I_c", (0, 0, 1))]
    )


@pytest.fixture
def toy_augmented(toy_gambles):
    widened, _ = augment_with_indicators(toy_gambles)
    return widened


class TestIndependentSubsets:
    def test_indicator_triple(self, indicators_abc):
        subsets = list(independent_subsets(indicators_abc))
        assert subsets == [(0, 1), (0, 2), (1, 2), (0, 1, 2)]

    def test_dependent_triple_skipped(self, abc):
        k = GambleSet.of(
            abc,
            [("I_a", (1, 0, 0)), ("I_b", (0, 1, 0)), ("I_ab", (1, 1, 0))],
        )
        # I_ab = I_a + I_b, so the triple has rank 2 and must not appear.
        subsets = list(independent_subsets(k))
        assert (0, 1, 2) not in subsets
        assert subsets == [(0, 1), (0, 2), (1, 2)]

    def test_pair_only(self, toy_gambles):
        assert list(independent_subsets(toy_gambles)) == [(0, 1)]

    def test_size_bounded_by_space(self, toy_augmented):
        assert all(len(s) <= 3 for s in independent_subsets(toy_augmented))


class TestCombinationSolution:
    def test_unit_over_indicators(self, indicators_abc):
        lam = combination_solution(indicators_abc.gambles, None)
        assert lam == (1, 1, 1)

    def test_gamble_target(self, indicators_abc, toy_gambles):
        cols = [indicators_abc["I_a"], indicators_abc["I_b"]]
        assert combination_solution(cols, toy_gambles["f"]) == (1, F(1, 2))

    def test_unit_unreachable(self):
        # Eliminating forces lam = (1, 2), but then the third component
        # reads 1/2 + 2 = 5/2, not 1.
        cols = [(1, 0, rat("1/2")), (0, rat("1/2"), 1)]
        assert combination_solution(cols, None) is None


class TestGenerateConstraints:
    def test_indicator_triple(self, indicators_abc):
        cs = generate_constraints(indicators_abc)
        assert len(cs.constraints) == 4
        kinds = sorted(c.kind for c in cs.constraints)
        assert kinds == [INHOMOGENEOUS, NONNEG, NONNEG, NONNEG]
        total = next(c for c in cs.constraints if c.kind == INHOMOGENEOUS)
        assert total.coeffs == (1, 1, 1) and total.rhs == 1

    def test_toy_projects_to_known_quadrilateral(self, toy_augmented, toy_hrep):
        from prevpoly.polytope import fm_project, remove_redundant

        cs = generate_constraints(toy_augmented)
        reduced = remove_redundant(cs.to_hrep())
        final = remove_redundant(fm_project(reduced, ("f", "g")))
        assert set(final.constraints) == set(toy_hrep.constraints)

    def test_power_set_raw_count(self, abc):
        events = [("a",), ("b",), ("c",), ("a", "b"), ("a", "c"), ("b", "c")]
        from prevpoly.gambles import indicator

        k = GambleSet.of(
            abc,
            [
                ("I_" + "".join(e), indicator(Event.of(abc, e)).payoffs)
                for e in events
            ],
        )
        cs = generate_constraints(k)
        assert cs.raw_generated == 17
        assert len(cs.constraints) == 17

    def test_requires_indicators(self, toy_gambles):
        with pytest.raises(MissingIndicators):
            generate_constraints(toy_gambles)

    def test_requires_normalized(self, abc):
        k = GambleSet.of(abc, [("f", (2, 1, 0))])
        with pytest.raises(NotNormalized):
            generate_constraints(k)

    def test_deterministic(self, toy_augmented):
        a = generate_constraints(toy_augmented)
        b = generate_constraints(toy_augmented)
        assert a.constraints == b.constraints
        assert [c.origin for c in a.constraints] == [c.origin for c in b.constraints]

    def test_jobs_do_not_change_output(self, toy_augmented, three_on_three):
        aug3, _ = augment_with_indicators(three_on_three)
        for k in (toy_augmented, aug3):
            serial = generate_constraints(k, jobs=1)
            parallel = generate_constraints(k, jobs=3)
            assert serial.constraints == parallel.constraints
            assert serial.raw_generated == parallel.raw_generated

    def test_support_property(self, toy_augmented):
        # Combination weights reproduce the target pointwise, so the largest
        # gap between combination and target is exactly the right-hand side
        # gap form: 0 for gamble targets, 1 for the unit target.
        cs = generate_constraints(toy_augmented)
        k = toy_augmented
        for c in cs.constraints:
            if c.origin is None:
                continue
            combo = [
                sum(
                    lam * k[name].payoffs[i]
                    for name, lam in zip(c.origin.subset, c.origin.lam)
                )
                for i in range(len(k.space))
            ]
            if c.origin.target == "unit":
                assert max(combo) == 1 and min(combo) == 1
            else:
                target = k[c.origin.target].payoffs
                assert all(a == b for a, b in zip(combo, target))

    def test_canonicalization_idempotent(self):
        c = LinearConstraint.of((rat(2), rat("2/3")), rat(2))
        again = LinearConstraint.of(c.coeffs, c.rhs)
        assert (again.coeffs, again.rhs) == (c.coeffs, c.rhs)


class TestCheckAgainst:
    def test_vacuous_coherent(self, toy_augmented):
        cs = generate_constraints(toy_augmented)
        p = vacuous_prevision(toy_augmented)
        assert check_against(p, cs).coherent

    def test_overcommitted_masses(self, indicators_abc):
        cs = generate_constraints(indicators_abc)
        p = LowerPrevision.of(indicators_abc, ("1/2", "1/2", "1/2"))
        result = check_against(p, cs)
        assert not result.coherent
        (violated, slack), = result.violations
        assert violated.coeffs == (1, 1, 1) and slack == F(1, 2)

    def test_degenerate_and_vacuous_all_pass(self, three_on_three):
        aug, _ = augment_with_indicators(three_on_three)
        cs = generate_constraints(aug)
        for w in aug.space.elements:
            assert check_against(degenerate_prevision(aug, w), cs).coherent
        import itertools

        for size in (1, 2, 3):
            for members in itertools.combinations(aug.space.elements, size):
                p = vacuous_prevision(aug, Event.of(aug.space, members))
                assert check_against(p, cs).coherent

    def test_table_row_coherent(self, three_on_three):
        aug, _ = augment_with_indicators(three_on_three)
        cs = generate_constraints(aug)
        # The point evaluation at b: (f,g,h) payoffs plus indicator values.
        p = LowerPrevision.of(
            aug, {"f": 0, "g": "1/2", "h": 1, "I_a": 0, "I_b": 1, "I_c": 0}
        )
        assert check_against(p, cs).coherent


class TestCheckDirect:
    def test_vacuous_coherent(self, toy_augmented):
        assert check_direct(vacuous_prevision(toy_augmented), toy_augmented).coherent

    def test_overcommitted_masses(self, indicators_abc):
        p = LowerPrevision.of(indicators_abc, ("1/2", "1/2", "1/2"))
        result = check_direct(p, indicators_abc)
        assert not result.coherent
        w = result.witness
        assert set(w.subset) == {"I_a", "I_b", "I_c"}
        assert w.lam == (1, 1, 1) and w.gamma == 1

    def test_negative_value_rejected(self, indicators_abc):
        p = LowerPrevision.of(indicators_abc, ("-1/2", 0, 0))
        result = check_direct(p, indicators_abc)
        assert not result.coherent and result.witness.subset == ("I_a",)

    def test_agrees_with_constraints_randomized(self, abc):
        rng = random.Random(20240)
        grid = [rat(i, 12) for i in range(13)]
        agree = 0
        for trial in range(60):
            k = _random_gamble_set(rng, abc)
            aug, _ = augment_with_indicators(k)
            p = LowerPrevision.of(aug, tuple(rng.choice(grid) for _ in aug.names))
            via_constraints = check_against(p, generate_constraints(aug)).coherent
            via_direct = check_direct(p, aug).coherent
            assert via_constraints == via_direct
            agree += 1
        assert agree == 60


def _random_gamble_set(rng, space):
    n = rng.randint(1, 3)
    vectors = set()
    while len(vectors) < n:
        vals = [rng.randint(0, 12) for _ in range(len(space))]
        lo, hi = min(vals), max(vals)
        if lo == hi:
            continue
        vec = tuple(rat(v - lo, hi - lo) for v in vals)
        vectors.add(vec)
    return GambleSet.of(space, [(f"g{i}", v) for i, v in enumerate(sorted(vectors))])
