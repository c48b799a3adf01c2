import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prevpoly._rat import rat
from prevpoly.errors import BudgetExceeded, EmptyPolytope, UnboundedPolytope
from prevpoly.polytope import (
    HRep,
    VRep,
    adjacency,
    canonical_constraint,
    contains,
    enumerate_vertices,
    fm_project,
    remove_redundant,
)
from prevpoly.ratlinalg import lp_optimize

from conftest import TOY_VERTICES


def cube(d):
    rows = []
    for i in range(d):
        lo = [0] * d
        hi = [0] * d
        lo[i], hi[i] = -1, 1
        rows.append((tuple(lo), 0))
        rows.append((tuple(hi), 1))
    return HRep.of(rows, names=tuple(f"x{i}" for i in range(d)))


class TestCanonical:
    def test_scaling(self):
        assert canonical_constraint((rat(1), rat("3/4")), rat(1)) == ((4, 3), 4)
        assert canonical_constraint((rat("-1/2"), rat(0)), rat(0)) == ((-1, 0), 0)

    def test_idempotent(self):
        c, b = canonical_constraint((rat(6), rat(-9)), rat(3))
        assert canonical_constraint(c, b) == (c, b)

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.fractions(min_value=-9, max_value=9, max_denominator=7),
            min_size=1,
            max_size=4,
        ),
        st.fractions(min_value=-9, max_value=9, max_denominator=7),
        st.fractions(min_value="1/7", max_value=9, max_denominator=7),
    )
    def test_positive_scaling_invariance(self, coeffs, rhs, factor):
        base = canonical_constraint([rat(v) for v in coeffs], rat(rhs))
        scaled = canonical_constraint(
            [rat(v) * rat(factor) for v in coeffs], rat(rhs) * rat(factor)
        )
        assert base == scaled


class TestContains:
    def test_toy_vertex(self, toy_hrep):
        assert contains(toy_hrep, (F(1, 2), F(2, 3)))

    def test_toy_outside(self, toy_hrep):
        # (2/3)*1 + 1*1 = 5/3 > 1 violates the second upper constraint.
        assert not contains(toy_hrep, (1, 1))

    def test_enumerated_vertices_contained(self, toy_hrep):
        vrep, _ = enumerate_vertices(toy_hrep)
        for v in vrep.vertices:
            assert contains(toy_hrep, v)


class TestRemoveRedundant:
    def test_toy_eight_constraints(self, toy_hrep):
        # The four irredundant rows plus (0,1), (1,0), (-1,1) and (1,-1)
        # style directions, all made redundant by nonnegativity and the
        # two upper rows.
        rows = list(toy_hrep.constraints) + [
            ((0, 1), 1),
            ((1, 0), 1),
            ((-1, 1), 1),
            ((1, -1), 1),
        ]
        h = HRep.of(rows, names=toy_hrep.names)
        reduced = remove_redundant(h)
        assert set(reduced.constraints) == set(toy_hrep.constraints)

    def test_unit_square_extra(self):
        h = HRep.of(
            [((-1, 0), 0), ((0, -1), 0), ((1, 0), 1), ((0, 1), 1), ((1, 1), 3)],
            names=("x", "y"),
        )
        reduced = remove_redundant(h)
        assert ((1, 1), 3) not in reduced.constraints
        assert len(reduced.constraints) == 4

    def test_idempotent(self, toy_hrep):
        once = remove_redundant(toy_hrep)
        assert remove_redundant(once) == once

    def test_infeasible_rejected(self):
        h = HRep.of([((1,), 0), ((-1,), -1)], names=("x",))
        with pytest.raises(EmptyPolytope):
            remove_redundant(h)

    def test_implicit_equality_pair_retained(self):
        h = HRep.of(
            [((1, 1), 1), ((-1, -1), -1), ((-1, 0), 0), ((0, -1), 0), ((1, 0), 2)],
            names=("x", "y"),
        )
        reduced = remove_redundant(h)
        assert ((1, 1), 1) in reduced.constraints
        assert ((-1, -1), -1) in reduced.constraints
        assert ((1, 0), 2) not in reduced.constraints

    def test_round_trip_vertices(self, toy_hrep):
        rows = list(toy_hrep.constraints) + [((1, 1), 2), ((3, 1), 4)]
        h = HRep.of(rows, names=toy_hrep.names)
        before, _ = enumerate_vertices(h)
        after, _ = enumerate_vertices(remove_redundant(h))
        assert before.vertices == after.vertices

    def test_many_rows_clarkson_path(self):
        # 60+ rows in 2d triggers the output-sensitive path; the minimal
        # set is the unit square.
        rng = random.Random(5)
        rows = [((-1, 0), 0), ((0, -1), 0), ((1, 0), 1), ((0, 1), 1)]
        for _ in range(70):
            a, b = rng.randint(0, 5), rng.randint(0, 5)
            if a == b == 0:
                continue
            rows.append(((a, b), a + b + rng.randint(0, 3)))
        reduced = remove_redundant(HRep.of(rows, names=("x", "y")))
        assert set(reduced.constraints) == {
            ((-1, 0), 0),
            ((0, -1), 0),
            ((1, 0), 1),
            ((0, 1), 1),
        }


class TestEnumerateVertices:
    def test_toy(self, toy_hrep):
        vrep, incidence = enumerate_vertices(toy_hrep)
        assert vrep.vertices == TOY_VERTICES
        for v, tight in zip(vrep.vertices, incidence.tight):
            assert len(tight) >= 2

    def test_unit_cube(self):
        vrep, _ = enumerate_vertices(cube(3))
        assert len(vrep) == 8
        assert all(set(v) <= {0, 1} for v in vrep.vertices)

    def test_indicator_simplex(self):
        # x,y,z >= 0 and x+y+z <= 1: the four obvious vertices.
        h = HRep.of(
            [((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0), ((1, 1, 1), 1)],
        )
        vrep, _ = enumerate_vertices(h)
        assert vrep.vertices == ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0))

    def test_empty_error(self):
        h = HRep.of([((1,), 0), ((-1,), -1)])
        with pytest.raises(EmptyPolytope):
            enumerate_vertices(h)

    def test_unbounded_error(self):
        h = HRep.of([((-1, 0), 0), ((0, -1), 0), ((0, 1), 1)])
        with pytest.raises(UnboundedPolytope):
            enumerate_vertices(h)

    def test_lower_dimensional_segment(self):
        # x + y = 1 inside the unit square: a segment with two endpoints.
        rows = [((1, 1), 1), ((-1, -1), -1), ((-1, 0), 0), ((0, -1), 0)]
        vrep, _ = enumerate_vertices(HRep.of(rows, names=("x", "y")))
        assert vrep.vertices == ((0, 1), (1, 0))

    def test_single_point(self):
        rows = [((1, 1), 1), ((-1, -1), -1), ((1, -1), 0), ((-1, 1), 0)]
        vrep, _ = enumerate_vertices(HRep.of(rows))
        assert vrep.vertices == ((F(1, 2), F(1, 2)),)

    def test_insertion_order_independence(self, toy_hrep):
        base, _ = enumerate_vertices(toy_hrep)
        rng = random.Random(11)
        rows = list(toy_hrep.constraints)
        for _ in range(20):
            rng.shuffle(rows)
            vrep, _ = enumerate_vertices(HRep.of(rows, names=toy_hrep.names))
            assert vrep.vertices == base.vertices

    def test_tight_sets_have_full_rank(self, toy_hrep):
        vrep, incidence = enumerate_vertices(toy_hrep)
        from prevpoly.ratlinalg import rank

        for v, tight in zip(vrep.vertices, incidence.tight):
            rows = [toy_hrep.constraints[i][0] for i in tight]
            assert rank(rows) == toy_hrep.dim

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_vertices(cube(6), max_rays=3)

    def test_lp_vertex_cross_check(self, toy_hrep, three_on_three):
        rng = random.Random(3)
        for h in (toy_hrep, cube(3)):
            vrep, _ = enumerate_vertices(h)
            for _ in range(8):
                obj = [rat(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(h.dim)]
                best = max(sum(c * x for c, x in zip(obj, v)) for v in vrep.vertices)
                res = lp_optimize(obj, h, "max")
                assert res.value == best


class TestAdjacency:
    def test_unit_square_cycle(self):
        vrep, incidence = enumerate_vertices(cube(2))
        graph = adjacency(vrep, incidence)
        assert len(graph.edges) == 4
        assert all(graph.degree(i) == 2 for i in range(4))

    def test_unit_cube_degree(self):
        vrep, incidence = enumerate_vertices(cube(3))
        graph = adjacency(vrep, incidence)
        assert all(graph.degree(i) == 3 for i in range(8))

    def test_toy_four_cycle(self, toy_hrep):
        vrep, incidence = enumerate_vertices(toy_hrep)
        graph = adjacency(vrep, incidence)
        idx = {v: i for i, v in enumerate(vrep.vertices)}
        expected = {
            tuple(sorted((idx[(0, 0)], idx[(1, 0)]))),
            tuple(sorted((idx[(1, 0)], idx[(F(1, 2), F(2, 3))]))),
            tuple(sorted((idx[(F(1, 2), F(2, 3))], idx[(0, 1)]))),
            tuple(sorted((idx[(0, 1)], idx[(0, 0)]))),
        }
        assert set(graph.edges) == expected

    def test_degree_at_least_dim(self, toy_hrep):
        for h in (toy_hrep, cube(3)):
            vrep, incidence = enumerate_vertices(h)
            graph = adjacency(vrep, incidence)
            for i in range(len(vrep)):
                assert graph.degree(i) >= h.dim


class TestProjection:
    def test_cube_to_square(self):
        projected = fm_project(cube(3), ("x0", "x1"))
        vrep, _ = enumerate_vertices(projected)
        assert vrep.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_keep_all_unchanged(self, toy_hrep):
        assert fm_project(toy_hrep, ("f", "g")) is toy_hrep

    def test_diagonal_strip(self):
        # Project {0<=x,y<=1, x<=y} onto x: the unit interval.
        rows = [((-1, 0), 0), ((0, -1), 0), ((1, 0), 1), ((0, 1), 1), ((1, -1), 0)]
        projected = fm_project(HRep.of(rows, names=("x", "y")), ("x",))
        vrep, _ = enumerate_vertices(projected)
        assert vrep.vertices == ((0,), (1,))

    def test_projection_matches_vertex_shadow(self):
        # Vertices of the projection equal the extreme points among
        # projected vertices (exact hull check via membership).
        h = cube(3)
        projected = fm_project(h, ("x0", "x2"))
        pv, _ = enumerate_vertices(projected)
        full, _ = enumerate_vertices(h)
        shadow = {(v[0], v[2]) for v in full.vertices}
        assert set(pv.vertices) <= shadow
        for point in shadow:
            assert contains(projected, point)

    def test_projection_vertices_are_extreme_shadow_points(self, toy_gambles):
        # Independent oracle: project all lifted vertices, then filter the
        # extreme ones by exact convex-combination feasibility.  The result
        # must equal the vertex set of the eliminated system.
        from prevpoly.coherence import generate_constraints
        from prevpoly.gambles import augment_with_indicators

        aug, _ = augment_with_indicators(toy_gambles)
        h = remove_redundant(generate_constraints(aug).to_hrep())
        lifted, _ = enumerate_vertices(h)
        shadow = sorted({v[:2] for v in lifted.vertices})
        extreme = [p for p in shadow if not _in_hull(p, [q for q in shadow if q != p])]
        projected = fm_project(h, ("f", "g"))
        pv, _ = enumerate_vertices(projected)
        assert list(pv.vertices) == extreme


def _in_hull(point, points) -> bool:
    """Exact test: is the point a convex combination of the others?"""
    from prevpoly.ratlinalg import OPTIMAL, solve_standard
    from prevpoly._rat import ONE, ZERO

    if not points:
        return False
    d = len(point)
    eq = [([q[j] for q in points], point[j]) for j in range(d)]
    eq.append(([ONE] * len(points), ONE))
    status, _, _, _ = solve_standard([], eq, [ZERO] * len(points))
    return status == OPTIMAL


class TestVRep:
    def test_sorted_and_distinct(self):
        v = VRep(2, ((1, 0), (0, 1)), ("x", "y"))
        assert v.vertices == ((0, 1), (1, 0))
        with pytest.raises(ValueError):
            VRep(2, ((1, 0), (1, 0)))
