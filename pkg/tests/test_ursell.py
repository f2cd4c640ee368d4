import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrcount import (
    BadShapeError,
    MixtureSpec,
    OutOfRangeError,
    SymmetricTable,
    build_mixture_joint,
    correlation_partition,
    correlation_recursive,
    correlation_recursive_expanded,
    enumerate_set_partitions,
    marginalize,
    probability_from_correlations,
)
from corrcount.ursell import SetPartition

from conftest import ALL_OR_NOTHING_3, make_random_joint


def bell_recurrence(k):
    # Bell(n+1) = sum_j C(n, j) Bell(j), Bell(0) = 1
    bell = [1]
    for n in range(k):
        bell.append(sum(math.comb(n, j) * bell[j] for j in range(n + 1)))
    return bell[k]


def iid_tables(p, k):
    joint = build_mixture_joint(MixtureSpec(((p, 1.0),)), k)
    return [marginalize(joint, j) for j in range(1, k + 1)]


class TestEnumerateSetPartitions:
    def test_single_element(self):
        parts = list(enumerate_set_partitions(1))
        assert parts == [SetPartition(((1,),))]

    def test_three_elements(self):
        parts = list(enumerate_set_partitions(3))
        assert len(parts) == 5
        assert parts[0] == SetPartition(((1, 2, 3),))
        assert SetPartition(((1, 3), (2,))) in parts

    @pytest.mark.parametrize("k", range(1, 10))
    def test_count_matches_bell_recurrence(self, k):
        assert sum(1 for _ in enumerate_set_partitions(k)) == bell_recurrence(k)

    def test_each_partition_once_and_canonical(self):
        seen = set()
        for part in enumerate_set_partitions(6):
            assert part.is_canonical()
            assert part.blocks not in seen
            seen.add(part.blocks)
        assert len(seen) == 203

    def test_stream_is_deterministic(self):
        first = [p.blocks for p in enumerate_set_partitions(5)]
        second = [p.blocks for p in enumerate_set_partitions(5)]
        assert first == second

    def test_bounds(self):
        with pytest.raises(OutOfRangeError):
            list(enumerate_set_partitions(0))
        with pytest.raises(OutOfRangeError):
            list(enumerate_set_partitions(13))


class TestMarginalize:
    def test_iid_half(self):
        joint = build_mixture_joint(MixtureSpec(((0.5, 1.0),)), 3)
        table = marginalize(joint, 2)
        assert table.value_at((1, 1)) == pytest.approx(0.25, abs=1e-15)

    def test_all_or_nothing_first_order(self):
        table = marginalize(ALL_OR_NOTHING_3, 1)
        assert table.value_at((1,)) == pytest.approx(0.5, abs=0)

    def test_all_or_nothing_second_order(self):
        table = marginalize(ALL_OR_NOTHING_3, 2)
        assert table.value_at((1, 1)) == pytest.approx(0.5, abs=0)
        assert table.value_at((1, 0)) == 0.0

    def test_order_bounds(self):
        with pytest.raises(OutOfRangeError):
            marginalize(ALL_OR_NOTHING_3, 4)
        with pytest.raises(OutOfRangeError):
            marginalize(ALL_OR_NOTHING_3, 0)

    def test_against_outcome_enumeration(self, rng):
        # sum the joint over every completion pattern, no binomial shortcut
        for _ in range(10):
            joint = make_random_joint(rng, n=int(rng.integers(2, 7)))
            k = int(rng.integers(1, joint.n + 1))
            table = marginalize(joint, k)
            for head in itertools.product((0, 1), repeat=k):
                brute = math.fsum(
                    joint.pattern_weight[sum(head) + sum(rest)]
                    for rest in itertools.product((0, 1), repeat=joint.n - k)
                )
                assert table.value_at(head) == pytest.approx(brute, abs=1e-14)


class TestCorrelationRecursive:
    def test_iid_second_order_vanishes(self):
        g2 = correlation_recursive(iid_tables(0.375, 2))
        assert max(abs(v) for v in g2.values) == 0.0

    def test_all_or_nothing_second_order(self):
        p_tables = [marginalize(ALL_OR_NOTHING_3, k) for k in (1, 2)]
        g2 = correlation_recursive(p_tables)
        assert g2.value_at((1, 1)) == pytest.approx(0.25, abs=1e-15)
        assert g2.value_at((1, 0)) == pytest.approx(-0.25, abs=1e-15)

    def test_all_or_nothing_third_order_all_ones(self):
        p_tables = [marginalize(ALL_OR_NOTHING_3, k) for k in (1, 2, 3)]
        g3 = correlation_recursive(p_tables)
        # 0.5 - 0.125 - 3 * 0.5 * 0.25 = 0
        assert g3.value_at((1, 1, 1)) == pytest.approx(0.0, abs=1e-15)

    def test_order_cap(self):
        with pytest.raises(OutOfRangeError):
            correlation_recursive(iid_tables(0.5, 11))

    def test_table_sequence_validated(self):
        tables = iid_tables(0.5, 3)
        with pytest.raises(BadShapeError):
            correlation_recursive([tables[0], tables[2]])


def g3_literal(p1, p2, p3, g1, g2, r):
    """Third-order connected part, written out term by term."""
    r1, r2, r3 = r
    return (
        p3.value_at(r)
        - g1.value_at((r1,)) * g1.value_at((r2,)) * g1.value_at((r3,))
        - g1.value_at((r1,)) * g2.value_at((r2, r3))
        - g1.value_at((r2,)) * g2.value_at((r1, r3))
        - g1.value_at((r3,)) * g2.value_at((r1, r2))
    )


def g4_literal(p4, g1, g2, g3, r):
    """Fourth-order connected part: all 14 factorized terms subtracted."""
    r1, r2, r3, r4 = r
    G1 = lambda a: g1.value_at((a,))
    G2 = lambda a, b: g2.value_at((a, b))
    G3 = lambda a, b, c: g3.value_at((a, b, c))
    return (
        p4.value_at(r)
        - G1(r1) * G1(r2) * G1(r3) * G1(r4)
        - G2(r1, r2) * G1(r3) * G1(r4)
        - G2(r1, r3) * G1(r2) * G1(r4)
        - G2(r1, r4) * G1(r2) * G1(r3)
        - G2(r2, r3) * G1(r1) * G1(r4)
        - G2(r2, r4) * G1(r1) * G1(r3)
        - G2(r3, r4) * G1(r1) * G1(r2)
        - G2(r1, r2) * G2(r3, r4)
        - G2(r1, r3) * G2(r2, r4)
        - G2(r1, r4) * G2(r2, r3)
        - G3(r1, r2, r3) * G1(r4)
        - G3(r1, r2, r4) * G1(r3)
        - G3(r1, r3, r4) * G1(r2)
        - G3(r2, r3, r4) * G1(r1)
    )


class TestCorrelationPartition:
    def test_matches_recursive_on_examples(self):
        for tables in (
            iid_tables(0.3, 3),
            [marginalize(ALL_OR_NOTHING_3, k) for k in (1, 2, 3)],
        ):
            for k in range(2, len(tables) + 1):
                a = correlation_recursive(tables[:k])
                b = correlation_partition(tables[:k])
                assert max(abs(x - y) for x, y in zip(a.values, b.values)) < 1e-15

    def test_iid_third_order_vanishes(self):
        g3 = correlation_partition(iid_tables(0.3, 3))
        assert max(abs(v) for v in g3.values) < 1e-16

    def test_fourth_order_against_literal_expansion(self, rng):
        joint = make_random_joint(rng, n=5)
        p_tables = [marginalize(joint, k) for k in range(1, 5)]
        g_tables = [correlation_partition(p_tables[:k]) for k in range(1, 5)]
        g4 = correlation_partition(p_tables)
        g1, g2, g3 = g_tables[0], g_tables[1], g_tables[2]
        for r in itertools.product((0, 1), repeat=4):
            literal = g4_literal(p_tables[3], g1, g2, g3, r)
            assert g4.value_at(r) == pytest.approx(literal, abs=1e-14)

    def test_third_order_against_literal_expansion(self, rng):
        joint = make_random_joint(rng, n=4)
        p_tables = [marginalize(joint, k) for k in range(1, 4)]
        g1 = correlation_partition(p_tables[:1])
        g2 = correlation_partition(p_tables[:2])
        g3 = correlation_partition(p_tables)
        for r in itertools.product((0, 1), repeat=3):
            literal = g3_literal(p_tables[0], p_tables[1], p_tables[2], g1, g2, r)
            assert g3.value_at(r) == pytest.approx(literal, abs=1e-14)


class TestRecursiveVsPartition:
    def test_agreement_on_random_joints(self, rng):
        for _ in range(8):
            joint = make_random_joint(rng, n=int(rng.integers(2, 8)))
            p_tables = [marginalize(joint, k) for k in range(1, min(joint.n, 7) + 1)]
            for k in range(2, len(p_tables) + 1):
                a = correlation_recursive(p_tables[:k])
                b = correlation_partition(p_tables[:k])
                assert max(abs(x - y) for x, y in zip(a.values, b.values)) < 1e-12


class TestExpandedIdentities:
    def test_permutation_symmetry_and_flip(self, rng):
        for _ in range(6):
            joint = make_random_joint(rng, n=int(rng.integers(2, 7)))
            p_tables = [
                marginalize(joint, k) for k in range(1, min(joint.n, 6) + 1)
            ]
            for k in range(2, len(p_tables) + 1):
                expanded = correlation_recursive_expanded(p_tables[:k])
                for pattern, value in expanded.items():
                    for sigma in itertools.permutations(range(k)):
                        permuted = tuple(pattern[i] for i in sigma)
                        assert abs(value - expanded[permuted]) < 1e-12
                    if pattern[0] == 1:
                        assert abs(value + expanded[(0,) + pattern[1:]]) < 1e-12


class TestProbabilityFromCorrelations:
    def test_inverse_of_all_or_nothing_example(self):
        g1 = SymmetricTable.correlation([0.5, 0.5])
        g2 = SymmetricTable.correlation([0.25, -0.25, 0.25])
        g3 = SymmetricTable.correlation([0.0, 0.0, 0.0, 0.0])
        p3 = probability_from_correlations([g1, g2, g3])
        # 0.125 + 3 * 0.5 * 0.25 + 0
        assert p3.value_at((1, 1, 1)) == pytest.approx(0.5, abs=1e-15)

    def test_vanishing_higher_orders_mean_independence(self):
        p = 0.3
        g1 = SymmetricTable.correlation([1 - p, p])
        zeros = [
            SymmetricTable.correlation([0.0] * (k + 1)) for k in range(2, 5)
        ]
        table = probability_from_correlations([g1, *zeros])
        for m in range(5):
            assert table.values[m] == pytest.approx(
                p ** m * (1 - p) ** (4 - m), abs=1e-15
            )

    def test_round_trip_on_random_joint(self, rng):
        joint = make_random_joint(rng, n=6)
        p_tables = [marginalize(joint, k) for k in range(1, 7)]
        g_tables = [correlation_partition(p_tables[:k]) for k in range(1, 7)]
        rebuilt = probability_from_correlations(g_tables)
        assert max(
            abs(a - b) for a, b in zip(rebuilt.values, p_tables[-1].values)
        ) < 1e-12

    def test_marginal_consistency(self, rng):
        # summing the order-k reconstruction over one argument gives order k-1
        joint = make_random_joint(rng, n=5)
        p_tables = [marginalize(joint, k) for k in range(1, 6)]
        g_tables = [correlation_partition(p_tables[:k]) for k in range(1, 6)]
        for k in range(2, 6):
            full = probability_from_correlations(g_tables[:k])
            lower = probability_from_correlations(g_tables[: k - 1])
            for m in range(k):
                summed = full.values[m] + full.values[m + 1]
                assert summed == pytest.approx(lower.values[m], abs=1e-13)

    def test_order_cap(self):
        zeros = [
            SymmetricTable.correlation([0.0] * (k + 1)) for k in range(1, 14)
        ]
        with pytest.raises(OutOfRangeError):
            probability_from_correlations(zeros)


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(2, 6),
    atoms=st.lists(
        st.tuples(st.floats(0.0, 1.0), st.floats(0.05, 1.0)),
        min_size=1,
        max_size=3,
    ),
)
def test_round_trip_property(n, atoms):
    total = math.fsum(w for _, w in atoms)
    norm = [w / total for _, w in atoms]
    norm[-1] = 1.0 - math.fsum(norm[:-1])
    spec = MixtureSpec(tuple((p, w) for (p, _), w in zip(atoms, norm)))
    joint = build_mixture_joint(spec, n)
    p_tables = [marginalize(joint, k) for k in range(1, n + 1)]
    g_tables = [correlation_partition(p_tables[:k]) for k in range(1, n + 1)]
    rebuilt = probability_from_correlations(g_tables)
    assert max(abs(a - b) for a, b in zip(rebuilt.values, p_tables[-1].values)) < 1e-12
