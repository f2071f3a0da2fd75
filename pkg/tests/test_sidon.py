import math

import pytest

from c4decomp.graphs import complete_graph
from c4decomp.sidon import (
    build_field,
    bose_sidon,
    class_count_for,
    complete_c4_free_colouring,
    next_prime_with,
    sidon_partition,
)
from c4decomp.verify import find_c4, is_sidon, sum_graph, verify_c4_free_colouring


class TestPrimes:
    def test_next_prime_with(self):
        assert next_prime_with(1) == 2
        assert next_prime_with(4) == 3  # 3^2 - 1 = 8 >= 4
        assert next_prime_with(9) == 5
        assert next_prime_with(25) == 7
        with pytest.raises(ValueError):
            next_prime_with(0)


class TestField:
    @pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
    def test_group_structure(self, q):
        field = build_field(q)
        m = q * q - 1
        assert field.group_order == m
        assert len(field.powers) == m
        assert len(field.logs) == m
        # theta^m == 1 and the log/power tables invert each other.
        assert field.powers[0] == (1, 0)
        for k in (0, 1, m // 2, m - 1):
            assert field.log(field.powers[k]) == k

    def test_mul_matches_log_addition(self):
        field = build_field(5)
        m = field.group_order
        x, y = field.powers[7], field.powers[11]
        assert field.log(field.mul(x, y)) == (7 + 11) % m

    def test_rejects_composite(self):
        with pytest.raises(ValueError, match="not prime"):
            build_field(6)


class TestBoseSidon:
    @pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
    def test_is_sidon_of_size_q(self, q):
        field = build_field(q)
        b = bose_sidon(field)
        assert len(b) == q
        assert is_sidon(b, field.group_order)

    def test_sum_graph_is_c4_free(self):
        field = build_field(7)
        assert find_c4(sum_graph(bose_sidon(field), field.group_order)) is None


class TestSidonPartition:
    @pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13, 17])
    def test_partitions_within_budget(self, q):
        part = sidon_partition(q)
        m = q * q - 1
        assert part.m == m
        flat = sorted(x for cls in part.classes for x in cls)
        assert flat == list(range(m))
        for cls in part.classes:
            assert is_sidon(cls, m)
        assert part.class_count <= (q - 1) + math.ceil(2 * math.sqrt(q)) + 2

    def test_cached(self):
        assert sidon_partition(5) is sidon_partition(5)


class TestClassCountFor:
    @pytest.mark.parametrize("t", [9, 12, 20, 26, 50])
    def test_agrees_with_materialised_colouring(self, t):
        q = next_prime_with(t)
        part = sidon_partition(q)
        from c4decomp.sidon import _colour_by_partition

        colouring = _colour_by_partition(complete_graph(t), part)
        assert class_count_for(t, q) == colouring.class_count


class TestCompleteColouring:
    @pytest.mark.parametrize("t", [2, 3, 5, 8, 9, 16, 25, 40, 64])
    def test_c4_free_and_total(self, t):
        colouring = complete_c4_free_colouring(t)
        assert verify_c4_free_colouring(complete_graph(t), colouring).ok

    @pytest.mark.parametrize("t", [9, 16, 25, 40, 64, 100])
    def test_budget(self, t):
        assert complete_c4_free_colouring(t).class_count <= math.ceil(2 * math.sqrt(t))

    def test_tiny_orders_are_exactly_optimal(self):
        # Exact optima for t < 9, cross-checked against the backtracking
        # oracle inside the fallback path.
        assert complete_c4_free_colouring(2).class_count == 1
        assert complete_c4_free_colouring(3).class_count == 1
        assert complete_c4_free_colouring(4).class_count == 2
        assert complete_c4_free_colouring(5).class_count == 2
        assert complete_c4_free_colouring(8).class_count == 3

    def test_deterministic(self):
        a = complete_c4_free_colouring(30)
        b = complete_c4_free_colouring(30)
        assert a.colour_of == b.colour_of

    def test_rejects_t_below_two(self):
        with pytest.raises(ValueError):
            complete_c4_free_colouring(1)
