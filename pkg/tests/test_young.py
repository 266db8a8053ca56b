from itertools import product
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from gtprobe.young import (
    GammaParams,
    as_diagram,
    branching_restrictions,
    gamma_chain,
    gamma_content,
    gamma_plus_shape,
    gamma_shape,
    hook_length_dimension,
    interlaces,
    is_valid_chain,
    partitions,
    row,
    weyl_dimension,
)


def count_ssyt(shape, d):
    """Brute-force count of semistandard fillings with alphabet 1..d.

    Independent oracle for weyl_dimension: the GT basis of the irrep is
    indexed by exactly these fillings.
    """
    shape = tuple(shape)
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    if not cells:
        return 1

    def rec(pos, filling):
        if pos == len(cells):
            return 1
        r, c = cells[pos]
        total = 0
        for v in range(1, d + 1):
            if c > 0 and v < filling[r, c - 1]:
                continue
            if r > 0 and v <= filling[r - 1, c]:
                continue
            filling[r, c] = v
            total += rec(pos + 1, filling)
            del filling[r, c]
        return total

    return rec(0, {})


@st.composite
def diagram_strategy(draw, max_rows=4, max_part=5):
    nrows = draw(st.integers(0, max_rows))
    rows = sorted(
        draw(st.lists(st.integers(1, max_part), min_size=nrows, max_size=nrows)),
        reverse=True,
    )
    return tuple(rows)


class TestDiagramBasics:
    def test_as_diagram_strips_trailing_zeros(self):
        assert as_diagram((3, 1, 0, 0)) == (3, 1)
        assert as_diagram(()) == ()
        assert as_diagram((0,)) == ()

    def test_as_diagram_rejects_increasing(self):
        with pytest.raises(ValueError):
            as_diagram((1, 2))

    def test_as_diagram_rejects_negative(self):
        with pytest.raises(ValueError):
            as_diagram((2, -1))

    def test_row_padding(self):
        assert row((3, 1), 1) == 3
        assert row((3, 1), 2) == 1
        assert row((3, 1), 3) == 0


class TestInterlacing:
    def test_known_chain(self):
        assert interlaces((3, 3, 1), (4, 3, 1))
        assert interlaces((3, 1), (3, 3, 1))
        assert interlaces((2,), (3, 1))

    def test_empty_interlaces_single_row(self):
        for k in range(8):
            assert interlaces((), (k,))

    def test_row_too_long(self):
        assert not interlaces((4,), (3, 3))

    def test_too_many_rows(self):
        assert not interlaces((1, 1, 1), (2, 1))

    @given(diagram_strategy())
    def test_every_diagram_interlaces_itself(self, lam):
        assert interlaces(lam, lam)


class TestWeylDimension:
    def test_defining_representation(self):
        for d in range(1, 8):
            assert weyl_dimension((1,), d) == d

    def test_single_row(self):
        assert weyl_dimension((4,), 2) == 5

    def test_adjoint_like(self):
        assert weyl_dimension((2, 1), 3) == 8

    def test_empty_diagram_is_trivial_rep(self):
        assert weyl_dimension((), 4) == 1

    def test_too_many_rows_vanishes(self):
        assert weyl_dimension((1, 1, 1), 2) == 0

    def test_matches_ssyt_count(self):
        for d in (2, 3):
            for n in range(0, 7):
                for lam in partitions(n, d):
                    assert weyl_dimension(lam, d) == count_ssyt(lam, d), (lam, d)


class TestBranching:
    def test_column(self):
        assert branching_restrictions((1, 1), 2) == [(1,)]

    def test_row(self):
        assert branching_restrictions((2,), 2) == [(), (1,), (2,)]

    def test_rectangle_is_rigid(self):
        for d in (2, 3, 4):
            for L in (1, 2, 3):
                lam = (L,) * d
                assert branching_restrictions(lam, d) == [(L,) * (d - 1)]

    def test_d_one_has_no_restrictions(self):
        assert branching_restrictions((3,), 1) == []

    def test_lexicographic_order(self):
        out = branching_restrictions((3, 2), 3)
        assert out == sorted(out)

    def test_members_interlace(self):
        for mu in branching_restrictions((4, 2, 1), 4):
            assert interlaces(mu, (4, 2, 1))
            assert len(mu) <= 3

    def test_dimension_sum_rule(self):
        for d in range(2, 7):
            for n in range(0, 11):
                for lam in partitions(n, d):
                    total = sum(
                        weyl_dimension(mu, d - 1)
                        for mu in branching_restrictions(lam, d)
                    )
                    assert total == weyl_dimension(lam, d), (lam, d)


class TestHookLengths:
    def test_single_row(self):
        for n in range(1, 9):
            assert hook_length_dimension((n,)) == 1

    def test_known_values(self):
        assert hook_length_dimension((3, 1)) == 3
        assert hook_length_dimension((2, 1)) == 2
        assert hook_length_dimension(()) == 1

    def test_square_sum_is_factorial(self):
        for n in range(1, 9):
            total = sum(hook_length_dimension(lam) ** 2 for lam in partitions(n))
            assert total == factorial(n)

    def test_schur_weyl_dimension_identity(self):
        for d in (2, 3):
            for n in range(1, 7):
                total = sum(
                    weyl_dimension(lam, d) * hook_length_dimension(lam)
                    for lam in partitions(n, d)
                )
                assert total == d**n


class TestGammaFamily:
    def test_params_validation(self):
        with pytest.raises(ValueError):
            GammaParams(1, 1, 0)
        with pytest.raises(ValueError):
            GammaParams(2, 0, 0)
        with pytest.raises(ValueError):
            GammaParams(2, 1, 2)

    def test_derived_quantities(self):
        p = GammaParams(3, 2, 1)
        assert p.N == 8
        assert p.n == 12

    def test_shapes(self):
        assert gamma_shape(GammaParams(2, 1, 0)) == (4,)
        assert gamma_shape(GammaParams(2, 1, 1)) == (3, 1)
        assert gamma_shape(GammaParams(3, 1, 1)) == (4, 1, 1)
        assert gamma_plus_shape(GammaParams(2, 1, 0)) == (5,)
        assert gamma_plus_shape(GammaParams(2, 1, 1)) == (4, 1)
        assert gamma_plus_shape(GammaParams(3, 1, 0)) == (6, 1)

    def test_box_counts(self):
        for d, L in product(range(2, 7), range(1, 11)):
            for i in range(L + 1):
                p = GammaParams(d, L, i)
                assert sum(gamma_shape(p)) == 2 * d * L
                assert sum(gamma_plus_shape(p)) == 2 * d * L + 1

    def test_two_routes_to_next_grown_shape(self):
        # Adding the deep-row box to gamma_i gives the same diagram as
        # growing the (i+1)-th member in row 1.
        for d, L in product(range(2, 7), range(1, 8)):
            for i in range(L):
                p = GammaParams(d, L, i)
                grown = list(gamma_shape(p)) + [0] * (d - len(gamma_shape(p)))
                grown[d - 1] += 1
                assert as_diagram(grown) == gamma_plus_shape(GammaParams(d, L, i + 1))

    def test_chain_examples(self):
        assert gamma_chain(GammaParams(2, 1, 1)) == ((1,), (3, 1))
        assert gamma_chain(GammaParams(2, 1, 0)) == ((1,), (4,))

    def test_chain_is_valid_and_top_boxes_split(self):
        for d, L in product(range(2, 6), range(1, 6)):
            for i in range(L + 1):
                p = GammaParams(d, L, i)
                chain = gamma_chain(p)
                assert is_valid_chain(chain)
                top, below = chain[-1], chain[-2]
                assert row(top, 1) - row(below, 1) == p.N - i
                assert row(top, d) - row(below, d) == i

    def test_content(self):
        assert gamma_content(2, 1) == (1, 3)
        assert gamma_content(3, 2) == (2, 2, 8)
        for d, L in product(range(2, 6), range(1, 6)):
            assert sum(gamma_content(d, L)) == 2 * d * L


class TestPartitions:
    def test_counts(self):
        known = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
        for n, expect in enumerate(known):
            assert len(partitions(n)) == expect

    def test_max_rows_filter(self):
        assert set(partitions(4, 2)) == {(4,), (3, 1), (2, 2)}

    @given(st.integers(0, 12))
    @settings(max_examples=20)
    def test_all_sum_to_n(self, n):
        for lam in partitions(n):
            assert sum(lam) == n
            assert as_diagram(lam) == lam
