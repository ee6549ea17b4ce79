"""Subdivision sequences, cumulative products, and dimensions."""

import math

import pytest

from laakso import JSequence, SequenceTooShort, hausdorff_dimension, level_products


def test_level_products_explicit():
    seq = JSequence((2, 3, 2, 3))
    assert level_products(seq, 4) == [1, 2, 6, 12, 36]


def test_level_products_periodic_powers_of_two():
    seq = JSequence((2,), periodic=True)
    assert level_products(seq, 5) == [1, 2, 4, 8, 16, 32]


@pytest.mark.parametrize("values,periodic", [
    ((2,), True), ((3,), True), ((2, 3), True), ((5, 2, 4), True),
    ((2, 3, 4, 5), False), ((7, 2), False),
])
def test_column_count_identity(values, periodic):
    # I_n = 2 + I_{n-1}(j_n - 2) + 2(I_{n-1} - 1): vees, loop columns,
    # cross columns tile the level exactly
    seq = JSequence(values, periodic=periodic)
    n_max = 20 if periodic else len(values)
    I = level_products(seq, n_max)
    for n in range(1, n_max + 1):
        j_n = seq.j(n)
        assert I[n] == 2 + I[n - 1] * (j_n - 2) + 2 * (I[n - 1] - 1)


def test_rejects_subdivision_below_two():
    with pytest.raises(ValueError):
        JSequence((1, 2))
    with pytest.raises(ValueError):
        JSequence((2, 0), periodic=True)
    with pytest.raises(ValueError):
        JSequence(())


def test_explicit_sequence_never_extends():
    seq = JSequence((2, 3))
    assert seq.j(2) == 3
    with pytest.raises(SequenceTooShort):
        seq.j(3)
    with pytest.raises(SequenceTooShort):
        level_products(seq, 3)


def test_periodic_indexing_wraps():
    seq = JSequence((2, 3), periodic=True)
    assert [seq.j(i) for i in range(1, 7)] == [2, 3, 2, 3, 2, 3]


def test_hausdorff_dimension_closed_forms():
    assert hausdorff_dimension(JSequence((2,), periodic=True)) == pytest.approx(2.0)
    assert hausdorff_dimension(JSequence((4,), periodic=True)) == pytest.approx(1.5)
    got = hausdorff_dimension(JSequence((2, 3), periodic=True))
    assert got == pytest.approx(1.0 + math.log(4) / math.log(6), abs=1e-14)
    assert got == pytest.approx(1.77371, abs=5e-6)


def test_hausdorff_dimension_explicit_needs_level():
    seq = JSequence((2, 3))
    with pytest.raises(ValueError):
        hausdorff_dimension(seq)
    got = hausdorff_dimension(seq, 2)
    assert got == pytest.approx(1.0 + math.log(4) / math.log(6), abs=1e-14)
