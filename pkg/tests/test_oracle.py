import pytest

from genstats.oracle import expected_factors, invariant_factors, same_group


@pytest.mark.parametrize("orders,want", [
    ([2, 3], [6]), ([2, 2], [2, 2]), ([4, 2], [2, 4]), ([6, 4], [2, 12]),
    ([], []), ([12, 18, 8], [2, 12, 72]), ([5], [5])])
def test_invariant_factors(orders, want):
    assert invariant_factors(orders) == want


def test_invariant_factors_rejects_free():
    with pytest.raises(ValueError):
        invariant_factors([0, 2])


@pytest.mark.parametrize("d,p,orders,want", [
    (2, 0, [2], [4]), (2, 0, [3], [3]), (2, 0, [4], [8]), (2, 0, [5], [5]),
    (3, 0, [2], [2]), (3, 0, [3], []), (3, 0, [4], [2]),
    (1, 0, [3], [3]), (1, 0, [2, 2], [2, 2, 2]),
    (2, 1, [2], []), (2, 1, [2, 2], [2, 2]),
    (3, 1, [2], [2]), (3, 2, [2], [2]), (3, 2, [3], [3]),
    (2, 0, [2, 2], [2, 4, 4]),
])
def test_expected_factors(d, p, orders, want):
    assert expected_factors(d, p, orders) == want


def test_unknown_case():
    with pytest.raises(KeyError):
        expected_factors(4, 0, [2])


def test_same_group():
    assert same_group([2, 3], [6])
    assert same_group([1, 4], [4])
    assert not same_group([2, 2], [4])
