import itertools
import math
import random

import pytest

from genstats.complex import (Chain, ComplexError, SimplicialComplex, UnsupportedComplexError,
                              boundary, format_complex, minimal_sphere_triangulation,
                              parse_complex, support_intersection)
from genstats.group import make_group


@pytest.mark.parametrize("d,counts", [(1, [3, 3]), (2, [4, 6, 4]), (3, [5, 10, 10, 5])])
def test_minimal_sphere_counts(d, counts):
    X = minimal_sphere_triangulation(d)
    assert X.dimension == d
    assert [X.count(k) for k in range(d + 1)] == counts
    assert counts == [math.comb(d + 2, k + 1) for k in range(d + 1)]
    X.check()


def test_minimal_sphere_rejects_low_dimension():
    with pytest.raises(ComplexError):
        minimal_sphere_triangulation(0)


def test_boundary_examples():
    Z2, Z3 = make_group([2]), make_group([3])
    b = boundary(Chain(2, Z2, {(0, 1, 2): [1]}))
    assert b == Chain(1, Z2, {(0, 1): [1], (0, 2): [1], (1, 2): [1]})
    b = boundary(Chain(1, Z3, {(0, 1): [1]}))
    assert b == Chain(0, Z3, {(0,): [2], (1,): [1]})
    with pytest.raises(ComplexError):
        boundary(Chain(0, Z3, {(0,): [1]}))


@pytest.mark.parametrize("orders", [[2], [3], [6], [2, 3], [4, 4], [6, 6]])
def test_boundary_squares_to_zero(orders):
    G = make_group(orders)
    rng = random.Random(1)
    for d in (1, 2, 3):
        X = minimal_sphere_triangulation(d)
        for k in range(2, d + 1):
            for s in X[k]:
                for g in G.generators():
                    assert boundary(boundary(Chain(k, G, {s: g}))).is_zero()
            c = Chain(k, G, {s: [rng.randrange(n) for n in orders] for s in X[k]})
            assert boundary(boundary(c)).is_zero()


def test_support_intersection_examples():
    assert support_intersection([(0, 1, 2), (0, 3, 4)]) == (0,)
    assert support_intersection([(0, 1, 2), (1, 3, 4), (2, 3, 4)]) is None
    assert support_intersection([(0, 1, 2), (0, 1, 3), (0, 2, 3)]) == (0,)


def test_support_intersection_rejects_non_simplex():
    X = SimplicialComplex.from_maximal([(0, 1, 3), (0, 1, 4)])
    assert support_intersection([(0, 1, 3), (0, 1, 4)], X) == (0, 1)
    # drop the shared edge so the common vertex set is not a simplex
    hollow = SimplicialComplex(tuple(tuple(s for s in level if s != (0, 1)) for level in X.simplices))
    with pytest.raises(UnsupportedComplexError):
        support_intersection([(0, 1, 3), (0, 1, 4)], hollow)


def test_parse_complex():
    X = parse_complex("tetra: 0 1 2 3")
    assert [X.count(k) for k in range(4)] == [4, 6, 4, 1]
    S3 = minimal_sphere_triangulation(3)
    assert parse_complex(format_complex(S3)) == S3
    text = "# sphere\ndim 3\n" + "\n".join(" ".join(map(str, s)) for s in itertools.combinations(range(5), 4))
    assert parse_complex(text) == S3
    with pytest.raises(ComplexError):
        parse_complex("0 0 1")
    with pytest.raises(ComplexError):
        parse_complex("dim 2\n0 1 2 3")


def test_parsed_complex_is_closed():
    X = parse_complex("0 1 2\n2 3\n3 4 5 6")
    for k in range(1, X.dimension + 1):
        for s in X[k]:
            for f in itertools.combinations(s, len(s) - 1):
                assert f in X


def test_chain_arithmetic():
    G = make_group([4])
    a = Chain(1, G, {(0, 1): [1], (1, 2): [3]})
    assert (a + (-a)).is_zero()
    assert a.scaled(4).is_zero()
    assert (a - a.scaled(2)) == -a
    assert Chain(1, G, {(0, 1): [0]}).coeffs == {}
