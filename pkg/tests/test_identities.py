import pytest

from genstats.complex import minimal_sphere_triangulation
from genstats.extractor import verify_invariance
from genstats.group import parse_group
from genstats.identities import (IdentitySpec, default_depth, dump_rows, generate_identities,
                                 iter_tuples, min_empty_tuple, parse_rows, saturation_check)
from genstats.linalg import HermiteBasis
from genstats.model import GeneratorLabel, build_model


def sphere_model(d, group, p):
    return build_model(minimal_sphere_triangulation(d), parse_group(group), p)


def lattice(m, rows):
    b = HermiteBasis(m.n_columns)
    for r in rows:
        b.add(dict(r.items()))
    return b.matrix()


@pytest.mark.parametrize("d,p,n_min,depth", [
    (1, 0, 3, 3), (2, 0, 2, 3), (2, 1, 4, 4), (3, 0, 2, 3), (3, 1, 3, 4), (3, 2, 5, 5)])
def test_depths(d, p, n_min, depth):
    assert min_empty_tuple(d, p) == n_min
    assert default_depth(d, p) == depth


def test_triple_commutator_row():
    m = sphere_model(2, "Z2", 0)
    spec = IdentitySpec(tuple(GeneratorLabel(s) for s in [(0, 2), (0, 3), (1, 2)]), (1, 1, 1))
    v = spec.row(m)
    assert len(v) == 8
    assert sorted(c for _, c in v.items()) == [-1] * 4 + [1] * 4
    assert verify_invariance(m, v).ok


def test_disjoint_pair_row():
    m = sphere_model(2, "Z3", 0)
    v = IdentitySpec((GeneratorLabel((0, 1)), GeneratorLabel((2, 3))), (1, 1), a0=4).row(m)
    assert len(v) == 4 and verify_invariance(m, v).ok


def test_spec_rejects_shared_support():
    with pytest.raises(ValueError):
        IdentitySpec((GeneratorLabel((0, 1)), GeneratorLabel((0, 2))), (1, 1))
    with pytest.raises(ValueError):
        IdentitySpec((GeneratorLabel((0, 1)),), (1,))


def test_tuples_have_empty_intersection_and_nonempty_prefixes():
    m = sphere_model(3, "Z2", 1)
    simp = [set(lab.simplex) for lab in m.generators]
    n = 0
    for idx, exps in iter_tuples(m, 4):
        n += 1
        assert not set.intersection(*(simp[i] for i in idx))
        for k in range(2, len(idx)):
            assert set.intersection(*(simp[i] for i in idx[:k]))
        assert exps[-1] == 1
    assert n > 0


@pytest.mark.parametrize("d,p,group", [(1, 0, "Z3"), (2, 0, "Z2"), (2, 1, "Z2"), (3, 0, "Z2")])
def test_pruned_enumeration_spans_same_lattice(d, p, group):
    m = sphere_model(d, group, p)
    full = generate_identities(m, reduced=False)
    pruned = generate_identities(m)
    assert len(pruned) <= len(full)
    assert lattice(m, pruned) == lattice(m, full)


def test_rows_are_invariant():
    for d, p, group in [(2, 0, "Z3"), (2, 1, "Z2"), (3, 2, "Z2")]:
        m = sphere_model(d, group, p)
        rows = generate_identities(m)
        assert rows and all(verify_invariance(m, r).ok for r in rows[::7])


def test_deterministic():
    m = sphere_model(2, "Z4", 0)
    a, b = generate_identities(m), generate_identities(m)
    assert [dict(r.items()) for r in a] == [dict(r.items()) for r in b]
    keys = {tuple(r.sorted_items()) for r in a}
    assert len(keys) == len(a)


@pytest.mark.parametrize("d,p,group", [(1, 0, "Z2"), (2, 0, "Z2"), (2, 1, "Z2"), (3, 2, "Z2")])
def test_default_depth_is_saturated(d, p, group):
    m = sphere_model(d, group, p)
    depth = default_depth(d, p)
    base = generate_identities(m, depth)
    deeper = generate_identities(m, depth + 1)
    assert saturation_check(base, deeper, m.n_columns)


def test_saturation_check_examples():
    assert saturation_check([{0: 2}], [{0: 4}], 2)
    assert not saturation_check([{0: 2}], [{0: 3}], 2)
    assert not saturation_check([], [{1: 1}], 2)
    assert saturation_check([(1, 1)], [(2, 2), (0, 0)], 2)


def test_budget_marks_partial():
    m = sphere_model(2, "Z2", 0)
    rows = generate_identities(m, budget=5)
    assert len(rows) == 5 and rows.partial
    assert not generate_identities(m).partial


def test_dump_parse_round_trip():
    m = sphere_model(3, "Z2", 1)
    rows = generate_identities(m, budget=200)
    text = dump_rows(m, rows)
    assert parse_rows(m, text) == list(rows)
    with pytest.raises(ValueError):
        parse_rows(m, "1*(0;01;0) garbage")
