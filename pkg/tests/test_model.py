import math
import random

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form

from genstats.complex import Chain, ComplexError, faces, minimal_sphere_triangulation
from genstats.group import make_group, parse_group
from genstats.model import (GeneratorLabel, ResourceLimitError, ThetaVector, Word, WordError,
                            build_model, commutator, commutator_word, evaluate_word, letter,
                            parse_word, restrict_configuration, shift_vector)


def sphere_model(d, group, p):
    return build_model(minimal_sphere_triangulation(d), parse_group(group), p)


@pytest.mark.parametrize("d,group,p,nS,nA", [
    (2, "Z2", 0, 6, 8), (3, "Z2", 1, 10, 64), (1, "Z3", 0, 3, 9),
    (2, "Z2xZ2", 1, 8, 64), (3, "Z3", 2, 5, 81),
])
def test_model_sizes(d, group, p, nS, nA):
    m = sphere_model(d, group, p)
    assert (m.n_generators, m.n_configs) == (nS, nA)


def image_order(d, N, p):
    """|im(boundary_{p+1})| over Z_N from the integer Smith form of the boundary matrix."""
    X = minimal_sphere_triangulation(d)
    rows = {s: i for i, s in enumerate(X[p])}
    B = sympy.zeros(len(X[p]), len(X[p + 1]))
    for j, s in enumerate(X[p + 1]):
        for i, f in enumerate(faces(s)):
            B[rows[f], j] += (-1) ** i
    D = smith_normal_form(B, domain=sympy.ZZ)
    out = 1
    for i in range(min(D.shape)):
        if D[i, i]:
            out *= N // math.gcd(N, int(D[i, i]))
    return out


@pytest.mark.parametrize("d,N,p", [(1, 4, 0), (2, 3, 0), (2, 4, 1), (3, 2, 0), (3, 3, 1), (3, 2, 2)])
def test_configuration_count_matches_boundary_image(d, N, p):
    m = sphere_model(d, f"Z{N}", p)
    assert m.n_configs == image_order(d, N, p)
    assert (N ** len(m.X[p + 1])) % m.n_configs == 0


def test_configurations_closed_and_sorted():
    m = sphere_model(2, "Z3", 0)
    assert m.config_index(Chain(0, m.G, {})) == 0
    assert list(m.codes) == sorted(m.codes)
    for s in range(m.n_generators):
        assert sorted(m.step[s].tolist()) == list(range(m.n_configs))
        assert all(m.back[s, m.step[s, a]] == a for a in range(m.n_configs))


def test_config_cap():
    with pytest.raises(ResourceLimitError, match="cap of 10"):
        build_model(minimal_sphere_triangulation(3), make_group([2]), 1, cap=10)


def test_invalid_degree():
    with pytest.raises(ComplexError):
        build_model(minimal_sphere_triangulation(2), make_group([2]), 2)


def test_inverse_pair_is_zero():
    m = sphere_model(2, "Z3", 0)
    w = letter((0, 1), -1) * letter((0, 1))
    for a in range(m.n_configs):
        v, fin = evaluate_word(m, w, a)
        assert not v and fin == a


def test_t_junction_from_particles_at_1_2():
    m = sphere_model(2, "Z2", 0)
    a = m.config_index({(1,): [1], (2,): [1]})
    w = parse_word("U[02] U[03]^-1 U[01] U[02]^-1 U[03] U[01]^-1")
    v, fin = evaluate_word(m, w, a)
    assert fin == a
    assert len(v) == 6 and sorted(abs(c) for _, c in v.items()) == [1] * 6
    assert sum(c for _, c in v.items()) == 0


def test_two_letter_commutator_terms():
    m = sphere_model(3, "Z3", 0)
    A, B = letter((0, 1)), letter((2, 3))
    s1, s2 = m.label_index(GeneratorLabel((0, 1))), m.label_index(GeneratorLabel((2, 3)))
    for a in range(0, m.n_configs, 7):
        v, fin = evaluate_word(m, commutator(B, A), a)
        assert fin == a
        up1, up2 = int(m.step[s1, a]), int(m.step[s2, a])
        want = ThetaVector({m.column(s1, a): 1, m.column(s2, up1): 1,
                            m.column(s1, up2): -1, m.column(s2, a): -1})
        assert v == want


def test_commutator_word_lengths():
    a, b, c = letter((0, 1)), letter((0, 2)), letter((1, 2))
    assert str(commutator_word([a, b])) == "U[0;01]^-1 U[0;02]^-1 U[0;01] U[0;02]"
    assert len(commutator_word([a, b, c])) == 10
    with pytest.raises(WordError):
        commutator_word([a])


def test_eight_term_triple_commutator():
    m = sphere_model(2, "Z2", 0)
    w = commutator_word([letter((0, 2)), letter((0, 3)), letter((1, 2))])
    v, fin = evaluate_word(m, w, 0)
    assert fin == 0 and len(v) == 8


def test_word_then_inverse_is_zero():
    rng = random.Random(3)
    for d, group, p in [(2, "Z3", 0), (3, "Z2", 1), (2, "Z2xZ2", 1)]:
        m = sphere_model(d, group, p)
        for _ in range(100):
            letters = tuple((rng.choice(m.generators), rng.choice((1, -1))) for _ in range(rng.randint(1, 12)))
            w = Word(letters)
            a0 = rng.randrange(m.n_configs)
            v, fin = evaluate_word(m, w.inverse() * w, a0)
            assert not v and fin == a0


def test_parse_word_forms():
    w = parse_word("U[b;013]^-1 U[0;0,2] U[01]^2  # comment")
    assert [(lab.simplex, lab.gen_index, e) for lab, e in w] == [
        ((0, 1, 3), 1, -1), ((0, 2), 0, 1), ((0, 1), 0, 1), ((0, 1), 0, 1)]
    assert len(parse_word("")) == 0
    with pytest.raises(WordError):
        parse_word("U[01] junk")
    with pytest.raises(WordError):
        parse_word("U[001]")
    with pytest.raises(WordError):
        evaluate_word(sphere_model(2, "Z2", 0), parse_word("U[013]"))


def test_restrict_configuration():
    m = sphere_model(2, "Z2", 1)
    a = m.config_index(Chain(1, m.G, {(0, 1): [1], (0, 2): [1], (1, 2): [1]}))
    r = restrict_configuration(m, a, 0)
    assert set(r.coeffs) == {(0, 1), (0, 2)}
    assert restrict_configuration(m, a, 3).is_zero()
    assert all(restrict_configuration(m, 0, v).is_zero() for v in range(4))


def test_shift_vector_moves_start():
    m = sphere_model(2, "Z3", 0)
    w = parse_word("U[02] U[03]^-1 U[01] U[02]^-1 U[03] U[01]^-1")
    v0, _ = evaluate_word(m, w, 0)
    for a in range(m.n_configs):
        va, _ = evaluate_word(m, w, a)
        assert shift_vector(m, v0, a) == va


def test_describe_column():
    m = sphere_model(2, "Z2", 0)
    s = m.label_index(GeneratorLabel((0, 2)))
    assert m.describe_column(m.column(s, 5)) == "(0;02;5)"
