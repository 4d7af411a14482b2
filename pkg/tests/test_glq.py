import numpy as np
import pytest

from artifact.fields import FieldError
from artifact.glq import (MatrixGL, bdet, binv, bmatmul, centralizer_order, class_representative,
                          class_size, classify_batch, enumerate_classes, gl_order, group_batches,
                          identify_class, identity, make_label, matrix_from_ints, norm_histogram,
                          orbits_of_degree, parse_class, shintani_norm_class, tower_for,
                          unipotent_batch)

import oracles


def test_orders():
    assert gl_order(2, 2) == 6
    assert gl_order(3, 2) == 168
    assert gl_order(2, 3) == 48


def test_tower_for_rejects_non_prime_powers():
    with pytest.raises(FieldError):
        tower_for(6)
    assert tower_for(9).q == 9


@pytest.mark.parametrize("q,n,count", [(2, 2, 3), (3, 2, 8), (4, 2, 15), (2, 3, 6), (3, 3, 24),
                                       (2, 4, 14)])
def test_class_counts_and_sizes(q, n, count):
    labels = enumerate_classes(q, n)
    assert len(labels) == count
    assert sum(class_size(lab, q) for lab in labels) == gl_order(n, q)
    for lab in labels:
        assert class_size(lab, q) * centralizer_order(lab, q) == gl_order(n, q)


def test_orbits_of_degree():
    assert orbits_of_degree(2, 2) == [(2, 1)]
    assert len(orbits_of_degree(3, 2)) == 3
    assert len(orbits_of_degree(2, 4)) == 3


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (4, 2), (2, 4), (3, 3)])
def test_representatives_classify_back(q, n):
    for lab in enumerate_classes(q, n):
        assert identify_class(class_representative(lab, q)) == lab


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3)])
def test_classification_counts_match_sizes(q, n):
    tower = tower_for(q)
    counts = {}
    for A in group_batches(tower, n, 1):
        for lab in classify_batch(tower, 1, A):
            counts[lab] = counts.get(lab, 0) + 1
    assert counts == {lab: class_size(lab, q) for lab in enumerate_classes(q, n)}


@pytest.mark.parametrize("q", [2, 3])
def test_class_sizes_against_orbit_enumeration(q):
    tower = tower_for(q)
    ref = oracles.gl2_classes(oracles.naive_field(tower, 1))
    for lab in enumerate_classes(q, 2):
        M = class_representative(lab, q).to_ints()
        tr, det = (M[0][0] + M[1][1]) % q, (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % q
        scalar = M[0][1] == M[1][0] == 0 and M[0][0] == M[1][1]
        assert ref[((tr,), (det,), scalar)] == class_size(lab, q)


def test_matrix_operations():
    tower = tower_for(3)
    A = matrix_from_ints(tower, 1, [[1, 2], [0, 1]])
    B = matrix_from_ints(tower, 1, [[2, 0], [1, 1]])
    L = tower.level(1)
    assert (A @ A.inverse()).to_ints() == identity(tower, 1, 2).to_ints()
    assert L.mul((A @ B).det(), 1) == L.mul(A.det(), B.det())
    assert A.embed(2).frob().to_ints() == A.embed(2).to_ints()
    assert A.is_invertible()


def test_batched_inverse_and_det():
    tower = tower_for(2)
    L = tower.level(2)
    A = np.concatenate(list(group_batches(tower, 2, 2)))
    I = bmatmul(L, A, binv(L, A))
    assert np.all(I == np.eye(2, dtype=np.int64))
    d = bdet(L, A)
    assert np.all(d != 0)


def test_shintani_counts():
    """x in GL_c(F_{q^k}) with N(x) in C number |GL_c(F_{q^k})| |C| / |GL_c(F_q)|."""
    for q, c, k in [(2, 2, 2), (2, 2, 3), (3, 2, 2)]:
        H = norm_histogram(q, c, k)
        per_class = H.sum(axis=(1, 2))
        sizes = np.array([class_size(lab, q) for lab in enumerate_classes(q, c)])
        assert np.all(per_class * gl_order(c, q) == gl_order(c, q ** k) * sizes)


def test_shintani_of_scalar():
    tower = tower_for(2)
    x = MatrixGL(tower, 2, np.array([[2, 0], [0, 2]], dtype=np.int64))  # g_2 I
    # N(g_2) = g_1 = 1, so the norm class is the identity
    assert str(shintani_norm_class(x)) == "1:0:[1,1]"


def test_parse_class():
    lab = parse_class("1:0:[2];2:1:[1]", 2)
    assert lab.n == 4 and str(lab) == "1:0:[2];2:1:[1]"
    assert parse_class("2:2:[1]", 2) == parse_class("2:1:[1]", 2)
    for bad in ["1:0", "2:0:[1]", "1:5:[1]", "x:y:[1]"]:
        with pytest.raises(FieldError):
            parse_class(bad, 2)
    with pytest.raises(FieldError):
        make_label([((1, 0), (1,)), ((1, 0), (2,))])


def test_unipotent_batch():
    tower = tower_for(3)
    U = unipotent_batch(tower, 3)
    assert len(U) == 27
    assert np.all(np.diagonal(U, axis1=1, axis2=2) == 1)
    V = unipotent_batch(tower, 4, (2, 2))
    assert len(V) == 3 ** 4
