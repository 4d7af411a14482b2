import numpy as np
import pytest

from artifact import repth
from artifact.chars import MultChar
from artifact.expsums import composite_char
from artifact.fields import FieldError
from artifact.glq import class_representative, enumerate_classes, gl_order, parse_class, tower_for


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (4, 2), (2, 4)])
def test_character_table_orthogonality(q, n):
    params, X = repth.character_table(q, n)
    sizes = repth.class_sizes(q, n)
    G = gl_order(n, q)
    assert len(params) == len(enumerate_classes(q, n))
    assert np.allclose((X * sizes) @ X.conj().T / G, np.eye(len(params)), atol=1e-9)
    # column orthogonality
    assert np.allclose(X.conj().T @ X, np.diag(G / sizes), atol=1e-8)


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_dimensions(q, n):
    dims = [repth.dimension(phi) for phi in repth.green_parameters(q, n)]
    assert sum(d * d for d in dims) == gl_order(n, q)
    idl = repth.identity_label(n)
    for phi, d in zip(repth.green_parameters(q, n), dims):
        assert repth.irreducible_character(phi)(idl) == pytest.approx(d)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gl2_degrees(q):
    dims = sorted(repth.dimension(phi) for phi in repth.green_parameters(q, 2))
    expect = sorted([1] * (q - 1) + [q] * (q - 1) + [q + 1] * ((q - 1) * (q - 2) // 2)
                    + [q - 1] * (q * (q - 1) // 2))
    assert dims == expect


def test_gl2_f2_is_s3():
    # GL_2(F_2) = S_3: classes identity, transvections (order 2), order-3 elements
    labels = [parse_class(s, 2) for s in ("1:0:[1,1]", "1:0:[2]", "2:1:[1]")]
    table = {str(phi): [repth.irreducible_character(phi)(x) for x in labels]
             for phi in repth.green_parameters(2, 2)}
    # single-row partitions label generic characters: (2) is the Steinberg character
    assert np.allclose(table["1:0:[1,1]"], [1, 1, 1])
    assert np.allclose(table["1:0:[2]"], [2, 0, -1])
    assert np.allclose(table["2:1:[1]"], [1, -1, 1])


def test_green_parameters():
    phi = repth.parse_green("1:1:[1];2:1:[1]", 3)
    assert phi.n == 3 and repth.is_generic(phi)
    assert phi.cuspidal_support() == [(1, 1), (2, 1)]
    assert str(phi.contragredient()) == "1:1:[1];2:5:[1]"
    with pytest.raises(FieldError):
        repth.parse_green("2:0:[1]", 3)
    with pytest.raises(FieldError):
        repth.parse_green("1:1:[1];1:1:[2]", 3)


def test_class_function_basics():
    f = repth.delta(2, 2, repth.identity_label(2))
    assert f.inner(f) == pytest.approx(1 / 6)
    g = (f + f) * 0.5 - f
    assert np.allclose(g.values, 0)
    with pytest.raises(FieldError):
        repth.ClassFunction.from_dict(2, 2, {parse_class("1:0:[1]", 2): 1})
    with pytest.raises(ValueError):
        repth.ClassFunction(2, 2, [1, 2])


def test_charmap_is_isometry():
    q, n = 2, 3
    chars = [repth.irreducible_character(phi) for phi in repth.green_parameters(q, n)]
    images = [repth.charmap(ch) for ch in chars]
    for i in range(len(chars)):
        for j in range(len(chars)):
            assert repth.lambda_inner(images[i], images[j]) == pytest.approx(
                chars[i].inner(chars[j]), abs=1e-9)


def test_parabolic_induction():
    triv = repth.irreducible_character(repth.parse_green("1:0:[1]", 3))
    ind = repth.parabolic_induce(triv, triv)
    assert ind(repth.identity_label(2)) == pytest.approx(4)
    # Ind(1 x 1) = 1 + Steinberg
    st = repth.irreducible_character(repth.parse_green("1:0:[2]", 3))
    one = repth.irreducible_character(repth.parse_green("1:0:[1,1]", 3))
    assert np.allclose(ind.values, (st + one).values)
    brute = repth.parabolic_induce(triv, triv, path="brute")
    assert np.allclose(brute.values, ind.values)


def test_roundtrip_transitions():
    for q, orbit, k in [(2, (1, 0), 2), (2, (2, 1), 1), (3, (1, 1), 2), (3, (2, 1), 1)]:
        assert repth.roundtrip_error(q, orbit, k) < 1e-9


@pytest.mark.parametrize("q,k,c", [(2, 2, 2), (3, 2, 2), (2, 2, 3), (2, 3, 1)])
def test_speh_character_two_routes(q, k, c):
    tower = tower_for(q)
    alpha = MultChar(tower, k, 1)
    a = repth.speh_character(alpha, c)
    b = repth.speh_character(alpha, c, path="green")
    assert np.allclose(a.values, b.values, atol=1e-9)
    assert a.inner(a) == pytest.approx(1)


def test_speh_needs_regular():
    with pytest.raises(FieldError):
        repth.speh_character(MultChar(tower_for(2), 2, 0), 2)


def test_bessel_at_identity():
    for phi in repth.green_parameters(3, 2):
        if repth.is_generic(phi):
            g = class_representative(repth.identity_label(2), 3)
            assert repth.bessel(phi, g) == pytest.approx(1)
    with pytest.raises(FieldError):
        repth.bessel(repth.parse_green("1:0:[1,1]", 3), class_representative(repth.identity_label(2), 3))


def test_bessel_speh_gl1():
    tower = tower_for(3)
    alpha = MultChar(tower, 1, 1)
    h = np.array([[2]])
    # k = 1: B(h) = alpha(det h) psi(tr h^{-1})
    assert repth.bessel_speh_value(alpha, 1, h) == pytest.approx(-np.exp(2j * np.pi * 2 / 3))


@pytest.mark.parametrize("q,c", [(2, 2), (3, 2)])
def test_kondo_paths(q, c):
    tower = tower_for(q)
    for phi in repth.green_parameters(q, c):
        for j in range(q - 1):
            chi = MultChar(tower, 1, j)
            brute = repth.kondo_scalar(phi, chi, "brute")
            assert brute == pytest.approx(repth.kondo_scalar(phi, chi, "kondo"), abs=1e-9)
            assert brute == pytest.approx(repth.kondo_scalar(phi, chi, "closed"), abs=1e-9)
    with pytest.raises(FieldError):
        repth.kondo_scalar(repth.green_parameters(q, c)[0], MultChar(tower, 2, 1), "kondo")


def test_epsilon_equals_gamma():
    tower = tower_for(2)
    alpha = composite_char(tower, (2,), (1,))
    phi_tau = repth.generic_parameter(alpha)
    for phi in repth.green_parameters(2, 2):
        assert repth.gamma_GK(phi, alpha) == pytest.approx(repth.epsilon0(phi, phi_tau), abs=1e-9)


def test_central_sign():
    for phi in repth.green_parameters(3, 2):
        assert abs(repth.central_sign(phi)) == pytest.approx(1)
    tower = tower_for(3)
    # omega(-1) for the cuspidal with parameter chi of F_9^x is chi(-1) restricted to F_3
    phi = repth.cuspidal_parameter(MultChar(tower, 2, 1))
    assert repth.central_sign(phi) == pytest.approx(np.exp(2j * np.pi * 4 / 8))
