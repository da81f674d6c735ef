import math

import numpy as np
import pytest

from channel_purity.linalg import (Exponent, Spectrum, check_hermitian,
                                   check_pure_state, dagger, eig_hermitian,
                                   eigh_hermitian, kron, kron_vec,
                                   matrix_power_psd, power_from_eigh,
                                   partial_trace, random_density,
                                   random_hermitian, random_pure_state,
                                   random_unitary, schatten_norm)
from channel_purity.utils import (DimensionMismatch, InvalidExponent,
                                  NotHermitian)


def loop_kron(a, b):
    (m, n), (p, q) = a.shape, b.shape
    out = np.zeros((m * p, n * q), dtype=complex)
    for i in range(m):
        for j in range(n):
            for k in range(p):
                for l in range(q):
                    out[i * p + k, j * q + l] = a[i, j] * b[k, l]
    return out


@pytest.mark.parametrize('text, value', (
    ('2', 2.0),
    ('4.7823', 4.7823),
    (' inf ', math.inf),
    ('Infinity', math.inf),
))
def test_exponent_parse(text, value):
    assert Exponent.parse(text).value == value


@pytest.mark.parametrize('bad', ('1', '0.5', '-3', 'nan', 'abc', '1.0'))
def test_exponent_rejects(bad):
    with pytest.raises(InvalidExponent):
        Exponent.parse(bad)


def test_exponent_infinite_is_distinct():
    assert Exponent.coerce(math.inf).is_infinite
    assert not Exponent.coerce(1e300).is_infinite
    assert str(Exponent.infinite()) == 'inf'
    assert Exponent.coerce(2) == Exponent.parse('2')


@pytest.mark.parametrize('dim', (1, 2, 3, 5, 6))
def test_eig_hermitian_matches_reference(dim):
    rng = np.random.default_rng(dim)
    for _ in range(40):
        m = random_hermitian(dim, rng)
        got = eig_hermitian(m).values
        want = np.sort(np.linalg.eigvalsh(m))[::-1]
        assert np.allclose(got, want, atol=1e-10)


def test_eig_trace_and_frobenius_identities():
    rng = np.random.default_rng(9)
    for _ in range(200):
        dim = int(rng.integers(1, 7))
        m = random_hermitian(dim, rng)
        s = eig_hermitian(m)
        assert abs(np.sum(s.values) - np.trace(m).real) < 1e-10
        assert abs(np.sum(s.values ** 2) - np.linalg.norm(m) ** 2) < 1e-9


def test_eigh_reconstructs():
    rng = np.random.default_rng(1)
    m = random_hermitian(6, rng)
    s, v = eigh_hermitian(m)
    assert np.allclose(dagger(v) @ v, np.eye(6), atol=1e-12)
    assert np.allclose(v @ np.diag(s.values) @ dagger(v), m, atol=1e-10)


def test_eig_degenerate():
    d = 3
    m = np.diag([2 - 2 / d] + [1 - 2 / d] * (d * d - 1))
    u = random_unitary(9, np.random.default_rng(5))
    s = eig_hermitian(u @ m @ dagger(u))
    assert s.multiplicities() == [(1.333333333333, 1), (0.333333333333, 8)]


def test_spectrum_unitarily_invariant():
    rng = np.random.default_rng(13)
    for dim in (2, 3, 5, 9):
        for _ in range(10):
            m = random_hermitian(dim, rng)
            u = random_unitary(dim, rng)
            a = eig_hermitian(m).values
            b = eig_hermitian(u @ m @ dagger(u)).values
            assert np.allclose(a, b, atol=1e-9)


def test_eig_zero_matrix():
    assert list(eig_hermitian(np.zeros((3, 3))).values) == [0.0, 0.0, 0.0]


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionMismatch):
        check_hermitian(np.zeros((2, 3)))


def test_norm_decreases_with_p():
    rng = np.random.default_rng(3)
    ps = [1.2, 1.5, 2, 3, 5, 8, 20, 'inf']
    for _ in range(200):
        rho = random_density(4, rng)
        s = eig_hermitian(rho)
        norms = [s.norm(p) for p in ps]
        assert all(a >= b - 1e-12 for a, b in zip(norms, norms[1:]))


def test_norm_large_exponent_stays_finite():
    s = Spectrum([1e-3] * 4)
    assert s.norm(1000) == pytest.approx(1e-3 * 4 ** (1 / 1000))


@pytest.mark.parametrize('p, expected', (
    (2, math.sqrt(1 / 3)),
    ('inf', 1 / 3),
    (3, 3 ** (1 / 3) / 3),
))
def test_schatten_norm_maximally_mixed(p, expected):
    assert schatten_norm(np.eye(3) / 3, p) == pytest.approx(expected,
                                                             abs=1e-12)


def test_spectrum_is_density():
    assert Spectrum([0.5, 0.5, 0]).is_density()
    assert not Spectrum([0.6, 0.6]).is_density()
    assert not Spectrum([1.1, -0.1]).is_density()


def test_kron_matches_loop_and_is_bilinear():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b, c = (rng.standard_normal((2, 3)) + 1j *
                   rng.standard_normal((2, 3)) for _ in range(3))
        x = complex(rng.standard_normal(), rng.standard_normal())
        assert np.allclose(kron(a, c), loop_kron(a, c))
        assert np.allclose(kron(x * a + b, c),
                           x * kron(a, c) + kron(b, c))
        assert np.allclose(kron(c, a + b), kron(c, a) + kron(c, b))


def test_kron_mixed_product_and_associativity():
    rng = np.random.default_rng(12)
    for _ in range(100):
        a, b, c, d = (rng.standard_normal((3, 3)) + 1j *
                      rng.standard_normal((3, 3)) for _ in range(4))
        e = rng.standard_normal((2, 4))
        assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d))
        assert np.allclose(kron(kron(a, b), e), kron(a, kron(b, e)))


def test_kron_vec_rejects_matrices():
    with pytest.raises(DimensionMismatch):
        kron_vec(np.eye(2), np.ones(2))


def test_partial_trace_of_product():
    rng = np.random.default_rng(2)
    a = random_density(2, rng)
    b = random_density(3, rng)
    ab = kron(a, b)
    assert np.allclose(partial_trace(ab, (2, 3), keep=0), a)
    assert np.allclose(partial_trace(ab, (2, 3), keep=1), b)
    with pytest.raises(DimensionMismatch):
        partial_trace(ab, (3, 3), keep=0)


def test_matrix_power_psd():
    rng = np.random.default_rng(4)
    rho = random_density(4, rng)
    root = matrix_power_psd(rho, 0.5)
    assert np.allclose(root @ root, rho, atol=1e-10)
    s, v = eigh_hermitian(rho)
    assert np.allclose(power_from_eigh(s, v, 2), rho @ rho, atol=1e-10)


def test_check_pure_state():
    psi = random_pure_state(4, np.random.default_rng(6))
    assert check_pure_state(psi) is not None
    with pytest.raises(ValueError):
        check_pure_state(2 * psi)
    with pytest.raises(DimensionMismatch):
        check_pure_state(np.eye(2))


def test_random_samplers():
    rng = np.random.default_rng(0)
    psi = random_pure_state(5, rng)
    assert abs(np.linalg.norm(psi) - 1) < 1e-12
    u = random_unitary(4, rng)
    assert np.allclose(dagger(u) @ u, np.eye(4), atol=1e-12)
    assert eig_hermitian(random_density(3, rng)).is_density()


def test_samplers_deterministic():
    a = random_pure_state(4, np.random.default_rng(42))
    b = random_pure_state(4, np.random.default_rng(42))
    assert np.array_equal(a, b)
