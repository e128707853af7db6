import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import loop_partial_trace, loop_partial_transpose, random_density, random_hermitian
from sepcrit.linalg import (ConvergenceError, DimensionError, NotHermitianError, adjoint, entrywise_conjugate,
                            hermitian_eigenvalues, hs_inner, is_psd, kron, partial_trace, partial_transpose)
from sepcrit.measurements import gell_mann_basis
from sepcrit.states import horodecki_3x3, maximally_entangled, weyl_operator

X = np.array([[0, 1], [1, 0]], dtype=complex)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def complex_matrices(n):
    return st.tuples(arrays(float, (n, n), elements=finite), arrays(float, (n, n), elements=finite)).map(
        lambda ri: ri[0] + 1j * ri[1])


def hermitian_matrices(n):
    return complex_matrices(n).map(lambda a: a + a.conj().T)


def test_kron_examples():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))
    ket00 = np.array([1, 0, 0, 0])
    assert np.array_equal(kron(X, X) @ ket00, [0, 0, 0, 1])


def test_kron_index_convention(rng):
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3))
    k = kron(a, b)
    for i, j, p, q in np.ndindex(2, 2, 3, 3):
        assert k[i * 3 + p, j * 3 + q] == a[i, j] * b[p, q]


@given(st.lists(arrays(np.int64, (2, 2), elements=st.integers(-5, 5)), min_size=3, max_size=3))
def test_kron_associative_exactly(ms):
    a, b, c = ms
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


def test_adjoint_and_conjugate(rng):
    assert np.array_equal(adjoint(np.eye(3)), np.eye(3))
    assert np.array_equal(adjoint(1j * np.eye(2)), -1j * np.eye(2))
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.array_equal(adjoint(adjoint(a)), a)
    real = rng.standard_normal((3, 3))
    assert np.array_equal(entrywise_conjugate(real), real)
    assert np.array_equal(entrywise_conjugate(1j * X), -1j * X)


def test_conjugated_weyl_operators_are_unitary():
    for s, t in np.ndindex(3, 3):
        u = entrywise_conjugate(weyl_operator(3, s, t))
        assert np.abs(u @ u.conj().T - np.eye(3)).max() < 1e-14


def test_hs_inner():
    assert hs_inner(np.eye(4), np.eye(4)) == 4
    f = gell_mann_basis(3)
    gram = np.array([[hs_inner(a, b) for b in f] for a in f])
    assert np.abs(gram - np.eye(8)).max() < 1e-14
    with pytest.raises(DimensionError):
        hs_inner(np.eye(2), np.eye(3))


@given(hermitian_matrices(3), hermitian_matrices(3))
def test_hs_inner_real_for_hermitian(p, r):
    assert abs(hs_inner(p, r).imag) <= 1e-12 * max(1.0, np.abs(p).max() * np.abs(r).max())


@given(complex_matrices(4))
def test_hs_inner_self_is_frobenius(a):
    v = hs_inner(a, a)
    assert v.real >= 0
    assert abs(v - np.linalg.norm(a) ** 2) <= 1e-12 * max(1.0, v.real)


def test_partial_trace_examples(rng):
    r1 = random_density(rng, 3)
    r2 = random_density(rng, 3)
    assert np.abs(partial_trace(kron(r1, r2), 3, "A") - r1).max() < 1e-15
    assert np.abs(partial_trace(kron(r1, r2), 3, "B") - r2).max() < 1e-15
    phi = maximally_entangled(3).rho
    assert np.abs(partial_trace(phi, 3, "A") - np.eye(3) / 3).max() < 1e-15
    with pytest.raises(DimensionError):
        partial_trace(np.eye(8), 3)
    with pytest.raises(ValueError):
        partial_trace(np.eye(9), 3, "C")


def test_partial_trace_scales_by_other_trace(rng):
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2))
    assert np.allclose(partial_trace(kron(a, b), 2, "A"), a * np.trace(b), atol=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_partial_trace_matches_loops(rng, d):
    rho = random_density(rng, d * d)
    for keep in "AB":
        assert np.abs(partial_trace(rho, d, keep) - loop_partial_trace(rho, d, keep)).max() < 1e-15
        assert abs(np.trace(partial_trace(rho, d, keep)) - np.trace(rho)) < 1e-12


@pytest.mark.parametrize("d", [2, 3])
def test_partial_transpose(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    assert np.array_equal(partial_transpose(kron(a, b), d), kron(a, b.T))
    rho = random_density(rng, d * d)
    pt = partial_transpose(rho, d)
    assert np.array_equal(pt, loop_partial_transpose(rho, d))
    assert np.array_equal(partial_transpose(pt, d), rho)
    assert abs(np.trace(pt) - np.trace(rho)) < 1e-12
    assert np.abs(pt - pt.conj().T).max() < 1e-15


@pytest.mark.parametrize("a", [0.125, 0.375, 0.5, 0.875])
def test_horodecki_is_ppt(a):
    assert is_psd(partial_transpose(horodecki_3x3(a).rho, 3))


def test_eigenvalue_examples():
    assert np.array_equal(hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])
    assert np.allclose(hermitian_eigenvalues(X), [-1, 1], atol=1e-15)
    assert np.allclose(hermitian_eigenvalues(np.array([[2.0]])), [2.0])


@pytest.mark.parametrize("n", [2, 3, 5, 9, 16, 27])
def test_eigenvalues_against_lapack(rng, n):
    h = random_hermitian(rng, n)
    assert np.abs(hermitian_eigenvalues(h) - np.linalg.eigvalsh(h)).max() < 1e-12 * np.abs(h).max() * n


def test_eigenvalue_trace_identities_5x5(rng):
    h = random_hermitian(rng, 5)
    lam = hermitian_eigenvalues(h)
    assert abs(lam.sum() - np.trace(h).real) < 1e-10
    assert abs((lam ** 2).sum() - np.linalg.norm(h) ** 2) < 1e-9


@given(hermitian_matrices(4))
def test_eigenvalue_trace_identities(h):
    lam = hermitian_eigenvalues(h)
    scale = max(1.0, np.linalg.norm(h))
    assert np.all(np.diff(lam) >= 0)
    assert abs(lam.sum() - np.trace(h).real) <= 1e-10 * scale
    assert abs((lam ** 2).sum() - np.linalg.norm(h) ** 2) <= 1e-9 * scale ** 2


def test_degenerate_and_diagonal_inputs():
    assert np.array_equal(hermitian_eigenvalues(np.zeros((4, 4))), np.zeros(4))
    lam = hermitian_eigenvalues(np.ones((4, 4)))
    assert np.allclose(lam, [0, 0, 0, 4], atol=1e-14)
    d = np.diag([4.212, -0.031, -1.583, -2.598])
    assert np.array_equal(hermitian_eigenvalues(d), np.sort(np.diag(d)))


def test_eigen_errors(rng):
    with pytest.raises(NotHermitianError):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionError):
        hermitian_eigenvalues(np.ones((2, 3)))
    with pytest.raises(ConvergenceError) as info:
        hermitian_eigenvalues(random_hermitian(rng, 6), max_sweeps=1)
    assert info.value.residual > 0


def test_is_psd():
    assert is_psd(np.eye(3))
    assert not is_psd(np.diag([1.0, -1e-6]), tol=1e-9)
    assert is_psd(np.diag([1.0, -1e-12]), tol=1e-9)
