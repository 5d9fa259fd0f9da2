import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.errors import NonHermitianError, NotPSDError, ValidationError
from src.hermitian import (
    as_matrix,
    commutator_norm,
    eigenvalues,
    herm_eigendecompose,
    is_hermitian,
    ket_projector,
    matrix_from_json,
    matrix_to_json,
    max_norm,
    psd_sqrt,
)
from src.sampling import make_rng, random_hermitian, random_projective_observable, trial_rng


def test_as_matrix_rejects_non_square_and_non_finite():
    with pytest.raises(ValidationError):
        as_matrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    with pytest.raises(ValidationError):
        as_matrix([[np.nan, 0.0], [0.0, 1.0]])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3, 4]))
def test_jacobi_eigendecomposition_reconstructs_the_matrix(seed, dim):
    """V diag(λ) V† reproduces A, V is unitary and λ matches LAPACK."""
    a = random_hermitian(make_rng(seed), dim)
    values, vectors = herm_eigendecompose(a)
    assert np.all(np.diff(values) >= 0)
    assert max_norm(vectors @ np.diag(values) @ vectors.conj().T - a) < 1e-9
    assert max_norm(vectors.conj().T @ vectors - np.eye(dim)) < 1e-9
    assert np.allclose(values, np.linalg.eigvalsh(a), atol=1e-9)


def test_eigendecomposition_handles_complex_off_diagonals():
    a = np.array([[1.0, 2.0 - 1.0j], [2.0 + 1.0j, -1.0]])
    assert np.allclose(eigenvalues(a), [-np.sqrt(6.0), np.sqrt(6.0)], atol=1e-12)


def test_eigendecomposition_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        herm_eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_psd_sqrt_squares_back():
    rng = make_rng(5)
    g = random_hermitian(rng, 3)
    a = g @ g
    root = psd_sqrt(a)
    assert is_hermitian(root)
    assert max_norm(root @ root - a) < 1e-9
    assert eigenvalues(root)[0] >= -1e-12


def test_psd_sqrt_of_projector_is_the_projector():
    p = ket_projector([1.0, 1.0j])
    assert max_norm(psd_sqrt(p) - p) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3, 4]), n=st.integers(1, 4))
def test_square_root_of_a_random_projection_is_exact(seed, dim, n):
    A = random_projective_observable(trial_rng(seed, 0), dim, min(n, dim))
    for p in A.effects.values():
        assert max_norm(p.sqrt - p.matrix) <= 1e-12
        assert max_norm(psd_sqrt(p.matrix) - p.matrix) <= 1e-12


def test_psd_sqrt_keeps_small_positive_eigenvalues():
    a = np.diag([1e-6, 0.25])
    assert max_norm(psd_sqrt(a) - np.diag([1e-3, 0.5])) < 1e-15


def test_psd_sqrt_rejects_negative_spectrum():
    with pytest.raises(NotPSDError):
        psd_sqrt(np.diag([-0.5, 1.0]))


def test_commutator_norm_of_diagonal_matrices_is_zero():
    assert commutator_norm(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])) == 0.0
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    z = np.diag([1.0, -1.0])
    assert commutator_norm(x, z) == pytest.approx(2.0)


def test_matrix_json_codec_uses_re_im_pairs():
    m = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, 0.7]])
    data = matrix_to_json(m)
    assert data[0][1] == [0.1, -0.2]
    assert np.array_equal(matrix_from_json(data), m)


def test_matrix_from_json_rejects_bare_numbers():
    with pytest.raises(ValidationError, match="re, im"):
        matrix_from_json([[1.0, 0.0], [0.0, 1.0]])
