import numpy as np
import pytest
from numpy.testing import assert_allclose

from thirdopt import Subspace, corpus, eig_sym, null_space, subspace_at_most


class TestEigSym:
    def test_identity(self):
        decomp = eig_sym(np.eye(3))
        assert_allclose(decomp.eigenvalues, [1.0, 1.0, 1.0])

    def test_diagonal_sorted_descending(self):
        decomp = eig_sym(np.diag([3.0, 1.0, -2.0]))
        assert_allclose(decomp.eigenvalues, [3.0, 1.0, -2.0])
        # coordinate eigenvectors up to sign
        assert_allclose(np.abs(decomp.eigenvectors), np.eye(3), atol=1e-14)

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            a = rng.standard_normal((6, 6))
            m = (a + a.T) / 2.0
            decomp = eig_sym(m)
            scale = max(1.0, np.linalg.norm(m))
            assert np.linalg.norm(m - decomp.reconstruct()) <= 1e-10 * scale
            gram = decomp.eigenvectors.T @ decomp.eigenvectors
            assert np.abs(gram - np.eye(6)).max() <= 1e-10
            assert np.all(np.diff(decomp.eigenvalues) <= 1e-14)

    def test_rejects_asymmetric(self):
        m = np.array([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            eig_sym(m)


class TestSubspaceAtMost:
    def test_middle_threshold(self):
        decomp = eig_sym(np.diag([3.0, 1.0, -2.0]))
        s = subspace_at_most(decomp, 1.0)
        assert s.rank == 2
        # spans e2 and e3
        proj = s.projector()
        assert_allclose(proj, np.diag([0.0, 1.0, 1.0]), atol=1e-14)

    def test_below_bottom_is_empty(self):
        decomp = eig_sym(np.diag([3.0, 1.0, -2.0]))
        assert subspace_at_most(decomp, -2.5).is_empty

    def test_at_top_is_full(self):
        decomp = eig_sym(np.diag([3.0, 1.0, -2.0]))
        assert subspace_at_most(decomp, 3.0).rank == 3

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(29)
        a = rng.standard_normal((5, 5))
        decomp = eig_sym((a + a.T) / 2.0)
        taus = sorted(rng.standard_normal(4))
        prev = None
        for tau in taus:
            proj = subspace_at_most(decomp, tau).projector()
            if prev is not None:
                # containment: P1 P2 = P1 for nested projectors
                assert_allclose(prev @ proj, prev, atol=1e-10)
            prev = proj


class TestNullSpace:
    def test_degenerate_corpus_hessian(self):
        hess = corpus("xxy_plus_yy").bundle(np.zeros(2), 2).hess
        assert_allclose(hess, np.array([[0.0, 0.0], [0.0, 2.0]]))
        kernel = null_space(eig_sym(hess))
        assert kernel.rank == 1
        assert_allclose(np.abs(kernel.basis[:, 0]), [1.0, 0.0], atol=1e-14)

    def test_definite_matrix_has_empty_kernel(self):
        assert null_space(eig_sym(np.diag([2.0, 1.0]))).is_empty

    def test_zero_matrix_has_full_kernel(self):
        assert null_space(eig_sym(np.zeros((4, 4)))).rank == 4


class TestSubspace:
    def test_projector_is_idempotent_and_symmetric(self):
        rng = np.random.default_rng(31)
        q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        for k in range(7):
            p = Subspace(6, q[:, :k]).projector()
            assert np.abs(p @ p - p).max() <= 1e-10
            assert np.abs(p - p.T).max() <= 1e-10

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            Subspace(2, np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_too_many_vectors(self):
        with pytest.raises(ValueError):
            Subspace(2, np.eye(3))

    def test_empty_and_full(self):
        assert Subspace.empty(3).is_empty
        assert Subspace.full(3).rank == 3
        assert Subspace.full(3).contains(np.array([1.0, -2.0, 0.5]))
