import numpy as np
import pytest

from focalis.algebras import LieAlgebraBasis, bracket, load_algebra
from focalis.errors import ValidationError


def levi_civita():
    eps = np.zeros((3, 3, 3))
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        eps[i, j, k] = 1.0
        eps[j, i, k] = -1.0
    return eps


class TestLoadAlgebra:
    def test_su2_structure_constants(self):
        alg = load_algebra("su2")
        assert alg.dim == 3
        assert np.max(np.abs(alg.structure + levi_civita())) < 1e-12

    def test_so3_isomorphic_to_su2(self):
        alg = load_algebra("so3")
        # so3 basis from _so_basis: L_01, L_02, L_12; signs differ from the
        # epsilon convention but |c| matches and the Killing gram is 2*id
        c = alg.structure
        assert alg.dim == 3
        assert np.count_nonzero(np.abs(c) > 1e-12) == 6
        assert np.max(np.abs(np.abs(c)[np.abs(c) > 1e-12] - 1.0)) < 1e-12

    def test_su3_dimension(self):
        assert load_algebra("su3").dim == 8

    def test_killing_gram_positive_definite(self):
        for name in ("su2", "so3", "su3", "so4"):
            alg = load_algebra(name)
            w = np.linalg.eigvalsh(alg.gram)
            assert np.all(w > 0)

    def test_su2_killing_diagonal(self):
        alg = load_algebra("su2")
        off = alg.gram - np.diag(np.diag(alg.gram))
        assert np.max(np.abs(off)) < 1e-12

    def test_unsupported_name(self):
        with pytest.raises(ValidationError):
            load_algebra("sp4")
        with pytest.raises(ValidationError):
            load_algebra("so2")  # abelian, Killing form degenerate

    def test_name_normalization(self):
        assert load_algebra("SU_3").name == "su3"


class TestBasisOperations:
    def test_coefficients_round_trip(self):
        alg = load_algebra("su3")
        rng = np.random.default_rng(0)
        c = rng.normal(size=alg.dim)
        x = alg.from_coefficients(c)
        assert np.max(np.abs(alg.coefficients(x) - c)) < 1e-12

    def test_orthonormal_basis(self):
        alg = load_algebra("su3")
        onb = alg.orthonormal_basis()
        for i, a in enumerate(onb):
            for j, b in enumerate(onb):
                assert alg.inner(a, b) == pytest.approx(float(i == j), abs=1e-10)

    def test_inner_ad_invariance(self):
        alg = load_algebra("su2")
        rng = np.random.default_rng(1)
        for _ in range(10):
            x = alg.from_coefficients(rng.normal(size=3))
            y = alg.from_coefficients(rng.normal(size=3))
            z = alg.from_coefficients(rng.normal(size=3))
            r = alg.inner(bracket(x, y), z) + alg.inner(y, bracket(x, z))
            assert abs(r) < 1e-9

    def test_structure_reproduces_brackets(self):
        alg = load_algebra("so4")
        for i in range(alg.dim):
            for j in range(alg.dim):
                rec = alg.from_coefficients(alg.structure[i, j])
                assert np.max(np.abs(rec - bracket(alg.basis[i], alg.basis[j]))) < 1e-12
