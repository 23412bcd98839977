import time

import numpy as np
import pytest

from focalis.algebras import bracket, load_algebra
from focalis.errors import ValidationError
from focalis.roots import (involution, restricted_root_decomposition,
                           verify_bracket_pattern)


class TestInvolution:
    def test_conj_is_involutive_automorphism(self):
        th = involution("conj", 3)
        x = np.array([[1j, 2.0], [1.0, -1j]])
        assert np.allclose(th(th(x)), x)

    def test_ad_diag_default(self):
        th = involution("ad_diag", 2)
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert np.allclose(th(x), -x)

    def test_ad_diag_with_signature(self):
        th = involution("ad_diag_1", 3)
        d = np.diag([1.0, -1.0, -1.0])
        x = np.arange(9.0).reshape(3, 3)
        assert np.allclose(th(x), d @ x @ d)

    def test_unknown_name(self):
        with pytest.raises(ValidationError):
            involution("transpose", 2)


class TestDecomposition:
    def test_su2_conj(self):
        data = restricted_root_decomposition("su2", "conj")
        assert len(data.a_basis) == 1
        assert data.n0 == 1
        assert data.multiplicities == (2,)
        assert data.dimension_identity()

    def test_su3_conj(self):
        # split real form of the A2 restricted system: rank 2, g0 = a,
        # three +/- root pairs, each pair contributing a 2-dim space
        data = restricted_root_decomposition("su3", "conj")
        assert len(data.a_basis) == 2
        assert data.n0 == 2
        assert data.multiplicities == (2, 2, 2)
        assert data.dimension_identity()

    def test_su2_ad_diag(self):
        data = restricted_root_decomposition("su2", "ad_diag")
        assert len(data.a_basis) == 1
        assert data.n0 == 1
        assert data.dimension_identity()

    def test_a_inside_g0(self):
        data = restricted_root_decomposition("su3", "conj")
        onb = list(data.onb)
        g0 = data.space_bases[0]
        for a in data.a_basis:
            coeffs = np.array([np.real(np.sum(np.conj(m) * a)) for m in onb])
            # expansion against the onb gram
            gram = np.array([[np.real(np.sum(np.conj(x) * y)) for y in onb] for x in onb])
            c = np.linalg.solve(gram, coeffs)
            res = np.linalg.norm(c - g0 @ (g0.T @ c))
            assert res < 1e-9

    def test_eigenspace_property(self):
        data = restricted_root_decomposition("su3", "conj")
        onb = list(data.onb)

        def to_mat(c):
            return sum(ci * m for ci, m in zip(c, onb))

        for lam, basis in zip(data.roots, data.space_bases[1:]):
            for hi, a in enumerate(data.a_basis):
                for col in range(basis.shape[1]):
                    v = to_mat(basis[:, col])
                    lhs = bracket(a, bracket(a, v))
                    assert np.max(np.abs(lhs + lam[hi] ** 2 * v)) < 1e-8

    def test_seed_independence_of_dimensions(self):
        d1 = restricted_root_decomposition("su3", "conj", seed=7)
        d2 = restricted_root_decomposition("su3", "conj", seed=99)
        assert d1.n0 == d2.n0
        assert sorted(d1.multiplicities) == sorted(d2.multiplicities)

    def test_rejects_trivial_pair(self):
        alg = load_algebra("su2")
        # conjugation by -id is the identity automorphism: empty p
        with pytest.raises(ValidationError):
            restricted_root_decomposition(alg, "ad_diag_0")


class TestBracketPattern:
    def test_su2_passes(self):
        data = restricted_root_decomposition("su2", "conj")
        report = verify_bracket_pattern(data)
        assert report["passed"]
        assert report["max_residual"] < 1e-9
        assert report["dimension_identity"]

    def test_su3_passes_with_difference_rule(self):
        data = restricted_root_decomposition("su3", "conj")
        report = verify_bracket_pattern(data)
        assert report["passed"]
        assert report["max_residual"] < 1e-9
        # the sum-only containment genuinely fails here: [g_a, g_{a+b}] meets g_b
        assert report["max_residual_sum_only"] > 1e-3

    def test_g0_bracket_closed(self):
        data = restricted_root_decomposition("su3", "conj")
        report = verify_bracket_pattern(data)
        g0_pair = [p for p in report["pairs"] if p["root_a"] is None and p["root_b"] is None]
        assert len(g0_pair) == 1 and g0_pair[0]["residual"] < 1e-12

    def test_runtime_budget(self):
        t0 = time.time()
        for name in ("su2", "su3"):
            data = restricted_root_decomposition(name, "conj")
            verify_bracket_pattern(data)
        assert time.time() - t0 < 5.0
