"""SVD, unitary projection, Kronecker, regrouping, matrix serialization."""

import numpy as np
import pytest

from rbmpo.errors import ShapeError, SingularMatrixError
from rbmpo.linalg import (
    dagger,
    kron,
    matrix_from_json_dict,
    matrix_to_json_dict,
    principal_unitary_sqrt,
    project_to_unitary,
    regroup,
    svd,
)


def haar_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_complex(n, rng):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestSvd:
    def test_identity(self):
        res = svd(np.eye(2))
        assert np.allclose(res.u, np.eye(2))
        assert np.allclose(res.s, [1.0, 1.0])
        assert np.allclose(res.v, np.eye(2))

    def test_diagonal_positive(self):
        res = svd(np.diag([3.0, 1.0]))
        assert np.allclose(res.s, [3.0, 1.0])

    @pytest.mark.parametrize("seed", range(5))
    def test_reconstruction(self, seed):
        rng = np.random.default_rng(seed)
        m = random_complex(4, rng)
        res = svd(m)
        rel = np.linalg.norm(res.reconstruct() - m) / np.linalg.norm(m)
        assert rel < 1e-10

    @pytest.mark.parametrize("seed", range(5))
    def test_factor_isometry(self, seed):
        rng = np.random.default_rng(100 + seed)
        m = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
        res = svd(m)
        k = min(m.shape)
        assert np.linalg.norm(dagger(res.u) @ res.u - np.eye(k)) < 1e-12
        assert np.linalg.norm(dagger(res.v) @ res.v - np.eye(k)) < 1e-12
        assert np.all(np.diff(res.s) <= 1e-14)

    def test_phase_convention_pins_largest_component(self):
        rng = np.random.default_rng(3)
        m = random_complex(4, rng)
        res = svd(m)
        for k in range(4):
            idx = np.argmax(np.abs(res.u[:, k]))
            pivot = res.u[idx, k]
            assert abs(pivot.imag) < 1e-12 and pivot.real > 0

    def test_deterministic(self):
        rng = np.random.default_rng(4)
        m = random_complex(4, rng)
        a, b = svd(m.copy()), svd(m.copy())
        assert np.array_equal(a.u, b.u) and np.array_equal(a.s, b.s) and np.array_equal(a.v, b.v)

    @pytest.mark.parametrize("seed", range(3))
    def test_singular_values_unitary_invariant(self, seed):
        rng = np.random.default_rng(200 + seed)
        m = random_complex(4, rng)
        u, v = haar_unitary(4, rng), haar_unitary(4, rng)
        assert np.allclose(svd(u @ m @ v).s, svd(m).s, atol=1e-10)

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ShapeError):
            svd(np.zeros((0, 0)))
        with pytest.raises(ShapeError):
            svd(np.array([[np.nan, 0], [0, 1]]))


class TestProjectToUnitary:
    def test_unitary_is_fixed_point(self):
        rng = np.random.default_rng(0)
        u = haar_unitary(4, rng)
        assert np.linalg.norm(project_to_unitary(u) - u) < 1e-12

    def test_positive_scale_of_identity(self):
        assert np.linalg.norm(project_to_unitary(2.0 * np.eye(2)) - np.eye(2)) < 1e-12

    def test_diag_signs(self):
        # closest unitary to diag(3, -1) keeps the signs
        p = project_to_unitary(np.diag([3.0, -1.0]))
        assert np.linalg.norm(p - np.diag([1.0, -1.0])) < 1e-12

    def test_beats_dense_sample_of_unitaries(self):
        rng = np.random.default_rng(1)
        x = np.diag([3.0, -1.0]).astype(complex)
        p = project_to_unitary(x)
        d0 = np.linalg.norm(x - p)
        for _ in range(2000):
            assert d0 <= np.linalg.norm(x - haar_unitary(2, rng)) + 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_result_unitary(self, seed):
        rng = np.random.default_rng(300 + seed)
        p = project_to_unitary(random_complex(4, rng))
        assert np.linalg.norm(dagger(p) @ p - np.eye(4)) < 1e-12

    @pytest.mark.parametrize("seed", range(3))
    def test_equivariance(self, seed):
        rng = np.random.default_rng(400 + seed)
        x = random_complex(4, rng)
        u, v = haar_unitary(4, rng), haar_unitary(4, rng)
        lhs = project_to_unitary(u @ x @ v)
        rhs = u @ project_to_unitary(x) @ v
        assert np.linalg.norm(lhs - rhs) < 1e-10

    def test_rank_deficient_rejected(self):
        with pytest.raises(SingularMatrixError):
            project_to_unitary(np.diag([1.0, 0.0]))

    def test_non_square_rejected(self):
        with pytest.raises(ShapeError):
            project_to_unitary(np.ones((2, 3)))


class TestKron:
    def test_identities(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_z_tensor_identity(self):
        z = np.diag([1.0, -1.0])
        assert np.array_equal(kron(z, np.eye(2)), np.diag([1.0, 1.0, -1.0, -1.0]))

    def test_mixed_product(self):
        rng = np.random.default_rng(5)
        a, b, c, d = (random_complex(2, rng) for _ in range(4))
        lhs = kron(a, b) @ kron(c, d)
        rhs = kron(a @ c, b @ d)
        assert np.linalg.norm(lhs - rhs) < 1e-12


class TestRegroup:
    def test_round_trip_on_joint_sized_matrix(self):
        rng = np.random.default_rng(6)
        n = 2 * 2 * 2  # d_env * d_sys^2
        m = random_complex(n, rng)
        dims = (2, 2, 2, 2, 2, 2)
        perm = (0, 2, 1, 3, 5, 4)
        inv = tuple(np.argsort(perm))
        once = regroup(m, dims, perm, 3)
        back = regroup(once, tuple(dims[p] for p in perm), inv, 3)
        assert np.array_equal(back.reshape(m.shape), m)

    def test_matrix_to_vector_and_back(self):
        m = np.arange(4, dtype=complex).reshape(2, 2)
        vec = regroup(m, (2, 2), (0, 1), 2)
        assert vec.shape == (4, 1)
        back = regroup(vec, (2, 2), (0, 1), 1)
        assert np.array_equal(back, m)

    def test_joint_grouping_matches_loop_oracle(self):
        # fusing two nodes over their bond, then grouping (e_up s s')(e_dn t t'),
        # must reproduce an index-by-index loop
        from rbmpo.process_tensor import joint_node

        rng = np.random.default_rng(7)
        a, b = random_complex(4, rng), random_complex(4, rng)
        fused = joint_node(a, b, 2, 2).reshape(8, 8)
        a4, b4 = a.reshape(2, 2, 2, 2), b.reshape(2, 2, 2, 2)
        for eu in range(2):
            for si in range(2):
                for sip in range(2):
                    for ed in range(2):
                        for sj in range(2):
                            for sjp in range(2):
                                expected = sum(
                                    a4[eu, si, e, sip] * b4[e, sj, ed, sjp] for e in range(2)
                                )
                                row = (eu * 2 + si) * 2 + sip
                                col = (ed * 2 + sj) * 2 + sjp
                                assert abs(fused[row, col] - expected) < 1e-14

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            regroup(np.ones((2, 3)), (2, 2), (0, 1), 1)
        with pytest.raises(ShapeError):
            regroup(np.ones((2, 2)), (2, 2), (0, 0), 1)


class TestUnitarySqrt:
    @pytest.mark.parametrize("seed", range(4))
    def test_square_recovers(self, seed):
        rng = np.random.default_rng(500 + seed)
        h = rng.standard_normal((4, 4))
        h = (h + h.T) / 2
        w, v = np.linalg.eigh(h)
        u = (v * np.exp(-0.3j * w)) @ dagger(v)
        r = principal_unitary_sqrt(u)
        assert np.linalg.norm(r @ r - u) < 1e-10
        assert np.linalg.norm(dagger(r) @ r - np.eye(4)) < 1e-12

    def test_identity(self):
        assert np.linalg.norm(principal_unitary_sqrt(np.eye(4)) - np.eye(4)) < 1e-12


class TestMatrixJson:
    def test_exact_round_trip(self):
        import json

        rng = np.random.default_rng(8)
        m = random_complex(3, rng)
        blob = json.dumps(matrix_to_json_dict(m))
        back = matrix_from_json_dict(json.loads(blob))
        assert np.array_equal(back, m)  # repr round-trip is exact

    def test_malformed(self):
        with pytest.raises(ShapeError):
            matrix_from_json_dict({"rows": 2, "cols": 2, "re": [[1.0]], "im": [[0.0]]})
        with pytest.raises(ShapeError):
            matrix_from_json_dict({"rows": 2})
