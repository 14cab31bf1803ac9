import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from helmert_student.errors import CapacityError, OrderTooSmallError, UsageError
from helmert_student.helmert_core import (
    SymbolicEntry,
    apply,
    apply_transpose,
    build_dense,
    certify_orders,
    gram_case,
    symbolic_entry,
    symbolic_matrix,
    verify_orthogonality_exact,
)

r2, r3, r5, r6, r12, r20 = (math.sqrt(v) for v in (2, 3, 5, 6, 12, 20))

# Displayed base cases O_2 .. O_5, written out entry by entry.
BASE_CASES = {
    2: [[1 / r2, -1 / r2], [1 / r2, 1 / r2]],
    3: [[1 / r2, -1 / r2, 0], [1 / r6, 1 / r6, -2 / r6], [1 / r3, 1 / r3, 1 / r3]],
    4: [
        [1 / r2, -1 / r2, 0, 0],
        [1 / r6, 1 / r6, -2 / r6, 0],
        [1 / r12, 1 / r12, 1 / r12, -3 / r12],
        [1 / 2, 1 / 2, 1 / 2, 1 / 2],
    ],
    5: [
        [1 / r2, -1 / r2, 0, 0, 0],
        [1 / r6, 1 / r6, -2 / r6, 0, 0],
        [1 / r12, 1 / r12, 1 / r12, -3 / r12, 0],
        [1 / r20, 1 / r20, 1 / r20, 1 / r20, -4 / r20],
        [1 / r5] * 5,
    ],
}


class TestSymbolicEntry:
    def test_o4_row3_col4(self):
        assert symbolic_entry(4, 3, 4) == SymbolicEntry(-3, 12)

    def test_o3_zero(self):
        assert symbolic_entry(3, 1, 3).coefficient == 0

    def test_o5_last_row(self):
        assert symbolic_entry(5, 5, 1) == SymbolicEntry(1, 5)

    @pytest.mark.parametrize("i,j", [(0, 1), (1, 0), (6, 1), (1, 6)])
    def test_out_of_range(self, i, j):
        with pytest.raises(UsageError, match="1..5"):
            symbolic_entry(5, i, j)

    def test_rejects_bad_radicand(self):
        with pytest.raises(UsageError):
            SymbolicEntry(1, 0)

    @pytest.mark.parametrize("n", [2, 3, 7, 20])
    def test_row_invariants(self, n):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                e = symbolic_entry(n, i, j)
                if i == n:
                    assert (e.coefficient, e.radicand) == (1, n)
                elif e.coefficient != 0:
                    assert e.radicand == i * (i + 1)
                    assert e.coefficient in (1, -i)

    def test_table_matches_scalar(self):
        t = symbolic_matrix(9)
        for i in range(1, 10):
            for j in range(1, 10):
                assert t.entry(i, j) == symbolic_entry(9, i, j)

    def test_str(self):
        assert str(symbolic_entry(4, 3, 4)) == "-3/√12"
        assert str(symbolic_entry(4, 1, 4)) == "0"


class TestBuildDense:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_base_cases(self, n):
        np.testing.assert_allclose(build_dense(n), BASE_CASES[n], rtol=0, atol=1e-15)

    def test_o3_row2(self):
        np.testing.assert_array_equal(build_dense(3)[1], [1 / r6, 1 / r6, -2 / r6])

    @pytest.mark.parametrize("n", [1, 0, -3])
    def test_too_small(self, n):
        with pytest.raises(OrderTooSmallError):
            build_dense(n)

    def test_too_large(self):
        with pytest.raises(CapacityError):
            build_dense(10**6 + 1)

    @pytest.mark.parametrize("n", [2, 6, 33, 200])
    def test_row_structure(self, n):
        m = build_dense(n)
        np.testing.assert_allclose(np.linalg.norm(m, axis=1), 1.0, atol=1e-12)
        np.testing.assert_array_equal(m[-1], np.full(n, 1 / math.sqrt(n)))
        assert [int(np.count_nonzero(r)) for r in m[:-1]] == list(range(2, n + 1))

    @pytest.mark.parametrize("n", [2, 10, 100])
    def test_columns_orthonormal_numerically(self, n):
        m = build_dense(n)
        np.testing.assert_allclose(m.T @ m, np.eye(n), atol=1e-12)


class TestExactCertification:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 512])
    def test_passes(self, n):
        v = verify_orthogonality_exact(n)
        assert v.passed and v.failing is None
        assert v.pairs_checked == n * (n + 1) // 2

    def test_detects_perturbation(self):
        v = verify_orthogonality_exact(table=symbolic_matrix(5).perturbed(3, 2))
        assert not v.passed
        # row 3 is first touched by its pair with row 1 (off-diagonal, both < n)
        assert v.failing_pair == (1, 3)
        assert v.failing_case == 4
        assert v.failing.integer_sum == -1
        assert v.failing.shared_radicand == 2 * 12

    def test_detects_perturbation_of_last_row(self):
        v = verify_orthogonality_exact(table=symbolic_matrix(4).perturbed(4, 4))
        assert not v.passed
        assert v.failing_pair == (3, 4)
        assert v.failing_case == 3

    def test_every_single_perturbation_detected(self):
        n = 7
        base = symbolic_matrix(n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for delta in (-1, 1):
                    assert not verify_orthogonality_exact(table=base.perturbed(i, j, delta)).passed

    def test_gram_cases(self):
        assert [gram_case(5, 2, 2), gram_case(5, 5, 5), gram_case(5, 2, 5), gram_case(5, 1, 3)] == [
            1,
            2,
            3,
            4,
        ]

    def test_certify_orders_matches_single(self):
        got = certify_orders(range(2, 40))
        assert [v.order for v in got] == list(range(2, 40))
        assert all(v.passed for v in got)
        assert all(v == verify_orthogonality_exact(v.order) for v in got)

    def test_capacity_guard(self):
        t = symbolic_matrix(4)
        huge = t.perturbed(1, 1, 2**40)
        with pytest.raises(CapacityError):
            verify_orthogonality_exact(table=huge)

    def test_needs_argument(self):
        with pytest.raises(UsageError):
            verify_orthogonality_exact()


class TestApply:
    def test_n2_constant(self):
        np.testing.assert_allclose(apply(2, [1, 1]), [0, math.sqrt(2)], atol=1e-15)

    def test_constant_vector(self):
        y = apply(7, np.full(7, 2.5))
        np.testing.assert_allclose(y[:-1], 0, atol=1e-14)
        assert y[-1] == pytest.approx(2.5 * math.sqrt(7), abs=1e-12)

    def test_n3_against_dense(self):
        expected = build_dense(3) @ np.array([1.0, 2.0, 3.0])
        np.testing.assert_allclose(expected, [-1 / r2, -3 / r6, 6 / r3], atol=1e-15)
        np.testing.assert_allclose(apply(3, [1, 2, 3]), expected, atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(UsageError, match="length"):
            apply(3, [1, 2])
        with pytest.raises(UsageError):
            apply_transpose(3, [1, 2, 3, 4])

    def test_batch_rows(self):
        rng = np.random.default_rng(1)
        z = rng.normal(size=(20, 6))
        np.testing.assert_allclose(apply(6, z), z @ build_dense(6).T, atol=1e-12)

    def test_transpose_basis(self):
        e = np.zeros(6)
        e[-1] = 1
        np.testing.assert_allclose(apply_transpose(6, e), np.full(6, 1 / math.sqrt(6)), atol=1e-15)

    def test_round_trip_small(self):
        np.testing.assert_allclose(apply_transpose(3, apply(3, [1, 2, 3])), [1, 2, 3], atol=1e-10)

    def test_round_trip_4096(self):
        rng = np.random.default_rng(7)
        z = rng.normal(size=(100, 4096))
        err = np.abs(apply_transpose(4096, apply(4096, z)) - z).max()
        assert err < 1e-10

    @pytest.mark.parametrize("n", [2, 3, 17, 128, 1024])
    def test_dense_agreement(self, n):
        rng = np.random.default_rng(n)
        z = rng.uniform(-1e3, 1e3, size=(5, n))
        m = build_dense(n)
        np.testing.assert_allclose(apply(n, z), z @ m.T, rtol=0, atol=1e-10)
        np.testing.assert_allclose(apply_transpose(n, z), z @ m, rtol=0, atol=1e-10)


vectors = st.integers(2, 300).flatmap(
    lambda n: arrays(np.float64, n, elements=st.floats(-1e3, 1e3, allow_subnormal=False))
)


@settings(max_examples=200, deadline=None)
@given(vectors)
def test_energy_mean_and_deviation_identities(z):
    n = z.size
    y = apply(n, z)
    energy = float(z @ z)
    assert abs(float(y @ y) - energy) <= 1e-10 * max(energy, 1e-300)
    mean = z.sum() / n
    assert abs(y[-1] - math.sqrt(n) * mean) <= 1e-12 * max(1.0, abs(mean) * math.sqrt(n))
    w = float(np.sum((z - mean) ** 2))
    # deviation identity is relative to the energy scale: W may cancel to ~0
    assert abs(float(y[:-1] @ y[:-1]) - w) <= 1e-10 * max(w, energy * 1e-6, 1e-300)
