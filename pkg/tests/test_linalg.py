"""Oracle and property tests for the dense linear algebra helpers."""

import numpy as np
import pytest

from zakbench import (
    DimMismatch,
    EmptyFamily,
    FiniteFamily,
    frame_bounds_estimate,
    gram_matrix,
    inner_product,
    least_squares,
    rank_and_span,
)


def test_inner_product_hand_values():
    u = np.array([1.0, 1j])
    v = np.array([1.0, 1.0])
    # <u, v> = 1*1 + i*1 with unit weight
    assert inner_product(u, v) == pytest.approx(1.0 + 1j)
    assert inner_product(u, u) == pytest.approx(2.0)
    assert inner_product(u, v, weight=0.5) == pytest.approx(0.5 + 0.5j)


def test_inner_product_conjugate_linear_in_second_argument():
    rng = np.random.default_rng(3)
    for _ in range(20):
        u = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        a = complex(rng.standard_normal() + 1j * rng.standard_normal())
        lhs = inner_product(u, a * v)
        rhs = np.conj(a) * inner_product(u, v)
        assert abs(lhs - rhs) <= 1e-12 * max(abs(rhs), 1.0)


def test_inner_product_shape_mismatch():
    with pytest.raises(DimMismatch):
        inner_product(np.ones(3), np.ones(4))


def test_gram_matrix_dft_orthogonality_oracle():
    # In-window sampled exponentials are exactly orthonormal under 1/N.
    N = 64
    t = (np.arange(N) + 0.5) / N
    rows = np.array([np.exp(2j * np.pi * n * t) for n in range(-5, 6)])
    gram = gram_matrix(rows, weight=1.0 / N)
    assert np.max(np.abs(gram - np.eye(11))) < 1e-13


def test_gram_matrix_hand_value_and_bounds():
    v = np.array([1.0, 0.0])
    gram = gram_matrix([v, v])
    assert np.allclose(gram, np.ones((2, 2)))
    A, B = frame_bounds_estimate([v, v])
    assert abs(A) < 1e-12 and B == pytest.approx(2.0)


def test_gram_matrix_uses_carried_weight():
    fam = FiniteFamily(np.eye(3), weight=0.25)
    assert np.allclose(gram_matrix(fam), 0.25 * np.eye(3))
    # explicit weight overrides the carried one
    assert np.allclose(gram_matrix(fam, weight=1.0), np.eye(3))


def test_gram_matrix_empty_family():
    with pytest.raises(EmptyFamily):
        gram_matrix(np.zeros((0, 4)))


def test_frame_bounds_orthonormal_family():
    A, B = frame_bounds_estimate(np.eye(5))
    assert A == pytest.approx(1.0, abs=1e-14)
    assert B == pytest.approx(1.0, abs=1e-14)


def test_frame_bounds_lower_bound_never_significantly_negative():
    rng = np.random.default_rng(11)
    for _ in range(20):
        count = int(rng.integers(2, 9))
        fam = rng.standard_normal((count, 6)) + 1j * rng.standard_normal((count, 6))
        A, B = frame_bounds_estimate(fam)
        assert A >= -1e-10
        assert B >= A


def test_rank_known_values():
    assert rank_and_span(np.eye(4)) == 4
    dependent = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]])
    assert rank_and_span(dependent) == 2
    assert rank_and_span(np.zeros((3, 3))) == 0


def test_rank_tolerance_cutoff():
    # A vector within 1e-12 of the span counts as dependent at tol 1e-10.
    base = np.array([[1.0, 0.0], [0.0, 1e-12]])
    assert rank_and_span(base, tol=1e-10) == 1
    assert rank_and_span(base, tol=1e-14) == 2


def test_rank_invariant_under_unitary_mixing():
    rng = np.random.default_rng(7)
    for _ in range(100):
        count = int(rng.integers(2, 7))
        dim = int(rng.integers(count, 9))
        fam = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
        r = rank_and_span(fam)
        q, _ = np.linalg.qr(rng.standard_normal((count, count)) + 1j * rng.standard_normal((count, count)))
        assert rank_and_span(q @ fam) == r


def test_rank_empty_family():
    with pytest.raises(EmptyFamily):
        rank_and_span(np.zeros((0, 3)))


def test_least_squares_hand_value():
    A = np.array([[1.0], [1.0]])
    b = np.array([1.0, 3.0])
    x = least_squares(A, b)
    assert x.shape == (1,)
    assert x[0] == pytest.approx(2.0)


def test_least_squares_minimum_norm_solution():
    A = np.array([[1.0, 0.0]])
    x = least_squares(A, np.array([1.0]))
    assert np.allclose(x, [1.0, 0.0])


def test_least_squares_residual_orthogonality():
    rng = np.random.default_rng(19)
    for _ in range(25):
        m, n = int(rng.integers(3, 9)), int(rng.integers(1, 6))
        A = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        b = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        x = least_squares(A, b)
        lhs = np.linalg.norm(A.conj().T @ (A @ x - b))
        assert lhs <= 1e-9 * np.linalg.norm(A.conj().T @ b) + 1e-12


def test_least_squares_shape_errors():
    with pytest.raises(DimMismatch):
        least_squares(np.ones(3), np.ones(3))
    with pytest.raises(DimMismatch):
        least_squares(np.ones((3, 2)), np.ones(4))
