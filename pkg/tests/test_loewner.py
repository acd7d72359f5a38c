import numpy as np
import pytest

from mloewner import (
    DegenerateSupport,
    InvalidInput,
    MethodFallbackWarning,
    NullMethod,
    build_loewner_1d,
    estimate_order,
    linspace_axis,
    normalized_singular_values,
    null_vector,
    prune_weights,
    split_support,
)
from oracles import cos_angle, full_loewner, svd_null_vector


def demo_fn(x1, x2):
    return x1 * x2**3 + 2 * x1 * x2 - 1


def test_build_identity_slope():
    m = build_loewner_1d([0.0], [1.0], [0.0], [1.0])
    assert m.entries.tolist() == [[1.0]]


def test_build_constant():
    m = build_loewner_1d([0.0], [1.0], [5.0], [5.0])
    assert m.entries.tolist() == [[0.0]]


def test_build_square_function_divided_differences():
    # Hand oracle for f = x^2: entry(i, j) = (mu_i^2 - lam_j^2)/(mu_i - lam_j)
    # = mu_i + lam_j, so lam = [-1, 1], mu = [0, 2] gives [[-1, 1], [1, 3]].
    lam, mu = [-1.0, 1.0], [0.0, 2.0]
    m = build_loewner_1d(lam, mu, [1.0, 1.0], [0.0, 4.0])
    assert m.entries.tolist() == [[-1.0, 1.0], [1.0, 3.0]]


def test_build_rejects_coincident_points():
    with pytest.raises(DegenerateSupport):
        build_loewner_1d([0.0, 1.0], [1.0, 2.0], [0, 0], [0, 0])


def test_nsv_identity():
    assert normalized_singular_values(np.eye(2)).tolist() == [1.0, 1.0]


def test_nsv_rank_one():
    nsv = normalized_singular_values(np.ones((2, 2)))
    assert nsv[0] == 1.0
    assert nsv[1] == pytest.approx(0.0, abs=1e-15)


def test_nsv_matches_eigen_oracle():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(4, 4))
    eigs = np.sqrt(np.sort(np.linalg.eigvalsh(m.T @ m))[::-1])
    assert np.allclose(normalized_singular_values(m), eigs / eigs[0], atol=1e-12)


def test_nsv_scale_invariant():
    rng = np.random.default_rng(4)
    m = rng.normal(size=(5, 3))
    base = normalized_singular_values(m)
    for alpha in (1e-7, 3.0, -2.5e6):
        assert np.allclose(normalized_singular_values(alpha * m), base, atol=1e-12)


def test_nsv_zero_matrix():
    assert normalized_singular_values(np.zeros((3, 2))).tolist() == [0.0, 0.0]


def test_nsv_empty_rejected():
    with pytest.raises(InvalidInput):
        normalized_singular_values(np.zeros((0, 0)))


def test_estimate_order_demo_degrees():
    axis = linspace_axis("x", -1, 1, 10)
    frozen = axis.points[1]  # first column-pool point
    along_x1 = np.array([demo_fn(x, frozen) for x in axis.points])
    along_x2 = np.array([demo_fn(frozen, x) for x in axis.points])
    assert estimate_order(along_x1, axis.points, 1e-6) == 1
    assert estimate_order(along_x2, axis.points, 1e-6) == 3


def test_estimate_order_linear():
    axis = linspace_axis("x", 0, 1, 8)
    samples = 3 * axis.points - 2
    assert estimate_order(samples, axis.points, 1e-8) == 1


def test_estimate_order_square():
    axis = linspace_axis("x", -1, 1, 10)
    assert estimate_order(axis.points**2, axis.points, 1e-8) == 2


def test_estimate_order_sentinel_zero():
    axis = linspace_axis("x", -1, 1, 10)
    assert estimate_order(axis.points, axis.points, 0) == 4  # pool capacity - 1


def test_estimate_order_rejects():
    axis = linspace_axis("x", 0, 1, 6)
    with pytest.raises(InvalidInput):
        estimate_order(axis.points, axis.points, 1.5)
    with pytest.raises(Exception):
        estimate_order(np.array([1.0, np.nan] * 3), axis.points, 1e-6)


def test_null_vector_explicit_kernel():
    assert null_vector(np.array([[1.0, 0.0]])).tolist() == [0.0, 1.0]


def _demo_supports():
    axis = linspace_axis("x", -1, 1, 10)
    lam1, mu1 = split_support(axis, 2, 2)
    lam2, mu2 = split_support(axis, 4, 4)
    return [lam1, lam2], [mu1, mu2]


def test_null_vector_full_2d_demo():
    lambdas, mus = _demo_supports()
    big = full_loewner(lambdas, mus, demo_fn)
    expected = np.array([3, -8, 6, -1, -3, 8, -6, 1], dtype=float)
    for method in NullMethod:
        c = null_vector(big, method)
        assert cos_angle(c, expected) > 1 - 1e-10


def test_null_vector_residual_slack():
    lambdas, mus = _demo_supports()
    big = full_loewner(lambdas, mus, demo_fn)
    c = null_vector(big)
    bound = np.finfo(float).eps * 1e3 * np.linalg.norm(big, 2) * np.linalg.norm(c)
    assert np.linalg.norm(big @ c) <= bound


def test_null_vector_planted_kernel_all_methods():
    rng = np.random.default_rng(11)
    for trial in range(20):
        kvec = rng.normal(size=6)
        kvec /= np.linalg.norm(kvec)
        proj = np.eye(6) - np.outer(kvec, kvec)
        m = rng.normal(size=(5, 6)) @ proj
        for method in NullMethod:
            c = null_vector(m, method)
            assert cos_angle(c, kvec) > 1 - 1e-10


def test_null_vector_row_scaling_invariance():
    rng = np.random.default_rng(5)
    kvec = rng.normal(size=5)
    proj = np.eye(5) - np.outer(kvec, kvec) / (kvec @ kvec)
    m = rng.normal(size=(5, 5)) @ proj
    base = null_vector(m)
    scaled = null_vector(np.diag([1.0, 10.0, 0.1, 5.0, 2.0]) @ m)
    assert cos_angle(base, scaled) > 1 - 1e-10


def test_null_vector_solve_falls_back_on_singular_block():
    m = np.array([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.warns(MethodFallbackWarning):
        c = null_vector(m, NullMethod.SOLVE)
    assert np.linalg.norm(m @ c) < 1e-12


def test_null_vector_accepts_method_codes():
    m = np.array([[1.0, 0.0]])
    assert null_vector(m, NullMethod.from_name(1)).tolist() == [0.0, 1.0]
    assert null_vector(m, NullMethod.from_name("qr")).tolist() == [0.0, 1.0]
    assert null_vector(m, NullMethod.from_name(3)).tolist() == [0.0, 1.0]


def test_kernel_dimension_overfitting_signal():
    # Type (2,2) rational: three columns give a one-dimensional kernel,
    # a fourth makes it at least two-dimensional.
    def f(x):
        return (x**2 + x + 1) / (x**2 + 2)

    axis = linspace_axis("x", -1, 1, 12)

    def kernel_dim(k):
        lam, mu = split_support(axis, k, k)
        m = build_loewner_1d(lam, mu, [f(x) for x in lam], [f(x) for x in mu])
        nsv = normalized_singular_values(m)
        return int(np.sum(nsv < 1e-10))

    assert kernel_dim(3) == 1
    assert kernel_dim(4) >= 2


def test_prune_below_threshold():
    assert prune_weights(np.array([1.0, 1e-16]), 1e-14).tolist() == [1.0, 0.0]


def test_prune_sentinel_no_deletion():
    c = np.array([1.0, 1e-300, -2.0])
    assert prune_weights(c, -1).tolist() == c.tolist()


def test_prune_keeps_moderate_ratios():
    c = np.array([3.0, -8.0, 6.0, -1.0])
    assert prune_weights(c, 1e-2).tolist() == c.tolist()


def test_prune_rejects_bad_tolerance():
    with pytest.raises(InvalidInput):
        prune_weights(np.array([1.0]), -0.5)
