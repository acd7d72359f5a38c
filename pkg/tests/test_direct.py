import itertools

import numpy as np
import pytest

from mloewner import (
    DegenerateSlice,
    FitConfig,
    FlopCounter,
    InvalidInput,
    NullMethod,
    OverPrunedModel,
    compose_factors,
    eval_barycentric,
    eval_barycentric_batch,
    fit_direct,
    flops_recursive,
    linspace_axis,
    recursive_nullspace,
    sample_grid,
    split_support,
)
from oracles import cos_angle, full_loewner, random_polynomial, random_rational, svd_null_vector


def demo_fn(x1, x2):
    return x1 * x2**3 + 2 * x1 * x2 - 1


def demo_supports():
    axis = linspace_axis("x", -1, 1, 10)
    lam1, mu1 = split_support(axis, 2, 2)
    lam2, mu2 = split_support(axis, 4, 4)
    return [lam1, lam2], [mu1, mu2]


def test_recursive_demo_factors_and_weights():
    lambdas, mus = demo_supports()
    weights, factors = recursive_nullspace(demo_fn, lambdas, mus)
    assert np.allclose(weights, [3, -8, 6, -1, -3, 8, -6, 1], atol=1e-10)
    assert np.allclose(factors[0].reshape(-1), [-1, 1], atol=1e-12)
    assert np.allclose(factors[1], np.array([[-3, -3], [8, 8], [-6, -6], [1, 1]]), atol=1e-10)


def test_recursive_three_product_sum():
    def f(x1, x2, x3):
        return x1 * x2 + x1 * x3 + x2 * x3

    axes = [linspace_axis(f"x{i}", -0.5, 1, 12) for i in range(3)]
    lambdas = [np.array([-0.5, 1.0])] * 3
    weights, _ = recursive_nullspace(f, lambdas, axes=axes)
    assert np.allclose(weights, [-1, 1, 1, -1, 1, -1, -1, 1], atol=1e-12)


def test_recursive_matches_full_loewner_oracle():
    rng = np.random.default_rng(21)
    for trial in range(10):
        omega = int(rng.integers(2, 4))
        ks = [int(rng.integers(2, 5)) for _ in range(omega)]
        f = random_polynomial(rng, ks)
        axes = [linspace_axis(f"x{l}", -1, 1, 2 * k + 2) for l, k in enumerate(ks)]
        splits = [split_support(a, k, k) for a, k in zip(axes, ks)]
        lambdas = [s[0] for s in splits]
        mus = [s[1] for s in splits]
        weights, _ = recursive_nullspace(f, lambdas, mus)
        oracle = svd_null_vector(full_loewner(lambdas, mus, f))
        assert cos_angle(weights, oracle) > 1 - 1e-8


def test_recursive_decoupling_recomposes_bit_for_bit():
    lambdas, mus = demo_supports()
    weights, factors = recursive_nullspace(demo_fn, lambdas, mus)
    recomposed = compose_factors(factors, [len(x) for x in lambdas])
    assert recomposed.tolist() == weights.tolist()


def test_recursive_flop_counter_matches_closed_form():
    rng = np.random.default_rng(8)
    for ks in [(2, 4), (3, 2, 2), (4,), (2, 3, 4)]:
        f = random_polynomial(rng, ks)
        axes = [linspace_axis(f"x{l}", -1, 1, 2 * k + 2) for l, k in enumerate(ks)]
        splits = [split_support(a, k, k) for a, k in zip(axes, ks)]
        counter = FlopCounter()
        recursive_nullspace(
            f, [s[0] for s in splits], [s[1] for s in splits], counter=counter
        )
        assert counter.flops == flops_recursive(ks)


def test_recursive_zero_slice_raises():
    lambdas, mus = demo_supports()
    with pytest.raises(DegenerateSlice) as err:
        recursive_nullspace(lambda x1, x2: 0.0, lambdas, mus)
    assert err.value.frozen is not None


def test_recursive_permutation_weights_equal():
    lambdas, mus = demo_supports()
    base, factors = recursive_nullspace(demo_fn, lambdas, mus)
    permuted, pfactors = recursive_nullspace(demo_fn, lambdas, mus, permutation=(1, 0))
    assert pfactors is None
    assert factors is not None
    assert cos_angle(base, permuted) > 1 - 1e-12


def test_recursive_derives_rows_from_axes():
    lambdas, mus = demo_supports()
    axes = [linspace_axis("x", -1, 1, 10)] * 2
    derived, _ = recursive_nullspace(demo_fn, lambdas, axes=axes)
    explicit, _ = recursive_nullspace(demo_fn, lambdas, mus)
    assert derived.tolist() == explicit.tolist()


def test_fit_direct_worked_example():
    axes = [linspace_axis("x1", -1, 1, 10), linspace_axis("x2", -1, 1, 10)]
    tensor = sample_grid(demo_fn, axes)
    model, report = fit_direct(tensor, config=FitConfig(tol_ord=1e-6))
    assert model.k == (2, 4)
    assert cos_angle(model.weights, [3, -8, 6, -1, -3, 8, -6, 1]) > 1 - 1e-10
    assert report.flops_recursive == 136
    assert report.flops_full == 512
    assert report.max_entries_recursive == 16
    assert report.max_entries_full == 64


def test_fit_direct_product_case():
    axes = [linspace_axis("x1", -1, 1, 40), linspace_axis("x2", -1, 1, 40)]
    tensor = sample_grid(lambda a, b: a * b, axes)
    model, _ = fit_direct(tensor, config=FitConfig(tol_ord=1e-2))
    assert model.k == (2, 2)
    assert cos_angle(model.weights, [1, -1, -1, 1]) > 1 - 1e-10


def test_fit_direct_constant():
    axes = [linspace_axis("x1", 0, 1, 8), linspace_axis("x2", 0, 1, 8)]
    model, _ = fit_direct(lambda a, b: 4.5, axes, FitConfig(tol_ord=1e-6))
    assert model.k == (1, 1)
    rng = np.random.default_rng(4)
    pts = rng.uniform(0, 1, size=(20, 2))
    assert np.allclose(eval_barycentric_batch(model, pts), 4.5, atol=1e-14)


def test_fit_direct_interpolates_rational():
    rng = np.random.default_rng(30)
    ks = (3, 2)
    f = random_rational(rng, ks)
    axes = [linspace_axis(f"x{l}", -1, 1, 12) for l in range(2)]
    model, _ = fit_direct(f, axes, FitConfig(k=ks))
    w = model.values_tensor()
    for idx in itertools.product(*(range(k) for k in model.k)):
        x = [model.lambdas[l][i] for l, i in enumerate(idx)]
        assert eval_barycentric(model, x) == pytest.approx(w[idx], rel=1e-12)


def test_fit_direct_requires_k_when_detection_off():
    axes = [linspace_axis("x", -1, 1, 10)]
    with pytest.raises(InvalidInput):
        fit_direct(lambda x: x, axes, FitConfig(tol_ord=0))
    model, _ = fit_direct(lambda x: x, axes, FitConfig(tol_ord=0, k=(2,)))
    assert model.k == (2,)


def test_fit_direct_max_k_cap():
    axes = [linspace_axis("x", -1, 1, 20)]
    model, _ = fit_direct(lambda x: x**5, axes, FitConfig(tol_ord=1e-9, max_k=3))
    assert model.k == (3,)


def test_fit_direct_over_pruned():
    axes = [linspace_axis("x1", -1, 1, 10), linspace_axis("x2", -1, 1, 10)]
    with pytest.raises(OverPrunedModel):
        fit_direct(demo_fn, axes, FitConfig(tol_ord=1e-6, tol_k=100.0))


def test_fit_direct_pruning_drops_factors():
    axes = [linspace_axis("x1", -1, 1, 10), linspace_axis("x2", -1, 1, 10)]
    model, _ = fit_direct(demo_fn, axes, FitConfig(tol_ord=1e-6, tol_k=0.5))
    assert model.factors is None
    assert np.count_nonzero(model.weights) < 8


def test_fit_direct_null_method_variants_agree():
    axes = [linspace_axis("x1", -1, 1, 10), linspace_axis("x2", -1, 1, 10)]
    tensor = sample_grid(demo_fn, axes)
    results = []
    for method in NullMethod:
        model, _ = fit_direct(tensor, config=FitConfig(tol_ord=1e-6, null_method=method))
        results.append(model.weights)
    for other in results[1:]:
        assert cos_angle(results[0], other) > 1 - 1e-10


def test_fit_config_validation():
    with pytest.raises(InvalidInput):
        FitConfig(tol_ord=2.0)
    with pytest.raises(InvalidInput):
        FitConfig(max_k=0)
    with pytest.raises(InvalidInput):
        FitConfig(order_slices=0)


def test_order_slices_rescue_degenerate_freeze():
    # Along x1 the default frozen slice sees a plain linear function; more
    # random slices cannot lower the detected order.
    axes = [linspace_axis("x1", -1, 1, 12), linspace_axis("x2", -1, 1, 12)]
    base, _ = fit_direct(demo_fn, axes, FitConfig(tol_ord=1e-6, order_slices=3))
    assert base.k == (2, 4)


def test_fit_direct_nine_variable_oracle():
    def f(*x):
        return 1.0 / (x[0] ** 2 + x[1] ** 2 * x[2] + x[3] ** 2 + sum(x[4:]))

    axes = [linspace_axis(f"x{l + 1}", 1, 5, 6) for l in range(9)]
    model, report = fit_direct(f, axes, FitConfig(tol_ord=1e-10))
    assert model.k == (3, 3, 2, 3, 2, 2, 2, 2, 2)
    rng = np.random.default_rng(9)
    pts = rng.uniform(1, 5, size=(200, 9))
    truth = np.array([f(*x) for x in pts])
    err = np.sqrt(np.mean((eval_barycentric_batch(model, pts) - truth) ** 2))
    assert err <= 1e-12
    assert report.max_entries_recursive == 9
