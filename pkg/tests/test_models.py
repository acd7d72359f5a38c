import itertools

import numpy as np
import pytest

from mloewner import (
    BarycentricModel,
    DegenerateSupport,
    FactorsUnavailable,
    FitConfig,
    InvalidInput,
    MonomialModel,
    PoleEncountered,
    compose_factors,
    emit_network_graph,
    eval_barycentric,
    eval_barycentric_batch,
    eval_kst,
    eval_monomial,
    eval_monomial_batch,
    fit_direct,
    linspace_axis,
    sample_grid,
    to_kst,
    to_monomial,
    vandermonde_matrix,
)
from oracles import random_polynomial


def demo_fn(x1, x2):
    return x1 * x2**3 + 2 * x1 * x2 - 1


@pytest.fixture(scope="module")
def demo_model():
    axes = [linspace_axis("x1", -1, 1, 10), linspace_axis("x2", -1, 1, 10)]
    tensor = sample_grid(demo_fn, axes)
    model, _ = fit_direct(tensor, config=FitConfig(tol_ord=1e-6))
    return model


@pytest.fixture(scope="module")
def product_model():
    # The bilinear product on explicit corner supports: weights [1,-1,-1,1].
    return BarycentricModel(
        (np.array([-1.0, 1.0]), np.array([-1.0, 1.0])),
        np.array([1.0, -1.0, -1.0, 1.0]),
        np.array([1.0, -1.0, -1.0, 1.0]),
        (np.array([[-1.0], [1.0]]), np.array([[-1.0, -1.0], [1.0, 1.0]])),
    )


def test_eval_at_full_support_returns_stored_value(demo_model):
    assert eval_barycentric(demo_model, [1.0, 1.0]) == 2.0


def test_eval_interior_point(demo_model):
    assert eval_barycentric(demo_model, [0.5, 0.5]) == pytest.approx(-0.4375, abs=1e-12)


def test_eval_every_support_combination(demo_model):
    w = demo_model.values_tensor()
    for idx in itertools.product(*(range(k) for k in demo_model.k)):
        x = [demo_model.lambdas[l][i] for l, i in enumerate(idx)]
        assert eval_barycentric(demo_model, x) == pytest.approx(
            w[idx], rel=1e-12
        )


def test_eval_partial_hit(demo_model):
    x = [float(demo_model.lambdas[0][0]), 0.3]
    assert eval_barycentric(demo_model, x) == pytest.approx(demo_fn(*x), rel=1e-10)


def test_eval_batch_matches_scalar(demo_model):
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1, 1, size=(40, 2))
    pts[7, 0] = demo_model.lambdas[0][1]  # force one partial hit row
    batch = eval_barycentric_batch(demo_model, pts)
    singles = [eval_barycentric(demo_model, x) for x in pts]
    assert np.allclose(batch, singles, rtol=1e-14, atol=0)


def test_eval_pole_raises():
    model = BarycentricModel(
        (np.array([0.0, 1.0]),), np.array([1.0, 1.0]), np.array([1.0, 1.0])
    )
    with pytest.raises(PoleEncountered) as err:
        eval_barycentric(model, [0.5])
    assert err.value.x == (0.5,)


def test_vandermonde_demo():
    v = vandermonde_matrix([-7 / 9, 1.0])
    assert np.allclose(v, [[1, 1], [-1, 7 / 9]], atol=1e-15)


def test_vandermonde_single_point():
    assert vandermonde_matrix([3.25]).tolist() == [[1.0]]


def test_vandermonde_three_points_against_expansion_oracle():
    lam = [-1.0, 0.0, 1.0]
    expected = np.empty((3, 3))
    for j in range(3):
        poly = np.array([1.0])
        for i, root in enumerate(lam):
            if i != j:
                poly = np.polymul(poly, [1.0, -root])
        expected[:, j] = poly
    assert np.allclose(vandermonde_matrix(lam), expected, atol=1e-14)


def test_vandermonde_rejects_duplicates():
    with pytest.raises(DegenerateSupport):
        vandermonde_matrix([0.5, 0.5])


def test_to_monomial_demo(demo_model):
    mono = to_monomial(demo_model)
    num_desc, den_desc = mono.descending()
    assert np.allclose(num_desc, [[1, 0, 2, 0], [0, 0, 0, -1]], atol=1e-10)
    assert np.allclose(den_desc, [[0, 0, 0, 0], [0, 0, 0, 1]], atol=1e-10)


def test_to_monomial_product(product_model):
    mono = to_monomial(product_model)
    num_desc, den_desc = mono.descending()
    assert np.allclose(num_desc, [[1, 0], [0, 0]], atol=1e-13)
    assert np.allclose(den_desc, [[0, 0], [0, 1]], atol=1e-13)


def test_to_monomial_constant_ratio():
    model = BarycentricModel(
        (np.array([-0.5, 0.5]), np.array([-1.0, 1.0])),
        np.array([2.0, -1.0, 0.5, 1.0]),
        np.full(4, 5.0),
    )
    mono = to_monomial(model)
    assert np.allclose(mono.num, 5.0 * mono.den, atol=1e-12)


def test_eval_monomial_demo(demo_model):
    mono = to_monomial(demo_model)
    assert eval_monomial(mono, [0.5, 0.5]) == pytest.approx(-0.4375, abs=1e-12)


def test_eval_monomial_unit():
    mono = MonomialModel(np.array([[1.0]]), np.array([[1.0]]))
    assert eval_monomial(mono, [12.3, -4.5]) == 1.0


def test_monomial_agrees_with_barycentric(demo_model):
    mono = to_monomial(demo_model)
    rng = np.random.default_rng(1)
    pts = rng.uniform(-1, 1, size=(100, 2))
    bary = eval_barycentric_batch(demo_model, pts)
    direct = eval_monomial_batch(mono, pts)
    assert np.allclose(direct, bary, rtol=1e-10, atol=1e-13)


def test_monomial_pole():
    mono = MonomialModel(np.array([1.0, 0.0]), np.array([0.0, 1.0]))  # 1/x
    with pytest.raises(PoleEncountered):
        eval_monomial(mono, [0.0])


def test_to_kst_demo(demo_model):
    kst = to_kst(demo_model)
    assert np.allclose(kst.barys[0], [-1, -1, -1, -1, 1, 1, 1, 1], atol=1e-12)
    assert np.allclose(kst.barys[1], [-3, 8, -6, 1, -3, 8, -6, 1], atol=1e-12)


def test_to_kst_product_factors(product_model):
    assert product_model.factors[0].reshape(-1).tolist() == [-1.0, 1.0]
    assert product_model.factors[1].tolist() == [[-1.0, -1.0], [1.0, 1.0]]
    kst = to_kst(product_model)
    prod = kst.barys[0] * kst.barys[1]
    assert np.allclose(prod, product_model.weights, atol=0)


def test_to_kst_single_variable():
    model = BarycentricModel(
        (np.array([0.0, 1.0, 2.0]),),
        np.array([1.0, -2.0, 1.0]),
        np.array([0.0, 1.0, 4.0]),
        (np.array([[1.0], [-2.0], [1.0]]),),
    )
    kst = to_kst(model)
    assert kst.barys[0].tolist() == model.weights.tolist()


def test_to_kst_requires_factors():
    model = BarycentricModel(
        (np.array([0.0, 1.0]),), np.array([1.0, -1.0]), np.array([0.0, 1.0])
    )
    with pytest.raises(FactorsUnavailable):
        to_kst(model)


def test_eval_kst_demo(demo_model):
    kst = to_kst(demo_model)
    assert eval_kst(kst, [0.5, 0.5]) == pytest.approx(-0.4375, abs=1e-12)
    assert eval_kst(kst, [1.0, 1.0]) == 2.0


def test_kst_agrees_with_barycentric(demo_model):
    kst = to_kst(demo_model)
    rng = np.random.default_rng(2)
    pts = rng.uniform(-1, 1, size=(100, 2))
    bary = eval_barycentric_batch(demo_model, pts)
    direct = np.array([eval_kst(kst, x) for x in pts])
    assert np.allclose(direct, bary, rtol=1e-10, atol=1e-13)


def _graph_counts(text):
    inputs = sum(1 for line in text.splitlines() if line.strip().startswith("x") and "shape=circle" in line)
    basis = text.count("shape=box")
    prods = text.count('label="prod"')
    sums = text.count("doublecircle")
    return inputs, basis, prods, sums


def test_graph_demo_topology(demo_model):
    assert _graph_counts(emit_network_graph(demo_model, "denominator")) == (2, 6, 8, 1)


def test_graph_single_variable():
    model = BarycentricModel(
        (np.array([0.0, 1.0]),), np.array([1.0, -1.0]), np.array([0.0, 1.0])
    )
    assert _graph_counts(emit_network_graph(model, "numerator")) == (1, 2, 2, 1)


def test_graph_three_variable_counts():
    model = BarycentricModel(
        tuple(np.array([-0.5, 1.0]) for _ in range(3)),
        np.array([-1.0, 1, 1, -1, 1, -1, -1, 1]),
        np.arange(8.0) + 1,
    )
    assert _graph_counts(emit_network_graph(model, "denominator")) == (3, 6, 8, 1)


def test_graph_edge_weights_match_part(demo_model):
    den = emit_network_graph(demo_model, "denominator")
    num = emit_network_graph(demo_model, "numerator")
    assert f'label="{demo_model.weights[0]!r}"' in den
    assert f'label="{(demo_model.weights * demo_model.values)[0]!r}"' in num


def test_scale_invariance(demo_model):
    rng = np.random.default_rng(3)
    pts = rng.uniform(-1, 1, size=(25, 2))
    base = eval_barycentric_batch(demo_model, pts)
    for alpha in (1e-6, 1e6):
        scaled = BarycentricModel(
            demo_model.lambdas, alpha * demo_model.weights, demo_model.values
        )
        got = eval_barycentric_batch(scaled, pts)
        assert np.allclose(got, base, rtol=1e-13, atol=1e-15)


def test_tri_form_consistency_random_models():
    rng = np.random.default_rng(7)
    for trial in range(6):
        omega = int(rng.integers(1, 5))
        ks = [int(rng.integers(1, 6)) for _ in range(omega)]
        f = random_polynomial(rng, ks)
        axes = [linspace_axis(f"x{l+1}", -1, 1, max(2 * k, 4)) for l, k in enumerate(ks)]
        model, _ = fit_direct(f, axes, FitConfig(k=tuple(ks)))
        kst = to_kst(model)
        mono = to_monomial(model)
        pts = rng.uniform(-0.95, 0.95, size=(30, omega))
        bary = eval_barycentric_batch(model, pts)
        assert np.allclose(eval_monomial_batch(mono, pts), bary, rtol=1e-10, atol=1e-12)
        kvals = np.array([eval_kst(kst, x) for x in pts])
        assert np.allclose(kvals, bary, rtol=1e-10, atol=1e-12)


def test_compose_factors_reference(product_model):
    composed = compose_factors(product_model.factors, product_model.k)
    assert composed.tolist() == product_model.weights.tolist()


def test_model_json_round_trip(demo_model):
    back = BarycentricModel.from_json(demo_model.to_json())
    assert back.weights.tolist() == demo_model.weights.tolist()
    assert back.values.tolist() == demo_model.values.tolist()
    assert all(
        a.tolist() == b.tolist() for a, b in zip(back.lambdas, demo_model.lambdas)
    )
    assert all(
        a.tolist() == b.tolist() for a, b in zip(back.factors, demo_model.factors)
    )
    mono = to_monomial(demo_model)
    mono_back = MonomialModel.from_json(mono.to_json())
    assert mono_back.num.tolist() == mono.num.tolist()
    assert mono_back.shape == mono.shape


def test_model_validation():
    with pytest.raises(InvalidInput):
        BarycentricModel((np.array([0.0, 1.0]),), np.zeros(2), np.ones(2))
    with pytest.raises(InvalidInput):
        BarycentricModel((np.array([0.0, 1.0]),), np.ones(3), np.ones(3))
