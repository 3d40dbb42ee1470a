import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fclda.dataset import Dataset
from fclda.discriminant import Criterion, DiscriminantModel, ToleranceConfig, fit
from fclda.metrics import margin_report, misclassification_count, noise_margin
from fclda.olda import fit_fisher


def model(v):
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    return DiscriminantModel(v, v, 1.0, 0.0, 0.0, Criterion.MODIFIED, ToleranceConfig(0.1))


def raw_model(v):
    # unit-norm v, with the raw LP point scaled away from it
    v = np.asarray(v, dtype=float)
    return DiscriminantModel(v / np.linalg.norm(v), 3.0 * v, 1.0, 0.0, 0.0, Criterion.MODIFIED, ToleranceConfig(0.1))


def data(X, labels):
    return Dataset(np.asarray(X, dtype=float), tuple(labels), ("a", "b"), ("p", "q"))


def test_two_unit_margins():
    ds = data([[1, 0], [1, 5], [-1, 0]], "ppq")
    nm = noise_margin(model([0, 1, 0]), ds, 1)
    assert nm.value == pytest.approx(0.5) and not nm.degenerate


def test_single_margin():
    ds = data([[2, 0], [-1, 0]], "pq")
    assert noise_margin(model([0, 1, 0]), ds, 1).value == pytest.approx(2.0)


def test_zero_margin_is_flagged():
    ds = data([[0, 1], [-1, 0]], "pq")
    nm = noise_margin(model([0, 1, 0]), ds, 1)
    assert nm == (0.0, True)
    assert margin_report(model([0, 1, 0]), ds).degenerate


def test_empty_class_rejected():
    ds = Dataset(np.array([[1.0, 0.0]]), ("p",), ("a", "b"), ("p", "q"))
    with pytest.raises(ValueError):
        noise_margin(model([0, 1, 0]), ds, 2)


def test_sign_pattern_on_separated_classes():
    ds = data([[1, 0], [2, 1], [-1, 0], [-3, 2]], "ppqq")
    r = margin_report(model([0, 1, 0]), ds)
    assert r.nm_right > 0 and r.nm_left < 0
    assert r.misclassified == (0, 0)
    assert len(r.per_sample_margins) == ds.n_samples


def test_negated_model_swaps_counts():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(40, 2))
    labels = ["p"] * 20 + ["q"] * 20
    ds = data(X, labels)
    v = np.array([0.1, 1.0, -0.5])
    a = misclassification_count(model(v), ds)
    b = misclassification_count(model(-v), ds)
    # no sample lies exactly on the boundary here
    assert b == (20 - a[0], 20 - a[1])


def test_dimension_mismatch():
    ds = Dataset(np.zeros((2, 3)) + [[1, 0, 0], [-1, 0, 0]], ("p", "q"), ("a", "b", "c"), ("p", "q"))
    with pytest.raises(ValueError):
        misclassification_count(model([0, 1, 0]), ds)


def test_raw_option_uses_lp_point():
    ds = data([[1, 0], [-1, 0]], "pq")
    m = raw_model([0, 1, 0])
    assert noise_margin(m, ds, 1, raw=True).value == pytest.approx(3.0)
    assert noise_margin(m, ds, 1).value == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(15, 2)) + [3, 0]
    ds = data(X, ["p"] * 14 + ["q"])
    perm = rng.permutation(15)
    ds2 = data(X[perm], np.array(ds.labels)[perm])
    m = model(rng.normal(size=3))
    a, b = noise_margin(m, ds, 1), noise_margin(m, ds2, 1)
    assert a.value == pytest.approx(b.value, rel=1e-12, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.01, 100.0))
def test_homogeneity(seed, lam):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(10, 2))
    ds = data(X, ["p"] * 9 + ["q"])
    v = rng.normal(size=3)
    m, m_scaled = raw_model(v), raw_model(v)
    object.__setattr__(m_scaled, "v_raw", lam * m.v_raw)
    a, b = noise_margin(m, ds, 1, raw=True), noise_margin(m_scaled, ds, 1, raw=True)
    if not a.degenerate:
        assert b.value == pytest.approx(lam * a.value, rel=1e-9)


def test_iris_fisher_reference_count(iris_pair):
    # closed-form baseline run once; the species overlap, so a few errors remain
    counts = misclassification_count(fit_fisher(iris_pair), iris_pair)
    assert counts == (2, 3)


def test_iris_perceptron_sign_pattern(iris_reflected, iris_pair):
    r = margin_report(fit(iris_reflected, Criterion.PERCEPTRON, ToleranceConfig(0.1)), iris_pair)
    assert r.nm_right > 0 and r.nm_left < 0
    assert r.to_dict()["alpha"] == 1.0
