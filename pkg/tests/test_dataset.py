import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fclda.dataset import (
    Dataset,
    DatasetError,
    augment_reflect,
    load_csv,
    load_iris,
    select_binary,
    synthetic_two_gaussians,
    write_csv,
)


def test_load_small_csv(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,b,species\n1,2,x\n3,4.5,y\n-1,0,x\n")
    ds = load_csv(f, "species")
    assert ds.n_samples == 3 and ds.n_features == 2
    assert ds.feature_names == ("a", "b")
    assert ds.labels == ("x", "y", "x")
    np.testing.assert_array_equal(ds.samples, [[1, 2], [3, 4.5], [-1, 0]])


def test_non_numeric_cell_names_row_and_column(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,b,label\n1,2,x\n3,oops,y\n")
    with pytest.raises(DatasetError, match=r"row 2, column 1 \('b'\)"):
        load_csv(f)


def test_missing_label_column(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,b\n1,2\n")
    with pytest.raises(DatasetError, match="label column"):
        load_csv(f)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_csv(tmp_path / "nope.csv")


def test_iris_shape():
    ds = load_iris()
    assert ds.n_samples == 150 and ds.n_features == 4
    assert sorted(set(ds.labels)) == ["setosa", "versicolor", "virginica"]
    assert all(ds.labels.count(lab) == 50 for lab in set(ds.labels))


def test_select_binary_iris_pair(iris_pair):
    assert iris_pair.n_samples == 100 and iris_pair.n_features == 2
    assert iris_pair.feature_names == ("sepal_width", "petal_width")
    cls = iris_pair.class_indices()
    assert (cls == 1).sum() == 50 and (cls == 2).sum() == 50
    # row order preserved: versicolor rows come first in the source table
    assert list(cls[:50]) == [1] * 50


def test_select_binary_all_features():
    ds = select_binary(load_iris(), "versicolor", "virginica", list(load_iris().feature_names))
    assert ds.n_samples == 100 and ds.n_features == 4


@pytest.mark.parametrize(
    "classes, features",
    [
        (("versicolor", "daisy"), ["sepal_width"]),
        (("versicolor", "virginica"), ["stem_length"]),
        (("versicolor", "versicolor"), ["sepal_width"]),
    ],
)
def test_select_binary_errors(classes, features):
    with pytest.raises(DatasetError):
        select_binary(load_iris(), *classes, features)


def test_augment_reflect_definition():
    ds = Dataset(np.array([[2.0, 3.0], [2.0, 3.0]]), ("a", "b"), ("f1", "f2"), ("a", "b"))
    rd = augment_reflect(ds)
    np.testing.assert_array_equal(rd.reflected, [[1, 2, 3], [-1, -2, -3]])
    v = np.array([0.0, 1.0, 0.0])
    m = rd.reflected @ v
    assert m[0] == 2 and m[1] == -2


def test_augment_reflect_needs_two_classes():
    ds = Dataset(np.array([[1.0], [2.0]]), ("a", "a"), ("f",), ("a", "b"))
    with pytest.raises(DatasetError):
        augment_reflect(ds)


def test_unbinarized_dataset_rejected():
    with pytest.raises(DatasetError):
        augment_reflect(load_iris())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_reflection_matches_raw_classification(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(12, 3))
    labels = tuple(rng.choice(["p", "q"], size=12))
    if len(set(labels)) < 2:
        labels = ("p", "q") + labels[2:]
    ds = Dataset(X, labels, ("a", "b", "c"), ("p", "q"))
    rd = augment_reflect(ds)
    v = rng.normal(size=4)
    g = v[0] + X @ v[1:]
    correct = np.where(ds.class_indices() == 1, g > 0, g < 0)
    np.testing.assert_array_equal(correct, rd.reflected @ v > 0)
    # reflecting a class-2 row twice gives back (1, x)
    rows2 = rd.reflected[ds.class_indices() == 2]
    np.testing.assert_array_equal(-rows2, np.hstack([np.ones((len(rows2), 1)), X[ds.class_indices() == 2]]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=6, max_size=6))
def test_csv_round_trip(tmp_path_factory, values):
    ds = Dataset(np.array(values).reshape(3, 2), ("a", "b", "a"), ("x", "y"))
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    write_csv(ds, path)
    back = load_csv(path)
    np.testing.assert_array_equal(back.samples, ds.samples)
    assert back.labels == ds.labels and back.feature_names == ds.feature_names


def test_synthetic_deterministic():
    a = synthetic_two_gaussians(50, (2, 0), (-2, 0), 0.5, seed=3)
    b = synthetic_two_gaussians(50, (2, 0), (-2, 0), 0.5, seed=3)
    assert a.n_samples == 100
    assert a.samples.tobytes() == b.samples.tobytes()
    assert synthetic_two_gaussians(1, (0,), (1,), 1.0, seed=0).n_samples == 2


def test_synthetic_rejects_bad_stddev():
    with pytest.raises(DatasetError):
        synthetic_two_gaussians(5, (0,), (1,), 0.0, seed=0)


@pytest.mark.parametrize("seed", range(5))
def test_synthetic_far_means_separable_by_bisector(seed):
    m1, m2, s = np.array([4.0, 0.0]), np.array([-4.0, 0.0]), 0.5
    ds = synthetic_two_gaussians(100, m1, m2, s, seed=seed)
    # perpendicular bisector: (m1 - m2) . (x - (m1 + m2)/2) = 0
    normal = m1 - m2
    side = (ds.samples - (m1 + m2) / 2) @ normal
    cls = ds.class_indices()
    assert np.all(side[cls == 1] > 0) and np.all(side[cls == 2] < 0)
