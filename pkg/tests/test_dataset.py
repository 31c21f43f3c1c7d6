import numpy as np
import pytest

from trendparadox.dataset import (
    DataError,
    Dataset,
    VariableSpec,
    column_stats,
    derive_ratio,
    load_csv,
)

from conftest import write_csv
from oracles import definition_variance, two_pass_variance

SCHEMA = [
    VariableSpec("position", "integer"),
    VariableSpec("session_length", "integer"),
    VariableSpec("accepted", "binary_outcome"),
]


def test_load_drops_non_finite_rows(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["position", "session_length", "accepted"],
                     [(1, 1, 0), (2, "NaN", 1), (1, 2, 1)])
    d = load_csv(path, SCHEMA)
    assert d.n_rows == 2
    assert d.metadata["dropped_rows"] == 1
    np.testing.assert_array_equal(d["session_length"], [1, 2])


def test_load_drops_unparsable_and_infinite(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["position", "session_length", "accepted"],
                     [(1, "inf", 0), (2, "abc", 1), (3, 3, 1)])
    d = load_csv(path, SCHEMA)
    assert d.n_rows == 1
    assert d.metadata["dropped_rows"] == 2


def test_binary_outcome_rejects_two(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["position", "session_length", "accepted"],
                     [(1, 1, 0), (2, 2, 2)])
    with pytest.raises(DataError, match="outside"):
        load_csv(path, SCHEMA)


def test_identity_load_of_eight_rows(tmp_path):
    rows = [(k, L, (k + L) % 2) for L in (1, 2, 3, 4) for k in range(1, L + 1)][:8]
    path = write_csv(tmp_path / "a.csv", ["position", "session_length", "accepted"], rows)
    d = load_csv(path, SCHEMA)
    assert d.n_rows == 8
    assert d.outcome_name == "accepted"
    assert d.variables == ["position", "session_length"]


def test_undeclared_columns_ignored(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["junk", "position", "session_length", "accepted"],
                     [("x", 1, 1, 0), ("y", 2, 2, 1)])
    d = load_csv(path, SCHEMA)
    assert d.names == ["position", "session_length", "accepted"]


@pytest.mark.parametrize("problem", ["missing_file", "missing_column", "no_rows"])
def test_load_errors(tmp_path, problem):
    if problem == "missing_file":
        path = tmp_path / "nope.csv"
    elif problem == "missing_column":
        path = write_csv(tmp_path / "a.csv", ["position", "accepted"], [(1, 0)])
    else:
        path = write_csv(tmp_path / "a.csv", ["position", "session_length", "accepted"],
                         [(1, "nan", 0)])
    with pytest.raises(DataError):
        load_csv(path, SCHEMA)


def test_load_is_deterministic_and_keeps_order(tmp_path):
    rows = [(i, (7 * i) % 5, i % 2) for i in range(50)]
    rows[10] = (10, "", 0)
    path = write_csv(tmp_path / "a.csv", ["position", "session_length", "accepted"], rows)
    a, b = load_csv(path, SCHEMA), load_csv(path, SCHEMA)
    for name in a.names:
        assert a[name].tobytes() == b[name].tobytes()
    expected = [r[0] for r in rows if r[1] != ""]
    np.testing.assert_array_equal(a["position"], expected)


def test_schema_needs_one_outcome(tmp_path):
    path = write_csv(tmp_path / "a.csv", ["a", "b"], [(1, 0)])
    with pytest.raises(DataError, match="exactly one outcome"):
        load_csv(path, [VariableSpec("a"), VariableSpec("b")])


def test_columns_are_read_only():
    d = Dataset({"x": [1, 2], "y": [0, 1]}, "y")
    with pytest.raises(ValueError):
        d["x"][0] = 5.0


class TestDeriveRatio:
    def make(self, rep, ans):
        return Dataset({"reputation": rep, "answers": ans, "y": [0, 1][: len(rep)] + [1] * (len(rep) - 2)}, "y")

    def test_rate(self):
        d = self.make([100, 50], [10, 50])
        out = derive_ratio(d, "reputation", "answers", "rate")
        np.testing.assert_array_equal(out["rate"], [10.0, 1.0])

    def test_zero_numerator_kept(self):
        out = derive_ratio(self.make([7, 0], [7, 3]), "reputation", "answers", "rate")
        np.testing.assert_array_equal(out["rate"], [1.0, 0.0])
        assert out.metadata["dropped_zero_denominator"] == 0

    def test_zero_denominator_rows_dropped(self):
        out = derive_ratio(self.make([7, 5, 4], [7, 0, 2]), "reputation", "answers", "rate")
        np.testing.assert_array_equal(out["rate"], [1.0, 2.0])
        assert out.metadata["dropped_zero_denominator"] == 1

    def test_all_zero_denominators(self):
        with pytest.raises(DataError):
            derive_ratio(self.make([1, 2], [0, 0]), "reputation", "answers", "rate")

    def test_name_collision(self):
        with pytest.raises(DataError, match="already exists"):
            derive_ratio(self.make([1, 2], [1, 1]), "reputation", "answers", "answers")

    def test_input_unchanged(self):
        d = self.make([100, 50], [10, 50])
        before = {k: v.copy() for k, v in d.columns.items()}
        derive_ratio(d, "reputation", "answers", "rate")
        assert set(d.names) == set(before)
        for k, v in before.items():
            np.testing.assert_array_equal(d[k], v)


class TestColumnStats:
    def test_mean_and_distinct(self):
        s = column_stats(Dataset({"x": [1, 1, 2, 2], "y": [0, 1, 0, 1]}, "y"), "x")
        assert s.mean == 1.5
        assert s.distinct_count == 2

    def test_constant(self):
        s = column_stats(Dataset({"x": [5, 5, 5], "y": [0, 1, 0]}, "y"), "x")
        assert s.variance == 0.0

    def test_variance_two_ways(self):
        values = [1, 2, 3, 4]
        s = column_stats(Dataset({"x": values, "y": [0, 1, 0, 1]}, "y"), "x")
        assert abs(two_pass_variance(values) - definition_variance(values)) < 1e-12
        assert abs(s.variance - two_pass_variance(values)) < 1e-12
        assert s.min <= s.mean <= s.max

    def test_unknown_column(self):
        with pytest.raises(KeyError):
            column_stats(Dataset({"x": [1], "y": [0]}, "y"), "z")
