import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from trendparadox.binning import BinSpec, auto_bin_spec, disaggregate
from trendparadox.dataset import DataError, Dataset


def table(values):
    values = np.asarray(values, dtype=float)
    return Dataset({"v": values, "y": np.arange(len(values)) % 2}, "y")


def test_distinct_values_session_lengths():
    d = table(np.repeat(np.arange(1, 9), 3))
    groups = disaggregate(d, "v", BinSpec("distinct_values", min_bin_rows=1))
    assert [g.label for g in groups] == [str(k) for k in range(1, 9)]
    assert all(g.n == 3 for g in groups)


def test_equal_frequency_exact_counts():
    values = np.random.default_rng(3).random(1000)
    groups = disaggregate(table(values), "v", BinSpec("equal_frequency", 10))
    assert [g.n for g in groups] == [100] * 10
    # sort-based oracle: bin k holds ranks 100k..100k+99
    ranks = np.argsort(np.argsort(values))
    for k, g in enumerate(groups):
        assert sorted(ranks[g.row_indices]) == list(range(100 * k, 100 * (k + 1)))


def test_single_distinct_value():
    d = table([4.0] * 7)
    groups = disaggregate(d, "v", BinSpec("distinct_values"))
    assert len(groups) == 1 and groups[0].n == 7


def test_undersized_bins_are_flagged_not_dropped():
    d = table([1] * 150 + [2] * 20)
    groups = disaggregate(d, "v", BinSpec("distinct_values", min_bin_rows=100))
    assert [(g.label, g.valid) for g in groups] == [("1", True), ("2", False)]


def test_quantile_ties_merge_edges():
    d = table([0.0] * 900 + list(np.linspace(1, 2, 100)))
    groups = disaggregate(d, "v", BinSpec("equal_frequency", 10, 1))
    assert len(groups) < 10
    assert sum(g.n for g in groups) == 1000


def test_equal_width_edges():
    d = table(np.arange(0, 11, dtype=float))
    groups = disaggregate(d, "v", BinSpec("equal_width", 5, 1))
    assert [g.n for g in groups] == [2, 2, 2, 2, 3]
    assert groups[-1].label == "[8, 10]"


def test_log_width_spans_decades():
    d = table([1, 5, 10, 50, 100, 500, 1000])
    groups = disaggregate(d, "v", BinSpec("log_width", 3, 1))
    assert [g.n for g in groups] == [2, 2, 3]


def test_log_width_rejects_non_positive():
    with pytest.raises(DataError):
        disaggregate(table([0.0, 1.0, 2.0]), "v", BinSpec("log_width", 3))


def test_errors():
    d = table([1, 2, 3])
    with pytest.raises(DataError):
        disaggregate(d, "w", BinSpec())
    with pytest.raises(DataError):
        disaggregate(d, "y", BinSpec())
    with pytest.raises(ValueError):
        BinSpec("equal_width", 1)
    with pytest.raises(ValueError):
        BinSpec("fancy")


def test_parse():
    assert BinSpec.parse("equal-width:5") == BinSpec("equal_width", 5)
    assert BinSpec.parse("distinct_values").strategy == "distinct_values"


class TestAutoBinSpec:
    def test_small_cardinality(self):
        assert auto_bin_spec(table(np.arange(1, 9)), "v").strategy == "distinct_values"

    def test_heavy_tail(self):
        rng = np.random.default_rng(0)
        # Pareto column rescaled to span exactly 1 .. 100,000
        x = rng.pareto(1.0, 5000) + 1.0
        x = np.exp(np.log(x) / np.log(x.max()) * np.log(1e5))
        spec = auto_bin_spec(table(x), "v")
        assert (spec.strategy, spec.bin_count) == ("log_width", 10)

    def test_unit_interval(self):
        x = np.linspace(0, 1, 500)
        spec = auto_bin_spec(table(x), "v")
        assert (spec.strategy, spec.bin_count, spec.min_bin_rows) == ("equal_frequency", 10, 100)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
positive = st.floats(1e-3, 1e6, allow_nan=False, allow_infinity=False)


def check_partition(values, groups):
    rows = np.concatenate([g.row_indices for g in groups])
    assert len(rows) == len(values)
    assert sorted(rows.tolist()) == list(range(len(values)))
    for g in groups:
        assert all(g.contains(v) for v in values[g.row_indices])
    for a, b in zip(groups, groups[1:]):
        assert a.hi <= b.lo
        assert not a.closed_right or a.hi < b.lo


@settings(max_examples=150, deadline=None)
@given(
    values=arrays(np.float64, st.integers(1, 300), elements=finite),
    strategy=st.sampled_from(["distinct_values", "equal_width", "equal_frequency"]),
    k=st.integers(2, 15),
)
def test_partition_law(values, strategy, k):
    groups = disaggregate(table(values), "v", BinSpec(strategy, k, 5))
    check_partition(values, groups)


@settings(max_examples=100, deadline=None)
@given(values=arrays(np.float64, st.integers(1, 300), elements=positive), k=st.integers(2, 15))
def test_partition_law_log_width(values, k):
    check_partition(values, disaggregate(table(values), "v", BinSpec("log_width", k, 5)))


@settings(max_examples=30, deadline=None)
@given(values=arrays(np.float64, st.integers(1, 100), elements=finite),
       strategy=st.sampled_from(["equal_width", "equal_frequency", "distinct_values"]))
def test_deterministic(values, strategy):
    a = disaggregate(table(values), "v", BinSpec(strategy, 4))
    b = disaggregate(table(values.copy()), "v", BinSpec(strategy, 4))
    assert [(g.label, g.lo, g.hi, g.row_indices.tolist()) for g in a] == \
        [(g.label, g.lo, g.hi, g.row_indices.tolist()) for g in b]
