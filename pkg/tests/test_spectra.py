from __future__ import annotations

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmtkit.spectra import (ComplexSpectrum, Curve, Histogram, Spectrum, SpectrumFormatError,
                            empirical_cdf, format_spectrum, parse_series, parse_spectrum,
                            read_series, split_by_labels, write_series)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_parse_plain_sorts():
    s = parse_spectrum("3\n1\n2\n")
    assert np.array_equal(s.values, [1.0, 2.0, 3.0])


def test_parse_plain_comments_and_blank_lines():
    s = parse_spectrum("# a comment\n\n2.5  # trailing\n-1\n")
    assert np.array_equal(s.values, [-1.0, 2.5])


def test_parse_csv_labels():
    s = parse_spectrum("1.0,spin=0\n2.0,spin=1\n", "csv")
    assert np.array_equal(s.values, [1.0, 2.0])
    assert s.labels == [{"spin": "0"}, {"spin": "1"}]


def test_parse_complex():
    z = parse_spectrum("0.5 -0.5\n", "complex")
    assert isinstance(z, ComplexSpectrum)
    assert z.values[0] == 0.5 - 0.5j


def test_parse_empty_is_empty_spectrum():
    assert len(parse_spectrum("")) == 0
    assert len(parse_spectrum("# only a comment\n")) == 0


@pytest.mark.parametrize("text,fmt,line", [("1\nabc\n", "plain", 2), ("1 2\n", "plain", 1),
                                            ("1\n2\n3 4 5\n", "complex", 1), ("1,spin\n", "csv", 1)])
def test_parse_errors_carry_line_numbers(text, fmt, line):
    with pytest.raises(SpectrumFormatError, match=f"line {line}"):
        parse_spectrum(text, fmt)


def test_non_finite_rejected():
    with pytest.raises(SpectrumFormatError):
        Spectrum(np.array([1.0, np.nan]))


def test_format_round_trip_is_exact():
    vals = np.random.default_rng(0).normal(size=50)
    s = Spectrum(vals)
    back = parse_spectrum(format_spectrum(s))
    assert np.array_equal(back.values, np.sort(vals))


def test_format_round_trip_complex_and_labels():
    z = ComplexSpectrum(np.array([1 + 2j, -0.1 - 1e-300j]))
    assert np.array_equal(parse_spectrum(format_spectrum(z), "complex").values, z.values)
    s = Spectrum(np.array([2.0, 1.0]), labels=[{"k": "b"}, {"k": "a"}])
    back = parse_spectrum(format_spectrum(s), "csv")
    assert back.labels == [{"k": "a"}, {"k": "b"}]


def test_split_by_labels_partition():
    s = Spectrum(np.array([1.0, 2.0, 3.0]), labels=[{"t": "a"}, {"t": "b"}, {"t": "a"}])
    parts = split_by_labels(s, "t")
    assert [list(p.values) for p in parts] == [[1.0, 3.0], [2.0]]


def test_split_by_labels_degenerate_cases():
    s = Spectrum(np.array([1.0, 2.0]), labels=[{"t": "a"}, {"t": "a"}])
    parts = split_by_labels(s, "t")
    assert len(parts) == 1 and np.array_equal(parts[0].values, s.values)
    plain = Spectrum(np.array([3.0, 1.0]))
    parts = split_by_labels(plain, "t")
    assert len(parts) == 1 and np.array_equal(parts[0].values, [1.0, 3.0])


def test_split_residual_bucket_last():
    s = Spectrum(np.array([1.0, 2.0, 3.0]), labels=[{"t": "x"}, {}, {"t": "x"}])
    parts = split_by_labels(s, "t")
    assert [list(p.values) for p in parts] == [[1.0, 3.0], [2.0]]


@given(st.lists(st.tuples(finite, st.sampled_from(["a", "b", "c", None])), max_size=40))
def test_split_disjoint_and_exhaustive(items):
    vals = np.array([v for v, _ in items], dtype=float)
    labels = [{"q": lab} if lab else {} for _, lab in items]
    parts = split_by_labels(Spectrum(vals, labels=labels), "q")
    joined = np.sort(np.concatenate([p.values for p in parts]))
    assert np.array_equal(joined, np.sort(vals))
    for p in parts:
        assert np.all(np.diff(p.values) >= 0)


def test_empirical_cdf_examples():
    s = Spectrum(np.array([1.0, 2.0, 3.0]))
    assert np.isclose(empirical_cdf(s, 2.0), 2 / 3)
    assert empirical_cdf(s, 0.5) == 0.0
    assert empirical_cdf(s, 3.0) == 1.0
    with pytest.raises(SpectrumFormatError):
        empirical_cdf(Spectrum(np.zeros(0)), 0.0)


@given(st.lists(finite, min_size=1, max_size=30), st.lists(finite, min_size=2, max_size=10))
def test_empirical_cdf_monotone(vals, mus):
    s = Spectrum(np.array(vals))
    mus = np.sort(mus)
    f = empirical_cdf(s, mus)
    assert np.all(np.diff(f) >= 0)
    assert empirical_cdf(s, -np.inf) == 0.0 and empirical_cdf(s, np.inf) == 1.0


def test_write_series_csv_two_rows():
    buf = io.StringIO()
    write_series(Curve(np.array([0.0, 1.0]), np.array([1.0, 0.0])), buf, "csv")
    rows = [r for r in buf.getvalue().splitlines() if not r.startswith("#")]
    assert rows == ["x,y", "0,1", "1,0"]


def test_write_series_empty_curve_header_only():
    buf = io.StringIO()
    write_series(Curve(np.zeros(0), np.zeros(0)), buf, "csv")
    rows = [r for r in buf.getvalue().splitlines() if not r.startswith("#")]
    assert rows == ["x,y"]
    back = parse_series(buf.getvalue(), "csv")
    assert back.x.size == 0


def test_write_series_json_keys():
    import json

    buf = io.StringIO()
    write_series(Curve(np.array([0.0]), np.array([2.0]), {"name": "c"}), buf, "json")
    obj = json.loads(buf.getvalue())
    assert {"x", "y", "meta"} <= set(obj)
    assert obj["meta"]["name"] == "c"


@settings(max_examples=50)
@given(st.lists(st.tuples(finite, finite), max_size=20), st.sampled_from(["csv", "json"]))
def test_curve_round_trip(pairs, fmt):
    x = np.cumsum(np.abs([p[0] for p in pairs]) + 1.0) if pairs else np.zeros(0)
    y = np.array([p[1] for p in pairs], dtype=float)
    c = Curve(x, y, {"name": "t", "n": 3})
    buf = io.StringIO()
    write_series(c, buf, fmt)
    back = parse_series(buf.getvalue(), fmt)
    assert np.array_equal(back.x, c.x) and np.array_equal(back.y, c.y)
    assert back.meta["name"] == "t"


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_histogram_round_trip(tmp_path, fmt):
    rng = np.random.default_rng(1)
    edges = np.linspace(0, 1, 6)
    counts = rng.integers(0, 10, 5).astype(float)
    dens = counts / (counts.sum() * 0.2)
    h = Histogram(edges, dens, counts, {"count": int(counts.sum())})
    path = tmp_path / f"h.{fmt}"
    write_series(h, path, fmt)
    back = read_series(path)
    assert isinstance(back, Histogram)
    assert np.array_equal(back.edges, edges) and np.array_equal(back.density, dens)
    assert np.array_equal(back.counts, counts)
    assert np.isclose(np.sum(back.density * back.widths), 1.0)
