"""Spectrum containers, histograms, curves and their text/JSON formats.

Three spectrum text formats are understood:

* ``plain``   one real value per line, ``#`` starts a comment
* ``csv``     ``value,key=val,key=val`` with optional symmetry labels
* ``complex`` ``re im`` per line

Curves and histograms are stored as JSON objects with ``meta``, ``x`` and
``y`` arrays (histograms add ``edges`` and ``counts``). Floats are written
with 17 significant digits so that a round trip is bit exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

FLOAT_FMT = "%.17g"


class SpectrumFormatError(ValueError):
    """Malformed spectrum or curve input."""


@dataclass
class Spectrum:
    """Real eigenvalues of one realisation, kept in ascending order."""

    values: np.ndarray
    labels: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).ravel()
        if not np.all(np.isfinite(vals)):
            raise SpectrumFormatError("spectrum contains non-finite values")
        order = np.argsort(vals, kind="stable")
        self.values = vals[order]
        if self.labels:
            if len(self.labels) != len(vals):
                raise SpectrumFormatError("labels and values differ in length")
            self.labels = [self.labels[i] for i in order]

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass
class ComplexSpectrum:
    """Complex eigenvalues of one realisation (no ordering implied)."""

    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).ravel()
        if not np.all(np.isfinite(vals)):
            raise SpectrumFormatError("spectrum contains non-finite values")
        self.values = vals

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass
class Histogram:
    """Normalised histogram: ``density`` integrates to the captured mass."""

    edges: np.ndarray
    density: np.ndarray
    counts: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def to_curve(self) -> "Curve":
        return Curve(self.centers, self.density, dict(self.meta))


@dataclass
class Curve:
    x: np.ndarray
    y: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.shape != self.y.shape:
            raise SpectrumFormatError("curve x and y differ in shape")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _to_float(tok: str, lineno: int) -> float:
    try:
        val = float(tok)
    except ValueError:
        raise SpectrumFormatError(f"line {lineno}: cannot parse {tok!r} as a number") from None
    if not math.isfinite(val):
        raise SpectrumFormatError(f"line {lineno}: non-finite value {tok!r}")
    return val


def _read_meta_comments(text: str) -> dict:
    """Provenance lines of the form ``# key: value`` at the top of a file."""
    meta = {}
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if not s.startswith("#"):
            break
        body = s[1:].strip()
        if ":" in body:
            k, v = body.split(":", 1)
            meta[k.strip()] = v.strip()
    return meta


def parse_spectrum(text: str, fmt: str = "plain"):
    """Parse spectrum text in one of the formats listed in the module doc."""
    meta = _read_meta_comments(text)
    if fmt == "plain":
        vals = []
        for i, line in enumerate(text.splitlines(), 1):
            s = _strip(line)
            if not s:
                continue
            toks = s.split()
            if len(toks) != 1:
                raise SpectrumFormatError(f"line {i}: expected one value, got {len(toks)}")
            vals.append(_to_float(toks[0], i))
        return Spectrum(np.array(vals), meta=meta)
    if fmt == "csv":
        vals, labels = [], []
        for i, line in enumerate(text.splitlines(), 1):
            s = _strip(line)
            if not s:
                continue
            toks = [t.strip() for t in s.split(",")]
            vals.append(_to_float(toks[0], i))
            lab = {}
            for t in toks[1:]:
                if not t:
                    continue
                if "=" not in t:
                    raise SpectrumFormatError(f"line {i}: label {t!r} is not key=value")
                k, v = t.split("=", 1)
                lab[k.strip()] = v.strip()
            labels.append(lab)
        return Spectrum(np.array(vals), labels=labels, meta=meta)
    if fmt == "complex":
        vals = []
        for i, line in enumerate(text.splitlines(), 1):
            s = _strip(line)
            if not s:
                continue
            toks = s.replace(",", " ").split()
            if len(toks) != 2:
                raise SpectrumFormatError(f"line {i}: expected 're im', got {len(toks)} fields")
            vals.append(complex(_to_float(toks[0], i), _to_float(toks[1], i)))
        return ComplexSpectrum(np.array(vals, dtype=complex), meta=meta)
    raise SpectrumFormatError(f"unknown spectrum format {fmt!r}")


def read_spectrum(path, fmt: Optional[str] = None):
    path = Path(path)
    if fmt is None:
        fmt = {".csv": "csv", ".cplx": "complex"}.get(path.suffix, "plain")
    return parse_spectrum(path.read_text(), fmt)


def format_spectrum(spec, meta: Optional[dict] = None) -> str:
    """Text for a Spectrum (plain or csv, depending on labels) or ComplexSpectrum."""
    lines = []
    for k, v in (meta if meta is not None else spec.meta).items():
        lines.append(f"# {k}: {v}")
    if isinstance(spec, ComplexSpectrum):
        for z in spec.values:
            lines.append(f"{FLOAT_FMT % z.real} {FLOAT_FMT % z.imag}")
    elif spec.labels:
        for x, lab in zip(spec.values, spec.labels):
            extra = "".join(f",{k}={v}" for k, v in lab.items())
            lines.append(f"{FLOAT_FMT % x}{extra}")
    else:
        lines.extend(FLOAT_FMT % x for x in spec.values)
    return "\n".join(lines) + "\n"


def write_spectrum(path, spec, meta: Optional[dict] = None) -> None:
    Path(path).write_text(format_spectrum(spec, meta))


def _label_sort_key(value):
    return str(value)


def split_by_labels(spec: Spectrum, key: str) -> list:
    """Sub-spectra, one per value of label ``key``, ordered by label value.

    Levels without the label form a residual bucket placed last. The
    outputs are disjoint and their union is the input.
    """
    groups: dict = {}
    residual = []
    for x, lab in zip(spec.values, spec.labels or [{}] * len(spec)):
        if key in lab:
            groups.setdefault(str(lab[key]), []).append((x, lab))
        else:
            residual.append((x, lab))
    out = []
    for val in sorted(groups, key=_label_sort_key):
        xs, labs = zip(*groups[val])
        out.append(Spectrum(np.array(xs), labels=list(labs), meta=dict(spec.meta, **{key: val})))
    if residual or not out:
        xs = [x for x, _ in residual]
        labs = [lab for _, lab in residual] if spec.labels else []
        out.append(Spectrum(np.array(xs, dtype=float), labels=labs, meta=dict(spec.meta)))
    return out


def empirical_cdf(spec, mu):
    """Fraction of levels <= mu (right-continuous step function)."""
    vals = spec.values if isinstance(spec, Spectrum) else np.sort(np.asarray(spec, dtype=float))
    if vals.size == 0:
        raise SpectrumFormatError("empirical CDF of an empty spectrum")
    res = np.searchsorted(vals, np.asarray(mu, dtype=float), side="right") / vals.size
    return float(res) if np.ndim(res) == 0 else res


# ---------------------------------------------------------------------------
# JSON curves and histograms
# ---------------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


class _FloatEncoder(json.JSONEncoder):
    """Emit floats with 17 significant digits (Python's repr already does)."""

    def iterencode(self, o, _one_shot=False):
        return super().iterencode(_jsonable(o), _one_shot)


def curve_to_json(obj) -> str:
    if isinstance(obj, Histogram):
        payload = {"meta": obj.meta, "x": obj.centers, "y": obj.density,
                   "edges": obj.edges, "counts": obj.counts}
    elif isinstance(obj, Curve):
        payload = {"meta": obj.meta, "x": obj.x, "y": obj.y}
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    return json.dumps(payload, cls=_FloatEncoder, indent=1)


def curve_from_json(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpectrumFormatError(f"invalid JSON: {exc}") from None
    for key in ("x", "y"):
        if key not in data:
            raise SpectrumFormatError(f"curve JSON lacks {key!r}")
    meta = data.get("meta", {})
    if "edges" in data:
        return Histogram(np.asarray(data["edges"], dtype=float), np.asarray(data["y"], dtype=float),
                         np.asarray(data.get("counts", np.zeros(len(data["y"]))), dtype=float), meta)
    return Curve(np.asarray(data["x"]), np.asarray(data["y"]), meta)


def curve_to_csv(obj) -> str:
    """CSV text: ``# meta: {json}`` line, a header, then one row per point or bin."""
    lines = ["# meta: " + json.dumps(_jsonable(obj.meta), sort_keys=True)]
    if isinstance(obj, Histogram):
        lines.append("left,right,density,count")
        for a, b, d, c in zip(obj.edges[:-1], obj.edges[1:], obj.density, obj.counts):
            lines.append(",".join(FLOAT_FMT % v for v in (a, b, d, c)))
    elif isinstance(obj, Curve):
        lines.append("x,y")
        for a, b in zip(obj.x, obj.y):
            lines.append(f"{FLOAT_FMT % a},{FLOAT_FMT % b}")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def curve_from_csv(text: str):
    meta = {}
    rows = []
    header = None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            if body.startswith("meta:"):
                try:
                    meta = json.loads(body[5:])
                except json.JSONDecodeError as exc:
                    raise SpectrumFormatError(f"line {i}: bad meta JSON: {exc}") from None
            continue
        if header is None:
            header = [h.strip() for h in s.split(",")]
            if header not in (["x", "y"], ["left", "right", "density", "count"]):
                raise SpectrumFormatError(f"line {i}: unknown header {s!r}")
            continue
        toks = s.split(",")
        if len(toks) != len(header):
            raise SpectrumFormatError(f"line {i}: expected {len(header)} fields, got {len(toks)}")
        rows.append([_to_float(t.strip(), i) for t in toks])
    if header is None:
        raise SpectrumFormatError("series CSV lacks a header line")
    arr = np.array(rows, dtype=float).reshape(-1, len(header))
    if len(header) == 2:
        return Curve(arr[:, 0], arr[:, 1], meta)
    edges = np.append(arr[:, 0], arr[-1, 1]) if len(arr) else np.zeros(0)
    return Histogram(edges, arr[:, 2], arr[:, 3], meta)


def write_series(obj, sink, fmt: str = "json") -> None:
    """Write a Curve or Histogram to a path or text stream as ``json`` or ``csv``."""
    if fmt == "json":
        text = curve_to_json(obj) + "\n"
    elif fmt == "csv":
        text = curve_to_csv(obj)
    else:
        raise SpectrumFormatError(f"unknown series format {fmt!r}")
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text)


def parse_series(text: str, fmt: str = "json"):
    if fmt == "json":
        return curve_from_json(text)
    if fmt == "csv":
        return curve_from_csv(text)
    raise SpectrumFormatError(f"unknown series format {fmt!r}")


def read_series(path, fmt: Optional[str] = None):
    path = Path(path)
    if fmt is None:
        fmt = "csv" if path.suffix == ".csv" else "json"
    return parse_series(path.read_text(), fmt)
