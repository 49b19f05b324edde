"""Command-line front end: sample, unfold, estimate and compare.

Every subcommand writes data files (spectra as text, curves and
histograms as JSON or CSV) whose metadata carry the full run
configuration and library versions. Outputs go to ``--out`` or, for
multi-file outputs, to ``--outdir`` (default: $RMTKIT_OUTDIR or the
current directory).

Exit codes: 0 success, 2 usage or input error, 1 numerical or domain error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy

from . import __version__
from . import benchmarks, ensembles, fredholm, kernels, linalg, observables, unfolding
from .jpdf import JpdfError
from .spectra import (Curve, Histogram, Spectrum, SpectrumFormatError,
                      format_spectrum, read_series, read_spectrum, write_series)
from .svg import write_svg

OUTDIR_ENV = "RMTKIT_OUTDIR"

DOMAIN_ERRORS = (ensembles.EnsembleError, unfolding.UnfoldingError, observables.ObservableError,
                 kernels.KernelError, fredholm.FredholmError, benchmarks.BenchmarkError,
                 linalg.ConvergenceError, JpdfError)
INPUT_ERRORS = (SpectrumFormatError, FileNotFoundError, IsADirectoryError, PermissionError)


class UsageError(Exception):
    """Bad command-line values detected after argparse."""


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------

def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (stop included when hit) or a comma-separated list."""
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0:
                raise ValueError
            a, b, h = parts
            n = int(np.floor((b - a) / h + 1e-9)) + 1
            if n < 1:
                raise ValueError
            return a + h * np.arange(n)
        return np.array([float(p) for p in text.split(",") if p.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}; use start:stop:step or a,b,c") from None


def parse_window(text: str) -> tuple:
    try:
        a, b = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid window {text!r}; use a,b") from None
    if not b > a:
        raise argparse.ArgumentTypeError("window needs a < b")
    return a, b


def _outdir(args) -> Path:
    d = Path(args.outdir or os.environ.get(OUTDIR_ENV) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _provenance(args, extra: Optional[dict] = None) -> dict:
    cfg = {k: (v.tolist() if isinstance(v, np.ndarray) else v)
           for k, v in sorted(vars(args).items()) if k not in ("func",)}
    meta = {"command": args.command, "config": cfg,
            "versions": {"rmtkit": __version__, "numpy": np.__version__, "scipy": scipy.__version__}}
    if extra:
        meta.update(extra)
    return meta


def _emit(args, obj, default_name: str, extra_items: Sequence = ()) -> Path:
    """Write a Curve/Histogram (or a JSON report dict) and the optional SVG."""
    fmt = getattr(args, "format", "json")
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
    else:
        path = _outdir(args) / f"{default_name}.{fmt if not isinstance(obj, dict) else 'json'}"
    if isinstance(obj, dict):
        path.write_text(json.dumps(obj, indent=1, sort_keys=True, default=float) + "\n")
    else:
        write_series(obj, path, fmt)
        if getattr(args, "svg", None):
            write_svg(args.svg, [obj, *extra_items], title=default_name)
    return path


def _ensemble(args) -> ensembles.EnsembleSpec:
    return ensembles.EnsembleSpec(args.cls, args.n, args.nu, args.sigma)


def _load_spectra(paths: Sequence[str]) -> list:
    if not paths:
        raise UsageError("no input spectra given (--in)")
    out = []
    for p in paths:
        s = read_spectrum(p)
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# Unfolding options
# ---------------------------------------------------------------------------

def parse_unfold(text: str) -> tuple:
    """``none``, ``semicircle[:R]``, ``poly[:degree]``, ``gauss[:bandwidth]`` or ``mp:ratio``."""
    name, _, arg = text.partition(":")
    try:
        if name == "none":
            return ("none", None)
        if name == "semicircle":
            return ("semicircle", float(arg) if arg else None)
        if name == "poly":
            return ("poly", int(arg) if arg else 7)
        if name == "gauss":
            return ("gauss", float(arg) if arg else None)
        if name == "mp":
            return ("mp", float(arg))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"invalid unfolding {text!r}")


def unfold_all(spectra: list, how: tuple) -> list:
    """Fit one model to the pooled spectra and unfold each spectrum with it."""
    kind, arg = how
    if kind == "none":
        return list(spectra)
    if kind == "semicircle":
        model = unfolding.semicircle(arg) if arg else unfolding.fit_density(spectra, "semicircle")
    elif kind == "poly":
        model = unfolding.fit_density(spectra, "polynomial_cdf", degree=arg)
    elif kind == "gauss":
        model = unfolding.fit_density(spectra, "gaussian_broadened", **({"bandwidth": arg} if arg else {}))
    else:
        model = unfolding.fit_density(spectra, "marchenko_pastur", ratio=arg)
    return [unfolding.unfold(s, model) for s in spectra]


# ---------------------------------------------------------------------------
# Benchmarks by name
# ---------------------------------------------------------------------------

def benchmark_function(name: str):
    """Callable density for ``wigner:beta``, ``poisson[:dim]``, ``ginue``,
    ``exact:beta``, ``numvar:beta``, ``sff:beta``, ``hard:beta:alpha``, ``soft:beta``."""
    parts = name.split(":")
    head = parts[0]
    try:
        if head == "wigner":
            beta = float(parts[1])
            return lambda s: benchmarks.wigner_surmise(beta, s)
        if head == "poisson":
            dim = int(parts[1]) if len(parts) > 1 else 1
            return lambda s: benchmarks.poisson_spacing(dim, s)
        if head == "ginue":
            return benchmarks.ginue_spacing
        if head == "exact":
            beta = int(parts[1])
            grid = np.arange(0, 6.0 + 1e-9, 0.02)
            ex = fredholm.spacing_exact(beta, grid)
            return lambda s: np.interp(s, ex.x, ex.y, right=0.0)
        if head == "numvar":
            beta = int(parts[1])
            return lambda L: benchmarks.numvar_asymptotic(beta, L)
        if head == "sff":
            beta = int(parts[1])
            return lambda k: benchmarks.sff_closed(beta, k)
        if head == "hard":
            beta, alpha = int(parts[1]), float(parts[2])
            return lambda x: kernels.hard_edge_density(beta, alpha, x)
        if head == "soft":
            beta = int(parts[1]) if len(parts) > 1 else 2
            return lambda x: kernels.soft_edge_density(beta, x)
    except (IndexError, ValueError):
        pass
    raise UsageError(f"unknown benchmark {name!r}")


def benchmark_cdf(name: str):
    """CDF for KS comparisons where one exists in closed form or by quadrature."""
    parts = name.split(":")
    if parts[0] == "wigner":
        beta = float(parts[1])
        return lambda s: benchmarks.wigner_surmise_cdf(beta, s)
    if parts[0] == "poisson" and (len(parts) == 1 or parts[1] == "1"):
        return benchmarks.poisson_spacing_cdf
    fn = benchmark_function(name)
    grid = np.linspace(0, 8, 4001)
    dens = fn(grid)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    return lambda s: np.interp(s, grid, cum)


def compare_histogram(hist: Histogram, name: str) -> dict:
    """Sup distance, L2 residual and KS statistic of a histogram against a benchmark."""
    fn = benchmark_function(name)
    cdf = benchmark_cdf(name)
    total = hist.meta.get("count", hist.counts.sum())
    emp = np.concatenate([[0.0], np.cumsum(hist.counts)]) / max(total, 1)
    emp = emp + (cdf(hist.edges[0]) if hist.edges[0] > 0 else 0.0)
    ks = float(np.max(np.abs(emp - cdf(hist.edges))))
    return {"benchmark": name,
            "sup_distance": observables.sup_distance(hist, fn),
            "l2_residual": observables.l2_residual(hist, fn),
            "ks_statistic": ks,
            "bins": int(hist.density.size),
            "count": int(total)}


# ---------------------------------------------------------------------------
# Kernels by regime
# ---------------------------------------------------------------------------

def _kernel(args) -> kernels.Kernel:
    r = args.regime
    if r == "bulk":
        return kernels.bulk_kernel(args.beta)
    if r == "hard":
        return kernels.hard_edge_kernel(args.beta, args.alpha)
    if r == "soft":
        return kernels.soft_edge_kernel(args.beta)
    if r == "hermite":
        return kernels.finite_n_kernel("hermite", args.N, sigma=args.sigma_k)
    if r == "laguerre":
        return kernels.finite_n_kernel("laguerre", args.N, nu=args.nu_k, sigma=args.sigma_k)
    raise UsageError(f"unknown regime {r!r}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def sample_to_files(args, spec, draws) -> list:
    outdir = _outdir(args)
    paths = []
    ext = "cplx" if spec.is_ginibre else "txt"
    for i, s in enumerate(draws):
        meta = dict(s.meta, command="sample", rmtkit=__version__, numpy=np.__version__, scipy=scipy.__version__)
        path = outdir / f"{args.prefix}_{i + args.start:05d}.{ext}"
        path.write_text(format_spectrum(s, meta))
        paths.append(path)
    return paths


def cmd_sample(args) -> int:
    spec = _ensemble(args)
    draws = ensembles.sample_spectra(spec, args.seed, args.draws, args.threads, args.start)
    paths = sample_to_files(args, spec, draws)
    print(f"wrote {len(paths)} spectra to {paths[0].parent if paths else _outdir(args)}")
    return 0


def cmd_unfold(args) -> int:
    spectra = _load_spectra(args.inputs)
    unf = unfold_all(spectra, args.unfold)
    outdir = _outdir(args)
    for p, u in zip(args.inputs, unf):
        meta = dict(u.meta, command="unfold", model=json.dumps(u.model.to_dict(), default=float))
        (outdir / (Path(p).stem + ".unf.txt")).write_text(format_spectrum(Spectrum(u.values), meta))
    print(f"unfolded {len(unf)} spectra into {outdir}")
    return 0


def _spacing_hist(args, spectra) -> Histogram:
    unf = unfold_all(spectra, args.unfold)
    h = observables.spacing_histogram(unf, args.window, args.bins_edges)
    h.meta.update(_provenance(args))
    return h


def cmd_spacing(args) -> int:
    h = _spacing_hist(args, _load_spectra(args.inputs))
    path = _emit(args, h, "spacing")
    print(f"spacing histogram ({int(h.meta['count'])} spacings) -> {path}")
    return 0


def cmd_ratios(args) -> int:
    spectra = _load_spectra(args.inputs)
    res = observables.pooled_spacing_ratios(spectra, args.window, fraction=args.fraction)
    report = {"mean": res.mean, "count": int(res.values.size), "poisson_mean": benchmarks.POISSON_RATIO_MEAN,
              "meta": _provenance(args)}
    if args.histogram:
        edges = np.linspace(0, 1, 21)
        h = observables.histogram(res.values, edges, _provenance(args, {"name": "spacing_ratios"}))
        _emit(args, h, "ratios")
    else:
        _emit(args, report, "ratios")
    print(f"mean ratio {res.mean:.6f} over {res.values.size} ratios")
    return 0


def cmd_numvar(args) -> int:
    unf = unfold_all(_load_spectra(args.inputs), args.unfold)
    c = observables.number_variance(unf, args.L, args.window)
    c.meta.update(_provenance(args))
    _emit(args, c, "numvar")
    return 0


def cmd_sff(args) -> int:
    unf = unfold_all(_load_spectra(args.inputs), args.unfold)
    c = observables.form_factor(unf, args.k, args.window)
    c.meta.update(_provenance(args))
    _emit(args, c, "sff")
    return 0


def cmd_cluster(args) -> int:
    unf = unfold_all(_load_spectra(args.inputs), args.unfold)
    c = observables.cluster_2pt(unf, args.lag, window=args.window)
    c.meta.update(_provenance(args))
    _emit(args, c, "cluster")
    return 0


def cmd_kernel(args) -> int:
    k = _kernel(args)
    x = args.x
    if args.y is None:
        y = k.density(x)
    elif k.is_pfaffian:
        D, K, J = k.triple(x, np.full_like(x, args.y))
        y = {"D": D, "K": K, "J": J}[args.component]
    else:
        y = k.k(x, np.full_like(x, args.y))
    c = Curve(x, np.real(y), _provenance(args, {"kernel": k.describe()}))
    _emit(args, c, "kernel")
    return 0


def cmd_gap(args) -> int:
    k = _kernel(args)
    vals = []
    for s in args.s:
        if args.regime == "bulk":
            iv = (-0.5 * s, 0.5 * s)
        elif args.regime in ("hard", "laguerre"):
            iv = (0.0, s)
        else:
            iv = (s, s + fredholm._tail_length(k, s))
        vals.append(fredholm.gap_probability(k, [iv], args.order))
    c = Curve(args.s, np.array(vals), _provenance(args, {"kernel": k.describe()}))
    _emit(args, c, "gap")
    return 0


def cmd_spacing_exact(args) -> int:
    c = fredholm.spacing_exact(args.beta, args.s, args.order)
    c.meta.update(_provenance(args))
    extra = [observables.curve_from_function(lambda s: benchmarks.wigner_surmise(args.beta, s), args.s)]
    _emit(args, c, "spacing_exact", extra)
    return 0


def cmd_extreme(args) -> int:
    k = _kernel(args)
    c = fredholm.extreme_cdf(k, args.x, args.side, args.order)
    if args.pdf:
        c = fredholm.extreme_pdf(k, args.x, args.side, args.order)
    c.meta.update(_provenance(args))
    _emit(args, c, "extreme")
    return 0


def cmd_benchmark(args) -> int:
    fn = benchmark_function(args.name)
    c = observables.curve_from_function(fn, args.x, _provenance(args, {"benchmark": args.name}))
    _emit(args, c, "benchmark")
    return 0


def cmd_compare(args) -> int:
    h = read_series(args.hist)
    if not isinstance(h, Histogram):
        raise UsageError(f"{args.hist} does not contain a histogram")
    report = compare_histogram(h, args.benchmark)
    report["meta"] = _provenance(args)
    _emit(args, report, "compare")
    print(f"sup {report['sup_distance']:.5f}  KS {report['ks_statistic']:.5f}  L2 {report['l2_residual']:.3g}")
    return 0


def cmd_pipeline(args) -> int:
    spec = _ensemble(args)
    draws = ensembles.sample_spectra(spec, args.seed, args.draws, args.threads, args.start)
    if args.keep_spectra:
        sample_to_files(args, spec, draws)
    if spec.beta == 4:
        draws = [ensembles.kramers_reduce(s) for s in draws]
    h = observables.spacing_histogram(unfold_all(draws, args.unfold), args.window, args.bins_edges)
    h.meta.update(_provenance(args))
    outdir = _outdir(args)
    write_series(h, outdir / f"{args.prefix}_spacing.{args.format}", args.format)
    report = compare_histogram(h, args.benchmark)
    report["meta"] = _provenance(args)
    (outdir / f"{args.prefix}_compare.json").write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    if args.svg:
        fn = benchmark_function(args.benchmark)
        write_svg(args.svg, [h, observables.curve_from_function(fn, np.linspace(0, 4, 401))], "spacing")
    print(f"sup {report['sup_distance']:.5f}  KS {report['ks_statistic']:.5f}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_output(p, series: bool = True):
    p.add_argument("--out", help="output file")
    p.add_argument("--outdir", help=f"output directory (default ${OUTDIR_ENV} or .)")
    if series:
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--svg", help="also render a static SVG plot to this path")


def _add_ensemble(p):
    p.add_argument("--class", dest="cls", required=True, choices=ensembles.ALL_CLASSES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--draws", type=int, default=1)
    p.add_argument("--start", type=int, default=0, help="index of the first draw")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--prefix", default="spec")


def _add_inputs(p, unfold_default: str = "poly:7"):
    p.add_argument("--in", dest="inputs", nargs="+", required=True, help="spectrum files")
    p.add_argument("--unfold", type=parse_unfold, default=parse_unfold(unfold_default))
    p.add_argument("--window", type=parse_window, default=None,
                   help="unfolded window a,b (default: central 60%% by count)")


def _add_kernel(p, regimes=("bulk", "hard", "soft", "hermite", "laguerre")):
    p.add_argument("--regime", choices=regimes, default=regimes[0])
    p.add_argument("--beta", type=int, default=2, choices=(1, 2, 4))
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--N", type=int, default=10, help="matrix size for finite-N kernels")
    p.add_argument("--nu-k", type=float, default=0.0, help="Laguerre parameter for finite-N kernels")
    p.add_argument("--sigma-k", type=float, default=1.0, help="scale for finite-N kernels")
    p.add_argument("--order", type=int, default=64, help="quadrature order")


def _bins(text: str) -> np.ndarray:
    return parse_grid(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rmtkit", description="Random-matrix spectral statistics toolkit.")
    ap.add_argument("--version", action="version", version=f"rmtkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw spectra from an ensemble")
    _add_ensemble(p)
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("unfold", help="unfold spectra to unit mean spacing")
    _add_inputs(p)
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_unfold)

    p = sub.add_parser("spacing", help="nearest-neighbour spacing histogram")
    _add_inputs(p)
    p.add_argument("--bins", dest="bins_edges", type=_bins, default=None, help="bin edges start:stop:step")
    _add_output(p)
    p.set_defaults(func=cmd_spacing)

    p = sub.add_parser("ratios", help="consecutive spacing ratios")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--window", type=parse_window, default=None)
    p.add_argument("--fraction", type=float, default=1.0, help="central fraction used without --window")
    p.add_argument("--histogram", action="store_true", help="write a histogram instead of a summary")
    _add_output(p)
    p.set_defaults(func=cmd_ratios)

    p = sub.add_parser("numvar", help="number variance")
    _add_inputs(p)
    p.add_argument("--L", type=parse_grid, default=parse_grid("0.5:10:0.5"))
    _add_output(p)
    p.set_defaults(func=cmd_numvar)

    p = sub.add_parser("sff", help="spectral form factor")
    _add_inputs(p)
    p.add_argument("--k", type=parse_grid, default=parse_grid("0.05:3:0.05"))
    _add_output(p)
    p.set_defaults(func=cmd_sff)

    p = sub.add_parser("cluster", help="two-point cluster function")
    _add_inputs(p)
    p.add_argument("--lag", type=parse_grid, default=parse_grid("0.05:3:0.1"))
    _add_output(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("kernel", help="tabulate a kernel or density on a grid")
    _add_kernel(p)
    p.add_argument("--x", type=parse_grid, required=True)
    p.add_argument("--y", type=float, default=None, help="second argument (omit for the density)")
    p.add_argument("--component", choices=("K", "D", "J"), default="K")
    _add_output(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("gap", help="gap probabilities by Fredholm determinant/Pfaffian")
    _add_kernel(p)
    p.add_argument("--s", type=parse_grid, required=True,
                   help="bulk: length of [-s/2, s/2]; hard: [0, s]; soft: [s, inf)")
    _add_output(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("spacing-exact", help="exact bulk spacing density")
    p.add_argument("--beta", type=int, choices=(1, 2, 4), default=2)
    p.add_argument("--s", type=parse_grid, default=parse_grid("0:4:0.05"))
    p.add_argument("--order", type=int, default=64)
    _add_output(p)
    p.set_defaults(func=cmd_spacing_exact)

    p = sub.add_parser("extreme", help="distribution of the largest/smallest level")
    _add_kernel(p, regimes=("soft", "hard"))
    p.add_argument("--x", type=parse_grid, required=True)
    p.add_argument("--side", choices=("max", "min"), default="max")
    p.add_argument("--pdf", action="store_true", help="density instead of CDF")
    _add_output(p)
    p.set_defaults(func=cmd_extreme)

    p = sub.add_parser("benchmark", help="tabulate a closed-form benchmark curve")
    p.add_argument("--name", required=True,
                   help="wigner:B, poisson[:D], ginue, exact:B, numvar:B, sff:B, hard:B:A, soft:B")
    p.add_argument("--x", type=parse_grid, default=parse_grid("0:4:0.01"))
    _add_output(p)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("compare", help="compare a histogram with a benchmark")
    p.add_argument("--hist", required=True)
    p.add_argument("--benchmark", required=True)
    p.add_argument("--out")
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pipeline", help="sample, unfold, spacing histogram and compare in one go")
    _add_ensemble(p)
    p.add_argument("--unfold", type=parse_unfold, default=parse_unfold("semicircle"))
    p.add_argument("--window", type=parse_window, default=None)
    p.add_argument("--bins", dest="bins_edges", type=_bins, default=None)
    p.add_argument("--benchmark", default="wigner:2")
    p.add_argument("--keep-spectra", action="store_true")
    p.add_argument("--outdir")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_pipeline)
    return ap


def _attach_negative_values(argv: Sequence[str]) -> list:
    """Turn ``--x -2:2:1`` into ``--x=-2:2:1`` so argparse does not read the value as a flag."""
    out: list = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and re.match(r"^-[\d.]", tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    for name in ("n", "draws", "threads"):
        if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
            print(f"rmtkit: error: --{name} must be positive", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (UsageError, *INPUT_ERRORS) as exc:
        print(f"rmtkit {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"rmtkit {args.command}: numerical error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
