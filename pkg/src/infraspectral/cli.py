"""Command-line front end: ingest networks, run the analyses, emit tables.

Each command reads network/signal files, runs the corresponding library
pipeline, and writes CSV or JSON result files plus a provenance manifest
into --output-dir.  Results are deterministic for fixed seeds; every
result file names its manifest.

Exit codes: 0 success, 2 input or parse error, 3 numerical failure.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from . import __version__
from .errors import DegenerateSignalError, EigendecompositionError, ParseError
from .experiments import (
    DenoiseConfig,
    RNG_ALGORITHM,
    default_alpha_grid,
    denoise_experiment,
    fdi_detectability,
    spearman,
)
from .filters import highpass_complement, lowpass_filter
from .graph import underlying_laplacian
from .manifest import RunManifest, atomic_write_text
from .metrics import (
    lowpass_compressibility,
    metrics_csv_header,
    metrics_csv_row,
    metrics_report,
)
from .powercase import bus_voltage_signal, generation_fraction, parse_power_case, power_graph
from .spectral import compute_gft_basis, forward_gft, power_spectrum
from .water import (
    HYDRAULIC_MODELS,
    hydraulic_graph,
    parse_edge_list,
    parse_pipe_table,
    parse_signal_table,
)
from .weightsearch import SearchConfig, random_search, search_result_json

EXIT_INPUT = 2
EXIT_NUMERICAL = 3


class _Run:
    """Collects result texts, then writes them and the manifest atomically."""

    def __init__(self, command: str, output_dir: str, stem: str):
        self.manifest = RunManifest(command=command)
        self.output_dir = output_dir
        self.manifest_name = f"{stem}.manifest.json"
        self._results: list[tuple[str, str]] = []

    def add(self, filename: str, text: str) -> None:
        self._results.append((filename, text))

    def finish(self) -> None:
        os.makedirs(self.output_dir, exist_ok=True)
        for filename, text in self._results:
            path = os.path.join(self.output_dir, filename)
            atomic_write_text(path, text)
            self.manifest.add_output(path, text)
        self.manifest.write(os.path.join(self.output_dir, self.manifest_name))


def _csv_text(manifest_name: str, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# manifest: {manifest_name}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(manifest_name: str, payload: dict) -> str:
    return json.dumps({"manifest": manifest_name, **payload}, indent=2) + "\n"


def _rows_as_json(header: list[str], rows: list[list]) -> list[dict]:
    return [dict(zip(header, (str(v) for v in row))) for row in rows]


def _emit_table(run: _Run, name: str, header: list[str], rows: list[list], fmt: str) -> None:
    if fmt == "json":
        run.add(f"{name}.json", _json_text(run.manifest_name, {"rows": _rows_as_json(header, rows)}))
    else:
        run.add(f"{name}.csv", _csv_text(run.manifest_name, header, rows))


def _load_cases(paths: tuple[str, ...], run: _Run):
    """Parse every case file and build its spectral pipeline, in input order.

    Files are processed concurrently; output order matches input order.
    """
    def build(path):
        with open(path) as fh:
            text = fh.read()
        case = parse_power_case(text, name=os.path.splitext(os.path.basename(path))[0])
        graph = power_graph(case)
        lap = underlying_laplacian(graph)
        basis = compute_gft_basis(lap)
        return case, graph, lap, basis, bus_voltage_signal(case)

    for path in paths:
        run.manifest.add_input(path)
    with ThreadPoolExecutor(max_workers=min(8, len(paths))) as pool:
        return list(pool.map(build, paths))


def _fail(exc: BaseException, code: int) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _guarded(body) -> None:
    # ValueError covers bad flag combinations and unusable input data
    # (constant correlation columns, malformed numeric cells); genuinely
    # numerical breakdowns surface as the dedicated exception types.
    try:
        body()
    except (ParseError, OSError, click.FileError, ValueError) as exc:
        _fail(exc, EXIT_INPUT)
    except (EigendecompositionError, DegenerateSignalError, np.linalg.LinAlgError) as exc:
        _fail(exc, EXIT_NUMERICAL)


def _parse_thresholds(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ParseError(f"bad threshold list {text!r}") from None
    if not values or any(not 0 < v < 1 for v in values):
        raise ParseError("thresholds must lie strictly between 0 and 1")
    return values


output_dir_option = click.option(
    "--output-dir", default=".", show_default=True, help="Directory for result files."
)
format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
    show_default=True, help="Result table format.",
)


@click.group()
@click.version_option(version=__version__)
def main():
    """Spectral analysis of signals on infrastructure networks."""


@main.command()
@click.argument("case_paths", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--thresholds", default="0.9,0.999", show_default=True,
              help="Comma-separated energy fractions.")
@click.option("--mean-removed/--no-mean-removed", default=True, show_default=True,
              help="Include mean-removed compressibility columns.")
@output_dir_option
@format_option
def analyze(case_paths, thresholds, mean_removed, output_dir, fmt):
    """Per-network signal metrics (TV, compressibility) as one CSV row each."""

    def body():
        thr = _parse_thresholds(thresholds)
        run = _Run("analyze", output_dir, "metrics")
        rows = []
        for case, graph, lap, basis, signal in _load_cases(case_paths, run):
            m = metrics_report(lap, basis, signal, thresholds=thr)
            rows.append(
                metrics_csv_row(case.name, graph.vertex_count, graph.edge_count,
                                generation_fraction(case), m, thresholds=thr)
            )
        header = metrics_csv_header(thr)
        if not mean_removed:
            keep = [i for i, h in enumerate(header) if not h.startswith("mr_")]
            header = [header[i] for i in keep]
            rows = [[row[i] for i in keep] for row in rows]
        run.manifest.config = {"thresholds": list(thr), "mean_removed": mean_removed,
                               "format": fmt}
        _emit_table(run, "metrics", header, rows, fmt)
        run.finish()

    _guarded(body)


@main.command()
@click.argument("case_paths", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--snr-db", default=20.0, show_default=True)
@click.option("--trials", default=25, show_default=True)
@click.option("--alpha-lo", default=0.01, show_default=True)
@click.option("--alpha-hi", default=10.0, show_default=True)
@click.option("--alpha-count", default=50, show_default=True)
@click.option("--seed", default=0, show_default=True, help="Monte Carlo seed.")
@click.option("--real-noise", is_flag=True, help="Draw real instead of complex noise.")
@output_dir_option
@format_option
def denoise(case_paths, snr_db, trials, alpha_lo, alpha_hi, alpha_count, seed,
            real_noise, output_dir, fmt):
    """Monte Carlo smoothing-filter sweep against the hard low-pass cut."""

    def body():
        run = _Run("denoise", output_dir, "denoise")
        grid = default_alpha_grid(alpha_lo, alpha_hi, alpha_count)
        cfg = DenoiseConfig(snr_db=snr_db, trials=trials, alpha_grid=grid,
                            rng_seed=seed, complex_noise=not real_noise)
        alpha_rows, summary_rows = [], []
        for case, _, lap, basis, signal in _load_cases(case_paths, run):
            result = denoise_experiment(basis, lap, signal, cfg)
            for alpha, gain in zip(result.alpha_grid, result.mean_gain_db):
                alpha_rows.append([case.name, repr(alpha), repr(gain)])
            summary_rows.append([
                case.name, repr(result.best_alpha), repr(result.best_gain_db),
                repr(result.lp_gain_db), str(result.lp_cutoff),
            ])
        run.manifest.config = {
            "snr_db": snr_db, "trials": trials, "alpha_lo": alpha_lo,
            "alpha_hi": alpha_hi, "alpha_count": alpha_count,
            "complex_noise": not real_noise, "lowpass_threshold": cfg.lowpass_threshold,
            "format": fmt,
        }
        run.manifest.rng = {"seed": seed, "algorithm": RNG_ALGORITHM}
        _emit_table(run, "denoise_alpha", ["network", "alpha", "mean_gain_db"], alpha_rows, fmt)
        _emit_table(run, "denoise_summary",
                    ["network", "best_alpha", "best_gain_db", "lp_gain_db", "lp_cutoff"],
                    summary_rows, fmt)
        run.finish()

    _guarded(body)


@main.command()
@click.argument("case_paths", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--threshold", default=0.999, show_default=True,
              help="Low-pass energy fraction defining the stop band.")
@output_dir_option
@format_option
def fdi(case_paths, threshold, output_dir, fmt):
    """Per-vertex high-pass energy of unit spikes (injection detectability)."""

    def body():
        if not 0 < threshold < 1:
            raise ParseError("threshold must lie strictly between 0 and 1")
        run = _Run("fdi", output_dir, "fdi")
        vertex_rows, summary_rows = [], []
        for case, _, _, basis, signal in _load_cases(case_paths, run):
            cutoff = lowpass_compressibility(forward_gft(basis, signal), threshold)
            det = fdi_detectability(basis, highpass_complement(lowpass_filter(basis, cutoff)))
            for v, norm in enumerate(det.norms):
                vertex_rows.append([case.name, str(v), repr(norm)])
            summary_rows.append([
                case.name, str(cutoff), repr(det.median), repr(det.q25),
                repr(det.q75), repr(det.min), repr(det.max),
            ])
        run.manifest.config = {"threshold": threshold, "format": fmt}
        _emit_table(run, "fdi_vertices", ["network", "vertex", "norm"], vertex_rows, fmt)
        _emit_table(run, "fdi_summary",
                    ["network", "lp_cutoff", "median", "q25", "q75", "min", "max"],
                    summary_rows, fmt)
        run.finish()

    _guarded(body)


@main.command()
@click.argument("metrics_csv", type=click.Path(exists=True))
@click.option("--x", "x_column", required=True, help="Column name for the first variable.")
@click.option("--y", "y_column", required=True, help="Column name for the second variable.")
@output_dir_option
def correlate(metrics_csv, x_column, y_column, output_dir):
    """Spearman rank correlation between two columns of a metrics table."""

    def body():
        run = _Run("correlate", output_dir, "correlation")
        run.manifest.add_input(metrics_csv)
        with open(metrics_csv) as fh:
            lines = [ln for ln in fh if not ln.lstrip().startswith("#")]
        reader = csv.DictReader(io.StringIO("".join(lines)))
        xs, ys = [], []
        for record in reader:
            if x_column not in record or y_column not in record:
                raise ParseError(
                    f"column missing: need {x_column!r} and {y_column!r}, "
                    f"have {list(record)}"
                )
            xs.append(float(record[x_column]))
            ys.append(float(record[y_column]))
        if len(xs) < 3:
            raise ParseError(f"need at least 3 data rows, got {len(xs)}")
        result = spearman(xs, ys)
        run.manifest.config = {"x": x_column, "y": y_column}
        run.add("correlation.json", _json_text(run.manifest_name, {
            "x_name": x_column, "y_name": y_column,
            "r_s": result.r_s, "p_value": result.p_value, "n": result.n,
        }))
        run.finish()

    _guarded(body)


@main.command()
@click.argument("pipes_csv", type=click.Path(exists=True))
@click.argument("signals_csv", type=click.Path(exists=True))
@click.option("--model", type=click.Choice(HYDRAULIC_MODELS), default="unweighted",
              show_default=True)
@output_dir_option
@format_option
def water(pipes_csv, signals_csv, model, output_dir, fmt):
    """Summed per-harmonic power of a signal corpus on a pipe network."""

    def body():
        run = _Run("water", output_dir, "water_spectrum")
        run.manifest.add_input(pipes_csv)
        run.manifest.add_input(signals_csv)
        with open(pipes_csv) as fh:
            table = parse_pipe_table(fh.read())
        graph = hydraulic_graph(table, model, name=os.path.basename(pipes_csv))
        basis = compute_gft_basis(underlying_laplacian(graph))
        with open(signals_csv) as fh:
            signals = parse_signal_table(fh.read(), expected_n=graph.vertex_count)
        total = np.zeros(graph.vertex_count)
        for signal in signals:
            total += power_spectrum(forward_gft(basis, signal))
        rows = [
            [str(k + 1), repr(float(basis.eigenvalues[k])), repr(float(total[k])),
             "1" if k < basis.zero_count else "0"]
            for k in range(graph.vertex_count)
        ]
        run.manifest.config = {"model": model, "n_signals": len(signals), "format": fmt}
        _emit_table(run, "water_spectrum",
                    ["harmonic_index", "eigenvalue", "total_power", "is_dc"], rows, fmt)
        run.finish()

    _guarded(body)


@main.command("weight-search")
@click.argument("topology_csv", type=click.Path(exists=True))
@click.argument("signals_csv", type=click.Path(exists=True))
@click.option("--iterations", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--bounds", nargs=2, type=float, default=(1e-2, 1e2), show_default=True,
              help="Log-uniform proposal bounds (lo hi).")
@click.option("--objective", type=click.Choice(["mean_lp_ratio", "mean_lowband_energy"]),
              default="mean_lp_ratio", show_default=True)
@click.option("--threshold", default=0.9, show_default=True,
              help="Energy fraction for the compressibility objective.")
@click.option("--allow-large", is_flag=True,
              help="Permit searches beyond the default vertex cap.")
@output_dir_option
def weight_search(topology_csv, signals_csv, iterations, seed, bounds, objective,
                  threshold, allow_large, output_dir):
    """Random search for edge weights that make the signal corpus low-pass.

    TOPOLOGY_CSV is a pipe table (from,to,roughness,diameter_m,length_m,
    physical columns ignored) or a bare edge list (from,to).
    """

    def body():
        run = _Run("weight-search", output_dir, "weight_search")
        run.manifest.add_input(topology_csv)
        run.manifest.add_input(signals_csv)
        with open(topology_csv) as fh:
            text = fh.read()
        try:
            topology = hydraulic_graph(parse_pipe_table(text), "unweighted",
                                       name=os.path.basename(topology_csv))
        except ParseError:
            topology = parse_edge_list(text, name=os.path.basename(topology_csv))
        with open(signals_csv) as fh:
            signals = parse_signal_table(fh.read(), expected_n=topology.vertex_count)
        cfg = SearchConfig(
            iterations=iterations, rng_seed=seed, weight_bounds=tuple(bounds),
            objective_threshold=threshold, objective=objective,
        )
        result = random_search(topology, signals, cfg, allow_large=allow_large)
        run.manifest.config = {
            "iterations": iterations, "bounds": list(bounds), "objective": objective,
            "objective_threshold": threshold, "n_signals": len(signals),
        }
        run.manifest.rng = {"seed": seed, "algorithm": RNG_ALGORITHM}
        run.add("weight_search.json",
                _json_text(run.manifest_name, search_result_json(result, topology)))
        trajectory_rows = [[str(i), repr(v)] for i, v in enumerate(result.trajectory)]
        run.add("trajectory.csv",
                _csv_text(run.manifest_name, ["iteration", "best_objective"], trajectory_rows))
        run.finish()

    _guarded(body)


if __name__ == "__main__":
    main()
