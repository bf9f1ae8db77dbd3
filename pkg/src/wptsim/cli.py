"""Command-line front end: single-shot simulation, optimization, and sweeps.

Output is either "structured" (a YAML-compatible document) or "table" (CSV
with a header row). Every floating-point value is printed with 9 significant
digits. Exit codes: 0 success, 2 infeasible optimum, 3 configuration error,
4 numerical failure.
"""

import argparse
import copy
import hashlib
import io
import itertools
import json
import sys

import numpy as np

from .config import build_setup, config_set, dump_config, load_config
from .errors import ConfigurationError, DomainError, NumericalError
from .optimizer import pso_run
from .signal_chain import BASEBAND
from .simulation import evaluate_solution, run_chain

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4

_STAGE_ORDER = ("digital", "dac", "lpf", "mixer", "hpa", "received")


def format_float(value: float) -> str:
    return f"{float(value):.9g}"


def _scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if value is None:
        return "null"
    return json.dumps(str(value))


def emit_structured(data: dict, indent: int = 0) -> str:
    """Render a nested report as YAML-compatible structured text."""
    lines = []
    pad = "  " * indent
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(emit_structured(value, indent + 1))
        elif isinstance(value, (list, tuple)) and any(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                body = emit_structured(item, indent + 2).splitlines()
                lines.append(f"{pad}  - {body[0].strip()}")
                lines.extend(body[1:])
        elif isinstance(value, (list, tuple, np.ndarray)):
            rendered = ", ".join(_scalar(v) for v in np.asarray(value).tolist())
            lines.append(f"{pad}{key}: [{rendered}]")
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
    return "\n".join(lines)


def emit_table(header: list[str], rows: list[list]) -> str:
    """Render rows as CSV with a fixed header."""
    buffer = io.StringIO()
    buffer.write(",".join(header) + "\n")
    for row in rows:
        cells = []
        for cell in row:
            text = _scalar(cell)
            if text.startswith('"') or "," not in text:
                cells.append(text.strip())
            else:
                cells.append(json.dumps(text))
        buffer.write(",".join(cells) + "\n")
    return buffer.getvalue()


def _harvest_report(harvest) -> dict:
    return {
        "v_out_dc": harvest.v_out_dc,
        "p_out_dc": harvest.p_out_dc,
        "rhs_log": harvest.rhs_log,
    }


def _power_report(power) -> dict:
    return {
        "p_dac": power.p_dac,
        "p_mix": power.p_mix,
        "p_lo": power.p_lo,
        "p_hpa": power.p_hpa,
        "p_s": power.p_s,
        "p_total": power.p_total,
        "hpa_negative": power.hpa_negative,
    }


def _stage_report(signal) -> dict:
    n = signal.samples.size
    report = {
        "domain": signal.domain,
        "sample_rate": signal.sample_rate,
        "samples": n,
    }
    if signal.domain == BASEBAND:
        report["time_real"] = signal.samples.real
        report["time_imag"] = signal.samples.imag
        freqs = np.fft.fftshift(signal.frequencies())
        mags = np.abs(np.fft.fftshift(np.fft.fft(signal.samples))) / n
    else:
        report["time"] = signal.samples
        freqs = np.fft.rfftfreq(n, d=1.0 / signal.sample_rate)
        mags = np.abs(np.fft.rfft(signal.samples)) / n
    report["spectrum_frequency"] = freqs
    report["spectrum_magnitude"] = mags
    return report


def cmd_simulate(setup) -> tuple[dict, int]:
    """Run the chain once and report per-stage series, harvest, and power."""
    stages = run_chain(setup.tones, setup.phase_word, setup.system)
    outcome = evaluate_solution(setup.tones, setup.phase_word, setup.system)
    report = {
        "command": "simulate",
        "tones": {
            "amplitudes": setup.tones.amplitudes,
            "phases": setup.tones.phases,
            "tone_spacing": setup.tones.tone_spacing,
        },
        "phase_word": setup.phase_word.levels,
        "harvest": _harvest_report(outcome.harvest),
        "power": _power_report(outcome.power),
        "stages": {
            "digital": _stage_report(stages.digital),
            "dac": _stage_report(stages.dac),
            "lpf": _stage_report(stages.lpf),
            "mixer": _stage_report(stages.mixer),
            "hpa": _stage_report(stages.hpa),
            "received": _stage_report(stages.received),
        },
    }
    return report, EXIT_OK


def cmd_optimize(setup) -> tuple[dict, int]:
    """Run the swarm search and report the best solution found."""
    result = pso_run(setup.system, setup.swarm)
    resim = evaluate_solution(result.tones, result.phase_word, setup.system)
    report = {
        "command": "optimize",
        "seed": setup.swarm.seed,
        "feasible": result.feasible,
        "best_fitness": result.best_fitness,
        "evaluations": result.evaluations,
        "tones": {
            "amplitudes": result.tones.amplitudes,
            "phases": result.tones.phases,
            "tone_spacing": result.tones.tone_spacing,
        },
        "phase_word": result.phase_word.levels,
        "harvest": _harvest_report(resim.harvest),
        "power": _power_report(resim.power),
        "fitness_trace": result.fitness_trace,
    }
    return report, EXIT_OK if result.feasible else EXIT_INFEASIBLE


def derive_point_seed(seed: int, index: int) -> int:
    """Stable per-point seed so any sweep row can be reproduced alone."""
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def cmd_sweep(setup) -> tuple[dict, int]:
    """One optimize run per grid point of the configured sweep."""
    if not setup.sweep:
        raise ConfigurationError("sweep: config declares no sweep entries")
    paths = [path for path, _ in setup.sweep]
    value_lists = [values for _, values in setup.sweep]
    base_seed = setup.swarm.seed
    rows = []
    for index, combo in enumerate(itertools.product(*value_lists)):
        point_cfg = copy.deepcopy(setup.raw)
        point_seed = derive_point_seed(base_seed, index)
        row = {
            "index": index,
            "seed": point_seed,
            **{path: value for path, value in zip(paths, combo)},
            "p_total": None,
            "p_out_dc": None,
            "feasible": None,
            "best_fitness": None,
            "error": "",
        }
        try:
            for path, value in zip(paths, combo):
                config_set(point_cfg, path, value)
            config_set(point_cfg, "swarm.seed", point_seed)
            point_setup = build_setup(point_cfg)
            result = pso_run(point_setup.system, point_setup.swarm)
            row["p_total"] = result.power.p_total
            row["p_out_dc"] = result.p_out_dc
            row["feasible"] = result.feasible
            row["best_fitness"] = result.best_fitness
        except (ConfigurationError, DomainError, NumericalError) as exc:
            row["error"] = str(exc)
        rows.append(row)
    report = {
        "command": "sweep",
        "paths": paths,
        "columns": ["index", "seed", *paths, "p_total", "p_out_dc", "feasible",
                    "best_fitness", "error"],
        "rows": rows,
    }
    return report, EXIT_OK


def _flatten_for_table(report: dict) -> tuple[list[str], list[list]]:
    command = report["command"]
    if command == "sweep":
        header = report["columns"]
        rows = [[row[col] for col in header] for row in report["rows"]]
        return header, rows
    if command == "optimize":
        header = ["seed", "feasible", "best_fitness", "p_total", "p_out_dc",
                  "v_out_dc", "evaluations"]
        row = [
            report["seed"],
            report["feasible"],
            report["best_fitness"],
            report["power"]["p_total"],
            report["harvest"]["p_out_dc"],
            report["harvest"]["v_out_dc"],
            report["evaluations"],
        ]
        return header, [row]
    header = ["stage", "series", "index", "coordinate", "value"]
    rows = []
    for stage in _STAGE_ORDER:
        data = report["stages"][stage]
        rate = data["sample_rate"]
        for series in ("time", "time_real", "time_imag"):
            if series in data:
                for i, value in enumerate(np.asarray(data[series])):
                    rows.append([stage, series, i, i / rate, value])
        freqs = np.asarray(data["spectrum_frequency"])
        mags = np.asarray(data["spectrum_magnitude"])
        for i, (freq, mag) in enumerate(zip(freqs, mags)):
            rows.append([stage, "spectrum", i, freq, mag])
    return header, rows


def render_report(report: dict, fmt: str) -> str:
    if fmt == "structured":
        return emit_structured(report) + "\n"
    header, rows = _flatten_for_table(report)
    return emit_table(header, rows)


_DEFAULT_FORMAT = {"simulate": "structured", "optimize": "structured", "sweep": "table"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wptsim",
        description="Simulate and optimize a multi-tone wireless power transmitter.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("simulate", "run the transmit chain once and dump every stage"),
        ("optimize", "search waveform and beam settings for minimum power draw"),
        ("sweep", "one optimize run per configured parameter grid point"),
    ):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", help="YAML config merged over the profile defaults")
        cmd.add_argument("--profile", choices=("paper", "desk"), default="desk")
        cmd.add_argument("--seed", type=int, help="override swarm.seed")
        cmd.add_argument("--out", help="output file (default: stdout)")
        cmd.add_argument("--format", choices=("table", "structured"), default=None)
        cmd.add_argument(
            "--dump-config", action="store_true",
            help="print the merged config instead of running",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.profile)
        if args.seed is not None:
            config_set(cfg, "swarm.seed", args.seed)
        if args.dump_config:
            _write(args.out, dump_config(cfg))
            return EXIT_OK
        setup = build_setup(cfg)
        command = {"simulate": cmd_simulate, "optimize": cmd_optimize, "sweep": cmd_sweep}
        report, code = command[args.command](setup)
        fmt = args.format or _DEFAULT_FORMAT[args.command]
        _write(args.out, render_report(report, fmt))
        if code == EXIT_INFEASIBLE:
            print(
                "optimize: best solution is infeasible "
                f"(p_out_dc = {format_float(report['harvest']['p_out_dc'])} W)",
                file=sys.stderr,
            )
        return code
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"invalid value: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _write(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


if __name__ == "__main__":
    sys.exit(main())
