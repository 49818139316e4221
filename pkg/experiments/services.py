"""
Scenario loading and the three lab commands: simulate, verify and spectral.

Every command writes its results under one output directory, after all trials
have finished, and returns the document it wrote.
"""
import csv
import hashlib
import json
import logging
from pathlib import Path

import numpy as np
import yaml
from django.conf import settings

from analysis.montecarlo import map_trials, monte_carlo_verify, simulate_trial
from analysis.trajectories import (
    consistency_time,
    cost_curve,
    empirical_rate_slope,
    first_underflow,
    potential_gap_bound_holds,
)
from core.exceptions import ConfigInvalid, DegenerateNetwork
from experiments.models import ExperimentRun
from experiments.serializers import ScenarioSerializer, SpectralRequestSerializer
from network.processes import check_expected_connectivity, expected_matrix
from network.spectral import mixing_deviation_sums, mixing_sum_bound, sigma2

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("trial", "t", "agent", "tv_error", "log_tv_error", "kl_increment", "centralized_tv_error")
TRAJECTORY_FILE = "trajectories.csv"
SUMMARY_FILE = "summary.json"
SPECTRAL_FILE = "spectral.json"


def lab_setting(key):
    return settings.DETECTION_LAB[key]


def resolve_scenario_path(path):
    """Find a scenario file relative to the working directory, then among the shipped presets."""
    path = Path(path)
    candidates = [path, Path(lab_setting("SCENARIO_DIR")) / path]
    if not path.suffix:
        candidates += [c.with_suffix(".yaml") for c in candidates]
    for candidate in candidates:
        if candidate.is_file():
            return candidate
    raise ConfigInvalid(f"scenario file {str(path)!r} not found")


def read_scenario(path):
    """(parsed document, sha256 of the file bytes, resolved path)."""
    path = resolve_scenario_path(path)
    raw = path.read_bytes()
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigInvalid(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigInvalid(f"{path}: a scenario must be a mapping, got {type(data).__name__}")
    return data, hashlib.sha256(raw).hexdigest(), path


def format_errors(errors, prefix=""):
    """Flatten nested serializer errors into 'field.sub: message' lines."""
    if isinstance(errors, dict):
        lines = []
        for key, value in errors.items():
            name = prefix if key == "non_field_errors" else f"{prefix}.{key}" if prefix else str(key)
            lines += format_errors(value, name)
        return lines
    if isinstance(errors, list) and errors and not isinstance(errors[0], str):
        return [line for index, item in enumerate(errors) for line in format_errors(item, f"{prefix}[{index}]")]
    messages = errors if isinstance(errors, list) else [errors]
    return [f"{prefix}: {message}" if prefix else str(message) for message in messages]


def _invalid(path, errors):
    message = f"{path} is invalid:\n  " + "\n  ".join(format_errors(errors))
    return ConfigInvalid(message, errors=errors)


def load_scenario(path):
    """Read and validate a scenario file into a Scenario carrying the file digest."""
    data, digest, resolved = read_scenario(path)
    serializer = ScenarioSerializer(data=data)
    if not serializer.is_valid():
        raise _invalid(resolved, serializer.errors)
    scenario = serializer.save(config_digest=digest, source=data)
    logger.info("loaded scenario %s from %s (sha256 %s)", scenario.name, resolved, digest[:12])
    return scenario


def load_network(path):
    """Read only the network section of a scenario file; disconnected networks are accepted."""
    data, digest, resolved = read_scenario(path)
    payload = {"network": data.get("network")}
    if "mixing_times" in data:
        payload["mixing_times"] = data["mixing_times"]
    serializer = SpectralRequestSerializer(data=payload)
    if not serializer.is_valid():
        raise _invalid(resolved, serializer.errors)
    name = data.get("name") or resolved.stem
    output = (data.get("output") or {}).get("directory")
    return {
        "name": name,
        "process": serializer.validated_data["network"]["process"],
        "mixing_times": serializer.validated_data["mixing_times"],
        "output_directory": output,
        "config_digest": digest,
    }


def output_directory(name, configured=None, override=None):
    directory = Path(override or configured or Path(lab_setting("OUTPUT_ROOT")) / name)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def write_json(path, document):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(document, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _number(value):
    return format(float(value), ".17g")


# --- simulate ---

def write_trajectories(path, records):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            for step in range(record.horizon):
                central = _number(record.centralized_tv_error[step])
                for agent in range(record.n):
                    writer.writerow((
                        record.trial, step + 1, agent,
                        _number(record.tv_error[step, agent]),
                        _number(record.log_tv_error[step, agent]),
                        _number(record.kl_increment[step, agent]),
                        central,
                    ))


def clipped_rate_slope(record, agent, window):
    """Rate slope over window, cut just before the TV error underflows; None if too little is left."""
    t1, t2 = window
    underflow = first_underflow(record, agent)
    if underflow is not None:
        t2 = min(t2, underflow - 1)
    if t2 <= t1:
        return None
    return empirical_rate_slope(record, agent, (t1, t2))


def trial_summary(record, window):
    agents = range(record.n)
    return {
        "trial": record.trial,
        "final_tv_error": [float(record.tv_error[-1, i]) for i in agents],
        "final_log_tv_error": [float(record.log_tv_error[-1, i]) for i in agents],
        "final_centralized_tv_error": float(record.centralized_tv_error[-1]),
        "total_cost": [float(cost_curve(record, i)[-1]) for i in agents],
        "consistency_time": [consistency_time(record, i) for i in agents],
        "first_underflow": [first_underflow(record, i) for i in agents],
        "rate_slope": [clipped_rate_slope(record, i, window) for i in agents],
        "max_identity_deviation": float(record.identity_deviation.max()),
        "potential_gap_bound_holds": potential_gap_bound_holds(record),
    }


def run_simulate(scenario, seed=None, trials=None, output_dir=None, workers=1):
    """Simulate both engines for every trial; write trajectories.csv and summary.json."""
    seed = scenario.seed if seed is None else seed
    trials = scenario.trials if trials is None else trials
    eta = scenario.learning_rate("simulate")
    logger.info("%s: simulating %d trials of %d steps (seed %d, eta %.6g)", scenario.name, trials, scenario.horizon, seed, eta)

    records = map_trials(simulate_trial, [(scenario, r, seed, eta) for r in range(trials)], workers)
    per_trial = [trial_summary(record, scenario.rate_window) for record in records]

    mean_slopes = []
    for agent in range(scenario.n):
        fitted = [t["rate_slope"][agent] for t in per_trial if t["rate_slope"][agent] is not None]
        mean_slopes.append(float(np.mean(fitted)) if fitted else None)
    second_index, rate = scenario.second
    summary = {
        "scenario": scenario.name,
        "config_digest": scenario.config_digest,
        "seed": seed,
        "trials": trials,
        "horizon": scenario.horizon,
        "n": scenario.n,
        "m": scenario.m,
        "process": scenario.process.kind,
        "learning_rate_mode": scenario.learning_rate_mode,
        "eta": eta,
        "B": scenario.B,
        "I": rate,
        "second_state": second_index,
        "sigma2": scenario.sigma2,
        "spectral_gap": 1.0 - scenario.sigma2,
        "rate_window": list(scenario.rate_window),
        "mean_rate_slope": mean_slopes,
        "max_identity_deviation": max(t["max_identity_deviation"] for t in per_trial),
        "potential_gap_bound_holds": all(t["potential_gap_bound_holds"] for t in per_trial),
        "per_trial": per_trial,
    }

    directory = output_directory(scenario.name, scenario.output_directory, output_dir)
    write_trajectories(directory / TRAJECTORY_FILE, records)
    write_json(directory / SUMMARY_FILE, summary)
    logger.info("%s: wrote %s and %s to %s", scenario.name, TRAJECTORY_FILE, SUMMARY_FILE, directory)
    return summary, directory


# --- verify ---

def run_verify(scenario, which, seed=None, trials=None, output_dir=None, workers=1):
    """Monte Carlo check of one bound; writes verify_<which>.json."""
    report = monte_carlo_verify(scenario, which, trials=trials, seed=seed, workers=workers)
    document = {"scenario": scenario.name, "config_digest": scenario.config_digest, **report.to_dict()}
    directory = output_directory(scenario.name, scenario.output_directory, output_dir)
    write_json(directory / f"verify_{which}.json", document)
    return report, document, directory


# --- spectral ---

def spectral_report(process, mixing_times):
    """Expected matrix, sigma2, spectral gap, connectivity and the mixing-deviation table."""
    w = expected_matrix(process)
    s2 = sigma2(w)
    times = sorted(set(int(t) for t in mixing_times))
    table = []
    for i in range(w.n):
        sums = mixing_deviation_sums(w, i, times[-1])
        table.append({"agent": i, "sums": {str(t): float(sums[t - 1]) for t in times}})
    try:
        bound = mixing_sum_bound(w.n, s2)
    except DegenerateNetwork:
        bound = None
    return {
        "process": process.kind,
        "n": w.n,
        "expected_matrix": w.entries.tolist(),
        "sigma2": s2,
        "spectral_gap": 1.0 - s2,
        "connected": check_expected_connectivity(process),
        "mixing_times": times,
        "mixing_deviation_sums": table,
        "mixing_sum_bound": bound,
    }


def run_spectral(network, output_dir=None):
    report = {"scenario": network["name"], "config_digest": network["config_digest"]}
    report.update(spectral_report(network["process"], network["mixing_times"]))
    directory = output_directory(network["name"], network["output_directory"], output_dir)
    write_json(directory / SPECTRAL_FILE, report)
    logger.info("%s: sigma2 %.12g, connected %s", network["name"], report["sigma2"], report["connected"])
    return report, directory


# --- run history ---

def record_run(command, scenario_name, config_digest, status, summary, output_dir, seed=None, trials=None, which=""):
    """Store one ExperimentRun row unless RECORD_RUNS is off."""
    if not lab_setting("RECORD_RUNS"):
        return None
    return ExperimentRun.objects.create(
        command=command,
        scenario_name=scenario_name,
        config_digest=config_digest,
        seed=seed,
        trials=trials,
        which=which,
        status=status,
        summary=summary,
        output_dir=str(output_dir),
    )
