"""Reproducible experiment runner.

Subcommands: dataset, features, train, sweep, kernel, drive.  Every run
writes the fully resolved config next to its outputs, embeds the config
hash in every artifact, and caches feature matrices keyed by (dataset hash,
reservoir config hash) so readout-only reruns never re-integrate dynamics.

Simulation configs use natural units fixed by the detector frequency
(Omega = 1); physical units appear only in the drive subcommand.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys
import time
from itertools import product
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import cqed, datasets, learning, reservoir
from .encoding import EncodingConfig, ranges_from_points
from .errors import RelqrcError
from .gaussian import ModeSet
from .stepping import StepConfig
from .worldline import AccelerationProfile, KinematicsMode

FEATURE_LAYOUT = "nqp-bias-v1"


# --------------------------------------------------------------------------
# config -> domain objects
# --------------------------------------------------------------------------

def build_reservoir(conf: dict, input_ranges, *, kinematics=None,
                    T=None, a0=None, m=None) -> reservoir.ReservoirConfig:
    enc_conf = conf["encoding"]
    base_a0 = enc_conf["a0"] if a0 is None else float(a0)
    if a0 is None:
        delta_a = enc_conf["delta_a"]
    else:
        delta_a = enc_conf["delta_a_ratio"] * base_a0
    enc = EncodingConfig(
        a0=base_a0, delta_a=delta_a,
        T=enc_conf["T"] if T is None else float(T),
        m=enc_conf["m"] if m is None else int(m),
        input_ranges=tuple(tuple(r) for r in input_ranges))
    engine = conf["engine"]
    mc = conf["modes"]
    modes = ModeSet.resonant(
        n_modes=1 if engine == reservoir.ENGINE_QUBIT else mc["n_modes"],
        coherent_mode=mc["coherent_mode"], Omega=mc["Omega"],
        coupling=mc["coupling"], alpha=cfgmod.parse_alpha(mc["alpha"]))
    kin = conf["kinematics"] if kinematics is None else kinematics
    return reservoir.ReservoirConfig(
        encoding=enc, modes=modes,
        kinematics=KinematicsMode(kin), engine=engine,
        step=StepConfig(conf["step"]["steps_per_period"]),
        n_max=conf["qubit"]["n_max"])


def reservoir_dict(rcfg: reservoir.ReservoirConfig) -> dict:
    """Canonical JSON-friendly form, used for hashing and model artifacts."""
    return {
        "engine": rcfg.engine,
        "kinematics": rcfg.kinematics.value,
        "encoding": {
            "a0": rcfg.encoding.a0, "delta_a": rcfg.encoding.delta_a,
            "T": rcfg.encoding.T, "m": rcfg.encoding.m,
            "input_ranges": [list(r) for r in rcfg.encoding.input_ranges],
        },
        "modes": {
            "mode_indices": list(rcfg.modes.mode_indices),
            "L": rcfg.modes.L, "Omega": rcfg.modes.Omega,
            "coupling": rcfg.modes.coupling,
            "coherent_mode": rcfg.modes.coherent_mode,
            "alpha": str(rcfg.modes.alpha),
        },
        "step": {"steps_per_period": rcfg.step.steps_per_period},
        "delta_T": rcfg.measure_interval,
        "n_max": rcfg.fock_cutoff() if rcfg.engine == "qubit" else None,
        "standardize": rcfg.standardize,
    }


# --------------------------------------------------------------------------
# feature matrix persistence and caching
# --------------------------------------------------------------------------

def _dataset_hash(ds: datasets.LabeledDataset) -> str:
    buf = io.StringIO()
    for (x1, x2), y in zip(ds.points, ds.labels):
        buf.write(f"{x1:.17g},{x2:.17g},{int(y)};")
    return hashlib.sha256(buf.getvalue().encode()).hexdigest()[:16]


def write_features_csv(path, phi_rows: np.ndarray,
                       rcfg: reservoir.ReservoirConfig, meta: dict) -> None:
    names = reservoir.feature_names(rcfg)
    with open(path, "w") as fh:
        for key, value in sorted(meta.items()):
            fh.write(f"# {key}: {value}\n")
        fh.write(",".join(names) + "\n")
        for row in phi_rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_features_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            if not line.strip() or line[0] not in "-0123456789":
                continue
            rows.append([float(v) for v in line.split(",")])
    return np.asarray(rows)


def cached_features(ds: datasets.LabeledDataset,
                    rcfg: reservoir.ReservoirConfig, cache_dir: Path,
                    workers: int) -> np.ndarray:
    rdict = reservoir_dict(rcfg)
    rhash = hashlib.sha256(
        json.dumps(rdict, sort_keys=True).encode()).hexdigest()[:16]
    key = f"{_dataset_hash(ds)}-{rhash}"
    path = cache_dir / f"features-{key}.csv"
    if path.exists():
        return read_features_csv(path)
    phi_rows = reservoir.feature_matrix(ds.points, rcfg, workers=workers)
    cache_dir.mkdir(parents=True, exist_ok=True)
    write_features_csv(path, phi_rows, rcfg, {
        "artifact_version": cfgmod.ARTIFACT_VERSION, "cache_key": key})
    return phi_rows


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _prepare_out(conf: dict, out_dir: str) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfgmod.dump_resolved(conf, out / "resolved_config.yaml")
    return out


def _encoding_ranges(*splits) -> tuple:
    """Bounding box over every split, so held-out points stay encodable."""
    pts = np.vstack([ds.points for ds in splits])
    return ranges_from_points(pts)


def _load_or_make_splits(conf, out):
    """Read train/test CSVs from the output dir, generating them if absent."""
    train_path, test_path = out / "train.csv", out / "test.csv"
    if not train_path.exists() or not test_path.exists():
        cmd_dataset(conf, out)
    return datasets.load(train_path), datasets.load(test_path)


def cmd_dataset(conf: dict, out: Path) -> None:
    dc = conf["dataset"]
    ds = datasets.two_spirals(dc["n"], dc["turns"], dc["radius"],
                              dc["noise_sd"], seed=dc["seed"])
    train, test = datasets.split(ds, dc["n_train"], dc["n_test"],
                                 seed=dc["seed"] + 1)
    datasets.save(train, out / "train.csv")
    datasets.save(test, out / "test.csv")
    print(f"wrote {out / 'train.csv'} ({len(train)} samples), "
          f"{out / 'test.csv'} ({len(test)} samples)")


def cmd_features(conf: dict, out: Path, data: str | None, workers: int,
                 mode_scan: bool = False) -> None:
    if data is not None:
        ds = datasets.load(data)
        ranges = ranges_from_points(ds.points)
    else:
        train, test = _load_or_make_splits(conf, out)
        ds = train
        ranges = _encoding_ranges(train, test)
    rcfg = build_reservoir(conf, ranges)
    phi_rows = cached_features(ds, rcfg, out / "cache", workers)
    meta = {"artifact_version": cfgmod.ARTIFACT_VERSION,
            "config_hash": cfgmod.config_hash(conf)}
    write_features_csv(out / "features.csv", phi_rows, rcfg, meta)
    print(f"wrote {out / 'features.csv'} ({phi_rows.shape[0]} x "
          f"{phi_rows.shape[1]})")
    if mode_scan:
        _mode_convergence_report(conf, ds, ranges, out, workers)


def _mode_convergence_report(conf, ds, ranges, out: Path, workers: int,
                             n_list=(1, 3, 5, 10, 15), n_points=10) -> None:
    """Feature convergence in the retained-mode count, emitted as CSV."""
    pts = ds.points[:n_points]
    results = {}
    for n_modes in n_list:
        scan_conf = json.loads(json.dumps(conf))
        scan_conf["modes"]["n_modes"] = n_modes
        rcfg = build_reservoir(scan_conf, ranges)
        results[n_modes] = reservoir.feature_matrix(pts, rcfg,
                                                    workers=workers)
    ref = results[max(n_list)]
    scale = np.max(np.abs(ref))
    with open(out / "mode_convergence.csv", "w") as fh:
        fh.write("n_modes,max_rel_diff_vs_largest\n")
        for n_modes in n_list:
            diff = np.max(np.abs(results[n_modes] - ref)) / scale
            fh.write(f"{n_modes},{diff:.6g}\n")
    print(f"wrote {out / 'mode_convergence.csv'}")


def _train_once(conf, train, test, rcfg, out: Path, workers: int):
    phi_train = cached_features(train, rcfg, out / "cache", workers)
    phi_test = cached_features(test, rcfg, out / "cache", workers)
    design = learning.DesignMatrix.from_rows(phi_train, train.labels)
    model = learning.train_ridge(design, conf["learning"]["l"], metadata={
        "artifact_version": cfgmod.ARTIFACT_VERSION,
        "config_hash": cfgmod.config_hash(conf),
        "feature_layout": FEATURE_LAYOUT,
        "reservoir": reservoir_dict(rcfg),
    })
    a_train = learning.accuracy(model, phi_train, train.labels)
    a_test = learning.accuracy(model, phi_test, test.labels)
    return model, design, phi_test, a_train, a_test


def cmd_train(conf: dict, out: Path, workers: int) -> None:
    train, test = _load_or_make_splits(conf, out)
    rcfg = build_reservoir(conf, _encoding_ranges(train, test))
    model, design, phi_test, a_train, a_test = _train_once(
        conf, train, test, rcfg, out, workers)
    (out / "model.json").write_text(model.to_json())
    f_test = learning.predict(model, phi_test)
    metrics = {
        "artifact_version": cfgmod.ARTIFACT_VERSION,
        "config_hash": cfgmod.config_hash(conf),
        "A_train": a_train,
        "A_test": a_test,
        "f_test": [float(v) for v in f_test],
        "y_test": [int(v) for v in test.labels],
    }
    (out / "metrics.json").write_text(
        json.dumps(metrics, indent=2, sort_keys=True))
    print(f"A_train={a_train:.4f} A_test={a_test:.4f} "
          f"(wrote {out / 'metrics.json'})")


def cmd_sweep(conf: dict, out: Path, workers: int) -> None:
    train, test = _load_or_make_splits(conf, out)
    ranges = _encoding_ranges(train, test)
    sw = conf["sweep"]
    axis_T = sw["T"] or [conf["encoding"]["T"]]
    axis_a0 = sw["a0"] or [conf["encoding"]["a0"]]
    axis_m = sw["m"] or [conf["encoding"]["m"]]
    rows = []
    for T, a0, m in product(axis_T, axis_a0, axis_m):
        for kin in ("relativistic", "newtonian"):
            rcfg = build_reservoir(conf, ranges, kinematics=kin,
                                   T=T, a0=a0, m=m)
            started = time.perf_counter()
            model, design, _, a_train, a_test = _train_once(
                conf, train, test, rcfg, out, workers)
            spectrum = learning.kernel_spectrum(
                design, threshold=conf["learning"]["l"])
            rows.append((T, a0, m, kin, a_train, a_test,
                         spectrum.effective_rank,
                         time.perf_counter() - started))
    with open(out / "sweep.csv", "w") as fh:
        fh.write(f"# config_hash: {cfgmod.config_hash(conf)}\n")
        fh.write(f"# artifact_version: {cfgmod.ARTIFACT_VERSION}\n")
        fh.write("T,a0,m,kinematics,A_train,A_test,effective_rank,"
                 "wall_time_s\n")
        for row in rows:
            fh.write(f"{row[0]:g},{row[1]:g},{row[2]},{row[3]},"
                     f"{row[4]:.6f},{row[5]:.6f},{row[6]},{row[7]:.3f}\n")
    print(f"wrote {out / 'sweep.csv'} ({len(rows)} rows)")


def cmd_kernel(conf: dict, out: Path, workers: int) -> None:
    train, test = _load_or_make_splits(conf, out)
    rcfg = build_reservoir(conf, _encoding_ranges(train, test))
    phi_train = cached_features(train, rcfg, out / "cache", workers)
    design = learning.DesignMatrix.from_rows(phi_train, train.labels)
    spectrum = learning.kernel_spectrum(design,
                                        threshold=conf["learning"]["l"])
    nonzero = spectrum.nonzero()
    with open(out / "kernel.csv", "w") as fh:
        fh.write(f"# config_hash: {cfgmod.config_hash(conf)}\n")
        fh.write(f"# artifact_version: {cfgmod.ARTIFACT_VERSION}\n")
        fh.write(f"# effective_rank: {spectrum.effective_rank}\n")
        fh.write(f"# first_nonzero_highlighted: {min(40, nonzero.size)}\n")
        fh.write("index,eigenvalue\n")
        for i, val in enumerate(spectrum.eigenvalues):
            fh.write(f"{i},{val:.17g}\n")
    print(f"wrote {out / 'kernel.csv'}: {nonzero.size} nonzero eigenvalues, "
          f"effective rank {spectrum.effective_rank}")


def cmd_drive(conf: dict, out: Path) -> None:
    dc = conf["drive"]
    params = cqed.DriveParams(
        omega0=dc["omega0"], epsilon=dc["epsilon"],
        Omega_sim=dc["Omega_sim"], g=dc["g"], eta=dc["eta"],
        omega_n=dc["omega_n"], k_n=dc["k_n"],
        frequency_unit=dc["frequency_unit"])
    a_hi = dc["a0"] * (1.0 + dc["delta_a_ratio"])  # worst-case acceleration
    half = dc["T"] / 2.0
    profile = AccelerationProfile(
        [(a_hi, half), (-a_hi, half), (-a_hi, half), (a_hi, half)]
        * dc["m"])
    # proper time stays in simulated units (Omega_sim = 1); the fast tones
    # are rescaled into the same units before sampling
    drive = cqed.drive_frequencies(params)
    scaled = cqed.DriveParams(
        omega0=dc["omega0"] / params.Omega_sim,
        epsilon=dc["epsilon"] / params.Omega_sim,
        Omega_sim=1.0, g=dc["g"] / params.Omega_sim, eta=dc["eta"],
        omega_n=dc["omega_n"] / params.Omega_sim,
        k_n=dc["k_n"] / params.Omega_sim,
        frequency_unit=f"{dc['frequency_unit']} / Omega_sim")
    w_plus_sim = drive[0] / params.Omega_sim
    duration = profile.total_duration
    n_samples = max(2, math.ceil(
        duration * w_plus_sim / (2 * math.pi) * dc["samples_per_period"]))
    tau = np.linspace(0.0, duration, n_samples + 1)
    signal = cqed.drive_waveform(scaled, profile, tau)
    cqed.export_csv(signal, out / "drive.csv")
    mc = conf["modes"]
    sim_modes = ModeSet.resonant(
        n_modes=1, coherent_mode=mc["coherent_mode"], Omega=1.0,
        coupling=mc["coupling"], alpha=cfgmod.parse_alpha(mc["alpha"]))
    report = cqed.effective_coupling_check(params, sim_modes)
    doc = {
        "artifact_version": cfgmod.ARTIFACT_VERSION,
        "config_hash": cfgmod.config_hash(conf),
        "frequency_unit": dc["frequency_unit"],
        "omega_plus": drive[0],
        "omega_minus": drive[1],
        "coupling_check": {
            "simulated": report.simulated_value,
            "physical": report.physical_value,
            "ratio": report.ratio if math.isfinite(report.ratio) else None,
            "matches": report.matches,
        },
        "diagnostics": signal.diagnostics,
    }
    (out / "drive_report.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True))
    print(f"wrote {out / 'drive.csv'} and {out / 'drive_report.json'}")


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relqrc",
        description="relativistic quantum reservoir-computing experiments")
    parser.add_argument("command",
                        choices=["dataset", "features", "train", "sweep",
                                 "kernel", "drive"])
    parser.add_argument("--config", default=None,
                        help="YAML experiment config (defaults apply "
                             "when omitted)")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--kinematics", choices=["rel", "newt"],
                        default=None)
    parser.add_argument("--engine", choices=["gaussian", "qubit"],
                        default=None)
    parser.add_argument("--data", default=None,
                        help="dataset CSV for the features command")
    parser.add_argument("--mode-scan", action="store_true",
                        help="emit the retained-mode convergence report")
    return parser


def run(argv=None) -> None:
    args = make_parser().parse_args(argv)
    conf = cfgmod.load_config(args.config) if args.config \
        else cfgmod.resolve({})
    if args.seed is not None:
        conf["seed"] = args.seed
        conf["dataset"]["seed"] = args.seed
    if args.kinematics is not None:
        conf["kinematics"] = {"rel": "relativistic",
                              "newt": "newtonian"}[args.kinematics]
    if args.engine is not None:
        conf["engine"] = args.engine
    out_dir = (args.out or os.environ.get("RELQRC_OUT") or conf["out_dir"])
    workers = (args.workers
               or int(os.environ.get("RELQRC_WORKERS", "0"))
               or conf["workers"])
    conf["out_dir"] = str(out_dir)
    conf["workers"] = int(workers)
    out = _prepare_out(conf, out_dir)
    if args.command == "dataset":
        cmd_dataset(conf, out)
    elif args.command == "features":
        cmd_features(conf, out, args.data, workers,
                     mode_scan=args.mode_scan)
    elif args.command == "train":
        cmd_train(conf, out, workers)
    elif args.command == "sweep":
        cmd_sweep(conf, out, workers)
    elif args.command == "kernel":
        cmd_kernel(conf, out, workers)
    elif args.command == "drive":
        cmd_drive(conf, out)


def main(argv=None) -> int:
    try:
        run(argv)
    except RelqrcError as exc:
        code = type(exc).__name__
        print(f"error={exc.exit_code} kind={code} detail={exc}",
              file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
