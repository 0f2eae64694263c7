"""Batch command-line front end.

Every subcommand resolves its configuration from built-in defaults, an
optional JSON config file, and explicit flags (in that order of precedence),
then writes outputs that embed the package version, the seed, and the fully
resolved configuration.  Outputs are byte-reproducible for a fixed
configuration and seed.

Figure-style outputs map to subcommands as follows: `fundamental` writes the
model coefficient tables, `truncate` writes gap-versus-truncation sweeps,
`flow` writes interpolation spectra with crossings marked (random symmetric
perturbations or onsite disorder), and `spectrum`/`irreps`/`pairings` cover
the adjacency-spectrum tables.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import AlgebraElement, RegularOperator, element_to_json, left_regular
from .cayley import (
    adjacency_element,
    c60_hopping_element,
    cayley_graph,
    graph_to_dot,
    graph_to_json,
)
from .errors import CayleySpectraError
from .flows import (
    DEFAULT_CROSSING_GAP_TOL,
    PAIR_ORDER,
    FlowExperiment,
    run_flow,
)
from .models import (
    IRREP_LABELS,
    CutoffFunction,
    adjacency_irrep_eigenvalues,
    squared_shift_model,
    truncation_model,
)
from .cayley import MetricChoice
from .molecule import Pose, coupling_from_kernel, driven_response, orbit_lattice
from .rotations import (
    cyclic_group,
    find_standard_generators,
    group_to_json,
    icosahedral_group,
    rotation_from_axis_angle,
)
from .spectra import (
    hermitian_eig,
    icosahedral_character_table,
    identify_irrep,
    irrep_multiplicities,
    projector_to_algebra,
    spectral_projector,
)
from .svgplot import line_plot_svg

DISORDER_CROSSING_GAP_TOL = 0.1  # band-resolution closing threshold, see --help

_EPILOG = """\
figure reproduction paths:
  model coefficients:   fundamental --irrep all --method squared --out-dir out/
                        fundamental --irrep all --method truncate --out-dir out/
  truncation sweeps:    truncate --irrep all --metric angular --out-dir out/
  perturbed flows:      flow --pairs all --perturb K --s 0.1 --seed 7 --out-dir out/
  disordered flows:     flow --pairs all --perturb disorder --width 1.0 --out-dir out/
  adjacency tables:     spectrum --model adjacency --out spectrum.csv
                        irreps --model adjacency --out irreps.csv

crossing thresholds: algebra perturbations keep exact level degeneracies, so
closings are certified at gap < 1e-3; onsite disorder broadens levels into
bands and closings are certified at band gap < 0.1 (both recorded in output
metadata).  The default seed comes from CAYLEY_SPECTRA_SEED when set.
"""


def _env_seed() -> int:
    value = os.environ.get("CAYLEY_SPECTRA_SEED")
    return int(value) if value else 0


_SCHEMAS: dict[str, dict[str, tuple[type, object]]] = {
    "group": {"group": (str, "ip"), "out": (str, "group.json")},
    "graph": {"group": (str, "ip"), "out": (str, "graph.dot"), "json_out": (str, "")},
    "spectrum": {"model": (str, "adjacency"), "out": (str, "spectrum.csv")},
    "irreps": {"model": (str, "adjacency"), "out": (str, "irreps.csv")},
    "pairings": {"model": (str, "adjacency"), "out": (str, "pairings.csv")},
    "fundamental": {
        "irrep": (str, "all"),
        "method": (str, "squared"),
        "metric": (str, "angular"),
        "out_dir": (str, "."),
    },
    "truncate": {
        "irrep": (str, "all"),
        "metric": (str, "angular"),
        "sign": (str, "plus"),
        "out_dir": (str, "."),
    },
    "flow": {
        "pairs": (str, "all"),
        "perturb": (str, "K"),
        "s": (float, 0.1),
        "width": (float, 1.0),
        "samples": (int, 401),
        "gap_tol": (float, 0.0),  # 0 selects the per-perturbation default
        "svg": (int, 1),
        "out_dir": (str, "."),
    },
    "molecule": {
        # default position avoids every rotation axis (generic orbit of 60)
        "seed_pose": (str, "2.0,0.3,0.1,0,0,1,0.7"),
        "kernel": (str, "exp:r0=1.0"),
        "sweep": (str, "0.05:3:120"),
        "out_dir": (str, "."),
    },
}


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cayley-spectra",
        description="Point-group Cayley spectra, fundamental models and spectral flows.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--seed", type=int, default=None, help="base RNG seed")
    parser.add_argument("--threads", type=int, default=None, help="worker threads")
    parser.add_argument("--config", type=str, default=None, help="JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, flags: dict[str, str]) -> None:
        p = sub.add_parser(name, help=help_text)
        for key, help_item in flags.items():
            kind = _SCHEMAS[name][key][0]
            p.add_argument(
                "--" + key.replace("_", "-"), dest=key, type=kind, default=None,
                help=help_item,
            )

    add("group", "export a rotation group as JSON", {
        "group": "group name: ip or c<N>", "out": "output JSON path"})
    add("graph", "export the Cayley digraph", {
        "group": "group name: ip or c<N>", "out": "output DOT path",
        "json_out": "also write edges/distances JSON here"})
    add("spectrum", "clustered spectrum of a model operator", {
        "model": "adjacency | c60 | squared:<irrep>", "out": "output CSV path"})
    add("irreps", "per-cluster irrep labels of a model operator", {
        "model": "adjacency | c60 | squared:<irrep>", "out": "output CSV path"})
    add("pairings", "per-cluster integer irrep pairings", {
        "model": "adjacency | c60 | squared:<irrep>", "out": "output CSV path"})
    add("fundamental", "build fundamental models and coefficient tables", {
        "irrep": "Ag|T1g|T2g|Gg|Hg|all", "method": "squared | truncate",
        "metric": "angular | word", "out_dir": "output directory"})
    add("truncate", "truncation sweeps with gap closing detection", {
        "irrep": "Ag|T1g|T2g|Gg|Hg|all", "metric": "angular | word",
        "sign": "plus | minus", "out_dir": "output directory"})
    add("flow", "spectral flows between fundamental models", {
        "pairs": "'all' or colon pair like Ag:Hg", "perturb": "K | disorder | none",
        "s": "algebra perturbation strength", "width": "disorder width",
        "samples": "lambda grid size", "gap_tol": "crossing threshold (0 = default)",
        "svg": "write SVG plots (0/1)", "out_dir": "output directory"})
    add("molecule", "orbit lattice, kernel couplings and frequency sweep", {
        "seed_pose": "x,y,z,ax,ay,az,angle", "kernel": "exp:r0=R | gauss:r0=R | step:r0=R",
        "sweep": "omega start:stop:count", "out_dir": "output directory"})
    return parser


def _resolve_config(command: str, args: argparse.Namespace) -> dict:
    schema = _SCHEMAS[command]
    resolved = {key: default for key, (_, default) in schema.items()}
    resolved["seed"] = _env_seed()
    resolved["threads"] = 1
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in loaded.items():
            if key in ("seed", "threads"):
                resolved[key] = int(value)
            elif key in schema:
                resolved[key] = schema[key][0](value)
            else:
                raise UsageError(f"unknown config key {key!r} for command {command!r}")
    for key in schema:
        value = getattr(args, key, None)
        if value is not None:
            resolved[key] = value
    if args.seed is not None:
        resolved["seed"] = args.seed
    if args.threads is not None:
        resolved["threads"] = args.threads
    return resolved


def _metadata_lines(command: str, config: dict, comment: str = "#") -> list[str]:
    blob = json.dumps({"command": command, **config}, sort_keys=True)
    return [
        f"{comment} cayley-spectra {__version__}",
        f"{comment} seed = {config['seed']}",
        f"{comment} config = {blob}",
    ]


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")


def _write_csv(path: Path, command: str, config: dict, header: list[str],
               rows: list[list]) -> None:
    lines = _metadata_lines(command, config)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _load_group(name: str):
    if name == "ip":
        return icosahedral_group()
    if name.startswith("c") and name[1:].isdigit():
        return cyclic_group(int(name[1:]))
    raise UsageError(f"unknown group {name!r} (expected 'ip' or 'c<N>')")


def _model_operator(spec_str: str) -> RegularOperator:
    group = icosahedral_group()
    c5, c2 = find_standard_generators(group)
    if spec_str == "adjacency":
        delta = adjacency_element(group, c5.index, c2.index)
        return RegularOperator(-left_regular(delta).matrix, group, 1, side="left")
    if spec_str == "c60":
        hop = c60_hopping_element(group, c5.index, c2.index)
        return RegularOperator(-left_regular(hop).matrix, group, 1, side="left")
    if spec_str.startswith("squared:"):
        label = spec_str.split(":", 1)[1]
        lam = adjacency_irrep_eigenvalues().get(label)
        if lam is None:
            raise UsageError(f"unknown irrep {label!r}")
        model = squared_shift_model(group, c5.index, c2.index, lam, irrep_label=label)
        return left_regular(model.element)
    raise UsageError(f"unknown model {spec_str!r}")


def _spectrum_rows(op: RegularOperator) -> tuple[list[str], list[list]]:
    group = op.group
    table = icosahedral_character_table()
    sd = hermitian_eig(op)
    header = ["cluster_index", "eigenvalue", "multiplicity", "irrep_label",
              *[f"n_{l}" for l in table.labels]]
    rows = []
    for k, cluster in enumerate(sd.clusters):
        proj = spectral_projector(sd, k)
        label, _ = identify_irrep(proj, group, table)
        pair = irrep_multiplicities(projector_to_algebra(proj), table)
        rows.append([k, cluster.value, cluster.multiplicity, label,
                     *[pair[l] for l in table.labels]])
    return header, rows


def _fundamental_models(method: str, metric_name: str, labels: list[str], sign: str = "plus"):
    group = icosahedral_group()
    c5, c2 = find_standard_generators(group)
    lams = adjacency_irrep_eigenvalues()
    metric = MetricChoice(metric_name)
    models = {}
    if method == "squared":
        for label in labels:
            models[label] = squared_shift_model(
                group, c5.index, c2.index, lams[label], irrep_label=label
            )
        return group, models
    delta = adjacency_element(group, c5.index, c2.index)
    sd = hermitian_eig(RegularOperator(-left_regular(delta).matrix, group, 1, side="left"))
    for label in labels:
        k = int(np.argmin(np.abs(sd.cluster_values - lams[label])))
        p = projector_to_algebra(spectral_projector(sd, k))
        models[label] = truncation_model(
            p, metric=metric, cutoff=CutoffFunction(), sign=sign, irrep_label=label
        )
    return group, models


def _labels_arg(irrep: str) -> list[str]:
    if irrep == "all":
        return list(IRREP_LABELS)
    if irrep not in IRREP_LABELS:
        raise UsageError(f"unknown irrep {irrep!r}")
    return [irrep]


def _cmd_group(config: dict) -> int:
    group = _load_group(config["group"])
    data = group_to_json(group)
    data["_meta"] = {"version": __version__, "seed": config["seed"],
                     "config": {"command": "group", **config}}
    _write_text(Path(config["out"]), json.dumps(data, sort_keys=True, indent=1) + "\n")
    return 0


def _cmd_graph(config: dict) -> int:
    group = _load_group(config["group"])
    c5, c2 = find_standard_generators(group) if group.order == 60 else (None, None)
    if c5 is None:
        gens = tuple(group.generator_indices) or (1,)
    else:
        gens = (c5.index, c2.index)
    graph = cayley_graph(group, gens)
    meta = "\n".join(_metadata_lines("graph", config, comment="//"))
    _write_text(Path(config["out"]), meta + "\n" + graph_to_dot(graph))
    if config["json_out"]:
        data = graph_to_json(graph)
        data["_meta"] = {"version": __version__, "seed": config["seed"],
                         "config": {"command": "graph", **config}}
        _write_text(Path(config["json_out"]), json.dumps(data, sort_keys=True) + "\n")
    return 0


def _cmd_spectrum(config: dict, command: str) -> int:
    op = _model_operator(config["model"])
    header, rows = _spectrum_rows(op)
    _write_csv(Path(config["out"]), command, config, header, rows)
    for row in rows:
        print(f"cluster {row[0]:2d}: value {row[1]:+.9f}  mult {row[2]}  {row[3]}")
    return 0


def _cmd_fundamental(config: dict) -> int:
    labels = _labels_arg(config["irrep"])
    method = {"squared": "squared", "truncate": "truncate"}.get(config["method"])
    if method is None:
        raise UsageError(f"unknown method {config['method']!r}")
    group, models = _fundamental_models(method, config["metric"], labels)
    out_dir = Path(config["out_dir"])
    lams = adjacency_irrep_eigenvalues()
    summary = []
    for label in labels:
        model = models[label]
        parameter = lams[label] if method == "squared" else (model.sweep.t_c or -1.0)
        summary.append([label, parameter, len(model.element.support)])
        rows = [[g, abs(complex(model.element.block(g)[0, 0]))]
                for g in range(group.order)]
        _write_csv(out_dir / f"coefficients_{label}.csv", "fundamental", config,
                   ["element_index", "abs_coeff"], rows)
    _write_csv(out_dir / "fundamental_summary.csv", "fundamental", config,
               ["irrep", "lambda_or_tc", "support_size"], summary)
    return 0


def _cmd_truncate(config: dict) -> int:
    labels = _labels_arg(config["irrep"])
    if config["sign"] not in ("plus", "minus"):
        raise UsageError(f"unknown sign {config['sign']!r}")
    group, models = _fundamental_models("truncate", config["metric"], labels,
                                        sign=config["sign"])
    out_dir = Path(config["out_dir"])
    summary = []
    for label in labels:
        model = models[label]
        sweep = model.sweep
        header = ["t", "lowest_gap", *[f"eig_{i + 1}" for i in range(group.order)]]
        rows = [[float(t), float(gap), *[float(v) for v in eigs]]
                for t, gap, eigs in zip(sweep.t, sweep.lowest_gap, sweep.eigenvalues)]
        _write_csv(out_dir / f"truncation_{label}.csv", "truncate", config, header, rows)
        summary.append([label, sweep.t_c if sweep.t_c is not None else -1.0,
                        len(model.element.support)])
    _write_csv(out_dir / "truncation_summary.csv", "truncate", config,
               ["irrep", "t_c", "support_size"], summary)
    return 0


def _parse_pairs(pairs: str) -> list[tuple[int, tuple[str, str]]]:
    if pairs == "all":
        return list(enumerate(PAIR_ORDER, start=1))
    parts = pairs.split(":")
    if len(parts) != 2 or not all(p in IRREP_LABELS for p in parts):
        raise UsageError(f"bad pair spec {pairs!r} (expected e.g. Ag:Hg or 'all')")
    want = (parts[0], parts[1])
    for idx, pair in enumerate(PAIR_ORDER, start=1):
        if set(pair) == set(want):
            return [(idx, pair)]
    return [(0, want)]  # same-irrep control pairs carry label 0


def _cmd_flow(config: dict) -> int:
    perturb = {"K": "algebra_K", "disorder": "diagonal_disorder", "none": "none"}.get(
        config["perturb"]
    )
    if perturb is None:
        raise UsageError(f"unknown perturbation {config['perturb']!r}")
    gap_tol = config["gap_tol"]
    if not gap_tol:
        gap_tol = (
            DISORDER_CROSSING_GAP_TOL
            if perturb == "diagonal_disorder"
            else DEFAULT_CROSSING_GAP_TOL
        )
        config = {**config, "gap_tol": gap_tol}
    pair_list = _parse_pairs(config["pairs"])
    wanted = sorted({label for _, pair in pair_list for label in pair})
    group, models = _fundamental_models("squared", "angular", wanted)
    grid = np.linspace(0.0, 1.0, int(config["samples"]))
    out_dir = Path(config["out_dir"])

    def run_one(item):
        idx, (la, lb) = item
        exp = FlowExperiment(
            model_a=models[la], model_b=models[lb], perturbation=perturb,
            s=config["s"], disorder_width=config["width"], lambda_grid=grid,
            seed=config["seed"], crossing_gap_tol=gap_tol, pair_label=idx,
        )
        return run_flow(exp)

    threads = max(1, int(config["threads"]))
    if threads > 1 and len(pair_list) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, pair_list))
    else:
        results = [run_one(item) for item in pair_list]

    summary = []
    for (idx, (la, lb)), res in zip(pair_list, results):
        header = ["lambda", *[f"eig_{i + 1}" for i in range(res.curves.shape[1])]]
        rows = [[float(lam), *[float(v) for v in eigs]]
                for lam, eigs in zip(res.lambdas, res.curves)]
        stem = f"flow_{idx:02d}_{la}_{lb}"
        _write_csv(out_dir / f"{stem}.csv", "flow", config, header, rows)
        if config["svg"]:
            vlines = []
            if res.crossing_lambda is not None:
                vlines.append((res.crossing_lambda, f"crossing {res.crossing_lambda:.4f}"))
            svg = line_plot_svg(
                res.lambdas, res.curves, title=f"{la} to {lb} spectral flow",
                xlabel="interpolation parameter", ylabel="eigenvalue", vlines=vlines,
            )
            meta = "<!-- " + " | ".join(_metadata_lines("flow", config, comment="")) + " -->\n"
            _write_text(out_dir / f"{stem}.svg", meta + svg)
        crossing = res.crossing_lambda if res.crossing_lambda is not None else -1.0
        summary.append([idx, la, lb, crossing, res.min_gap])
        note = "" if res.crossing_lambda is not None else "  (no crossing)"
        print(f"pair {idx:2d} {la}-{lb}: min gap {res.min_gap:.3e}{note}")
    _write_csv(out_dir / "flow_summary.csv", "flow", config,
               ["pair_label", "irrep_a", "irrep_b", "crossing_lambda", "min_gap"],
               summary)
    return 0


def _parse_kernel(spec_str: str):
    try:
        name, _, params = spec_str.partition(":")
        kv = dict(item.split("=") for item in params.split(",") if item)
        r0 = float(kv.pop("r0", 1.0))
        if kv:
            raise ValueError(f"unknown kernel parameters {sorted(kv)}")
    except ValueError as exc:
        raise UsageError(f"bad kernel spec {spec_str!r}: {exc}") from exc
    if name == "exp":
        return lambda r: math.exp(-r / r0)
    if name == "gauss":
        return lambda r: math.exp(-((r / r0) ** 2))
    if name == "step":
        return lambda r: 1.0 if r <= r0 else 0.0
    raise UsageError(f"unknown kernel {name!r}")


def _cmd_molecule(config: dict) -> int:
    values = [float(v) for v in config["seed_pose"].split(",")]
    if len(values) != 7:
        raise UsageError("seed pose needs 7 numbers: x,y,z,axis_x,axis_y,axis_z,angle")
    position, axis, angle = values[:3], values[3:6], values[6]
    group = icosahedral_group()
    seed_pose = Pose(np.array(position), rotation_from_axis_angle(axis, angle))
    lattice = orbit_lattice(group, seed_pose)
    kernel = _parse_kernel(config["kernel"])
    spec = coupling_from_kernel(lattice, kernel)
    out_dir = Path(config["out_dir"])

    element = AlgebraElement(group, 1, dict(spec.w))
    arch = {
        "poses": [
            {"index": i, "position": [float(v) for v in pose.position],
             "orientation": [float(v) for v in pose.orientation.matrix.reshape(9)]}
            for i, pose in enumerate(lattice.poses)
        ],
        "coupling": element_to_json(element),
        "_meta": {"version": __version__, "seed": config["seed"],
                  "config": {"command": "molecule", **config}},
    }
    _write_text(out_dir / "architecture.json", json.dumps(arch, sort_keys=True) + "\n")

    try:
        start, stop, count = config["sweep"].split(":")
        omegas = np.linspace(float(start), float(stop), int(count))
    except ValueError as exc:
        raise UsageError(f"bad sweep spec {config['sweep']!r}") from exc
    v_matrix = left_regular(element).matrix
    # Kernel couplings need not be PSD; shift by the most negative eigenvalue
    # so the potential is a stable quadratic form (anchoring stiffness).
    w_min = float(np.linalg.eigvalsh(v_matrix).min())
    shift = max(0.0, -w_min)
    v_matrix = v_matrix + shift * np.eye(group.order)
    t_matrix = np.eye(group.order)
    force = np.zeros(group.order)
    force[group.identity_index] = 1.0
    rows = []
    for omega in omegas:
        try:
            q = driven_response(t_matrix, v_matrix, float(omega), force)
            rows.append([float(omega), *[float(abs(x)) for x in q]])
        except CayleySpectraError:
            rows.append([float(omega), *([float("nan")] * group.order)])
    header = ["omega", *[f"abs_q_{i}" for i in range(group.order)]]
    config = {**config, "psd_shift": shift}
    _write_csv(out_dir / "response.csv", "molecule", config, header, rows)
    return 0


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _resolve_config(args.command, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "group":
            return _cmd_group(config)
        if args.command == "graph":
            return _cmd_graph(config)
        if args.command in ("spectrum", "irreps", "pairings"):
            return _cmd_spectrum(config, args.command)
        if args.command == "fundamental":
            return _cmd_fundamental(config)
        if args.command == "truncate":
            return _cmd_truncate(config)
        if args.command == "flow":
            return _cmd_flow(config)
        if args.command == "molecule":
            return _cmd_molecule(config)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CayleySpectraError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())
