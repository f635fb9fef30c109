"""Command-line front end.

Exit codes: 0 success, 2 argument errors, 3 numerical failures.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import (
    HubModeError,
    average_matrix,
    evolve,
    find_hub_mode,
    participation_ratios,
    time_grid,
)
from .eigensolve import EigenSolveError, eig_sym, spectrum_document
from .export import (
    atomic_write,
    average_document,
    census_document,
    dumps_json,
    edge_list,
    matrix_csv,
    network_document,
    overall_csv,
    series_csv,
    series_document,
)
from .model import (
    SystemParams,
    basis_for,
    build_field_hamiltonian,
    build_jch_hamiltonian,
    localized_state,
)
from .network import generate, orbits
from .scenarios import PRESET_IDS, Scenario, ScenarioError, run_preset, sweep_ratio

OUTPUT_ENV = "JCH_OUTPUT_DIR"
DEFAULT_OUTPUT = "jch_output"


def _finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return x


def _non_negative(text: str) -> float:
    x = _finite(text)
    if x < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return x


def _omega_a(text: str):
    return "hub" if text == "hub" else _finite(text)


def _ratios(text: str) -> list[float]:
    """``start:stop:count`` (log-spaced, inclusive) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("ratio grid must be start:stop:count")
        start, stop = _finite(parts[0]), _finite(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise argparse.ArgumentTypeError("ratio count must be an integer") from None
        if start <= 0 or stop <= 0 or count < 1:
            raise argparse.ArgumentTypeError("ratio grid needs positive bounds and count")
        return [float(r) for r in np.logspace(math.log10(start), math.log10(stop), count)]
    vals = [_finite(x) for x in text.split(",") if x.strip()]
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("ratios must be positive")
    return vals


def _physics_args(p: argparse.ArgumentParser, node: bool = True) -> None:
    p.add_argument("-n", "--generation", type=int, default=4)
    p.add_argument("--omega-f", type=_finite, default=0.0)
    p.add_argument("--omega-a", type=_omega_a, default=0.0,
                   help="atomic frequency, or 'hub' to resonate with the hub mode")
    p.add_argument("--beta", type=_non_negative, default=1e-3)
    p.add_argument("--kappa", type=_non_negative, default=1.0)
    p.add_argument("--alpha", type=_finite, default=math.pi / 4,
                   help="initial mixing angle in radians (0 photonic, pi/2 atomic)")
    p.add_argument("--tau-deg", type=_non_negative, default=None)
    if node:
        p.add_argument("-k", "--node", type=int, default=4)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jch", description="Single-excitation JCH dynamics on Apollonian networks."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("net", help="export the network and its symmetry orbits")
    p.add_argument("-n", "--generation", type=int, default=4)
    p.add_argument("--format", choices=("csv", "json"), default="json",
                   help="csv writes the edge list")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("spectrum", help="field normal modes, participation ratios, hub mode")
    p.add_argument("-n", "--generation", type=int, default=4)
    p.add_argument("--omega-f", type=_finite, default=0.0)
    p.add_argument("--kappa", type=_non_negative, default=1.0)
    p.add_argument("--tau-deg", type=_non_negative, default=None)
    p.add_argument("--vectors", action="store_true", help="include eigenvectors")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("evolve", help="occupation probabilities for one initial state")
    _physics_args(p)
    p.add_argument("--t-max", type=_non_negative, default=20.0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--overall", action="store_true", help="emit summed occupations only")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--hamiltonian-csv", type=Path, default=None)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("average", help="long-time average matrices for every initial node")
    _physics_args(p, node=False)
    p.add_argument("--hamiltonian-csv", type=Path, default=None)
    p.add_argument("--out", type=Path, default=None,
                   help="directory for chi_ph.csv, chi_at.csv, chi.json")

    p = sub.add_parser("fig", help="run a figure preset")
    p.add_argument("id", choices=PRESET_IDS)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("sweep", help="kappa/beta sweep with beta = 1")
    _physics_args(p)
    p.add_argument("--ratios", type=_ratios, default=_ratios("1e3:1e-3:25"))
    p.add_argument("--t-max", type=_non_negative, default=20.0, help="in units of 1/kappa")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, default=None)
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def _outdir(args) -> Path:
    return args.out or Path(os.environ.get(OUTPUT_ENV, DEFAULT_OUTPUT))


def _params(args, net):
    omega_a = args.omega_a
    phi_hub = None
    if omega_a == "hub":
        field = eig_sym(build_field_hamiltonian(net, args.omega_f, args.kappa))
        phi_hub = find_hub_mode(field).frequency
        omega_a = phi_hub
    params = SystemParams(args.omega_f, omega_a, args.beta, args.kappa)
    return params, phi_hub


def cmd_net(args) -> int:
    net = generate(args.generation)
    if args.format == "json":
        doc = network_document(net)
        doc["census"] = census_document(net)
        _emit(dumps_json(doc), args.out)
    else:
        _emit(edge_list(net), args.out)
    return 0


def cmd_spectrum(args) -> int:
    net = generate(args.generation)
    eig = eig_sym(build_field_hamiltonian(net, args.omega_f, args.kappa), tau_deg=args.tau_deg)
    doc = spectrum_document(eig, include_vectors=args.vectors)
    xi = participation_ratios(eig)
    doc["generation"] = net.generation
    doc["xi_over_n"] = [float(x) for x in xi / net.node_count]
    doc["min_xi_over_n"] = float(xi.min() / net.node_count)
    try:
        hub = find_hub_mode(eig)
    except HubModeError as exc:
        doc["phi_hub"] = None
        doc["hub_mode_error"] = str(exc)
    else:
        doc["phi_hub"] = hub.frequency
        doc["hub_index"] = hub.index
        doc["hub_mode_peak_node"] = int(np.argmax(np.abs(hub.vector))) + 1
    _emit(dumps_json(doc), args.out)
    return 0


def cmd_evolve(args) -> int:
    net = generate(args.generation)
    basis = basis_for(net)
    psi0 = localized_state(basis, args.node, args.alpha)
    params, _ = _params(args, net)
    h = build_jch_hamiltonian(net, params)
    if args.hamiltonian_csv:
        atomic_write(args.hamiltonian_csv, matrix_csv(h))
    eig = eig_sym(h, tau_deg=args.tau_deg)
    if args.samples is not None:
        if args.samples < 1:
            raise ValueError("--samples must be at least 1")
        times = np.linspace(0.0, args.t_max, args.samples)
    else:
        times = time_grid(args.t_max, eig)
    series = evolve(eig, basis, psi0, times)
    if args.overall:
        text = overall_csv(series)
    elif args.format == "json":
        text = dumps_json(series_document(series))
    else:
        text = series_csv(series)
    _emit(text, args.out)
    return 0


def cmd_average(args) -> int:
    net = generate(args.generation)
    params, _ = _params(args, net)
    h = build_jch_hamiltonian(net, params)
    if args.hamiltonian_csv:
        atomic_write(args.hamiltonian_csv, matrix_csv(h))
    eig = eig_sym(h, tau_deg=args.tau_deg)
    avg = average_matrix(eig, basis_for(net), args.alpha)
    doc = average_document(avg, orbits(net))
    doc["params"] = params.as_dict()
    doc["tau_deg"] = eig.tolerance_used
    if args.out is None:
        sys.stdout.write(dumps_json(doc))
    else:
        atomic_write(args.out / "chi_ph.csv", matrix_csv(avg.chi_ph))
        atomic_write(args.out / "chi_at.csv", matrix_csv(avg.chi_at))
        atomic_write(args.out / "chi.json", dumps_json(doc))
    return 0


def cmd_fig(args) -> int:
    for bundle in run_preset(args.id, _outdir(args), args.format):
        print(bundle.path)
    return 0


def cmd_sweep(args) -> int:
    base = Scenario(
        "sweep",
        args.generation,
        SystemParams(args.omega_f, 0.0 if args.omega_a == "hub" else args.omega_a, 1.0, 1.0),
        initial=((args.node, args.alpha),),
        outputs=("return", "overall"),
        t_max=args.t_max,
        time_unit="kappa",
        resonance="hub" if args.omega_a == "hub" else None,
        tau_deg=args.tau_deg,
    )
    bundles = sweep_ratio(base, args.ratios, _outdir(args), args.format)
    for b in bundles.values():
        print(b.path)
    return 0


COMMANDS = {
    "net": cmd_net,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "average": cmd_average,
    "fig": cmd_fig,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (EigenSolveError, HubModeError) as exc:
        print(f"jch: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, MemoryError, ScenarioError) as exc:
        print(f"jch: error: {exc}", file=sys.stderr)
        return 2
