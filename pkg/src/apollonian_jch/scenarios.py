"""Figure presets and the hopping/coupling ratio sweep.

Each preset expands to one or more :class:`Scenario` objects. ``compute``
produces in-memory results; ``run`` additionally writes a bundle directory
holding the data files and a ``manifest.json``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import (
    AverageMatrix,
    HubMode,
    OccupationSeries,
    average_matrix,
    evolve,
    find_hub_mode,
    long_time_average,
    participation_ratios,
    time_grid,
)
from .eigensolve import EigenSystem, eig_sym, spectrum_document
from .export import (
    atomic_write,
    average_document,
    dumps_json,
    fmt,
    matrix_csv,
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
from .network import ApollonianNetwork, generate, orbits

PRESET_IDS = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10")
OUTPUTS = ("spectrum", "modes", "series", "overall", "return", "chi")
# "relevant" node selection keeps nodes whose peak occupation reaches this value
RELEVANT_THRESHOLD = 0.01
FIG10_RATIOS = tuple(float(r) for r in np.logspace(3, -3, 25))

HALF_PI = math.pi / 2
QUARTER_PI = math.pi / 4


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    id: str
    generation: int
    params: SystemParams = field(default_factory=SystemParams)
    initial: tuple[tuple[int, float], ...] = ()
    outputs: tuple[str, ...] = ("series",)
    label: str = ""
    # t_max is in units of 1/kappa, 1/beta, or absolute time
    t_max: float | None = None
    time_unit: str = "absolute"
    samples: int | None = None
    resonance: str | None = None  # "hub" binds omega_a to the hub mode frequency
    record_nodes: tuple[int, ...] | str | None = None  # None = all, "relevant"
    mode_nodes: tuple[int, ...] = ()
    chi_alpha: float | None = None  # full chi matrices for this alpha
    tau_deg: float | None = None
    notes: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return f"{self.id}_{self.label}" if self.label else self.id

    def absolute_t_max(self, params: SystemParams) -> float:
        if self.t_max is None:
            raise ScenarioError(f"scenario {self.name} has no time window")
        if self.time_unit == "absolute":
            return self.t_max
        rate = {"kappa": params.kappa, "beta": params.beta}.get(self.time_unit)
        if rate is None:
            raise ScenarioError(f"unknown time unit {self.time_unit!r}")
        if rate <= 0:
            raise ScenarioError(f"time unit 1/{self.time_unit} undefined for a zero rate")
        return self.t_max / rate


@dataclass(eq=False)
class ScenarioResult:
    scenario: Scenario
    network: ApollonianNetwork
    params: SystemParams  # with any resonance resolved
    field_eig: EigenSystem | None = None
    hub: HubMode | None = None
    eig: EigenSystem | None = None
    series: dict[int, OccupationSeries] = field(default_factory=dict)
    chi_rows: dict[int, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    averages: AverageMatrix | None = None

    @property
    def tau_deg(self) -> float | None:
        if self.eig is not None:
            return self.eig.tolerance_used
        return self.field_eig.tolerance_used if self.field_eig is not None else None


@dataclass(frozen=True)
class Bundle:
    path: Path
    files: tuple[str, ...]
    manifest: dict


def _strong_hopping(**kw) -> SystemParams:
    base = {"omega_f": 0.0, "omega_a": 0.0, "beta": 1e-3, "kappa": 1.0}
    base.update(kw)
    return SystemParams(**base)


def preset(fig_id: str) -> list[Scenario]:
    """Scenarios reproducing one figure's data."""
    note18 = ("node 18 is the second generation-4 node in canonical numbering",)
    if fig_id == "fig3":
        return [
            Scenario(
                "fig3",
                4,
                SystemParams(omega_f=0.0, kappa=1.0),
                outputs=("spectrum", "modes"),
                mode_nodes=(4, 3, 8, 18),
            )
        ]
    if fig_id == "fig4":
        panels = [("a", "hub", 4), ("b", "hub", 18), ("c", None, 4), ("d", None, 18)]
        return [
            Scenario(
                "fig4",
                4,
                _strong_hopping(),
                initial=((k, HALF_PI),),
                outputs=("overall",),
                label=label,
                t_max=10.0,
                time_unit="beta",
                resonance=res,
                notes=note18 if k == 18 else (),
            )
            for label, res, k in panels
        ]
    if fig_id == "fig5":
        return [
            Scenario(
                "fig5",
                4,
                _strong_hopping(),
                initial=((4, HALF_PI),),
                outputs=("series", "overall"),
                t_max=10.0,
                time_unit="beta",
                resonance="hub",
                record_nodes="relevant",
            )
        ]
    if fig_id in ("fig6", "fig7"):
        n, ks = (3, (3, 4, 5, 15)) if fig_id == "fig6" else (4, (5, 15, 18, 21))
        return [
            Scenario(
                fig_id,
                n,
                _strong_hopping(),
                initial=tuple((k, QUARTER_PI) for k in ks),
                outputs=("series",),
                t_max=20.0,
                time_unit="kappa",
            )
        ]
    if fig_id == "fig8":
        return [
            Scenario(
                "fig8",
                n,
                _strong_hopping(),
                outputs=("chi",),
                label=f"n{n}",
                chi_alpha=QUARTER_PI,
            )
            for n in (4, 5, 6)
        ]
    if fig_id == "fig9":
        return [
            Scenario(
                "fig9",
                4,
                _strong_hopping(beta=1.0),
                initial=((4, QUARTER_PI), (18, QUARTER_PI)),
                outputs=("chi", "overall"),
                t_max=20.0,
                time_unit="kappa",
                notes=note18,
            )
        ]
    if fig_id == "fig10":
        return sweep_points(fig10_base(), FIG10_RATIOS)
    raise ScenarioError(f"unknown preset {fig_id!r}; choose from {', '.join(PRESET_IDS)}")


def fig10_base() -> Scenario:
    return Scenario(
        "fig10",
        4,
        SystemParams(omega_f=0.0, omega_a=0.0, beta=1.0, kappa=1.0),
        initial=((4, QUARTER_PI),),
        outputs=("return",),
        t_max=20.0,
        time_unit="kappa",
    )


def sweep_points(base: Scenario, ratios) -> list[Scenario]:
    """One scenario per kappa/beta ratio with beta fixed at 1."""
    ratios = [float(r) for r in ratios]
    if not ratios:
        raise ScenarioError("ratio list is empty")
    if any(not (r > 0 and math.isfinite(r)) for r in ratios):
        raise ScenarioError("ratios must be positive and finite")
    width = max(3, len(str(len(ratios) - 1)))
    return [
        replace(
            base,
            params=replace(base.params, beta=1.0, kappa=r),
            label=f"point_{i:0{width}d}_ratio_{r:.6e}",
        )
        for i, r in enumerate(ratios)
    ]


def _validate(s: Scenario, net: ApollonianNetwork) -> None:
    unknown = set(s.outputs) - set(OUTPUTS)
    if unknown:
        raise ScenarioError(f"unknown outputs {sorted(unknown)}")
    for k, _ in s.initial:
        if not 1 <= k <= net.node_count:
            raise ScenarioError(
                f"{s.name}: initial node {k} does not exist at generation {s.generation} "
                f"({net.node_count} nodes)"
            )
    for k in s.mode_nodes:
        if not 1 <= k <= net.node_count:
            raise ScenarioError(f"{s.name}: mode node {k} absent at generation {s.generation}")
    if s.resonance not in (None, "hub"):
        raise ScenarioError(f"unknown resonance {s.resonance!r}")


def compute(s: Scenario, net: ApollonianNetwork | None = None) -> ScenarioResult:
    if net is None or net.generation != s.generation:
        net = generate(s.generation)
    _validate(s, net)
    params = s.params
    res = ScenarioResult(scenario=s, network=net, params=params)

    needs_jch = bool(s.initial) or s.chi_alpha is not None
    if s.resonance == "hub" or {"spectrum", "modes"} & set(s.outputs):
        h_field = build_field_hamiltonian(net, params.omega_f, params.kappa)
        # a user tau_deg applies to the field spectrum only when it is the sole spectrum
        res.field_eig = eig_sym(h_field, tau_deg=None if needs_jch else s.tau_deg)
        res.hub = find_hub_mode(res.field_eig)
    if s.resonance == "hub":
        params = replace(params, omega_a=res.hub.frequency)
        res.params = params

    if not needs_jch:
        return res

    basis = basis_for(net)
    res.eig = eig_sym(build_jch_hamiltonian(net, params), tau_deg=s.tau_deg)
    if s.chi_alpha is not None:
        res.averages = average_matrix(res.eig, basis, s.chi_alpha)

    wants_time = {"series", "overall", "return"} & set(s.outputs)
    times = None
    if wants_time:
        t_max = s.absolute_t_max(params)
        if s.samples is not None:
            times = np.linspace(0.0, t_max, s.samples)
        else:
            times = time_grid(t_max, res.eig)
    for k, alpha in s.initial:
        psi0 = localized_state(basis, k, alpha)
        if times is not None:
            res.series[k] = evolve(res.eig, basis, psi0, times)
        if "chi" in s.outputs:
            res.chi_rows[k] = long_time_average(res.eig, basis, psi0)
    return res


def _relevant_nodes(series: OccupationSeries) -> list[int]:
    peak = np.maximum(series.p_ph.max(axis=0), series.p_at.max(axis=0))
    return [int(i) + 1 for i in np.flatnonzero(peak >= RELEVANT_THRESHOLD)]


def _write_outputs(res: ScenarioResult, path: Path, fmt_kind: str) -> list[str]:
    s = res.scenario
    files: dict[str, str] = {}
    net = res.network
    n = net.node_count

    if "spectrum" in s.outputs:
        doc = spectrum_document(res.field_eig)
        xi = participation_ratios(res.field_eig)
        doc["xi_over_n"] = [float(x) for x in xi / n]
        doc["phi_hub"] = res.hub.frequency
        doc["hub_index"] = res.hub.index
        files["field_spectrum.json"] = dumps_json(doc)
    if "modes" in s.outputs:
        xi = participation_ratios(res.field_eig)
        header = ["j", "phi", "xi_over_n"] + [f"amp2_node{k}" for k in s.mode_nodes]
        lines = [",".join(header)]
        for j in range(n):
            amps = [res.field_eig.vectors[k - 1, j] ** 2 for k in s.mode_nodes]
            row = [str(j + 1), fmt(res.field_eig.values[j]), fmt(xi[j] / n)]
            lines.append(",".join(row + [fmt(a) for a in amps]))
        files["field_modes.csv"] = "\n".join(lines) + "\n"

    for k, series in res.series.items():
        if "series" in s.outputs:
            if s.record_nodes == "relevant":
                nodes = _relevant_nodes(series)
            else:
                nodes = list(s.record_nodes) if s.record_nodes is not None else None
            if fmt_kind == "json":
                files[f"series_k{k}.json"] = dumps_json(series_document(series, nodes))
            else:
                files[f"series_k{k}.csv"] = series_csv(series, nodes)
        if "overall" in s.outputs:
            files[f"overall_k{k}.csv"] = overall_csv(series)
        if "return" in s.outputs:
            lines = ["t,p_ph,p_at"]
            for t, a, b in zip(series.times, series.p_ph[:, k - 1], series.p_at[:, k - 1]):
                lines.append(f"{fmt(t)},{fmt(a)},{fmt(b)}")
            files[f"return_k{k}.csv"] = "\n".join(lines) + "\n"

    for k, (ph, at) in res.chi_rows.items():
        lines = ["node,chi_ph,chi_at"]
        lines += [f"{i + 1},{fmt(a)},{fmt(b)}" for i, (a, b) in enumerate(zip(ph, at))]
        files[f"chi_k{k}.csv"] = "\n".join(lines) + "\n"
    if res.averages is not None:
        files["chi_ph.csv"] = matrix_csv(res.averages.chi_ph)
        files["chi_at.csv"] = matrix_csv(res.averages.chi_at)
        files["chi.json"] = dumps_json(average_document(res.averages, orbits(net)))

    for name, text in files.items():
        atomic_write(path / name, text)
    return sorted(files)


def manifest(res: ScenarioResult, files=()) -> dict:
    s = res.scenario
    parts = orbits(res.network)
    alphas = sorted({a for _, a in s.initial} | ({s.chi_alpha} if s.chi_alpha is not None else set()))
    doc = {
        "scenario_id": s.id,
        "label": s.label,
        "generation": s.generation,
        "params": res.params.as_dict(),
        "alpha": alphas[0] if len(alphas) == 1 else (alphas or None),
        "initial_nodes": [k for k, _ in s.initial],
        "initial_orbits": [list(parts.orbit_of(k)) for k, _ in s.initial],
        "tau_deg": res.tau_deg,
        "outputs": list(s.outputs),
        "version": __version__,
        "files": list(files),
    }
    if res.hub is not None:
        doc["phi_hub"] = res.hub.frequency
    if s.resonance:
        doc["resonance"] = s.resonance
    if res.series:
        first = next(iter(res.series.values()))
        doc["time_grid"] = {"t_max": float(first.times[-1]), "samples": int(first.times.size)}
    if s.notes:
        doc["notes"] = list(s.notes)
    return doc


def run(
    s: Scenario,
    outdir: str | Path,
    fmt_kind: str = "csv",
    net: ApollonianNetwork | None = None,
    timestamp: str | None = None,
) -> Bundle:
    """Compute ``s`` and write its bundle to ``outdir/<scenario name>/``."""
    res = compute(s, net)
    path = Path(outdir) / s.name
    files = _write_outputs(res, path, fmt_kind)
    doc = manifest(res, files)
    if timestamp is not None:
        doc["timestamp"] = timestamp
    atomic_write(path / "manifest.json", dumps_json(doc))
    return Bundle(path=path, files=tuple(files), manifest=doc)


def sweep_ratio(
    base: Scenario,
    ratios,
    outdir: str | Path,
    fmt_kind: str = "csv",
    max_workers: int = 1,
) -> dict[float, Bundle]:
    """Run ``base`` at every kappa/beta ratio (beta = 1); bundles keyed by ratio."""
    points = sweep_points(base, ratios)
    net = generate(base.generation)
    sweep_dir = Path(outdir) / base.id

    def one(p: Scenario) -> Bundle:
        return run(p, sweep_dir, fmt_kind, net=net)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            bundles = list(pool.map(one, points))
    else:
        bundles = [one(p) for p in points]

    index = {
        "scenario_id": base.id,
        "generation": base.generation,
        "ratios": [p.params.kappa / p.params.beta for p in points],
        "points": [b.path.name for b in bundles],
        "version": __version__,
    }
    atomic_write(sweep_dir / "sweep_manifest.json", dumps_json(index))
    return {p.params.kappa: b for p, b in zip(points, bundles)}


def run_preset(fig_id: str, outdir: str | Path, fmt_kind: str = "csv") -> list[Bundle]:
    if fig_id == "fig10":
        return list(sweep_ratio(fig10_base(), FIG10_RATIOS, outdir, fmt_kind).values())
    return [run(s, outdir, fmt_kind) for s in preset(fig_id)]
