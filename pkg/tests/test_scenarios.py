import json
import math

import numpy as np
import pytest

from apollonian_jch.model import SystemParams
from apollonian_jch.scenarios import (
    FIG10_RATIOS,
    PRESET_IDS,
    Scenario,
    ScenarioError,
    compute,
    fig10_base,
    preset,
    run,
    run_preset,
    sweep_points,
    sweep_ratio,
)


def small(**kw):
    base = dict(
        id="custom",
        generation=2,
        params=SystemParams(0.0, 0.0, 0.5, 1.0),
        initial=((4, math.pi / 4), (5, 0.0)),
        outputs=("series", "overall", "return", "chi"),
        t_max=5.0,
        samples=51,
    )
    base.update(kw)
    return Scenario(**base)


def test_preset_bindings():
    (fig5,) = preset("fig5")
    assert fig5.generation == 4
    assert fig5.params.kappa / fig5.params.beta == pytest.approx(1e3)
    assert fig5.params.omega_f == 0.0 and fig5.resonance == "hub"
    assert fig5.initial == ((4, math.pi / 2),)

    (fig6,) = preset("fig6")
    assert fig6.generation == 3 and [k for k, _ in fig6.initial] == [3, 4, 5, 15]
    assert fig6.params.omega_a == 0.0

    (fig7,) = preset("fig7")
    assert [k for k, _ in fig7.initial] == [5, 15, 18, 21]

    assert [s.generation for s in preset("fig8")] == [4, 5, 6]
    assert all(s.chi_alpha == pytest.approx(math.pi / 4) for s in preset("fig8"))

    (fig9,) = preset("fig9")
    assert fig9.params.kappa == fig9.params.beta == 1.0

    fig4 = preset("fig4")
    assert [(s.label, s.resonance, s.initial[0][0]) for s in fig4] == [
        ("a", "hub", 4),
        ("b", "hub", 18),
        ("c", None, 4),
        ("d", None, 18),
    ]


def test_unknown_preset():
    with pytest.raises(ScenarioError):
        preset("fig11")


def test_missing_node_rejected():
    with pytest.raises(ScenarioError):
        compute(small(generation=1, initial=((18, 0.0),)))


def test_compute_small():
    res = compute(small())
    assert set(res.series) == {4, 5}
    assert res.series[4].times.size == 51
    for s in res.series.values():
        assert np.max(np.abs(s.total - 1)) < 1e-10
    ph, at = res.chi_rows[4]
    assert ph.sum() + at.sum() == pytest.approx(1, abs=1e-10)


def test_fig3_result():
    res = compute(preset("fig3")[0])
    assert res.hub.frequency == pytest.approx(3.81, abs=0.01)
    assert res.eig is None


def test_hub_resonance_resolved():
    res = compute(preset("fig4")[0])
    assert res.params.omega_a == res.hub.frequency


def test_run_writes_bundle(tmp_path):
    bundle = run(small(), tmp_path)
    assert bundle.path == tmp_path / "custom"
    names = {p.name for p in bundle.path.iterdir()}
    assert {"manifest.json", "series_k4.csv", "overall_k5.csv", "return_k4.csv", "chi_k5.csv"} <= names
    man = json.loads((bundle.path / "manifest.json").read_text())
    for key in ("scenario_id", "generation", "params", "alpha", "initial_nodes",
                "tau_deg", "outputs", "version"):
        assert key in man
    assert man["params"] == {"omega_f": 0.0, "omega_a": 0.0, "beta": 0.5, "kappa": 1.0}
    header, first = (bundle.path / "series_k4.csv").read_text().splitlines()[:2]
    assert header == "t,node,p_ph,p_at"
    assert first.startswith("0,1,")
    assert not list(bundle.path.glob(".*.tmp"))


def test_run_is_byte_identical(tmp_path):
    a = run(small(), tmp_path / "a")
    b = run(small(), tmp_path / "b")
    for name in a.files + ("manifest.json",):
        assert (a.path / name).read_bytes() == (b.path / name).read_bytes()


def test_json_series_format(tmp_path):
    bundle = run(small(outputs=("series",)), tmp_path, fmt_kind="json")
    doc = json.loads((bundle.path / "series_k4.json").read_text())
    assert len(doc["times"]) == 51 and len(doc["p_ph"][0]) == 7


def test_fig8_chi_outputs(tmp_path):
    s = Scenario("fig8", 3, SystemParams(0.0, 0.0, 1e-3, 1.0), outputs=("chi",),
                 label="n3", chi_alpha=math.pi / 4)
    bundle = run(s, tmp_path)
    chi = np.loadtxt(bundle.path / "chi_ph.csv", delimiter=",")
    assert chi.shape == (16, 16)
    doc = json.loads((bundle.path / "chi.json").read_text())
    assert len(doc["orbit_of_node"]) == 16


def test_sweep_points_naming():
    pts = sweep_points(fig10_base(), FIG10_RATIOS)
    assert len(pts) == 25
    names = [p.name for p in pts]
    assert names == sorted(names)
    assert pts[0].params.kappa == pytest.approx(1e3) and pts[0].params.beta == 1.0
    assert pts[-1].params.kappa == pytest.approx(1e-3)
    with pytest.raises(ScenarioError):
        sweep_points(fig10_base(), [])
    with pytest.raises(ScenarioError):
        sweep_points(fig10_base(), [1.0, -2.0])


def test_sweep_single_point_is_strong_hopping(tmp_path):
    base = small(initial=((4, math.pi / 4),), outputs=("return",), samples=None,
                 t_max=2.0, time_unit="kappa")
    bundles = sweep_ratio(base, [1e3], tmp_path)
    (b,) = bundles.values()
    assert b.manifest["params"]["kappa"] == 1e3 and b.manifest["params"]["beta"] == 1.0
    index = json.loads((tmp_path / "custom" / "sweep_manifest.json").read_text())
    assert index["ratios"] == [1e3]


def test_sweep_strong_coupling_identity():
    base = small(generation=3, initial=((4, math.pi / 4),), samples=None,
                 t_max=10.0, time_unit="kappa", outputs=("series",))
    (pt,) = sweep_points(base, [1e-3])
    s = compute(pt).series[4]
    assert np.max(np.abs(s.p_ph - s.p_at)) <= 0.02


def test_sweep_manifest_lists_all_points(tmp_path):
    base = small(generation=1, initial=((4, math.pi / 4),), samples=21, outputs=("return",),
                 t_max=1.0, time_unit="kappa")
    bundles = sweep_ratio(base, FIG10_RATIOS, tmp_path, max_workers=2)
    index = json.loads((tmp_path / "custom" / "sweep_manifest.json").read_text())
    assert len(index["points"]) == 25 == len(bundles)
    assert index["points"] == sorted(index["points"])


def test_run_preset_fig3(tmp_path):
    (bundle,) = run_preset("fig3", tmp_path)
    doc = json.loads((bundle.path / "field_spectrum.json").read_text())
    assert doc["phi_hub"] == pytest.approx(3.81, abs=0.01)
    lines = (bundle.path / "field_modes.csv").read_text().splitlines()
    assert lines[0] == "j,phi,xi_over_n,amp2_node4,amp2_node3,amp2_node8,amp2_node18"
    assert len(lines) == 44


def test_preset_ids_cover_figures():
    assert PRESET_IDS == ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10")
