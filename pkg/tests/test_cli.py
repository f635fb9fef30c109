import json

import numpy as np
import pytest

from apollonian_jch.cli import main
from apollonian_jch.export import adjacency_from_document, read_matrix_csv
from apollonian_jch.network import generate


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_net_json(capsys):
    code, out, _ = run_cli(capsys, "net", "-n", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["nodes"]) == 7 and len(doc["edges"]) == 15
    assert sorted(len(c) for c in doc["orbits"]) == [1, 3, 3]
    assert doc["generation"] == 2


@pytest.mark.parametrize("n", [0, 2, 4])
def test_net_round_trip(capsys, n):
    _, out, _ = run_cli(capsys, "net", "-n", str(n))
    assert np.array_equal(adjacency_from_document(json.loads(out)), generate(n).adjacency)


def test_net_edge_list(capsys):
    _, out, _ = run_cli(capsys, "net", "-n", "1", "--format", "csv")
    assert out == "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n"


def test_spectrum_n4(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "-n", "4")
    doc = json.loads(out)
    assert code == 0
    assert doc["phi_hub"] == pytest.approx(3.8, abs=0.05)
    assert doc["min_xi_over_n"] == pytest.approx(0.07, abs=0.01)
    assert doc["hub_mode_peak_node"] == 4


def test_spectrum_degenerate_hub_reported(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "-n", "1")
    doc = json.loads(out)
    assert code == 0 and doc["phi_hub"] is None and "degenerate" in doc["hub_mode_error"]


def test_evolve_rabi_limit(capsys):
    code, out, _ = run_cli(
        capsys, "evolve", "-n", "0", "--kappa", "0", "--beta", "1", "--alpha", "1.5707963",
        "-k", "1", "--t-max", "6.2832", "--samples", "101",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,node,p_ph,p_at"
    rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    node1 = rows[rows[:, 1] == 1]
    assert node1.shape[0] == 101
    assert np.allclose(node1[:, 3], np.cos(node1[:, 0]) ** 2, atol=1e-8)


def test_evolve_overall_and_hamiltonian_dump(capsys, tmp_path):
    hpath = tmp_path / "h.csv"
    code, out, _ = run_cli(
        capsys, "evolve", "-n", "1", "--overall", "--t-max", "1", "--samples", "3",
        "--hamiltonian-csv", str(hpath),
    )
    assert code == 0 and out.splitlines()[0] == "t,overall_ph,overall_at"
    h = read_matrix_csv(hpath.read_text())
    assert h.shape == (8, 8) and np.array_equal(h, h.T)


def test_evolve_hub_resonance(capsys):
    code, out, _ = run_cli(capsys, "evolve", "-n", "3", "--omega-a", "hub", "--samples", "5",
                           "--format", "json")
    assert code == 0
    assert len(json.loads(out)["times"]) == 5
    # at n = 2 the most localised field mode is two-fold degenerate
    code, _, err = run_cli(capsys, "evolve", "-n", "2", "--omega-a", "hub")
    assert code == 3 and "degenerate" in err


def test_average_stdout_and_files(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "average", "-n", "2", "--alpha", "0")
    doc = json.loads(out)
    chi = np.array(doc["chi_ph"])
    assert code == 0 and np.allclose(chi, chi.T, atol=1e-10)
    code, _, _ = run_cli(capsys, "average", "-n", "2", "--out", str(tmp_path))
    assert code == 0
    assert read_matrix_csv((tmp_path / "chi_at.csv").read_text()).shape == (7, 7)


def test_fig_uses_env_output(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("JCH_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run_cli(capsys, "fig", "fig3")
    assert code == 0
    assert (tmp_path / "fig3" / "manifest.json").exists()


def test_sweep_command(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "sweep", "-n", "1", "--ratios", "10,1,0.1", "--t-max", "1",
                           "--out", str(tmp_path))
    assert code == 0
    assert len(out.splitlines()) == 3
    assert (tmp_path / "sweep" / "sweep_manifest.json").exists()


def test_byte_identical_invocations(capsys):
    _, a, _ = run_cli(capsys, "evolve", "-n", "2", "--samples", "11")
    _, b, _ = run_cli(capsys, "evolve", "-n", "2", "--samples", "11")
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["net", "--nope"],
        ["evolve", "--beta", "nan"],
        ["evolve", "--beta", "-1"],
        ["evolve", "-n", "1", "-k", "9"],
        ["sweep", "--ratios", "1:2"],
        ["net", "-n", "15"],
    ],
)
def test_argument_errors_exit_2(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert err


def test_numerical_failure_exit_3(capsys, monkeypatch):
    from apollonian_jch import cli
    from apollonian_jch.eigensolve import EigenSolveError

    def boom(*a, **k):
        raise EigenSolveError("no convergence", off_diagonal_norm=1.0)

    monkeypatch.setattr(cli, "eig_sym", boom)
    code, _, err = run_cli(capsys, "spectrum", "-n", "2")
    assert code == 3 and "numerical failure" in err
