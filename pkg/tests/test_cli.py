import csv
import json

import numpy as np
import pytest

from tritonsim import __version__
from tritonsim.cli import EXIT_CAP, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, load_config, main
from tritonsim.reference import TABLE1


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(l for l in fh if not l.startswith("#")))


def test_spectrum_default(capsys, spectrum):
    code, out, _ = run(["spectrum"], capsys)
    data = json.loads(out)
    assert code == EXIT_OK
    assert len(data["eigenvalues"]) == 16
    assert data["eigenvalues"] == sorted(data["eigenvalues"])
    assert data["ground_energy"] == pytest.approx(spectrum.ground_energy)
    assert data["version"] == __version__ and data["seed"] == 0
    assert data["config"]["max_iterations"] == 1500 and data["config"]["lambda"] == 4.0
    assert data["config"]["sigma"] == 0.001 and data["config"]["v"] == 28.0


def test_spectrum_zero_couplings(capsys):
    code, out, _ = run(["spectrum", "--t", 0, "--u", 0], capsys)
    assert json.loads(out)["eigenvalues"] == [0.0] * 16


def test_malformed_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"t": 1,,}')
    code, _, err = run(["spectrum", "--config", bad], capsys)
    assert code == EXIT_USAGE and "line 1" in err
    bad.write_text('{"warp": 3}')
    code, _, err = run(["spectrum", "--config", bad], capsys)
    assert code == EXIT_USAGE and "warp" in err
    bad.write_text('{"shots": "many"}')
    assert run(["spectrum", "--config", bad], capsys)[0] == EXIT_USAGE
    assert run(["spectrum", "--config", tmp_path / "missing.json"], capsys)[0] == EXIT_USAGE


def test_usage_errors(capsys):
    assert run(["nope"], capsys)[0] == EXIT_USAGE
    assert run([], capsys)[0] == EXIT_USAGE
    assert run(["spectrum", "--shots", 0], capsys)[0] == EXIT_USAGE
    assert run(["lcu-sweep", "--mapping", "unknown"], capsys)[0] == EXIT_USAGE
    assert run(["vqd", "--params-file", "table1:vqd"], capsys)[0] == EXIT_USAGE
    assert run(["vqe", "--params-file", "table1:other"], capsys)[0] == EXIT_USAGE


def test_config_file_and_override(tmp_path):
    cfg_file = tmp_path / "c.json"
    cfg_file.write_text(json.dumps({"lambda": 2.0, "shots": 50, "seed": 3}))
    cfg = load_config(str(cfg_file), {"shots": 70})
    assert cfg.lam == 2.0 and cfg.shots == 70 and cfg.seed == 3


def test_params_bypass(tmp_path, capsys, spectrum):
    g = tmp_path / "g.json"
    code, _, _ = run(["vqe", "--params-file", "table1:vqe", "-o", g], capsys)
    data = json.loads(g.read_text())
    assert code == EXIT_OK and data["termination"] == "bound"
    assert data["theta"] == list(TABLE1["vqe"])
    assert data["relative_error"] == pytest.approx(0.0113, abs=5e-4)
    # plain-text parameter files work too
    p = tmp_path / "p.txt"
    p.write_text(" ".join(map(str, TABLE1["vqe"])))
    run(["vqe", "--params-file", p, "-o", tmp_path / "g2.json"], capsys)
    assert json.loads((tmp_path / "g2.json").read_text())["energy"] == data["energy"]
    p.write_text("1 2 3")
    assert run(["vqe", "--params-file", p], capsys)[0] == EXIT_USAGE


def test_vqeac_vqd_overlap_via_bypass(tmp_path, capsys):
    run(["vqe", "--params-file", "table1:vqe", "-o", tmp_path / "g.json"], capsys)
    run(["vqd", "--ground", tmp_path / "g.json", "--params-file", "table1:vqd", "-o", tmp_path / "d.json"], capsys)
    run(["vqeac", "--ground", tmp_path / "g.json", "--params-file", "table1:vqeac", "-o", tmp_path / "a.json"],
        capsys)
    d = json.loads((tmp_path / "d.json").read_text())
    a = json.loads((tmp_path / "a.json").read_text())
    assert d["ground"]["sha256"] == a["ground"]["sha256"]
    from tritonsim.ansatz import AnsatzSpec, build_ansatz, prepare_state
    from tritonsim.simulator import inner_product
    c = build_ansatz(AnsatzSpec())
    ov = abs(inner_product(prepare_state(c, d["theta"]), prepare_state(c, a["theta"]))) ** 2
    assert ov == pytest.approx(0.98, abs=0.03)
    assert d["loss"] == pytest.approx(d["energy"] + 4.0 * d["overlap_with_ground"])


def test_vqe_deterministic_files(tmp_path, capsys):
    for k in (1, 2):
        code, _, _ = run(["vqe", "--seed", 5, "--max-iterations", 400, "-o", tmp_path / f"r{k}.json",
                          "--trace", tmp_path / f"t{k}.csv"], capsys)
    assert (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes()
    assert (tmp_path / "t1.csv").read_bytes() == (tmp_path / "t2.csv").read_bytes()
    rows = csv_rows(tmp_path / "t1.csv")
    assert len(rows) <= 400 and "x_15" in rows[0]


def test_vqd_lambda_zero_matches_ground_run(tmp_path, capsys):
    run(["vqe", "--seed", 2, "-o", tmp_path / "g.json"], capsys)
    code, out, _ = run(["vqd", "--seed", 2, "--lambda", 0, "--ground", tmp_path / "g.json"], capsys)
    assert json.loads(out)["energy"] == json.loads((tmp_path / "g.json").read_text())["energy"]


def test_iteration_cap_exit_code(capsys):
    code, out, err = run(["vqe", "--max-iterations", 10], capsys)
    assert code == EXIT_CAP
    assert json.loads(out)["termination"] == "max_iterations"


def test_lcu_single_point_identity_dominant(capsys):
    code, out, err = run(["lcu-sweep", "--theta-points", 1, "--theta-max", 0, "--alpha0", 10, "--validate"], capsys)
    rows = list(csv.DictReader(l for l in out.splitlines() if not l.startswith("#")))
    assert code == EXIT_OK
    assert float(rows[0]["p_transition"]) == 0.0
    assert "argmax" in err


def test_lcu_sweep3d_slice_equals_planar(tmp_path, capsys):
    common = ["--theta-points", 6, "--shots", 800, "--seed", 4]
    run(["lcu-sweep", *common, "-o", tmp_path / "p.csv"], capsys)
    run(["lcu-sweep3d", *common, "--phi-points", 3, "-o", tmp_path / "g.csv"], capsys)
    planar = csv_rows(tmp_path / "p.csv")
    grid = [r for r in csv_rows(tmp_path / "g.csv") if float(r["phi_rad"]) == 0.0]
    assert planar == grid and len(grid) == 6


def test_lcu_sweep_provenance(tmp_path, capsys):
    run(["vqe", "--params-file", "table1:vqe", "-o", tmp_path / "g.json"], capsys)
    code, out, _ = run(["lcu-sweep", "--theta-points", 2, "--shots", 10, "--ground", tmp_path / "g.json",
                        "--excited", "table1:vqeac"], capsys)
    header = [l for l in out.splitlines() if l.startswith("#")]
    assert any("sha256" in l for l in header) and any("table1:vqeac" in l for l in header)


def test_lcu_validate_flags_mismatch(tmp_path, capsys):
    run(["lcu-sweep", "--theta-points", 4, "--shots", 500, "-o", tmp_path / "s.csv"], capsys)
    assert run(["validate", tmp_path / "s.csv"], capsys)[0] == EXIT_OK
    text = (tmp_path / "s.csv").read_text().splitlines()
    # corrupt one row: claim every shot succeeded
    head = [l for l in text if l.startswith("#")]
    rows = list(csv.DictReader(l for l in text if not l.startswith("#")))
    rows[1]["successes"] = rows[1]["shots"]
    with open(tmp_path / "bad.csv", "w", newline="") as fh:
        fh.write("\n".join(head) + "\n")
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    code, out, _ = run(["validate", tmp_path / "bad.csv"], capsys)
    assert code == EXIT_VALIDATION and json.loads(out)["ok"] is False


def test_validate_results(tmp_path, capsys):
    run(["spectrum", "-o", tmp_path / "s.json"], capsys)
    run(["vqe", "--params-file", "table1:vqe", "-o", tmp_path / "g.json"], capsys)
    code, out, _ = run(["validate", tmp_path / "s.json", tmp_path / "g.json"], capsys)
    assert code == EXIT_OK and json.loads(out)["ok"]
    data = json.loads((tmp_path / "g.json").read_text())
    data["energy"] += 0.1
    (tmp_path / "g.json").write_text(json.dumps(data))
    assert run(["validate", tmp_path / "g.json"], capsys)[0] == EXIT_VALIDATION


def test_lambda_sweep_output(tmp_path, capsys):
    code, out, err = run(["lambda-sweep", "--ground", "table1:vqe", "--lambda-points", 3,
                          "--max-iterations", 150], capsys)
    rows = list(csv.DictReader(l for l in out.splitlines() if not l.startswith("#")))
    assert code == EXIT_OK and [float(r["lambda"]) for r in rows][0] == 0.0
    assert len(rows) == 3 and "crossover" in err


def test_mc_error_sigma_zero(capsys):
    code, out, _ = run(["mc-error", "--params-file", "table1:vqe", "--sigma", 0, "--mc-samples", 20], capsys)
    rows = list(csv.DictReader(l for l in out.splitlines() if not l.startswith("#")))
    assert code == EXIT_OK and len(rows) == 20
    assert len({r["energy"] for r in rows}) == 1
    assert run(["mc-error"], capsys)[0] == EXIT_USAGE
