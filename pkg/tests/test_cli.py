"""Batch front end: subcommands, exit codes, file outputs, and run manifests."""

import csv
import hashlib
import json
import math

import pytest

from fractalconv.cli import (
    EXIT_BUDGET,
    EXIT_DEGENERATE,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    main,
)
from fractalconv.core import IFSSpec, bernoulli_spec, save_spec


@pytest.fixture()
def spec_file(tmp_path):
    path = tmp_path / "spec.json"
    save_spec(bernoulli_spec(0.6 + 0.3j), path)
    return str(path)


@pytest.fixture()
def uniform_file(tmp_path):
    path = tmp_path / "uniform.json"
    save_spec(bernoulli_spec(0.5), path)
    return str(path)


@pytest.fixture()
def bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps(
            {
                "lambda": [1.2, 0.0],
                "translations": [[-1.0, 0.0], [1.0, 0.0]],
                "weights": [0.5, 0.5],
            }
        )
    )
    return str(path)


def read_manifest(out_dir):
    return json.loads((out_dir / "manifest.json").read_text())


# ---------------------------------------------------------------------------
# exit codes


def test_validate_ok(tmp_path, spec_file, capsys):
    out = tmp_path / "out"
    assert main(["validate", "--spec", spec_file, "--out", str(out)]) == EXIT_OK
    payload = json.loads((out / "validate.json").read_text())
    assert payload["modulus"] == pytest.approx(abs(0.6 + 0.3j), rel=1e-12)
    assert payload["supercritical"] is False
    assert payload["warnings"] == []
    envelope = json.loads(capsys.readouterr().out)
    assert "validate.json" in envelope["files"]


def test_validate_rejects_expanding_ratio(tmp_path, bad_file, capsys):
    assert main(["validate", "--spec", bad_file]) == EXIT_VALIDATION
    assert "lambda" in capsys.readouterr().err


def test_missing_spec_file_is_validation_error(capsys):
    assert main(["validate", "--spec", "/nonexistent/spec.json"]) == EXIT_VALIDATION
    assert "spec" in capsys.readouterr().err


def test_unknown_flag_exits_usage(spec_file):
    with pytest.raises(SystemExit) as info:
        main(["validate", "--spec", spec_file, "--bogus"])
    assert info.value.code == EXIT_USAGE


def test_unknown_subcommand_exits_usage():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE


def test_budget_exhaustion_exits_three(tmp_path, capsys):
    path = tmp_path / "wide.json"
    save_spec(
        IFSSpec(
            lam=0.5 + 0.2j,
            translations=(0j, 1 + 0j, 2.3 + 0.4j, -1 + 1j),
            weights=(0.25,) * 4,
        ),
        path,
    )
    code = main(
        ["delta", "--spec", str(path), "--n", "9", "--mode", "brute", "--budget", "500"]
    )
    assert code == EXIT_BUDGET


def test_degenerate_window_exits_four(capsys):
    assert main(["ek-reconstruct", "--window", "1", "1", "1", "1"]) == EXIT_DEGENERATE


# ---------------------------------------------------------------------------
# value-bearing outputs


def test_fourier_eval_matches_closed_form(tmp_path, uniform_file):
    out = tmp_path / "out"
    code = main(
        ["fourier-eval", "--spec", uniform_file, "--xi", "0.1", "0", "--out", str(out)]
    )
    assert code == EXIT_OK
    closed_form = math.sin(0.4 * math.pi) / (0.4 * math.pi)
    rows = json.loads((out / "ft_values.json").read_text())
    assert rows[0]["value"][0] == pytest.approx(closed_form, abs=1e-8)
    with open(out / "ft_values.csv", newline="") as fh:
        table = list(csv.DictReader(fh))
    assert float(table[0]["value_re"]) == pytest.approx(closed_form, abs=1e-8)


def test_delta_both_modes_agree(tmp_path, spec_file):
    out = tmp_path / "out"
    code = main(
        ["delta", "--spec", spec_file, "--n", "7", "--mode", "both", "--out", str(out)]
    )
    assert code == EXIT_OK
    with open(out / "delta.csv", newline="") as fh:
        rows = {row["method"]: row for row in csv.DictReader(fh)}
    assert rows["brute"]["value"] == rows["pruned"]["value"]
    assert int(rows["pruned"]["nodes_expanded"]) < int(rows["brute"]["nodes_expanded"])


def test_concentration_outputs(tmp_path, spec_file):
    out = tmp_path / "out"
    code = main(
        ["concentration", "--spec", spec_file, "--n-max", "6", "--out", str(out)]
    )
    assert code == EXIT_OK
    with open(out / "concentration.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [row["n"] for row in rows] == [str(n) for n in range(1, 7)]
    meta = json.loads((out / "concentration.json").read_text())
    assert meta["classification"] == "no-concentration-evidence"
    assert (out / "concentration.png").exists()


def test_ek_seq_matches_library(tmp_path):
    from fractalconv.ek import ek_sequence

    out = tmp_path / "out"
    code = main(
        ["ek-seq", "--theta", "1.2", "0.5", "--t", "1", "0", "--n", "6", "--out", str(out)]
    )
    assert code == EXIT_OK
    with open(out / "ek_seq.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    seq = ek_sequence(1.2 + 0.5j, 1.0, 6)
    assert [int(r["K"]) for r in rows] == list(seq.K)
    assert [float(r["eps"]) for r in rows] == pytest.approx(list(seq.eps), abs=1e-15)


def test_ek_reconstruct_hand_checked(tmp_path):
    out = tmp_path / "out"
    code = main(["ek-reconstruct", "--window", "10", "12", "11.9", "8.28", "--out", str(out)])
    assert code == EXIT_OK
    data = json.loads((out / "reconstruct.json").read_text())
    assert data["theta"][0] == pytest.approx(1.2, abs=1e-12)
    assert data["theta"][1] == pytest.approx(0.5, abs=1e-12)
    assert data["y3"] == pytest.approx(20.35, abs=1e-12)


def test_ek_cover_with_explicit_constants(tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "ek-cover",
            "--b1", "1.1", "--b2", "1.3", "--eta", "0.1",
            "--n", "8",
            "--delta", "0",
            "--rho", "1.6e-5",
            "--m-branch", "4",
            "--c4", "10",
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    with open(out / "cover.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows and set(rows[0]) == {"re", "im", "radius", "N"}
    meta = json.loads((out / "cover_meta.json").read_text())
    assert meta["leaves"] >= len(rows)
    assert meta["N"] == 8
    assert meta["balls"] == len(rows)
    assert (out / "cover.png").exists()


def test_ek_u_ball(tmp_path):
    out = tmp_path / "out"
    code = main(
        [
            "ek-u",
            "--lam", "0.5", "0.25",
            "--k-pair", "3", "5",
            "--l-pair", "3", "5",
            "--n", "6",
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    data = json.loads((out / "reconstruct_u.json").read_text())
    assert data["center"][0] == pytest.approx(1.0, abs=1e-12)


def test_pisot_check(tmp_path):
    out = tmp_path / "out"
    code = main(["pisot-check", "--coeffs", "-1", "1", "0", "1", "--out", str(out)])
    assert code == EXIT_OK
    data = json.loads((out / "pisot_check.json").read_text())
    assert data["classification"] == "complex-pisot"
    assert data["theta_modulus"] == pytest.approx(1.2106078, abs=1e-6)


def test_pisot_scan(tmp_path):
    out = tmp_path / "out"
    code = main(
        ["pisot-scan", "--max-degree", "3", "--coeff-bound", "1", "--quiet", "--out", str(out)]
    )
    assert code == EXIT_OK
    with open(out / "pisot_scan.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert any(row["coeffs"] == "-1;1;0;1" for row in rows)


def test_ac_report_subcritical(tmp_path, uniform_file):
    out = tmp_path / "out"
    code = main(
        ["ac-report", "--spec", uniform_file, "--k", "3", "--out", str(out), "--no-figures"]
    )
    assert code == EXIT_OK
    data = json.loads((out / "ac_report.json").read_text())
    assert data["verdict"] == "inconclusive"
    assert data["s_value"] == pytest.approx(1.0, abs=1e-9)


def test_format_csv_only(tmp_path, spec_file):
    out = tmp_path / "out"
    code = main(
        ["delta", "--spec", spec_file, "--n", "5", "--format", "csv", "--out", str(out)]
    )
    assert code == EXIT_OK
    assert (out / "delta.csv").exists()
    assert not (out / "delta.json").exists()


def test_ac_report_writes_figures(tmp_path, uniform_file):
    out = tmp_path / "out"
    code = main(["ac-report", "--spec", uniform_file, "--k", "3", "--out", str(out)])
    assert code == EXIT_OK
    assert (out / "decay.png").exists()
    assert (out / "concentration.png").exists()


def test_gasket_symmetry_table(tmp_path):
    out = tmp_path / "out"
    code = main(["gasket", "--lam", "0.62", "--probes", "6", "--out", str(out)])
    assert code == EXIT_OK
    with open(out / "gasket.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    for row in rows:
        assert float(row["modulus_gap_sixth"]) <= 1e-12
        assert float(row["complex_gap_third"]) <= 1e-12


# ---------------------------------------------------------------------------
# rendering and figures


def test_render_writes_raster_and_figure(tmp_path, spec_file):
    out = tmp_path / "out"
    code = main(
        [
            "render",
            "--spec", spec_file,
            "--count", "2000",
            "--nx", "32",
            "--ny", "32",
            "--points-csv",
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    assert (out / "density.pgm").exists()
    assert (out / "density.json").exists()
    assert (out / "density.png").exists()
    assert (out / "points.csv").read_text().startswith("re,im\n")


def test_render_no_figures_skips_png(tmp_path, spec_file):
    out = tmp_path / "out"
    code = main(
        [
            "render",
            "--spec", spec_file,
            "--count", "1000",
            "--nx", "16",
            "--ny", "16",
            "--no-figures",
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    assert not (out / "density.png").exists()
    assert (out / "density.pgm").exists()


def test_decay_figure_and_table(tmp_path, uniform_file):
    out = tmp_path / "out"
    code = main(
        [
            "decay",
            "--spec", uniform_file,
            "--r-min", "4", "--r-max", "64", "--annuli", "4", "--samples", "16",
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    with open(out / "decay.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert set(rows[0]) == {"R", "sup", "log_R", "log_sup"}
    assert len(rows) == 4
    assert (out / "decay.png").exists()


# ---------------------------------------------------------------------------
# manifests and reproducibility


def test_manifest_digests_match_files(tmp_path, spec_file):
    out = tmp_path / "out"
    main(["delta", "--spec", spec_file, "--n", "5", "--out", str(out)])
    manifest = read_manifest(out)
    assert manifest["command"] == "delta"
    for entry in manifest["outputs"]:
        digest = hashlib.sha256((out / entry["path"]).read_bytes()).hexdigest()
        assert digest == entry["sha256"]
        assert (out / entry["path"]).stat().st_size == entry["bytes"]


def test_reruns_are_byte_identical(tmp_path, spec_file):
    out1 = tmp_path / "one"
    out2 = tmp_path / "two"
    for out in (out1, out2):
        main(
            [
                "render",
                "--spec", spec_file,
                "--count", "2000",
                "--nx", "16",
                "--ny", "16",
                "--seed", "5",
                "--no-figures",
                "--out", str(out),
            ]
        )
    for name in ("density.pgm", "density.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    # manifests agree on everything except wall-clock duration
    m1, m2 = read_manifest(out1), read_manifest(out2)
    for m in (m1, m2):
        m.pop("duration_seconds")
        m["parameters"].pop("out")
    assert m1 == m2


def test_seed_changes_render(tmp_path, spec_file):
    out1 = tmp_path / "one"
    out2 = tmp_path / "two"
    for seed, out in (("5", out1), ("6", out2)):
        main(
            [
                "render",
                "--spec", spec_file,
                "--count", "2000",
                "--nx", "16",
                "--ny", "16",
                "--seed", seed,
                "--no-figures",
                "--out", str(out),
            ]
        )
    assert (out1 / "density.pgm").read_bytes() != (out2 / "density.pgm").read_bytes()


def test_version_flag():
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
