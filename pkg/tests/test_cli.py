import csv
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from radial_mra import cli
from radial_mra.mra import from_json
from radial_mra.plotting import mask_rectangles

SMALL_HYPERGROUP = ["--mc-samples", "2000", "--hist-samples", "20000"]


def run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, out


def test_report_schema(tmp_path):
    code, out = run(tmp_path, "verify-core")
    assert code == 0
    doc = json.loads((out / "verify-core-n2.json").read_text())
    assert set(doc) == {"suite", "rank", "checks"}
    assert doc["suite"] == "verify-core" and doc["rank"] == 2
    for check in doc["checks"]:
        assert set(check) == {"name", "paper_ref", "value", "tolerance", "pass"}
        assert check["paper_ref"]
        assert check["pass"] is True


def test_csv_one_row_per_check(tmp_path):
    code, out = run(tmp_path, "verify-core")
    doc = json.loads((out / "verify-core-n2.json").read_text())
    with open(out / "verify-core-n2.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["index", "value"]
    assert [r[0] for r in rows[1:]] == [c["name"] for c in doc["checks"]]
    assert (out / "verify-core-n2.csv").read_bytes().count(b"\r\n") == len(rows)


def test_rerun_byte_identical(tmp_path):
    args = ["verify-hypergroup", "--rank", "2", "--seed", "7", *SMALL_HYPERGROUP,
            "--tol", "histogram_sup_sigma=6", "--tol", "product_formula_mc_sigma=5"]
    code_a, a = run(tmp_path, *args, name="a")
    code_b, b = run(tmp_path, *args, name="b")
    assert code_a == code_b
    for f in ("verify-hypergroup-n2.json", "verify-hypergroup-n2.csv"):
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_seed_changes_report(tmp_path):
    _, a = run(tmp_path, "verify-hypergroup", "--seed", "1", *SMALL_HYPERGROUP, name="a")
    _, b = run(tmp_path, "verify-hypergroup", "--seed", "2", *SMALL_HYPERGROUP, name="b")
    assert (a / "verify-hypergroup-n2.json").read_bytes() != (b / "verify-hypergroup-n2.json").read_bytes()


@pytest.mark.parametrize("args", [
    ["verify-core", "--rank", "1"],
    ["verify-core", "--tol", "bessel_schur_residual=0"],
    ["verify-core", "--tol", "bessel_schur_residual"],
    ["verify-core", "--tol", "no_such_check=1"],
    ["verify-mra", "--family", "haar"],
    ["decompose", "--levels", "2", "-3"],
    ["plot-supports", "--rank", "3"],
    ["plot-supports", "--cells", "30"],
    ["verify-hypergroup", "--mc-samples", "0"],
])
def test_config_errors_exit_2(tmp_path, args):
    code, out = run(tmp_path, *args)
    assert code == 2
    assert not out.exists()


def test_unknown_flag_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify-core", "--bogus"])
    assert exc.value.code == 2


def test_config_file_and_override(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('rank = 3\nseed = 4\n[tol]\nbessel_schur_residual = 1e-8\n')
    args = cli.build_parser().parse_args(["verify-core", "--config", str(path), "--seed", "5"])
    cfg = cli.load_config(args)
    assert (cfg.rank, cfg.seed, cfg.tol) == (3, 5, {"bessel_schur_residual": 1e-8})


@pytest.mark.parametrize("text", ["colour = 1\n", "rank = 'two'\n", "[tol]\nx = -1\n", "rank = \n"])
def test_bad_config_file(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(text)
    code, _ = run(tmp_path, "verify-core", "--config", str(path))
    assert code == 2


def test_failing_check_exits_1(tmp_path):
    code, out = run(tmp_path, "build-shannon", "--normalization", "literal")
    assert code == 1
    doc = json.loads((out / "build-shannon-literal-n2.json").read_text())
    failed = {c["name"] for c in doc["checks"] if not c["pass"]}
    assert "periodization_constant_one" in failed


def test_internal_error_exits_3(tmp_path, monkeypatch):
    def boom(cfg):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.suites.SUITES, "verify-core", boom)
    code, _ = run(tmp_path, "verify-core")
    assert code == 3


def test_plot_supports(tmp_path):
    code, out = run(tmp_path, "plot-supports")
    assert code == 0
    for i in range(4):
        root = ET.parse(out / f"supports-Q{i}.svg").getroot()
        shaded = [r for r in root.iter("{http://www.w3.org/2000/svg}rect") if r.get("fill") != "white"]
        area = sum(float(r.get("width")) * float(r.get("height")) for r in shaded)
        # each panel covers a quarter of the 320 x 320 square
        assert area == pytest.approx(320 * 320 / 4)
    with open(out / "supports-areas.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    assert [float(v) for _, v in rows] == pytest.approx([np.pi**2] * 4, abs=1e-12)


def test_central_panel_is_centered_square(tmp_path):
    _, out = run(tmp_path, "plot-supports", "--cells", "8")
    root = ET.parse(out / "supports-Q0.svg").getroot()
    shaded = [r for r in root.iter("{http://www.w3.org/2000/svg}rect") if r.get("fill") != "white"]
    assert [(r.get("x"), r.get("y"), r.get("width"), r.get("height")) for r in shaded] == [("120", "120", "160", "160")]


def test_mask_rectangles_cover_exactly():
    rng = np.random.default_rng(0)
    mask = rng.random((12, 9)) < 0.4
    got = np.zeros_like(mask, dtype=int)
    for x, y, w, h in mask_rectangles(mask):
        got[x:x + w, y:y + h] += 1
    assert np.array_equal(got, mask.astype(int))


def test_build_shannon_exports_family(tmp_path):
    code, out = run(tmp_path, "build-shannon", "--freq-nodes", "8")
    assert code == 0
    fam = from_json((out / "shannon-n2.family.json").read_text())
    assert fam.rank == 2 and set(fam.frequency) == {"phi", "psi1", "psi2", "psi3"}
    assert fam.calibration_constant == pytest.approx(np.sqrt(2))


def test_build_from_classical_meyer(tmp_path):
    code, out = run(tmp_path, "build-from-classical", "--profile", "meyer", "--freq-nodes", "8")
    assert code == 0
    assert (out / "meyer-completed-n2.family.json").exists()
    assert json.loads((out / "build-from-classical-meyer-n2.json").read_text())["suite"] == "build-from-classical"


def test_decompose_tables(tmp_path):
    code, out = run(tmp_path, "decompose", "--lam-max", "3")
    assert code == 0
    with open(out / "decompose-n2-bump-projections.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    ratios = [float(v) for _, v in rows]
    assert ratios[0] <= 1e-3 and all(a <= b for a, b in zip(ratios, ratios[1:]))
    with open(out / "decompose-n2-band-coefficients.csv", newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    assert rows and all(complex(v) is not None for _, v in rows)
