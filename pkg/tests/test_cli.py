import csv
import json

import pytest

from glfq import cli


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("GLFQ_CACHE_DIR", str(tmp_path / "kernels"))


def run(args):
    return cli.main(args)


def test_table_gl2_json(tmp_path):
    out = tmp_path / "o"
    assert run(["table", "--gl2", "--q", "3", "--out", str(out)]) == 0
    obj = json.loads((out / "table-gl2-q3.json").read_text())
    assert len(obj["rows"]) == 8


def test_table_oracle_gl4(tmp_path):
    out = tmp_path / "o"
    assert run(["table", "--oracle", "--n", "4", "--q", "2",
                "--out", str(out)]) == 0
    obj = json.loads((out / "table-oracle-n4-q2.json").read_text())
    assert len(obj["rows"]) == 14


def test_table_invalid_q(tmp_path):
    assert run(["table", "--gl2", "--q", "1", "--out", str(tmp_path)]) == 2
    assert run(["table", "--gl2", "--q", "6", "--out", str(tmp_path)]) == 2
    assert not list(tmp_path.iterdir())  # no partial output


def test_table_classes_csv(tmp_path):
    out = tmp_path / "o"
    assert run(["table", "--classes", "--n", "2", "--q", "3",
                "--out", str(out)]) == 0
    rows = list(csv.reader((out / "classes-gl-class-n2-q3.csv").open()))
    assert rows[0] == ["label", "class_size", "representative"]
    assert len(rows) - 1 == 8
    assert sum(int(r[1]) for r in rows[1:]) == 48


def test_verify_exit_codes(tmp_path):
    out = tmp_path / "o"
    assert run(["verify", "--n", "1", "--q", "3", "--theta0", "1",
                "--out", str(out)]) == 0
    rep = json.loads((out / "verify-n1-q3.json").read_text())
    assert all(i["pass"] for i in rep["identities"])
    assert {"name", "pass", "max_abs_deviation", "elapsed_ms"} <= set(
        rep["identities"][0])
    assert run(["verify", "--n", "2", "--q", "2", "--theta0", "1",
                "--out", str(out)]) == 0


def test_verify_no_admissible_theta(tmp_path):
    out = tmp_path / "o"
    assert run(["verify", "--n", "1", "--q", "2", "--out", str(out)]) == 2
    rep = json.loads((out / "verify-n1-q2.json").read_text())
    assert rep["admissible"] is False
    assert rep["reason"] == "no admissible theta0"


def test_jacquet_sp2_row(tmp_path):
    out = tmp_path / "o"
    assert run(["jacquet", "--n", "2", "--q", "2", "--theta0", "1",
                "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.reader((out / "jacquet-n2-q2-t1.csv").open()))[1:]
    sp_rows = [r for r in rows if r[0].startswith("Sp_2")]
    nz = [r for r in sp_rows if int(r[2]) != 0]
    assert len(nz) == 1 and int(nz[0][2]) == 1
    assert nz[0][1] == "det^0"  # the one-dimensional constituent


def test_jacquet_n1_sp2_zero(tmp_path):
    out = tmp_path / "o"
    assert run(["jacquet", "--n", "1", "--q", "3", "--theta0", "1",
                "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.reader((out / "jacquet-n1-q3-t1.csv").open()))[1:]
    sp_rows = [r for r in rows if r[0].startswith("Sp_2")]
    assert sp_rows and all(int(r[2]) == 0 for r in sp_rows)


def test_jacquet_sum_consistency(tmp_path):
    out = tmp_path / "o"
    assert run(["jacquet", "--n", "2", "--q", "3", "--theta0", "1",
                "--out", str(out)]) == 0
    obj = json.loads((out / "jacquet-n2-q3-t1.json").read_text())
    dec = obj["decompositions"]
    pp = next(v for k, v in dec.items() if k.startswith("pi x pi"))
    st = next(v for k, v in dec.items() if k.startswith("St_2"))
    sp = next(v for k, v in dec.items() if k.startswith("Sp_2"))
    assert all(a == b + c for a, b, c in zip(pp, st, sp))
    assert all(m >= 0 for m in st + sp)


def test_fourier_outputs(tmp_path):
    out = tmp_path / "o"
    assert run(["fourier", "--n", "2", "--q", "3", "--format", "csv",
                "--out", str(out)]) == 0
    spec = list(csv.reader((out / "spectra-n2-q3.csv").open()))[1:]
    funcs = {r[0] for r in spec}
    assert "cone" in funcs
    assert any(f.startswith("nilpotent") for f in funcs)
    assert any(f.startswith("semisimple") for f in funcs)
    pars = list(csv.reader((out / "parseval-n2-q3.csv").open()))[1:]
    assert all(r[3] == "pass" for r in pars)


def test_fourier_single_orbit_and_cone(tmp_path):
    out = tmp_path / "o"
    assert run(["fourier", "--n", "2", "--q", "3", "--orbit", "nilpotent:[2]",
                "--out", str(out)]) == 0
    obj = json.loads((out / "spectra-n2-q3.json").read_text())
    # one spectrum row per msd-orbit of M_2(F_3)
    assert len(obj["spectra"]) == 12
    out2 = tmp_path / "o2"
    assert run(["fourier", "--n", "2", "--q", "3", "--cone",
                "--out", str(out2)]) == 0
    obj2 = json.loads((out2 / "spectra-n2-q3.json").read_text())
    zero_rows = [s for s in obj2["spectra"] if s["orbit_size"] == 1]
    assert any(abs(s["re"] - 9) < 1e-9 for s in zero_rows)  # fhat(0) = cone mass


def test_fourier_budget_exit(tmp_path):
    assert run(["fourier", "--n", "4", "--q", "5", "--out", str(tmp_path)]) == 3


def test_fourier_bad_orbit_spec(tmp_path):
    assert run(["fourier", "--n", "2", "--q", "3", "--orbit", "nilpotent:[3]",
                "--out", str(tmp_path)]) == 2
    assert run(["fourier", "--n", "2", "--q", "3", "--orbit", "junk",
                "--out", str(tmp_path)]) == 2


def test_determinism_across_thread_counts(tmp_path):
    pairs = [
        ["table", "--gl2", "--q", "3"],
        ["jacquet", "--n", "2", "--q", "2", "--theta0", "1", "--format", "csv"],
        ["fourier", "--n", "2", "--q", "2", "--format", "csv"],
    ]
    for base in pairs:
        outs = []
        for t in ("1", "8"):
            out = tmp_path / f"t{t}-{base[0]}"
            assert run(base + ["--threads", t, "--out", str(out)]) == 0
            outs.append(sorted(p for p in out.iterdir()))
        for a, b in zip(*outs):
            assert a.name == b.name
            assert a.read_bytes() == b.read_bytes(), a.name


def test_config_file_with_flag_override(tmp_path):
    cfgfile = tmp_path / "run.json"
    cfgfile.write_text(json.dumps(
        {"q": 3, "n": 1, "theta0": 1, "out": str(tmp_path / "cfg-out"),
         "format": "json"}))
    assert run(["verify", "--config", str(cfgfile)]) == 0
    assert (tmp_path / "cfg-out" / "verify-n1-q3.json").exists()
    # flag overrides config: q=2, n=1 has no admissible theta0 at all
    assert run(["verify", "--config", str(cfgfile), "--q", "2",
                "--theta0", "0"]) == 2


def test_missing_q_rejected():
    assert run(["table", "--gl2"]) == 2
