import csv
import hashlib
import json
import shutil

import numpy as np
import pytest

from specergo import cli
from specergo.cli import RunConfig, main

from oracles import greedy_phase_pairs


def sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def run(*argv):
    assert main([str(a) for a in argv]) == 0


def test_generate_single_file(tmp_path):
    run("generate", "--kinds", "CUE", "--sizes", "8", "--ensemble-size", "3", "--out", tmp_path)
    files = sorted(tmp_path.glob("*.jsonl"))
    assert [f.name for f in files] == ["CUE_N8.jsonl"]
    lines = files[0].read_text().splitlines()
    assert len(lines) == 4
    assert all(len(json.loads(ln)["eigenvalues"]) == 8 for ln in lines[1:])


def test_generate_file_per_kind_and_size(tmp_path):
    run("generate", "--kinds", "CUE,COE,CSE", "--sizes", "2,3,4,5,6,7", "--ensemble-size", "2",
        "--out", tmp_path)
    assert len(list(tmp_path.glob("*.jsonl"))) == 18


def test_generate_byte_identical_across_workers(tmp_path):
    hashes = []
    for w in (1, 8):
        out = tmp_path / f"w{w}"
        run("generate", "--kinds", "COE,CSE", "--sizes", "4,6", "--ensemble-size", "5",
            "--chunk-size", "2", "--seed", "31", "--workers", w, "--out", out)
        hashes.append({p.name: sha(p) for p in out.glob("*.jsonl")})
    assert hashes[0] == hashes[1]


def test_env_workers_only_without_flag(monkeypatch, tmp_path):
    monkeypatch.setenv("SPECERGO_WORKERS", "4")
    args = cli.build_parser().parse_args(["generate", "--out", str(tmp_path)])
    assert cli.config_from_args(args).workers == 4
    args = cli.build_parser().parse_args(["generate", "--workers", "2"])
    assert cli.config_from_args(args).workers == 2


def test_config_file_and_flag_precedence(tmp_path):
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({"kinds": ["COE"], "sizes": [4, 8], "count_m": 7, "k_bins": 9}))
    args = cli.build_parser().parse_args(["analyze", "--config", str(conf), "--bins", "5"])
    cfg = cli.config_from_args(args)
    assert cfg.kinds == ("COE",) and cfg.sizes == (4, 8) and cfg.count_m == 7
    assert cfg.k_bins == 5


def test_config_roundtrip_via_header(tmp_path):
    run("generate", "--kinds", "CSE", "--sizes", "3", "--ensemble-size", "2", "--bins", "11",
        "--epsilon", "1e-9", "--seed", str(2**64 - 1), "--chunk-size", "1", "--out", tmp_path)
    head = json.loads((tmp_path / "CSE_N3.jsonl").read_text().splitlines()[0])
    cfg = RunConfig.from_dict(head["config"])
    assert cfg == RunConfig(("CSE",), (3,), 2, 11, 1e-9, 2**64 - 1, 1, None, ".")
    assert cfg.header() == head["config"]


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(sizes=(8, 8))
    with pytest.raises(ValueError):
        RunConfig(kinds=("GOE",))
    with pytest.raises(ValueError):
        RunConfig(epsilon=0)
    with pytest.raises(ValueError):
        RunConfig.from_dict({"bogus": 1})


@pytest.fixture
def cue_data(tmp_path):
    out = tmp_path / "data"
    run("generate", "--kinds", "CUE", "--sizes", "32,64,128", "--ensemble-size", "6",
        "--bins", "16", "--out", out)
    return out


def test_analyze_outputs(cue_data, tmp_path):
    res = tmp_path / "res"
    run("analyze", "--kinds", "CUE", "--sizes", "32,64,128", "--ensemble-size", "6",
        "--bins", "16", "--data", cue_data, "--out", res)
    rows = read_csv(res / "cascade.csv")
    assert rows[0] == ["kind", "N_a", "N_b", "d_se"]
    assert [r[:3] for r in rows[1:]] == [["CUE", "32", "64"], ["CUE", "64", "128"]]
    omega_rows = read_csv(res / "omega_CUE.csv")
    assert omega_rows[0] == ["kind", "N", "M", "K", "bin_center", "omega_value"]
    assert len(omega_rows) == 1 + 3 * 16
    js = json.loads((res / "cascade.json").read_text())
    assert [r["d_se"] for r in js["cascade"]] == [float(r[3]) for r in rows[1:]]
    assert js["config"]["sizes"] == [32, 64, 128]
    first = (res / "cascade.csv").read_bytes()
    run("analyze", "--kinds", "CUE", "--sizes", "32,64,128", "--ensemble-size", "6",
        "--bins", "16", "--data", cue_data, "--out", res)
    assert (res / "cascade.csv").read_bytes() == first


def test_analyze_identical_copies_give_zero(cue_data, tmp_path):
    shutil.copy(cue_data / "CUE_N32.jsonl", cue_data / "CUE_N33.jsonl")
    res = tmp_path / "res"
    run("analyze", "--kinds", "CUE", "--sizes", "32,33", "--ensemble-size", "6",
        "--data", cue_data, "--out", res)
    assert float(read_csv(res / "cascade.csv")[1][3]) == 0.0


def test_analyze_missing_dataset(tmp_path, capsys):
    assert main(["analyze", "--kinds", "CUE", "--sizes", "8,16", "--out", str(tmp_path)]) == 2
    assert "missing dataset" in capsys.readouterr().err


def test_analyze_rejects_wrong_m(cue_data, tmp_path):
    code = main(["analyze", "--kinds", "CUE", "--sizes", "32,64", "--ensemble-size", "7",
                 "--data", str(cue_data), "--out", str(tmp_path)])
    assert code == 2


def test_eigenplot(tmp_path):
    run("generate", "--kinds", "CUE,CSE", "--sizes", "6", "--ensemble-size", "3", "--out", tmp_path)
    out = tmp_path / "pts.csv"
    run("eigenplot", tmp_path / "CUE_N6.jsonl", "--member", "2", "--out", out)
    rows = read_csv(out)
    assert rows[0] == ["re", "im"]
    pts = np.array(rows[1:], dtype=float)
    assert np.max(np.abs(np.hypot(pts[:, 0], pts[:, 1]) - 1)) < 1e-8
    rec = json.loads((tmp_path / "CUE_N6.jsonl").read_text().splitlines()[3])
    assert pts.tolist() == rec["eigenvalues"]

    run("eigenplot", tmp_path / "CSE_N6.jsonl", "--out", out)
    pts = np.array(read_csv(out)[1:], dtype=float)
    dists = greedy_phase_pairs(np.arctan2(pts[:, 1], pts[:, 0]).tolist())
    assert len(dists) == 6 and max(dists) < 1e-6


def test_eigenplot_index_out_of_range(tmp_path):
    run("generate", "--kinds", "CUE", "--sizes", "4", "--ensemble-size", "2", "--out", tmp_path)
    assert main(["eigenplot", str(tmp_path / "CUE_N4.jsonl"), "--member", "2"]) == 2


def test_eigenplot_stdout(tmp_path, capsys):
    run("generate", "--kinds", "CUE", "--sizes", "4", "--ensemble-size", "1", "--out", tmp_path)
    capsys.readouterr()
    run("eigenplot", tmp_path / "CUE_N4.jsonl")
    assert capsys.readouterr().out.splitlines()[0] == "re,im"


def write_weights(path, w):
    np.savetxt(path, w, delimiter=",")
    return path


@pytest.mark.parametrize("w,expected", [
    (np.eye(3), [1.0, 1.0, 1.0]),
    (np.diag([1.0, 2.0]), [1.0, 4.0]),
])
def test_gram_simple(tmp_path, w, expected):
    run("gram", write_weights(tmp_path / "w.csv", w), "--bins", "4", "--out", tmp_path)
    js = json.loads((tmp_path / "gram_density.json").read_text())
    np.testing.assert_allclose(js["eigenvalues"], expected, rtol=1e-13)
    assert all(p == 0.0 for p in js["phases"])
    rows = read_csv(tmp_path / "gram_density.csv")
    assert rows[0] == ["bin_lower", "bin_upper", "density"] and len(rows) == 5


def test_gram_random_against_svd(tmp_path):
    w = np.random.default_rng(6).standard_normal((6, 4))
    run("gram", write_weights(tmp_path / "w.csv", w), "--rescale", "--out", tmp_path)
    js = json.loads((tmp_path / "gram_density.json").read_text())
    sv2 = np.sort(np.linalg.svd(w, compute_uv=False) ** 2)
    np.testing.assert_allclose(js["eigenvalues"], sv2 / sv2.max(), atol=1e-10)
    assert js["rescaled"] is True


def test_gram_bad_files(tmp_path):
    ragged = tmp_path / "r.csv"
    ragged.write_text("1,2\n3\n")
    assert main(["gram", str(ragged), "--out", str(tmp_path)]) == 2
    empty = tmp_path / "e.csv"
    empty.write_text("\n")
    assert main(["gram", str(empty), "--out", str(tmp_path)]) == 2
