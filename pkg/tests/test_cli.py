import json

import pytest

from jetcohom.cli import main, make_config, parse_config_file
from jetcohom.report import (
    RunConfig,
    cmd_compute,
    cmd_predict,
    exit_code_for,
    serialize_report,
)


def _betti(report):
    return {(c["p"], c["k"]): c["harmonic_dim"] for c in report["cells"]}


def test_a1_compute_betti_table(a1_report):
    betti = _betti(a1_report)
    expected_nonzero = {(0, 0): 1, (1, 1): 3, (2, 3): 5, (3, 6): 7}
    for cell, dim in betti.items():
        assert dim == expected_nonzero.get(cell, 0)
    assert all(a1_report["matchVerdict"].values())
    assert exit_code_for(a1_report) == 0


def test_a2_compute_matches_predictions(a2_report):
    betti = _betti(a2_report)
    assert betti[(0, 0)] == 1 and betti[(1, 1)] == 8 and betti[(2, 2)] == 20
    assert sum(betti.values()) == 29
    assert all(a2_report["matchVerdict"].values())
    # two distinct dim-10 summands at (2,2)
    cell22 = next(c for c in a2_report["cells"] if (c["p"], c["k"]) == (2, 2))
    assert sorted(s["dim"] for s in cell22["harmonic"]) == [8, 10, 10] or sorted(
        s["dim"] for s in cell22["harmonic"]
    ) == [10, 10]
    assert a2_report["exact_suite"]["multiplicity_one"]["pass"]


def test_harmonic_energy_concentration(a1_report, a2_report):
    # observed A1/A2 pattern: at fixed degree the harmonic dimension is
    # nonzero for at most one energy in the computed range
    for report in (a1_report, a2_report):
        per_degree = {}
        for cell in report["cells"]:
            if cell["harmonic_dim"]:
                per_degree.setdefault(cell["p"], []).append(cell["k"])
        assert all(len(ks) == 1 for ks in per_degree.values())


def test_degree_zero_config():
    report = cmd_compute(RunConfig(series="A", rank=1, maxDegree=0, maxEnergy=0))
    assert _betti(report) == {(0, 0): 1}
    assert exit_code_for(report) == 0


def test_non_simply_laced_end_to_end():
    report = cmd_compute(RunConfig(series="B", rank=2, maxDegree=1, maxEnergy=2))
    betti = _betti(report)
    assert betti[(1, 1)] == 10 and betti[(1, 2)] == 0
    assert all(report["matchVerdict"].values())
    assert exit_code_for(report) == 0


def test_predict_report(a1_report):
    report = cmd_predict(RunConfig(series="A", rank=1, maxDegree=3))
    dims = {p: [i["dim"] for i in irreps] for p, irreps in report["predictions"].items()}
    assert dims == {"0": [1], "1": [3], "2": [5], "3": [7]}
    energies = {p: [i["energy"] for i in irreps] for p, irreps in report["predictions"].items()}
    assert energies == {"0": [0], "1": [1], "2": [3], "3": [6]}


def test_report_is_byte_deterministic():
    cfg = RunConfig(series="A", rank=1, maxDegree=2, maxEnergy=3)
    r1 = serialize_report(cmd_compute(cfg), "json")
    r2 = serialize_report(cmd_compute(cfg), "json")
    assert r1 == r2
    assert "timing" in json.loads(r1) and json.loads(r1)["timing"] is None


def test_serializers(a1_report):
    csv = serialize_report(a1_report, "csv")
    lines = csv.strip().splitlines()
    assert lines[0] == "p,k,dim,rank_d,harmonic_dim,predicted_dim,match"
    assert len(lines) == 1 + 4 * 7
    assert "3,6,37,12,7,7,true" in lines

    text = serialize_report(a1_report, "text")
    assert "match" in text and "V(-3)[7]" in text

    js = json.loads(serialize_report(a1_report, "json"))
    assert js["schema_version"] == 1
    assert js["algebra"]["name"] == "A1"


def test_exit_codes_for_doctored_reports(a1_report):
    bad = json.loads(serialize_report(a1_report, "json"))
    bad["matchVerdict"]["1"] = False
    assert exit_code_for(bad) == 2

    ident = {
        "kind": "verify-identities",
        "identity_suite": [
            {"identity": "x", "pass": False, "skipped": False, "maxAbsError": 1.0},
        ],
    }
    assert exit_code_for(ident) == 3
    ident["identity_suite"][0]["skipped"] = True
    assert exit_code_for(ident) == 0


def test_cli_main_end_to_end(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main([
        "compute", "--series", "A", "--rank", "1",
        "--max-degree", "1", "--max-energy", "2",
        "--format", "json", "--output", str(out),
    ])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["algebra"]["name"] == "A1"

    code = main(["predict", "--series", "A", "--rank", "2", "--max-degree", "1", "--format", "text"])
    assert code == 0
    captured = capsys.readouterr().out
    assert "H^1" in captured


def test_cli_verify_identities_exit(capsys):
    code = main([
        "verify-identities", "--series", "A", "--rank", "1",
        "--kmin", "-2", "--kmax", "3", "--guard", "1", "--tolerance", "1e-9",
        "--format", "json",
    ])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    names = {v["identity"] for v in report["identity_suite"]}
    assert "laplacian_closed_form" in names
    assert all(v["pass"] or v["skipped"] for v in report["identity_suite"])


def test_cli_rejects_bad_config(capsys):
    assert main(["compute", "--series", "A", "--rank", "0"]) == 1
    assert main(["compute", "--series", "Z", "--rank", "2"]) == 1


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("series = A\nrank = 1\nmaxDegree = 2\nmaxEnergy = 3\noutputFormat = csv\n")
    parsed = parse_config_file(str(cfg))
    assert parsed == {"series": "A", "rank": 1, "maxDegree": 2, "maxEnergy": 3, "outputFormat": "csv"}

    class Args:
        config = str(cfg)
        series = None
        rank = None
        maxDegree = 3  # flag overrides the file
        maxEnergy = None
        kMin = None
        kMax = None
        guard = None
        tolerance = None
        cacheDir = None
        outputFormat = None
        timing = False

    rc = make_config(Args())
    assert rc.maxDegree == 3 and rc.maxEnergy == 3 and rc.outputFormat == "csv"

    bad = tmp_path / "bad.cfg"
    bad.write_text("unknown = 1\n")
    with pytest.raises(ValueError):
        parse_config_file(str(bad))


def test_cache_roundtrip_and_corruption(tmp_path, capsys):
    cache = tmp_path / "cache"
    cfg = RunConfig(series="A", rank=1, maxDegree=1, maxEnergy=2, cacheDir=str(cache))
    r1 = cmd_compute(cfg)
    files = sorted(cache.glob("*.json"))
    assert len(files) == 6  # (p,k) cells for p<=1, k<=2

    # cached run reproduces the same report
    r2 = cmd_compute(cfg)
    assert serialize_report(r1, "json") == serialize_report(r2, "json")

    # corruption: invalid json triggers recompute with a warning
    files[0].write_text("{broken")
    r3 = cmd_compute(cfg)
    assert serialize_report(r1, "json") == serialize_report(r3, "json")

    # stale algebra hash triggers recompute
    record = json.loads(files[1].read_text())
    record["algebra_hash"] = "0" * 64
    files[1].write_text(json.dumps(record))
    r4 = cmd_compute(cfg)
    assert serialize_report(r1, "json") == serialize_report(r4, "json")


def test_cache_env_override(tmp_path, monkeypatch, capsys):
    env_cache = tmp_path / "envcache"
    monkeypatch.setenv("JETCOHOM_CACHE_DIR", str(env_cache))
    cmd_compute(RunConfig(series="A", rank=1, maxDegree=0, maxEnergy=1))
    assert env_cache.exists() and list(env_cache.glob("*.json"))

    code = main(["show-cache"])
    assert code == 0
    listing = json.loads(capsys.readouterr().out)
    assert listing["cacheDir"] == str(env_cache)
    assert all(e["valid"] for e in listing["entries"])


def test_cached_block_serialization(tmp_path):
    cache = tmp_path / "cache"
    cmd_compute(RunConfig(series="A", rank=1, maxDegree=1, maxEnergy=1, cacheDir=str(cache)))
    record = json.loads(next(iter(sorted(cache.glob("*_p1_k1.json")))).read_text())
    block = record["block"]
    assert block["dim_in"] == 3 and len(block["monomials_in"]) == 3
    assert all(len(t) == 3 for t in block["triples"])
