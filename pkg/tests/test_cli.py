import csv
import io
import json

import pytest

from leotco.cli import main


def _read_csv(path):
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def _comments(path):
    return {l[2:].split(":", 1)[0]: l.split(":", 1)[1].strip() for l in path.read_text().splitlines() if l.startswith("# ")}


def test_simulate_stdout(capsys):
    assert main(["simulate", "--constellation", "starlink", "--satellites", "1000",
                 "--iterations", "100", "--seed", "42", "--workers", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert 171.9 <= doc["summary"]["metrics"]["fspl_db"]["mean"] <= 172.9
    assert doc["provenance"]["master_seed"] == 42
    assert set(doc["provenance"]["asset_versions"]) == {"starlink", "modcod"}
    assert len(doc["provenance"]["config_hash"]) == 16


def test_simulate_files_byte_identical(tmp_path):
    args = ["simulate", "--constellation", "kuiper", "--iterations", "60", "--seed", "9"]
    assert main(args + ["--workers", "1", "--output-dir", str(tmp_path / "a")]) == 0
    assert main(args + ["--workers", "1", "--output-dir", str(tmp_path / "b")]) == 0
    assert main(args + ["--workers", "4", "--output-dir", str(tmp_path / "c")]) == 0
    for name in ("summary.json", "draws.csv"):
        a = (tmp_path / "a" / name).read_bytes()
        assert a == (tmp_path / "b" / name).read_bytes() == (tmp_path / "c" / name).read_bytes()
    assert (tmp_path / "a" / "run.log").exists()
    assert not list((tmp_path / "a").glob(".*tmp"))
    draws = _read_csv(tmp_path / "a" / "draws.csv")
    assert len(draws) == 60
    assert _comments(tmp_path / "a" / "draws.csv")["master_seed"] == "9"


def test_simulate_csv_summary(tmp_path):
    assert main(["simulate", "--iterations", "5", "--format", "csv", "--output-dir", str(tmp_path)]) == 0
    (row,) = _read_csv(tmp_path / "summary.csv")
    assert row["constellation"] == "starlink" and row["satellite_count"] == "5000"
    assert "config_hash" in _comments(tmp_path / "summary.csv")


def test_sweep_size(tmp_path):
    assert main(["sweep-size", "--constellation", "oneweb", "--counts", "360,720", "--iterations", "20",
                 "--output-dir", str(tmp_path)]) == 0
    rows = _read_csv(tmp_path / "sweep_size.csv")
    assert [r["satellite_count"] for r in rows] == ["360", "720"]
    assert float(rows[1]["coverage_area_km2"]) == pytest.approx(708_433, abs=0.5)
    assert float(rows[1]["fspl_db_mean"]) < float(rows[0]["fspl_db_mean"])


def test_sweep_size_range(capsys):
    assert main(["sweep-size", "--from", "100", "--to", "300", "--step", "100", "--iterations", "3",
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [s["satellite_count"] for s in doc["series"]] == [100, 200, 300]


def test_sweep_density_outage(tmp_path):
    assert main(["sweep-density", "--from", "0.05", "--to", "1.0", "--steps", "20", "--other-losses", "90",
                 "--iterations", "10", "--output-dir", str(tmp_path)]) == 0
    rows = _read_csv(tmp_path / "sweep_density.csv")
    assert len(rows) == 21
    assert float(rows[0]["subscriber_density"]) == 0.05 and float(rows[-1]["subscriber_density"]) == 1.0
    assert all(float(r["capacity_per_user_mbps"]) == 0.0 for r in rows)


def test_sweep_density_pinned(tmp_path):
    assert main(["sweep-density", "--constellation", "starlink", "--pin-capacity", "starlink=11720",
                 "--from", "0.1", "--to", "5", "--steps", "1", "--output-dir", str(tmp_path)]) == 0
    rows = _read_csv(tmp_path / "sweep_density.csv")
    assert float(rows[0]["capacity_per_user_mbps"]) == pytest.approx(22.98, abs=0.01)
    assert float(rows[1]["capacity_per_user_mbps"]) == pytest.approx(0.4596, abs=1e-3)


def test_cost_report(capsys):
    assert main(["cost", "--constellation", "oneweb"]) == 0
    doc = json.loads(capsys.readouterr().out)
    (rep,) = doc["constellations"]
    assert rep["capex_total_musd"] == pytest.approx(1795.2)
    assert len(rep["discounted_terms"]) == 6
    assert rep["asset_npv_musd"] == pytest.approx(
        rep["capex_per_satellite_musd"] + sum(t["discounted_opex_musd"] for t in rep["discounted_terms"])
    )


def test_cost_csv_all(tmp_path):
    assert main(["cost", "--format", "csv", "--output-dir", str(tmp_path)]) == 0
    rows = _read_csv(tmp_path / "cost.csv")
    assert len(rows) == 18


def test_assess(tmp_path):
    regions = tmp_path / "regions.csv"
    regions.write_text("region_id,country_code,level,area_km2,population\nA,KEN,1,100,0\nB,KEN,1,100,500\n")
    out = tmp_path / "out"
    assert main(["assess", "--regions", str(regions), "--constellation", "starlink",
                 "--pin-capacity", "starlink=11720", "--output-dir", str(out)]) == 0
    rows = _read_csv(out / "assessment.csv")
    assert rows[0]["capacity_per_user_mbps"] == "uncontended" and rows[0]["suitable"] == "true"
    assert float(rows[1]["capacity_per_user_mbps"]) == pytest.approx(45.96, abs=0.01)
    header = [l for l in (out / "assessment.csv").read_text().splitlines() if not l.startswith("#")][0]
    assert header == "region_id,density,decile_band,constellation,capacity_per_user_mbps,cost_per_user_usd,suitable"


def test_assess_data_error_exit_3(tmp_path, capsys):
    regions = tmp_path / "regions.csv"
    regions.write_text("region_id,country_code,level,area_km2,population\nA,KEN,1,0,10\n")
    assert main(["assess", "--regions", str(regions), "--pin-capacity", "starlink=1",
                 "--constellation", "starlink"]) == 3
    assert "row 2" in capsys.readouterr().err
    assert main(["assess", "--regions", str(regions), "--pin-capacity", "starlink=1",
                 "--constellation", "starlink", "--skip-invalid"]) == 0


def test_config_error_exit_2(tmp_path, capsys):
    assert main(["simulate", "--constellation", "no-such-thing"]) == 2
    bad = tmp_path / "c.json"
    main(["validate", "--dump-assets", str(tmp_path / "assets")])
    doc = json.loads((tmp_path / "assets" / "starlink.json").read_text())
    del doc["design"]["altitude_km"]
    bad.write_text(json.dumps(doc))
    capsys.readouterr()
    assert main(["simulate", "--constellation", str(bad)]) == 2
    assert "altitude_km" in capsys.readouterr().err
    assert main(["simulate", "--iterations", "0"]) == 2


def test_argparse_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--format", "xml"])
    assert exc.value.code == 2


def test_validate_and_dump(tmp_path, capsys):
    assert main(["validate", "--dump-assets", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert (tmp_path / "kuiper.json").exists() and (tmp_path / "modcod_dvbs2.csv").exists()
    # dumped assets load back as custom constellations
    assert main(["validate", "--constellation", str(tmp_path / "kuiper.json"),
                 "--modcod", str(tmp_path / "modcod_dvbs2.csv")]) == 0


def test_validate_rejects_bad_modcod(tmp_path):
    bad = tmp_path / "m.csv"
    bad.write_text("modcod,required_cnr_db,spectral_efficiency\nQPSK 1/2,1.0,1.0\nQPSK 3/4,0.5,1.5\n")
    assert main(["validate", "--modcod", str(bad)]) == 2
