import json
import os
import subprocess

import jsonschema
import pytest


def validate(doc, schema, ref=None):
    if ref is None:
        jsonschema.validate(doc, schema)
    else:
        jsonschema.validate(doc, {"$ref": f"#/$defs/{ref}", "$defs": schema["$defs"]})


def validate_manifest(path, schema):
    with open(path) as f:
        validate(json.load(f), schema, "manifest")


@pytest.fixture()
def scene(cli, tmp_path):
    code, doc, _ = cli("synth", "-o", "scene.pgm", "--seed", "3", cwd=tmp_path)
    assert code == 0
    return tmp_path


def test_blur_then_blind_estimate(cli, scene, schema):
    code, doc, _ = cli("blur", "scene.pgm", "-o", "b.pgm", "--theta", "45", "--length", "40", cwd=scene)
    assert code == 0
    validate(doc, schema)
    validate_manifest(scene / "b.pgm.manifest.json", schema)
    code, doc, _ = cli("estimate", "b.pgm", "--method", "blind", cwd=scene)
    assert code == 0
    validate(doc, schema)
    assert abs(doc["report"]["theta_deg"] - 45.0) <= 3.0


def test_psf_kernel_bytes(cli, tmp_path, schema):
    code, doc, _ = cli("psf", "--theta", "0", "--length", "5", "--kernel-out", "k.pgm", "--transfer-out", "h.pgm",
                       cwd=tmp_path)
    assert code == 0
    validate(doc, schema)
    validate_manifest(tmp_path / "k.pgm.manifest.json", schema)
    data = (tmp_path / "k.pgm").read_bytes()
    assert data.startswith(b"P5\n7 7\n255\n")
    raster = data[-49:]
    assert sum(1 for b in raster if b) == 5
    assert all(raster[21 + i] for i in range(1, 6))


def test_metrics_identical(cli, scene, schema):
    code, doc, _ = cli("metrics", "--test", "scene.pgm", "--reference", "scene.pgm", cwd=scene)
    assert code == 0
    validate(doc, schema)
    assert doc["ssim"] == 1.0
    assert doc["psnr"] is None and doc["psnr_infinite"] is True


def test_every_command_validates(cli, scene, schema):
    cli("blur", "scene.pgm", "-o", "b.pgm", "--theta", "30", "--length", "12", "--boundary", "circular", cwd=scene)
    runs = [
        ("spectrum", "b.pgm", "-o", "s.pgm", "--cepstrum-out", "c.pgm"),
        ("estimate", "b.pgm", "--method", "cepstrum"),
        ("estimate", "b.pgm", "--method", "freq", "--reference", "scene.pgm"),
        ("deblur", "b.pgm", "-o", "d.pgm", "--theta", "30", "--length", "12"),
        ("deblur", "b.pgm", "-o", "i.pgm", "--theta", "30", "--length", "12", "--method", "inverse"),
        ("invariants", "b.pgm", "--orders", "3", "--compare", "scene.pgm"),
        ("invariants", "b.pgm", "--domain", "freq", "--reference", "scene.pgm", "--bins", "1:0,0:1,2:3"),
    ]
    for args in runs:
        code, doc, _ = cli(*args, cwd=scene)
        assert code == 0, args
        validate(doc, schema)
    for name in ("s.pgm", "d.pgm", "i.pgm"):
        validate_manifest(scene / f"{name}.manifest.json", schema)


def test_report(cli, scene, schema):
    code, doc, _ = cli("report", "--input", "scene.pgm", "--grid", "45:40", "--methods", "blind,cepstrum",
                       "--out-dir", "rep", cwd=scene)
    assert code == 0
    validate(doc, schema)
    validate_manifest(scene / "rep" / "manifest.json", schema)
    with open(scene / "rep" / "report.json") as f:
        validate(json.load(f), schema, "report")
    (row,) = doc["rows"]
    for m in ("blind", "cepstrum"):
        entry = row["methods"][m]
        assert entry["error"] is None
        assert entry["ssim"] is not None and entry["theta_deg"] is not None
    for path in row["files"].values():
        assert os.path.exists(scene / path)


def test_report_records_stage_errors(cli, scene, schema):
    code, doc, _ = cli("report", "--input", "scene.pgm", "--grid", "10:20", "--methods", "moment,freq",
                       "--out-dir", "rep", cwd=scene)
    assert code == 0
    validate(doc, schema)
    assert doc["rows"][0]["methods"]["moment"]["error"]["kind"] == "inconsistent_frames"
    assert doc["rows"][0]["methods"]["freq"]["error"] is None


def test_report_empty_grid(cli, scene, schema):
    code, doc, _ = cli("report", "--input", "scene.pgm", "--grid", "", "--out-dir", "rep", cwd=scene)
    assert code == 0
    validate(doc, schema)
    assert doc["rows"] == []


def test_report_unreadable_input_leaves_nothing(cli, tmp_path, schema):
    code, doc, _ = cli("report", "--input", "missing.pgm", "--out-dir", "rep", cwd=tmp_path)
    assert code == 2
    validate(doc, schema)
    assert doc["error"]["kind"] == "io"
    assert not (tmp_path / "rep").exists()


def test_exit_codes(cli, scene, schema):
    code, doc, err = cli("blur", "scene.pgm", "--theta", "1", cwd=scene)
    assert code == 1 and doc["error"]["kind"] == "usage" and err
    validate(doc, schema)
    code, doc, _ = cli("nonsense", cwd=scene)
    assert code == 1
    code, doc, _ = cli("deblur", "scene.pgm", "-o", "x.pgm", "--theta", "0", "--length", "-2", cwd=scene)
    assert code == 1 and doc["error"]["kind"] == "invalid_argument"
    code, doc, _ = cli("estimate", "scene.pgm", "--method", "freq", cwd=scene)
    assert code == 1
    code, doc, _ = cli("estimate", "nothere.pgm", cwd=scene)
    assert code == 2 and doc["error"]["kind"] == "io"
    (scene / "noise.pgm").write_bytes(b"P5\n64 64\n255\n" + bytes((i * 7919) % 251 for i in range(64 * 64)))
    code, doc, _ = cli("estimate", "noise.pgm", cwd=scene)
    assert code == 2 and doc["error"]["kind"] == "low_confidence"
    validate(doc, schema)


def test_fixed_seed_outputs_are_byte_identical(cli, scene):
    for d in ("a", "b"):
        (scene / d).mkdir()
        code, _, _ = cli("blur", "scene.pgm", "-o", f"{d}/n.pgm", "--theta", "20", "--length", "9",
                         "--noise-sigma", "0.02", "--seed", "7", cwd=scene)
        assert code == 0
        code, _, _ = cli("report", "--input", "scene.pgm", "--grid", "30:12,85:20", "--noise-sigma", "0.01",
                         "--seed", "5", "--out-dir", f"{d}/rep", cwd=scene)
        assert code == 0
    files_a = sorted(p.relative_to(scene / "a") for p in (scene / "a").rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(scene / "b") for p in (scene / "b").rglob("*") if p.is_file())
    assert files_a == files_b and files_a
    for rel in files_a:
        a = (scene / "a" / rel).read_bytes()
        b = (scene / "b" / rel).read_bytes()
        if rel.suffix == ".json":
            a, b = a.replace(b"a/", b""), b.replace(b"b/", b"")
        assert a == b, rel
    (scene / "c").mkdir()
    cli("blur", "scene.pgm", "-o", "c/n.pgm", "--theta", "20", "--length", "9", "--noise-sigma", "0.02",
        "--seed", "8", cwd=scene)
    assert (scene / "c" / "n.pgm").read_bytes() != (scene / "a" / "n.pgm").read_bytes()


def test_pretty_output(cli, scene):
    out = subprocess.run([cli.path, "--pretty", "metrics", "--test", "scene.pgm", "--reference", "scene.pgm"],
                         cwd=scene, capture_output=True, text=True).stdout
    assert "ssim" in out and not out.lstrip().startswith("{")
