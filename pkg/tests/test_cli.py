"""End-to-end tests of the command-line interface (subprocess level)."""

from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from amld3 import pack_bits, unpack_bits

DYADIC = "0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125"
MATCHED = "0.5,0.25,0.125,0.0625,0.03125,0.015625"


def run_cli(*args, stdin: str | None = None):
    proc = subprocess.run(
        [sys.executable, "-m", "amld3", *args],
        input=stdin,
        capture_output=True,
        text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


def run_json(*args, stdin: str | None = None):
    code, out, err = run_cli(*args, stdin=stdin)
    assert code == 0, err
    return json.loads(out)


# ---------------------------------------------------------------------------
# region / corners
# ---------------------------------------------------------------------------

def test_region_json_all_ones():
    doc = run_json("region", "--h", "1,1,1,1,1,1,1")
    assert doc["ordering"] == 1
    assert doc["regime"] == "II"
    assert len(doc["constraints"]) == 11
    by_tag = {c["tag"]: c for c in doc["constraints"]}
    assert by_tag["Q7"]["a"] == [2, 1, 1]
    assert by_tag["Q7"]["b"] == "13"
    assert by_tag["Q11"]["b"] == "11"
    assert len(doc["corners"]) == 10
    labels = {c["label"] for c in doc["corners"]}
    assert "Y7+Y8" in labels and "Y9+Y11" in labels


def test_region_csv():
    code, out, err = run_cli("region", "--h", "1,1,1,1,1,1,1", "--emit", "csv")
    assert code == 0, err
    lines = out.strip().splitlines()
    assert lines[0] == "tag,a1,a2,a3,b"
    assert len(lines) == 12
    assert "Q7,2,1,1,13" in lines


def test_corners_csv_first_row_is_lex_least():
    code, out, err = run_cli("corners", "--h", "1,1,1,1,1,1,1", "--emit", "csv")
    assert code == 0, err
    lines = out.strip().splitlines()
    assert lines[0] == "label,r1,r2,r3,tight"
    assert lines[1] == "Y1,1,4,7,Q1|Q4|Q7"
    assert len(lines) == 11


def test_corners_json_fractional_rates():
    doc = run_json("corners", "--h", "1,1,1,2,1,1,1")
    by_label = {c["label"]: c for c in doc["corners"]}
    assert by_label["Z7"]["rates"] == ["5/2", "7/2", "13/2"]


def test_region_other_ordering_uses_p_tags_and_no_labels():
    doc = run_json("corners", "--ordering", "7", "--h", "1,1,1,1,1,1,1")
    assert all(c["label"] is None for c in doc["corners"])
    doc = run_json("region", "--ordering", "7", "--h", "1,1,1,1,1,1,1")
    assert doc["regime"] is None
    assert {c["tag"] for c in doc["constraints"]} == {
        "P1.1", "P1.2", "P1.3", "P2.12", "P2.13", "P2.23",
        "P3.1", "P3.2", "P3.3", "P4", "P5",
    }
    by_tag = {c["tag"]: c for c in doc["constraints"]}
    assert by_tag["P4"]["b"] == "11"
    assert by_tag["P2.12"]["b"] == "4"


def test_ordering_from_stdin():
    levels = {s: i + 1 for i, s in enumerate(
        ("G1", "G2", "G12", "G3", "G13", "G23", "G123")
    )}
    doc = run_json(
        "region", "--ordering", "-", "--h", "1,1,1,1,1,1,1",
        stdin=json.dumps({"levels": levels}),
    )
    assert doc["ordering"] == 7


def test_inline_json_ordering():
    levels = {s: i + 1 for i, s in enumerate(
        ("G1", "G2", "G3", "G12", "G13", "G23", "G123")
    )}
    doc = run_json(
        "region",
        "--ordering", json.dumps({"levels": levels}),
        "--h", "1,1,1,1,1,1,1",
    )
    assert doc["ordering"] == 1


# ---------------------------------------------------------------------------
# encode / decode
# ---------------------------------------------------------------------------

@pytest.fixture
def bundle_dir(tmp_path):
    # Worked X5 example: V1=1, V2=0, V3=110, V4=1, V5=0, V6=0, V7=1.
    bits = [1, 0, 1, 1, 0, 1, 0, 0, 1]
    (tmp_path / "streams.bin").write_bytes(pack_bits(bits))
    manifest = {"lengths": [1, 1, 3, 1, 1, 1, 1], "streams": "streams.bin"}
    (tmp_path / "manifest.json").write_text(json.dumps(manifest))
    return tmp_path


def test_encode_decode_roundtrip(bundle_dir):
    encdir = bundle_dir / "enc"
    sidecar = run_json(
        "encode",
        "--scheme", "X5",
        "--manifest", str(bundle_dir / "manifest.json"),
        "--out", str(encdir),
    )
    assert sidecar == {
        "scheme": "X5",
        "lengths": [1, 1, 3, 1, 1, 1, 1],
        "bits": [3, 7, 5],
        "files": ["G1.bits", "G2.bits", "G3.bits"],
    }
    assert json.loads((encdir / "sidecar.json").read_text()) == sidecar
    # Hand-checked description bitstreams.
    assert (encdir / "G1.bits").read_bytes() == pack_bits([1, 1, 0])
    assert (encdir / "G2.bits").read_bytes() == pack_bits([1, 0, 1, 0, 0, 0, 1])
    assert (encdir / "G3.bits").read_bytes() == pack_bits([1, 0, 1, 1, 0])

    # G23 exercises the xor-cancellation path (recovers V4, V5).
    decdir = bundle_dir / "dec23"
    doc = run_json(
        "decode",
        "--sidecar", str(encdir / "sidecar.json"),
        "--subset", "G23",
        "--out", str(decdir),
    )
    assert doc == {
        "subset": "G23",
        "level": 6,
        "lengths": [1, 1, 3, 1, 1, 1],
        "files": [f"V{k}.bits" for k in range(1, 7)],
    }
    assert (decdir / "V4.bits").read_bytes() == pack_bits([1])
    assert (decdir / "V5.bits").read_bytes() == pack_bits([0])

    # Full decode reproduces the original streams bit-for-bit.
    decall = bundle_dir / "decall"
    doc = run_json(
        "decode",
        "--sidecar", str(encdir / "sidecar.json"),
        "--subset", "G123",
        "--out", str(decall),
    )
    assert doc["lengths"] == [1, 1, 3, 1, 1, 1, 1]
    recovered = []
    for k, n in enumerate([1, 1, 3, 1, 1, 1, 1], start=1):
        data = (decall / f"V{k}.bits").read_bytes()
        recovered.extend(unpack_bits(data, n).tolist())
    assert recovered == [1, 0, 1, 1, 0, 1, 0, 0, 1]


def test_decode_reads_only_subset_files(bundle_dir):
    encdir = bundle_dir / "enc"
    run_json(
        "encode",
        "--scheme", "X5",
        "--manifest", str(bundle_dir / "manifest.json"),
        "--out", str(encdir),
    )
    (encdir / "G2.bits").unlink()  # G13 never touches description 2
    doc = run_json(
        "decode",
        "--sidecar", str(encdir / "sidecar.json"),
        "--subset", "G13",
        "--out", str(bundle_dir / "dec13"),
    )
    assert doc["level"] == 5


# ---------------------------------------------------------------------------
# md-bounds / gap / check
# ---------------------------------------------------------------------------

def test_md_bounds_json_with_parametric():
    doc = run_json("md-bounds", "--D", DYADIC, "--d", MATCHED)
    assert doc["ordering"] == 1
    assert doc["normalized"]["D"]["G1"] == 0.5
    inner = {c["tag"]: c["b"] for c in doc["inner"]["constraints"]}
    outer = {c["tag"]: c["b"] for c in doc["outer"]["constraints"]}
    assert inner["I-4"] == 5.5
    assert outer["O-2.12"] == 1.5
    po = doc["parametric"]
    assert po is not None
    assert [c["tag"] for c in po["constraints"]] == [
        "PO-1.1", "PO-1.2", "PO-1.3",
        "PO-2.12", "PO-2.13", "PO-2.23",
        "PO-3.1", "PO-3.2", "PO-3.3",
        "PO-4", "PO-5",
    ]
    for tag, b in outer.items():
        suffix = tag.split("-", 1)[1]
        assert po["constraints"][
            [c["tag"] for c in po["constraints"]].index(f"PO-{suffix}")
        ]["b"] >= b - 1e-9


def test_md_bounds_omits_parametric_without_noise():
    doc = run_json("md-bounds", "--D", DYADIC)
    assert doc["parametric"] is None


def test_md_bounds_csv_row_count():
    code, out, err = run_cli("md-bounds", "--D", DYADIC, "--emit", "csv")
    assert code == 0, err
    lines = out.strip().splitlines()
    assert lines[0] == "set,tag,a1,a2,a3,b"
    assert len(lines) == 1 + 22
    code, out, _ = run_cli(
        "md-bounds", "--D", DYADIC, "--d", MATCHED, "--emit", "csv"
    )
    assert len(out.strip().splitlines()) == 1 + 33


def test_distortions_from_stdin():
    targets = {s: 0.5 for s in
               ("G1", "G2", "G3", "G12", "G13", "G23", "G123")}
    doc = run_json("gap", "--D", "-", stdin=json.dumps({"D": targets}))
    assert doc["(1,0,0)"] == 0.0


def test_gap_values():
    doc = run_json("gap", "--D", DYADIC)
    assert doc["(1,0,0)"] == 0.0
    assert abs(doc["(1,1,0)"] - 1 / np.sqrt(2)) < 1e-9
    assert abs(doc["(2,1,1)"] - 3 / np.sqrt(6)) < 1e-9
    assert abs(doc["(1,1,1)"][0] - 2 / np.sqrt(3)) < 1e-9
    assert abs(doc["(1,1,1)"][1] - 4.5 / np.sqrt(3)) < 1e-9
    assert abs(doc["(1,1,1)_reference"] - 9 / (4 * np.sqrt(3))) < 1e-9


def test_check_exact_region():
    doc = run_json("check", "--rates", "1,4,7", "--h", "1,1,1,1,1,1,1")
    assert doc == {"inside": True, "tight": ["Q1", "Q4", "Q7"], "violated": []}
    doc = run_json("check", "--rates", "0,0,0", "--h", "1,1,1,1,1,1,1")
    assert doc["inside"] is False
    assert "Q1" in doc["violated"]


def test_check_accepts_fractional_rates():
    doc = run_json(
        "check", "--rates", "5/2,7/2,13/2", "--h", "1,1,1,2,1,1,1"
    )
    assert doc["inside"] is True
    assert len(doc["tight"]) >= 3


def test_check_against_bounds():
    doc = run_json("check", "--rates", "10,10,10", "--D", DYADIC)
    assert doc["inside"] is True
    doc = run_json(
        "check", "--rates", "0.5,0.9,0.9", "--D", DYADIC, "--which", "inner"
    )
    assert doc["inside"] is False
    assert "I-1.1" in doc["tight"]
    doc = run_json(
        "check", "--rates", "10,10,10",
        "--D", DYADIC, "--which", "parametric", "--d", MATCHED,
    )
    assert doc["inside"] is True


# ---------------------------------------------------------------------------
# Exit codes and determinism.
# ---------------------------------------------------------------------------

def test_exit_code_2_invalid_ordering():
    levels = {s: i + 1 for i, s in enumerate(
        ("G1", "G2", "G3", "G12", "G13", "G123", "G23")
    )}
    code, _, err = run_cli(
        "region",
        "--ordering", json.dumps({"levels": levels}),
        "--h", "1,1,1,1,1,1,1",
    )
    assert code == 2
    assert "error:" in err


def test_exit_code_3_negative_entropy():
    code, _, err = run_cli("region", "--h", "1,1,-1,1,1,1,1")
    assert code == 3
    assert "error:" in err


def test_exit_code_4_scheme_mismatch(tmp_path):
    (tmp_path / "streams.bin").write_bytes(b"\x00")
    manifest = {"lengths": [1, 1, 1, 2, 1, 1, 1], "streams": "streams.bin"}
    (tmp_path / "manifest.json").write_text(json.dumps(manifest))
    code, _, err = run_cli(
        "encode",
        "--scheme", "Z7",
        "--manifest", str(tmp_path / "manifest.json"),
        "--out", str(tmp_path / "enc"),
    )
    assert code == 4  # odd half-split
    manifest = {"lengths": [1, 1, 0, 2, 1, 1, 1], "streams": "streams.bin"}
    (tmp_path / "manifest.json").write_text(json.dumps(manifest))
    code, _, err = run_cli(
        "encode",
        "--scheme", "X5",
        "--manifest", str(tmp_path / "manifest.json"),
        "--out", str(tmp_path / "enc"),
    )
    assert code == 4  # wrong regime for X5


def test_exit_code_5_truncated_streams(tmp_path):
    (tmp_path / "streams.bin").write_bytes(b"\x00")  # 9 bits need 2 bytes
    manifest = {"lengths": [1, 1, 3, 1, 1, 1, 1], "streams": "streams.bin"}
    (tmp_path / "manifest.json").write_text(json.dumps(manifest))
    code, _, err = run_cli(
        "encode",
        "--scheme", "X5",
        "--manifest", str(tmp_path / "manifest.json"),
        "--out", str(tmp_path / "enc"),
    )
    assert code == 5
    assert "error:" in err


def test_exit_code_6_bad_distortions_and_noise():
    bad = DYADIC.replace("0.5", "1.5", 1)
    code, _, _ = run_cli("md-bounds", "--D", bad)
    assert code == 6
    code, _, _ = run_cli("md-bounds", "--D", DYADIC, "--d", "0.1,0.5,0.4,0.3,0.2,0.1")
    assert code == 6


def test_exit_code_1_other_errors(tmp_path):
    code, _, _ = run_cli("check", "--rates", "1,2,3")
    assert code == 1
    (tmp_path / "streams.bin").write_bytes(b"\x00\x00")
    manifest = {"lengths": [1, 1, 3, 1, 1, 1, 1], "streams": "streams.bin"}
    (tmp_path / "manifest.json").write_text(json.dumps(manifest))
    code, _, _ = run_cli(
        "encode",
        "--scheme", "XX",
        "--manifest", str(tmp_path / "manifest.json"),
        "--out", str(tmp_path / "enc"),
    )
    assert code == 1


def test_output_is_byte_deterministic():
    for args in (
        ("region", "--h", "1,1,3,2,2,1,1"),
        ("md-bounds", "--D", DYADIC, "--d", MATCHED),
        ("gap", "--D", DYADIC),
    ):
        _, out1, _ = run_cli(*args)
        _, out2, _ = run_cli(*args)
        assert out1 == out2
