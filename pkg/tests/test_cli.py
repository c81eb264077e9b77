import json
import re
import subprocess
import sys

from hsplab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_wall_time(text: str) -> str:
    return re.sub(r'^\s*"wall_time_s": [0-9.e-]+,?$', "", text, flags=re.M)


def test_analyze_cyclic(capsys):
    code, out, _ = run_cli(capsys, "analyze", "cyclic:2@3")
    assert code == 0
    rep = json.loads(out)
    assert rep["dh"] == "1/3"
    assert rep["thm1_bounds"]["lower"] == "1/6"
    assert rep["thm1_bounds"]["upper"]["decimal"].startswith("0.57735026918962576")
    assert rep["thm1_bounds"]["sandwich_ok"] is True
    assert rep["verdict"]["log_base"] == 2
    assert rep["minimal_degree"] == 2


def test_analyze_block_group(capsys):
    code, out, _ = run_cli(capsys, "analyze", "block:4x2")
    assert code == 0
    rep = json.loads(out)
    assert rep["support_census"] == {"4": "6", "6": "8", "8": "9"}
    assert rep["subgroup_order"] == "24"


def test_analyze_full_distribution(capsys):
    code, out, _ = run_cli(capsys, "analyze", "cyclic:3@3", "--full-distribution")
    rep = json.loads(out)
    dist = {tuple(e["partition"]): e["prob"] for e in rep["distribution"]}
    assert dist == {(3,): "1/2", (2, 1): "0/1", (1, 1, 1): "1/2"}


def test_analyze_group_file(tmp_path, capsys):
    path = tmp_path / "h.grp"
    path.write_text("# a transposition\ndegree 3\n(1 2)\n")
    code, out, _ = run_cli(capsys, "analyze", str(path))
    assert code == 0
    rep = json.loads(out)
    assert rep["source"]["kind"] == "file" and rep["dh"] == "1/3"


def test_analyze_is_deterministic(capsys):
    _, out1, _ = run_cli(capsys, "analyze", "block:3x2", "--threads", "1")
    _, out2, _ = run_cli(capsys, "analyze", "block:3x2", "--threads", "4")
    assert strip_wall_time(out1) == strip_wall_time(out2)


def test_analyze_trivial_rejected(capsys):
    code, _, err = run_cli(capsys, "analyze", "symmetric:1")
    assert code == 4 and "trivial" in err


def test_analyze_degree_limit(capsys):
    code, _, err = run_cli(capsys, "analyze", "symmetric:41")
    assert code == 3 and "degree" in err


def test_unknown_source(capsys):
    code, _, err = run_cli(capsys, "analyze", "no-such-thing")
    assert code == 2 and "catalog" in err


def test_compare_gl32_pair(capsys):
    code, out, _ = run_cli(capsys, "compare", "gl32-point", "gl32-plane")
    assert code == 0
    rep = json.loads(out)
    assert rep["gassmann"]["class_counts_equal"] is True
    assert rep["gassmann"]["perm_chars_equal"] is True
    assert rep["gassmann"]["conjugate"] is False
    assert rep["sn_profile_distance"] == "0/1"
    assert rep["distance_zero"] is True


def test_compare_in_s3(capsys):
    code, out, _ = run_cli(capsys, "compare", "cyclic:2@3", "alternating:3")
    rep = json.loads(out)
    assert rep["sn_profile_distance"] == "4/3"
    assert rep["parent"]["spec"] == "symmetric:3"


def test_compare_containment_failure(capsys):
    code, _, err = run_cli(
        capsys, "compare", "cyclic:2@4", "cyclic:2@4", "--parent", "alternating:4"
    )
    assert code == 4 and "subgroup" in err


def test_coset_cmd(capsys):
    code, out, _ = run_cli(capsys, "coset", "symmetric:4", "young:3+1")
    assert code == 0
    rep = json.loads(out)
    assert rep["index"] == 4
    assert rep["rank_subdegrees"]["rank"] == 2
    assert rep["rank_subdegrees"]["subdegrees"] == [1, 3]
    assert rep["fixpoint_bounds"]["bound_i"] == rep["fixpoint_bounds"]["bound_ii"]
    assert rep["class_identity_holds"] is True


def test_sweep_json_and_csv(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--family", "cyclic", "--start", "3", "--end", "6")
    assert code == 0
    rep = json.loads(out)
    assert [row["n"] for row in rep["rows"]] == [3, 4, 5, 6]
    assert rep["rows"][0]["dh"] == "4/3"

    code, out, _ = run_cli(
        capsys, "sweep", "--family", "block", "--r", "2", "--start", "2", "--end", "4",
        "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("name,n,order,min_degree,dh")
    assert lines[1].split(",")[:5] == ["block:2x2", "4", "2", "4", "1/2"]
    assert len(lines) == 4


def test_sweep_empty_range(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--family", "cyclic", "--start", "5", "--end", "4")
    assert code == 0
    assert json.loads(out)["rows"] == []


def test_sweep_young_family(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--family", "young", "--fixed-part", "2", "--start", "4", "--end", "6"
    )
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["name"] for r in rows] == ["young:2+2", "young:3+2", "young:4+2"]


def test_sweep_determinism_across_threads(capsys):
    args = ["sweep", "--family", "block", "--r", "2", "--start", "2", "--end", "5"]
    _, out1, _ = run_cli(capsys, *args, "--threads", "1")
    _, out2, _ = run_cli(capsys, *args, "--threads", "3")
    assert strip_wall_time(out1) == strip_wall_time(out2)


def test_check_suites(capsys):
    code, out, _ = run_cli(capsys, "check", "--suite", "orthogonality", "--max-n", "6")
    assert code == 0 and json.loads(out)["all_passed"] is True
    code, out, _ = run_cli(capsys, "check", "--suite", "sandwich", "--max-n", "12")
    assert code == 0 and json.loads(out)["all_passed"] is True
    code, out, _ = run_cli(
        capsys, "check", "--suite", "frobenius", "--actions", "5", "--seed", "3"
    )
    assert code == 0 and json.loads(out)["all_passed"] is True


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "analyze", "cyclic:2@3", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["dh"] == "1/3"


def test_hsp_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("HSP_THREADS", "2")
    _, out1, _ = run_cli(capsys, "analyze", "cyclic:4@4")
    monkeypatch.setenv("HSP_THREADS", "1")
    _, out2, _ = run_cli(capsys, "analyze", "cyclic:4@4")
    assert strip_wall_time(out1) == strip_wall_time(out2)


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hsplab.cli", "analyze", "cyclic:2@3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dh"] == "1/3"
