from dacc.cli import main


def test_invariants(capsys):
    assert main(["invariants", "11a1"]) == 0
    out = capsys.readouterr().out
    assert "I5" in out and "conductor" in out and "11 = 11^1" in out


def test_invariants_from_coefficients(capsys):
    assert main(["invariants", "0,0,1,-1,0", "--precision", "20"]) == 0
    assert "5.9869172924639" in capsys.readouterr().out


def test_lseries(capsys):
    assert main(["lseries", "389a1", "--jobs", "1"]) == 0
    out = capsys.readouterr().out
    assert "analytic rank" in out and "0.75931650028" in out


def test_certificate(capsys):
    assert main(["certificate", "389a1", "--jobs", "1"]) == 0
    out = capsys.readouterr().out
    assert "forced zero" in out and "non-zero" in out


def test_verify_exit_codes(capsys, tmp_path):
    assert main(["verify", "37a1", "--jobs", "1"]) == 0
    f = tmp_path / "wrong.txt"
    f.write_text("w37;0,0,1,-1,0;gens=(0:0);rank=1;sha=4\n")
    assert main(["verify", "w37", "--fixtures", str(f), "--jobs", "1"]) == 1
    assert "FAIL expected_sha" in capsys.readouterr().out


def test_operational_errors(capsys, tmp_path):
    assert main(["verify", "nosuchcurve", "--jobs", "1"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("x;1,2;rank=0\n")
    assert main(["batch", str(bad), "--jobs", "1"]) == 2
    assert "line 1, column 3" in capsys.readouterr().err
    assert main(["batch", str(tmp_path / "missing.txt")]) == 2


def test_report_to_file(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("37a1;0,0,1,-1,0;gens=(0:0);rank=1\n11a1;0,-1,1,-10,-20;rank=0\n")
    out = tmp_path / "t.csv"
    assert main(["report", str(f), "--table", "table1", "--format", "csv", "--output", str(out),
                 "--jobs", "1"]) == 0
    assert out.read_text().splitlines()[1].startswith("37a1,1,5.9869")


def test_batch_summary(capsys, tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("a;0,0,1,-1,0;gens=(0:0)\nb;0,0,0,0,0\n")
    assert main(["batch", str(f), "--jobs", "2", "--format", "csv"]) == 1
    out = capsys.readouterr().out
    assert "FAILED b: model" in out
