import json

import pytest

from gorlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def make_ring_file(tmp_path, capsys, e=3, name="r.json"):
    path = str(tmp_path / name)
    code, _, _ = run(capsys, "ring", "new", "--e", str(e), "--out", path)
    assert code == 0
    return path


def make_module_file(tmp_path, capsys, ring, name="m.json", seed="5"):
    path = str(tmp_path / name)
    code, _, _ = run(capsys, "module", "random", "--ring", ring,
                     "--gens", "2", "--rels", "2", "--seed", seed,
                     "--out", path)
    assert code == 0
    return path


def test_ring_new_and_check(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    code, out, _ = run(capsys, "ring", "check", ring)
    assert code == 0
    assert json.loads(out)["accepted"] is True


def test_ring_check_degenerate_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad_form.json"
    bad.write_text('{"p": 101, "e": 2, "form": [[1, 0], [0, 0]]}\n')
    code, _, err = run(capsys, "ring", "check", str(bad))
    assert code == 2
    assert "Degenerate" in err


def test_module_info(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    mod = make_module_file(tmp_path, capsys, ring)
    code, out, _ = run(capsys, "module", "info", mod)
    assert code == 0
    info = json.loads(out)
    assert info["dim"] == sum(info["hilbert"])


def test_module_new_from_presentation(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    mod = str(tmp_path / "rx.json")
    code, _, _ = run(capsys, "module", "new", "--ring", ring,
                     "--presentation", "[[[0, 1, 0, 0, 0]]]", "--out", mod)
    assert code == 0
    code, out, _ = run(capsys, "module", "info", mod)
    assert json.loads(out)["hilbert"] == [1, 2]


def test_resolve_betti(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    mod = make_module_file(tmp_path, capsys, ring)
    code, out, _ = run(capsys, "resolve", mod, "--steps", "6")
    assert code == 0
    d = json.loads(out)
    assert len(d["betti"]) == 7 and d["betti"][0] >= 1


def test_series_poincare_with_certificate(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    mod = str(tmp_path / "rx.json")
    run(capsys, "module", "new", "--ring", ring,
        "--presentation", "[[[0, 1, 0, 0, 0]]]", "--out", mod)
    code, out, _ = run(capsys, "series", "poincare", "--module", mod,
                       "--steps", "6", "--certify")
    assert code == 0
    d = json.loads(out)
    assert d["coefficients"] == [1, 1, 2, 5, 13, 34, 89]
    assert d["certificate"] == {"s": 1, "numerator": [1, -2], "e": 3}
    # at --steps 5 the tail leaves margin 4 < 5: certification must refuse
    code, _, err = run(capsys, "series", "poincare", "--module", mod,
                       "--steps", "5", "--certify")
    assert code == 2 and "InsufficientDegree" in err


def test_tor_table_with_induced(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    a = make_module_file(tmp_path, capsys, ring, "a.json", seed="1")
    b = make_module_file(tmp_path, capsys, ring, "b.json", seed="2")
    code, out, _ = run(capsys, "tor", "--m", a, "--n-mod", b,
                       "--range", "0..8", "--induced")
    assert code == 0
    d = json.loads(out)
    assert [r["i"] for r in d["entries"]] == list(range(9))
    assert all(r["length"] >= r["nu"] >= 0 for r in d["entries"])
    assert "induced_rank" in d["entries"][0]


def test_ext_range_slicing(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    a = make_module_file(tmp_path, capsys, ring, "a.json", seed="1")
    b = make_module_file(tmp_path, capsys, ring, "b.json", seed="2")
    code, out, _ = run(capsys, "ext", "--m", a, "--n-mod", b, "--range", "2..5")
    assert code == 0
    assert [r["i"] for r in json.loads(out)["entries"]] == [2, 3, 4, 5]


def test_koszul_verdict(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    mod = make_module_file(tmp_path, capsys, ring)
    code, out, _ = run(capsys, "koszul", mod)
    assert code == 0
    assert json.loads(out)["verdict"] in ("koszul", "not_koszul")


def test_verify_lofwall_exit_0(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "lofwall", "--e", "3",
                       "--cutoff", "20")
    assert code == 0
    d = json.loads(out)
    assert d["pass"] is True
    assert len(d["trials"][0]["betti"]) == 21


def test_verify_failure_exit_1(capsys):
    code, out, err = run(capsys, "verify", "main-theorem", "--trials", "1",
                         "--cutoff", "10", "--margin", "9")
    assert code == 1
    assert json.loads(out)["pass"] is False
    assert "FAIL" in err  # the reproducer line


def test_usage_errors_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    ring = make_ring_file(tmp_path, capsys)
    a = make_module_file(tmp_path, capsys, ring, "a.json")
    code, _, err = run(capsys, "tor", "--m", a, "--n-mod", a, "--range", "9..2")
    assert code == 2 and "range" in err
    code, _, err = run(capsys, "module", "info", str(tmp_path / "absent.json"))
    assert code == 2


def test_out_matches_stdout(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    mod = make_module_file(tmp_path, capsys, ring)
    code, out, _ = run(capsys, "module", "info", mod)
    path = tmp_path / "info.json"
    run(capsys, "module", "info", mod, "--out", str(path))
    assert path.read_text() == out


def test_repeated_runs_byte_identical(tmp_path, capsys):
    for name in ("one.json", "two.json"):
        run(capsys, "verify", "counterexample-e2", "--cutoff", "12",
            "--out", str(tmp_path / name))
    assert (tmp_path / "one.json").read_bytes() == \
        (tmp_path / "two.json").read_bytes()


def test_pretty_output_runs(tmp_path, capsys):
    ring = make_ring_file(tmp_path, capsys)
    a = make_module_file(tmp_path, capsys, ring, "a.json", seed="1")
    code, out, _ = run(capsys, "tor", "--m", a, "--n-mod", a,
                       "--range", "0..4", "--pretty")
    assert code == 0
    assert "length" in out and "provenance" in out
