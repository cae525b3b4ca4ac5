import json

from detpf.cli import build_parser, main
from detpf.exactlin import DEFAULT_PRIME, PrimeField
from detpf.constructions import fermat_matrix
from detpf.polymat import parse_graded_matrix
from detpf.graded import random_point_set
from detpf.rng import FieldRng

F = PrimeField(DEFAULT_PRIME)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_help_lists_every_subcommand():
    parser = build_parser()
    text = parser.format_help()
    for name in (
        "formulas",
        "dominance",
        "dominance-sweep",
        "lower-bound",
        "construct",
        "verify",
        "hilbert",
        "gorenstein",
        "smooth",
    ):
        assert name in text


def test_formulas_command(capsys):
    code, out, _ = run(capsys, "formulas", "--ambient", "3", "--degree", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["curve_degree"] == 3 and doc["curve_genus"] == 0
    assert doc["gorenstein_degree"] == 5


def test_dominance_command_reproducible(capsys):
    args = ["dominance", "--ambient", "5", "--degree", "3", "--seed", "11"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    d1, d2 = json.loads(out1), json.loads(out2)
    d1.pop("elapsed_seconds")
    d2.pop("elapsed_seconds")
    assert d1 == d2
    assert d1["codim"] == 1


def test_dominance_expect_flag_failure_exit(capsys):
    code, out, _ = run(
        capsys, "dominance", "--ambient", "5", "--degree", "3", "--expect-dominant"
    )
    assert code == 1


def test_construct_verify_pipeline(tmp_path, capsys):
    matrix_path = tmp_path / "fermat.gm"
    form_path = tmp_path / "target.form"
    code, _, _ = run(
        capsys,
        "construct",
        "fermat",
        "--ambient",
        "2",
        "--degree",
        "5",
        "--output",
        str(matrix_path),
    )
    assert code == 0
    built = fermat_matrix(F, 2, 5)
    form_path.write_text(built.target.to_text())
    # file round-trip is bit exact
    assert parse_graded_matrix(matrix_path.read_text()) == built.matrix
    code, out, _ = run(
        capsys,
        "verify",
        "--matrix",
        str(matrix_path),
        "--form",
        str(form_path),
        "--kind",
        "det",
    )
    assert code == 0
    assert json.loads(out)["ok"] is True
    # wrong form: exit 1
    wrong = tmp_path / "wrong.form"
    wrong.write_text(fermat_matrix(F, 2, 5).target.scale(2).to_text().replace("5 0 0", "4 1 0"))
    code, out, _ = run(
        capsys, "verify", "--matrix", str(matrix_path), "--form", str(wrong), "--kind", "det"
    )
    assert code == 1


def test_construct_random_and_hilbert(tmp_path, capsys):
    matrix_path = tmp_path / "rand.gm"
    code, _, _ = run(
        capsys,
        "construct",
        "random",
        "--rows=0,0,0",
        "--cols=-1,-1,-1",
        "--nvars",
        "3",
        "--seed",
        "5",
        "--output",
        str(matrix_path),
    )
    assert code == 0
    code, out, _ = run(
        capsys, "hilbert", "--matrix", str(matrix_path), "--degrees", "0..4"
    )
    assert code == 0
    table = json.loads(out)["hilbert"]
    assert [table[str(j)] for j in range(5)] == [3 * (j + 1) for j in range(5)]


def test_construct_all_kinds(tmp_path, capsys):
    from detpf.mpoly import HomogeneousForm

    # cyclic from two form files
    f_file, g_file = tmp_path / "f.forms", tmp_path / "g.forms"
    x = [HomogeneousForm.variable(F, 3, j) for j in range(3)]
    f_file.write_text(x[0].to_text() + x[1].to_text())
    g_file.write_text(x[1].to_text() + x[2].to_text())
    out = tmp_path / "cyc.gm"
    code, _, _ = run(
        capsys, "construct", "cyclic", "--f-forms", str(f_file),
        "--g-forms", str(g_file), "--output", str(out),
    )
    assert code == 0
    cyc = parse_graded_matrix(out.read_text())
    assert cyc.nrows == 2
    # block skew from the cyclic matrix
    blk = tmp_path / "blk.gm"
    code, _, _ = run(
        capsys, "construct", "block", "--matrix", str(out), "--output", str(blk)
    )
    assert code == 0
    assert parse_graded_matrix(blk.read_text()).symmetry == "skew"
    # theta shape
    th = tmp_path / "theta.gm"
    code, _, _ = run(
        capsys, "construct", "theta-shape", "--degree", "5", "--seed", "2",
        "--output", str(th),
    )
    assert code == 0
    theta = parse_graded_matrix(th.read_text())
    assert theta.symmetry == "symmetric" and theta.nrows == 3
    # pullback of a symmetric linear matrix
    sym = tmp_path / "sym.gm"
    code, _, _ = run(
        capsys, "construct", "random", "--rows=0,0", "--cols=-1,-1",
        "--symmetry", "symmetric", "--nvars", "3", "--seed", "3",
        "--output", str(sym),
    )
    assert code == 0
    pb = tmp_path / "pb.gm"
    code, _, _ = run(
        capsys, "construct", "pullback", "--matrix", str(sym), "--output", str(pb)
    )
    assert code == 0
    assert parse_graded_matrix(pb.read_text())[0, 0].degree in (0, 2)


def test_lower_bound_expect_flag(capsys):
    code, out, _ = run(
        capsys, "lower-bound", "--ambient", "4", "--expect", "5"
    )
    assert code == 0
    assert json.loads(out)["threshold"] == 5
    code, _, _ = run(capsys, "lower-bound", "--ambient", "4", "--expect", "7")
    assert code == 1


def test_gorenstein_command(tmp_path, capsys):
    pts = random_point_set(F, 4, 5, FieldRng("cli-g"))
    path = tmp_path / "z.pts"
    path.write_text(pts.to_text())
    code, out, _ = run(capsys, "gorenstein", "--points", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["index"] == 1 and doc["passed"] is True


def test_smooth_command(tmp_path, capsys):
    from detpf.constructions import fermat_target

    path = tmp_path / "f.form"
    path.write_text(fermat_target(F, 2, 4).to_text())
    code, out, _ = run(capsys, "smooth", "--form", str(path))
    assert code == 0
    assert json.loads(out)["verdict"] == "smooth"


def test_input_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.gm"
    bad.write_text("gradedmatrix p=31991 nvars=3 symmetry=general\nrows 0\ncols 0\nentry 0 0 nterms=zzz\n")
    code, _, err = run(capsys, "hilbert", "--matrix", str(bad), "--degrees", "0..1")
    assert code == 2
    assert "line 4" in err
    code, _, err = run(capsys, "hilbert", "--matrix", str(tmp_path / "missing.gm"), "--degrees", "0..1")
    assert code == 2
    code, _, err = run(
        capsys, "dominance", "--ambient", "3", "--degree", "3", "--prime", "31989"
    )
    assert code == 2


def test_env_prime_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("DETPF_PRIME", "101")
    code, out, _ = run(capsys, "dominance", "--ambient", "2", "--degree", "3", "--seed", "1")
    assert code == 0
    assert json.loads(out)["prime"] == 101


def test_text_format_renders_json_dict(capsys):
    code, out, _ = run(
        capsys, "formulas", "--ambient", "3", "--degree", "4", "--format", "text"
    )
    assert code == 0
    assert "curve_genus: 3" in out


def test_sweep_csv(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys,
        "dominance-sweep",
        "--ambient",
        "2",
        "--max-degree",
        "4",
        "--format",
        "csv",
        "--output",
        str(out_path),
    )
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "r,d,prime,seed,cd,rank,target,verdict,elapsed_ms"
    assert len(lines) == 3
