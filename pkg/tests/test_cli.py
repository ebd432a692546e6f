from decimal import Decimal

import pytest

from zetaindep import cli
from zetaindep.errors import InvariantError
from zetaindep.indep import IndependenceCertificate

from conftest import DATA

Z31 = str(DATA / "zeros_31_d60.tsv")


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_zeros_compute_verify_import(tmp_path, capsys):
    out = tmp_path / "z.tsv"
    assert run("zeros", "compute", "--count", 6, "--digits", 20, "--out", out) == 0
    assert run("zeros", "verify", "--in", out) == 0
    assert "verdict=pass" in capsys.readouterr().out
    good = out.read_text().splitlines()
    lines = list(good)
    lines[5] = lines[5].replace("\t25.01", "\t25.02")
    bad = tmp_path / "bad.tsv"
    bad.write_text("\n".join(lines) + "\n")
    assert run("zeros", "verify", "--in", bad) == 2
    gamma_only = tmp_path / "g.tsv"
    gamma_only.write_text("# digits=20\n" + "".join("\t".join(l.split("\t")[:2]) + "\n" for l in good[3:]))
    assert run("zeros", "import", "--in", gamma_only, "--out", tmp_path / "r.tsv") == 3
    assert run("zeros", "import", "--in", gamma_only, "--recompute-derivatives", "--out", tmp_path / "r.tsv") == 0
    # zeta' recomputed from the rounded gamma agrees to within a few units in the last place
    for new, old in zip((tmp_path / "r.tsv").read_text().splitlines()[3:], good[3:]):
        a, b = new.split("\t"), old.split("\t")
        assert a[:2] == b[:2]
        assert all(abs(Decimal(x) - Decimal(y)) <= Decimal("5e-20") for x, y in zip(a[2:], b[2:]))


def test_certify_command(tmp_path):
    out = tmp_path / "cert.txt"
    assert run("certify", "--zeros", Z31, "--k", 40, "--n", 13, "--L", 13, "--order", "cardinal", "--out", out) == 0
    cert = IndependenceCertificate.parse(out.read_text())
    assert cert.N_gamma >= 16
    assert run("certify", "--zeros", Z31, "--k", 55, "--n", 3, "--L", 3) == 2
    assert run("certify", "--zeros", tmp_path / "missing.tsv", "--k", 5, "--n", 3, "--L", 3) == 3


def test_bound_command(capsys):
    assert run("bound", "--zeros", Z31, "--n", 10, "--N-gamma", "inf", "--T-index", 31, "--summary") == 0
    text = capsys.readouterr().out
    assert text.startswith("bound=") and "N_gamma=inf" in text and "# index" not in text
    assert run("bound", "--zeros", Z31, "--n", 40, "--N-gamma", 5, "--T-index", 31) == 3


def test_curve_command(tmp_path):
    out = tmp_path / "c.csv"
    assert run("curve", "--zeros", Z31, "--mode", "fig2", "--n-selected", 10, "--sort-T-index", 31,
               "--T-indices", "15,20..21", "--out", out) == 0
    assert out.read_text().splitlines()[0] == "T_index,T,bound_fejer,bound_f0,asymptote"
    assert len(out.read_text().splitlines()) == 4
    assert run("curve", "--zeros", Z31, "--mode", "fig1", "--schedule", "5:20,10:31", "--out", out) == 0
    assert run("curve", "--zeros", Z31, "--mode", "fig1", "--out", out) == 3


def test_relations_commands(tmp_path):
    t1 = tmp_path / "t1.tsv"
    assert run("relations", "search", "--zeros", Z31, "--min-n", 19, "--max-n", 20, "--out", t1) == 0
    assert t1.read_text().splitlines()[-1] == "20\t2.979906E-8\t(533185,147768)"
    t2 = tmp_path / "t2.tsv"
    assert run("relations", "m-indep", "--zeros", Z31, "--k", 24, "--n-list", "2..4", "--out", t2) == 0
    assert t2.read_text().splitlines()[0] == "n\tm"
    assert len(t2.read_text().splitlines()) == 4


def test_relations_search_computes_zeros(capsys):
    assert run("relations", "search", "--max-n", 5, "--digits", 15) == 0
    assert capsys.readouterr().out.splitlines()[3] == "3\t3.988818E+0\t(4,2)"


def test_pipeline_is_deterministic_and_resumable(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# ten heaviest of the first 20\nk=40\nn=10\nL=20\nordering=heavy\n"
                   f"zero_file={Z31}\noutput_dir={tmp_path / 'out'}\n")
    assert run("pipeline", "--config", cfg) == 0
    out = tmp_path / "out"
    first = {name: (out / name).read_bytes() for name in ("certificate.txt", "bound.txt", "manifest.txt")}
    assert run("pipeline", "--config", cfg) == 0
    assert first == {name: (out / name).read_bytes() for name in first}
    manifest = first["manifest.txt"].decode()
    assert "k=40" in manifest and "config_sha256=" in manifest and "zero_file_sha256=" in manifest
    assert "timings" not in manifest

    state = out / "state" / "t_results.tsv"
    state.write_text("\n".join(state.read_text().splitlines()[:3]) + "\n")
    assert run("pipeline", "--config", cfg, "--resume") == 0
    assert (out / "certificate.txt").read_bytes() == first["certificate.txt"]

    assert run("pipeline", "--config", cfg, "--n", 13, "--L", 13, "--order", "cardinal",
               "--out-dir", tmp_path / "o2") == 0
    cert = IndependenceCertificate.parse((tmp_path / "o2" / "certificate.txt").read_text())
    assert cert.N_gamma >= 16
    assert (tmp_path / "o2" / "bound.txt").read_text().startswith("bound=")


def test_pipeline_failures(tmp_path, caplog, monkeypatch):
    assert run("pipeline", "--zeros", Z31, "--k", 55, "--n", 3, "--L", 3, "--out-dir", tmp_path) == 2
    assert "[certify]" in caplog.text
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("k=40\nbogus=1\n")
    assert run("pipeline", "--config", cfg) == 3
    cfg.write_text("k=forty\n")
    assert run("pipeline", "--config", cfg) == 3

    def broken(*args, **kwargs):
        raise InvariantError("inconsistent certificate")

    monkeypatch.setattr("zetaindep.indep.certify", broken)
    assert run("pipeline", "--zeros", Z31, "--out-dir", tmp_path / "x") == 4


def test_run_config_text_round_trip():
    cfg = cli.RunConfig(k=12, zero_file="z.tsv", warm_start=True)
    values = dict(line.split("=", 1) for line in cfg.to_text().splitlines())
    assert cli.RunConfig.from_mapping(values) == cfg
    with pytest.raises(Exception):
        cli.RunConfig(kernel="gauss")
