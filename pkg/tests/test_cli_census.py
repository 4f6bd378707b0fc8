import math
import os

import pytest

from horocanon.census import (DEGENERATE, GEOMETRIC, HEADER, collapse, format_db, process_candidate, read_db,
                              run_census, write_db)
from horocanon.cli import main
from horocanon.gluing import assemble_equations, solve
from horocanon.isosig import decode_signature

from support import (FIG8_TEXT, REGULAR, SISTER_TEXT, VALENCE1_TEXT, fig8, geometric_walk,
                     quad_lobachevsky, rng, valence1)

FIG8_VOLUME = 6 * quad_lobachevsky(math.pi / 3)


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in [("fig8", FIG8_TEXT), ("sister", SISTER_TEXT), ("v1", VALENCE1_TEXT),
                       ("walk", geometric_walk(fig8(), rng(2), 3).to_text()),
                       ("bad", "tri 2\n1:3201 1:1230 1:3012 1:2310\n0:3201 0:1230 0:30x2 0:2310\n")]:
        p = tmp_path / f"{name}.tri"
        p.write_text(text)
        out[name] = str(p)
    return out


def test_solve_fixture(files, capsys):
    assert main(["solve", files["fig8"]]) == 0
    out = capsys.readouterr().out
    assert "status: GEOMETRIC" in out
    vol = float(out.split("volume:")[1].split()[0])
    assert vol == pytest.approx(FIG8_VOLUME, abs=1e-9)
    re_part = out.split("z[0] = ")[1].split()[0]
    assert len(re_part.split(".")[1]) == 16


def test_solve_degenerate(files, capsys):
    assert main(["solve", files["v1"]]) == 3
    assert "DEGENERATE" in capsys.readouterr().out


def test_parse_error_reports_line(files, capsys):
    assert main(["solve", files["bad"]]) == 2
    assert f"{files['bad']}:3:" in capsys.readouterr().err
    assert main(["solve", files["bad"] + ".missing"]) == 2


def test_canonize(files, capsys):
    assert main(["canonize", files["fig8"]]) == 0
    out = capsys.readouterr().out
    assert "flips: 0" in out
    sig = out.split("signature: ")[1].strip()
    assert main(["canonize", files["walk"]]) == 0
    assert capsys.readouterr().out.split("signature: ")[1].strip() == sig
    assert main(["canonize", files["v1"]]) == 3


def test_compare(files, capsys):
    assert main(["compare", files["fig8"], files["walk"]]) == 0
    assert capsys.readouterr().out.strip() == "EQUAL"
    assert main(["compare", files["fig8"], files["sister"]]) == 1
    assert capsys.readouterr().out.strip() == "DISTINCT"
    assert main(["compare", files["fig8"], files["v1"]]) == 3
    assert capsys.readouterr().out.strip() == "UNDECIDED"


def test_enumerate(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["enumerate", "-n", "2", "--cusped", "-o", str(a), "--threads", "1"]) == 0
    assert capsys.readouterr().out.startswith("10 cusped")
    assert main(["enumerate", "-n", "2", "-o", str(b), "--threads", "2"]) == 0
    capsys.readouterr()
    names = sorted(os.listdir(a))
    assert names == sorted(os.listdir(b))
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert main(["enumerate", "-n", "1", "--closed", "--threads", "1"]) == 0
    assert capsys.readouterr().out.startswith("4 closed")


def test_enumerate_usage_errors(capsys):
    assert main(["enumerate", "-n", "0"]) == 2
    assert main(["enumerate", "-n", "5"]) == 2
    assert main(["enumerate", "-n", "3", "--ceiling", "2"]) == 2
    assert main(["census", "-n", "0"]) == 2
    with pytest.raises(SystemExit) as err:
        main(["enumerate"])
    assert err.value.code == 2


def test_census_two(tmp_path, capsys):
    path = tmp_path / "db.txt"
    assert main(["census", "-n", "2", "-o", str(path), "--threads", "1"]) == 0
    text = path.read_text()
    lines = text.splitlines()
    assert lines[0] == HEADER.format(n=2)
    assert text.endswith("\n")
    n, rows = read_db(path)
    assert n == 2
    geo = [r for r in rows if r["status"] == GEOMETRIC]
    assert len(geo) == 2
    for r in geo:
        assert r["volume"] == pytest.approx(FIG8_VOLUME, abs=1e-8)
        for sig in r["iso_signatures"]:
            z = solve(assemble_equations(decode_signature(sig))).z
            assert all(abs(x - REGULAR) < 1e-9 for x in z)
    assert geo[0]["canonical_signature"] != geo[1]["canonical_signature"]
    for line in lines[1:]:
        assert len(line.split("\t")) == 5
    keys = [(line.split("\t")[0], line.split("\t")[1]) for line in lines[1:]]
    assert keys == sorted(keys)


def test_census_stdout_matches_file(tmp_path, capsys):
    path = tmp_path / "db.txt"
    main(["census", "-n", "2", "-o", str(path), "--threads", "1"])
    capsys.readouterr()
    main(["census", "-n", "2", "--threads", "2"])
    assert capsys.readouterr().out == path.read_text()


def test_census_records_reverify():
    records = run_census(2)
    for r in records:
        if r.status == GEOMETRIC:
            S = assemble_equations(decode_signature(r.iso_signature))
            assert solve(S, r.shapes).iterations <= 2


def test_collapse_and_partition(tmp_path):
    records = run_census(3)
    rows = collapse(records)
    geo = [row for row in rows if row[2] == GEOMETRIC]
    csigs = [row[0] for row in geo]
    assert len(set(csigs)) == len(csigs)
    n_geo = sum(1 for r in records if r.status == GEOMETRIC)
    assert sum(len(row[1].split(",")) for row in geo) == n_geo
    by_sig = {}
    for r in records:
        if r.status == GEOMETRIC:
            by_sig.setdefault(r.canonical_signature, []).append(r.volume)
    for vols in by_sig.values():
        assert max(vols) - min(vols) < 1e-8
    text = write_db(records, 3, tmp_path / "sub" / "db.txt")
    assert text == format_db(records, 3)


def test_census_three_matches_known_volumes():
    # volumes of the orientable cusped manifolds with at most three tetrahedra
    known = [2.0298832128, 2.0298832128, 2.5689706009, 2.5689706009, 2.6667447834, 2.6667447834,
             2.7818339124, 2.8281220883, 2.8281220883, 2.8281220883, 2.9441064867]
    rows = [row for row in collapse(run_census(3)) if row[2] == GEOMETRIC]
    assert sorted(float(row[4]) for row in rows) == pytest.approx(known, abs=1e-9)


def test_failures_become_statuses():
    r = process_candidate(decode_signature(process_candidate(fig8()).iso_signature))
    assert r.status == GEOMETRIC
    assert process_candidate(valence1()).status == DEGENERATE
