import io
import json
import subprocess
import sys

import pytest

from eqmorse import catalog
from eqmorse.chambers import enumerate_chambers, find_chamber
from eqmorse.cli import run
from eqmorse.errors import InputError
from eqmorse.fan import validate
from eqmorse.io import (
    Loaded,
    cohomology_from_data,
    cohomology_to_data,
    load,
    loaded_from_dict,
    save,
    scenario_from_dict,
    scenario_to_dict,
)
from eqmorse.morse import box_window, gamma_regions, index_coefficients, toric_cohomology_2d
from eqmorse.svg import index_csv, render_svg


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_example_cp2_index():
    code, out, _ = _run("example", "cp2", "--r", "2", "index", "--format", "json")
    assert code == 0
    coeffs = json.loads(out)["coefficients"]
    assert len(coeffs) == 6 and all(c == 1 for _, c in coeffs)


def test_example_cp2_index_csv():
    code, out, _ = _run("example", "cp2", "index", "--r", "2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x1,x2,coeff" and len(lines) == 7


def test_example_jurkiewicz_obstruction():
    code, out, _ = _run("example", "jurkiewicz", "obstruction", "--margin", "1", "--format", "json")
    assert code == 1
    assert json.loads(out)["obstruction"]["weight"] == [0, 0, 0]


def test_example_tolman_obstruction():
    code, out, _ = _run("example", "tolman", "obstruction", "--format", "json")
    ob = json.loads(out)["obstruction"]
    assert code == 1 and ob["weight"] == [1, 2] and ob["degree"] == 2


def test_kahler_examples_clean():
    assert _run("example", "cp2", "obstruction")[0] == 0
    assert _run("example", "hirzebruch", "--a", "1", "--r", "2", "--s", "1", "morse-check")[0] == 0
    assert _run("example", "flag-a2", "flag")[0] == 0


def test_chambers_and_gamma():
    code, out, _ = _run("example", "cp2", "chambers", "--format", "json")
    assert code == 0 and len(json.loads(out)["chambers"]) == 6
    code, out, _ = _run("example", "tolman", "gamma", "--chamber", "1,-2", "--weight", "1,2", "--format", "json")
    inside = {r["point"] for r in json.loads(out)["regions"] if r["contains"]}
    assert code == 0 and inside == {"p1", "p5"}


def test_verdict_exit_codes():
    assert _run("example", "cp2", "verdict")[0] == 0
    assert _run("example", "tolman", "verdict", "--weight", "1,2")[0] == 1


def test_fixed_points_counts():
    for argv, n in [(("cp1", "--r", "3"), 2), (("hirzebruch", "--a", "1", "--r", "2", "--s", "1"), 4), (("jurkiewicz",), 22)]:
        code, out, _ = _run("example", *argv, "fixed-points", "--format", "json")
        assert code == 0 and len(json.loads(out)["fixed_points"]) == n


@pytest.mark.parametrize(
    "argv",
    [
        ("frobnicate",),
        ("example", "nosuch", "index"),
        ("example", "cp2", "nosuch"),
        ("index", "/nonexistent/file.json"),
        ("example", "cp2", "gamma", "--chamber", "1,1"),
        ("example", "cp2", "index", "--weight", "1,2,3"),
        ("example", "tolman", "validate"),
        ("example", "jurkiewicz", "gamma", "--svg", "x.svg"),
        (),
    ],
)
def test_input_errors(argv):
    assert _run(*argv)[0] == 2


def test_export_round_trip(tmp_path):
    path = tmp_path / "hirz.json"
    assert _run("example", "hirzebruch", "--a", "2", "--r", "1", "--s", "3", "export", "--output", str(path))[0] == 0
    loaded = load(path)
    fan, pl = catalog.hirzebruch_fan(2), catalog.hirzebruch_pl(1, 3)
    assert loaded.fan.rays == fan.rays and loaded.pl == pl
    assert validate(loaded.fan) == validate(fan)
    assert loaded.scenario.points == catalog.hirzebruch(2, 1, 3).points
    a = _run("validate", str(path), "--format", "json")
    b = _run("index", str(path), "--format", "json")
    assert a[0] == 0 and json.loads(a[1])["smooth"]
    sc = catalog.hirzebruch(2, 1, 3)
    want = {w: c for w, c in index_coefficients(sc, box_window(sc, 3)).items() if c}
    assert {tuple(w): c for w, c in json.loads(b[1])["coefficients"]} == want
    # stable under re-runs
    assert _run("index", str(path), "--format", "json") == b


def test_scenario_round_trip(tmp_path):
    sc = catalog.tolman()
    assert scenario_from_dict(scenario_to_dict(sc)).points == sc.points
    path = tmp_path / "tolman.json"
    save(Loaded(sc), path)
    assert load(path).scenario.points == sc.points
    assert _run("obstruction", str(path))[0] == 1


def test_morse_check_with_cohomology_file(tmp_path):
    fan, pl = catalog.cpn_fan(2), catalog.cpn_pl(2, 2)
    coh = toric_cohomology_2d(fan, pl)
    path = tmp_path / "coh.json"
    path.write_text(json.dumps(cohomology_to_data(coh)))
    assert _run("example", "cp2", "--r", "2", "morse-check", "--cohomology", str(path))[0] == 0
    bad = cohomology_to_data(coh)
    bad["triples"].append([0, [5, 5], 1])
    path.write_text(json.dumps(bad))
    assert _run("example", "cp2", "--r", "2", "morse-check", "--cohomology", str(path))[0] == 1


def test_bad_documents():
    with pytest.raises(InputError):
        loaded_from_dict({"rank": 2, "rays": [[1, 0]]})
    with pytest.raises(InputError):
        loaded_from_dict({"rank": 2, "rays": [[1, 0.5]], "max_cones": [[0]]})
    with pytest.raises(InputError):
        cohomology_from_data([[0, [1, 2]]], 2, 2)
    with pytest.raises(InputError):
        cohomology_from_data([[3, [1, 2], 1]], 2, 2)


def test_svg_cp2_regions():
    sc = catalog.cpn(2, 2)
    c = find_chamber(enumerate_chambers(sc), (2, 1))
    svg = render_svg(regions=gamma_regions(sc, c))
    assert svg.startswith("<svg") and svg.count('r="4"') == 3
    # p3 has two strict directions, so its edges are dashed
    assert "stroke-dasharray" in svg
    assert render_svg(regions=gamma_regions(sc, c)) == svg


def test_svg_marks_and_rank():
    svg = render_svg(window=[(0, 0)], marks=[(1, 2)])
    assert 'stroke="red"' in svg
    with pytest.raises(InputError):
        render_svg(window=[(0, 0, 0)])


def test_cli_svg(tmp_path):
    path = tmp_path / "tolman.svg"
    assert _run("example", "tolman", "obstruction", "--svg", str(path))[0] == 1
    assert 'stroke="red"' in path.read_text()


def test_index_csv_header():
    assert index_csv({(0, 1): 1}, 2).splitlines() == ["x1,x2,coeff", "0,1,1"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "eqmorse", "example", "cp1", "--r", "1", "index"], capture_output=True, text=True)
    assert out.returncode == 0 and "2 weights" in out.stdout
