import json
import math
import shutil
from fractions import Fraction as F

import pytest

from subdiff import checks, cli, errorbound, geometry, io


# ---------------------------------------------------------------- JSON layer

def test_round_trip_every_fixture(fixtures_dir):
    for name in checks.FIXTURE_NAMES:
        fn, opts = io.load_problem("%s/%s.json" % (fixtures_dir, name))
        fn2, opts2 = io.parse_problem(io.problem_to_json(fn, opts))
        assert fn2 == fn, name
        assert opts2 == opts


def test_rationals_survive_the_round_trip(fixtures_dir):
    fn, _ = io.load_problem("%s/disks.json" % fixtures_dir)
    c = fn.components[0].pieces[0].center
    assert c == (F(1, 2), F(0))
    dumped = io.problem_to_json(fn)
    assert dumped["components"][0]["pieces"][0]["center"][0] == "1/2"


def test_exact_mode_rejects_bare_floats():
    obj = {"dim": 1, "basepoint": [0], "mode": "exact",
           "components": [{"kind": "max_affine",
                           "pieces": [{"a": [0.5], "b": 0}]}]}
    with pytest.raises(io.ParseError) as err:
        io.parse_problem(obj)
    assert "components[0]" in str(err.value)


def test_float_mode_accepts_floats():
    obj = {"dim": 1, "basepoint": [0], "mode": "float",
           "components": [{"kind": "max_affine",
                           "pieces": [{"a": [0.5], "b": 0}]}]}
    fn, _ = io.parse_problem(obj)
    assert fn.components[0].pieces[0].a == (0.5,)


def test_parse_error_paths_are_specific():
    bad_kind = {"dim": 1, "basepoint": [0], "mode": "exact",
                "components": [{"kind": "max_spline", "pieces": []}]}
    with pytest.raises(io.ParseError) as err:
        io.parse_problem(bad_kind)
    assert "kind" in str(err.value)

    asym = {"dim": 2, "basepoint": [0, 0], "mode": "exact",
            "components": [{"kind": "max_quadratic",
                            "pieces": [{"Q": [[0, 1], [0, 0]],
                                        "a": [0, 0], "b": 0}]}]}
    with pytest.raises(io.ParseError) as err:
        io.parse_problem(asym)
    assert "Q" in str(err.value)

    two_balls = {"dim": 2, "basepoint": [0, 0], "mode": "exact",
                 "components": [{"kind": "ball_support",
                                 "pieces": [{"center": [0, 0], "radius": 1},
                                            {"center": [1, 0], "radius": 1}]}]}
    with pytest.raises(io.ParseError):
        io.parse_problem(two_balls)

    with pytest.raises(io.ParseError) as err:
        io.parse_problem({"dim": 2, "basepoint": [0], "mode": "exact",
                          "components": []})
    assert "basepoint" in str(err.value)


def test_union_json_round_trip_with_all_piece_kinds():
    U = geometry.FaceUnion((
        geometry.segment((F(1, 2), 0), (2, 1)),
        geometry.Ball((0, 0), F(3, 2)),
        geometry.Arc((1.5, 0.0), 1.0, 0.5, 2.5, False, True),
    ))
    back = io.union_from_json(io.union_to_json(U))
    assert back.pieces[0].vertices == ((F(1, 2), F(0)), (F(2), F(1)))
    assert back.pieces[1].center == (F(0), F(0)) and back.pieces[1].radius == F(3, 2)
    arc = back.pieces[2]
    assert (arc.theta0, arc.theta1, arc.closed0, arc.closed1) == (0.5, 2.5, False, True)


def test_scalar_formatting():
    assert io.format_scalar(F(1, 2)) == "1/2"
    assert io.format_scalar(F(4, 2)) == 2
    assert io.format_scalar(3) == 3
    assert io.format_scalar(0.25) == 0.25


def test_erbound_json_uses_infinity_marker():
    rep = errorbound.lower_bound_from_outer(geometry.FaceUnion(()))
    out = io.erbound_result_json(rep)
    assert out["lower_bound"] == "+inf"
    assert out["attaining_piece"] is None


def test_dfamily_json_is_one_based(problems):
    from subdiff import outer
    grads = [p.a for p in problems["sixmax"].components[0].pieces]
    fam = outer.enumerate_D(grads)
    payload = io.dfamily_result_json(fam)
    seen = {tuple(e["D"]) for e in payload["d_family"]}
    assert (1, 2) in seen and (0,) not in {s[:1] for s in seen if s[0] == 0}
    for e in payload["d_family"]:
        assert min(e["D"]) >= 1


# ----------------------------------------------------------------- CLI layer

def _run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_outer_stdout(fixtures_dir, capsys):
    code, out, _ = _run(["outer", "%s/sixmax.json" % fixtures_dir, "--closure"],
                        capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["closure_applied"] is True
    assert payload["mode"] == "exact2d"
    assert len(payload["outer_limit"]["pieces"]) == 3


def test_cli_outer_svg_does_not_change_json(fixtures_dir, tmp_path, capsys):
    plain = tmp_path / "a.json"
    with_svg = tmp_path / "b.json"
    svg = tmp_path / "view.svg"
    code, _, _ = _run(["outer", "%s/minmax.json" % fixtures_dir, "--closure",
                       "--out", str(plain)], capsys)
    assert code == 0
    code, _, _ = _run(["outer", "%s/minmax.json" % fixtures_dir, "--closure",
                       "--out", str(with_svg), "--svg", str(svg)], capsys)
    assert code == 0
    assert plain.read_bytes() == with_svg.read_bytes()
    body = svg.read_text()
    assert body.startswith("<svg")
    # self-contained: the only URL is the SVG namespace
    assert body.count("http") == body.count("http://www.w3.org/2000/svg")


def test_cli_outer_sampled_records_seed(fixtures_dir, tmp_path, capsys):
    out = tmp_path / "s.json"
    code, _, _ = _run(["outer", "%s/sixmax.json" % fixtures_dir, "--mode",
                       "sample", "--dirs", "200", "--seed", "5",
                       "--out", str(out)], capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["mode"] == "sample"
    assert payload["seed"] == 5
    assert payload["n_points"] == len(payload["points"]) > 0
    # a sampled cloud can be replotted directly
    svg = out.with_suffix(".svg")
    code, _, _ = _run(["plot", str(out), "--out", str(svg)], capsys)
    assert code == 0
    assert svg.read_text().startswith("<svg")


def test_cli_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2')
    code, _, err = _run(["outer", str(bad)], capsys)
    assert code == 2
    assert "parse error" in err
    code, _, err = _run(["outer", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_cli_unsupported_exit_3(tmp_path, capsys):
    prob = {"dim": 3, "basepoint": [0, 0, 0], "mode": "exact",
            "components": [{"kind": "max_affine",
                            "pieces": [{"a": [1, 0, 0], "b": 0},
                                       {"a": [0, 1, 0], "b": 0}]}]}
    path = tmp_path / "three.json"
    path.write_text(json.dumps(prob))
    code, _, err = _run(["outer", str(path)], capsys)
    assert code == 3
    assert "dimension 3" in err


def test_cli_dfamily_cap_exit_4(tmp_path, capsys):
    path = tmp_path / "grads.json"
    path.write_text(json.dumps({"gradients": [[i, 1] for i in range(21)]}))
    code, _, err = _run(["dfamily", str(path)], capsys)
    assert code == 4
    assert "cap" in err


def test_cli_dfamily_gradient_list(tmp_path, capsys):
    path = tmp_path / "grads.json"
    path.write_text(json.dumps({"gradients": [["1/2", "1/2"], [1, 1]]}))
    code, out, _ = _run(["dfamily", str(path)], capsys)
    assert code == 0
    payload = json.loads(out)
    assert [e["D"] for e in payload["d_family"]] == [[2]]


def test_cli_dfamily_rejects_multi_component(fixtures_dir, capsys):
    code, _, err = _run(["dfamily", "%s/minmax.json" % fixtures_dir], capsys)
    assert code == 3


def test_cli_erbound_empirical(fixtures_dir, capsys):
    code, out, _ = _run(["erbound", "%s/minmax.json" % fixtures_dir,
                         "--empirical"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["lower_bound"] == pytest.approx(math.sqrt(2) / 2)
    assert payload["inequality_satisfied"] is True
    assert payload["seed"] == 42


def test_cli_erbound_infinite_is_ok(fixtures_dir, capsys):
    code, out, _ = _run(["erbound", "%s/paraboloids.json" % fixtures_dir],
                        capsys)
    assert code == 0
    assert json.loads(out)["lower_bound"] == "+inf"


def test_cli_oracle_env_seed(fixtures_dir, tmp_path, capsys, monkeypatch):
    out = tmp_path / "o.json"
    monkeypatch.setenv("SUBDIFF_SEED", "9")
    code, _, _ = _run(["oracle", "%s/absx.json" % fixtures_dir,
                       "--dirs", "40", "--radii", "1e-1,1e-2",
                       "--out", str(out)], capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["seed"] == 9
    assert payload["radii"] == [0.1, 0.01]
    assert "hausdorff_cloud_to_exact" in payload
    # explicit flag beats the environment
    code, _, _ = _run(["oracle", "%s/absx.json" % fixtures_dir,
                       "--dirs", "40", "--radii", "1e-1,1e-2",
                       "--seed", "3", "--out", str(out)], capsys)
    assert json.loads(out.read_text())["seed"] == 3


def test_cli_plot_from_result_json(fixtures_dir, tmp_path, capsys):
    result = tmp_path / "r.json"
    code, _, _ = _run(["outer", "%s/disks.json" % fixtures_dir, "--closure",
                       "--out", str(result)], capsys)
    assert code == 0
    svg = tmp_path / "r.svg"
    code, _, _ = _run(["plot", str(result), "--out", str(svg)], capsys)
    assert code == 0
    assert svg.read_text().startswith("<svg")


def test_cli_check_missing_fixture_bails(tmp_path, capsys):
    code, out, _ = _run(["check", "--fixtures", str(tmp_path)], capsys)
    assert code == 1
    assert "Bail out!" in out
    assert "sixmax" in out


def test_compare_expected_flags_corruption(fixtures_dir, tmp_path):
    work = tmp_path / "fixtures"
    shutil.copytree(fixtures_dir, work)
    victim = work / "sixmax.expected.json"
    payload = json.loads(victim.read_text())
    payload["lower_bound"] = 99.0
    victim.write_text(json.dumps(payload))
    rows = checks.compare_expected(str(work))
    status = {name: ok for name, ok, _ in rows}
    assert status["sixmax"] is False
    assert status["minmax"] is True
    detail = {name: d for name, ok, d in rows}["sixmax"]
    assert "lower_bound" in detail
