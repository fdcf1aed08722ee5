import json
from fractions import Fraction

import pytest

from csli.cli import main
from csli.errors import StructuralError
from csli.gallery import GALLERY_NAMES, entry, gallery, line_translation
from csli.pipeline import run_pipeline
from csli.serialize import SchemaError, dec_point, dec_q, dumps, enc_system, from_json, to_json
from csli.system import FamilySpec, SystemDescription


@pytest.mark.parametrize("name", GALLERY_NAMES)
def test_round_trip(name):
    desc = entry(name)
    back = from_json(to_json(desc))
    assert to_json(back) == to_json(desc)
    assert run_pipeline(back)["verdicts"] == run_pipeline(desc)["verdicts"]


@pytest.mark.parametrize("name", GALLERY_NAMES)
def test_gallery_matches_expectations(name):
    report = run_pipeline(entry(name))
    assert report["ok"], report["mismatches"]


def test_reports_are_deterministic():
    a = dumps(run_pipeline(entry("divisadmiss")))
    b = dumps(run_pipeline(entry("divisadmiss")))
    assert a == b


def test_mismatch_is_reported():
    desc = gallery()["admissCSLI"]
    wrong = SystemDescription(desc.name, desc.space, desc.map, desc.cocycle, expected={"local_homeo": True})
    report = run_pipeline(wrong)
    assert not report["ok"]
    assert report["mismatches"] == {"local_homeo": {"expected": True, "got": False}}


def test_line_family_has_no_collision():
    desc = SystemDescription(
        "line", family=FamilySpec("line-translation", 1, (2,), 4, check_elements=(1,)),
        expected={"dichotomy": "AllHomeo", "local_homeo": True},
    )
    report = run_pipeline(desc)
    assert report["ok"] and "collision" not in report["verdicts"]
    assert line_translation(1).space == line_translation(Fraction(1, 2)).space


class TestSchema:
    def test_rational(self):
        assert dec_q({"num": -3, "den": 6}) == Fraction(-1, 2)
        with pytest.raises(SchemaError):
            dec_q({"num": 1, "den": 0})
        with pytest.raises(SchemaError) as err:
            dec_q({"num": 1}, "map.pieces[0].slope")
        assert err.value.path == "map.pieces[0].slope.den"

    def test_point(self):
        with pytest.raises(SchemaError) as err:
            dec_point({"component": "X", "value": {"num": 0, "den": 1}, "side": "left"}, "at")
        assert err.value.path == "at.side"

    def test_nested_error_path(self):
        obj = json.loads(to_json(entry("admissCSLI")))
        del obj["map"]["pieces"][1]["slope"]
        with pytest.raises(SchemaError) as err:
            from_json(json.dumps(obj))
        assert "pieces[1]" in err.value.path and err.value.path.endswith("slope")

    def test_unknown_verdict(self):
        with pytest.raises(StructuralError):
            SystemDescription("x", expected={"admissible": "maybe"})
        with pytest.raises(StructuralError):
            SystemDescription("x", expected={"colour": "red"})

    def test_encoding_is_plain_json(self):
        for name in GALLERY_NAMES:
            json.loads(dumps(enc_system(entry(name))))


@pytest.fixture
def export(tmp_path, capsys):
    def write(name):
        held = capsys.readouterr()
        assert main(["gallery", "export", name]) == 0
        path = tmp_path / f"{name}.json"
        path.write_text(capsys.readouterr().out)
        print(held.out, end="")
        return str(path)

    return write


class TestCli:
    def test_run_all(self, capsys):
        assert main(["gallery", "run-all"]) == 0
        assert "all verdicts matched" in capsys.readouterr().out

    def test_json_output(self, capsys):
        assert main(["gallery", "run", "notadmiss2", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdicts"]["necessary_condition"] == "violated"
        assert report["verdicts"]["admissible"] == "no"

    def test_analyze_and_run_files(self, export, capsys):
        path = export("admissCSLI")
        assert main(["analyze", path]) == 0
        out = capsys.readouterr().out
        assert "multiplicity 2" in out and "local homeomorphism: no" in out
        assert main(["run", path]) == 0

    def test_cocycle_verbs(self, export, capsys):
        path = export("admissnondeg")
        assert main(["cocycle", "verify", path]) == 0
        assert main(["cocycle", "construct", path, "--strategy", "branch+repair"]) == 0
        assert main(["cocycle", "construct", path, "--strategy", "inverse-count"]) == 1
        capsys.readouterr()
        assert main(["cocycle", "construct", export("notadmiss2"), "--strategy", "branch"]) == 1
        assert "no open branch" in capsys.readouterr().out

    def test_transfer_and_expectation(self, export, tmp_path, capsys):
        path = export("admissnondeg")
        space = json.loads(open(path).read())["space"]
        f = {"regions": [{"interval": {"component": "X", "lo": {"component": "X", "value": None, "side": "neg_inf"},
                                       "hi": {"component": "X", "value": None, "side": "pos_inf"}},
                          "poly": [{"num": 1, "den": 1}]}]}
        fpath = tmp_path / "one.json"
        fpath.write_text(json.dumps(f))
        assert space["components"][0]["id"] == "X"
        assert main(["transfer", "apply", path, "--function", str(fpath), "--json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"]["regions"][0]["poly"] == [{"num": 1, "den": 1}]
        assert main(["expectation", path, "--function", str(fpath)]) == 0
        assert "nondegenerate" in capsys.readouterr().out

    def test_semigroup_verbs(self, export, capsys):
        path = export("divisadmiss")
        assert main(["semigroup", "ddag", path, "--generators", "1/2,1/4"]) == 0
        assert main(["semigroup", "extend", path, "--generators", "1/2,1/4", "--index", "1,2"]) == 0
        at = json.dumps({"component": "X2", "value": {"num": -1, "den": 3}, "side": "interior"})
        capsys.readouterr()
        assert main(["semigroup", "extend", path, "--generators", "1/2,1/4", "--index", "1,2", "--at", at]) == 0
        assert "= 1/2" in capsys.readouterr().out
        assert main(["semigroup", "dichotomy", path]) == 0
        assert main(["semigroup", "collision", path, "--depth", "4"]) == 0
        assert "X2:0-, X3:0-" in capsys.readouterr().out

    def test_certify(self, export, capsys):
        assert main(["certify", "--certificate", export("notadmiss2")]) == 0
        assert main(["certify", "--certificate", export("notadmiss-seq")]) == 0
        assert capsys.readouterr().out.count("Valid") == 2

    def test_errors_exit_2(self, tmp_path, capsys):
        broken = tmp_path / "broken.json"
        broken.write_text("{ not json")
        assert main(["run", str(broken)]) == 2
        assert main(["run", str(tmp_path / "missing.json")]) == 2
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"name": "x", "space": {"components": [{"id": "X"}]}}))
        assert main(["analyze", str(bad)]) == 2
        assert "space.components[0]" in capsys.readouterr().err

    def test_mismatch_exits_1(self, export, tmp_path):
        obj = json.loads(open(export("admissCSLI")).read())
        obj["expected"]["local_homeo"] = True
        path = tmp_path / "lie.json"
        path.write_text(json.dumps(obj))
        assert main(["run", str(path)]) == 1
        assert main(["analyze", str(path)]) == 1
