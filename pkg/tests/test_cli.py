import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest

from mixedcycles import lemmas
from mixedcycles.cli import cli_main
from mixedcycles.graph import Colour, GraphBuilder
from mixedcycles.instances import stability_instance
from mixedcycles.structures import build_K, canonical, structure_to_json

RED = Colour.RED


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_formula_prints_value(capsys):
    assert cli_main(["formula", "--theorem", "A", "--n", "6", "--m", "4", "--l", "5"]) == 0
    assert capsys.readouterr().out.strip() == "13"


def test_formula_json(capsys):
    assert cli_main(["--json", "formula", "--n", "6", "--m", "4", "--l", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == "13"


def test_construct_verifies(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert cli_main(["construct", "--pattern", "touch-sets", "--n", "6", "--m", "4", "--l", "5",
                     "--verify", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["n"] == 7
    assert "order 7" in capsys.readouterr().out


def test_search_all_hit(capsys):
    assert cli_main(["search", "--colours", "2", "--c1", "3", "--c2", "3", "--N", "6"]) == 0
    assert "all-colourings-hit" in capsys.readouterr().out


def test_search_prints_formula_for_three_colours(capsys):
    assert cli_main(["--json", "search", "--colours", "3", "--c1", "4", "--c2", "4", "--c3", "3", "--N", "5"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "witness-found" and data["formula"] is not None


def test_search_budget_exit_code():
    assert cli_main(["search", "--c1", "4", "--c2", "4", "--N", "6", "--budget", "5"]) == 3


def test_usage_errors():
    assert cli_main([]) == 1
    assert cli_main(["formula", "--theorem", "Z"]) == 1
    assert cli_main(["verify-lemma", "--lemma", "nope"]) == 1
    assert cli_main(["verify-lemma", "--lemma", "skb", "--trials", "1"]) == 1


@pytest.mark.parametrize("lemma", ["dirac", "eg", "eleven", "ten", "dgf0", "twoholes"])
def test_verify_lemma_trials(lemma, tmp_path, capsys):
    art = tmp_path / "c.json"
    assert cli_main(["verify-lemma", "--lemma", lemma, "--trials", "5", "--seed", "7",
                     "--artefact", str(art)]) == 0
    assert "5/5" in capsys.readouterr().out
    assert not art.exists()


def test_verify_lemma_on_graph_with_params(tmp_path):
    G = GraphBuilder(51).clique(range(51), {RED}).build()
    g = write(tmp_path / "g.json", G.to_json())
    p = write(tmp_path / "p.json", {"alpha": 1, "beta": "1/2", "eta": str(Fraction(1, 10**24)), "k": 40})
    assert cli_main(["verify-lemma", "--lemma", "skb", "--graph", g, "--params", p]) == 0


def test_verify_lemma_missing_parameter(tmp_path):
    g = write(tmp_path / "g.json", GraphBuilder(5).build().to_json())
    p = write(tmp_path / "p.json", {"alpha": 1})
    assert cli_main(["verify-lemma", "--lemma", "skb", "--graph", g, "--params", p]) == 1


def test_bad_result_writes_artefact(tmp_path, monkeypatch):
    # a producer that returns a broken cycle must be caught by the verifier
    monkeypatch.setattr(lemmas, "dirac_cycle", lambda G, colour, within=None: (0, 1))
    art = tmp_path / "c.json"
    G = GraphBuilder(4).clique(range(4), {RED}).build()
    g = write(tmp_path / "g.json", G.to_json())
    assert cli_main(["verify-lemma", "--lemma", "dirac", "--graph", g, "--artefact", str(art)]) == 2
    record = json.loads(art.read_text())
    assert record["lemma"] == "dirac" and record["problems"]


def test_certify(tmp_path, capsys):
    G, params, _ = stability_instance(random.Random(0), "K")
    g = write(tmp_path / "g.json", G.to_json())
    args = ["certify", "--graph", g, "--alpha1", str(params.alpha1), "--alpha2", str(params.alpha2),
            "--alpha3", str(params.alpha3), "--eta", str(params.eta), "--k", str(params.k)]
    assert cli_main(args) == 0
    assert capsys.readouterr().out.startswith("outcome (v)")


def test_check_structure(tmp_path):
    g = write(tmp_path / "g.json", build_K(2, 2, 3).to_json())
    good = canonical("K", (2, 2, 3), x1=2, x2=2, x3=3, c=0)
    s = write(tmp_path / "s.json", structure_to_json(good))
    assert cli_main(["check-structure", "--graph", g, "--structure", s]) == 0
    bad = structure_to_json(good)
    bad["X1"], bad["X3"] = bad["X3"], bad["X1"]
    bad["x1"], bad["x3"] = bad["x3"], bad["x1"]
    s2 = write(tmp_path / "s2.json", bad)
    assert cli_main(["check-structure", "--graph", g, "--structure", s2]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "mixedcycles", "formula", "--n", "6", "--m", "4", "--l", "5"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "13"
