import json

import pytest

from lattice_sumsets.cli import run


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_sumset_of_origins(write, capsys):
    origin = write("o.txt", "0\n")
    assert run(["sumset", origin, origin]) == 0
    assert capsys.readouterr().out == "0\n"


def test_sumset_json(write, capsys):
    L = write("L.txt", "0 1\n1 0\n2 0\n")
    assert run(["sumset", L, L, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["size"] == 6
    assert [0, 2] in data["points"]


def test_doubling(write, capsys):
    A = write("A.txt", "0\n1\n2\n3\n")
    assert run(["doubling", A]) == 0
    assert "sigma = 7/4" in capsys.readouterr().out


def test_project_and_compress(write, capsys):
    square = write("sq.txt", "0 0\n0 1\n1 0\n1 1\n")
    assert run(["project", square, "--axes", "1"]) == 0
    assert capsys.readouterr().out == "0 0\n1 0\n"
    assert run(["project", square, "--axes", ""]) == 0
    assert capsys.readouterr().out == "0 0\n"

    L = write("L.txt", "0 1\n1 0\n2 0\n")
    assert run(["compress", L, "--axis", "2"]) == 0
    assert capsys.readouterr().out == "0 0\n1 0\n2 0\n"
    assert run(["downclose", L]) == 0
    assert capsys.readouterr().out == "0 0\n0 1\n1 0\n"


def test_verify_box_doubling_json(write, capsys):
    L = write("L.txt", "0 0\n0 1\n1 0\n")
    assert run(["verify", "box-doubling", "--set", L, "--box", "2,2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["statement_id"] == "box-doubling"
    assert (data["lhs"], data["rhs"], data["verdict"]) == ("6", "5", "pass")
    assert data["parameters"]["relation"] == ">="


def test_verify_freiman_lemma_text(write, capsys):
    A = write("A.txt", "0\n1\n3\n")
    assert run(["verify", "freiman-lemma", "--set", A, "--epsilon", "1/2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("freiman-lemma: 6 >= 6 [pass]")


def test_verify_freiman_hom_reports_failure(write, capsys):
    A = write("A.txt", "0\n1\n2\n")
    image = write("img.txt", "0 0\n1 0\n0 1\n")
    assert run(["verify", "freiman-hom", "--set", A, "--image", image]) == 1
    assert "[fail]" in capsys.readouterr().out


def test_verify_missing_option_is_input_error(write, capsys):
    A = write("A.txt", "0 0\n")
    assert run(["verify", "box-doubling", "--set", A]) == 2
    assert "--box" in capsys.readouterr().err


def test_cover(write, capsys):
    A = write("A.txt", "0\n1\n2\n3\n100\n101\n102\n103\n")
    P = write("P.txt", "base 0\ngen 1 len 4\ngen 100 len 2\n")
    assert run(["cover", "--set", A, "--prog", P, "--epsilon", "1/2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 2
    assert data["offsets"] == [[0], [100]]
    assert data["parameters"]["K"] == "21/8"


def test_search_and_example(write, capsys):
    assert run(["example", "sidon", "--n", "4"]) == 0
    assert capsys.readouterr().out == "0\n1\n3\n7\n"

    A = write("A.txt", "0\n1\n3\n")
    assert run(["search", "freiman-oracle", "--set", A, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["dimension"], data["in_box"]) == (2, True)
    assert len(data["isomorphism"]) == 3

    assert run(["search", "min-doubling", "--box", "3", "--n", "3"]) == 0
    assert capsys.readouterr().out.startswith("|A+A| = 5\n")


def test_sweep(capsys):
    assert run(["sweep", "discrete-bm-sharpness"]) == 0
    out = capsys.readouterr().out
    assert out == "discrete-bm-sharpness: 9 instances, 0 violations (seed 0, generator PCG64)\n"


def test_unknown_sweep_exits_with_input_error(capsys):
    assert run(["sweep", "nope"]) == 2
    assert "Unknown sweep" in capsys.readouterr().err


def test_budget_exit_code(write, capsys):
    A = write("A.txt", "0\n1\n2\n")
    assert run(["verify", "plunnecke", "--set", A, "--max-subset", "2"]) == 3
    assert "max_subset" in capsys.readouterr().err


def test_bad_input_file(write, capsys):
    bad = write("bad.txt", "0 1\n2\n")
    assert run(["doubling", bad]) == 2
    assert run(["doubling", bad + ".missing"]) == 2


def test_config_file_and_overrides(write, capsys):
    config = write("config.json", json.dumps({"sweeps": {"seed": 5}}))
    assert run(["sweep", "plunnecke", "--trials", "3", "--config", config]) == 0
    assert "(seed 5," in capsys.readouterr().out
    assert run(["sweep", "plunnecke", "--trials", "3", "--config", config, "--seed", "8"]) == 0
    assert "(seed 8," in capsys.readouterr().out

    broken = write("broken.json", "{")
    assert run(["sweep", "plunnecke", "--config", broken]) == 2


def test_argparse_errors_return_exit_code(capsys):
    assert run(["compress"]) == 2
