import io
import json
import subprocess
import sys

import pytest

from slpreduce.cheb import cheb_dense
from slpreduce.cli import CliConfig, main
from slpreduce.densepoly import to_text
from slpreduce.errors import InputError


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_sign_and_eval(files):
    path = files("xsq_minus2.slp", "slpv1\nmul 1 1\nadd 0 0\nsub 2 3\nout 4\n")
    assert run("slp", "sign", "--at", "1/2", path) == (0, "-1\n")
    assert run("slp", "eval", "--at", "3/2", path) == (0, "1/4\n")


def test_t105_and_t3(files, tmp_path):
    code, text = run("cheb", "emit", "--k", "105")
    assert code == 0
    t105 = files("t105.slp", text)
    assert run("slp", "eval", "--at", "1/1", t105) == (0, "1\n")
    t3 = files("t3.slp", run("cheb", "emit", "--k", "3")[1])
    assert run("slp", "expand", "--max-degree", "3", t3) == (0, "0,-3,0,4\n")


def test_factored_emit_expands_to_t15(files):
    path = files("t15.slp", run("cheb", "emit", "--factors", "3,5")[1])
    assert run("slp", "expand", "--max-degree", "15", path) == (0, to_text(cheb_dense(15)) + "\n")


def test_decide_unsat_json(files):
    path = files("unsat.cnf", "p cnf 2 3\n1 0\n-1 2 0\n-2 0\n")
    code, text = run("decide", "sat", "--cnf", path, "--seed", "5", "--trials", "8", "--policy", "relaxed")
    assert code == 0
    rep = json.loads(text)
    assert rep["verdict"] == "LIKELY_UNSAT" and rep["successes"] == "0" and rep["trials"] == "8"
    assert rep["elapsed_ms"] is None
    again = run("decide", "sat", "--cnf", path, "--seed", "5", "--trials", "8", "--policy", "relaxed")[1]
    assert again == text


def test_decide_timing_flag(files):
    path = files("w.cnf", "p cnf 1 1\n-1 0\n")
    rep = json.loads(run("decide", "sat", "--cnf", path, "--trials", "2", "--policy", "relaxed",
                         "--timing")[1])
    assert rep["elapsed_ms"] is not None


def test_count(files):
    path = files("or.cnf", "p cnf 2 1\n1 2 0\n")
    assert run("count", "sharpsat", "--cnf", path) == (0, "3\n")
    code, text = run("count", "sharpsat", "--cnf", path, "--oracle", "sturm", "--json")
    assert code == 0 and json.loads(text)["count"] == "3"


def test_reduce_and_geometry(files):
    path = files("or.cnf", "p cnf 2 1\n1 2 0\n")
    code, text = run("reduce", "polysat", "--cnf", path, "--primes", "3,5")
    assert code == 0 and len(text.strip().split(",")) == 8
    for what in ("clause", "sos", "radical"):
        code, text = run("reduce", what, "--cnf", path, "--primes", "3,5")
        assert code == 0 and text.startswith("slpv1\n")
    code, text = run("geometry", "intervals", "--cnf", path, "--primes", "3,5", "--out", "-")
    assert code == 0 and text.splitlines()[0] == "index,t_left,t_right,simple,approx_length"
    assert len(text.splitlines()) == 1 + 8


def test_vv_is_reproducible(files):
    path = files("w.cnf", "p cnf 4 2\n1 2 0\n-3 4 0\n")
    a = run("sat", "vv", "--cnf", path, "--seed", "9")
    assert a[0] == 0 and a == run("sat", "vv", "--cnf", path, "--seed", "9")


def test_ineq():
    assert run("ineq", "succinct", "--a", "2", "--b", "10", "--c", "3", "--d", "6") == (0, "true\n")
    assert run("ineq", "succinct", "--a", "6", "--b", "1", "--c", "2,3", "--d", "1,1") == (0, "true\n")
    code, text = run("ineq", "succinct", "--a", "2", "--b", "3", "--c", "3", "--d", "2", "--emit-slp")
    assert code == 0 and text.startswith("slpv1")


def test_exit_codes(files):
    bad = files("bad.slp", "slpv1\nadd 3 1\nout 2\n")
    assert run("slp", "eval", "--at", "1", bad)[0] == 2
    assert run("slp", "eval", "--at", "1", files("x.slp", "slpv\n"))[0] == 2
    assert run("slp", "eval", "--at", "1", "/nonexistent/file.slp")[0] == 2
    big = files("p.slp", run("cheb", "emit", "--k", "40")[1])
    assert run("slp", "expand", "--max-degree", "10", big)[0] == 3
    cnf = files("c.cnf", "p cnf 3 1\n-1 0\n")
    assert run("decide", "sat", "--cnf", cnf, "--trials", "1")[0] == 3
    assert run("reduce", "polysat", "--cnf", cnf, "--primes", "3,5")[0] == 2
    assert run("reduce", "clause", "--cnf", cnf, "--primes", "3,5,7", "--clause-index", "4")[0] == 2


def test_config_validation():
    with pytest.raises(InputError):
        CliConfig(prime_policy="loose")
    with pytest.raises(InputError):
        CliConfig(degree_cap=0)


def test_module_entry_point(files):
    path = files("or.cnf", "p cnf 2 1\n1 2 0\n")
    out = subprocess.run([sys.executable, "-m", "slpreduce", "count", "sharpsat", "--cnf", path],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "3\n"


def test_unknown_flag_is_an_error(files):
    path = files("or.cnf", "p cnf 2 1\n1 2 0\n")
    with pytest.raises(SystemExit) as info:
        main(["count", "sharpsat", "--cnf", path, "--fast"])
    assert info.value.code == 2


def test_json_key_sets(files):
    path = files("or.cnf", "p cnf 2 1\n1 2 0\n")
    rep = json.loads(run("decide", "sat", "--cnf", path, "--trials", "3", "--policy", "relaxed")[1])
    assert set(rep) == {"verdict", "trials", "successes", "witness_kind", "seed", "primes",
                        "M", "policy", "elapsed_ms"}
    cnt = json.loads(run("count", "sharpsat", "--cnf", path, "--json")[1])
    assert set(cnt) == {"count", "moduli", "residues", "root_counts"}
