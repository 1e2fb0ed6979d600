"""JSON round trips and the command-line surface with its exit-code contract."""

import json
from fractions import Fraction

import pytest

from semiortho import serialize
from semiortho.bilinear_form import BilinearLattice
from semiortho.cli import main
from semiortho.exact_linalg import IntMatrix, RatMatrix
from semiortho.markov import MarkovTriple, reduce_to_canonical
from semiortho.mutations import SonCollection
from semiortho.serialize import InputFormatError

LAT = '{"rank":3,"gram":[[1,3,3],[0,1,3],[0,0,1]]}'
COLL = ('{"ambient":{"rank":3,"gram":[[1,3,6],[0,1,3],[0,0,1]]},'
        '"vectors":[[1,0,0],[0,1,0],[0,0,1]]}')


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_number_encoding():
    assert serialize.encode_int(5) == 5
    big = 2 ** 60
    assert serialize.encode_int(big) == str(big)
    assert serialize.decode_int(str(big)) == big
    assert serialize.encode_number(Fraction(3, 2)) == "3/2"
    assert serialize.encode_number(Fraction(4, 2)) == 2
    assert serialize.decode_number("3/2") == Fraction(3, 2)
    for bad in (True, "x/y", 1.5, None):
        with pytest.raises(InputFormatError):
            serialize.decode_number(bad)


def test_matrix_round_trip():
    m = IntMatrix.from_rows([[1, 2 ** 60], [0, 1]])
    enc = serialize.encode_matrix(m)
    assert serialize.decode_int_matrix(enc).entries == m.entries
    r = RatMatrix.from_rows([[Fraction(1, 2), Fraction(3)]])
    assert serialize.decode_rat_matrix(serialize.encode_matrix(r)).entries == r.entries
    with pytest.raises(InputFormatError):
        serialize.decode_int_matrix([[1], [2, 3]])


def test_lattice_and_collection_round_trip():
    lat = BilinearLattice.from_rows([[1, 3], [0, 1]])
    assert serialize.decode_lattice(serialize.encode_lattice(lat)) == lat
    c = SonCollection.standard_basis(lat)
    assert serialize.decode_collection(serialize.encode_collection(c)) == c
    with pytest.raises(InputFormatError):
        serialize.decode_lattice({"rank": 5, "gram": [[1]]})
    with pytest.raises(InputFormatError):
        serialize.decode_lattice({"gram": [[2]]})


def test_trace_round_trip_structure():
    tr = reduce_to_canonical(MarkovTriple(3, 6, 15))
    enc = serialize.encode_trace(tr)
    assert enc["start"] == [3, 6, 15] and enc["end"] == [3, 3, 3]
    assert all(m["move"] in ("vieta", "sign_flip") for m in enc["moves"])


def test_cli_classify(capsys):
    code, out, _ = run(capsys, "classify", "--inline", LAT)
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == {"type": "type1", "n": 2, "epsilon": 1}
    code, _, err = run(capsys, "classify", "--inline", "{bad json")
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "classify", "--inline", '{"gram":[[2]]}')
    assert code == 1


def test_cli_classify_decomposable(capsys):
    code, out, _ = run(capsys, "classify", "--inline",
                       '{"gram":[[1,0],[0,1]]}')
    assert code == 0
    assert json.loads(out)["verdict"]["type"] == "decomposable"


def test_cli_mutate(capsys):
    code, out, _ = run(capsys, "mutate", "--inline", COLL, "--word", "")
    assert code == 0
    assert json.loads(out)["gram"] == [[1, 3, 6], [0, 1, 3], [0, 0, 1]]
    code, out2, _ = run(capsys, "mutate", "--inline", COLL, "--word", "L1 R1")
    assert json.loads(out2)["collection"]["vectors"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    # vector-level recomputation of the L1 example
    code, out3, _ = run(capsys, "mutate", "--inline", COLL, "--word", "L1")
    assert json.loads(out3)["gram"] == [[1, -3, -15], [0, 1, 6], [0, 0, 1]]
    code, _, err = run(capsys, "mutate", "--inline", COLL, "--word", "L9")
    assert code == 1


def test_cli_mutate_round_trip(capsys):
    code, out, _ = run(capsys, "mutate", "--inline", COLL, "--word", "L1 L2")
    mutated = json.loads(out)["collection"]
    code2, out2, _ = run(capsys, "mutate", "--inline", json.dumps(mutated),
                         "--word", "R2 R1")
    assert json.loads(out2)["collection"]["vectors"] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_cli_k0(capsys):
    code, out, _ = run(capsys, "k0", "gram", "-n", "3", "--basis", "adams")
    assert code == 0
    assert json.loads(out)[0] == [1, "11/6", 1, "1/6"]
    code, _, _ = run(capsys, "k0", "gram", "-n", "3", "--basis", "xi")
    assert code == 1
    code, out, _ = run(capsys, "k0", "rank", "--inline", '[3,"1/2",1]', "-n", "2")
    assert json.loads(out) == {"rank": 3}
    code, out, _ = run(capsys, "k0", "classify", "-n", "4")
    assert json.loads(out)["verdict"] == {"type": "type1", "n": 4, "epsilon": 1}


def test_cli_markov(capsys):
    code, out, _ = run(capsys, "markov", "check", "3", "3", "6")
    assert json.loads(out) == {"triple": [3, 3, 6], "trace": 3, "is_markov": True}
    code, out, _ = run(capsys, "markov", "reduce", "3", "6", "15")
    data = json.loads(out)
    assert code == 0 and data["end"] == [3, 3, 3]
    code, _, _ = run(capsys, "markov", "reduce", "1", "1", "1")
    assert code == 1
    code, _, _ = run(capsys, "markov", "reduce", "0", "0", "0")
    assert code == 1


def test_cli_orbit(capsys, monkeypatch):
    code, out, _ = run(capsys, "orbit", "--inline", COLL, "--height-bound", "40")
    data = json.loads(out)
    assert code == 0 and data["reached_markov_canonical"] and data["truncated"]
    monkeypatch.setenv("SEMIORTHO_MAX_NODES", "4")
    code, out, _ = run(capsys, "orbit", "--inline", COLL,
                       "--height-bound", "1000000")
    assert json.loads(out)["orbit_size"] <= 4
    monkeypatch.setenv("SEMIORTHO_MAX_NODES", "zzz")
    code, _, _ = run(capsys, "orbit", "--inline", COLL)
    assert code == 1


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "braid")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert set(json.loads(out)["suites"]) == {"braid", "canonical", "markov", "sigma"}


def test_cli_deterministic_output(capsys):
    _, out1, _ = run(capsys, "k0", "gram", "-n", "4", "--basis", "adams")
    _, out2, _ = run(capsys, "k0", "gram", "-n", "4", "--basis", "adams")
    assert out1 == out2
    _, pretty, _ = run(capsys, "--output", "pretty", "markov", "check", "3", "3", "6")
    assert json.loads(pretty)["trace"] == 3


def test_cli_file_input(capsys, tmp_path):
    p = tmp_path / "lat.json"
    p.write_text(LAT)
    code, out, _ = run(capsys, "classify", "--file", str(p))
    assert code == 0 and json.loads(out)["verdict"]["type"] == "type1"
    code, _, _ = run(capsys, "classify", "--file", str(tmp_path / "missing.json"))
    assert code == 1
