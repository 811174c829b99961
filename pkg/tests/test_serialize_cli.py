import json
import os
import subprocess
import sys

import pytest

from toytheory import serialize
from toytheory.dynamics import cnot_gate
from toytheory.measurement import make_measurement
from toytheory.phase_space import discrete_space, rational_space
from toytheory.states import (
    bell_pair, make_state, ontic_support, states_equal, tensor, toy_bit,
)

SP2 = discrete_space(2, 2)


def _roundtrip_state(s):
    return serialize.state_from_json(json.loads(json.dumps(serialize.state_to_json(s))))


def test_state_roundtrip_discrete():
    for s in (toy_bit("0"), toy_bit("-i"), bell_pair(3),
              tensor(toy_bit("+"), toy_bit("1"))):
        assert _roundtrip_state(s) == s


def test_state_roundtrip_rational():
    sp = rational_space(1)
    s = make_state(sp, [(2, -1)], ("3", "1/2"))
    back = _roundtrip_state(s)
    assert back == s
    doc = serialize.state_to_json(s)
    assert doc["field"] == "rational"
    assert any(isinstance(x, str) and "/" in x
               for row in [doc["generators"][0], doc["valuation"]] for x in row)


def test_transform_roundtrip():
    t = cnot_gate(SP2, 0, 1)
    doc = json.loads(json.dumps(serialize.transform_to_json(t)))
    assert serialize.transform_from_json(doc) == t


def test_measurement_roundtrip():
    m = make_measurement(SP2, [(1, 0, 0, 0), (0, 0, 1, 0)])
    doc = json.loads(json.dumps(serialize.measurement_to_json(m)))
    assert serialize.measurement_from_json(doc) == m


def test_support_roundtrip():
    sup = ontic_support(bell_pair(2))
    doc = json.loads(json.dumps(serialize.support_to_json(sup)))
    assert serialize.support_from_json(doc) == sup


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _run(args, env_extra=None, stdin=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "toytheory.cli", *args],
        capture_output=True, text=True, env=env, input=stdin)


@pytest.fixture
def files(tmp_path):
    docs = {
        "plus.json": {"field": "prime", "d": 2, "n": 1,
                      "generators": [[0, 1]], "valuation": [0, 0]},
        "one.json": {"field": "prime", "d": 2, "n": 1,
                     "generators": [[1, 0]], "valuation": [1, 0]},
        "zero.json": {"field": "prime", "d": 2, "n": 1,
                      "generators": [[1, 0]], "valuation": [0, 0]},
        "plus_zero.json": {"field": "prime", "d": 2, "n": 2,
                           "generators": [[0, 1, 0, 0], [0, 0, 1, 0]],
                           "valuation": [0, 0, 0, 0]},
        "mz.json": {"observables": [[1, 0]]},
        "bad_support.json": {"field": "prime", "d": 2, "n": 1,
                             "support": [[0, 0], [0, 1], [1, 0]]},
        "nonisotropic.json": {"field": "prime", "d": 2, "n": 1,
                              "generators": [[1, 0], [0, 1]],
                              "valuation": [0, 0]},
        "bad_transform.json": {"U": [[1, 1], [1, 1]], "shift": [0, 0]},
        "mixed2.json": {"field": "prime", "d": 2, "n": 2,
                        "generators": [], "valuation": [0, 0, 0, 0]},
    }
    for name, doc in docs.items():
        (tmp_path / name).write_text(json.dumps(doc))
    return tmp_path


def test_cli_show_grid_golden(files):
    r = _run(["state", "show", str(files / "plus.json")])
    assert r.returncode == 0
    assert r.stdout.splitlines()[-1] == "#.#."


def test_cli_validate_bad_support_exit2(files):
    r = _run(["state", "validate", str(files / "bad_support.json")])
    assert r.returncode == 2
    assert "not a valid epistemic state" in r.stdout


def test_cli_validate_nonisotropic_exit2(files):
    r = _run(["state", "validate", str(files / "nonisotropic.json")])
    assert r.returncode == 2


def test_cli_missing_file_exit1(files):
    r = _run(["state", "show", str(files / "nope.json")])
    assert r.returncode == 1


def test_cli_tensor_and_marginal(files):
    r = _run(["--format", "json", "state", "tensor",
              str(files / "one.json"), str(files / "zero.json")])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    got = serialize.state_from_json(doc)
    assert states_equal(got, tensor(toy_bit("1"), toy_bit("0")))
    r = _run(["--format", "json", "state", "marginal",
              str(files / "plus_zero.json"), "--keep", "2"])
    assert states_equal(serialize.state_from_json(json.loads(r.stdout)),
                        toy_bit("0"))


def test_cli_mix_reports_invalid(files):
    r = _run(["state", "mix", str(files / "zero.json"),
              str(files / "plus.json")])
    assert r.returncode == 0
    assert "not a valid epistemic state" in r.stdout


def test_cli_evolve_gate_and_verify(files):
    r = _run(["--format", "json", "evolve", str(files / "plus_zero.json"),
              "--gate", "cnot:1,2", "--verify"])
    assert r.returncode == 0
    got = serialize.state_from_json(json.loads(r.stdout))
    assert states_equal(got, bell_pair(2))


def test_cli_evolve_rejects_nonsymplectic(files):
    r = _run(["evolve", str(files / "plus.json"),
              "--transform", str(files / "bad_transform.json")])
    assert r.returncode == 2


def test_cli_measure_with_outcome_and_verify(files):
    r = _run(["--format", "json", "measure", str(files / "plus.json"),
              str(files / "mz.json"), "--outcome", "0", "--verify"])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["probabilities"] == {"(0,)": "1/2", "(1,)": "1/2"}
    assert states_equal(serialize.state_from_json(doc["post_state"]),
                        toy_bit("0"))


def test_cli_measure_impossible_outcome_exit2(files):
    r = _run(["measure", str(files / "zero.json"), str(files / "mz.json"),
              "--outcome", "1"])
    assert r.returncode == 2


def test_cli_measure_sampling_deterministic(files):
    r1 = _run(["measure", str(files / "plus.json"), str(files / "mz.json"),
               "--sample", "--seed", "7"])
    r2 = _run(["measure", str(files / "plus.json"), str(files / "mz.json"),
               "--sample", "--seed", "7"])
    assert r1.returncode == r2.returncode == 0
    assert r1.stdout == r2.stdout


def test_cli_global_flags_after_subcommand(files):
    r = _run(["state", "show", str(files / "plus.json"), "--format", "json"])
    assert r.returncode == 0
    assert json.loads(r.stdout)["generators"] == [[0, 1]]


def test_cli_decimal_formatting(files):
    r = _run(["--decimal", "3", "measure", str(files / "plus.json"),
              str(files / "mz.json"), "--outcome", "0"])
    assert "0.500" in r.stdout


def test_cli_enum_cap_env_exit3(files):
    r = _run(["state", "mix", str(files / "mixed2.json"),
              str(files / "mixed2.json")], env_extra={"TOY_ENUM_CAP": "4"})
    assert r.returncode == 3


def test_cli_scenario_bell_and_condprep(files):
    r = _run(["scenario", "bell", "--d", "3"])
    assert r.returncode == 0 and "PASS" in r.stdout
    r = _run(["--format", "json", "scenario", "condprep-search",
              "--targets", "0,1"])
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["verdict"]["matches_no_go"] is True


def test_cli_scenario_fr_sampled(files):
    r = _run(["scenario", "fr-search", "--samples", "25", "--seed", "3"])
    assert r.returncode == 0
    assert "no_paradox_found: True" in r.stdout
