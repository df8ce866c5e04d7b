import io
import json

import numpy as np
import pytest

from deltaideal.cli import EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, build_parser, run
from deltaideal.spectral import icosphere, load_registry, write_off
from deltaideal.tensor_core import random_curvature_tensor


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    return code, json.loads(out) if out else None, err


def test_obstruct_projective_four_space():
    code, data, _ = call_json("obstruct", "sphere:4", "rp:4")
    assert code == EXIT_OK
    assert data["outcome"] == "NO_IDEAL_EMBEDDING"
    assert data["evidence"]["lambda1_cover"] == 4 and data["evidence"]["lambda1"] == 10


def test_coeff_table():
    code, data, _ = call_json("coeff", "--n", "5")
    rows = {tuple(r["partition"]): r for r in data["coefficients"]}
    assert code == EXIT_OK
    assert rows[(2,)]["c"] == 9.375 and rows[(2,)]["exact"] == "75/8"
    assert rows[()]["c"] == 10


def test_coeff_csv():
    code, out, _ = call("coeff", "--n", "4", "--format", "csv")
    assert out.splitlines()[0] == "partition,c,exact"
    assert '"(2,2)",4.0,4' in out


def test_delta_constant_model():
    code, data, _ = call_json("delta", "--model", "constant", "--n", "4", "--c0", "1", "--partition", "2")
    assert code == EXIT_OK
    assert data["value"] == pytest.approx(5.0, abs=1e-9)
    assert data["partition"] == [2] and data["converged"]
    assert "minimizer" not in data
    _, verbose, _ = call_json("delta", "--model", "constant", "--n", "4", "--partition", "2", "--verbose")
    assert np.asarray(verbose["minimizer"]).shape == (4, 4)


def test_delta_from_tensor_file(tmp_path, rng):
    R = random_curvature_tensor(4, rng)
    path = tmp_path / "t.json"
    path.write_text(json.dumps(R.to_json()))
    code, data, _ = call_json("delta", "--tensor", str(path), "--partition", "2", "2")
    assert code == EXIT_OK
    assert data["partition"] == [2, 2]


def test_delta_max():
    code, data, _ = call_json("delta-max", "--model", "constant", "--n", "3", "--c0", "1")
    assert code == EXIT_OK
    assert data["delta0"] == pytest.approx(1.0, abs=1e-9)
    assert data["partition"] == []
    assert len(data["table"]) == 2


def test_determinism_is_byte_exact():
    argv = ["delta-max", "--model", "constant", "--n", "4", "--c0", "0.5", "--seed", "7"]
    assert call(*argv)[1] == call(*argv)[1]


def test_seed_changes_nothing_observable_for_space_forms():
    a = call_json("delta", "--model", "constant", "--n", "3", "--partition", "2", "--seed", "1")[1]
    b = call_json("delta", "--model", "constant", "--n", "3", "--partition", "2", "--seed", "2")[1]
    assert a["value"] == pytest.approx(b["value"], abs=1e-9)


def test_floats_round_trip():
    _, out, _ = call("lambda1", "icosphere:1")
    value = json.loads(out)["result"]["lambda1"]
    assert repr(value) in out


def test_check_ideal_exit_codes():
    assert call_json("check-ideal", "sphere:3")[1]["outcome"] == "IDEAL_CAPABLE"
    code, data, _ = call_json("check-ideal", "flat-torus:2")
    assert code == EXIT_INCONCLUSIVE and data["outcome"] == "INCONCLUSIVE"
    assert call("check-ideal", "klein:2")[0] == EXIT_ERROR


def test_lambda1_registry_and_meshes(tmp_path):
    assert call_json("lambda1", "rp:3")[1]["lambda1"] == 8
    code, data, _ = call_json("lambda1", "icosphere:3", "--quotient", "antipodal")
    assert code == EXIT_OK
    assert data["pullback"]["holds"]
    assert abs(data["quotient"]["lambda1"] - 6) < 0.3
    path = tmp_path / "m.off"
    write_off(icosphere(2), path)
    code, data, _ = call_json("lambda1", str(path))
    assert abs(data["result"]["lambda1"] - 2) < 0.05
    assert call("lambda1", "tetrahedron", "--quotient", "antipodal")[0] == EXIT_ERROR


def test_verify_inequality_shapes():
    code, data, _ = call_json("verify-inequality", "--shape", "sphere", "--params", "3", "--points", "5")
    assert code == EXIT_OK
    assert data["ideality"]["ideal"] and not data["violated"]
    code, data, _ = call_json("verify-inequality", "--shape", "torus", "--points", "20")
    assert code == EXIT_OK and not data["ideality"]["ideal"] and data["min_slack"] > 0
    code, out, _ = call("verify-inequality", "--shape", "cylinder", "--points", "3", "--format", "csv")
    assert out.startswith("point,u,partition") and len(out.splitlines()) == 4


def test_verify_inequality_sampled(tmp_path):
    t, p = np.meshgrid(np.linspace(0.8, 2.2, 11), np.linspace(0.5, 1.5, 11), indexing="ij")
    grid = [[[a, b], [np.sin(a) * np.cos(b), np.sin(a) * np.sin(b), np.cos(a)]]
            for a, b in zip(t.ravel(), p.ravel())]
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"n": 2, "m": 3, "grid": grid}))
    code, data, _ = call_json("verify-inequality", "--sampled", str(path))
    assert code == EXIT_OK
    assert data["points"] == 49 and data["shape"] == "sampled"


def test_registry_override(tmp_path):
    reg = load_registry()
    records = [reg["sphere:3"].to_json(), {**reg["rp:3"].to_json(), "lambda1": 3.0}]
    path = tmp_path / "r.json"
    path.write_text(json.dumps(records))
    code, data, _ = call_json("obstruct", "sphere:3", "rp:3", "--registry", str(path))
    assert code == EXIT_INCONCLUSIVE
    assert data["outcome"] == "INCONCLUSIVE"


def test_global_flags_before_subcommand():
    code, out, _ = call("--format", "text", "check-ideal", "rp:2")
    assert code == EXIT_OK and "outcome: NO_IDEAL_EMBEDDING" in out


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["coeff"],
    ["coeff", "--n", "four"],
    ["delta", "--format", "yaml"],
    [],
])
def test_usage_errors_exit_64(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == EXIT_USAGE


def test_semantic_usage_errors_exit_64():
    code, _, err = call("delta", "--partition", "2")
    assert code == EXIT_USAGE and "--tensor" in err
    assert call("verify-inequality")[0] == EXIT_USAGE


def test_domain_errors_exit_1():
    code, _, err = call("delta", "--model", "constant", "--n", "3", "--partition", "3")
    assert code == EXIT_ERROR and err


def test_help_names_formulas():
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    helps = {name: p.format_help() for name, p in sub.choices.items()}
    assert set(helps) == {"delta", "delta-max", "coeff", "lambda1", "check-ideal", "obstruct",
                          "verify-inequality"}
    assert "tau - min" in helps["delta"]
    for action in sub._choices_actions:
        assert "=" in action.help, action.dest
