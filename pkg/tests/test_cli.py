"""Command-line surface: verbs, exit codes, reproducibility."""

import json
import os

import pytest

from syncgames.cli import run
from syncgames.cooklevin import always_accept_machine
from syncgames.serialize import dumps, machine_to_doc


@pytest.fixture
def ms_files(tmp_path):
    game = tmp_path / "ms.json"
    strategy = tmp_path / "honest.json"
    rc = run(
        [
            "game",
            "show",
            "--builtin",
            "magic_square",
            "--out",
            str(game),
            "--strategy-out",
            str(strategy),
        ]
    )
    assert rc == 0
    return game, strategy


def read(path):
    with open(path) as fh:
        return fh.read()


class TestGameShow:
    def test_document_round_trips(self, ms_files):
        game, _ = ms_files
        doc = json.loads(read(game))
        assert doc == {"builtin": {"kind": "magic_square"}}


class TestEval:
    def test_exact_honest_value(self, ms_files, tmp_path, capsys):
        game, strategy = ms_files
        out = tmp_path / "report.json"
        rc = run(["eval", "--game", str(game), "--strategy", str(strategy), "--out", str(out)])
        assert rc == 0
        doc = json.loads(read(out))
        assert abs(doc["value"] - 1.0) < 1e-10

    def test_sampled_requires_seed(self, ms_files):
        game, strategy = ms_files
        rc = run(["eval", "--game", str(game), "--strategy", str(strategy), "--sample", "100"])
        assert rc == 1

    def test_sampled_reproducible(self, ms_files, tmp_path):
        game, _ = ms_files
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            rc = run(
                [
                    "eval",
                    "--game",
                    str(game),
                    "--strategy",
                    "honest",
                    "--sample",
                    "500",
                    "--seed",
                    "9",
                    "--out",
                    str(out),
                ]
            )
            assert rc == 0
            outs.append(read(out))
        assert outs[0] == outs[1]

    def test_malformed_json_is_validation_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        rc = run(["eval", "--game", str(bad), "--strategy", "honest"])
        assert rc == 1


class TestRigidity:
    def test_honest_report(self, tmp_path):
        out = tmp_path / "resid.json"
        rc = run(["rigidity", "--kind", "ms", "--strategy", "honest", "--out", str(out)])
        assert rc == 0
        doc = json.loads(read(out))
        assert doc["max_residual"] <= 1e-10

    def test_qs_kind(self, tmp_path):
        out = tmp_path / "resid.json"
        rc = run(["rigidity", "--kind", "qs", "--n", "2", "--out", str(out)])
        assert rc == 0
        assert json.loads(read(out))["max_residual"] <= 1e-10


class TestTransform:
    def test_descriptor_and_lift(self, tmp_path):
        base = tmp_path / "base.json"
        base.write_text(dumps({"builtin": {"kind": "consistency", "l": 2}}))
        out = tmp_path / "intro.json"
        lift_out = tmp_path / "lift.json"
        rc = run(
            [
                "transform",
                "--transform",
                "introspect",
                "--base",
                str(base),
                "--out",
                str(out),
                "--lift",
                "honest",
                "--lift-out",
                str(lift_out),
            ]
        )
        assert rc == 0
        doc = json.loads(read(out))
        assert doc["transform"] == "introspect"
        lifted = json.loads(read(lift_out))
        assert lifted["dim"] == 32

    def test_answer_reduce_requires_T(self, tmp_path):
        base = tmp_path / "base.json"
        base.write_text(dumps({"builtin": {"kind": "consistency", "l": 2}}))
        rc = run(["transform", "--transform", "answer_reduce", "--base", str(base)])
        assert rc == 1

    def test_answer_reduce_descriptor(self, tmp_path):
        base = tmp_path / "base.json"
        base.write_text(dumps({"builtin": {"kind": "trivial", "l": 2}}))
        out = tmp_path / "ans.json"
        rc = run(
            [
                "transform",
                "--transform",
                "answer_reduce",
                "--base",
                str(base),
                "--T",
                "3",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        doc = json.loads(read(out))
        assert doc["params"] == {"T": 3}


class TestCooklevin:
    @pytest.fixture
    def machine_file(self, tmp_path):
        path = tmp_path / "machine.json"
        path.write_text(dumps(machine_to_doc(always_accept_machine())))
        return path

    def test_compile_dimacs(self, machine_file, tmp_path):
        out = tmp_path / "out.cnf"
        rc = run(
            ["cooklevin", "compile", "--machine", str(machine_file), "--T", "1", "--R", "1", "--out", str(out)]
        )
        assert rc == 0
        assert read(out).startswith("p cnf ")

    def test_clause_null_token(self, machine_file, tmp_path):
        out = tmp_path / "c.txt"
        rc = run(
            [
                "cooklevin",
                "clause",
                "--machine",
                str(machine_file),
                "--T",
                "1",
                "--R",
                "1",
                "--i",
                "1",
                "--j",
                "1",
                "--k",
                "1",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        assert read(out) == "null\n"

    def test_witness(self, machine_file, tmp_path):
        out = tmp_path / "w.json"
        rc = run(
            ["cooklevin", "witness", "--machine", str(machine_file), "--T", "2", "--w", "10", "--out", str(out)]
        )
        assert rc == 0
        doc = json.loads(read(out))
        assert doc["bits"][:2] == [1, 0]


class TestOptimizeCommands:
    def test_seesaw_requires_seed(self, ms_files):
        game, _ = ms_files
        rc = run(["seesaw", "--game", str(game), "--dim", "2"])
        assert rc == 2  # argparse usage error

    def test_seesaw_and_trace(self, tmp_path):
        base = tmp_path / "base.json"
        base.write_text(dumps({"builtin": {"kind": "consistency", "l": 2}}))
        out = tmp_path / "strategy.json"
        trace = tmp_path / "trace.csv"
        rc = run(
            [
                "seesaw",
                "--game",
                str(base),
                "--dim",
                "2",
                "--restarts",
                "2",
                "--iters",
                "10",
                "--seed",
                "1",
                "--out",
                str(out),
                "--trace",
                str(trace),
            ]
        )
        assert rc == 0
        assert json.loads(read(out))["value"] == pytest.approx(1.0, abs=1e-9)
        assert read(trace).splitlines()[0] == "restart,iteration,value"

    def test_classical(self, ms_files, tmp_path):
        game, _ = ms_files
        out = tmp_path / "classical.json"
        rc = run(["classical", "--game", str(game), "--out", str(out)])
        assert rc == 0
        assert json.loads(read(out))["value"] == pytest.approx(223 / 225, abs=1e-15)


class TestNcpo:
    def test_program_emission(self, ms_files, tmp_path):
        game, _ = ms_files
        out = tmp_path / "prog.txt"
        rc = run(["ncpo", "--game", str(game), "--out", str(out)])
        assert rc == 0
        text = read(out)
        assert text.startswith("ncpo 1\n") and text.endswith("end\n")

    def test_byte_identical_reruns(self, ms_files, tmp_path):
        game, _ = ms_files
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        assert run(["ncpo", "--game", str(game), "--out", str(a)]) == 0
        assert run(["ncpo", "--game", str(game), "--out", str(b)]) == 0
        assert read(a) == read(b)
