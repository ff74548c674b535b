"""Wire formats: JSON round trips, byte stability, DIMACS."""

import json

import numpy as np
import pytest

from syncgames.algebra import closeness
from syncgames.builtins import magic_square, two_of_n_ms
from syncgames.cooklevin import compile_cnf, equality_machine
from syncgames.games import value
from syncgames.serialize import (
    cnf_to_dimacs,
    dumps,
    game_from_doc,
    label_key,
    machine_from_doc,
    machine_to_doc,
    matrix_from_doc,
    matrix_to_doc,
    measurement_from_doc,
    measurement_to_doc,
    report_to_doc,
    residuals_to_doc,
    strategy_from_doc,
    strategy_to_doc,
)
from syncgames.rigidity import ms_residuals

from helpers import random_povm, rng_for


class TestPrimitives:
    def test_matrix_round_trip(self):
        rng = rng_for("ser", 0)
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        doc = matrix_to_doc(m)
        again = matrix_from_doc(json.loads(dumps(doc)))
        assert np.array_equal(again, m)

    def test_measurement_round_trip(self):
        m = random_povm(3, 4, rng_for("ser", 1))
        doc = measurement_to_doc(m)
        again = measurement_from_doc(json.loads(dumps(doc)))
        assert again.labels == m.labels
        assert closeness(again, m) == 0.0

    def test_seventeen_digit_floats(self):
        text = dumps({"x": 1 / 3})
        assert "0.33333333333333331" in text

    def test_byte_identical_dumps(self):
        game, strategy = magic_square()
        doc1 = dumps(strategy_to_doc(strategy))
        doc2 = dumps(strategy_to_doc(strategy))
        assert doc1 == doc2


class TestStrategyDocs:
    def test_round_trip_preserves_value(self):
        game, strategy = magic_square()
        doc = json.loads(dumps(strategy_to_doc(strategy)))
        again = strategy_from_doc(doc, game)
        assert value(game, again).value == pytest.approx(1.0, abs=1e-10)

    def test_tuple_question_keys(self):
        game, strategy = two_of_n_ms(2)
        qs = list(game.questions)[:3]
        doc = strategy_to_doc(strategy, qs)
        for q in qs:
            assert label_key(q) in doc["measurements"]


class TestGameDocs:
    def test_builtin_docs(self):
        for doc in (
            {"builtin": {"kind": "magic_square"}},
            {"builtin": {"kind": "two_of_n_ms", "n": 2}},
            {"builtin": {"kind": "question_sampling", "n": 2}},
            {"builtin": {"kind": "consistency", "l": 2}},
        ):
            game, honest = game_from_doc(doc)
            assert honest is not None
            assert game.question_count() > 0

    def test_table_doc(self):
        doc = {
            "table": {
                "name": "pairgame",
                "questions": ["x", "y"],
                "answers": {label_key("x"): [0, 1], label_key("y"): [0, 1]},
                "nontrivial_pairs": [["x", "y"]],
                "accept": {label_key(("x", "y")): [[0, 0], [1, 1]]},
            }
        }
        game, honest = game_from_doc(doc)
        assert honest is None
        assert game.nontrivial("x", "y")
        assert game.decide("x", "y", 0, 0)
        assert not game.decide("x", "y", 0, 1)

    def test_transform_doc_recursion(self):
        doc = {
            "transform": "introspect",
            "params": {},
            "base": {"builtin": {"kind": "consistency", "l": 2}},
        }
        game, _ = game_from_doc(doc)
        assert game.question_count() == 461

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            game_from_doc({"builtin": {"kind": "nope"}})


class TestReports:
    def test_report_doc(self):
        game, strategy = magic_square()
        report = value(game, strategy)
        doc = json.loads(dumps(report_to_doc(report)))
        assert doc["value"] == pytest.approx(1.0, abs=1e-10)
        assert len(doc["per_pair"]) == len(report.per_pair)

    def test_residual_doc(self):
        _, strategy = magic_square()
        doc = json.loads(dumps(residuals_to_doc(ms_residuals(strategy))))
        assert set(doc) == {"relations", "max_residual", "value_deficit"}


class TestDimacsAndMachines:
    def test_dimacs_header_and_shape(self):
        cnf = compile_cnf(equality_machine(), 3, 2)
        text = cnf_to_dimacs(cnf)
        lines = text.strip().split("\n")
        assert lines[0] == f"p cnf {cnf.num_vars} {len(cnf.clauses)}"
        assert all(line.endswith(" 0") for line in lines[1:])

    def test_machine_doc_round_trip(self):
        m = equality_machine()
        again = machine_from_doc(machine_to_doc(m))
        assert again.states == m.states
        assert again.transition == m.transition
