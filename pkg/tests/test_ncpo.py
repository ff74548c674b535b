"""Polynomial-optimization program emission and its parser."""

import pytest

from syncgames.builtins import magic_square
from syncgames.games import table_game
from syncgames.ncpo import game_to_ncpo, parse_ncpo

GOLDEN_SINGLE = """ncpo 1
game "single"
var A "q" "a"
var B "q" "a"
objective 1
term 1 A "q" "a" B "q" "a"
constraint selfadjoint A "q" "a"
constraint selfadjoint B "q" "a"
constraint psd A "q" "a"
constraint psd B "q" "a"
constraint completeness A "q"
constraint completeness B "q"
constraint commute "q" "a" "q" "a"
end
"""


class TestEmission:
    def test_single_question_golden(self):
        game = table_game("single", ["q"], {"q": ("a",)}, [], {})
        assert game_to_ncpo(game) == GOLDEN_SINGLE

    def test_magic_square_counts(self):
        game, _ = magic_square()
        text = game_to_ncpo(game)
        prog = parse_ncpo(text)
        # independent counting: 15 questions, 9 binary + 6 eight-outcome
        answers_total = 9 * 2 + 6 * 8
        assert len(prog.variables) == 2 * answers_total
        kinds = {}
        for c in prog.constraints:
            kinds[c[0]] = kinds.get(c[0], 0) + 1
        assert kinds["selfadjoint"] == 2 * answers_total
        assert kinds["psd"] == 2 * answers_total
        assert kinds["completeness"] == 2 * 15
        assert kinds["commute"] == answers_total**2
        accepted = sum(
            1
            for x in game.questions
            for y in game.questions
            for a in game.answers(x)
            for b in game.answers(y)
            if game.decide(x, y, a, b)
        )
        assert len(prog.objective) == accepted

    def test_four_constraint_families_present(self):
        game = table_game("single", ["q"], {"q": ("a",)}, [], {})
        prog = parse_ncpo(game_to_ncpo(game))
        assert {c[0] for c in prog.constraints} == {
            "selfadjoint",
            "psd",
            "completeness",
            "commute",
        }


class TestParser:
    def test_round_trip_identity(self):
        game, _ = magic_square()
        text = game_to_ncpo(game)
        assert parse_ncpo(text).render() == text

    def test_rejects_missing_header(self):
        with pytest.raises(ValueError):
            parse_ncpo("game x\nend\n")

    def test_rejects_term_count_mismatch(self):
        bad = GOLDEN_SINGLE.replace("objective 1", "objective 2")
        with pytest.raises(ValueError):
            parse_ncpo(bad)
