"""See-saw search, classical oracle, strategy perturbation."""

import itertools

import numpy as np
import pytest

from syncgames.algebra import Tolerance, closeness
from syncgames.builtins import MS_EQUATIONS, MS_QUESTIONS, magic_square
from syncgames.games import table_game, value
from syncgames.optimize import (
    SeesawConfig,
    _binary_update,
    classical_value,
    perturb_strategy,
    seesaw,
)

from helpers import rng_for


class TestSeesaw:
    def test_single_question_game(self):
        game = table_game("single", ["q"], {"q": (0, 1)}, [], {})
        cfg = SeesawConfig(dim=3, restarts=2, max_iters=5, seed=0)
        _, val, _ = seesaw(game, cfg)
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_monotone_within_restart(self):
        game, _ = magic_square()
        cfg = SeesawConfig(dim=4, restarts=3, max_iters=40, seed=5)
        _, _, trace = seesaw(game, cfg)
        per_restart = {}
        for r, it, v in trace:
            per_restart.setdefault(r, []).append(v)
        for vs in per_restart.values():
            for a, b in zip(vs, vs[1:]):
                assert b >= a - 1e-10

    def test_dim2_strictly_below_one(self):
        game, _ = magic_square()
        cfg = SeesawConfig(dim=2, restarts=8, max_iters=80, seed=7)
        _, val, _ = seesaw(game, cfg)
        assert val < 1 - 1e-3

    def test_returned_value_matches_strategy(self):
        game, _ = magic_square()
        cfg = SeesawConfig(dim=4, restarts=2, max_iters=30, seed=3)
        strategy, val, _ = seesaw(game, cfg)
        assert value(game, strategy).value == pytest.approx(val, abs=1e-10)


class TestBinaryUpdateOptimality:
    def test_against_rotation_sweep(self):
        # dimension-2 oracle: rank-1 projector family over a fine grid of
        # Bloch angles, plus the rank-0 and rank-2 endpoints
        rng = rng_for("binup", 0)
        for trial in range(10):
            c0 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            c0 = c0 + c0.conj().T
            c1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            c1 = c1 + c1.conj().T
            updated = _binary_update([c0, c1])
            achieved = np.trace(updated[0] @ c0).real + np.trace(updated[1] @ c1).real
            eye = np.eye(2)
            best = max(
                np.trace(eye @ c0).real,  # rank 2 on answer 0
                np.trace(eye @ c1).real,  # rank 0 on answer 0
            )
            for theta in np.linspace(0, np.pi, 181):
                for phi in np.linspace(0, 2 * np.pi, 181):
                    v = np.array(
                        [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]
                    )
                    p = np.outer(v, v.conj())
                    score = np.trace(p @ c0).real + np.trace((eye - p) @ c1).real
                    best = max(best, score)
            assert achieved >= best - 1e-6


class TestClassicalValue:
    def test_trivial_game(self):
        game = table_game("single", ["q"], {"q": (0,)}, [], {})
        val, assignment = classical_value(game)
        assert val == 1.0
        assert assignment == {"q": 0}

    def test_magic_square_below_one(self):
        game, _ = magic_square()
        val, _ = classical_value(game)
        assert val < 1

    def test_magic_square_matches_reduced_enumeration_oracle(self):
        """Independent oracle: enumerate the 2^9 variable assignments and
        optimize each equation over its four satisfying assignments.

        Dominance argument: an equation answer affects only the incidence
        pairs with its own three variables (all other pairs are trivial or
        diagonal), and an unsatisfying answer loses all of them, so some
        satisfying answer is always at least as good; given fixed variable
        bits the equations decouple, so per-equation maximization over
        satisfying answers is exact.
        """
        game, _ = magic_square()
        variables = [q for q in MS_QUESTIONS if q.startswith("s")]
        best_wins = -1
        for bits in itertools.product((0, 1), repeat=9):
            f = dict(zip(variables, bits))
            wins = 15 + (225 - 15 - 36)  # diagonal plus trivial pairs
            for eq, vs in MS_EQUATIONS.items():
                parity = 1 if eq == "c3" else 0
                best_eq = max(
                    sum(2 for v, bit in zip(vs, a) if f[v] == bit)
                    for a in itertools.product((0, 1), repeat=3)
                    if sum(a) % 2 == parity
                )
                wins += best_eq
            best_wins = max(best_wins, wins)
        oracle = best_wins / 225
        val, assignment = classical_value(game)
        assert val == oracle
        # the reported assignment actually attains the value
        wins = sum(
            bool(game.decide(x, y, assignment[x], assignment[y]))
            for x in game.questions
            for y in game.questions
        )
        assert wins / 225 == val

    def test_matches_brute_force_on_small_game(self):
        game = table_game(
            "toy",
            ["x", "y", "z"],
            {"x": (0, 1), "y": (0, 1), "z": (0, 1)},
            [("x", "y"), ("y", "z")],
            {("x", "y"): [(0, 1), (1, 0)], ("y", "z"): [(0, 0)]},
        )
        val, _ = classical_value(game)
        best = -1
        for bits in itertools.product((0, 1), repeat=3):
            f = dict(zip(["x", "y", "z"], bits))
            wins = sum(
                bool(game.decide(a, b, f[a], f[b]))
                for a in game.questions
                for b in game.questions
            )
            best = max(best, wins)
        assert val == best / 9

    def test_cap_enforced(self):
        game, _ = magic_square()
        with pytest.raises(ValueError):
            classical_value(game, cap=10)


class TestPerturbStrategy:
    def test_zero_magnitude_identity(self):
        _, strategy = magic_square()
        out = perturb_strategy(strategy, 0.0, seed=1)
        for q in strategy.question_labels():
            assert closeness(out.measurement(q), strategy.measurement(q)) == 0.0

    def test_small_perturbation_keeps_value_high(self):
        game, strategy = magic_square()
        out = perturb_strategy(strategy, 1e-3, seed=2)
        assert value(game, out).value >= 1 - 1e-4

    def test_deficit_monotone_in_magnitude(self):
        game, strategy = magic_square()
        deficits = []
        for magnitude in (1e-1, 1e-2, 1e-3, 1e-4):
            out = perturb_strategy(strategy, magnitude, seed=3)
            deficits.append(1 - value(game, out).value)
        assert deficits == sorted(deficits, reverse=True)

    def test_projectivity_preserved(self):
        _, strategy = magic_square()
        out = perturb_strategy(strategy, 0.3, seed=4)
        out.validate(Tolerance(1e-10))

    def test_negative_magnitude_rejected(self):
        _, strategy = magic_square()
        with pytest.raises(ValueError):
            perturb_strategy(strategy, -1.0, seed=0)
