"""Games as noncommutative polynomial optimization programs.

The emitted program's finite-dimensional optimum equals the game's
quantum value: POVM variables per player, the winning probability as the
objective, and self-adjointness / positivity / completeness / cross
commutation as constraints.
"""

from collections import Counter

from syncgames import game_to_ncpo, magic_square, parse_ncpo, table_game

tiny = table_game(
    "matching_pair",
    ["x", "y"],
    {"x": (0, 1), "y": (0, 1)},
    [("x", "y")],
    {("x", "y"): [(0, 0), (1, 1)]},
)
text = game_to_ncpo(tiny)
print("program for a two-question matching game:")
print(text)

prog = parse_ncpo(text)
assert prog.render() == text
print("parser round trip: ok")

game, _ = magic_square()
prog = parse_ncpo(game_to_ncpo(game))
kinds = Counter(c[0] for c in prog.constraints)
print(f"\nMagic Square program: {len(prog.variables)} operator variables,")
print(f"  {len(prog.objective)} objective terms, constraints {dict(kinds)}")
