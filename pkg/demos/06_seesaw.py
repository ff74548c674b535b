"""See-saw search: the Magic Square optimum needs four dimensions.

Alternating exact binary updates with greedy multi-outcome updates climbs
to value 1 at dim 4 but visibly stalls below 1 at dim 2 and 3, matching
the dimension certificate (two independent anticommuting pairs need a
4-dimensional space).
"""

from syncgames import SeesawConfig, magic_square, seesaw

game, _ = magic_square()

for dim in (2, 3, 4):
    cfg = SeesawConfig(dim=dim, restarts=10, max_iters=120, seed=11)
    strategy, best, trace = seesaw(game, cfg)
    sweeps = max(it for _, it, _ in trace)
    print(f"dim {dim}: best value {best:.8f} "
          f"({cfg.restarts} restarts, up to {sweeps} sweeps)")

print("\nclassical optimum for scale: 223/225 =", 223 / 225)
